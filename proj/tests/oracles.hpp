#pragma once

// Brute-force reference computations. Nothing here calls into the library's numerical paths:
// each oracle recomputes its quantity from the raw adjacency by a different route.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "centrakit/graph.hpp"

namespace oracle {

using centrakit::Graph;
using centrakit::NodeId;

/// Betweenness over unordered pairs by enumerating every simple path and keeping the shortest.
inline std::vector<double> betweenness_by_enumeration(const Graph &g) {
    const std::size_t n = g.node_count();
    std::vector<double> bc(n, 0.0);
    for (NodeId p = 0; p < n; ++p) {
        for (NodeId q = p + 1; q < n; ++q) {
            std::vector<std::vector<NodeId>> paths;
            std::vector<NodeId> stack{p};
            std::vector<bool> on(n, false);
            on[p] = true;
            std::function<void(NodeId)> dfs = [&](NodeId u) {
                if (u == q) {
                    paths.push_back(stack);
                    return;
                }
                for (const auto &nb : g.neighbors(u)) {
                    if (on[nb.node])
                        continue;
                    on[nb.node] = true;
                    stack.push_back(nb.node);
                    dfs(nb.node);
                    stack.pop_back();
                    on[nb.node] = false;
                }
            };
            dfs(p);
            std::size_t shortest = SIZE_MAX;
            for (const auto &path : paths)
                shortest = std::min(shortest, path.size());
            std::vector<double> through(n, 0.0);
            double count = 0.0;
            for (const auto &path : paths) {
                if (path.size() != shortest)
                    continue;
                count += 1.0;
                for (std::size_t k = 1; k + 1 < path.size(); ++k)
                    through[path[k]] += 1.0;
            }
            for (NodeId i = 0; i < n; ++i)
                bc[i] += through[i] / count;
        }
    }
    return bc;
}

/// sum_{k <= terms} M^k / k!
inline Eigen::MatrixXd exp_series(const Eigen::MatrixXd &m, int terms = 30) {
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    Eigen::MatrixXd sum = term;
    for (int k = 1; k <= terms; ++k) {
        term = term * m / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

/// Mean first-passage times by solving the absorbing system h = 1 + P h (h_target = 0) once
/// per target.
inline Eigen::MatrixXd hitting_times_absorbing(const Graph &g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::MatrixXd p = g.adjacency_matrix();
    for (Eigen::Index i = 0; i < n; ++i)
        p.row(i) /= p.row(i).sum();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index target = 0; target < n; ++target) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - p;
        Eigen::VectorXd rhs = Eigen::VectorXd::Ones(n);
        m.row(target).setZero();
        m(target, target) = 1.0;
        rhs(target) = 0.0;
        const Eigen::VectorXd x = m.fullPivLu().solve(rhs);
        h.col(target) = x;
    }
    return h;
}

/// Monte-Carlo mean hitting time from `source` to `target` over `walks` simulated walks.
inline double hitting_time_monte_carlo(const Graph &g, NodeId source, NodeId target,
                                       std::size_t walks, std::mt19937_64 &rng) {
    double total = 0.0;
    for (std::size_t w = 0; w < walks; ++w) {
        NodeId at = source;
        std::size_t steps = 0;
        while (at != target) {
            const auto &nbrs = g.neighbors(at);
            std::uniform_int_distribution<std::size_t> pick(0, nbrs.size() - 1);
            at = nbrs[pick(rng)].node;
            ++steps;
        }
        total += static_cast<double>(steps);
    }
    return total / static_cast<double>(walks);
}

/// Katz by fixed-point iteration x <- alpha A x + beta.
inline Eigen::VectorXd katz_iterate(const Eigen::MatrixXd &a, double alpha, double beta) {
    Eigen::VectorXd x = Eigen::VectorXd::Constant(a.rows(), beta);
    for (int it = 0; it < 100000; ++it) {
        Eigen::VectorXd next = alpha * (a * x);
        next.array() += beta;
        if ((next - x).norm() < 1e-13 * next.norm()) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

/// Current-flow throughput by solving Kirchhoff's equations with the Laplacian pseudo-inverse
/// for every pair, unit current in at p, out at q.
inline std::vector<double> current_flow_betweenness(const Graph &g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    const Eigen::MatrixXd a = g.adjacency_matrix();
    Eigen::MatrixXd lap = -a;
    for (Eigen::Index i = 0; i < n; ++i)
        lap(i, i) = a.row(i).sum();
    const Eigen::MatrixXd pinv = lap.completeOrthogonalDecomposition().pseudoInverse();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
            Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
            b(p) = 1.0;
            b(q) = -1.0;
            const Eigen::VectorXd v = pinv * b;
            for (Eigen::Index i = 0; i < n; ++i) {
                double flow = 0.0;
                if (i == p || i == q) {
                    flow = 1.0;
                } else {
                    for (Eigen::Index j = 0; j < n; ++j)
                        flow += 0.5 * a(i, j) * std::abs(v(i) - v(j));
                }
                out[static_cast<std::size_t>(i)] += flow;
            }
        }
    }
    for (double &x : out)
        x /= 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return out;
}

/// Pearson correlation of average ranks, ranks computed by counting (O(n^2)).
inline double spearman_by_counting(const std::vector<double> &x, const std::vector<double> &y) {
    auto ranks = [](const std::vector<double> &v) {
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            double less = 0, equal = 0;
            for (double w : v) {
                less += w < v[i];
                equal += w == v[i];
            }
            r[i] = less + (equal + 1.0) / 2.0;
        }
        return r;
    };
    const auto rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += rx[i] / n;
        my += ry[i] / n;
    }
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

/// Modularity as the literal double sum over node pairs.
inline double modularity_double_sum(const Graph &g, const std::vector<std::size_t> &modules) {
    const Eigen::MatrixXd a = g.adjacency_matrix();
    const Eigen::VectorXd k = a.rowwise().sum();
    const double two_m = k.sum();
    double q = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (modules[static_cast<std::size_t>(i)] == modules[static_cast<std::size_t>(j)])
                q += a(i, j) - k(i) * k(j) / two_m;
    return q / two_m;
}

} // namespace oracle
