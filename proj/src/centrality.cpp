#include "centrakit/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>

#include "centrakit/linalg.hpp"
#include "centrakit/util.hpp"

namespace centrakit {

namespace {

constexpr std::array<std::string_view, kMeasureCount> kNames = {
    "DC", "EC", "KC", "PR", "LC", "HC", "LAPC", "CC", "SC",
    "PC", "TCC", "RWCC", "IC", "BC", "CBC", "RWBC", "BridC",
};

std::vector<double> to_vector(const Eigen::VectorXd &v) {
    return {v.data(), v.data() + v.size()};
}

void require_connected(const Graph &g, const char *who) {
    if (g.node_count() == 0 || !g.is_connected())
        throw std::invalid_argument(std::string(who) + ": graph must be connected");
}

double leading_eigenvalue(const Graph &g) {
    return symmetric_spectrum(g.adjacency_matrix()).values(0);
}

} // namespace

std::string_view measure_name(Measure m) { return kNames[static_cast<std::size_t>(m)]; }

std::optional<Measure> measure_from_name(std::string_view name) {
    for (std::size_t k = 0; k < kMeasureCount; ++k)
        if (kNames[k] == name)
            return kAllMeasures[k];
    return std::nullopt;
}

void CentralityConfig::validate() const {
    if (!(katz_alpha_rule > 0.0 && katz_alpha_rule < 1.0))
        throw std::invalid_argument("katz alpha must lie strictly inside (0, 1/lambda_1); series "
                                    "diverges otherwise");
    if (!(pagerank_alpha > 0.0 && pagerank_alpha < 1.0))
        throw std::invalid_argument("pagerank alpha must lie in (0, 1)");
}

std::vector<double> degree(const Graph &g) { return g.strengths(); }

std::vector<double> eigenvector(const Graph &g) {
    require_connected(g, "eigenvector");
    const SymmetricSpectrum s = symmetric_spectrum(g.adjacency_matrix());
    Eigen::VectorXd v = s.vectors.col(0);
    if (v.sum() < 0.0)
        v = -v;
    v = v.cwiseMax(0.0);
    v.normalize();
    return to_vector(v);
}

std::vector<double> katz(const Graph &g, const CentralityConfig &config) {
    config.validate();
    require_connected(g, "katz");
    const double alpha = config.katz_alpha_rule / leading_eigenvalue(g);
    const auto n = static_cast<Eigen::Index>(g.node_count());
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - alpha * g.adjacency_matrix();
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw NumericalError("katz: I - alpha*A is not positive definite");
    return to_vector(llt.solve(Eigen::VectorXd::Constant(n, config.katz_beta)));
}

std::vector<double> pagerank(const Graph &g, const CentralityConfig &config) {
    config.validate();
    require_connected(g, "pagerank");
    const auto n = static_cast<Eigen::Index>(g.node_count());
    if (n < 2)
        throw std::invalid_argument("pagerank: need at least two nodes");
    // PR = alpha * W S^-1 PR + beta
    Eigen::MatrixXd m = -config.pagerank_alpha * g.adjacency_matrix();
    for (Eigen::Index j = 0; j < n; ++j)
        m.col(j) /= g.strength(static_cast<NodeId>(j));
    m.diagonal().array() += 1.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    if (!(lu.rcond() > 1e-14))
        throw NumericalError("pagerank: singular system");
    return to_vector(lu.solve(Eigen::VectorXd::Constant(n, config.pagerank_beta)));
}

std::vector<double> leverage(const Graph &g) {
    const std::size_t n = g.node_count();
    if (n < 2)
        throw std::invalid_argument("leverage: need at least two nodes");
    std::vector<double> out(n, 0.0);
    for (NodeId i = 0; i < n; ++i) {
        const double si = g.strength(i);
        if (si == 0.0)
            continue;
        double sum = 0.0;
        for (const Neighbor &nb : g.neighbors(i)) {
            const double sj = g.strength(nb.node);
            sum += (si - sj) / (si + sj);
        }
        out[i] = sum / si;
    }
    return out;
}

std::vector<double> h_index(const Graph &g) {
    const std::size_t n = g.node_count();
    std::vector<double> out(n, 0.0);
    for (NodeId i = 0; i < n; ++i) {
        // Strength in weighted mode, compared against integer thresholds.
        std::vector<double> nbr;
        for (const Neighbor &nb : g.neighbors(i))
            nbr.push_back(g.strength(nb.node));
        std::sort(nbr.begin(), nbr.end(), std::greater<>());
        std::size_t best = 0;
        for (std::size_t h = 1; h <= nbr.size(); ++h) {
            // Sorted descending: at least h neighbours reach h iff the h-th largest does.
            if (nbr[h - 1] >= static_cast<double>(h))
                best = h;
        }
        out[i] = static_cast<double>(best);
    }
    return out;
}

std::vector<double> laplacian_centrality(const Graph &g) {
    const std::size_t n = g.node_count();
    std::vector<double> out(n, 0.0);
    if (!g.weighted()) {
        for (NodeId i = 0; i < n; ++i) {
            const double d = static_cast<double>(g.degree(i));
            double sum = 0.0;
            for (const Neighbor &nb : g.neighbors(i))
                sum += static_cast<double>(g.degree(nb.node));
            out[i] = d * d + d + 2.0 * sum;
        }
        return out;
    }
    // 4 NW2C + 2 NW2E + 2 NW2M: closed 2-walks, 2-walks ending at i, 2-walks through i.
    for (NodeId i = 0; i < n; ++i) {
        const double si = g.strength(i);
        double closed = 0.0, end = 0.0;
        for (const Neighbor &nb : g.neighbors(i)) {
            closed += nb.weight * nb.weight;
            end += nb.weight * (g.strength(nb.node) - nb.weight);
        }
        const double middle = 0.5 * (si * si - closed);
        out[i] = 4.0 * closed + 2.0 * end + 2.0 * middle;
    }
    return out;
}

std::vector<double> closeness(const Graph &g) {
    require_connected(g, "closeness");
    const Eigen::MatrixXd dist = shortest_path_lengths(g);
    const double n = static_cast<double>(g.node_count());
    std::vector<double> out(g.node_count());
    for (NodeId i = 0; i < g.node_count(); ++i) {
        const double total = dist.row(static_cast<Eigen::Index>(i)).sum();
        out[i] = total > 0.0 ? n / total : 0.0;
    }
    return out;
}

std::vector<double> subgraph_centrality(const Graph &g) {
    return to_vector(symmetric_expm(communicability_base(g)).diagonal());
}

std::vector<double> total_communicability(const Graph &g) {
    return to_vector(symmetric_expm(communicability_base(g)).colwise().sum().transpose());
}

std::vector<double> random_walk_closeness(const Graph &g) {
    require_connected(g, "random_walk_closeness");
    const Eigen::MatrixXd h = mean_first_passage_times(g);
    const double n = static_cast<double>(g.node_count());
    return to_vector((n / h.colwise().sum().array()).matrix().transpose());
}

std::vector<double> information_centrality(const Graph &g) {
    require_connected(g, "information_centrality");
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::MatrixXd m = -g.adjacency_matrix();
    for (Eigen::Index i = 0; i < n; ++i)
        m(i, i) = g.strength(static_cast<NodeId>(i));
    m.array() += 1.0;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw NumericalError("information_centrality: L + J is singular (disconnected input?)");
    const Eigen::MatrixXd c = llt.solve(Eigen::MatrixXd::Identity(n, n));
    const double trace = c.trace();
    const Eigen::VectorXd rowsum = c.rowwise().sum();
    std::vector<double> out(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            1.0 / (c(i, i) + (trace - 2.0 * rowsum(i)) / static_cast<double>(n));
    return out;
}

std::vector<double> betweenness(const Graph &g) {
    require_connected(g, "betweenness");
    const std::size_t n = g.node_count();
    std::vector<double> bc(n, 0.0);
    std::vector<double> sigma(n), delta(n), dist(n);
    std::vector<std::vector<NodeId>> preds(n);
    std::vector<NodeId> order;
    constexpr double inf = std::numeric_limits<double>::infinity();
    // Relative slack when comparing weighted path lengths.
    constexpr double eps = 1e-12;

    for (NodeId s = 0; s < n; ++s) {
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        std::fill(dist.begin(), dist.end(), inf);
        for (auto &p : preds)
            p.clear();
        order.clear();
        sigma[s] = 1.0;
        dist[s] = 0.0;

        if (!g.weighted()) {
            std::queue<NodeId> queue;
            queue.push(s);
            while (!queue.empty()) {
                const NodeId v = queue.front();
                queue.pop();
                order.push_back(v);
                for (const Neighbor &nb : g.neighbors(v)) {
                    const NodeId w = nb.node;
                    if (dist[w] == inf) {
                        dist[w] = dist[v] + 1.0;
                        queue.push(w);
                    }
                    if (dist[w] == dist[v] + 1.0) {
                        sigma[w] += sigma[v];
                        preds[w].push_back(v);
                    }
                }
            }
        } else {
            using Item = std::pair<double, NodeId>;
            std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
            std::vector<bool> done(n, false);
            heap.emplace(0.0, s);
            while (!heap.empty()) {
                auto [d, v] = heap.top();
                heap.pop();
                if (done[v])
                    continue;
                done[v] = true;
                order.push_back(v);
                for (const Neighbor &nb : g.neighbors(v)) {
                    const NodeId w = nb.node;
                    if (done[w])
                        continue;
                    const double nd = d + 1.0 / nb.weight;
                    const double slack = eps * std::max(1.0, nd);
                    if (nd < dist[w] - slack) {
                        dist[w] = nd;
                        sigma[w] = sigma[v];
                        preds[w].assign(1, v);
                        heap.emplace(nd, w);
                    } else if (std::abs(nd - dist[w]) <= slack) {
                        sigma[w] += sigma[v];
                        preds[w].push_back(v);
                    }
                }
            }
        }

        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const NodeId w = *it;
            for (NodeId v : preds[w])
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s)
                bc[w] += delta[w];
        }
    }
    // Each unordered pair was counted from both endpoints.
    for (double &x : bc)
        x *= 0.5;
    return bc;
}

std::vector<double> random_walk_betweenness(const Graph &g) {
    require_connected(g, "random_walk_betweenness");
    const std::size_t n = g.node_count();
    if (n < 2)
        throw std::invalid_argument("random_walk_betweenness: need at least two nodes");
    const auto ni = static_cast<Eigen::Index>(n);

    // T: inverse of the Laplacian with node 0 grounded, padded with a zero row/column.
    Eigen::MatrixXd lap = -g.adjacency_matrix();
    for (Eigen::Index i = 0; i < ni; ++i)
        lap(i, i) = g.strength(static_cast<NodeId>(i));
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(ni, ni);
    if (n > 1) {
        Eigen::LLT<Eigen::MatrixXd> llt(lap.bottomRightCorner(ni - 1, ni - 1));
        if (llt.info() != Eigen::Success)
            throw NumericalError("random_walk_betweenness: grounded Laplacian is singular");
        t.bottomRightCorner(ni - 1, ni - 1) =
            llt.solve(Eigen::MatrixXd::Identity(ni - 1, ni - 1));
    }

    std::vector<double> total(n, 0.0);
    std::vector<double> through(n);
    for (NodeId p = 0; p < n; ++p) {
        for (NodeId q = p + 1; q < n; ++q) {
            std::fill(through.begin(), through.end(), 0.0);
            const auto pi = static_cast<Eigen::Index>(p), qi = static_cast<Eigen::Index>(q);
            for (const Edge &e : g.edges()) {
                const auto u = static_cast<Eigen::Index>(e.u), v = static_cast<Eigen::Index>(e.v);
                const double flow = e.weight * std::abs(t(u, pi) - t(u, qi) - t(v, pi) + t(v, qi));
                through[e.u] += 0.5 * flow;
                through[e.v] += 0.5 * flow;
            }
            for (NodeId i = 0; i < n; ++i)
                total[i] += (i == p || i == q) ? 1.0 : through[i];
        }
    }
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    for (double &x : total)
        x /= pairs;
    return total;
}

std::vector<double> communicability_betweenness(const Graph &g) {
    const std::size_t n = g.node_count();
    if (n < 3)
        throw std::invalid_argument("communicability_betweenness: need at least three nodes");
    const auto ni = static_cast<Eigen::Index>(n);
    const Eigen::MatrixXd base = communicability_base(g);
    const Eigen::MatrixXd full = symmetric_expm(base);
    const double norm = static_cast<double>((n - 1) * (n - 1) - (n - 1));

    std::vector<double> out(n, 0.0);
    for (Eigen::Index i = 0; i < ni; ++i) {
        Eigen::MatrixXd removed = base;
        removed.row(i).setZero();
        removed.col(i).setZero();
        const Eigen::MatrixXd without = symmetric_expm(removed);
        double sum = 0.0;
        for (Eigen::Index p = 0; p < ni; ++p) {
            if (p == i)
                continue;
            for (Eigen::Index q = 0; q < ni; ++q) {
                if (q == i || q == p)
                    continue;
                sum += (full(p, q) - without(p, q)) / full(p, q);
            }
        }
        out[static_cast<std::size_t>(i)] = sum / norm;
    }
    return out;
}

std::vector<double> bridging_centrality(const Graph &g) {
    std::vector<double> out = betweenness(g);
    for (NodeId i = 0; i < g.node_count(); ++i) {
        double inv_sum = 0.0;
        for (const Neighbor &nb : g.neighbors(i))
            inv_sum += 1.0 / g.strength(nb.node);
        const double coefficient = inv_sum > 0.0 ? (1.0 / g.strength(i)) / inv_sum : 0.0;
        out[i] *= coefficient;
    }
    return out;
}

std::vector<double> participation_coefficient(const Graph &g, std::span<const std::size_t> modules) {
    const std::size_t n = g.node_count();
    if (modules.size() != n)
        throw std::invalid_argument("participation_coefficient: partition covers " +
                                    std::to_string(modules.size()) + " nodes, graph has " +
                                    std::to_string(n));
    std::vector<double> out(n, 0.0);
    std::vector<double> per_module;
    for (NodeId i = 0; i < n; ++i) {
        const double si = g.strength(i);
        if (si == 0.0)
            continue;
        per_module.clear();
        for (const Neighbor &nb : g.neighbors(i)) {
            const std::size_t m = modules[nb.node];
            if (per_module.size() <= m)
                per_module.resize(m + 1, 0.0);
            per_module[m] += nb.weight;
        }
        double sq = 0.0;
        for (double x : per_module)
            sq += (x / si) * (x / si);
        out[i] = 1.0 - sq;
    }
    return out;
}

// ---------------------------------------------------------------------------

CentralityProfile compute_profile(const Graph &g, std::span<const std::size_t> modules,
                                  const ProfileOptions &options) {
    options.config.validate();
    require_connected(g, "compute_profile");
    const std::size_t n = g.node_count();

    CentralityProfile profile;
    profile.weighted = g.weighted();
    profile.scores = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), kMeasureCount);

    auto wanted = [&](Measure m) {
        if (options.skip_expensive && (m == Measure::CBC || m == Measure::RWBC))
            return false;
        return options.include.empty() ||
               std::find(options.include.begin(), options.include.end(), m) !=
                   options.include.end();
    };

    auto compute = [&](Measure m) -> std::vector<double> {
        switch (m) {
        case Measure::DC: return degree(g);
        case Measure::EC: return eigenvector(g);
        case Measure::KC: return katz(g, options.config);
        case Measure::PR: return pagerank(g, options.config);
        case Measure::LC: return leverage(g);
        case Measure::HC: return h_index(g);
        case Measure::LAPC: return laplacian_centrality(g);
        case Measure::CC: return closeness(g);
        case Measure::SC: return subgraph_centrality(g);
        case Measure::PC: return participation_coefficient(g, modules);
        case Measure::TCC: return total_communicability(g);
        case Measure::RWCC: return random_walk_closeness(g);
        case Measure::IC: return information_centrality(g);
        case Measure::BC: return betweenness(g);
        case Measure::CBC: return communicability_betweenness(g);
        case Measure::RWBC: return random_walk_betweenness(g);
        case Measure::BridC: return bridging_centrality(g);
        }
        return {};
    };

    parallel_for(kMeasureCount, [&](std::size_t k) {
        const Measure m = kAllMeasures[k];
        if (!wanted(m)) {
            profile.notes[k] = "skipped";
            return;
        }
        if (m == Measure::PC && modules.empty()) {
            profile.notes[k] = "no partition supplied";
            return;
        }
        try {
            const std::vector<double> scores = compute(m);
            const bool finite = std::all_of(scores.begin(), scores.end(),
                                            [](double x) { return std::isfinite(x); });
            if (!finite) {
                profile.notes[k] = "non-finite scores";
                return;
            }
            for (std::size_t i = 0; i < n; ++i)
                profile.scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                    scores[i];
            profile.defined[k] = true;
        } catch (const std::exception &e) {
            profile.notes[k] = e.what();
        }
    });
    return profile;
}

std::string profile_to_csv(const Graph &g, const CentralityProfile &profile) {
    std::ostringstream out;
    out << "node";
    for (Measure m : kAllMeasures)
        out << ',' << measure_name(m);
    out << '\n';
    for (NodeId i = 0; i < profile.node_count(); ++i) {
        out << g.label(i);
        for (std::size_t k = 0; k < kMeasureCount; ++k) {
            out << ',';
            if (profile.defined[k])
                out << format_number(
                    profile.scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
        }
        out << '\n';
    }
    return out.str();
}

} // namespace centrakit
