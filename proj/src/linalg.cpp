#include "centrakit/linalg.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <queue>

namespace centrakit {

SymmetricSpectrum symmetric_spectrum(const Eigen::MatrixXd &m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success)
        throw NumericalError("symmetric eigensolver did not converge");
    // Eigen returns ascending order.
    SymmetricSpectrum s;
    s.values = solver.eigenvalues().reverse();
    s.vectors = solver.eigenvectors().rowwise().reverse();
    return s;
}

Eigen::MatrixXd symmetric_expm(const Eigen::MatrixXd &m) {
    if (m.rows() == 0)
        return m;
    const SymmetricSpectrum s = symmetric_spectrum(m);
    // exp(709.78) is the largest finite double; keep headroom for the row sums.
    constexpr double kMaxExponent = 700.0;
    if (s.values(0) > kMaxExponent)
        throw NumericalError("matrix exponential overflows: leading eigenvalue " +
                             std::to_string(s.values(0)));
    const Eigen::VectorXd expvals = s.values.array().exp();
    return s.vectors * expvals.asDiagonal() * s.vectors.transpose();
}

Eigen::MatrixXd reduced_adjacency(const Graph &g) {
    Eigen::MatrixXd w = g.adjacency_matrix();
    Eigen::VectorXd inv_sqrt(w.rows());
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        const double s = g.strength(static_cast<NodeId>(i));
        inv_sqrt(i) = s > 0.0 ? 1.0 / std::sqrt(s) : 0.0;
    }
    return inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal();
}

Eigen::MatrixXd communicability_base(const Graph &g) {
    return g.weighted() ? reduced_adjacency(g) : g.adjacency_matrix();
}

Eigen::MatrixXd shortest_path_lengths(const Graph &g) {
    const std::size_t n = g.node_count();
    constexpr double inf = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd dist = Eigen::MatrixXd::Constant(n, n, inf);

    if (!g.weighted()) {
        std::vector<NodeId> queue(n);
        for (NodeId s = 0; s < n; ++s) {
            dist(s, s) = 0.0;
            std::size_t head = 0, tail = 0;
            queue[tail++] = s;
            while (head < tail) {
                const NodeId u = queue[head++];
                for (const Neighbor &nb : g.neighbors(u)) {
                    if (dist(s, nb.node) == inf) {
                        dist(s, nb.node) = dist(s, u) + 1.0;
                        queue[tail++] = nb.node;
                    }
                }
            }
        }
        return dist;
    }

    using Item = std::pair<double, NodeId>;
    for (NodeId s = 0; s < n; ++s) {
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        dist(s, s) = 0.0;
        heap.emplace(0.0, s);
        while (!heap.empty()) {
            auto [d, u] = heap.top();
            heap.pop();
            if (d > dist(s, u))
                continue;
            for (const Neighbor &nb : g.neighbors(u)) {
                const double nd = d + 1.0 / nb.weight;
                if (nd < dist(s, nb.node)) {
                    dist(s, nb.node) = nd;
                    heap.emplace(nd, nb.node);
                }
            }
        }
    }
    return dist;
}

Eigen::VectorXd stationary_distribution(const Graph &g) {
    Eigen::VectorXd pi(g.node_count());
    for (NodeId i = 0; i < g.node_count(); ++i)
        pi(i) = g.strength(i);
    return pi / pi.sum();
}

Eigen::MatrixXd mean_first_passage_times(const Graph &g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    if (n < 2)
        throw std::invalid_argument("mean_first_passage_times: need at least two nodes");
    if (!g.is_connected())
        throw std::invalid_argument("mean_first_passage_times: graph is disconnected");

    Eigen::MatrixXd p = g.adjacency_matrix();
    for (Eigen::Index i = 0; i < n; ++i)
        p.row(i) /= g.strength(static_cast<NodeId>(i));
    const Eigen::VectorXd pi = stationary_distribution(g);

    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - p;
    m.rowwise() += pi.transpose();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14))
        throw NumericalError("fundamental matrix is singular (rcond " + std::to_string(rcond) + ")");
    const Eigen::MatrixXd z = lu.inverse();

    Eigen::MatrixXd h(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            h(i, j) = i == j ? 0.0 : (z(j, j) - z(i, j)) / pi(j);
    return h;
}

} // namespace centrakit
