#include "centrakit/topology.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "centrakit/community.hpp"
#include "centrakit/linalg.hpp"
#include "centrakit/util.hpp"

namespace centrakit {

namespace {

void require_connected(const Graph &g, const char *who) {
    if (g.node_count() == 0 || !g.is_connected())
        throw std::invalid_argument(std::string(who) + ": graph must be connected");
}

} // namespace

double density(const Graph &g) {
    const double n = static_cast<double>(g.node_count());
    if (n < 2)
        throw std::invalid_argument("density: need at least two nodes");
    return 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1.0));
}

std::optional<double> assortativity(const Graph &g) {
    const double e = static_cast<double>(g.edge_count());
    if (e == 0.0)
        return std::nullopt;
    double prod = 0.0, mean = 0.0, sq = 0.0;
    for (const Edge &edge : g.edges()) {
        const double a = g.strength(edge.u), b = g.strength(edge.v);
        prod += a * b;
        mean += 0.5 * (a + b);
        sq += 0.5 * (a * a + b * b);
    }
    prod /= e;
    mean /= e;
    sq /= e;
    const double denom = sq - mean * mean;
    // Relative guard: regular graphs give exactly zero in exact arithmetic.
    if (!(denom > 1e-12 * std::max(1.0, sq)))
        return std::nullopt;
    return (prod - mean * mean) / denom;
}

double clustering(const Graph &g) {
    const std::size_t n = g.node_count();
    if (n == 0)
        return 0.0;
    double max_w = 0.0;
    for (const Edge &e : g.edges())
        max_w = std::max(max_w, e.weight);

    double total = 0.0;
    for (NodeId i = 0; i < n; ++i) {
        const auto &nbrs = g.neighbors(i);
        const double d = static_cast<double>(nbrs.size());
        if (nbrs.size() < 2)
            continue;
        double tri = 0.0;
        for (std::size_t a = 0; a < nbrs.size(); ++a) {
            for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
                const auto w = g.weight(nbrs[a].node, nbrs[b].node);
                if (!w)
                    continue;
                if (g.weighted())
                    tri += std::cbrt((nbrs[a].weight / max_w) * (nbrs[b].weight / max_w) *
                                     (*w / max_w));
                else
                    tri += 1.0;
            }
        }
        total += 2.0 * tri / (d * (d - 1.0));
    }
    return total / static_cast<double>(n);
}

double global_efficiency(const Graph &g) {
    require_connected(g, "global_efficiency");
    const std::size_t n = g.node_count();
    if (n < 2)
        throw std::invalid_argument("global_efficiency: need at least two nodes");
    const Eigen::MatrixXd dist = shortest_path_lengths(g);
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    const double mean = 0.5 * dist.sum() / pairs;
    return 1.0 / mean;
}

double diffusion_efficiency(const Graph &g) {
    const Eigen::MatrixXd h = mean_first_passage_times(g);
    const auto n = h.rows();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j)
                sum += 1.0 / h(i, j);
    return sum / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double majorization_gap(const Graph &g) {
    if (g.edge_count() == 0)
        throw std::invalid_argument("majorization_gap: graph has no edges");
    const DegreeSequence seq = degree_sequence(g);
    long excess = 0;
    for (std::size_t k = 0; k < seq.degrees.size(); ++k)
        excess += std::max(seq.conjugate[k] - seq.degrees[k], 0L);
    return 0.5 * static_cast<double>(excess) / static_cast<double>(g.edge_count());
}

double spectral_gap(const Graph &g) {
    if (g.node_count() < 2)
        throw std::invalid_argument("spectral_gap: need at least two nodes");
    const SymmetricSpectrum s = symmetric_spectrum(g.adjacency_matrix());
    return 1.0 - s.values(1) / s.values(0);
}

TopologySummary summarize(const Graph &g, std::span<const std::size_t> modules) {
    require_connected(g, "summarize");
    TopologySummary t;
    auto guarded = [](auto &&fn) -> std::optional<double> {
        try {
            return fn();
        } catch (const std::exception &) {
            return std::nullopt;
        }
    };
    t.density = guarded([&] { return density(g); });
    t.assortativity = guarded([&] { return assortativity(g); });
    t.clustering = guarded([&] { return clustering(g); });
    t.global_efficiency = guarded([&] { return global_efficiency(g); });
    t.diffusion_efficiency = guarded([&] { return diffusion_efficiency(g); });
    if (!modules.empty())
        t.modularity = guarded([&] { return modularity_q(g, modules); });
    t.majorization_gap = guarded([&] { return majorization_gap(g); });
    t.spectral_gap = guarded([&] { return spectral_gap(g); });
    return t;
}

std::string topology_to_json(const TopologySummary &t) {
    nlohmann::json j;
    auto put = [&](const char *key, const std::optional<double> &v) {
        if (v && std::isfinite(*v))
            j[key] = round_significant(*v);
        else
            j[key] = nullptr;
    };
    put("density", t.density);
    put("assortativity", t.assortativity);
    put("clustering", t.clustering);
    put("global_efficiency", t.global_efficiency);
    put("diffusion_efficiency", t.diffusion_efficiency);
    put("modularity", t.modularity);
    put("majorization_gap", t.majorization_gap);
    put("spectral_gap", t.spectral_gap);
    return j.dump(2);
}

} // namespace centrakit
