#include "centrakit/surrogate.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include <json.hpp>

#include "centrakit/util.hpp"

namespace centrakit {

namespace {

using Pair = std::pair<NodeId, NodeId>;

Pair ordered(NodeId a, NodeId b) { return a < b ? Pair{a, b} : Pair{b, a}; }

/// Mutable simple graph used during rewiring.
class Rewirer {
public:
    explicit Rewirer(const Graph &g) : adj_(g.node_count()), mark_(g.node_count(), 0) {
        for (const Edge &e : g.edges()) {
            edges_.emplace_back(e.u, e.v);
            adj_[e.u].push_back(e.v);
            adj_[e.v].push_back(e.u);
        }
        for (auto &a : adj_)
            std::sort(a.begin(), a.end());
    }

    bool has(NodeId a, NodeId b) const { return std::binary_search(adj_[a].begin(), adj_[a].end(), b); }

    /// Proposes one swap on edges i and j; returns whether it was applied.
    bool try_swap(std::size_t i, std::size_t j, bool flip) {
        auto [a, b] = edges_[i];
        auto [c, d] = edges_[j];
        if (flip)
            std::swap(c, d);
        // (a-b, c-d) -> (a-d, c-b)
        if (a == c || a == d || b == c || b == d)
            return false;
        if (has(a, d) || has(c, b))
            return false;
        remove(a, b);
        remove(c, d);
        add(a, d);
        add(c, b);
        if (!reaches(a, b)) {
            remove(a, d);
            remove(c, b);
            add(a, b);
            add(c, d);
            return false;
        }
        edges_[i] = ordered(a, d);
        edges_[j] = ordered(c, b);
        return true;
    }

    const std::vector<Pair> &edges() const { return edges_; }

private:
    void add(NodeId a, NodeId b) {
        adj_[a].insert(std::lower_bound(adj_[a].begin(), adj_[a].end(), b), b);
        adj_[b].insert(std::lower_bound(adj_[b].begin(), adj_[b].end(), a), a);
    }
    void remove(NodeId a, NodeId b) {
        adj_[a].erase(std::lower_bound(adj_[a].begin(), adj_[a].end(), b));
        adj_[b].erase(std::lower_bound(adj_[b].begin(), adj_[b].end(), a));
    }

    bool reaches(NodeId from, NodeId to) {
        ++stamp_;
        if (stamp_ == 0) {
            std::fill(mark_.begin(), mark_.end(), 0);
            stamp_ = 1;
        }
        queue_.clear();
        queue_.push_back(from);
        mark_[from] = stamp_;
        for (std::size_t head = 0; head < queue_.size(); ++head) {
            for (NodeId w : adj_[queue_[head]]) {
                if (mark_[w] == stamp_)
                    continue;
                if (w == to)
                    return true;
                mark_[w] = stamp_;
                queue_.push_back(w);
            }
        }
        return false;
    }

    std::vector<Pair> edges_;
    std::vector<std::vector<NodeId>> adj_;
    std::vector<std::uint32_t> mark_;
    std::uint32_t stamp_ = 0;
    std::vector<NodeId> queue_;
};

struct Rewired {
    std::vector<Pair> edges;
    std::size_t swaps = 0, target = 0, attempts = 0;
};

Rewired rewire(const Graph &g, std::mt19937_64 &rng, std::size_t rewires_per_edge) {
    if (g.node_count() == 0 || !g.is_connected())
        throw std::invalid_argument("constrained_surrogate: graph must be connected");
    Rewirer r(g);
    Rewired out;
    const std::size_t e = g.edge_count();
    out.target = rewires_per_edge * e;
    const std::size_t cap = 10 * out.target;
    if (e >= 2) {
        std::uniform_int_distribution<std::size_t> pick(0, e - 1);
        std::bernoulli_distribution coin(0.5);
        while (out.swaps < out.target && out.attempts < cap) {
            ++out.attempts;
            const std::size_t i = pick(rng), j = pick(rng);
            const bool flip = coin(rng);
            if (i != j && r.try_swap(i, j, flip))
                ++out.swaps;
        }
    }
    out.edges = r.edges();
    return out;
}

/// Squared strength error after exchanging the weights of edges i and j.
double exchange_delta(const std::vector<Pair> &edges, const std::vector<double> &w,
                      const std::vector<double> &s, const std::vector<double> &goal, std::size_t i,
                      std::size_t j) {
    const double dw = w[j] - w[i];
    // Node changes: endpoints of i gain dw, endpoints of j lose dw (shared endpoints cancel).
    NodeId nodes[4] = {edges[i].first, edges[i].second, edges[j].first, edges[j].second};
    double change[4] = {dw, dw, -dw, -dw};
    double delta = 0.0;
    for (int k = 0; k < 4; ++k) {
        double c = 0.0;
        bool seen = false;
        for (int m = 0; m < k; ++m)
            seen = seen || nodes[m] == nodes[k];
        if (seen)
            continue;
        for (int m = k; m < 4; ++m)
            if (nodes[m] == nodes[k])
                c += change[m];
        const double before = s[nodes[k]] - goal[nodes[k]];
        const double after = before + c;
        delta += after * after - before * before;
    }
    return delta;
}

} // namespace

const char *surrogate_kind_name(SurrogateKind kind) {
    return kind == SurrogateKind::Unconstrained ? "unconstrained" : "constrained";
}

Graph unconstrained_surrogate(std::size_t n, std::size_t e,
                              const std::optional<std::vector<double>> &weights,
                              std::uint64_t seed) {
    if (n < 2)
        throw std::invalid_argument("unconstrained_surrogate: need at least two nodes");
    const std::size_t max_e = n * (n - 1) / 2;
    if (e < n - 1 || e > max_e)
        throw std::invalid_argument("unconstrained_surrogate: edge count " + std::to_string(e) +
                                    " outside [" + std::to_string(n - 1) + ", " +
                                    std::to_string(max_e) + "]");
    if (weights && weights->size() != e)
        throw std::invalid_argument("unconstrained_surrogate: weight count differs from e");

    std::mt19937_64 rng(seed);
    std::set<Pair> present;
    std::vector<Pair> edges;
    edges.reserve(e);

    // Random walk on K_n; each first visit contributes the edge it arrived by.
    std::vector<char> seen(n, 0);
    std::uniform_int_distribution<NodeId> any(0, n - 1);
    std::uniform_int_distribution<NodeId> other(0, n - 2);
    NodeId at = any(rng);
    seen[at] = 1;
    for (std::size_t found = 1; found < n;) {
        NodeId next = other(rng);
        if (next >= at)
            ++next;
        if (!seen[next]) {
            seen[next] = 1;
            ++found;
            edges.push_back(ordered(at, next));
            present.insert(edges.back());
        }
        at = next;
    }

    std::size_t extra = e - (n - 1);
    const std::size_t free_pairs = max_e - (n - 1);
    if (extra * 2 <= free_pairs) {
        while (extra > 0) {
            const NodeId a = any(rng);
            NodeId b = other(rng);
            if (b >= a)
                ++b;
            if (present.insert(ordered(a, b)).second) {
                edges.push_back(ordered(a, b));
                --extra;
            }
        }
    } else {
        // Dense target: sample from the explicit complement instead of rejecting.
        std::vector<Pair> absent;
        absent.reserve(free_pairs);
        for (NodeId a = 0; a < n; ++a)
            for (NodeId b = a + 1; b < n; ++b)
                if (!present.count({a, b}))
                    absent.emplace_back(a, b);
        std::shuffle(absent.begin(), absent.end(), rng);
        edges.insert(edges.end(), absent.begin(), absent.begin() + static_cast<long>(extra));
    }

    if (!weights)
        return Graph::from_pairs(n, edges);
    std::vector<double> w = *weights;
    std::shuffle(w.begin(), w.end(), rng);
    std::vector<Edge> out;
    out.reserve(e);
    for (std::size_t k = 0; k < e; ++k)
        out.push_back({edges[k].first, edges[k].second, w[k]});
    return Graph::from_weighted(n, out);
}

RewireOutcome constrained_surrogate(const Graph &g, std::uint64_t seed,
                                    std::size_t rewires_per_edge) {
    std::mt19937_64 rng(seed);
    Rewired r = rewire(g, rng, rewires_per_edge);
    std::vector<Edge> edges;
    edges.reserve(r.edges.size());
    for (auto [a, b] : r.edges)
        edges.push_back({a, b, 1.0});
    return {Graph(g.labels(), edges, false), r.swaps, r.target, r.attempts};
}

RewireOutcome weighted_constrained_surrogate(const Graph &g, std::uint64_t seed,
                                             std::size_t rewires_per_edge) {
    std::mt19937_64 rng(seed);
    Rewired r = rewire(g, rng, rewires_per_edge);
    const std::size_t e = r.edges.size();
    const std::size_t n = g.node_count();
    const std::vector<double> goal = g.strengths();

    std::vector<double> pool;
    pool.reserve(e);
    for (const Edge &edge : g.edges())
        pool.push_back(edge.weight);
    std::sort(pool.begin(), pool.end());

    std::vector<double> score(e);
    for (std::size_t k = 0; k < e; ++k)
        score[k] = goal[r.edges[k].first] * goal[r.edges[k].second];
    std::vector<std::size_t> order(e);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return score[x] < score[y]; });
    std::vector<double> w(e);
    for (std::size_t k = 0; k < e; ++k)
        w[order[k]] = pool[k];

    std::vector<double> s(n, 0.0);
    for (std::size_t k = 0; k < e; ++k) {
        s[r.edges[k].first] += w[k];
        s[r.edges[k].second] += w[k];
    }
    if (e >= 2) {
        std::uniform_int_distribution<std::size_t> pick(0, e - 1);
        const std::size_t proposals = 20 * e;
        for (std::size_t t = 0; t < proposals; ++t) {
            const std::size_t i = pick(rng), j = pick(rng);
            if (i == j || w[i] == w[j])
                continue;
            if (exchange_delta(r.edges, w, s, goal, i, j) < -1e-12) {
                const double dw = w[j] - w[i];
                s[r.edges[i].first] += dw;
                s[r.edges[i].second] += dw;
                s[r.edges[j].first] -= dw;
                s[r.edges[j].second] -= dw;
                std::swap(w[i], w[j]);
            }
        }
    }

    std::vector<Edge> edges;
    edges.reserve(e);
    for (std::size_t k = 0; k < e; ++k)
        edges.push_back({r.edges[k].first, r.edges[k].second, w[k]});
    return {Graph(g.labels(), edges, true), r.swaps, r.target, r.attempts};
}

SurrogateEnsemble generate_ensemble(const Graph &source, SurrogateKind kind, std::size_t count,
                                    std::uint64_t seed, std::size_t rewires_per_edge) {
    SurrogateEnsemble out;
    out.kind = kind;
    out.graphs.resize(count);
    out.seeds.resize(count);
    out.achieved.assign(count, 1.0);
    for (std::size_t k = 0; k < count; ++k)
        out.seeds[k] = derive_seed(seed, static_cast<std::uint64_t>(kind), k);

    std::optional<std::vector<double>> weights;
    if (source.weighted()) {
        weights.emplace();
        for (const Edge &e : source.edges())
            weights->push_back(e.weight);
    }
    parallel_for(count, [&](std::size_t k) {
        if (kind == SurrogateKind::Unconstrained) {
            out.graphs[k] = unconstrained_surrogate(source.node_count(), source.edge_count(),
                                                    weights, out.seeds[k]);
            return;
        }
        RewireOutcome r = source.weighted()
                              ? weighted_constrained_surrogate(source, out.seeds[k], rewires_per_edge)
                              : constrained_surrogate(source, out.seeds[k], rewires_per_edge);
        out.achieved[k] = r.achieved_fraction();
        out.graphs[k] = std::move(r.graph);
    });
    return out;
}

double ensemble_difference(double empirical, const std::vector<double> &surrogates) {
    if (surrogates.empty())
        throw std::invalid_argument("ensemble_difference: no surrogate values");
    // Offsets from the first value keep identical ensembles exactly at their common value.
    const double base = surrogates.front();
    double offset = 0.0;
    for (double v : surrogates)
        offset += v - base;
    return (empirical - base) - offset / static_cast<double>(surrogates.size());
}

std::string ensemble_manifest_json(const SurrogateEnsemble &ensemble, const std::string &source,
                                   const std::vector<std::string> &files) {
    nlohmann::json j;
    j["kind"] = surrogate_kind_name(ensemble.kind);
    j["source"] = source;
    j["seeds"] = ensemble.seeds;
    j["files"] = files;
    std::vector<double> achieved;
    for (double a : ensemble.achieved)
        achieved.push_back(round_significant(a));
    j["swap_fraction"] = achieved;
    return j.dump(2);
}

} // namespace centrakit
