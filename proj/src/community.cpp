#include "centrakit/community.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include <json.hpp>

#include "centrakit/util.hpp"

namespace centrakit {

namespace {

/// Weighted network with explicit self-loop weight, the working form of each Louvain level.
struct Network {
    std::vector<std::vector<std::pair<std::size_t, double>>> adj;
    std::vector<double> self;     // self-loop weight (counted twice in the degree)
    std::vector<double> strength; // sum of incident weights incl. 2 * self
    double two_m = 0.0;

    std::size_t size() const { return adj.size(); }
};

Network network_from_matrix(const Eigen::MatrixXd &w) {
    const auto n = static_cast<std::size_t>(w.rows());
    Network net;
    net.adj.resize(n);
    net.self.assign(n, 0.0);
    net.strength.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double x = w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (i == j || x == 0.0)
                continue;
            if (x < 0.0)
                throw std::invalid_argument("louvain: negative weight");
            net.adj[i].emplace_back(j, x);
            net.strength[i] += x;
        }
        net.two_m += net.strength[i];
    }
    return net;
}

Network network_from_graph(const Graph &g) {
    Network net;
    const std::size_t n = g.node_count();
    net.adj.resize(n);
    net.self.assign(n, 0.0);
    net.strength.assign(n, 0.0);
    for (NodeId i = 0; i < n; ++i) {
        for (const Neighbor &nb : g.neighbors(i))
            net.adj[i].emplace_back(nb.node, nb.weight);
        net.strength[i] = g.strength(i);
        net.two_m += net.strength[i];
    }
    return net;
}

/// Local moving from the starting communities `comm` (ids < n). Returns the canonical
/// communities and whether any node moved.
std::pair<std::vector<std::size_t>, bool> local_moves(const Network &net,
                                                      std::vector<std::size_t> comm,
                                                      std::mt19937_64 &rng) {
    const std::size_t n = net.size();
    std::vector<double> total(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        total[comm[i]] += net.strength[i];
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<double> link(n, 0.0);
    std::vector<char> marked(n, 0);
    std::vector<std::size_t> touched;
    bool any_move = false;
    constexpr double kMinGain = 1e-12;

    for (bool moved = true; moved;) {
        moved = false;
        for (std::size_t i : order) {
            const std::size_t old = comm[i];
            const double ki = net.strength[i];
            touched.clear();
            touched.push_back(old);
            marked[old] = 1;
            for (auto [j, w] : net.adj[i]) {
                const std::size_t c = comm[j];
                if (!marked[c]) {
                    marked[c] = 1;
                    touched.push_back(c);
                }
                link[c] += w;
            }
            total[old] -= ki;
            std::size_t best = old;
            double best_gain = link[old] - total[old] * ki / net.two_m;
            for (std::size_t c : touched) {
                const double gain = link[c] - total[c] * ki / net.two_m;
                if (gain > best_gain + kMinGain) {
                    best_gain = gain;
                    best = c;
                }
            }
            total[best] += ki;
            comm[i] = best;
            if (best != old)
                moved = any_move = true;
            for (std::size_t c : touched) {
                link[c] = 0.0;
                marked[c] = 0;
            }
        }
    }
    return {canonical_labels(comm), any_move};
}

Network aggregate(const Network &net, const std::vector<std::size_t> &comm, std::size_t count) {
    Network out;
    out.adj.resize(count);
    out.self.assign(count, 0.0);
    out.strength.assign(count, 0.0);
    out.two_m = net.two_m;
    std::vector<std::unordered_map<std::size_t, double>> acc(count);
    for (std::size_t i = 0; i < net.size(); ++i) {
        const std::size_t ci = comm[i];
        out.self[ci] += net.self[i];
        out.strength[ci] += net.strength[i];
        for (auto [j, w] : net.adj[i]) {
            const std::size_t cj = comm[j];
            if (ci == cj)
                out.self[ci] += 0.5 * w; // each internal edge is seen from both ends
            else
                acc[ci][cj] += w;
        }
    }
    for (std::size_t c = 0; c < count; ++c) {
        out.adj[c].assign(acc[c].begin(), acc[c].end());
        std::sort(out.adj[c].begin(), out.adj[c].end());
    }
    return out;
}

double modularity_of(const Network &net, std::span<const std::size_t> assignment) {
    if (net.two_m <= 0.0)
        return 0.0;
    const std::size_t modules =
        assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
    std::vector<double> inside(modules, 0.0), total(modules, 0.0);
    for (std::size_t i = 0; i < net.size(); ++i) {
        total[assignment[i]] += net.strength[i];
        inside[assignment[i]] += 2.0 * net.self[i];
        for (auto [j, w] : net.adj[i])
            if (assignment[j] == assignment[i])
                inside[assignment[i]] += w;
    }
    double q = 0.0;
    for (std::size_t m = 0; m < modules; ++m)
        q += inside[m] / net.two_m - (total[m] / net.two_m) * (total[m] / net.two_m);
    return q;
}

Partition louvain_network(const Network &base, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Partition result;
    result.seed = seed;
    result.assignment.resize(base.size());
    std::iota(result.assignment.begin(), result.assignment.end(), 0);
    if (base.two_m <= 0.0) {
        result.q = 0.0;
        return result;
    }

    auto identity = [](std::size_t n) {
        std::vector<std::size_t> v(n);
        std::iota(v.begin(), v.end(), 0);
        return v;
    };

    // Aggregated levels can stall in a partition that single-node moves still improve, so a
    // stalled level drops back to node-level moves before finishing.
    Network net = base;
    bool at_base = true;
    std::vector<std::size_t> start = identity(base.size());
    for (;;) {
        auto [comm, moved] = local_moves(net, start, rng);
        if (!moved) {
            if (at_base)
                break;
            net = base;
            at_base = true;
            start = result.assignment;
            continue;
        }
        if (at_base)
            result.assignment = comm;
        else
            for (std::size_t &c : result.assignment)
                c = comm[c];
        ++result.iterations;
        const std::size_t count = *std::max_element(comm.begin(), comm.end()) + 1;
        net = aggregate(net, comm, count);
        at_base = false;
        start = identity(count);
    }
    result.assignment = canonical_labels(result.assignment);
    result.q = modularity_of(base, result.assignment);
    return result;
}

void check_assignment(std::size_t n, std::span<const std::size_t> assignment) {
    if (assignment.size() != n)
        throw std::invalid_argument("partition covers " + std::to_string(assignment.size()) +
                                    " nodes, expected " + std::to_string(n));
}

bool is_binary(const Eigen::MatrixXd &d) {
    constexpr double eps = 1e-12;
    return (d.array().abs() < eps || (d.array() - 1.0).abs() < eps).all();
}

Partition consensus_network(const Network &base, const Eigen::MatrixXd &start,
                            const ConsensusOptions &options, std::uint64_t seed) {
    if (!(options.tau > 0.0 && options.tau < 1.0))
        throw std::invalid_argument("consensus: tau must lie in (0, 1)");
    if (options.runs == 0)
        throw std::invalid_argument("consensus: need at least one run");

    Eigen::MatrixXd current = start;
    for (std::size_t round = 0; round < options.max_rounds; ++round) {
        const Network net = round == 0 ? base : network_from_matrix(current);
        std::vector<Partition> runs(options.runs);
        parallel_for(options.runs, [&](std::size_t r) {
            runs[r] = louvain_network(net, derive_seed(seed, round, r));
        });
        const Eigen::MatrixXd d = coassignment_matrix(runs);
        if (is_binary(d)) {
            Partition out;
            out.assignment = runs.front().assignment;
            out.q = modularity_of(base, out.assignment);
            out.seed = seed;
            out.iterations = round + 1;
            return out;
        }
        current = (d.array() >= options.tau).select(d, 0.0);
        current.diagonal().setZero();
    }
    throw Error("consensus clustering did not converge in " + std::to_string(options.max_rounds) +
                " rounds");
}

} // namespace

std::size_t Partition::module_count() const {
    return assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
}

std::vector<std::size_t> canonical_labels(std::span<const std::size_t> assignment) {
    std::unordered_map<std::size_t, std::size_t> remap;
    std::vector<std::size_t> out(assignment.size());
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        auto [it, inserted] = remap.try_emplace(assignment[i], remap.size());
        out[i] = it->second;
    }
    return out;
}

double modularity_q(const Graph &g, std::span<const std::size_t> assignment) {
    check_assignment(g.node_count(), assignment);
    return modularity_of(network_from_graph(g), canonical_labels(assignment));
}

double modularity_q(const Eigen::MatrixXd &w, std::span<const std::size_t> assignment) {
    check_assignment(static_cast<std::size_t>(w.rows()), assignment);
    return modularity_of(network_from_matrix(w), canonical_labels(assignment));
}

Partition louvain(const Graph &g, std::uint64_t seed) {
    return louvain_network(network_from_graph(g), seed);
}

Partition louvain(const Eigen::MatrixXd &w, std::uint64_t seed) {
    return louvain_network(network_from_matrix(w), seed);
}

Eigen::MatrixXd coassignment_matrix(const std::vector<Partition> &partitions) {
    if (partitions.empty())
        throw std::invalid_argument("coassignment_matrix: no partitions");
    const auto n = static_cast<Eigen::Index>(partitions.front().assignment.size());
    std::vector<double> weight(partitions.size());
    double total = 0.0;
    for (std::size_t r = 0; r < partitions.size(); ++r) {
        weight[r] = std::max(partitions[r].q, 0.0);
        total += weight[r];
    }
    if (!(total > 0.0)) {
        std::fill(weight.begin(), weight.end(), 1.0);
        total = static_cast<double>(partitions.size());
    }
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t r = 0; r < partitions.size(); ++r) {
        const auto &a = partitions[r].assignment;
        const double share = weight[r] / total;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (a[static_cast<std::size_t>(i)] == a[static_cast<std::size_t>(j)])
                    d(i, j) += share;
    }
    return d;
}

Partition consensus_partition(const Graph &g, const ConsensusOptions &options, std::uint64_t seed) {
    return consensus_network(network_from_graph(g), g.adjacency_matrix(), options, seed);
}

Partition consensus_partition(const Eigen::MatrixXd &w, const ConsensusOptions &options,
                              std::uint64_t seed) {
    return consensus_network(network_from_matrix(w), w, options, seed);
}

std::string partition_to_json(const Graph &g, const Partition &p) {
    nlohmann::json j;
    j["q"] = round_significant(p.q);
    nlohmann::json modules = nlohmann::json::object();
    for (NodeId i = 0; i < g.node_count(); ++i)
        modules[g.label(i)] = p.assignment.at(i);
    j["modules"] = std::move(modules);
    return j.dump(2);
}

} // namespace centrakit
