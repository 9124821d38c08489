#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "centrakit/graph.hpp"

namespace centrakit {

enum class SurrogateKind { Unconstrained, Constrained };

const char *surrogate_kind_name(SurrogateKind kind);

/// Connected random graph with n nodes and e edges: a uniform spanning tree from a random walk
/// over the complete graph, then e - (n - 1) distinct extra edges chosen uniformly. When
/// `weights` is given (size e) the graph is weighted and receives a random permutation of them.
Graph unconstrained_surrogate(std::size_t n, std::size_t e,
                              const std::optional<std::vector<double>> &weights,
                              std::uint64_t seed);

/// Result of a degree-preserving rewiring. Shortfalls are reported, not thrown: some degree
/// sequences (stars, complete graphs) admit no swap at all.
struct RewireOutcome {
    Graph graph;
    std::size_t swaps = 0;    // successful double-edge swaps
    std::size_t target = 0;   // rewires_per_edge * E
    std::size_t attempts = 0; // proposals made, capped at 10 * target

    double achieved_fraction() const {
        return target == 0 ? 1.0 : static_cast<double>(swaps) / static_cast<double>(target);
    }
};

/// Double-edge swaps (a-b, c-d) -> (a-d, c-b) that keep the graph simple and connected.
/// Weights are dropped; see weighted_constrained_surrogate for weighted input.
RewireOutcome constrained_surrogate(const Graph &g, std::uint64_t seed,
                                    std::size_t rewires_per_edge = 10);

/// Rewires the topology as constrained_surrogate, then places the original weights so each
/// node's strength stays close to its original: weights are first matched by rank to the
/// product of endpoint strengths, then pairwise weight exchanges that reduce the squared strength
/// error are applied.
RewireOutcome weighted_constrained_surrogate(const Graph &g, std::uint64_t seed,
                                             std::size_t rewires_per_edge = 10);

struct SurrogateEnsemble {
    SurrogateKind kind = SurrogateKind::Unconstrained;
    std::vector<Graph> graphs;
    std::vector<std::uint64_t> seeds;
    /// Swap fraction per member (1 for unconstrained members).
    std::vector<double> achieved;
};

/// `count` members, member k seeded with derive_seed(seed, kind, k); generated concurrently.
/// Weighted sources give weighted members.
SurrogateEnsemble generate_ensemble(const Graph &source, SurrogateKind kind, std::size_t count,
                                    std::uint64_t seed, std::size_t rewires_per_edge = 10);

/// empirical - mean(surrogates).
double ensemble_difference(double empirical, const std::vector<double> &surrogates);

/// {kind, source, seeds[], files[]}; `files` may be empty.
std::string ensemble_manifest_json(const SurrogateEnsemble &ensemble, const std::string &source,
                                   const std::vector<std::string> &files);

} // namespace centrakit
