#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "centrakit/graph.hpp"

namespace centrakit {

/// Node -> module assignment with contiguous 0-based ids, numbered by first appearance.
struct Partition {
    std::vector<std::size_t> assignment;
    double q = 0.0;
    std::uint64_t seed = 0;
    /// Louvain levels for a single run; outer consensus rounds for consensus_partition.
    std::size_t iterations = 0;

    std::size_t module_count() const;
};

/// Relabels ids contiguously in order of first appearance.
std::vector<std::size_t> canonical_labels(std::span<const std::size_t> assignment);

/// Newman-Girvan Q; weights and strengths replace A and degree on weighted graphs.
double modularity_q(const Graph &g, std::span<const std::size_t> assignment);
/// Q for a symmetric non-negative weight matrix (diagonal ignored).
double modularity_q(const Eigen::MatrixXd &w, std::span<const std::size_t> assignment);

/// Multi-level Louvain optimisation. The node visiting order is shuffled with `seed`.
Partition louvain(const Graph &g, std::uint64_t seed);
Partition louvain(const Eigen::MatrixXd &w, std::uint64_t seed);

struct ConsensusOptions {
    std::size_t runs = 50;
    double tau = 0.4;
    std::size_t max_rounds = 100;
};

/// Weighted co-assignment: entry (i, j) is the weight share of partitions placing i and j
/// together. Weights are the runs' Q values clamped at 0; uniform if they sum to 0.
Eigen::MatrixXd coassignment_matrix(const std::vector<Partition> &partitions);

/// Repeats {runs x Louvain -> Q-weighted co-assignment -> threshold at tau} until every
/// co-assignment entry is 0 or 1. Throws Error when max_rounds is exceeded. The returned
/// partition's q is evaluated on `g`.
Partition consensus_partition(const Graph &g, const ConsensusOptions &options, std::uint64_t seed);
/// Same procedure starting from an arbitrary symmetric weight matrix; q is evaluated on `w`.
Partition consensus_partition(const Eigen::MatrixXd &w, const ConsensusOptions &options,
                              std::uint64_t seed);

/// {"q": ..., "modules": {label: id}}
std::string partition_to_json(const Graph &g, const Partition &p);

} // namespace centrakit
