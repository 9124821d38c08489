#pragma once

#include <optional>
#include <span>
#include <string>

#include "centrakit/graph.hpp"

namespace centrakit {

/// Global descriptors of a connected network. A field is nullopt when undefined on the input
/// (e.g. assortativity of a regular graph) or when its computation failed.
struct TopologySummary {
    std::optional<double> density;
    std::optional<double> assortativity;
    std::optional<double> clustering;
    std::optional<double> global_efficiency;
    std::optional<double> diffusion_efficiency;
    std::optional<double> modularity;
    std::optional<double> majorization_gap;
    std::optional<double> spectral_gap;
};

double density(const Graph &g);

/// Degree correlation across edge endpoints (strengths when weighted); nullopt when the
/// endpoint degree variance is zero.
std::optional<double> assortativity(const Graph &g);

/// Mean local clustering; nodes with fewer than two neighbours contribute 0. Weighted graphs use
/// the geometric mean of max-normalised triangle weights.
double clustering(const Graph &g);

/// 1 / L with L the mean shortest-path length over unordered pairs.
double global_efficiency(const Graph &g);

/// Mean of 1 / H(i, j) over ordered pairs, H the mean first-passage times.
double diffusion_efficiency(const Graph &g);

/// Half the positive excess of the corrected conjugate over the degree sequence, divided by E.
/// Computed on the binary structure.
double majorization_gap(const Graph &g);

/// 1 - lambda_2 / lambda_1 of the adjacency (weight) matrix.
double spectral_gap(const Graph &g);

/// All eight descriptors; modularity is Q of `modules` (left undefined when empty).
TopologySummary summarize(const Graph &g, std::span<const std::size_t> modules);

/// JSON object with nulls for undefined fields.
std::string topology_to_json(const TopologySummary &t);

} // namespace centrakit
