#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "centrakit/centrality.hpp"

namespace centrakit {

/// Node x measure matrix of rank scores in [0, 1], 1 for the highest rank.
struct RankProfile {
    Eigen::MatrixXd values;
    std::vector<Measure> measures;  // column order of `values`
    std::vector<Measure> excluded;  // requested exclusions plus undefined columns
    std::vector<Measure> constant;  // kept columns with no variation (all 0.5)
};

/// Midranks scaled as (rank - 1) / (n - 1), so ties at the top sit below 1 (e.g. [1, 2, 2] ->
/// [0, 0.75, 0.75]). Scores are rounded to 10 significant digits before ranking.
RankProfile rank_normalize(const CentralityProfile &profile,
                           std::span<const Measure> exclude = std::span<const Measure>());
/// Default exclusion set: RWCC.
RankProfile rank_normalize_default(const CentralityProfile &profile);
/// Core routine on a raw matrix (every column kept).
Eigen::MatrixXd rank_normalize_matrix(const Eigen::MatrixXd &scores,
                                      std::vector<std::size_t> *constant_columns = nullptr);

struct Merge {
    std::size_t left;  // cluster ids: leaves are 0..n-1, merge k creates n + k
    std::size_t right;
    double height;
    std::size_t size;
};

struct ClusteringResult {
    std::size_t n = 0;
    std::vector<Merge> merges;
    /// labels_per_k[k - 1] has exactly k clusters, numbered by first appearance.
    std::vector<std::vector<std::size_t>> labels_per_k;
    /// db_curve[k - 2] is DB for k clusters; nullopt when undefined.
    std::vector<std::optional<double>> db_curve;
    std::size_t selected_k = 0;

    /// Leaves in dendrogram order (left subtree first).
    std::vector<std::size_t> leaf_order() const;
};

/// Ward agglomeration (Lance-Williams on squared Euclidean distances; heights are the square
/// roots). Among equal distances the pair with the smallest (i, j) row indices merges first.
/// Fills labels for k = 1..min(k_max, n) and the DB curve for k = 2..min(k_max, n - 1).
ClusteringResult ward_cluster(const Eigen::MatrixXd &rows, std::size_t k_max = 50);

/// Labels after undoing the last k - 1 merges.
std::vector<std::size_t> cut_tree(const std::vector<Merge> &merges, std::size_t n, std::size_t k);

/// Mean over clusters of the worst (s_i + s_j) / d(c_i, c_j), s the mean member-to-centroid
/// distance. Pairs with coincident centroids are skipped; nullopt if nothing is defined.
std::optional<double> davies_bouldin(const Eigen::MatrixXd &rows,
                                     std::span<const std::size_t> labels);

/// argmin of the DB curve over k = 2..min(k_max, n - 1); ties (within 1e-12) go to the smaller k. 0 when no k
/// has a defined index.
std::size_t select_k(const ClusteringResult &result, std::size_t k_max = 50);

/// Force-directed 2-D placement (Fruchterman-Reingold), seeded and deterministic.
Eigen::MatrixX2d layout(const Graph &g, std::uint64_t seed, std::size_t iterations = 300);

/// {selected_k, db_curve: [{k, db}], cuts: [{k, labels: {node: cluster}}], measures, excluded,
/// constant}
std::string clusters_to_json(const Graph &g, const RankProfile &rp, const ClusteringResult &c);
/// {leaves: [node labels in dendrogram order], merges: [{left, right, height, size}]}
std::string dendrogram_to_json(const Graph &g, const ClusteringResult &c);
/// label,x,y
std::string layout_to_csv(const Graph &g, const Eigen::MatrixX2d &xy);
/// node,cluster,<measures> with rows in dendrogram leaf order.
std::string heatmap_to_csv(const Graph &g, const RankProfile &rp, const ClusteringResult &c);

} // namespace centrakit
