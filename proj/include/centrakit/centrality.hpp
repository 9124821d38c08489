#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "centrakit/graph.hpp"

namespace centrakit {

enum class Measure {
    DC,    // degree / strength
    EC,    // eigenvector
    KC,    // Katz
    PR,    // PageRank
    LC,    // leverage
    HC,    // h-index
    LAPC,  // Laplacian
    CC,    // shortest-path closeness
    SC,    // subgraph
    PC,    // participation coefficient
    TCC,   // total communicability
    RWCC,  // random-walk closeness
    IC,    // information
    BC,    // shortest-path betweenness
    CBC,   // communicability betweenness
    RWBC,  // random-walk (current-flow) betweenness
    BridC, // bridging
};

inline constexpr std::size_t kMeasureCount = 17;

inline constexpr std::array<Measure, kMeasureCount> kAllMeasures = {
    Measure::DC,  Measure::EC,  Measure::KC,   Measure::PR,  Measure::LC,  Measure::HC,
    Measure::LAPC, Measure::CC, Measure::SC,   Measure::PC,  Measure::TCC, Measure::RWCC,
    Measure::IC,  Measure::BC,  Measure::CBC,  Measure::RWBC, Measure::BridC,
};

std::string_view measure_name(Measure m);
std::optional<Measure> measure_from_name(std::string_view name);

struct CentralityConfig {
    /// Katz attenuation as a fraction of 1/lambda_1.
    double katz_alpha_rule = 0.9;
    double katz_beta = 1.0;
    double pagerank_alpha = 0.85;
    double pagerank_beta = 1.0;

    void validate() const;
};

// Every function below takes a connected graph and returns one score per node. Weighted graphs
// use weights/strengths in place of the binary adjacency/degree.

std::vector<double> degree(const Graph &g);
std::vector<double> eigenvector(const Graph &g);
std::vector<double> katz(const Graph &g, const CentralityConfig &config = {});
std::vector<double> pagerank(const Graph &g, const CentralityConfig &config = {});
std::vector<double> leverage(const Graph &g);
std::vector<double> h_index(const Graph &g);
std::vector<double> laplacian_centrality(const Graph &g);
std::vector<double> closeness(const Graph &g);
std::vector<double> subgraph_centrality(const Graph &g);
std::vector<double> total_communicability(const Graph &g);
std::vector<double> random_walk_closeness(const Graph &g);
std::vector<double> information_centrality(const Graph &g);
/// Unordered source-target pairs; the ordered-pair sum is exactly twice this.
std::vector<double> betweenness(const Graph &g);
std::vector<double> random_walk_betweenness(const Graph &g);
std::vector<double> communicability_betweenness(const Graph &g);
std::vector<double> bridging_centrality(const Graph &g);
std::vector<double> participation_coefficient(const Graph &g, std::span<const std::size_t> modules);

struct ProfileOptions {
    CentralityConfig config;
    /// Leave CBC and RWBC undefined; they dominate runtime on large graphs.
    bool skip_expensive = false;
    /// Measures to compute; empty means all. Others are left undefined.
    std::vector<Measure> include;
};

/// Node x measure score table. Column k holds kAllMeasures[k].
struct CentralityProfile {
    Eigen::MatrixXd scores;
    std::array<bool, kMeasureCount> defined{};
    /// Why a column is undefined ("skipped", or the error text). Empty when defined.
    std::array<std::string, kMeasureCount> notes;
    bool weighted = false;

    std::size_t node_count() const { return static_cast<std::size_t>(scores.rows()); }
    Eigen::VectorXd column(Measure m) const { return scores.col(static_cast<Eigen::Index>(m)); }
    bool is_defined(Measure m) const { return defined[static_cast<std::size_t>(m)]; }
};

/// Computes all requested columns. A failing measure leaves its column undefined with the error
/// recorded in `notes` instead of aborting the profile. `modules` drives PC; when empty PC is
/// left undefined.
CentralityProfile compute_profile(const Graph &g, std::span<const std::size_t> modules,
                                  const ProfileOptions &options = {});

/// CSV with header "node,DC,EC,...", one row per node label; undefined columns are empty cells.
std::string profile_to_csv(const Graph &g, const CentralityProfile &profile);

} // namespace centrakit
