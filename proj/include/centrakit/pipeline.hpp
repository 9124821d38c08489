#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "centrakit/centrality.hpp"
#include "centrakit/cmc.hpp"
#include "centrakit/community.hpp"
#include "centrakit/topology.hpp"

namespace centrakit {

struct PipelineConfig {
    bool weighted = false;
    std::vector<Measure> measures; // empty: all
    bool skip_expensive = false;
    std::uint64_t seed = 1;
    std::size_t surrogates = 100; // per kind
    std::size_t rewires_per_edge = 10;
    ConsensusOptions consensus;
    std::size_t k_max = 50;
    std::filesystem::path out = "out";
};

/// Which stages a subcommand runs; later stages pull in what they depend on.
struct StageSet {
    bool centrality = false;
    bool cmc = false;
    bool topology = false;
    bool surrogate = false;
    bool profile = false;

    static StageSet all() { return {true, true, true, true, true}; }
};

/// Empirical value, surrogate mean and their difference for one quantity.
struct SurrogateComparison {
    std::optional<double> empirical;
    std::optional<double> surrogate_mean;
    std::optional<double> difference;
    std::size_t members = 0; // surrogates with a defined value
};

struct NetworkResult {
    std::string name;
    std::string input;
    bool ok = false;             // every requested stage succeeded
    std::string failed_stage;    // first failing stage, empty if none
    std::map<std::string, std::string> stage_status;
    std::size_t nodes = 0, edges = 0;
    std::optional<double> mean_within;
    std::optional<CmcMatrix> cmc;
    std::optional<TopologySummary> topology;
    /// kind -> quantity ("mean_within" or a topology field) -> comparison
    std::map<std::string, std::map<std::string, SurrogateComparison>> surrogate;
    std::vector<std::string> artifacts;
};

/// Runs the requested stages on one edge list and writes artifacts plus manifest.json into
/// `dir`. `index` selects the per-network seed stream. Nothing is written when ingest fails.
NetworkResult run_network(const PipelineConfig &config, const std::filesystem::path &input,
                          const std::filesystem::path &dir, std::size_t index,
                          const StageSet &stages);

struct CorpusResult {
    std::vector<NetworkResult> networks;
    std::vector<std::pair<std::string, std::string>> failures; // input, reason
};

/// Full pipeline on every input (concurrently), each under out/<name>/, then between-network
/// aggregates, the regression report, surrogate difference tables and the failure list.
CorpusResult run_corpus(const PipelineConfig &config,
                        const std::vector<std::filesystem::path> &inputs);

/// Topology fields used as regression predictors (density and diffusion efficiency excluded).
const std::vector<std::string> &regression_predictors();

/// Value of a named TopologySummary field.
std::optional<double> topology_field(const TopologySummary &t, const std::string &name);
const std::vector<std::string> &topology_fields();

} // namespace centrakit
