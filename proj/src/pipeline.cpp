#include "centrakit/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/version.hpp>
#include <json.hpp>

#include "centrakit/profiling.hpp"
#include "centrakit/surrogate.hpp"
#include "centrakit/util.hpp"

namespace centrakit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Stream ids for derive_seed(master, network, stage).
enum Stream : std::uint64_t {
    kCommunity = 1,
    kUnconstrained = 2,
    kConstrained = 3,
    kLayout = 4,
    kSurrogateCommunity = 5,
};

json num(const std::optional<double> &v) {
    if (v && std::isfinite(*v))
        return round_significant(*v);
    return nullptr;
}

std::vector<std::string> names_of(const std::vector<Measure> &ms) {
    std::vector<std::string> out;
    for (Measure m : ms)
        out.emplace_back(measure_name(m));
    return out;
}

/// Mean over defined upper-triangle cells whose measures are both outside `skip`.
std::optional<double> mean_within_excluding(const CmcMatrix &c, const std::set<Measure> &skip) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j) {
            if (skip.count(c.measures[i]) || skip.count(c.measures[j]))
                continue;
            const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
            if (c.defined(a, b)) {
                sum += c.rho(a, b);
                ++count;
            }
        }
    if (count == 0)
        return std::nullopt;
    return sum / static_cast<double>(count);
}

json versions() {
    return {{"centrakit", CENTRAKIT_VERSION},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                          "." + std::to_string(EIGEN_MINOR_VERSION)},
            {"boost", BOOST_LIB_VERSION},
            {"compiler", __VERSION__}};
}

class Writer {
public:
    explicit Writer(fs::path dir) : dir_(std::move(dir)) {}

    void text(const std::string &name, const std::string &content) {
        const fs::path path = dir_ / name;
        fs::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw Error("cannot write " + path.string());
        out << content;
        if (!content.empty() && content.back() != '\n')
            out << '\n';
        if (!out)
            throw Error("write failed for " + path.string());
        artifacts.push_back(name);
    }

    std::vector<std::string> artifacts;

private:
    fs::path dir_;
};

/// Per-member values for one surrogate kind.
struct MemberStats {
    std::optional<double> mean_within;
    TopologySummary topology;
};

std::map<std::string, SurrogateComparison>
compare(const std::optional<double> &empirical_mean, const TopologySummary &empirical,
        const std::vector<MemberStats> &members) {
    std::map<std::string, SurrogateComparison> out;
    auto fill = [&](const std::string &key, const std::optional<double> &emp, auto &&pick) {
        SurrogateComparison c;
        c.empirical = emp;
        std::vector<double> values;
        for (const MemberStats &m : members)
            if (auto v = pick(m); v && std::isfinite(*v))
                values.push_back(*v);
        c.members = values.size();
        if (!values.empty()) {
            double offset = 0.0;
            for (double v : values)
                offset += v - values.front();
            c.surrogate_mean = values.front() + offset / static_cast<double>(values.size());
            if (emp)
                c.difference = ensemble_difference(*emp, values);
        }
        out[key] = c;
    };
    fill("mean_within", empirical_mean, [](const MemberStats &m) { return m.mean_within; });
    for (const std::string &f : topology_fields())
        fill(f, topology_field(empirical, f),
             [&](const MemberStats &m) { return topology_field(m.topology, f); });
    return out;
}

json comparisons_to_json(const std::map<std::string, SurrogateComparison> &table) {
    json j = json::object();
    for (const auto &[key, c] : table) {
        json row;
        row["empirical"] = num(c.empirical);
        row["surrogate_mean"] = num(c.surrogate_mean);
        row["difference"] = num(c.difference);
        row["members"] = c.members;
        j[key] = std::move(row);
    }
    return j;
}

} // namespace

const std::vector<std::string> &topology_fields() {
    static const std::vector<std::string> f{"density",          "assortativity",
                                            "clustering",       "global_efficiency",
                                            "diffusion_efficiency", "modularity",
                                            "majorization_gap", "spectral_gap"};
    return f;
}

const std::vector<std::string> &regression_predictors() {
    static const std::vector<std::string> p{"assortativity", "clustering", "global_efficiency",
                                            "modularity",    "majorization_gap", "spectral_gap"};
    return p;
}

std::optional<double> topology_field(const TopologySummary &t, const std::string &name) {
    if (name == "density")
        return t.density;
    if (name == "assortativity")
        return t.assortativity;
    if (name == "clustering")
        return t.clustering;
    if (name == "global_efficiency")
        return t.global_efficiency;
    if (name == "diffusion_efficiency")
        return t.diffusion_efficiency;
    if (name == "modularity")
        return t.modularity;
    if (name == "majorization_gap")
        return t.majorization_gap;
    if (name == "spectral_gap")
        return t.spectral_gap;
    throw std::invalid_argument("unknown topology field '" + name + "'");
}

NetworkResult run_network(const PipelineConfig &config, const fs::path &input, const fs::path &dir,
                          std::size_t index, const StageSet &requested) {
    NetworkResult result;
    result.input = input.string();
    result.name = input.stem().string();

    StageSet st = requested;
    st.cmc = st.cmc || st.surrogate;
    st.centrality = st.centrality || st.cmc || st.profile;
    // PC needs a partition and Q is a topology descriptor.
    const bool wants_pc = config.measures.empty() ||
                          std::find(config.measures.begin(), config.measures.end(), Measure::PC) !=
                              config.measures.end();
    const bool community = st.topology || st.surrogate || (st.centrality && wants_pc);

    ParseResult parsed;
    try {
        parsed = read_edge_list_file(input.string(), ParseOptions{config.weighted});
    } catch (const std::exception &e) {
        result.failed_stage = "ingest";
        result.stage_status["ingest"] = std::string("failed: ") + e.what();
        return result;
    }
    result.stage_status["ingest"] = "ok";

    Graph g;
    try {
        g = largest_component(parsed.graph);
        if (g.node_count() < 3)
            throw Error("largest component has fewer than 3 nodes");
    } catch (const std::exception &e) {
        result.failed_stage = "preprocess";
        result.stage_status["preprocess"] = std::string("failed: ") + e.what();
        return result;
    }
    const std::size_t dropped = parsed.graph.node_count() - g.node_count();
    result.nodes = g.node_count();
    result.edges = g.edge_count();
    result.stage_status["preprocess"] = "ok";

    const std::uint64_t community_seed = derive_seed(config.seed, index, kCommunity);
    const std::uint64_t unconstrained_seed = derive_seed(config.seed, index, kUnconstrained);
    const std::uint64_t constrained_seed = derive_seed(config.seed, index, kConstrained);
    const std::uint64_t layout_seed = derive_seed(config.seed, index, kLayout);
    const std::uint64_t member_seed = derive_seed(config.seed, index, kSurrogateCommunity);

    fs::create_directories(dir);
    Writer out(dir);
    json notes = json::object();

    // Runs one stage, recording success or the failure message.
    auto stage = [&](const std::string &name, auto &&fn) {
        try {
            fn();
            result.stage_status[name] = "ok";
            return true;
        } catch (const std::exception &e) {
            result.stage_status[name] = std::string("failed: ") + e.what();
            if (result.failed_stage.empty())
                result.failed_stage = name;
            return false;
        }
    };

    std::vector<std::size_t> modules;
    if (community)
        stage("community", [&] {
            const Partition p = consensus_partition(g, config.consensus, community_seed);
            modules = p.assignment;
            out.text("partition.json", partition_to_json(g, p));
        });

    ProfileOptions popt;
    popt.include = config.measures;
    popt.skip_expensive = config.skip_expensive;

    std::optional<CentralityProfile> profile;
    if (st.centrality)
        stage("centrality", [&] {
            profile = compute_profile(g, modules, popt);
            out.text("centrality.csv", profile_to_csv(g, *profile));
            for (Measure m : kAllMeasures)
                if (!profile->is_defined(m))
                    notes[std::string(measure_name(m))] =
                        profile->notes[static_cast<std::size_t>(m)];
        });

    if (st.cmc && profile)
        stage("cmc", [&] {
            result.cmc = cmc_matrix(*profile);
            result.mean_within = mean_within(*result.cmc);
            out.text("cmc.csv", cmc_to_csv(*result.cmc));
        });

    if (st.topology || st.surrogate)
        stage("topology", [&] {
            result.topology = summarize(g, modules);
            if (st.topology)
                out.text("topology.json", topology_to_json(*result.topology));
        });

    if (st.surrogate && result.cmc && result.topology)
        stage("surrogate", [&] {
            // Surrogate profiles leave out the two costly betweenness variants.
            const std::set<Measure> skipped{Measure::RWBC, Measure::CBC};
            ProfileOptions sopt = popt;
            sopt.skip_expensive = true;
            const std::optional<double> empirical_mean =
                mean_within_excluding(*result.cmc, skipped);

            json diffs = json::object();
            diffs["members_per_kind"] = config.surrogates;
            diffs["excluded_measures"] = names_of({Measure::CBC, Measure::RWBC});
            for (SurrogateKind kind : {SurrogateKind::Unconstrained, SurrogateKind::Constrained}) {
                const std::uint64_t seed =
                    kind == SurrogateKind::Unconstrained ? unconstrained_seed : constrained_seed;
                const SurrogateEnsemble ens = generate_ensemble(g, kind, config.surrogates, seed,
                                                                config.rewires_per_edge);
                std::vector<MemberStats> stats(ens.graphs.size());
                parallel_for(ens.graphs.size(), [&](std::size_t k) {
                    const Graph &s = ens.graphs[k];
                    const Partition p = consensus_partition(
                        s, config.consensus,
                        derive_seed(member_seed, static_cast<std::uint64_t>(kind), k));
                    const CentralityProfile sp = compute_profile(s, p.assignment, sopt);
                    stats[k].mean_within = mean_within_excluding(cmc_matrix(sp), skipped);
                    stats[k].topology = summarize(s, p.assignment);
                });
                const std::string kname = surrogate_kind_name(kind);
                auto table = compare(empirical_mean, *result.topology, stats);
                json block = comparisons_to_json(table);
                if (kind == SurrogateKind::Constrained && !ens.achieved.empty())
                    block["min_swap_fraction"] =
                        round_significant(*std::min_element(ens.achieved.begin(), ens.achieved.end()));
                diffs[kname] = std::move(block);
                result.surrogate[kname] = std::move(table);

                std::vector<std::string> files;
                for (std::size_t k = 0; k < ens.graphs.size(); ++k) {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "member_%03zu.txt", k);
                    std::ostringstream os;
                    write_edge_list(os, ens.graphs[k]);
                    out.text("surrogates/" + kname + "/" + buf, os.str());
                    files.emplace_back(buf);
                }
                out.text("surrogates/" + kname + "/manifest.json",
                         ensemble_manifest_json(ens, input.filename().string(), files));
            }
            out.text("surrogate_diffs.json", diffs.dump(2));
        });

    if (st.profile && profile)
        stage("profile", [&] {
            const RankProfile rp = rank_normalize_default(*profile);
            if (rp.values.cols() == 0)
                throw Error("no defined measure columns to cluster");
            const ClusteringResult c = ward_cluster(rp.values, config.k_max);
            out.text("clusters.json", clusters_to_json(g, rp, c));
            out.text("dendrogram.json", dendrogram_to_json(g, c));
            out.text("heatmap.csv", heatmap_to_csv(g, rp, c));
            out.text("layout.csv", layout_to_csv(g, layout(g, layout_seed)));
        });

    result.ok = result.failed_stage.empty();
    result.artifacts = out.artifacts;

    json m;
    m["tool"] = "centrakit";
    m["version"] = CENTRAKIT_VERSION;
    m["versions"] = versions();
    m["input"] = input.filename().string();
    m["name"] = result.name;
    m["weighted"] = config.weighted;
    m["nodes"] = g.node_count();
    m["edges"] = g.edge_count();
    m["dropped_nodes"] = dropped;
    m["parse_warnings"] = parsed.warnings;
    m["seed"] = config.seed;
    m["seeds"] = {{"community", community_seed},
                  {"unconstrained", unconstrained_seed},
                  {"constrained", constrained_seed},
                  {"surrogate_community", member_seed},
                  {"layout", layout_seed}};
    m["config"] = {{"measures", names_of(config.measures)},
                   {"skip_expensive", config.skip_expensive},
                   {"surrogates", config.surrogates},
                   {"rewires_per_edge", config.rewires_per_edge},
                   {"louvain_runs", config.consensus.runs},
                   {"tau", round_significant(config.consensus.tau)},
                   {"kmax", config.k_max}};
    m["stages"] = result.stage_status;
    m["undefined_measures"] = notes;
    m["partial"] = !result.ok;
    std::vector<std::string> listed = out.artifacts;
    // Member edge lists are summarised by their ensemble manifests.
    listed.erase(std::remove_if(listed.begin(), listed.end(),
                                [](const std::string &a) {
                                    return a.find("/member_") != std::string::npos;
                                }),
                 listed.end());
    std::sort(listed.begin(), listed.end());
    m["artifacts"] = listed;
    out.text("manifest.json", m.dump(2));
    result.artifacts.push_back("manifest.json");
    return result;
}

CorpusResult run_corpus(const PipelineConfig &config, const std::vector<fs::path> &inputs) {
    if (inputs.empty())
        throw std::invalid_argument("corpus: no inputs");
    // Unique directory names from file stems.
    std::vector<std::string> names;
    std::map<std::string, int> seen;
    for (const fs::path &p : inputs) {
        std::string base = p.stem().string();
        if (base.empty())
            base = "network";
        const int k = seen[base]++;
        names.push_back(k == 0 ? base : base + "_" + std::to_string(k + 1));
    }
    // A later name could collide with a suffixed one; resolve by index.
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (names[i] == names[j])
                names[i] += "_" + std::to_string(i);

    CorpusResult out;
    out.networks.resize(inputs.size());
    parallel_for(inputs.size(), [&](std::size_t i) {
        out.networks[i] =
            run_network(config, inputs[i], config.out / names[i], i, StageSet::all());
        out.networks[i].name = names[i];
    });

    std::vector<CmcMatrix> cmcs;
    json summary = json::array();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const NetworkResult &r = out.networks[i];
        if (r.failed_stage == "ingest" || r.failed_stage == "preprocess") {
            out.failures.emplace_back(inputs[i].string(),
                                      r.failed_stage + ": " + r.stage_status.at(r.failed_stage));
            continue;
        }
        if (!r.ok)
            out.failures.emplace_back(inputs[i].string(),
                                      "stage " + r.failed_stage + ": " +
                                          r.stage_status.at(r.failed_stage));
        if (r.cmc)
            cmcs.push_back(*r.cmc);
        json row;
        row["name"] = r.name;
        row["nodes"] = r.nodes;
        row["edges"] = r.edges;
        row["mean_within"] = num(r.mean_within);
        json topo = json::object();
        if (r.topology)
            for (const std::string &f : topology_fields())
                topo[f] = num(topology_field(*r.topology, f));
        row["topology"] = std::move(topo);
        row["complete"] = r.ok;
        summary.push_back(std::move(row));
    }

    fs::create_directories(config.out);
    Writer w(config.out);
    w.text("networks.json", summary.dump(2));

    if (!cmcs.empty())
        w.text("between_network.json", aggregates_to_json(between_network_stats(cmcs)));

    // Regression of mean within-network CMC on topology.
    {
        json report;
        std::vector<double> y;
        std::vector<std::vector<double>> rows;
        std::vector<std::string> used, skipped;
        for (const NetworkResult &r : out.networks) {
            if (!r.mean_within || !r.topology) {
                if (r.failed_stage != "ingest" && r.failed_stage != "preprocess")
                    skipped.push_back(r.name);
                continue;
            }
            std::vector<double> row;
            for (const std::string &f : regression_predictors()) {
                const auto v = topology_field(*r.topology, f);
                if (!v || !std::isfinite(*v))
                    break;
                row.push_back(*v);
            }
            if (row.size() != regression_predictors().size()) {
                skipped.push_back(r.name);
                continue;
            }
            y.push_back(*r.mean_within);
            rows.push_back(std::move(row));
            used.push_back(r.name);
        }
        report["networks"] = used;
        report["skipped"] = skipped;
        report["excluded_predictors"] = {"density", "diffusion_efficiency"};
        try {
            Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()),
                              static_cast<Eigen::Index>(regression_predictors().size()));
            for (std::size_t i = 0; i < rows.size(); ++i)
                for (std::size_t j = 0; j < rows[i].size(); ++j)
                    x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
            report["model"] = json::parse(regression_to_json(regress_cmc(y, x, regression_predictors())));
            report["error"] = nullptr;
        } catch (const CollinearityError &e) {
            report["model"] = nullptr;
            report["error"] = e.what();
            report["collinear"] = e.columns();
        } catch (const std::exception &e) {
            report["model"] = nullptr;
            report["error"] = e.what();
        }
        w.text("regression.json", report.dump(2));
    }

    // Empirical minus surrogate-mean tables, one row per network and quantity.
    for (const char *kind : {"unconstrained", "constrained"}) {
        std::ostringstream csv;
        csv << "network,quantity,empirical,surrogate_mean,difference,members\n";
        auto cell = [](const std::optional<double> &v) {
            return v && std::isfinite(*v) ? format_number(*v) : std::string();
        };
        for (const NetworkResult &r : out.networks) {
            auto it = r.surrogate.find(kind);
            if (it == r.surrogate.end())
                continue;
            for (const auto &[q, c] : it->second)
                csv << r.name << ',' << q << ',' << cell(c.empirical) << ','
                    << cell(c.surrogate_mean) << ',' << cell(c.difference) << ',' << c.members
                    << '\n';
        }
        w.text(std::string("surrogate_differences_") + kind + ".csv", csv.str());
    }

    json failures = json::array();
    for (const auto &[in, why] : out.failures)
        failures.push_back({{"input", in}, {"reason", why}});
    w.text("failures.json", failures.dump(2));

    json m;
    m["tool"] = "centrakit";
    m["version"] = CENTRAKIT_VERSION;
    m["versions"] = versions();
    m["seed"] = config.seed;
    std::vector<std::string> ins;
    for (const fs::path &p : inputs)
        ins.push_back(p.string());
    m["inputs"] = ins;
    m["networks"] = names;
    m["failures"] = out.failures.size();
    std::vector<std::string> listed = w.artifacts;
    std::sort(listed.begin(), listed.end());
    m["artifacts"] = listed;
    w.text("manifest.json", m.dump(2));
    return out;
}

} // namespace centrakit
