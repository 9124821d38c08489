#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "centrakit/pipeline.hpp"

namespace fs = std::filesystem;
using namespace centrakit;

namespace {

struct Options {
    std::vector<std::string> inputs;
    bool weighted = false;
    std::string measures;
    bool skip_expensive = false;
    std::uint64_t seed = 1;
    std::size_t surrogates = 100;
    double tau = 0.4;
    std::size_t louvain_runs = 50;
    std::size_t kmax = 50;
    std::string out = "out";
};

void add_common(CLI::App *cmd, Options &o, bool many_inputs) {
    if (many_inputs)
        cmd->add_option("--input", o.inputs, "Edge-list files or directories")->required();
    else
        cmd->add_option("--input", o.inputs, "Edge-list file")->required()->expected(1);
    cmd->add_flag("--weighted", o.weighted, "Read a third column as edge weight");
    cmd->add_option("--measures", o.measures, "Comma-separated measures (default: all)");
    cmd->add_flag("--skip-expensive", o.skip_expensive, "Leave CBC and RWBC undefined");
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--surrogates", o.surrogates, "Surrogates per kind");
    cmd->add_option("--tau", o.tau, "Consensus threshold")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--louvain-runs", o.louvain_runs, "Louvain runs per consensus round")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--kmax", o.kmax, "Largest cluster count considered")->check(CLI::Range(2, 1000000));
    cmd->add_option("--out", o.out, "Output directory");
}

PipelineConfig to_config(const Options &o) {
    PipelineConfig c;
    c.weighted = o.weighted;
    c.skip_expensive = o.skip_expensive;
    c.seed = o.seed;
    c.surrogates = o.surrogates;
    c.consensus.tau = o.tau;
    c.consensus.runs = o.louvain_runs;
    c.k_max = o.kmax;
    c.out = o.out;
    std::stringstream ss(o.measures);
    for (std::string item; std::getline(ss, item, ',');) {
        if (item.empty())
            continue;
        const auto m = measure_from_name(item);
        if (!m)
            throw CLI::ValidationError("--measures", "unknown measure '" + item + "'");
        c.measures.push_back(*m);
    }
    return c;
}

std::vector<fs::path> expand_inputs(const std::vector<std::string> &inputs) {
    std::vector<fs::path> out;
    for (const std::string &s : inputs) {
        const fs::path p(s);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto &entry : fs::directory_iterator(p))
                if (entry.is_regular_file())
                    found.push_back(entry.path());
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(p);
        }
    }
    return out;
}

int report(const NetworkResult &r, const fs::path &dir) {
    if (r.failed_stage == "ingest" || r.failed_stage == "preprocess") {
        std::cerr << "error: " << r.input << ": " << r.stage_status.at(r.failed_stage) << '\n';
        return 1;
    }
    for (const auto &[stage, status] : r.stage_status)
        if (status != "ok")
            std::cerr << "stage " << stage << ": " << status << '\n';
    std::cout << r.name << ": " << r.nodes << " nodes, " << r.edges << " edges -> "
              << dir.string() << '\n';
    if (r.mean_within)
        std::printf("mean within-network CMC: %.6f\n", *r.mean_within);
    return r.ok ? 0 : 2;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Node centrality profiles, correlations, null models and clustering"};
    app.set_version_flag("--version", std::string(CENTRAKIT_VERSION));
    app.require_subcommand(1);

    Options o;
    struct Sub {
        const char *name;
        const char *help;
        StageSet stages;
    };
    const Sub subs[] = {
        {"centrality", "Compute the 17 centrality measures", {true, false, false, false, false}},
        {"topology", "Compute global topology descriptors", {false, false, true, false, false}},
        {"cmc", "Centrality measure correlations", {true, true, false, false, false}},
        {"surrogate", "Compare against surrogate ensembles", {true, true, true, true, false}},
        {"profile", "Cluster nodes by centrality profile", {true, false, false, false, true}},
        {"pipeline", "Run every stage on one network", StageSet::all()},
    };
    std::vector<std::pair<CLI::App *, StageSet>> single;
    for (const Sub &s : subs) {
        CLI::App *cmd = app.add_subcommand(s.name, s.help);
        add_common(cmd, o, false);
        single.emplace_back(cmd, s.stages);
    }
    CLI::App *corpus = app.add_subcommand("corpus", "Run the pipeline over many networks");
    add_common(corpus, o, true);

    CLI11_PARSE(app, argc, argv);

    try {
        const PipelineConfig config = to_config(o);
        if (corpus->parsed()) {
            const auto inputs = expand_inputs(o.inputs);
            const CorpusResult r = run_corpus(config, inputs);
            std::size_t complete = 0;
            for (const auto &n : r.networks)
                complete += n.ok;
            std::cout << complete << "/" << r.networks.size() << " networks complete -> "
                      << config.out.string() << '\n';
            for (const auto &[in, why] : r.failures)
                std::cerr << "failed: " << in << ": " << why << '\n';
            return r.failures.empty() ? 0 : 2;
        }
        for (const auto &[cmd, stages] : single) {
            if (!cmd->parsed())
                continue;
            const fs::path input(o.inputs.front());
            return report(run_network(config, input, config.out, 0, stages), config.out);
        }
    } catch (const CLI::ValidationError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
