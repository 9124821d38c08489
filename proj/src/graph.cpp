#include "centrakit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace centrakit {

ParseError::ParseError(std::size_t line, const std::string &what)
    : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

Graph::Graph(std::vector<std::string> labels, const std::vector<Edge> &edges, bool weighted)
    : labels_(std::move(labels)), weighted_(weighted) {
    const std::size_t n = labels_.size();
    adjacency_.assign(n, {});
    strength_.assign(n, 0.0);
    edges_.reserve(edges.size());
    for (const Edge &e : edges) {
        if (e.u >= n || e.v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (e.u == e.v)
            throw std::invalid_argument("self-loop on node " + labels_[e.u]);
        const double w = weighted ? e.weight : 1.0;
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("edge weight must be positive and finite");
        edges_.push_back({std::min(e.u, e.v), std::max(e.u, e.v), w});
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge &a, const Edge &b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    for (std::size_t k = 1; k < edges_.size(); ++k) {
        if (edges_[k].u == edges_[k - 1].u && edges_[k].v == edges_[k - 1].v)
            throw std::invalid_argument("duplicate edge " + labels_[edges_[k].u] + " " +
                                        labels_[edges_[k].v]);
    }
    for (const Edge &e : edges_) {
        adjacency_[e.u].push_back({e.v, e.weight});
        adjacency_[e.v].push_back({e.u, e.weight});
        strength_[e.u] += e.weight;
        strength_[e.v] += e.weight;
        total_weight_ += e.weight;
    }
    for (auto &list : adjacency_)
        std::sort(list.begin(), list.end(),
                  [](const Neighbor &a, const Neighbor &b) { return a.node < b.node; });
}

Graph Graph::from_pairs(std::size_t n, const std::vector<std::pair<NodeId, NodeId>> &pairs) {
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (auto [u, v] : pairs)
        edges.push_back({u, v, 1.0});
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i)
        labels[i] = std::to_string(i);
    return Graph(std::move(labels), edges, false);
}

Graph Graph::from_weighted(std::size_t n, const std::vector<Edge> &edges) {
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i)
        labels[i] = std::to_string(i);
    return Graph(std::move(labels), edges, true);
}

std::vector<double> Graph::degrees() const {
    std::vector<double> d(node_count());
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = static_cast<double>(adjacency_[i].size());
    return d;
}

std::optional<double> Graph::weight(NodeId u, NodeId v) const {
    const auto &list = adjacency_.at(u);
    auto it = std::lower_bound(list.begin(), list.end(), v,
                               [](const Neighbor &a, NodeId x) { return a.node < x; });
    if (it == list.end() || it->node != v)
        return std::nullopt;
    return it->weight;
}

bool Graph::has_edge(NodeId u, NodeId v) const { return weight(u, v).has_value(); }

Eigen::MatrixXd Graph::adjacency_matrix() const {
    const auto n = static_cast<Eigen::Index>(node_count());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const Edge &e : edges_) {
        a(e.u, e.v) = e.weight;
        a(e.v, e.u) = e.weight;
    }
    return a;
}

Eigen::MatrixXd Graph::binary_adjacency() const {
    const auto n = static_cast<Eigen::Index>(node_count());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const Edge &e : edges_) {
        a(e.u, e.v) = 1.0;
        a(e.v, e.u) = 1.0;
    }
    return a;
}

bool Graph::is_connected() const {
    if (node_count() == 0)
        return false;
    return connected_components(*this).size() == 1;
}

std::vector<std::vector<NodeId>> connected_components(const Graph &g) {
    const std::size_t n = g.node_count();
    std::vector<bool> seen(n, false);
    std::vector<std::vector<NodeId>> out;
    for (NodeId s = 0; s < n; ++s) {
        if (seen[s])
            continue;
        std::vector<NodeId> comp{s};
        seen[s] = true;
        for (std::size_t head = 0; head < comp.size(); ++head) {
            for (const Neighbor &nb : g.neighbors(comp[head])) {
                if (!seen[nb.node]) {
                    seen[nb.node] = true;
                    comp.push_back(nb.node);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

Graph induced_subgraph(const Graph &g, const std::vector<NodeId> &nodes) {
    std::vector<std::size_t> remap(g.node_count(), g.node_count());
    std::vector<std::string> labels;
    labels.reserve(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        remap.at(nodes[k]) = k;
        labels.push_back(g.label(nodes[k]));
    }
    std::vector<Edge> edges;
    for (const Edge &e : g.edges()) {
        if (remap[e.u] < nodes.size() && remap[e.v] < nodes.size())
            edges.push_back({remap[e.u], remap[e.v], e.weight});
    }
    return Graph(std::move(labels), edges, g.weighted());
}

// ---------------------------------------------------------------------------

ParseResult parse_edge_list(std::istream &in, ParseOptions options) {
    std::vector<std::string> labels;
    std::unordered_map<std::string, NodeId> index;
    std::map<std::pair<NodeId, NodeId>, double> seen;
    std::vector<Edge> edges;
    std::vector<std::string> warnings;
    std::size_t self_loops = 0;

    auto intern = [&](const std::string &label) {
        auto [it, inserted] = index.try_emplace(label, labels.size());
        if (inserted)
            labels.push_back(label);
        return it->second;
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        std::vector<std::string> cols;
        for (std::string tok; fields >> tok;)
            cols.push_back(tok);
        if (cols.empty())
            continue;
        if (cols.size() < 2 || cols.size() > 3)
            throw ParseError(lineno, "expected 'u v' or 'u v w', got " +
                                         std::to_string(cols.size()) + " columns");
        double w = 1.0;
        if (cols.size() == 3) {
            std::size_t used = 0;
            try {
                w = std::stod(cols[2], &used);
            } catch (const std::exception &) {
                throw ParseError(lineno, "weight '" + cols[2] + "' is not a number");
            }
            if (used != cols[2].size())
                throw ParseError(lineno, "weight '" + cols[2] + "' is not a number");
            if (options.weighted && (!(w > 0.0) || !std::isfinite(w)))
                throw ParseError(lineno, "weight must be positive and finite");
        }
        if (!options.weighted)
            w = 1.0;

        if (cols[0] == cols[1]) {
            intern(cols[0]);
            ++self_loops;
            continue;
        }
        const NodeId u = intern(cols[0]);
        const NodeId v = intern(cols[1]);
        const auto key = std::minmax(u, v);
        auto [it, inserted] = seen.try_emplace({key.first, key.second}, w);
        if (!inserted) {
            if (it->second != w)
                warnings.push_back("line " + std::to_string(lineno) + ": conflicting weight for " +
                                   cols[0] + " " + cols[1] + ", keeping first");
            continue;
        }
        edges.push_back({u, v, w});
    }
    if (self_loops > 0)
        warnings.push_back("dropped " + std::to_string(self_loops) + " self-loop(s)");
    if (edges.empty())
        throw ParseError(0, "empty graph: no edges after removing self-loops");
    return {Graph(std::move(labels), edges, options.weighted), std::move(warnings)};
}

ParseResult parse_edge_list(std::string_view text, ParseOptions options) {
    std::istringstream in{std::string(text)};
    return parse_edge_list(in, options);
}

ParseResult read_edge_list_file(const std::string &path, ParseOptions options) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path);
    return parse_edge_list(in, options);
}

void write_edge_list(std::ostream &out, const Graph &g) {
    auto old = out.precision(17);
    for (const Edge &e : g.edges()) {
        out << g.label(e.u) << ' ' << g.label(e.v);
        if (g.weighted())
            out << ' ' << e.weight;
        out << '\n';
    }
    out.precision(old);
}

Graph largest_component(const Graph &g) {
    auto comps = connected_components(g);
    if (comps.empty())
        throw std::invalid_argument("largest_component: empty graph");
    if (comps.size() == 1)
        return g;
    // Components come ordered by smallest member, so the first maximum wins ties.
    auto best = std::max_element(comps.begin(), comps.end(), [](const auto &a, const auto &b) {
        return a.size() < b.size();
    });
    return induced_subgraph(g, *best);
}

Graph binarize(const Graph &g) {
    if (!g.weighted())
        return g;
    return Graph(g.labels(), g.edges(), false);
}

std::string graph_to_json(const Graph &g) {
    nlohmann::json j;
    j["nodes"] = g.labels();
    auto edges = nlohmann::json::array();
    for (const Edge &e : g.edges())
        edges.push_back({g.label(e.u), g.label(e.v), e.weight});
    j["edges"] = std::move(edges);
    return j.dump();
}

// ---------------------------------------------------------------------------

Graph threshold_graph(const std::vector<Creation> &sequence) {
    if (sequence.size() < 2)
        throw std::invalid_argument("threshold_graph: need at least two nodes");
    // The final node is isolated from everything before it unless it dominates.
    if (sequence.back() != Creation::Dominating)
        throw std::invalid_argument("threshold_graph: sequence yields a disconnected graph");
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (NodeId k = 1; k < sequence.size(); ++k) {
        if (sequence[k] == Creation::Dominating)
            for (NodeId j = 0; j < k; ++j)
                pairs.emplace_back(j, k);
    }
    return Graph::from_pairs(sequence.size(), pairs);
}

bool DominanceRelation::contains(NodeId dominator, NodeId dominated) const {
    return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(dominator, dominated));
}

DominanceRelation dominance_pairs(const Graph &g) {
    DominanceRelation rel;
    const std::size_t n = g.node_count();
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = 0; j < n; ++j) {
            if (i == j)
                continue;
            bool subset = true;
            for (const Neighbor &nb : g.neighbors(j)) {
                if (nb.node != i && !g.has_edge(i, nb.node)) {
                    subset = false;
                    break;
                }
            }
            if (subset)
                rel.pairs.emplace_back(i, j);
        }
    }
    return rel;
}

DegreeSequence degree_sequence(const Graph &g) {
    DegreeSequence seq;
    const std::size_t n = g.node_count();
    seq.degrees.resize(n);
    for (NodeId i = 0; i < n; ++i)
        seq.degrees[i] = static_cast<long>(g.degree(i));
    std::sort(seq.degrees.begin(), seq.degrees.end(), std::greater<>());

    // d'_k = #{i < k : d_i >= k - 1} + #{i > k : d_i >= k}, positions 1-based.
    seq.conjugate.assign(n, 0);
    for (std::size_t k = 1; k <= n; ++k) {
        long count = 0;
        for (std::size_t i = 1; i <= n; ++i) {
            const long d = seq.degrees[i - 1];
            if (i < k && d >= static_cast<long>(k) - 1)
                ++count;
            else if (i > k && d >= static_cast<long>(k))
                ++count;
        }
        seq.conjugate[k - 1] = count;
    }
    return seq;
}

} // namespace centrakit
