#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace centrakit {

using NodeId = std::size_t;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed edge-list input. `line()` is 1-based, 0 when the error is not tied to a line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string &what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A linear solve, eigensolve or exponential that could not be completed.
class NumericalError : public Error {
public:
    using Error::Error;
};

struct Edge {
    NodeId u;
    NodeId v;
    double weight;
};

struct Neighbor {
    NodeId node;
    double weight;
};

/**
 * Immutable undirected simple graph with optional positive edge weights.
 *
 * Nodes are indexed 0..n-1 and carry external string labels. Edges are stored
 * once with u < v, sorted lexicographically; adjacency lists are sorted by
 * neighbour index. An unweighted graph reports weight 1 for every edge.
 */
class Graph {
public:
    Graph() = default;

    /// Builds from (u, v, w) triples. Self-loops and duplicate pairs are rejected,
    /// as are non-positive or non-finite weights. `weighted == false` ignores the weights.
    Graph(std::vector<std::string> labels, const std::vector<Edge> &edges, bool weighted);

    /// Unlabelled convenience constructor; labels become "0".."n-1".
    static Graph from_pairs(std::size_t n, const std::vector<std::pair<NodeId, NodeId>> &pairs);
    static Graph from_weighted(std::size_t n, const std::vector<Edge> &edges);

    std::size_t node_count() const noexcept { return labels_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool weighted() const noexcept { return weighted_; }

    const std::vector<std::string> &labels() const noexcept { return labels_; }
    const std::string &label(NodeId i) const { return labels_.at(i); }
    const std::vector<Edge> &edges() const noexcept { return edges_; }
    const std::vector<Neighbor> &neighbors(NodeId i) const { return adjacency_.at(i); }

    std::size_t degree(NodeId i) const { return adjacency_.at(i).size(); }
    /// Sum of incident weights; equals degree for unweighted graphs.
    double strength(NodeId i) const { return strength_.at(i); }
    std::vector<double> degrees() const;
    std::vector<double> strengths() const { return strength_; }

    bool has_edge(NodeId u, NodeId v) const;
    std::optional<double> weight(NodeId u, NodeId v) const;
    double total_weight() const noexcept { return total_weight_; }

    /// Dense symmetric matrix: binary adjacency, or weights in weighted mode.
    Eigen::MatrixXd adjacency_matrix() const;
    /// Binary adjacency regardless of weights.
    Eigen::MatrixXd binary_adjacency() const;

    bool is_connected() const;

private:
    std::vector<std::string> labels_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<double> strength_;
    double total_weight_ = 0.0;
    bool weighted_ = false;
};

/// Node indices per connected component, each list sorted ascending; components ordered by
/// their smallest member.
std::vector<std::vector<NodeId>> connected_components(const Graph &g);

/// Subgraph induced on `nodes` (kept in the given order); labels and weights preserved.
Graph induced_subgraph(const Graph &g, const std::vector<NodeId> &nodes);

// ---- ingestion / preprocessing ----

struct ParseOptions {
    bool weighted = false;
};

struct ParseResult {
    Graph graph;
    std::vector<std::string> warnings;
};

/// Parses whitespace-separated "u v [w]" lines; '#' starts a comment. Self-loops are dropped,
/// duplicate or reciprocal pairs merged keeping the first weight (a warning is recorded when a
/// later weight differs).
ParseResult parse_edge_list(std::istream &in, ParseOptions options = {});
ParseResult parse_edge_list(std::string_view text, ParseOptions options = {});
ParseResult read_edge_list_file(const std::string &path, ParseOptions options = {});

/// Writes "u v" or "u v w" lines using node labels; parse_edge_list reads it back.
void write_edge_list(std::ostream &out, const Graph &g);

/// Largest connected component; ties go to the component holding the smallest node index.
Graph largest_component(const Graph &g);

Graph binarize(const Graph &g);

/// {"nodes": [labels], "edges": [[u, v, w], ...]} with u, v as labels.
std::string graph_to_json(const Graph &g);

// ---- threshold graphs and neighbourhood inclusion ----

enum class Creation { Isolated, Dominating };

/// Node k joins all earlier nodes iff its entry is Dominating. The first entry is ignored.
Graph threshold_graph(const std::vector<Creation> &sequence);

/// Ordered pairs (i, j), i != j, such that N(j) \ {i} is a subset of N(i).
struct DominanceRelation {
    std::vector<std::pair<NodeId, NodeId>> pairs;

    bool contains(NodeId dominator, NodeId dominated) const;
};

DominanceRelation dominance_pairs(const Graph &g);

/// Non-increasing degree sequence and its corrected conjugate.
struct DegreeSequence {
    std::vector<long> degrees;
    std::vector<long> conjugate;
};

DegreeSequence degree_sequence(const Graph &g);

} // namespace centrakit
