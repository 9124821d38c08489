#include "centrakit/profiling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "centrakit/cmc.hpp"
#include "centrakit/community.hpp"
#include "centrakit/util.hpp"

namespace centrakit {

Eigen::MatrixXd rank_normalize_matrix(const Eigen::MatrixXd &scores,
                                      std::vector<std::size_t> *constant_columns) {
    const auto n = scores.rows();
    if (n < 2)
        throw std::invalid_argument("rank_normalize: need at least two nodes");
    Eigen::MatrixXd out(n, scores.cols());
    for (Eigen::Index c = 0; c < scores.cols(); ++c) {
        std::vector<double> col(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i)
            col[static_cast<std::size_t>(i)] = round_significant(scores(i, c));
        if (std::all_of(col.begin(), col.end(), [&](double v) { return v == col.front(); })) {
            out.col(c).setConstant(0.5);
            if (constant_columns)
                constant_columns->push_back(static_cast<std::size_t>(c));
            continue;
        }
        const std::vector<double> r = midranks(col);
        for (Eigen::Index i = 0; i < n; ++i)
            out(i, c) = (r[static_cast<std::size_t>(i)] - 1.0) / static_cast<double>(n - 1);
    }
    return out;
}

RankProfile rank_normalize(const CentralityProfile &profile, std::span<const Measure> exclude) {
    RankProfile rp;
    std::vector<Eigen::Index> keep;
    for (Measure m : kAllMeasures) {
        const bool dropped = std::find(exclude.begin(), exclude.end(), m) != exclude.end();
        if (dropped || !profile.is_defined(m)) {
            rp.excluded.push_back(m);
            continue;
        }
        rp.measures.push_back(m);
        keep.push_back(static_cast<Eigen::Index>(m));
    }
    Eigen::MatrixXd sub(profile.scores.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k)
        sub.col(static_cast<Eigen::Index>(k)) = profile.scores.col(keep[k]);
    std::vector<std::size_t> constant;
    rp.values = rank_normalize_matrix(sub, &constant);
    for (std::size_t c : constant)
        rp.constant.push_back(rp.measures[c]);
    return rp;
}

RankProfile rank_normalize_default(const CentralityProfile &profile) {
    const Measure rwcc[] = {Measure::RWCC};
    return rank_normalize(profile, rwcc);
}

std::vector<std::size_t> cut_tree(const std::vector<Merge> &merges, std::size_t n, std::size_t k) {
    if (k < 1 || k > n)
        throw std::invalid_argument("cut_tree: k must lie in [1, n]");
    // Union-find over cluster ids; apply the first n - k merges.
    std::vector<std::size_t> parent(2 * n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t m = 0; m < n - k; ++m) {
        parent[find(merges[m].left)] = n + m;
        parent[find(merges[m].right)] = n + m;
    }
    std::vector<std::size_t> root(n);
    for (std::size_t i = 0; i < n; ++i)
        root[i] = find(i);
    return canonical_labels(root);
}

std::vector<std::size_t> ClusteringResult::leaf_order() const {
    std::vector<std::size_t> out;
    if (n == 0)
        return out;
    if (merges.empty()) {
        out.push_back(0);
        return out;
    }
    std::vector<std::size_t> stack{n + merges.size() - 1};
    while (!stack.empty()) {
        const std::size_t id = stack.back();
        stack.pop_back();
        if (id < n) {
            out.push_back(id);
            continue;
        }
        const Merge &m = merges[id - n];
        stack.push_back(m.right);
        stack.push_back(m.left);
    }
    return out;
}

ClusteringResult ward_cluster(const Eigen::MatrixXd &rows, std::size_t k_max) {
    const auto n = static_cast<std::size_t>(rows.rows());
    if (n < 3)
        throw std::invalid_argument("ward_cluster: need at least three rows");
    const double inf = std::numeric_limits<double>::infinity();

    Eigen::MatrixXd d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                (rows.row(static_cast<Eigen::Index>(i)) - rows.row(static_cast<Eigen::Index>(j)))
                    .squaredNorm();
    auto D = [&](std::size_t i, std::size_t j) -> double & {
        return d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    };

    std::vector<bool> active(n, true);
    std::vector<std::size_t> id(n), size(n, 1);
    std::iota(id.begin(), id.end(), 0);
    // nn[i]: nearest active j > i (smallest j on ties).
    std::vector<std::size_t> nn(n, n);
    std::vector<double> nnd(n, inf);
    auto refresh = [&](std::size_t i) {
        nn[i] = n;
        nnd[i] = inf;
        for (std::size_t j = i + 1; j < n; ++j)
            if (active[j] && D(i, j) < nnd[i]) {
                nnd[i] = D(i, j);
                nn[i] = j;
            }
    };
    for (std::size_t i = 0; i < n; ++i)
        refresh(i);

    ClusteringResult out;
    out.n = n;
    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t a = n;
        for (std::size_t i = 0; i < n; ++i)
            if (active[i] && nn[i] < n && (a == n || nnd[i] < nnd[a]))
                a = i;
        const std::size_t b = nn[a];
        const double dab = D(a, b);
        out.merges.push_back({std::min(id[a], id[b]), std::max(id[a], id[b]),
                              std::sqrt(std::max(dab, 0.0)), size[a] + size[b]});

        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == a || k == b)
                continue;
            const double nk = static_cast<double>(size[k]);
            const double na = static_cast<double>(size[a]), nb = static_cast<double>(size[b]);
            const double v = ((na + nk) * D(k, a) + (nb + nk) * D(k, b) - nk * dab) / (na + nb + nk);
            D(k, a) = D(a, k) = v;
        }
        active[b] = false;
        size[a] += size[b];
        id[a] = n + step;

        refresh(a);
        for (std::size_t k = 0; k < a; ++k) {
            if (!active[k])
                continue;
            if (nn[k] == a || nn[k] == b)
                refresh(k);
            else if (D(k, a) < nnd[k] || (D(k, a) == nnd[k] && a < nn[k])) {
                nnd[k] = D(k, a);
                nn[k] = a;
            }
        }
        for (std::size_t k = a + 1; k < b; ++k)
            if (active[k] && nn[k] == b)
                refresh(k);
    }

    const std::size_t top = std::min(k_max, n);
    for (std::size_t k = 1; k <= top; ++k)
        out.labels_per_k.push_back(cut_tree(out.merges, n, k));
    for (std::size_t k = 2; k <= std::min(k_max, n - 1); ++k)
        out.db_curve.push_back(davies_bouldin(rows, out.labels_per_k[k - 1]));
    out.selected_k = k_max >= 2 ? select_k(out, k_max) : 0;
    return out;
}

std::optional<double> davies_bouldin(const Eigen::MatrixXd &rows,
                                     std::span<const std::size_t> labels) {
    const auto n = rows.rows();
    if (static_cast<Eigen::Index>(labels.size()) != n)
        throw std::invalid_argument("davies_bouldin: one label per row required");
    const std::size_t k = *std::max_element(labels.begin(), labels.end()) + 1;
    if (k < 2)
        throw std::invalid_argument("davies_bouldin: need at least two clusters");
    Eigen::MatrixXd centroid = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), rows.cols());
    std::vector<double> count(k, 0.0), spread(k, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        centroid.row(static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)])) += rows.row(i);
        count[labels[static_cast<std::size_t>(i)]] += 1.0;
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (count[c] == 0.0)
            throw std::invalid_argument("davies_bouldin: empty cluster");
        centroid.row(static_cast<Eigen::Index>(c)) /= count[c];
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::size_t c = labels[static_cast<std::size_t>(i)];
        spread[c] += (rows.row(i) - centroid.row(static_cast<Eigen::Index>(c))).norm() / count[c];
    }
    double total = 0.0;
    std::size_t defined = 0;
    for (std::size_t a = 0; a < k; ++a) {
        double worst = -1.0;
        for (std::size_t b = 0; b < k; ++b) {
            if (a == b)
                continue;
            const double sep = (centroid.row(static_cast<Eigen::Index>(a)) -
                                centroid.row(static_cast<Eigen::Index>(b)))
                                   .norm();
            if (!(sep > 0.0))
                continue;
            worst = std::max(worst, (spread[a] + spread[b]) / sep);
        }
        if (worst >= 0.0) {
            total += worst;
            ++defined;
        }
    }
    if (defined == 0)
        return std::nullopt;
    return total / static_cast<double>(defined);
}

std::size_t select_k(const ClusteringResult &result, std::size_t k_max) {
    if (k_max < 2)
        throw std::invalid_argument("select_k: k_max must be at least 2");
    const std::size_t top = std::min(k_max, result.n - 1);
    std::size_t best = 0;
    double best_db = 0.0;
    for (std::size_t k = 2; k <= top && k - 2 < result.db_curve.size(); ++k) {
        const auto &db = result.db_curve[k - 2];
        // Differences at rounding level count as ties.
        if (db && (best == 0 || *db < best_db - 1e-12)) {
            best = k;
            best_db = *db;
        }
    }
    return best;
}

Eigen::MatrixX2d layout(const Graph &g, std::uint64_t seed, std::size_t iterations) {
    const std::size_t n = g.node_count();
    Eigen::MatrixX2d pos(static_cast<Eigen::Index>(n), 2);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Eigen::Index i = 0; i < pos.rows(); ++i) {
        pos(i, 0) = unit(rng);
        pos(i, 1) = unit(rng);
    }
    if (n < 2)
        return pos;
    const double k = std::sqrt(1.0 / static_cast<double>(n));
    const double t0 = 0.1;
    Eigen::MatrixX2d disp(pos.rows(), 2);
    for (std::size_t it = 0; it < iterations; ++it) {
        disp.setZero();
        for (Eigen::Index i = 0; i < pos.rows(); ++i) {
            for (Eigen::Index j = i + 1; j < pos.rows(); ++j) {
                Eigen::RowVector2d delta = pos.row(i) - pos.row(j);
                double dist = delta.norm();
                if (dist < 1e-9) {
                    // Coincident points: push apart along a fixed, index-dependent direction.
                    const double angle = static_cast<double>(i * 7 + j * 13);
                    delta = Eigen::RowVector2d(std::cos(angle), std::sin(angle)) * 1e-9;
                    dist = 1e-9;
                }
                const Eigen::RowVector2d f = delta / dist * (k * k / dist);
                disp.row(i) += f;
                disp.row(j) -= f;
            }
        }
        for (const Edge &e : g.edges()) {
            const auto u = static_cast<Eigen::Index>(e.u), v = static_cast<Eigen::Index>(e.v);
            const Eigen::RowVector2d delta = pos.row(u) - pos.row(v);
            const double dist = delta.norm();
            if (dist < 1e-12)
                continue;
            const Eigen::RowVector2d f = delta / dist * (dist * dist / k);
            disp.row(u) -= f;
            disp.row(v) += f;
        }
        const double temp = t0 * (1.0 - static_cast<double>(it) / static_cast<double>(iterations));
        for (Eigen::Index i = 0; i < pos.rows(); ++i) {
            const double len = disp.row(i).norm();
            if (len > 0.0)
                pos.row(i) += disp.row(i) / len * std::min(len, temp);
        }
    }
    const Eigen::RowVector2d centre = pos.colwise().mean();
    pos.rowwise() -= centre;
    return pos;
}

namespace {

std::vector<std::string> measure_names(const std::vector<Measure> &ms) {
    std::vector<std::string> out;
    for (Measure m : ms)
        out.emplace_back(measure_name(m));
    return out;
}

} // namespace

std::string clusters_to_json(const Graph &g, const RankProfile &rp, const ClusteringResult &c) {
    nlohmann::json j;
    j["selected_k"] = c.selected_k;
    j["measures"] = measure_names(rp.measures);
    j["excluded"] = measure_names(rp.excluded);
    j["constant"] = measure_names(rp.constant);
    nlohmann::json curve = nlohmann::json::array();
    for (std::size_t k = 0; k < c.db_curve.size(); ++k) {
        nlohmann::json row;
        row["k"] = k + 2;
        row["db"] = c.db_curve[k] ? nlohmann::json(round_significant(*c.db_curve[k])) : nullptr;
        curve.push_back(std::move(row));
    }
    j["db_curve"] = std::move(curve);
    nlohmann::json cuts = nlohmann::json::array();
    for (std::size_t k = 0; k < c.labels_per_k.size(); ++k) {
        nlohmann::json row;
        row["k"] = k + 1;
        nlohmann::json labels = nlohmann::json::object();
        for (NodeId i = 0; i < g.node_count(); ++i)
            labels[g.label(i)] = c.labels_per_k[k][i];
        row["labels"] = std::move(labels);
        cuts.push_back(std::move(row));
    }
    j["cuts"] = std::move(cuts);
    // Labels at the selected cut; empty when no k could be scored.
    nlohmann::json chosen = nlohmann::json::object();
    if (c.selected_k >= 1 && c.selected_k <= c.labels_per_k.size())
        for (NodeId i = 0; i < g.node_count(); ++i)
            chosen[g.label(i)] = c.labels_per_k[c.selected_k - 1][i];
    j["labels"] = std::move(chosen);
    return j.dump(2);
}

std::string dendrogram_to_json(const Graph &g, const ClusteringResult &c) {
    nlohmann::json j;
    std::vector<std::string> leaves;
    for (std::size_t i : c.leaf_order())
        leaves.push_back(g.label(i));
    j["leaves"] = leaves;
    nlohmann::json merges = nlohmann::json::array();
    for (const Merge &m : c.merges) {
        nlohmann::json row;
        row["left"] = m.left;
        row["right"] = m.right;
        row["height"] = round_significant(m.height);
        row["size"] = m.size;
        merges.push_back(std::move(row));
    }
    j["merges"] = std::move(merges);
    return j.dump(2);
}

std::string layout_to_csv(const Graph &g, const Eigen::MatrixX2d &xy) {
    std::ostringstream os;
    os << "label,x,y\n";
    for (NodeId i = 0; i < g.node_count(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        os << g.label(i) << ',' << format_number(xy(r, 0)) << ',' << format_number(xy(r, 1))
           << '\n';
    }
    return os.str();
}

std::string heatmap_to_csv(const Graph &g, const RankProfile &rp, const ClusteringResult &c) {
    std::ostringstream os;
    os << "node,cluster";
    for (Measure m : rp.measures)
        os << ',' << measure_name(m);
    os << '\n';
    const bool have_k = c.selected_k >= 1 && c.selected_k <= c.labels_per_k.size();
    for (std::size_t i : c.leaf_order()) {
        os << g.label(i) << ',';
        if (have_k)
            os << c.labels_per_k[c.selected_k - 1][i];
        for (Eigen::Index col = 0; col < rp.values.cols(); ++col)
            os << ',' << format_number(rp.values(static_cast<Eigen::Index>(i), col));
        os << '\n';
    }
    return os.str();
}

} // namespace centrakit
