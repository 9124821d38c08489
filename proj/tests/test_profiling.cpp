#include <doctest.h>

#include <random>
#include <set>

#include <json.hpp>

#include "centrakit/generators.hpp"
#include "centrakit/profiling.hpp"

using namespace centrakit;
using doctest::Approx;

namespace {

/// Blobs of `per` rows around well-separated centres in `dims` dimensions.
Eigen::MatrixXd blobs(std::size_t count, std::size_t per, std::size_t dims, double spread,
                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, spread);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(count * per), static_cast<Eigen::Index>(dims));
    for (std::size_t c = 0; c < count; ++c)
        for (std::size_t r = 0; r < per; ++r)
            for (std::size_t d = 0; d < dims; ++d) {
                const double centre = (d % count == c) ? 0.9 : 0.1;
                out(static_cast<Eigen::Index>(c * per + r), static_cast<Eigen::Index>(d)) =
                    centre + noise(rng);
            }
    return out;
}

/// Ward merge heights recomputed from scratch at every step from cluster centroids.
std::vector<double> ward_heights_naive(const Eigen::MatrixXd &x) {
    std::vector<std::vector<Eigen::Index>> clusters;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        clusters.push_back({i});
    std::vector<double> heights;
    while (clusters.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t ba = 0, bb = 0;
        for (std::size_t a = 0; a < clusters.size(); ++a)
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                Eigen::RowVectorXd ca = Eigen::RowVectorXd::Zero(x.cols());
                Eigen::RowVectorXd cb = ca;
                for (auto i : clusters[a])
                    ca += x.row(i);
                for (auto i : clusters[b])
                    cb += x.row(i);
                const double na = static_cast<double>(clusters[a].size());
                const double nb = static_cast<double>(clusters[b].size());
                ca /= na;
                cb /= nb;
                const double d = std::sqrt(2.0 * na * nb / (na + nb)) * (ca - cb).norm();
                if (d < best) {
                    best = d;
                    ba = a;
                    bb = b;
                }
            }
        heights.push_back(best);
        clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
        clusters.erase(clusters.begin() + static_cast<long>(bb));
    }
    return heights;
}

double within_ss(const Eigen::MatrixXd &x, const std::vector<std::size_t> &labels) {
    double total = 0.0;
    for (std::size_t c = 0; c < 2; ++c) {
        Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(x.cols());
        double count = 0;
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            if (labels[static_cast<std::size_t>(i)] == c) {
                mean += x.row(i);
                ++count;
            }
        mean /= count;
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            if (labels[static_cast<std::size_t>(i)] == c)
                total += (x.row(i) - mean).squaredNorm();
    }
    return total;
}

} // namespace

TEST_CASE("rank_normalize") {
    Eigen::MatrixXd m(3, 3);
    m << 10, 1, 4, 20, 2, 4, 30, 2, 4;
    std::vector<std::size_t> constant;
    const Eigen::MatrixXd r = rank_normalize_matrix(m, &constant);
    CHECK(r(0, 0) == 0.0);
    CHECK(r(1, 0) == 0.5);
    CHECK(r(2, 0) == 1.0);
    CHECK(r(0, 1) == 0.0);
    CHECK(r(1, 1) == 0.75);
    CHECK(r(2, 1) == 0.75);
    CHECK(r.col(2).isConstant(0.5));
    CHECK(constant == std::vector<std::size_t>{2});

    SUBCASE("monotone transforms leave ranks unchanged") {
        std::mt19937_64 rng(1);
        std::uniform_int_distribution<int> d(0, 9);
        Eigen::MatrixXd a(20, 2);
        for (Eigen::Index i = 0; i < 20; ++i)
            a(i, 0) = a(i, 1) = d(rng);
        a.col(1) = (a.col(1).array() * 0.3).exp() + 5.0;
        const Eigen::MatrixXd ra = rank_normalize_matrix(a);
        CHECK(ra.col(0).isApprox(ra.col(1)));
        CHECK(ra.minCoeff() >= 0.0);
        CHECK(ra.maxCoeff() <= 1.0);
    }
    SUBCASE("profile columns: RWCC and undefined columns are excluded") {
        std::mt19937_64 rng(2);
        const Graph g = gen::random_connected(20, 0.15, rng);
        const CentralityProfile p = compute_profile(g, {}, {});
        const RankProfile rp = rank_normalize_default(p);
        CHECK(std::find(rp.excluded.begin(), rp.excluded.end(), Measure::RWCC) != rp.excluded.end());
        CHECK(std::find(rp.excluded.begin(), rp.excluded.end(), Measure::PC) != rp.excluded.end());
        CHECK(rp.values.cols() == static_cast<Eigen::Index>(rp.measures.size()));
        CHECK(rp.measures.size() + rp.excluded.size() == kMeasureCount);
    }
    CHECK_THROWS_AS(rank_normalize_matrix(Eigen::MatrixXd::Ones(1, 2)), std::invalid_argument);
}

TEST_CASE("ward_cluster") {
    SUBCASE("identical rows merge first at height zero") {
        Eigen::MatrixXd x(4, 2);
        x << 0, 0, 5, 5, 1, 0, 5, 5;
        const ClusteringResult c = ward_cluster(x);
        CHECK(c.merges[0].left == 1);
        CHECK(c.merges[0].right == 3);
        CHECK(c.merges[0].height == 0.0);
    }
    SUBCASE("equidistant rows: smallest index pair first") {
        // Identity rows are exactly equidistant in floating point.
        Eigen::MatrixXd e = Eigen::MatrixXd::Identity(3, 3);
        const ClusteringResult c = ward_cluster(e);
        CHECK(c.merges[0].left == 0);
        CHECK(c.merges[0].right == 1);
        CHECK(c.merges[1].left == 2);
        CHECK(c.merges[1].right == 3);
    }
    SUBCASE("heights match a from-scratch centroid computation") {
        for (std::uint64_t s = 0; s < 5; ++s) {
            std::mt19937_64 rng(s);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            Eigen::MatrixXd x(25, 4);
            for (Eigen::Index i = 0; i < x.rows(); ++i)
                for (Eigen::Index j = 0; j < x.cols(); ++j)
                    x(i, j) = u(rng);
            const ClusteringResult c = ward_cluster(x);
            const std::vector<double> naive = ward_heights_naive(x);
            REQUIRE(c.merges.size() == naive.size());
            for (std::size_t k = 0; k < naive.size(); ++k)
                CHECK(c.merges[k].height == Approx(naive[k]).epsilon(1e-10));
            for (std::size_t k = 1; k < c.merges.size(); ++k)
                CHECK(c.merges[k].height >= c.merges[k - 1].height);
            CHECK(c.merges.back().size == 25);
        }
    }
    SUBCASE("cuts are nested and have exactly k clusters") {
        const Eigen::MatrixXd x = blobs(3, 10, 15, 0.01, 3);
        const ClusteringResult c = ward_cluster(x);
        REQUIRE(c.labels_per_k.size() == 30);
        for (std::size_t k = 1; k <= 30; ++k) {
            const auto &lab = c.labels_per_k[k - 1];
            CHECK(std::set<std::size_t>(lab.begin(), lab.end()).size() == k);
            if (k == 1)
                continue;
            // Each k-cluster lies inside one (k-1)-cluster.
            const auto &coarse = c.labels_per_k[k - 2];
            std::map<std::size_t, std::size_t> parent;
            for (std::size_t i = 0; i < lab.size(); ++i) {
                auto [it, fresh] = parent.try_emplace(lab[i], coarse[i]);
                CHECK(it->second == coarse[i]);
            }
        }
        CHECK(c.selected_k == 3);
    }
    SUBCASE("planted two blobs: top split is the least-variance 2-partition") {
        const Eigen::MatrixXd x = blobs(2, 6, 3, 0.03, 4);
        const ClusteringResult c = ward_cluster(x);
        const auto &two = c.labels_per_k[1];
        double best = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> arg;
        for (std::uint32_t mask = 1; mask < (1u << 11); ++mask) {
            std::vector<std::size_t> lab(12, 0);
            for (std::size_t i = 1; i < 12; ++i)
                lab[i] = (mask >> (i - 1)) & 1u;
            const double w = within_ss(x, lab);
            if (w < best) {
                best = w;
                arg = lab;
            }
        }
        for (std::size_t i = 0; i < 12; ++i)
            CHECK((two[i] == two[0]) == (arg[i] == arg[0]));
        CHECK(c.selected_k == 2);
    }
    CHECK_THROWS_AS(ward_cluster(Eigen::MatrixXd::Zero(2, 2)), std::invalid_argument);
}

TEST_CASE("davies_bouldin and select_k") {
    const Eigen::MatrixXd two = blobs(2, 20, 15, 0.05, 5);
    const ClusteringResult c = ward_cluster(two);
    CHECK(*davies_bouldin(two, c.labels_per_k[1]) < *davies_bouldin(two, c.labels_per_k[2]));
    CHECK(c.selected_k == 2);
    CHECK(select_k(c, 50) == 2);

    SUBCASE("singletons score zero") {
        Eigen::MatrixXd x(4, 2);
        x << 0, 0, 1, 0, 0, 1, 1, 1;
        const std::vector<std::size_t> lab{0, 1, 2, 3};
        CHECK(*davies_bouldin(x, lab) == 0.0);
    }
    SUBCASE("coincident centres are skipped; overlapping clusters score high") {
        Eigen::MatrixXd x(4, 1);
        x << 0, 1, 0, 1;
        const std::vector<std::size_t> same{0, 0, 1, 1};
        CHECK_FALSE(davies_bouldin(x, same).has_value());
        Eigen::MatrixXd y(6, 1);
        y << 0, 1, 0.05, 1.05, 10, 10.1;
        const std::vector<std::size_t> bad{0, 0, 1, 1, 2, 2};
        const std::vector<std::size_t> good{0, 1, 0, 1, 2, 2};
        CHECK(*davies_bouldin(y, bad) > *davies_bouldin(y, good));
        CHECK(*davies_bouldin(y, bad) > 5.0);
    }
    SUBCASE("search bound on tiny inputs") {
        Eigen::MatrixXd x(4, 1);
        x << 0, 0.1, 5, 5.1;
        const ClusteringResult r = ward_cluster(x);
        CHECK(r.db_curve.size() == 2); // k = 2, 3
        // Singletons have zero spread, so k = n - 1 wins here: {0, 0.1}, {5}, {5.1}.
        CHECK(*r.db_curve[0] == Approx(0.02));
        CHECK(r.selected_k == 3);
    }
    CHECK_THROWS_AS(select_k(c, 1), std::invalid_argument);
}

TEST_CASE("layout") {
    const Eigen::MatrixX2d k2 = layout(gen::complete(2), 1);
    CHECK((k2.row(0) - k2.row(1)).norm() > 0.0);
    const Graph c4 = gen::cycle(4);
    const Eigen::MatrixX2d a = layout(c4, 7), b = layout(c4, 7);
    CHECK(a == b);
    CHECK(a.allFinite());
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            CHECK((a.row(i) - a.row(j)).norm() > 0.0);
    std::mt19937_64 rng(8);
    const Graph g = gen::random_connected(60, 0.05, rng);
    CHECK(layout(g, 3).allFinite());
}

TEST_CASE("profiling exports") {
    std::mt19937_64 rng(9);
    const Graph g = gen::random_connected(15, 0.2, rng);
    const RankProfile rp = rank_normalize_default(compute_profile(g, {}, {}));
    const ClusteringResult c = ward_cluster(rp.values, 10);
    const auto clusters = nlohmann::json::parse(clusters_to_json(g, rp, c));
    CHECK(clusters["selected_k"] == c.selected_k);
    CHECK(clusters["cuts"].size() == 10);
    CHECK(clusters["db_curve"].size() == 9);
    const auto dendro = nlohmann::json::parse(dendrogram_to_json(g, c));
    CHECK(dendro["leaves"].size() == 15);
    CHECK(dendro["merges"].size() == 14);
    const std::string heat = heatmap_to_csv(g, rp, c);
    CHECK(std::count(heat.begin(), heat.end(), '\n') == 16);
    const std::string lay = layout_to_csv(g, layout(g, 1));
    CHECK(lay.rfind("label,x,y\n", 0) == 0);
    std::vector<std::size_t> order = c.leaf_order();
    std::sort(order.begin(), order.end());
    for (std::size_t i = 0; i < order.size(); ++i)
        CHECK(order[i] == i);
}
