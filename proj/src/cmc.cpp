#include "centrakit/cmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "centrakit/util.hpp"

namespace centrakit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_constant(const std::vector<double> &v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

double pearson(const std::vector<double> &x, const std::vector<double> &y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

Eigen::VectorXd zscore(const Eigen::VectorXd &v) {
    const double mean = v.mean();
    const Eigen::VectorXd c = v.array() - mean;
    const double sd = std::sqrt(c.squaredNorm() / static_cast<double>(v.size() - 1));
    return c / sd;
}

double sample_sd(const Eigen::VectorXd &v) {
    const Eigen::VectorXd c = v.array() - v.mean();
    return std::sqrt(c.squaredNorm() / static_cast<double>(v.size() - 1));
}

double rss_of(const Eigen::MatrixXd &design, const Eigen::VectorXd &y) {
    const Eigen::VectorXd b = design.householderQr().solve(y);
    return (y - design * b).squaredNorm();
}

nlohmann::json number_or_null(double x) {
    if (!std::isfinite(x))
        return nullptr;
    return round_significant(x);
}

} // namespace

std::vector<double> midranks(const std::vector<double> &values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]])
            ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

std::optional<double> spearman(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size())
        throw std::invalid_argument("spearman: length mismatch");
    if (x.size() < 3)
        throw std::invalid_argument("spearman: need at least 3 observations");
    if (is_constant(x) || is_constant(y))
        return std::nullopt;
    return pearson(midranks(x), midranks(y));
}

std::size_t CmcMatrix::defined_pairs() const {
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < defined.rows(); ++i)
        for (Eigen::Index j = i + 1; j < defined.cols(); ++j)
            count += defined(i, j);
    return count;
}

CmcMatrix cmc_matrix(const CentralityProfile &profile) {
    const std::size_t n = profile.node_count();
    if (n < 3)
        throw std::invalid_argument("cmc_matrix: need at least 3 nodes");
    CmcMatrix out;
    out.measures.assign(kAllMeasures.begin(), kAllMeasures.end());
    const auto m = static_cast<Eigen::Index>(kMeasureCount);
    out.rho = Eigen::MatrixXd::Constant(m, m, kNaN);
    out.defined = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(m, m, false);

    std::vector<std::vector<double>> ranks(kMeasureCount);
    std::vector<bool> usable(kMeasureCount, false);
    for (std::size_t k = 0; k < kMeasureCount; ++k) {
        if (!profile.defined[k])
            continue;
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i)
            col[i] = round_significant(profile.scores(static_cast<Eigen::Index>(i),
                                                      static_cast<Eigen::Index>(k)));
        if (is_constant(col) || !std::all_of(col.begin(), col.end(),
                                             [](double v) { return std::isfinite(v); }))
            continue;
        usable[k] = true;
        ranks[k] = midranks(col);
    }
    for (Eigen::Index a = 0; a < m; ++a) {
        if (!usable[static_cast<std::size_t>(a)])
            continue;
        out.rho(a, a) = 1.0;
        out.defined(a, a) = true;
        for (Eigen::Index b = a + 1; b < m; ++b) {
            if (!usable[static_cast<std::size_t>(b)])
                continue;
            const double r =
                pearson(ranks[static_cast<std::size_t>(a)], ranks[static_cast<std::size_t>(b)]);
            out.rho(a, b) = out.rho(b, a) = r;
            out.defined(a, b) = out.defined(b, a) = true;
        }
    }
    return out;
}

std::optional<double> mean_within(const CmcMatrix &cmc) {
    double sum = 0.0;
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < cmc.rho.rows(); ++i)
        for (Eigen::Index j = i + 1; j < cmc.rho.cols(); ++j)
            if (cmc.defined(i, j)) {
                sum += cmc.rho(i, j);
                ++count;
            }
    if (count == 0)
        return std::nullopt;
    return sum / static_cast<double>(count);
}

CmcAggregates between_network_stats(const std::vector<CmcMatrix> &cmcs) {
    if (cmcs.empty())
        throw std::invalid_argument("between_network_stats: no networks");
    CmcAggregates out;
    out.measures = cmcs.front().measures;
    const auto m = static_cast<Eigen::Index>(out.measures.size());
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(m, m), sq = Eigen::MatrixXd::Zero(m, m);
    out.count = Eigen::MatrixXi::Zero(m, m);
    for (const CmcMatrix &c : cmcs) {
        if (c.measures != out.measures)
            throw std::invalid_argument("between_network_stats: measure lists differ");
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j)
                if (c.defined(i, j)) {
                    sum(i, j) += c.rho(i, j);
                    sq(i, j) += c.rho(i, j) * c.rho(i, j);
                    ++out.count(i, j);
                }
    }
    out.between_mean = Eigen::MatrixXd::Constant(m, m, kNaN);
    out.between_std = Eigen::MatrixXd::Constant(m, m, kNaN);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
            const double k = out.count(i, j);
            if (k == 0)
                continue;
            const double mean = sum(i, j) / k;
            out.between_mean(i, j) = mean;
            out.between_std(i, j) = std::sqrt(std::max(sq(i, j) / k - mean * mean, 0.0));
        }
    return out;
}

RegressionReport regress_cmc(const std::vector<double> &y, const Eigen::MatrixXd &x,
                             const std::vector<std::string> &names) {
    const auto n = x.rows();
    const auto p = x.cols();
    if (static_cast<Eigen::Index>(y.size()) != n)
        throw std::invalid_argument("regress_cmc: response length differs from design rows");
    if (static_cast<Eigen::Index>(names.size()) != p)
        throw std::invalid_argument("regress_cmc: one name per predictor required");
    if (p == 0 || n < p + 2)
        throw std::invalid_argument("regress_cmc: need rows >= predictors + 2");

    const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    if (!(sample_sd(yv) > 0.0))
        throw std::invalid_argument("regress_cmc: response is constant");
    const Eigen::VectorXd yz = zscore(yv);

    Eigen::MatrixXd design(n, p + 1);
    design.col(0).setOnes();
    for (Eigen::Index j = 0; j < p; ++j) {
        if (!(sample_sd(x.col(j)) > 0.0))
            throw CollinearityError({names[static_cast<std::size_t>(j)]},
                                    "predictor '" + names[static_cast<std::size_t>(j)] +
                                        "' is constant");
        design.col(j + 1) = zscore(x.col(j));
    }

    // Sequential rank check: each predictor against the intercept and the ones before it.
    for (Eigen::Index j = 1; j <= p; ++j) {
        const Eigen::MatrixXd prev = design.leftCols(j);
        const Eigen::VectorXd col = design.col(j);
        const Eigen::VectorXd b = prev.householderQr().solve(col);
        const double resid = (col - prev * b).norm();
        if (resid <= 1e-8 * col.norm()) {
            std::vector<std::string> involved;
            for (Eigen::Index k = 1; k < j; ++k)
                if (std::abs(b(k)) > 1e-8)
                    involved.push_back(names[static_cast<std::size_t>(k - 1)]);
            involved.push_back(names[static_cast<std::size_t>(j - 1)]);
            std::string list;
            for (const auto &s : involved)
                list += (list.empty() ? "" : ", ") + s;
            throw CollinearityError(involved, "collinear predictors: " + list);
        }
    }

    const Eigen::VectorXd beta = design.householderQr().solve(yz);
    const double rss = (yz - design * beta).squaredNorm();
    const double tss = yz.squaredNorm();
    RegressionReport out;
    out.predictors = names;
    out.observations = static_cast<std::size_t>(n);
    out.df_residual = static_cast<std::size_t>(n - p - 1);
    out.r_squared = std::clamp(1.0 - rss / tss, 0.0, 1.0);
    const double df = static_cast<double>(out.df_residual);
    out.adjusted_r_squared = 1.0 - (1.0 - out.r_squared) * static_cast<double>(n - 1) / df;

    const double sigma2 = rss / df;
    const Eigen::MatrixXd gram_inv =
        (design.transpose() * design).ldlt().solve(Eigen::MatrixXd::Identity(p + 1, p + 1));
    const boost::math::students_t tdist(df);
    for (Eigen::Index j = 1; j <= p; ++j) {
        const double b = beta(j);
        const double se = std::sqrt(std::max(sigma2 * gram_inv(j, j), 0.0));
        const double t = se > 0.0 ? b / se : std::copysign(std::numeric_limits<double>::infinity(), b);
        const double pv = std::isfinite(t)
                              ? 2.0 * boost::math::cdf(boost::math::complement(tdist, std::abs(t)))
                              : 0.0;
        Eigen::MatrixXd reduced(n, p);
        reduced << design.leftCols(j), design.rightCols(p - j);
        const double r2_without = 1.0 - rss_of(reduced, yz) / tss;
        out.beta.push_back(b);
        out.se.push_back(se);
        out.t.push_back(t);
        out.p.push_back(pv);
        out.variance_share.push_back(std::max(out.r_squared - r2_without, 0.0));
    }
    return out;
}

std::string cmc_to_csv(const CmcMatrix &cmc) {
    std::ostringstream os;
    os << "measure";
    for (Measure m : cmc.measures)
        os << ',' << measure_name(m);
    os << '\n';
    for (std::size_t i = 0; i < cmc.size(); ++i) {
        os << measure_name(cmc.measures[i]);
        for (std::size_t j = 0; j < cmc.size(); ++j) {
            os << ',';
            const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
            if (cmc.defined(a, b))
                os << format_number(cmc.rho(a, b));
        }
        os << '\n';
    }
    return os.str();
}

std::string aggregates_to_json(const CmcAggregates &agg) {
    nlohmann::json j;
    std::vector<std::string> names;
    for (Measure m : agg.measures)
        names.emplace_back(measure_name(m));
    j["measures"] = names;
    auto matrix = [](const auto &mat, bool integer) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index i = 0; i < mat.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index k = 0; k < mat.cols(); ++k) {
                if (integer)
                    row.push_back(static_cast<long>(mat(i, k)));
                else
                    row.push_back(number_or_null(static_cast<double>(mat(i, k))));
            }
            rows.push_back(std::move(row));
        }
        return rows;
    };
    j["mean"] = matrix(agg.between_mean, false);
    j["std"] = matrix(agg.between_std, false);
    j["count"] = matrix(agg.count, true);
    return j.dump(2);
}

std::string regression_to_json(const RegressionReport &r) {
    nlohmann::json j;
    j["r_squared"] = number_or_null(r.r_squared);
    j["adjusted_r_squared"] = number_or_null(r.adjusted_r_squared);
    j["observations"] = r.observations;
    j["df_residual"] = r.df_residual;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < r.predictors.size(); ++k) {
        nlohmann::json row;
        row["name"] = r.predictors[k];
        row["beta"] = number_or_null(r.beta[k]);
        row["se"] = number_or_null(r.se[k]);
        row["t"] = number_or_null(r.t[k]);
        row["p"] = number_or_null(r.p[k]);
        row["variance_share"] = number_or_null(r.variance_share[k]);
        rows.push_back(std::move(row));
    }
    j["predictors"] = std::move(rows);
    return j.dump(2);
}

} // namespace centrakit
