#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "centrakit/centrality.hpp"

namespace centrakit {

/// Average ranks (1-based, ties share the mean of their positions).
std::vector<double> midranks(const std::vector<double> &values);

/// Pearson correlation of midranks. nullopt when either vector is constant.
/// Throws std::invalid_argument on length mismatch or fewer than 3 values.
std::optional<double> spearman(const std::vector<double> &x, const std::vector<double> &y);

/// Pairwise Spearman correlations between profile columns.
struct CmcMatrix {
    std::vector<Measure> measures;
    Eigen::MatrixXd rho;
    /// defined(i, j) is 0 where either column is undefined or constant.
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> defined;

    std::size_t size() const { return measures.size(); }
    /// Defined cells strictly above the diagonal.
    std::size_t defined_pairs() const;
};

/// Columns are compared after rounding to 10 significant digits, so scores that differ only by
/// floating-point noise count as ties.
CmcMatrix cmc_matrix(const CentralityProfile &profile);

/// Mean over defined upper-triangle cells; nullopt when there are none.
std::optional<double> mean_within(const CmcMatrix &cmc);

struct CmcAggregates {
    std::vector<Measure> measures;
    Eigen::MatrixXd between_mean; // NaN where no network defines the pair
    Eigen::MatrixXd between_std;  // population standard deviation
    Eigen::MatrixXi count;        // networks contributing to each cell
};

/// Per-cell mean and population std across networks, masking undefined cells. All matrices must
/// share the same measure list.
CmcAggregates between_network_stats(const std::vector<CmcMatrix> &cmcs);

struct RegressionReport {
    std::vector<std::string> predictors;
    std::vector<double> beta;     // standardised coefficients
    std::vector<double> se;
    std::vector<double> t;
    std::vector<double> p;        // two-sided
    std::vector<double> variance_share; // squared semi-partial correlation
    double r_squared = 0.0;
    double adjusted_r_squared = 0.0;
    std::size_t observations = 0;
    std::size_t df_residual = 0;
};

/// Thrown when the design matrix is rank deficient; `columns()` names the offending predictors.
class CollinearityError : public Error {
public:
    CollinearityError(std::vector<std::string> columns, const std::string &what)
        : Error(what), columns_(std::move(columns)) {}
    const std::vector<std::string> &columns() const noexcept { return columns_; }

private:
    std::vector<std::string> columns_;
};

/// OLS of z-scored y on z-scored columns of x (with intercept). Needs rows >= columns + 2.
RegressionReport regress_cmc(const std::vector<double> &y, const Eigen::MatrixXd &x,
                             const std::vector<std::string> &names);

/// 17 x 17 CSV with a header row and column; undefined cells are empty.
std::string cmc_to_csv(const CmcMatrix &cmc);
/// {"measures": [...], "mean": [[...]], "std": [[...]], "count": [[...]]}, null for undefined.
std::string aggregates_to_json(const CmcAggregates &agg);
std::string regression_to_json(const RegressionReport &report);

} // namespace centrakit
