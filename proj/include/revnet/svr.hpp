#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace revnet {

struct svr_config {
  double C = 100.0;
  double gamma = 0.02;
  double epsilon = 0.1;
  double tol = 1e-3;  // KKT gap at which the solver stops
  long max_iterations = 10'000'000;
  double cache_mb = 256.0;  // kernel row cache budget
  std::uint64_t seed = 0;   // fold shuffling

  /// Throws std::invalid_argument unless C > 0, gamma > 0, epsilon >= 0, tol > 0.
  void check() const;
};

/// Column z-scoring with training statistics (population standard deviation).
struct standard_scaler {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;
  std::vector<Eigen::Index> clamped;  // zero-variance columns whose scale was set to 1

  static standard_scaler fit(const Eigen::MatrixXd& X);
  Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const;
};

struct svr_model {
  svr_config config;
  standard_scaler scaler;
  std::vector<std::string> feature_names;
  Eigen::RowVectorXd impute_means;  // fill values for missing inputs at prediction time
  Eigen::MatrixXd support_vectors;  // standardized rows
  Eigen::VectorXd dual_coefs;       // alpha - alpha*
  std::vector<Eigen::Index> support_indices;  // training row of each support vector
  double bias = 0.0;

  long iterations = 0;
  double kkt_gap = 0.0;
  bool converged = false;
  std::vector<std::string> warnings;

  Eigen::Index width() const { return scaler.mean.size(); }
};

/// Fits epsilon-SVR with an RBF kernel by sequential minimal optimization
/// (maximal-violating pair, second-order choice of the partner). Inputs must be
/// free of NaN. Throws std::invalid_argument for fewer than two rows, shape
/// mismatches or an invalid config.
svr_model fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const svr_config& config,
              std::vector<std::string> feature_names = {});

/// f(x) = sum_i coef_i * exp(-gamma * |x - sv_i|^2) + bias on standardized x.
/// Throws std::invalid_argument on a width mismatch.
Eigen::VectorXd predict(const svr_model& model, const Eigen::MatrixXd& rows);

/// Largest violation of the epsilon-SVR optimality conditions over the training
/// set, recomputed from the model's own predictions:
///   coef = 0      ->  |r| <= epsilon
///   0 < |coef| < C ->  |r| == epsilon with sign(r) == sign(coef)
///   |coef| = C    ->  |r| >= epsilon
/// where r = y - f(x). Also reports dual infeasibility (|coef| > C, sum coef != 0).
double kkt_violation(const svr_model& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

using missing_flags = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Column means over the non-missing entries of the given rows; 0 for a column
/// with no observed entry.
Eigen::RowVectorXd observed_means(const Eigen::MatrixXd& X, const missing_flags& missing,
                                  const std::vector<Eigen::Index>& rows);

/// Replaces flagged entries with `means`.
Eigen::MatrixXd impute(Eigen::MatrixXd X, const missing_flags& missing, const Eigen::RowVectorXd& means);

struct fold_result {
  Eigen::Index size = 0;
  double r2 = 0.0;
  double rmse = 0.0;
};

struct eval_report {
  double r2 = 0.0;
  double rmse = 0.0;
  std::vector<fold_result> folds;
  std::vector<std::pair<std::string, double>> f_stats;  // in column order
  std::uint64_t seed = 0;
  int k = 0;
  Eigen::VectorXd predictions;  // held-out prediction for every row, input order
};

/// Seeded shuffle, k contiguous folds; each fold imputes with training-fold means,
/// fits and predicts its held-out rows. R2 and RMSE are pooled over all held-out
/// predictions; F-statistics are computed once on the mean-imputed full matrix.
/// Throws std::invalid_argument for k < 2 or k > rows.
eval_report cross_validate(const Eigen::MatrixXd& X, const missing_flags& missing, const Eigen::VectorXd& y,
                           const svr_config& config, int k, std::vector<std::string> feature_names = {});

/// Fits on every row after mean imputation; the means are stored in the model.
svr_model fit_imputed(const Eigen::MatrixXd& X, const missing_flags& missing, const Eigen::VectorXd& y,
                      const svr_config& config, std::vector<std::string> feature_names = {});

template <typename A, typename B>
double r2_score(const Eigen::MatrixBase<A>& y, const Eigen::MatrixBase<B>& yhat) {
  const double mean = y.mean();
  const double sse = (y - yhat).squaredNorm();
  const double sst = (y.array() - mean).matrix().squaredNorm();
  if (sst == 0.0) return sse == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
  return 1.0 - sse / sst;
}

template <typename A, typename B>
double rmse(const Eigen::MatrixBase<A>& y, const Eigen::MatrixBase<B>& yhat) {
  return std::sqrt((y - yhat).squaredNorm() / static_cast<double>(y.size()));
}

template <typename A, typename B>
double pearson(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
  const auto xc = (x.array() - x.mean()).matrix();
  const auto yc = (y.array() - y.mean()).matrix();
  const double sxx = xc.squaredNorm();
  const double syy = yc.squaredNorm();
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return xc.dot(yc) / std::sqrt(sxx * syy);
}

/// Univariate regression F = r^2 (n - 2) / (1 - r^2); +inf when the fit is exact
/// to rounding (1 - r^2 <= 1e-14), 0 for a constant column. Throws std::invalid_argument for n < 3 or non-finite input.
template <typename A, typename B>
double f_statistic(const Eigen::MatrixBase<A>& column, const Eigen::MatrixBase<B>& targets) {
  const auto n = column.size();
  if (n < 3 || targets.size() != n) throw std::invalid_argument("f_statistic needs n >= 3 aligned values");
  if (!column.allFinite() || !targets.allFinite()) throw std::invalid_argument("f_statistic needs finite values");
  const double r = pearson(column, targets);
  const double r2 = r * r;
  if (1.0 - r2 <= 1e-14) return std::numeric_limits<double>::infinity();
  return r2 * static_cast<double>(n - 2) / (1.0 - r2);
}

void save_model(const svr_model& model, const std::filesystem::path& path);
svr_model load_model(const std::filesystem::path& path);
std::string model_to_json(const svr_model& model);
svr_model model_from_json(const std::string& text);

std::string report_to_json(const eval_report& report);

}  // namespace revnet
