#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include <revnet/random.hpp>
#include <revnet/svr.hpp>

using namespace revnet;

namespace {

Eigen::MatrixXd random_matrix(rng& r, Eigen::Index n, Eigen::Index d) {
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = r.normal();
  return X;
}

Eigen::VectorXd smooth_target(rng& r, const Eigen::MatrixXd& X, double noise) {
  Eigen::VectorXd y(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    y[i] = std::sin(X(i, 0)) + 0.5 * X(i, X.cols() - 1) * X(i, 0) + noise * r.normal();
  return y;
}

svr_config tight(double C = 100.0, double gamma = 0.5) {
  svr_config c;
  c.C = C;
  c.gamma = gamma;
  c.tol = 1e-8;
  return c;
}

}  // namespace

TEST_SUITE("svr") {

TEST_CASE("config validation") {
  svr_config c;
  CHECK_NOTHROW(c.check());
  c.C = 0;
  CHECK_THROWS_AS(c.check(), std::invalid_argument);
  c = {};
  c.gamma = -1;
  CHECK_THROWS_AS(c.check(), std::invalid_argument);
  c = {};
  c.epsilon = -0.1;
  CHECK_THROWS_AS(c.check(), std::invalid_argument);
  CHECK_THROWS_AS(fit(Eigen::MatrixXd::Zero(1, 2), Eigen::VectorXd::Zero(1), {}), std::invalid_argument);
  CHECK_THROWS_AS(fit(Eigen::MatrixXd::Zero(3, 2), Eigen::VectorXd::Zero(2), {}), std::invalid_argument);
}

TEST_CASE("constant targets give a constant model") {
  rng r(1);
  const auto X = random_matrix(r, 30, 3);
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(30, 2.75);
  const auto m = fit(X, y, {});
  CHECK(m.dual_coefs.size() == 0);
  CHECK(m.bias == 2.75);
  CHECK((predict(m, random_matrix(r, 10, 3)).array() == 2.75).all());
  CHECK((predict(m, X.topRows(1)).array() == 2.75).all());
}

TEST_CASE("identity line stays inside the tube") {
  Eigen::MatrixXd X(20, 1);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) X(i, 0) = y[i] = i / 19.0;
  auto cfg = tight(100.0, 1.0);
  const auto m = fit(X, y, cfg);
  CHECK(m.converged);
  CHECK(((predict(m, X) - y).array().abs() <= cfg.epsilon + 1e-6).all());
  CHECK(kkt_violation(m, X, y) <= 1e-6);
}

TEST_CASE("KKT certificate and dual bounds on random problems") {
  rng r(5);
  for (int trial = 0; trial < 8; ++trial) {
    const auto X = random_matrix(r, 60 + 20 * trial, 4);
    const auto y = smooth_target(r, X, 0.3);
    svr_config cfg;
    cfg.C = trial % 2 ? 1.0 : 100.0;
    cfg.gamma = 0.05 * (trial + 1);
    const auto m = fit(X, y, cfg);
    CHECK(m.converged);
    CHECK(kkt_violation(m, X, y) <= cfg.tol);
    CHECK((m.dual_coefs.array().abs() <= cfg.C).all());
    CHECK(std::abs(m.dual_coefs.sum()) < 1e-9 * cfg.C * static_cast<double>(X.rows()));
  }
}

TEST_CASE("duplicating every row matches doubling C") {
  rng r(9);
  const auto X = random_matrix(r, 40, 2);
  const auto y = smooth_target(r, X, 0.5);
  Eigen::MatrixXd X2(80, 2);
  Eigen::VectorXd y2(80);
  X2 << X, X;
  y2 << y, y;
  const auto q = random_matrix(r, 25, 2);
  for (double C : {0.5, 1000.0}) {
    const auto dup = fit(X2, y2, tight(C));
    const auto ref = fit(X, y, tight(2 * C));
    CHECK((predict(dup, q) - predict(ref, q)).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("symmetric two-point problem predicts the mean at the midpoint") {
  Eigen::MatrixXd X(2, 1);
  X << -1, 1;
  Eigen::VectorXd y(2);
  y << 0.0, 2.0;
  const auto m = fit(X, y, tight(10.0, 0.3));
  Eigen::MatrixXd mid(1, 1);
  mid << 0.0;
  CHECK(predict(m, mid)[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("distant queries fall back to the bias") {
  rng r(2);
  const auto X = random_matrix(r, 30, 2);
  const auto y = smooth_target(r, X, 0.1);
  auto cfg = tight(10.0, 50.0);
  const auto m = fit(X, y, cfg);
  Eigen::MatrixXd far(1, 2);
  far << 100.0, -100.0;
  CHECK(predict(m, far)[0] == m.bias);
  CHECK_THROWS_AS(predict(m, Eigen::MatrixXd::Zero(1, 3)), std::invalid_argument);
}

TEST_CASE("target shift and column scale") {
  rng r(3);
  const auto X = random_matrix(r, 80, 3);
  const auto y = smooth_target(r, X, 0.2);
  const auto q = random_matrix(r, 20, 3);
  // equivariance holds to the solver tolerance, so solve well past 1e-9
  svr_config cfg;
  cfg.tol = 1e-12;
  const auto base = predict(fit(X, y, cfg), q);
  for (double c : {5.0, -3.25, 0.125}) {
    const auto shifted = predict(fit(X, (y.array() + c).matrix(), cfg), q);
    CHECK(((shifted.array() - c) - base.array()).abs().maxCoeff() < 1e-9);
  }
  Eigen::MatrixXd Xs = X, qs = q;
  Xs.col(1) *= 7.0;
  qs.col(1) *= 7.0;
  CHECK((predict(fit(Xs, y, cfg), qs) - base).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("zero variance columns are clamped with a warning") {
  rng r(6);
  Eigen::MatrixXd X = random_matrix(r, 20, 2);
  X.col(1).setConstant(4.0);
  const auto m = fit(X, smooth_target(r, X.leftCols(1), 0.1), {});
  CHECK(m.scaler.clamped == std::vector<Eigen::Index>{1});
  CHECK(m.scaler.scale[1] == 1.0);
  CHECK_FALSE(m.warnings.empty());
}

TEST_CASE("cross validation") {
  rng r(7);
  const auto X = random_matrix(r, 120, 3);
  const auto y = smooth_target(r, X, 0.2);
  const missing_flags none = missing_flags::Constant(120, 3, false);
  svr_config cfg;
  cfg.gamma = 0.3;
  cfg.seed = 11;
  const auto a = cross_validate(X, none, y, cfg, 10, {"a", "b", "c"});
  const auto b = cross_validate(X, none, y, cfg, 10, {"a", "b", "c"});
  CHECK(a.r2 == b.r2);
  CHECK(a.rmse == b.rmse);
  CHECK(a.predictions == b.predictions);
  CHECK(a.folds.size() == 10);
  CHECK(a.f_stats.size() == 3);
  CHECK(a.f_stats[0].first == "a");
  CHECK(a.r2 > 0.5);

  const double sst = (y.array() - y.mean()).square().sum();
  CHECK(std::abs(a.r2 - (1.0 - a.rmse * a.rmse * 120.0 / sst)) < 1e-9);
  CHECK(a.r2 == doctest::Approx(r2_score(y, a.predictions)).epsilon(1e-12));

  Eigen::Index total = 0;
  for (const auto& f : a.folds) total += f.size;
  CHECK(total == 120);

  CHECK_THROWS_AS(cross_validate(X, none, y, cfg, 1), std::invalid_argument);
  CHECK_THROWS_AS(cross_validate(X.topRows(5), none.topRows(5), y.head(5), cfg, 6), std::invalid_argument);
}

TEST_CASE("imputation uses observed means") {
  Eigen::MatrixXd X(4, 2);
  X << 1, std::nan(""), 3, 2, std::nan(""), 4, 5, 6;
  missing_flags miss = X.array().isNaN();
  const auto means = observed_means(X, miss, {0, 1, 2, 3});
  CHECK(means[0] == doctest::Approx(3.0));
  CHECK(means[1] == doctest::Approx(4.0));
  const auto filled = impute(X, miss, means);
  CHECK(filled.allFinite());
  CHECK(filled(2, 0) == 3.0);
  CHECK(observed_means(X, miss, {0})[1] == 0.0);
}

TEST_CASE("f statistic") {
  Eigen::VectorXd x(4), y(4);
  x << 1, -1, 1, -1;
  y << 1, 1, -1, -1;
  CHECK(f_statistic(x, y) == 0.0);
  CHECK(f_statistic(y, y) == std::numeric_limits<double>::infinity());
  CHECK(f_statistic(Eigen::VectorXd::Constant(4, 2.0), y) == 0.0);
  CHECK_THROWS_AS(f_statistic(x.head(2), y.head(2)), std::invalid_argument);
  Eigen::VectorXd z(5), t(5);
  z << 1, 2, 3, 4, 5;
  t << 2, 1, 4, 3, 6;
  const double rr = std::pow(pearson(z, t), 2);
  CHECK(f_statistic(z, t) == doctest::Approx(rr * 3.0 / (1.0 - rr)));
}

TEST_CASE("model persistence reproduces predictions bit for bit") {
  rng r(8);
  const auto X = random_matrix(r, 50, 3);
  const auto y = smooth_target(r, X, 0.3);
  missing_flags miss = missing_flags::Constant(50, 3, false);
  Eigen::MatrixXd Xm = X;
  Xm(3, 1) = std::nan("");
  miss(3, 1) = true;
  const auto m = fit_imputed(Xm, miss, y, {}, {"a", "b", "c"});
  const auto q = random_matrix(r, 10, 3);
  const auto back = model_from_json(model_to_json(m));
  CHECK(predict(back, q) == predict(m, q));
  CHECK(back.feature_names == m.feature_names);

  const auto path = std::filesystem::temp_directory_path() / "revnet_model_test.json";
  save_model(m, path);
  CHECK(predict(load_model(path), q) == predict(m, q));
  std::filesystem::remove(path);
  CHECK_THROWS(model_from_json("{}"));
}

}
