#include <revnet/svr.hpp>

#include <algorithm>
#include <fstream>
#include <list>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>

#include <revnet/io.hpp>
#include <json.hpp>

#include <revnet/random.hpp>

namespace revnet {

using nlohmann::json;

void svr_config::check() const {
  if (!(C > 0.0)) throw std::invalid_argument("svr: C must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("svr: gamma must be positive");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("svr: epsilon must be non-negative");
  if (!(tol > 0.0)) throw std::invalid_argument("svr: tol must be positive");
  if (max_iterations < 1) throw std::invalid_argument("svr: max_iterations must be positive");
}

standard_scaler standard_scaler::fit(const Eigen::MatrixXd& X) {
  standard_scaler s;
  const auto n = static_cast<double>(X.rows());
  s.mean = X.colwise().mean();
  s.scale = ((X.rowwise() - s.mean).array().square().colwise().sum() / n).sqrt().matrix();
  for (Eigen::Index j = 0; j < s.scale.size(); ++j) {
    if (!(s.scale[j] > 0.0)) {
      s.scale[j] = 1.0;
      s.clamped.push_back(j);
    }
  }
  return s;
}

Eigen::MatrixXd standard_scaler::transform(const Eigen::MatrixXd& X) const {
  return ((X.rowwise() - mean).array().rowwise() / scale.array()).matrix();
}

namespace {

/// LRU cache of kernel rows K(i, .) over the standardized training set.
class kernel_cache {
 public:
  kernel_cache(const Eigen::MatrixXd& Z, double gamma, double budget_mb) : Z_(Z), gamma_(gamma) {
    const double row_bytes = 8.0 * static_cast<double>(std::max<Eigen::Index>(Z.rows(), 1));
    capacity_ = std::max<std::size_t>(2, static_cast<std::size_t>(budget_mb * 1e6 / row_bytes));
  }

  /// The returned reference stays valid until two further distinct rows are requested.
  const Eigen::VectorXd& row(Eigen::Index i) {
    auto it = rows_.find(i);
    if (it != rows_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.second);
      return it->second.first;
    }
    if (rows_.size() >= capacity_) {
      rows_.erase(lru_.back());
      lru_.pop_back();
    }
    lru_.push_front(i);
    Eigen::VectorXd k = (-gamma_ * (Z_.rowwise() - Z_.row(i)).rowwise().squaredNorm().array()).exp().matrix();
    auto [pos, inserted] = rows_.emplace(i, std::make_pair(std::move(k), lru_.begin()));
    return pos->second.first;
  }

 private:
  const Eigen::MatrixXd& Z_;
  double gamma_;
  std::size_t capacity_;
  std::list<Eigen::Index> lru_;
  std::unordered_map<Eigen::Index, std::pair<Eigen::VectorXd, std::list<Eigen::Index>::iterator>> rows_;
};

struct smo_result {
  Eigen::VectorXd coef;
  double rho = 0.0;
  long iterations = 0;
  double gap = 0.0;
  bool converged = false;
};

// Dual over 2n variables: t < n carries alpha_t (sign +1), t >= n carries
// alpha*_{t-n} (sign -1). Q_st = sign_s sign_t K(s mod n, t mod n); the linear
// term is epsilon - y for alpha and epsilon + y for alpha*.
smo_result solve_smo(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y, const svr_config& cfg) {
  constexpr double tau = 1e-12;
  const Eigen::Index n = Z.rows();
  const Eigen::Index l = 2 * n;
  const double C = cfg.C;
  auto sign = [n](Eigen::Index t) { return t < n ? 1.0 : -1.0; };
  auto point = [n](Eigen::Index t) { return t < n ? t : t - n; };

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(l);
  Eigen::VectorXd G(l);
  for (Eigen::Index t = 0; t < n; ++t) {
    G[t] = cfg.epsilon - y[t];
    G[t + n] = cfg.epsilon + y[t];
  }

  kernel_cache cache(Z, cfg.gamma, cfg.cache_mb);
  smo_result res;
  const double inf = std::numeric_limits<double>::infinity();

  while (true) {
    double gmax = -inf;
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < l; ++t) {
      if (sign(t) > 0) {
        if (alpha[t] < C && -G[t] >= gmax) {
          gmax = -G[t];
          i = t;
        }
      } else if (alpha[t] > 0 && G[t] >= gmax) {
        gmax = G[t];
        i = t;
      }
    }
    if (i < 0) {
      res.converged = true;
      res.gap = 0.0;
      break;
    }

    const Eigen::VectorXd& Ki = cache.row(point(i));
    double gmax2 = -inf;
    double obj_min = inf;
    Eigen::Index j = -1;
    for (Eigen::Index t = 0; t < l; ++t) {
      double grad_diff;
      if (sign(t) > 0) {
        if (!(alpha[t] > 0)) continue;
        gmax2 = std::max(gmax2, G[t]);
        grad_diff = gmax + G[t];
      } else {
        if (!(alpha[t] < C)) continue;
        gmax2 = std::max(gmax2, -G[t]);
        grad_diff = gmax - G[t];
      }
      if (grad_diff > 0) {
        double quad = 2.0 - 2.0 * Ki[point(t)];
        if (quad <= 0) quad = tau;
        const double obj = -(grad_diff * grad_diff) / quad;
        if (obj <= obj_min) {
          obj_min = obj;
          j = t;
        }
      }
    }
    res.gap = gmax + gmax2;
    if (res.gap < cfg.tol || j < 0) {
      res.converged = true;
      break;
    }
    if (res.iterations >= cfg.max_iterations) break;
    ++res.iterations;

    const Eigen::VectorXd& Kj = cache.row(point(j));
    const double si = sign(i), sj = sign(j);
    const double Qij = si * sj * Ki[point(j)];
    const double old_ai = alpha[i], old_aj = alpha[j];

    if (si != sj) {
      double quad = 2.0 + 2.0 * Qij;
      if (quad <= 0) quad = tau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = 2.0 - 2.0 * Qij;
      if (quad <= 0) quad = tau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }

    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    for (Eigen::Index t = 0; t < l; ++t) {
      const double st = sign(t);
      const auto p = point(t);
      G[t] += st * (si * Ki[p] * dai + sj * Kj[p] * daj);
    }
  }

  double ub = inf, lb = -inf, sum_free = 0.0;
  long free = 0;
  for (Eigen::Index t = 0; t < l; ++t) {
    const double yg = sign(t) * G[t];
    if (alpha[t] >= C) {
      if (sign(t) < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0) {
      if (sign(t) > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++free;
      sum_free += yg;
    }
  }
  res.rho = free > 0 ? sum_free / static_cast<double>(free) : (ub + lb) / 2.0;
  res.coef = alpha.head(n) - alpha.tail(n);
  return res;
}

}  // namespace

svr_model fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const svr_config& config,
              std::vector<std::string> feature_names) {
  config.check();
  if (X.rows() < 2) throw std::invalid_argument("svr: fit needs at least two rows");
  if (y.size() != X.rows()) throw std::invalid_argument("svr: target length does not match row count");
  if (!X.allFinite() || !y.allFinite()) throw std::invalid_argument("svr: inputs must be finite (impute first)");
  if (!feature_names.empty() && static_cast<Eigen::Index>(feature_names.size()) != X.cols())
    throw std::invalid_argument("svr: feature name count does not match column count");

  svr_model m;
  m.config = config;
  m.feature_names = std::move(feature_names);
  m.scaler = standard_scaler::fit(X);
  for (auto j : m.scaler.clamped)
    m.warnings.push_back(fmt::format("column {} has zero variance; scale clamped to 1", j));
  const Eigen::MatrixXd Z = m.scaler.transform(X);

  // Solve on targets centred at the midrange; the shift is returned through the bias.
  const double shift = (y.minCoeff() + y.maxCoeff()) / 2.0;
  const Eigen::VectorXd yc = (y.array() - shift).matrix();
  auto res = solve_smo(Z, yc, config);

  m.iterations = res.iterations;
  m.kkt_gap = res.gap;
  m.converged = res.converged;
  if (!res.converged)
    m.warnings.push_back(fmt::format("solver stopped after {} iterations with KKT gap {:.3g}",
                                     res.iterations, res.gap));
  m.bias = shift - res.rho;

  for (Eigen::Index i = 0; i < Z.rows(); ++i)
    if (std::abs(res.coef[i]) >= 1e-12) m.support_indices.push_back(i);
  const auto nsv = static_cast<Eigen::Index>(m.support_indices.size());
  m.support_vectors.resize(nsv, Z.cols());
  m.dual_coefs.resize(nsv);
  for (Eigen::Index k = 0; k < nsv; ++k) {
    m.support_vectors.row(k) = Z.row(m.support_indices[static_cast<std::size_t>(k)]);
    m.dual_coefs[k] = res.coef[m.support_indices[static_cast<std::size_t>(k)]];
  }
  return m;
}

Eigen::VectorXd predict(const svr_model& model, const Eigen::MatrixXd& rows) {
  if (rows.cols() != model.width())
    throw std::invalid_argument(
        fmt::format("svr: expected {} columns, got {}", model.width(), rows.cols()));
  Eigen::MatrixXd filled = rows;
  if (model.impute_means.size() == model.width()) {
    for (Eigen::Index i = 0; i < filled.rows(); ++i)
      for (Eigen::Index j = 0; j < filled.cols(); ++j)
        if (std::isnan(filled(i, j))) filled(i, j) = model.impute_means[j];
  }
  const Eigen::MatrixXd Z = model.scaler.transform(filled);
  Eigen::VectorXd out(Z.rows());
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    double acc = 0.0;
    if (model.dual_coefs.size() > 0) {
      const Eigen::VectorXd k =
          (-model.config.gamma * (model.support_vectors.rowwise() - Z.row(i)).rowwise().squaredNorm().array())
              .exp()
              .matrix();
      acc = model.dual_coefs.dot(k);
    }
    out[i] = acc + model.bias;
  }
  return out;
}

double kkt_violation(const svr_model& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const Eigen::VectorXd f = predict(model, X);
  const double C = model.config.C;
  const double eps = model.config.epsilon;
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(X.rows());
  for (std::size_t k = 0; k < model.support_indices.size(); ++k)
    coef[model.support_indices[k]] = model.dual_coefs[static_cast<Eigen::Index>(k)];

  double worst = std::abs(coef.sum());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double r = y[i] - f[i];
    const double a = std::abs(coef[i]);
    double v;
    if (a > C * (1.0 + 1e-12)) {
      v = a - C;
    } else if (a == 0.0) {
      v = std::max(0.0, std::abs(r) - eps);
    } else {
      const bool agree = (coef[i] > 0) == (r > 0);
      if (!agree) v = std::abs(r) + eps;
      else if (a >= C * (1.0 - 1e-12)) v = std::max(0.0, eps - std::abs(r));
      else v = std::abs(std::abs(r) - eps);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

Eigen::RowVectorXd observed_means(const Eigen::MatrixXd& X, const missing_flags& missing,
                                  const std::vector<Eigen::Index>& rows) {
  Eigen::RowVectorXd means = Eigen::RowVectorXd::Zero(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    double sum = 0.0;
    long count = 0;
    for (auto i : rows)
      if (!missing(i, j)) {
        sum += X(i, j);
        ++count;
      }
    if (count > 0) means[j] = sum / static_cast<double>(count);
  }
  return means;
}

Eigen::MatrixXd impute(Eigen::MatrixXd X, const missing_flags& missing, const Eigen::RowVectorXd& means) {
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      if (missing(i, j)) X(i, j) = means[j];
  return X;
}

namespace {

std::vector<Eigen::Index> all_rows(Eigen::Index n) {
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  return rows;
}

template <typename Rows>
Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, const Rows& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = X.row(rows[k]);
  return out;
}

}  // namespace

svr_model fit_imputed(const Eigen::MatrixXd& X, const missing_flags& missing, const Eigen::VectorXd& y,
                      const svr_config& config, std::vector<std::string> feature_names) {
  const auto means = observed_means(X, missing, all_rows(X.rows()));
  auto model = fit(impute(X, missing, means), y, config, std::move(feature_names));
  model.impute_means = means;
  return model;
}

eval_report cross_validate(const Eigen::MatrixXd& X, const missing_flags& missing, const Eigen::VectorXd& y,
                           const svr_config& config, int k, std::vector<std::string> feature_names) {
  config.check();
  const Eigen::Index n = X.rows();
  if (k < 2) throw std::invalid_argument("cross_validate: k must be at least 2");
  if (k > n) throw std::invalid_argument(fmt::format("cross_validate: k = {} exceeds {} rows", k, n));
  if (missing.rows() != n || missing.cols() != X.cols() || y.size() != n)
    throw std::invalid_argument("cross_validate: shape mismatch");

  eval_report rep;
  rep.seed = config.seed;
  rep.k = k;
  rep.predictions.resize(n);

  auto order = all_rows(n);
  rng gen(config.seed);
  gen.shuffle(order);

  for (int f = 0; f < k; ++f) {
    const auto lo = static_cast<std::size_t>(f * n / k);
    const auto hi = static_cast<std::size_t>((f + 1) * n / k);
    std::vector<Eigen::Index> test(order.begin() + static_cast<std::ptrdiff_t>(lo),
                                   order.begin() + static_cast<std::ptrdiff_t>(hi));
    std::vector<Eigen::Index> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(lo));
    train.insert(train.end(), order.begin() + static_cast<std::ptrdiff_t>(hi), order.end());

    const auto means = observed_means(X, missing, train);
    const Eigen::MatrixXd Xi = impute(X, missing, means);
    Eigen::VectorXd ytr(static_cast<Eigen::Index>(train.size()));
    for (std::size_t t = 0; t < train.size(); ++t) ytr[static_cast<Eigen::Index>(t)] = y[train[t]];

    const auto model = fit(take_rows(Xi, train), ytr, config);
    const Eigen::VectorXd pred = predict(model, take_rows(Xi, test));
    Eigen::VectorXd ytest(pred.size());
    for (std::size_t t = 0; t < test.size(); ++t) {
      ytest[static_cast<Eigen::Index>(t)] = y[test[t]];
      rep.predictions[test[t]] = pred[static_cast<Eigen::Index>(t)];
    }
    rep.folds.push_back({pred.size(), r2_score(ytest, pred), rmse(ytest, pred)});
  }
  rep.r2 = r2_score(y, rep.predictions);
  rep.rmse = rmse(y, rep.predictions);

  if (n >= 3) {
    const Eigen::MatrixXd full = impute(X, missing, observed_means(X, missing, all_rows(n)));
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      std::string name = static_cast<std::size_t>(j) < feature_names.size()
                             ? feature_names[static_cast<std::size_t>(j)]
                             : fmt::format("x{}", j);
      rep.f_stats.emplace_back(std::move(name), f_statistic(full.col(j), y));
    }
  }
  return rep;
}

namespace {

json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }
std::vector<double> to_std(const Eigen::RowVectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_vec(const json& j) {
  auto v = j.get<std::vector<double>>();
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string model_to_json(const svr_model& m) {
  json j;
  j["format"] = "revnet-svr";
  j["version"] = 1;
  j["config"] = {{"C", m.config.C},           {"gamma", m.config.gamma},
                 {"epsilon", m.config.epsilon}, {"tol", m.config.tol},
                 {"max_iterations", m.config.max_iterations}, {"seed", m.config.seed}};
  j["feature_names"] = m.feature_names;
  j["scaler"] = {{"mean", to_std(m.scaler.mean)}, {"scale", to_std(m.scaler.scale)}};
  j["impute_means"] = to_std(m.impute_means);
  json sv = json::array();
  for (Eigen::Index k = 0; k < m.support_vectors.rows(); ++k)
    sv.push_back(to_std(Eigen::RowVectorXd(m.support_vectors.row(k))));
  j["support_vectors"] = std::move(sv);
  j["support_indices"] = m.support_indices;
  j["dual_coefs"] = to_std(m.dual_coefs);
  j["bias"] = m.bias;
  j["diagnostics"] = {{"iterations", m.iterations}, {"kkt_gap", m.kkt_gap}, {"converged", m.converged}};
  return j.dump(1);
}

svr_model model_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.value("format", "") != "revnet-svr") throw std::runtime_error("not a revnet SVR model document");
  if (j.value("version", 0) != 1)
    throw std::runtime_error(fmt::format("unsupported model version {}", j.value("version", 0)));
  svr_model m;
  const auto& c = j.at("config");
  m.config.C = c.at("C").get<double>();
  m.config.gamma = c.at("gamma").get<double>();
  m.config.epsilon = c.at("epsilon").get<double>();
  m.config.tol = c.at("tol").get<double>();
  m.config.max_iterations = c.at("max_iterations").get<long>();
  m.config.seed = c.at("seed").get<std::uint64_t>();
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  m.scaler.mean = to_vec(j.at("scaler").at("mean")).transpose();
  m.scaler.scale = to_vec(j.at("scaler").at("scale")).transpose();
  m.impute_means = to_vec(j.at("impute_means")).transpose();
  const auto& sv = j.at("support_vectors");
  m.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), m.scaler.mean.size());
  for (std::size_t k = 0; k < sv.size(); ++k)
    m.support_vectors.row(static_cast<Eigen::Index>(k)) = to_vec(sv[k]).transpose();
  m.support_indices = j.at("support_indices").get<std::vector<Eigen::Index>>();
  m.dual_coefs = to_vec(j.at("dual_coefs"));
  m.bias = j.at("bias").get<double>();
  const auto& d = j.at("diagnostics");
  m.iterations = d.at("iterations").get<long>();
  m.kkt_gap = d.at("kkt_gap").get<double>();
  m.converged = d.at("converged").get<bool>();
  if (m.dual_coefs.size() != m.support_vectors.rows() ||
      m.scaler.scale.size() != m.scaler.mean.size())
    throw std::runtime_error("model document has inconsistent shapes");
  return m;
}

void save_model(const svr_model& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw io_error(fmt::format("cannot write {}", path.string()));
  out << model_to_json(model) << '\n';
}

svr_model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error(fmt::format("cannot read {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

std::string report_to_json(const eval_report& r) {
  json j;
  j["r2"] = finite_or_string(r.r2);
  j["rmse"] = finite_or_string(r.rmse);
  j["k"] = r.k;
  j["seed"] = r.seed;
  json folds = json::array();
  for (const auto& f : r.folds)
    folds.push_back({{"size", f.size}, {"r2", finite_or_string(f.r2)}, {"rmse", finite_or_string(f.rmse)}});
  j["folds"] = std::move(folds);
  json fs = json::array();
  for (const auto& [name, v] : r.f_stats) fs.push_back({{"feature", name}, {"f", finite_or_string(v)}});
  j["f_statistics"] = std::move(fs);
  return j.dump(1);
}

}  // namespace revnet
