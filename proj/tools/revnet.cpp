// revnet: peer-review network pipeline driver.
//
// Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include <revnet/analysis.hpp>
#include <revnet/centrality.hpp>
#include <revnet/corpus.hpp>
#include <revnet/features.hpp>
#include <revnet/io.hpp>
#include <revnet/review_graph.hpp>
#include <revnet/svr.hpp>
#include <revnet/synth.hpp>
#include <revnet/text_metrics.hpp>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum exit_code { ok = 0, invalid = 1, usage = 2, io = 3 };

struct validation_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path lexicon_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("REVNET_LEXICON_DIR"); env && *env) return env;
  return REVNET_DEFAULT_LEXICON_DIR;
}

// Collects inputs and outputs and writes manifest.json into the run directory.
class run_manifest {
 public:
  run_manifest(std::string command, fs::path dir) : command_(std::move(command)), dir_(std::move(dir)) {
    fs::create_directories(dir_);
  }

  void input(const fs::path& p) { inputs_[p.string()] = revnet::file_sha256(p); }
  void config(std::string canonical) { config_ = std::move(canonical); }
  void seed(std::uint64_t s) { seed_ = s; }

  fs::path output(const std::string& name, std::string_view contents) {
    const auto p = dir_ / name;
    revnet::write_file_atomic(p, contents);
    outputs_[p.string()] = revnet::sha256_hex(contents);
    return p;
  }
  void existing_output(const fs::path& p) { outputs_[p.string()] = revnet::file_sha256(p); }

  void time(const std::string& step, std::chrono::steady_clock::time_point since) {
    timings_[step] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
  }

  void write() const {
    json j;
    j["command"] = command_;
    j["config_hash"] = revnet::sha256_hex(config_);
    j["inputs"] = inputs_;
    j["seed"] = seed_ ? json(*seed_) : json(nullptr);
    j["outputs"] = outputs_;
    j["timings_ms"] = timings_;
    revnet::write_file_atomic(dir_ / "manifest.json", j.dump(2) + "\n");
  }

 private:
  std::string command_;
  fs::path dir_;
  std::string config_;
  std::optional<std::uint64_t> seed_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
  std::map<std::string, double> timings_;
};

revnet::corpus load_corpus(const fs::path& log) {
  std::istringstream in(revnet::read_file(log));
  auto parsed = revnet::parse_events(in);
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) fmt::print(std::cerr, "{}:{}: {}\n", log.string(), e.line, e.message);
    throw validation_failure(fmt::format("{} has {} invalid line(s)", log.string(), parsed.errors.size()));
  }
  return revnet::corpus(std::move(parsed.events));
}

std::string render(const auto& writer, const auto& value) {
  std::ostringstream out;
  writer(value, out);
  return out.str();
}

int cmd_validate(const fs::path& log) {
  std::istringstream in(revnet::read_file(log));
  const auto parsed = revnet::parse_events(in);
  for (const auto& e : parsed.errors) fmt::print("{}:{}: {}\n", log.string(), e.line, e.message);
  fmt::print("{} events, {} error(s)\n", parsed.events.size(), parsed.errors.size());
  return parsed.ok() ? ok : invalid;
}

int cmd_generate(const fs::path& config_path, std::optional<std::uint64_t> seed, const fs::path& out,
                 const fs::path& lex_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = config_path.empty() ? revnet::synth_config{} : revnet::load_synth_config(config_path);
  if (seed) cfg.seed = *seed;
  cfg.check();
  const auto lex = revnet::lexicon::load(lex_dir);
  run_manifest m("generate", out);
  if (!config_path.empty()) m.input(config_path);
  m.config(revnet::synth_config_to_ini(cfg));
  m.seed(cfg.seed);
  const auto events = revnet::generate(cfg, lex);
  std::ostringstream text;
  revnet::write_events(text, events);
  m.output("events.jsonl", text.str());
  m.time("generate", t0);
  m.write();
  fmt::print("wrote {} events to {}\n", events.size(), (out / "events.jsonl").string());
  return ok;
}

int cmd_features(const fs::path& log, revnet::year_range window, const fs::path& out, const fs::path& lex_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  run_manifest m("features", out);
  m.input(log);
  m.config(fmt::format("from={}\nto={}\nlexicon={}\n", window.from, window.to, lex_dir.string()));
  const auto c = load_corpus(log);
  const auto lex = revnet::lexicon::load(lex_dir);
  const auto fm = revnet::assemble_matrix(c, window, lex);
  if (fm.rows() == 0) fmt::print(std::cerr, "warning: no accepted papers decided in {}..{}\n", window.from, window.to);
  m.output("features.csv", render([](const auto& v, std::ostream& o) { revnet::write_feature_csv(v, o); }, fm));
  m.output("features.missing.csv", render([](const auto& v, std::ostream& o) { revnet::write_missing_csv(v, o); }, fm));
  m.time("features", t0);
  m.write();
  fmt::print("{} rows x {} features\n", fm.rows(), revnet::feature_count);
  return ok;
}

struct train_flags {
  double C = 100.0;
  std::optional<double> gamma;
  double epsilon = 0.1;
  int folds = 10;
  std::uint64_t seed = 0;
  bool network_only = false;
};

std::pair<Eigen::MatrixXd, revnet::missing_mask> select_columns(const revnet::feature_matrix& fm, bool network_only) {
  const Eigen::Index cols = network_only ? static_cast<Eigen::Index>(revnet::network_feature_count) : fm.X.cols();
  return {fm.X.leftCols(cols), fm.missing.leftCols(cols)};
}

int cmd_train(const fs::path& features, const train_flags& f, const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  revnet::svr_config cfg;
  cfg.C = f.C;
  cfg.gamma = f.gamma.value_or(f.network_only ? 0.01 : 0.02);
  cfg.epsilon = f.epsilon;
  cfg.seed = f.seed;
  cfg.check();

  run_manifest m("train", out);
  m.input(features);
  const auto mask = revnet::missing_path_for(features);
  if (fs::exists(mask)) m.input(mask);
  m.config(fmt::format("C={:.17g}\ngamma={:.17g}\nepsilon={:.17g}\nfolds={}\nnetwork_only={}\n", cfg.C, cfg.gamma,
                       cfg.epsilon, f.folds, f.network_only));
  m.seed(cfg.seed);

  const auto fm = revnet::read_feature_csv(features, fs::exists(mask) ? std::optional(mask) : std::nullopt);
  auto [X, missing] = select_columns(fm, f.network_only);
  std::vector<std::string> names;
  for (Eigen::Index j = 0; j < X.cols(); ++j) names.emplace_back(revnet::feature_names[static_cast<std::size_t>(j)]);

  const auto report = revnet::cross_validate(X, missing, fm.y, cfg, f.folds, names);
  m.time("cross_validate", t0);
  const auto t1 = std::chrono::steady_clock::now();
  const auto model = revnet::fit_imputed(X, missing, fm.y, cfg, names);
  m.time("fit", t1);
  for (const auto& w : model.warnings) fmt::print(std::cerr, "warning: {}\n", w);

  m.output("model.json", revnet::model_to_json(model));
  m.output("report.json", revnet::report_to_json(report));
  m.write();

  fmt::print("rows {}  folds {}  C {}  gamma {}  epsilon {}\n", X.rows(), f.folds, cfg.C, cfg.gamma, cfg.epsilon);
  fmt::print("R2 {:.4f}  RMSE {:.4f}\n", report.r2, report.rmse);
  fmt::print("F-statistics:");
  for (const auto& [name, F] : report.f_stats) fmt::print("  {} {:.2f}", name, F);
  fmt::print("\n");
  return ok;
}

int cmd_predict(const fs::path& model_path, const fs::path& features, const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  run_manifest m("predict", out);
  m.input(model_path);
  m.input(features);
  const auto model = revnet::model_from_json(revnet::read_file(model_path));
  const auto mask = revnet::missing_path_for(features);
  const auto fm = revnet::read_feature_csv(features, fs::exists(mask) ? std::optional(mask) : std::nullopt);
  if (model.width() > fm.X.cols())
    throw validation_failure(fmt::format("model expects {} columns, features have {}", model.width(), fm.X.cols()));
  Eigen::MatrixXd X = fm.X.leftCols(model.width());
  const auto missing = fm.missing.leftCols(model.width());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      if (missing(i, j)) X(i, j) = std::numeric_limits<double>::quiet_NaN();
  const auto yhat = revnet::predict(model, X);
  std::string csv = "paper_id,prediction,target\n";
  for (Eigen::Index i = 0; i < yhat.size(); ++i)
    csv += fmt::format("{},{:.17g},{:.17g}\n", fm.paper_ids[static_cast<std::size_t>(i)], yhat[i], fm.y[i]);
  m.output("predictions.csv", csv);
  m.time("predict", t0);
  m.write();
  if (yhat.size() > 0) fmt::print("R2 {:.4f}  RMSE {:.4f}\n", revnet::r2_score(fm.y, yhat), revnet::rmse(fm.y, yhat));
  return ok;
}

int cmd_analyze(const fs::path& log, const revnet::analysis_options& opts, const fs::path& out,
                const fs::path& lex_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  run_manifest m("analyze", out);
  m.input(log);
  m.config(fmt::format("exposure_cutoff_year={}\nextreme_fraction={:.17g}\n", opts.exposure_cutoff_year,
                       opts.extreme_fraction));
  const auto c = load_corpus(log);
  const auto lex = revnet::lexicon::load(lex_dir);
  const auto outputs = revnet::write_analysis_bundle(c, lex, out, opts);
  for (const auto& o : outputs) m.existing_output(out / o.file);
  m.existing_output(out / "manifest.csv");
  m.time("analyze", t0);
  m.write();
  fmt::print("{} analyses written to {}\n", outputs.size(), out.string());
  return ok;
}

int cmd_graph(const fs::path& log, const std::string& cutoff, const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  run_manifest m("graph", out);
  m.input(log);
  const auto when = cutoff.empty() ? revnet::date::max() : revnet::date::parse(cutoff);
  m.config("cutoff=" + cutoff + "\n");
  const auto c = load_corpus(log);
  const auto g = revnet::project(revnet::snapshot(c, when));
  std::ostringstream edges, nodes, table;
  revnet::write_edge_list(g, edges, nodes);
  revnet::write_csv(table, revnet::compute_centralities(g));
  m.output("edges.txt", edges.str());
  m.output("nodes.txt", nodes.str());
  m.output("centrality.csv", table.str());
  m.time("graph", t0);
  m.write();
  fmt::print("{} reviewers, {} edges\n", g.size(), g.edge_count());
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"revnet: reviewer-network citation impact pipeline"};
  app.require_subcommand(1);
  std::string lex_flag;
  app.add_option("--lexicon", lex_flag, "Lexicon directory (default: $REVNET_LEXICON_DIR or the bundled lists)");

  fs::path log, out, config, features, model;
  std::optional<std::uint64_t> seed;
  revnet::year_range window{2007, 2012};
  train_flags tf;
  revnet::analysis_options ao;
  std::string cutoff;

  auto* validate = app.add_subcommand("validate", "Check an event log");
  validate->add_option("log", log, "Event log (JSON lines)")->required();

  auto* generate = app.add_subcommand("generate", "Write a synthetic event log");
  generate->add_option("--config", config, "Generator config (ini)")->check(CLI::ExistingFile);
  generate->add_option("--seed", seed, "Override the config seed");
  generate->add_option("--out", out, "Run directory")->required();

  auto* feats = app.add_subcommand("features", "Assemble the feature matrix");
  feats->add_option("log", log)->required();
  feats->add_option("--from", window.from, "First decision year")->capture_default_str();
  feats->add_option("--to", window.to, "Last decision year")->capture_default_str();
  feats->add_option("--out", out, "Run directory")->required();

  auto* train = app.add_subcommand("train", "Cross-validate and fit the SVR");
  train->add_option("features", features, "features.csv")->required();
  train->add_option("--C", tf.C)->capture_default_str();
  train->add_option("--gamma", tf.gamma, "RBF width (default 0.02, or 0.01 with --network-only)");
  train->add_option("--epsilon", tf.epsilon)->capture_default_str();
  train->add_option("--folds", tf.folds)->capture_default_str();
  train->add_option("--seed", tf.seed)->capture_default_str();
  train->add_flag("--network-only", tf.network_only, "Use Deg, BC, CC, Clus, PR only");
  train->add_option("--out", out, "Run directory")->required();

  auto* pred = app.add_subcommand("predict", "Apply a trained model");
  pred->add_option("--model", model)->required();
  pred->add_option("features", features)->required();
  pred->add_option("--out", out, "Run directory")->required();

  auto* analyze = app.add_subcommand("analyze", "Write the analysis CSV bundle");
  analyze->add_option("log", log)->required();
  analyze->add_option("--exposure-cutoff", ao.exposure_cutoff_year)->capture_default_str();
  analyze->add_option("--extreme-fraction", ao.extreme_fraction)->capture_default_str();
  analyze->add_option("--out", out, "Run directory")->required();

  auto* graph = app.add_subcommand("graph", "Export the reviewer graph and centralities");
  graph->add_option("log", log)->required();
  graph->add_option("--cutoff", cutoff, "YYYY-MM-DD (default: full history)");
  graph->add_option("--out", out, "Run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : usage;
  }

  try {
    const auto lex = lexicon_dir(lex_flag);
    if (!log.empty() && !fs::exists(log)) throw revnet::io_error(fmt::format("no such file: {}", log.string()));
    if (*validate) return cmd_validate(log);
    if (*generate) return cmd_generate(config, seed, out, lex);
    if (*feats) return cmd_features(log, window, out, lex);
    if (*train) return cmd_train(features, tf, out);
    if (*pred) return cmd_predict(model, features, out);
    if (*analyze) return cmd_analyze(log, ao, out, lex);
    if (*graph) return cmd_graph(log, cutoff, out);
  } catch (const revnet::io_error& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return io;
  } catch (const fs::filesystem_error& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return io;
  } catch (const validation_failure& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return invalid;
  } catch (const revnet::validation_error& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return invalid;
  } catch (const std::invalid_argument& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return usage;
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return invalid;
  }
  return usage;
}
