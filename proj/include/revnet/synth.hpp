#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <revnet/corpus.hpp>
#include <revnet/text_metrics.hpp>

namespace revnet {

/// Planted effects. Each one owns a per-paper signal, converted to normal scores
/// over all papers; latent quality
/// is sum(effect * signal) + N(0, noise_sd).
///   network  mean degree of the assigned reviewer(s) in the editor-pool graph;
///            hub reviewers sit in several pools
///   TS       team size
///   AR       mean author reputation
///   AP       log activity of the first author (active authors submit more often)
///   RAC      mean leniency of the assigned reviewer(s)
///   SNT, RL, LQI, RR, DR   per-paper signals that shape report tone, report
///            length, word-category rates, round count and report delay
inline constexpr std::array<std::string_view, 10> effect_names = {"network", "TS",  "AR",  "AP", "RAC",
                                                                  "SNT",     "RL",  "LQI", "RR", "DR"};
inline constexpr std::size_t effect_count = effect_names.size();

std::optional<std::size_t> effect_index(std::string_view name);

struct synth_config {
  std::uint64_t seed = 1;
  int year_from = 2005;
  int year_to = 2012;
  int papers_per_year = 250;
  int n_editors = 10;
  int n_reviewers = 60;
  int n_authors = 0;  // 0: papers * mean_team_size / 5.18
  int max_editors_per_reviewer = 4;
  double multi_reviewer_fraction = 0.10;
  double accept_rate = 0.74;  // among accepted + rejected
  double withdraw_rate = 0.049;
  double mean_team_size = 2.87;
  double author_activity_sd = 0.8;  // log-normal spread of submission propensity

  std::array<double, effect_count> effects{1.0, 0.15, 0.1, 0.1, 0.0, 0.0, 0.15, 0.0, 0.1, 0.15};
  double noise_sd = 0.3;
  double decision_noise = 2.0;
  double leniency_weight = 1.0;  // how much reviewer leniency moves the decision

  double citation_mu = 1.25;  // log citations per year of exposure
  double citation_sigma = 0.5;
  double rejected_penalty = 0.9;
  int citation_year = 2015;

  double& effect(std::string_view name);
  double effect(std::string_view name) const;

  /// Throws std::invalid_argument for an infeasible or out-of-range config.
  void check() const;
  std::size_t paper_total() const;
};

/// Key-value file with sections; see data/configs/default.ini. Unknown keys are
/// rejected. Throws std::runtime_error on read or parse failure.
synth_config load_synth_config(const std::filesystem::path& path);
synth_config parse_synth_config(std::string_view text);
std::string synth_config_to_ini(const synth_config& cfg);

/// Seeded corpus: events ordered by date, ties in causal order.
std::vector<review_event> generate(const synth_config& cfg, const lexicon& lex);

struct planted_paper {
  std::string paper_id;
  double quality = 0.0;
  std::array<double, effect_count> signals{};  // normal scores
  outcome decision = outcome::accept;
  std::optional<std::int64_t> citations;
  std::vector<std::string> reviewer_ids;
};

struct ground_truth_result {
  std::vector<planted_paper> papers;                 // generation order
  std::map<std::string, int> reviewer_hub_level;     // editor pools per reviewer
  std::map<std::string, int> reviewer_pool_degree;  // reviewers sharing a pool
  std::map<std::string, double> reviewer_leniency;
  std::map<std::string, double> author_reputation;
};

/// Regenerates from `cfg` and returns the latent state behind `log`. Throws
/// std::invalid_argument if `log` is not what `cfg` produces.
ground_truth_result ground_truth(const synth_config& cfg, const lexicon& lex,
                                 std::span<const review_event> log);

}  // namespace revnet
