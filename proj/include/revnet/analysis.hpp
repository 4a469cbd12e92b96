#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <revnet/corpus.hpp>
#include <revnet/text_metrics.hpp>

namespace revnet {

/// c <= 1 -> 0, otherwise ceil(log2 c): buckets <=1, 2, (2,4], (4,8], ...
int bucket_powers_of_two(std::int64_t citations);

struct bucket_spec {
  enum class kind { powers_of_two, fixed_width, ratio_deciles };

  kind scheme = kind::fixed_width;
  double width = 100.0;  // fixed_width only

  static bucket_spec powers_of_two() { return {kind::powers_of_two, 0.0}; }
  static bucket_spec fixed(double width) { return {kind::fixed_width, width}; }
  static bucket_spec deciles() { return {kind::ratio_deciles, 0.1}; }

  /// fixed_width: floor(v / width), i.e. [k w, (k+1) w). ratio_deciles: [k/10, (k+1)/10)
  /// with 1.0 folded into the last bucket. powers_of_two: see bucket_powers_of_two.
  std::int64_t index(double value) const;
  std::string label(std::int64_t index) const;
};

struct group_stat {
  std::int64_t bucket = 0;
  std::string label;
  std::size_t count = 0;
  double mean = 0.0;
};

/// Mean of `values` per non-empty bucket of `keys`, ascending by bucket.
std::vector<group_stat> bucket_mean(std::span<const double> values, std::span<const double> keys,
                                    const bucket_spec& spec);

struct cdf_point {
  double value;
  double fraction;  // share of samples <= value
};

/// Empirical CDF at each distinct sample value.
std::vector<cdf_point> empirical_cdf(std::vector<double> samples);

struct quartile_result {
  std::vector<std::string> top_reviewers;
  std::vector<std::string> bottom_reviewers;
  std::vector<cdf_point> top_cdf;
  std::vector<cdf_point> bottom_cdf;
};

/// Ranks reviewers by score and pools the citations of the top and bottom
/// quarter (quarter size floor(n/4); reviewers tied with the boundary score are
/// included). Throws std::invalid_argument for fewer than 4 reviewers.
quartile_result quartile_contrast(std::span<const std::pair<std::string, double>> scores,
                                  const std::map<std::string, std::vector<double>>& citations_by_reviewer);

struct dataset_summary {
  std::size_t papers = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t withdrawn = 0;
  double mean_reviews_accepted = 0.0;
  double mean_reviews_rejected = 0.0;
  double mean_citations_accepted = 0.0;
  double mean_citations_rejected = 0.0;
  std::size_t authors = 0;
  std::size_t authors_with_accept = 0;
  double mean_submissions_per_author = 0.0;
  double mean_authors_per_paper = 0.0;
};

dataset_summary summary_table(const corpus& c);

struct irregular_case {
  std::string paper_id;
  revnet::outcome outcome;
  int decision_year = 0;
  std::int64_t citations = 0;
  std::optional<double> author_acceptance;  // mean over authors, as of submission
  std::optional<double> reviewer_accept;    // mean over assigned reviewers, as of submission
  std::optional<double> report_length;      // mean first-round referee report words
};

struct irregular_thresholds {
  std::int64_t high_cited_rejected = 20;  // flagged when citations >= this
  std::int64_t low_cited_accepted = 10;   // flagged when citations < this
};

struct irregular_result {
  std::vector<irregular_case> high_cited_rejected;
  std::vector<irregular_case> low_cited_accepted;
};

/// Considers papers decided before `exposure_cutoff_year` that carry a citation record.
irregular_result irregular_cases(const corpus& c, int exposure_cutoff_year, irregular_thresholds t = {});

struct analysis_options {
  int exposure_cutoff_year = 2012;
  double extreme_fraction = 0.10;  // high/low cited groups for the word-category contrast
};

struct analysis_output {
  std::string name;
  std::string file;
  std::vector<std::string> columns;
};

/// Writes one CSV per analysis plus `manifest.csv` (analysis,file,columns) into `dir`.
std::vector<analysis_output> write_analysis_bundle(const corpus& c, const lexicon& lex,
                                                   const std::filesystem::path& dir,
                                                   const analysis_options& opts = {});

}  // namespace revnet
