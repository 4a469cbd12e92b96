#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include <revnet/centrality.hpp>
#include <revnet/corpus.hpp>
#include <revnet/review_graph.hpp>
#include <revnet/text_metrics.hpp>

namespace revnet {

inline constexpr std::size_t feature_count = 14;
inline constexpr std::size_t network_feature_count = 5;

/// Regression columns, in table order. The first five are network features.
inline constexpr std::array<std::string_view, feature_count> feature_names = {
    "Deg", "BC", "CC", "Clus", "PR", "RR", "TS", "RL", "SNT", "AR", "AP", "RAC", "TA", "DR"};

enum class feature : std::size_t { deg, bc, cc, clus, pr, rr, ts, rl, snt, ar, ap, rac, ta, dr };

constexpr std::size_t index(feature f) { return static_cast<std::size_t>(f); }

std::optional<feature> feature_from_name(std::string_view name);

/// Missing entries hold NaN and are flagged in `missing`.
struct feature_vector {
  std::string paper_id;
  std::array<double, feature_count> values{};
  std::array<bool, feature_count> missing{};

  double operator[](feature f) const { return values[index(f)]; }
  void set(feature f, std::optional<double> v);

  /// Bitwise equality of every value and flag.
  bool identical(const feature_vector& other) const;
};

struct target_value {
  std::string paper_id;
  int publication_year = 0;
  double citation_rank = 0.0;
};

struct cited_paper {
  std::string paper_id;
  int publication_year = 0;
  std::int64_t citations = 0;
};

/// Within each year: ascending mid-rank percentiles (rank - 0.5) / n, ties
/// averaged, mapped through the standard normal quantile. Output order follows input.
std::vector<target_value> citation_rank_targets(std::span<const cited_paper> papers);

/// Per-paper feature extraction against one corpus. Network features come from
/// cached reviewer-graph snapshots; the cache is keyed by how many distinct
/// editor-reviewer pairs precede the cutoff, so papers sharing a graph share the work.
class feature_extractor {
 public:
  feature_extractor(const corpus& c, const lexicon& lex, pagerank_options pr = {});

  /// Deg, BC, CC, Clus, PR as means over the paper's distinct assigned reviewers,
  /// measured on the graph of assignments dated before the submission date.
  std::array<std::optional<double>, network_feature_count> network_features(const paper_record& p) const;

  /// RR, TS, RL, SNT, AR, AP, RAC, TA, DR.
  std::array<std::optional<double>, feature_count - network_feature_count> supporting_features(
      const paper_record& p) const;

  feature_vector extract(const paper_record& p) const;

  struct graph_state {
    review_graph graph;
    centrality_table table;
  };
  /// Snapshot graph and centralities in force for papers submitted on `cutoff`.
  std::shared_ptr<const graph_state> graph_at(date cutoff) const;

 private:
  const corpus& corpus_;
  const lexicon& lexicon_;
  pagerank_options pagerank_;
  assignment_timeline timeline_;
  mutable std::mutex mutex_;
  mutable std::map<std::size_t, std::shared_ptr<const graph_state>> cache_;
};

struct year_range {
  int from = 0;
  int to = 0;
};

using missing_mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct feature_matrix {
  std::vector<std::string> paper_ids;
  std::vector<int> years;
  Eigen::MatrixXd X;  // NaN where missing
  missing_mask missing;
  Eigen::VectorXd y;

  Eigen::Index rows() const { return X.rows(); }
};

/// Rows are accepted papers with a citation record whose decision year lies in
/// `window`, ordered by (submission date, paper id). Targets rank papers within
/// their publication year among the selected rows. Throws std::invalid_argument
/// for an inverted window.
feature_matrix assemble_matrix(const corpus& c, year_range window, const lexicon& lex,
                               pagerank_options pr = {});

/// `paper_id,Deg,...,DR,target,year`; missing entries are written as empty fields.
void write_feature_csv(const feature_matrix& m, std::ostream& out);
/// `paper_id,Deg,...,DR` with 1 marking a missing entry.
void write_missing_csv(const feature_matrix& m, std::ostream& out);

/// Reads a feature CSV; if `mask_path` exists it supplies the missing flags,
/// otherwise empty or NaN fields are treated as missing. Throws
/// std::runtime_error on a schema mismatch.
feature_matrix read_feature_csv(const std::filesystem::path& path,
                                const std::optional<std::filesystem::path>& mask_path = std::nullopt);

/// Conventional mask location next to a features CSV: `x.csv` -> `x.missing.csv`.
std::filesystem::path missing_path_for(const std::filesystem::path& features_csv);

}  // namespace revnet
