#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <revnet/date.hpp>

namespace revnet {

enum class event_kind { submission, assignment, report, decision, citation };
enum class recommendation { accept, reject, revise };
enum class outcome { accept, reject, withdraw };

struct submission_info {
  std::vector<std::string> author_ids;
  std::string title;

  bool operator==(const submission_info&) const = default;
};

struct assignment_info {
  std::string editor_id;
  std::string reviewer_id;
  int round = 1;

  bool operator==(const assignment_info&) const = default;
};

struct report_info {
  std::string reviewer_id;
  int round = 1;
  std::string text;
  revnet::recommendation recommendation = recommendation::revise;

  bool operator==(const report_info&) const = default;
};

struct decision_info {
  revnet::outcome outcome = outcome::accept;
  int round = 1;

  bool operator==(const decision_info&) const = default;
};

struct citation_info {
  std::int64_t cumulative_citations = 0;
  int as_of_year = 0;

  bool operator==(const citation_info&) const = default;
};

/// One timestamped fact in a paper's editorial history. The payload alternative
/// order matches `event_kind`.
struct review_event {
  std::string paper_id;
  date on;
  std::variant<submission_info, assignment_info, report_info, decision_info, citation_info> payload;

  event_kind kind() const { return static_cast<event_kind>(payload.index()); }

  bool operator==(const review_event&) const = default;
};

struct parse_error {
  std::size_t line = 0;  // 1-based; events built in memory use their index + 1
  std::string message;
};

struct parse_result {
  std::vector<review_event> events;
  std::vector<parse_error> errors;

  bool ok() const { return errors.empty(); }
};

/// Thrown when a corpus is built from events that fail validation.
class validation_error : public std::runtime_error {
 public:
  validation_error(std::vector<parse_error> errors);
  const std::vector<parse_error>& errors() const { return errors_; }

 private:
  std::vector<parse_error> errors_;
};

std::string_view to_string(event_kind k);
std::string_view to_string(recommendation r);
std::string_view to_string(outcome o);

/// Parses a line-delimited JSON event log. Malformed lines are skipped and reported;
/// semantic violations (see `validate_events`) are reported and the offending events dropped.
parse_result parse_events(std::istream& in);
parse_result parse_events(std::string_view text);

/// Checks the cross-event invariants: prior submission, contiguous rounds,
/// single terminal decision, citation records only after a terminal decision.
std::vector<parse_error> validate_events(std::span<const review_event> events);

std::string to_json_line(const review_event& ev);
void write_events(std::ostream& out, std::span<const review_event> events);

struct assignment_entry {
  std::string editor_id;
  std::string reviewer_id;
  int round;
  date on;
};

struct report_entry {
  std::string reviewer_id;
  int round;
  std::string text;
  revnet::recommendation recommendation;
  date on;
};

struct decision_entry {
  revnet::outcome outcome;
  int round;
  date on;
};

struct citation_entry {
  std::int64_t cumulative_citations;
  int as_of_year;
  date on;
};

struct paper_record {
  std::string id;
  date submitted;
  std::vector<std::string> author_ids;
  std::string title;
  std::vector<assignment_entry> assignments;  // file order
  std::vector<report_entry> reports;          // file order
  std::optional<decision_entry> decision;
  std::optional<citation_entry> citations;    // record with the latest as_of_year

  bool accepted() const { return decision && decision->outcome == outcome::accept; }
  bool rejected() const { return decision && decision->outcome == outcome::reject; }
  /// Year of the terminal decision (publication year for accepted papers).
  std::optional<int> decision_year() const;
  /// Highest round with a referee report; 0 when no report exists.
  int review_rounds() const;
  std::vector<std::string> reviewer_ids() const;  // distinct, first-assignment order
};

struct author_profile {
  std::string author_id;
  int accept_count = 0;
  int reject_count = 0;
  std::vector<date> submission_dates;
  std::optional<double> mean_inter_submission_gap;  // days

  std::optional<double> acceptance_ratio() const;
};

struct reviewer_profile {
  std::string reviewer_id;
  int accept_count = 0;
  int reject_count = 0;
  std::optional<date> last_assignment;

  std::optional<double> accept_ratio() const;
};

/// Validated, indexed event log. Immutable after construction.
class corpus {
 public:
  /// Throws validation_error if the events violate any log invariant.
  explicit corpus(std::vector<review_event> events);

  const std::vector<review_event>& events() const { return events_; }
  /// Papers ordered by (submission date, paper id).
  std::span<const paper_record> papers() const { return papers_; }
  const paper_record* find(std::string_view paper_id) const;

  std::span<const std::size_t> papers_of_author(std::string_view author_id) const;
  std::span<const std::size_t> papers_reported_by(std::string_view reviewer_id) const;
  /// Sorted dates of every assignment of the reviewer.
  std::span<const date> assignment_dates(std::string_view reviewer_id) const;

  std::vector<std::string> author_ids() const;    // sorted
  std::vector<std::string> reviewer_ids() const;  // sorted, any reviewer with an assignment

 private:
  std::vector<review_event> events_;
  std::vector<paper_record> papers_;
  std::unordered_map<std::string, std::size_t> paper_index_;
  std::unordered_map<std::string, std::vector<std::size_t>> author_papers_;
  std::unordered_map<std::string, std::vector<std::size_t>> reviewer_papers_;
  std::unordered_map<std::string, std::vector<date>> reviewer_assignments_;
};

/// Counts only decisions dated strictly before `as_of`; withdrawals are ignored.
author_profile make_author_profile(const corpus& c, std::string_view author_id, date as_of);
reviewer_profile make_reviewer_profile(const corpus& c, std::string_view reviewer_id, date as_of);

}  // namespace revnet
