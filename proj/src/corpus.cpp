#include <revnet/corpus.hpp>

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

namespace revnet {

using nlohmann::json;

validation_error::validation_error(std::vector<parse_error> errors)
    : std::runtime_error(errors.empty()
                             ? std::string("invalid event log")
                             : fmt::format("invalid event log: line {}: {} ({} error(s))",
                                           errors.front().line, errors.front().message,
                                           errors.size())),
      errors_(std::move(errors)) {}

std::string_view to_string(event_kind k) {
  switch (k) {
    case event_kind::submission: return "submission";
    case event_kind::assignment: return "assignment";
    case event_kind::report: return "report";
    case event_kind::decision: return "decision";
    case event_kind::citation: return "citation";
  }
  return "?";
}

std::string_view to_string(recommendation r) {
  switch (r) {
    case recommendation::accept: return "accept";
    case recommendation::reject: return "reject";
    case recommendation::revise: return "revise";
  }
  return "?";
}

std::string_view to_string(outcome o) {
  switch (o) {
    case outcome::accept: return "accept";
    case outcome::reject: return "reject";
    case outcome::withdraw: return "withdraw";
  }
  return "?";
}

namespace {

struct line_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const json& field(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) throw line_error(fmt::format("missing field '{}'", name));
  return *it;
}

std::string string_field(const json& obj, const char* name) {
  const auto& v = field(obj, name);
  if (!v.is_string()) throw line_error(fmt::format("field '{}' must be a string", name));
  return v.get<std::string>();
}

std::int64_t int_field(const json& obj, const char* name) {
  const auto& v = field(obj, name);
  if (!v.is_number_integer()) throw line_error(fmt::format("field '{}' must be an integer", name));
  return v.get<std::int64_t>();
}

int round_field(const json& obj) {
  auto r = int_field(obj, "round");
  if (r < 1 || r > 1000) throw line_error(fmt::format("round {} out of range", r));
  return static_cast<int>(r);
}

recommendation parse_recommendation(const std::string& s) {
  if (s == "accept") return recommendation::accept;
  if (s == "reject") return recommendation::reject;
  if (s == "revise") return recommendation::revise;
  throw line_error(fmt::format("unknown recommendation '{}'", s));
}

outcome parse_outcome(const std::string& s) {
  if (s == "accept") return outcome::accept;
  if (s == "reject") return outcome::reject;
  if (s == "withdraw") return outcome::withdraw;
  throw line_error(fmt::format("unknown outcome '{}'", s));
}

review_event parse_line(std::string_view line) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw line_error(fmt::format("invalid JSON at byte {}", e.byte));
  }
  if (!obj.is_object()) throw line_error("record must be a JSON object");

  review_event ev;
  ev.paper_id = string_field(obj, "paper_id");
  if (ev.paper_id.empty()) throw line_error("empty paper_id");
  try {
    ev.on = date::parse(string_field(obj, "date"));
  } catch (const std::invalid_argument& e) {
    throw line_error(e.what());
  }

  const auto type = string_field(obj, "type");
  if (type == "submission") {
    submission_info s;
    const auto& authors = field(obj, "author_ids");
    if (!authors.is_array() || authors.empty())
      throw line_error("field 'author_ids' must be a non-empty array");
    for (const auto& a : authors) {
      if (!a.is_string() || a.get<std::string>().empty())
        throw line_error("author ids must be non-empty strings");
      s.author_ids.push_back(a.get<std::string>());
    }
    s.title = obj.contains("title") ? string_field(obj, "title") : std::string();
    ev.payload = std::move(s);
  } else if (type == "assignment") {
    ev.payload = assignment_info{string_field(obj, "editor_id"), string_field(obj, "reviewer_id"),
                                 round_field(obj)};
  } else if (type == "report") {
    ev.payload = report_info{string_field(obj, "reviewer_id"), round_field(obj),
                             string_field(obj, "text"),
                             parse_recommendation(string_field(obj, "recommendation"))};
  } else if (type == "decision") {
    ev.payload = decision_info{parse_outcome(string_field(obj, "outcome")), round_field(obj)};
  } else if (type == "citation") {
    citation_info c{int_field(obj, "cumulative_citations"),
                    static_cast<int>(int_field(obj, "as_of_year"))};
    if (c.cumulative_citations < 0) throw line_error("cumulative_citations must be >= 0");
    ev.payload = c;
  } else {
    throw line_error(fmt::format("unknown record type '{}'", type));
  }
  return ev;
}

struct issue {
  std::size_t index;
  std::string message;
  bool drop;
};

std::vector<issue> check_events(std::span<const review_event> events) {
  std::vector<issue> issues;
  std::unordered_set<std::string> submitted;
  std::unordered_set<std::string> decided;
  std::map<std::string, std::pair<std::size_t, std::set<int>>> rounds;  // paper -> (submission idx, rounds)
  std::vector<std::size_t> citations;

  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    if (ev.kind() == event_kind::submission) {
      if (!submitted.insert(ev.paper_id).second) {
        issues.push_back({i, fmt::format("duplicate submission for paper '{}'", ev.paper_id), true});
        continue;
      }
      rounds[ev.paper_id].first = i;
      continue;
    }
    if (!submitted.contains(ev.paper_id)) {
      issues.push_back({i,
                        fmt::format("{} for paper '{}' precedes its submission",
                                    to_string(ev.kind()), ev.paper_id),
                        true});
      continue;
    }
    switch (ev.kind()) {
      case event_kind::assignment:
        rounds[ev.paper_id].second.insert(std::get<assignment_info>(ev.payload).round);
        break;
      case event_kind::report:
        rounds[ev.paper_id].second.insert(std::get<report_info>(ev.payload).round);
        break;
      case event_kind::decision:
        if (!decided.insert(ev.paper_id).second) {
          issues.push_back(
              {i, fmt::format("duplicate terminal decision for paper '{}'", ev.paper_id), true});
          continue;
        }
        rounds[ev.paper_id].second.insert(std::get<decision_info>(ev.payload).round);
        break;
      case event_kind::citation:
        citations.push_back(i);
        break;
      case event_kind::submission:
        break;
    }
  }

  for (const auto& [paper, entry] : rounds) {
    const auto& rs = entry.second;
    if (rs.empty()) continue;
    int expected = 1;
    for (int r : rs) {
      if (r != expected) {
        issues.push_back(
            {entry.first, fmt::format("paper '{}' is missing review round {}", paper, expected),
             false});
        break;
      }
      ++expected;
    }
  }
  for (auto i : citations) {
    if (!decided.contains(events[i].paper_id))
      issues.push_back(
          {i,
           fmt::format("citation record for paper '{}' without a terminal decision",
                       events[i].paper_id),
           true});
  }
  std::stable_sort(issues.begin(), issues.end(),
                   [](const issue& a, const issue& b) { return a.index < b.index; });
  return issues;
}

}  // namespace

std::vector<parse_error> validate_events(std::span<const review_event> events) {
  std::vector<parse_error> out;
  for (auto& is : check_events(events)) out.push_back({is.index + 1, std::move(is.message)});
  return out;
}

parse_result parse_events(std::istream& in) {
  parse_result result;
  std::vector<std::size_t> lines;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      result.events.push_back(parse_line(line));
      lines.push_back(lineno);
    } catch (const line_error& e) {
      result.errors.push_back({lineno, e.what()});
    }
  }

  auto issues = check_events(result.events);
  std::vector<bool> dropped(result.events.size(), false);
  for (auto& is : issues) {
    result.errors.push_back({lines[is.index], std::move(is.message)});
    if (is.drop) dropped[is.index] = true;
  }
  if (!issues.empty()) {
    std::vector<review_event> kept;
    for (std::size_t i = 0; i < result.events.size(); ++i)
      if (!dropped[i]) kept.push_back(std::move(result.events[i]));
    result.events = std::move(kept);
  }
  std::stable_sort(result.errors.begin(), result.errors.end(),
                   [](const parse_error& a, const parse_error& b) { return a.line < b.line; });
  return result;
}

parse_result parse_events(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_events(in);
}

std::string to_json_line(const review_event& ev) {
  json obj;
  obj["type"] = to_string(ev.kind());
  obj["paper_id"] = ev.paper_id;
  obj["date"] = ev.on.iso();
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, submission_info>) {
          obj["author_ids"] = p.author_ids;
          obj["title"] = p.title;
        } else if constexpr (std::is_same_v<T, assignment_info>) {
          obj["editor_id"] = p.editor_id;
          obj["reviewer_id"] = p.reviewer_id;
          obj["round"] = p.round;
        } else if constexpr (std::is_same_v<T, report_info>) {
          obj["reviewer_id"] = p.reviewer_id;
          obj["round"] = p.round;
          obj["text"] = p.text;
          obj["recommendation"] = to_string(p.recommendation);
        } else if constexpr (std::is_same_v<T, decision_info>) {
          obj["outcome"] = to_string(p.outcome);
          obj["round"] = p.round;
        } else {
          obj["cumulative_citations"] = p.cumulative_citations;
          obj["as_of_year"] = p.as_of_year;
        }
      },
      ev.payload);
  return obj.dump();
}

void write_events(std::ostream& out, std::span<const review_event> events) {
  for (const auto& ev : events) out << to_json_line(ev) << '\n';
}

std::optional<int> paper_record::decision_year() const {
  if (!decision) return std::nullopt;
  return decision->on.year();
}

int paper_record::review_rounds() const {
  int rounds = 0;
  for (const auto& r : reports) rounds = std::max(rounds, r.round);
  return rounds;
}

std::vector<std::string> paper_record::reviewer_ids() const {
  std::vector<std::string> ids;
  for (const auto& a : assignments)
    if (std::find(ids.begin(), ids.end(), a.reviewer_id) == ids.end()) ids.push_back(a.reviewer_id);
  return ids;
}

std::optional<double> author_profile::acceptance_ratio() const {
  const int total = accept_count + reject_count;
  if (total == 0) return std::nullopt;
  return static_cast<double>(accept_count) / total;
}

std::optional<double> reviewer_profile::accept_ratio() const {
  const int total = accept_count + reject_count;
  if (total == 0) return std::nullopt;
  return static_cast<double>(accept_count) / total;
}

corpus::corpus(std::vector<review_event> events) : events_(std::move(events)) {
  if (auto errors = validate_events(events_); !errors.empty()) throw validation_error(std::move(errors));

  std::unordered_map<std::string, paper_record> by_id;
  for (const auto& ev : events_) {
    if (ev.kind() == event_kind::submission) {
      const auto& s = std::get<submission_info>(ev.payload);
      paper_record rec;
      rec.id = ev.paper_id;
      rec.submitted = ev.on;
      rec.author_ids = s.author_ids;
      rec.title = s.title;
      by_id.emplace(ev.paper_id, std::move(rec));
      continue;
    }
    auto& rec = by_id.at(ev.paper_id);
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, assignment_info>) {
            rec.assignments.push_back({p.editor_id, p.reviewer_id, p.round, ev.on});
          } else if constexpr (std::is_same_v<T, report_info>) {
            rec.reports.push_back({p.reviewer_id, p.round, p.text, p.recommendation, ev.on});
          } else if constexpr (std::is_same_v<T, decision_info>) {
            rec.decision = decision_entry{p.outcome, p.round, ev.on};
          } else if constexpr (std::is_same_v<T, citation_info>) {
            if (!rec.citations || p.as_of_year >= rec.citations->as_of_year)
              rec.citations = citation_entry{p.cumulative_citations, p.as_of_year, ev.on};
          }
        },
        ev.payload);
  }

  papers_.reserve(by_id.size());
  for (auto& [id, rec] : by_id) papers_.push_back(std::move(rec));
  std::sort(papers_.begin(), papers_.end(), [](const paper_record& a, const paper_record& b) {
    if (a.submitted != b.submitted) return a.submitted < b.submitted;
    return a.id < b.id;
  });

  for (std::size_t i = 0; i < papers_.size(); ++i) {
    const auto& p = papers_[i];
    paper_index_.emplace(p.id, i);
    for (const auto& a : p.author_ids) {
      auto& list = author_papers_[a];
      if (list.empty() || list.back() != i) list.push_back(i);
    }
    std::vector<std::string_view> seen;
    for (const auto& r : p.reports) {
      if (std::find(seen.begin(), seen.end(), r.reviewer_id) != seen.end()) continue;
      seen.push_back(r.reviewer_id);
      reviewer_papers_[r.reviewer_id].push_back(i);
    }
    for (const auto& a : p.assignments) reviewer_assignments_[a.reviewer_id].push_back(a.on);
  }
  for (auto& [id, dates] : reviewer_assignments_) std::sort(dates.begin(), dates.end());
}

const paper_record* corpus::find(std::string_view paper_id) const {
  auto it = paper_index_.find(std::string(paper_id));
  return it == paper_index_.end() ? nullptr : &papers_[it->second];
}

namespace {

template <typename Map, typename T = typename Map::mapped_type::value_type>
std::span<const T> lookup(const Map& m, std::string_view key) {
  auto it = m.find(std::string(key));
  if (it == m.end()) return {};
  return it->second;
}

template <typename Map>
std::vector<std::string> sorted_keys(const Map& m) {
  std::vector<std::string> keys;
  keys.reserve(m.size());
  for (const auto& [k, v] : m) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

std::span<const std::size_t> corpus::papers_of_author(std::string_view author_id) const {
  return lookup(author_papers_, author_id);
}

std::span<const std::size_t> corpus::papers_reported_by(std::string_view reviewer_id) const {
  return lookup(reviewer_papers_, reviewer_id);
}

std::span<const date> corpus::assignment_dates(std::string_view reviewer_id) const {
  return lookup(reviewer_assignments_, reviewer_id);
}

std::vector<std::string> corpus::author_ids() const { return sorted_keys(author_papers_); }

std::vector<std::string> corpus::reviewer_ids() const { return sorted_keys(reviewer_assignments_); }

author_profile make_author_profile(const corpus& c, std::string_view author_id, date as_of) {
  author_profile prof;
  prof.author_id = author_id;
  for (auto idx : c.papers_of_author(author_id)) {
    const auto& p = c.papers()[idx];
    if (p.submitted < as_of) prof.submission_dates.push_back(p.submitted);
    if (p.decision && p.decision->on < as_of) {
      if (p.decision->outcome == outcome::accept) ++prof.accept_count;
      else if (p.decision->outcome == outcome::reject) ++prof.reject_count;
    }
  }
  // papers are indexed in submission order, so the dates are already sorted
  const auto& d = prof.submission_dates;
  if (d.size() >= 2)
    prof.mean_inter_submission_gap = static_cast<double>(d.back() - d.front()) / (d.size() - 1);
  return prof;
}

reviewer_profile make_reviewer_profile(const corpus& c, std::string_view reviewer_id, date as_of) {
  reviewer_profile prof;
  prof.reviewer_id = reviewer_id;
  for (auto idx : c.papers_reported_by(reviewer_id)) {
    const auto& p = c.papers()[idx];
    if (!p.decision || p.decision->on >= as_of) continue;
    // a report filed on or after as_of must not reach back into the profile
    const bool reported = std::any_of(p.reports.begin(), p.reports.end(), [&](const report_entry& r) {
      return r.reviewer_id == reviewer_id && r.on < as_of;
    });
    if (!reported) continue;
    if (p.decision->outcome == outcome::accept) ++prof.accept_count;
    else if (p.decision->outcome == outcome::reject) ++prof.reject_count;
  }
  auto dates = c.assignment_dates(reviewer_id);
  auto it = std::lower_bound(dates.begin(), dates.end(), as_of);
  if (it != dates.begin()) prof.last_assignment = *std::prev(it);
  return prof;
}

}  // namespace revnet
