#include <revnet/features.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include <revnet/io.hpp>
#include <fmt/ostream.h>

namespace revnet {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::optional<double> mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double normal_quantile(double p) {
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, p);
}

}  // namespace

std::optional<feature> feature_from_name(std::string_view name) {
  for (std::size_t i = 0; i < feature_count; ++i)
    if (feature_names[i] == name) return static_cast<feature>(i);
  return std::nullopt;
}

void feature_vector::set(feature f, std::optional<double> v) {
  values[index(f)] = v.value_or(nan);
  missing[index(f)] = !v.has_value();
}

bool feature_vector::identical(const feature_vector& other) const {
  if (paper_id != other.paper_id || missing != other.missing) return false;
  for (std::size_t i = 0; i < feature_count; ++i)
    if (std::bit_cast<std::uint64_t>(values[i]) != std::bit_cast<std::uint64_t>(other.values[i]))
      return false;
  return true;
}

std::vector<target_value> citation_rank_targets(std::span<const cited_paper> papers) {
  std::vector<target_value> out(papers.size());
  std::map<int, std::vector<std::size_t>> by_year;
  for (std::size_t i = 0; i < papers.size(); ++i) {
    out[i].paper_id = papers[i].paper_id;
    out[i].publication_year = papers[i].publication_year;
    by_year[papers[i].publication_year].push_back(i);
  }
  for (auto& [year, idx] : by_year) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return papers[a].citations < papers[b].citations;
    });
    const auto n = static_cast<double>(idx.size());
    for (std::size_t lo = 0; lo < idx.size();) {
      std::size_t hi = lo;
      while (hi + 1 < idx.size() && papers[idx[hi + 1]].citations == papers[idx[lo]].citations) ++hi;
      // 1-based ranks lo+1..hi+1 share their average
      const double rank = (static_cast<double>(lo) + static_cast<double>(hi)) / 2.0 + 1.0;
      const double p = (rank - 0.5) / n;
      const double z = p == 0.5 ? 0.0 : normal_quantile(p);
      for (std::size_t k = lo; k <= hi; ++k) out[idx[k]].citation_rank = z;
      lo = hi + 1;
    }
  }
  return out;
}

feature_extractor::feature_extractor(const corpus& c, const lexicon& lex, pagerank_options pr)
    : corpus_(c), lexicon_(lex), pagerank_(pr), timeline_(c) {}

std::shared_ptr<const feature_extractor::graph_state> feature_extractor::graph_at(date cutoff) const {
  const auto len = timeline_.prefix_length(cutoff);
  std::lock_guard lock(mutex_);
  auto it = cache_.find(len);
  if (it != cache_.end()) return it->second;
  auto g = project(timeline_.snapshot_prefix(len, cutoff));
  auto t = compute_centralities(g, pagerank_);
  auto state = std::make_shared<const graph_state>(graph_state{std::move(g), std::move(t)});
  cache_.emplace(len, state);
  return state;
}

std::array<std::optional<double>, network_feature_count> feature_extractor::network_features(
    const paper_record& p) const {
  std::array<std::optional<double>, network_feature_count> out;
  const auto reviewers = p.reviewer_ids();
  if (reviewers.empty()) return out;
  const auto state = graph_at(p.submitted);
  const auto& t = state->table;
  const auto n = t.size();
  if (n == 0) return out;

  std::array<double, network_feature_count> sum{};
  for (const auto& r : reviewers) {
    if (auto i = state->graph.index_of(r)) {
      const auto k = static_cast<Eigen::Index>(*i);
      sum[0] += t.degree[k];
      sum[1] += t.betweenness[k];
      sum[2] += t.closeness[k];
      sum[3] += t.clustering[k];
      sum[4] += t.pagerank[k];
    } else {
      sum[4] += 1.0 / static_cast<double>(n);
    }
  }
  for (std::size_t j = 0; j < network_feature_count; ++j)
    out[j] = sum[j] / static_cast<double>(reviewers.size());
  return out;
}

std::array<std::optional<double>, feature_count - network_feature_count>
feature_extractor::supporting_features(const paper_record& p) const {
  std::array<std::optional<double>, feature_count - network_feature_count> out;
  auto put = [&](feature f, std::optional<double> v) { out[index(f) - network_feature_count] = v; };

  if (int rr = p.review_rounds(); rr > 0) put(feature::rr, rr);
  put(feature::ts, static_cast<double>(p.author_ids.size()));

  std::vector<double> lengths, sentiments;
  for (const auto& r : p.reports) {
    if (r.round != 1) continue;
    const auto s = score_text(r.text, lexicon_);
    lengths.push_back(static_cast<double>(s.token_count));
    sentiments.push_back(s.sentiment);
  }
  put(feature::rl, mean_of(lengths));
  put(feature::snt, mean_of(sentiments));

  std::vector<double> ratios;
  for (const auto& a : p.author_ids)
    if (auto r = make_author_profile(corpus_, a, p.submitted).acceptance_ratio()) ratios.push_back(*r);
  put(feature::ar, mean_of(ratios));
  put(feature::ap, make_author_profile(corpus_, p.author_ids.front(), p.submitted).mean_inter_submission_gap);

  std::vector<double> accept, idle;
  for (const auto& r : p.reviewer_ids()) {
    const auto prof = make_reviewer_profile(corpus_, r, p.submitted);
    if (auto a = prof.accept_ratio()) accept.push_back(*a);
    if (prof.last_assignment) idle.push_back(static_cast<double>(p.submitted - *prof.last_assignment));
  }
  put(feature::rac, mean_of(accept));
  put(feature::ta, mean_of(idle));

  std::vector<double> delays;
  for (const auto& a : p.assignments) {
    if (a.round != 1) continue;
    for (const auto& r : p.reports)
      if (r.round == 1 && r.reviewer_id == a.reviewer_id) {
        delays.push_back(static_cast<double>(r.on - a.on));
        break;
      }
  }
  put(feature::dr, mean_of(delays));
  return out;
}

feature_vector feature_extractor::extract(const paper_record& p) const {
  feature_vector fv;
  fv.paper_id = p.id;
  const auto net = network_features(p);
  for (std::size_t j = 0; j < network_feature_count; ++j) fv.set(static_cast<feature>(j), net[j]);
  const auto sup = supporting_features(p);
  for (std::size_t j = 0; j < sup.size(); ++j)
    fv.set(static_cast<feature>(j + network_feature_count), sup[j]);
  return fv;
}

feature_matrix assemble_matrix(const corpus& c, year_range window, const lexicon& lex,
                               pagerank_options pr) {
  if (window.from > window.to)
    throw std::invalid_argument(fmt::format("empty year window {}..{}", window.from, window.to));

  std::vector<const paper_record*> rows;
  for (const auto& p : c.papers()) {
    if (!p.accepted() || !p.citations) continue;
    const int year = *p.decision_year();
    if (year < window.from || year > window.to) continue;
    rows.push_back(&p);
  }

  feature_matrix m;
  const auto n = static_cast<Eigen::Index>(rows.size());
  m.X.resize(n, static_cast<Eigen::Index>(feature_count));
  m.missing.resize(n, static_cast<Eigen::Index>(feature_count));
  m.y.resize(n);

  feature_extractor fx(c, lex, pr);
  std::vector<cited_paper> cited;
  cited.reserve(rows.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = *rows[i];
    const auto fv = fx.extract(p);
    for (std::size_t j = 0; j < feature_count; ++j) {
      m.X(i, static_cast<Eigen::Index>(j)) = fv.values[j];
      m.missing(i, static_cast<Eigen::Index>(j)) = fv.missing[j];
    }
    m.paper_ids.push_back(p.id);
    m.years.push_back(*p.decision_year());
    cited.push_back({p.id, *p.decision_year(), p.citations->cumulative_citations});
  }
  const auto targets = citation_rank_targets(cited);
  for (Eigen::Index i = 0; i < n; ++i) m.y[i] = targets[static_cast<std::size_t>(i)].citation_rank;
  return m;
}

void write_feature_csv(const feature_matrix& m, std::ostream& out) {
  out << "paper_id";
  for (auto name : feature_names) out << ',' << name;
  out << ",target,year\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << m.paper_ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.X.cols(); ++j) {
      out << ',';
      if (!m.missing(i, j)) fmt::print(out, "{:.17g}", m.X(i, j));
    }
    fmt::print(out, ",{:.17g},{}\n", m.y[i], m.years[static_cast<std::size_t>(i)]);
  }
}

void write_missing_csv(const feature_matrix& m, std::ostream& out) {
  out << "paper_id";
  for (auto name : feature_names) out << ',' << name;
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << m.paper_ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.missing.cols(); ++j) out << ',' << (m.missing(i, j) ? 1 : 0);
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(fmt::format("line {}: bad number '{}'", line, s));
  }
}

}  // namespace

std::filesystem::path missing_path_for(const std::filesystem::path& features_csv) {
  auto p = features_csv;
  p.replace_extension(".missing.csv");
  return p;
}

feature_matrix read_feature_csv(const std::filesystem::path& path,
                                const std::optional<std::filesystem::path>& mask_path) {
  std::ifstream in(path);
  if (!in) throw io_error(fmt::format("cannot read {}", path.string()));
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(fmt::format("{}: empty file", path.string()));

  std::vector<std::string> expected{"paper_id"};
  for (auto name : feature_names) expected.emplace_back(name);
  expected.emplace_back("target");
  expected.emplace_back("year");
  if (split_csv_line(line) != expected)
    throw std::runtime_error(fmt::format("{}: header does not match the feature schema", path.string()));

  std::vector<std::vector<std::string>> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto f = split_csv_line(line);
    if (f.size() != expected.size())
      throw std::runtime_error(fmt::format("{}:{}: expected {} fields, got {}", path.string(), lineno,
                                           expected.size(), f.size()));
    records.push_back(std::move(f));
  }

  feature_matrix m;
  const auto n = static_cast<Eigen::Index>(records.size());
  const auto d = static_cast<Eigen::Index>(feature_count);
  m.X.resize(n, d);
  m.missing.resize(n, d);
  m.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& f = records[static_cast<std::size_t>(i)];
    m.paper_ids.push_back(f[0]);
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& s = f[static_cast<std::size_t>(j) + 1];
      if (s.empty() || s == "nan" || s == "NaN") {
        m.X(i, j) = nan;
        m.missing(i, j) = true;
      } else {
        m.X(i, j) = parse_double(s, static_cast<std::size_t>(i) + 2);
        m.missing(i, j) = false;
      }
    }
    m.y[i] = parse_double(f[feature_count + 1], static_cast<std::size_t>(i) + 2);
    m.years.push_back(static_cast<int>(parse_double(f[feature_count + 2], static_cast<std::size_t>(i) + 2)));
  }

  const auto mp = mask_path.value_or(missing_path_for(path));
  if (std::filesystem::exists(mp)) {
    std::ifstream min(mp);
    std::getline(min, line);
    expected.resize(feature_count + 1);
    if (split_csv_line(line) != expected)
      throw std::runtime_error(fmt::format("{}: header does not match the mask schema", mp.string()));
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!std::getline(min, line))
        throw std::runtime_error(fmt::format("{}: fewer rows than the feature file", mp.string()));
      auto f = split_csv_line(line);
      if (f.size() != feature_count + 1 || f[0] != m.paper_ids[static_cast<std::size_t>(i)])
        throw std::runtime_error(fmt::format("{}: row {} does not match the feature file", mp.string(), i + 2));
      for (Eigen::Index j = 0; j < d; ++j) {
        const bool miss = f[static_cast<std::size_t>(j) + 1] == "1";
        if (miss) m.X(i, j) = nan;
        else if (m.missing(i, j))
          throw std::runtime_error(fmt::format("{}: row {} has an empty value not flagged missing", path.string(), i + 2));
        m.missing(i, j) = miss;
      }
    }
  }
  return m;
}

}  // namespace revnet
