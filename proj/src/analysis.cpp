#include <revnet/analysis.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <revnet/centrality.hpp>
#include <revnet/features.hpp>
#include <revnet/io.hpp>
#include <revnet/review_graph.hpp>

namespace revnet {

int bucket_powers_of_two(std::int64_t citations) {
  if (citations <= 1) return 0;
  // smallest k with 2^k >= c
  int k = 0;
  std::int64_t p = 1;
  while (p < citations) {
    p <<= 1;
    ++k;
  }
  return k;
}

std::int64_t bucket_spec::index(double value) const {
  switch (scheme) {
    case kind::powers_of_two:
      return bucket_powers_of_two(static_cast<std::int64_t>(std::ceil(value)));
    case kind::ratio_deciles: {
      // integer tenths are exact: 0.2 lands in [0.2, 0.3)
      auto k = static_cast<std::int64_t>(std::floor(value * 10.0 + 1e-9));
      return std::clamp<std::int64_t>(k, 0, 9);
    }
    case kind::fixed_width:
      break;
  }
  return static_cast<std::int64_t>(std::floor(value / width));
}

std::string bucket_spec::label(std::int64_t k) const {
  switch (scheme) {
    case kind::powers_of_two:
      if (k == 0) return "<=1";
      if (k == 1) return "2";
      return fmt::format("({},{}]", std::int64_t{1} << (k - 1), std::int64_t{1} << k);
    case kind::ratio_deciles:
      if (k == 9) return "[0.9,1.0]";
      return fmt::format("[{:.1f},{:.1f})", k / 10.0, (k + 1) / 10.0);
    case kind::fixed_width:
      break;
  }
  return fmt::format("[{:g},{:g})", static_cast<double>(k) * width, static_cast<double>(k + 1) * width);
}

std::vector<group_stat> bucket_mean(std::span<const double> values, std::span<const double> keys,
                                    const bucket_spec& spec) {
  if (values.size() != keys.size()) throw std::invalid_argument("bucket_mean: values and keys differ in length");
  std::map<std::int64_t, std::pair<std::size_t, double>> acc;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto& a = acc[spec.index(keys[i])];
    ++a.first;
    a.second += values[i];
  }
  std::vector<group_stat> out;
  for (const auto& [k, a] : acc) out.push_back({k, spec.label(k), a.first, a.second / static_cast<double>(a.first)});
  return out;
}

std::vector<cdf_point> empirical_cdf(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  std::vector<cdf_point> out;
  const auto n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
    out.push_back({samples[i], static_cast<double>(i + 1) / n});
  }
  return out;
}

quartile_result quartile_contrast(std::span<const std::pair<std::string, double>> scores,
                                  const std::map<std::string, std::vector<double>>& citations_by_reviewer) {
  if (scores.size() < 4) throw std::invalid_argument("quartile_contrast needs at least 4 reviewers");
  std::vector<std::pair<std::string, double>> ranked(scores.begin(), scores.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  const std::size_t q = ranked.size() / 4;
  const double top_cut = ranked[q - 1].second;
  const double bottom_cut = ranked[ranked.size() - q].second;

  quartile_result res;
  std::vector<double> top, bottom;
  auto pool = [&](const std::string& id, std::vector<double>& into) {
    if (auto it = citations_by_reviewer.find(id); it != citations_by_reviewer.end())
      into.insert(into.end(), it->second.begin(), it->second.end());
  };
  for (const auto& [id, s] : ranked) {
    if (s >= top_cut) {
      res.top_reviewers.push_back(id);
      pool(id, top);
    }
    if (s <= bottom_cut) {
      res.bottom_reviewers.push_back(id);
      pool(id, bottom);
    }
  }
  res.top_cdf = empirical_cdf(std::move(top));
  res.bottom_cdf = empirical_cdf(std::move(bottom));
  return res;
}

dataset_summary summary_table(const corpus& c) {
  dataset_summary s;
  s.papers = c.papers().size();
  double rev_acc = 0, rev_rej = 0, cit_acc = 0, cit_rej = 0;
  std::size_t n_cit_acc = 0, n_cit_rej = 0;
  double authorships = 0;
  for (const auto& p : c.papers()) {
    authorships += static_cast<double>(p.author_ids.size());
    if (!p.decision) continue;
    switch (p.decision->outcome) {
      case outcome::accept:
        ++s.accepted;
        rev_acc += p.review_rounds();
        if (p.citations) {
          cit_acc += static_cast<double>(p.citations->cumulative_citations);
          ++n_cit_acc;
        }
        break;
      case outcome::reject:
        ++s.rejected;
        rev_rej += p.review_rounds();
        if (p.citations) {
          cit_rej += static_cast<double>(p.citations->cumulative_citations);
          ++n_cit_rej;
        }
        break;
      case outcome::withdraw:
        ++s.withdrawn;
        break;
    }
  }
  if (s.accepted) s.mean_reviews_accepted = rev_acc / static_cast<double>(s.accepted);
  if (s.rejected) s.mean_reviews_rejected = rev_rej / static_cast<double>(s.rejected);
  if (n_cit_acc) s.mean_citations_accepted = cit_acc / static_cast<double>(n_cit_acc);
  if (n_cit_rej) s.mean_citations_rejected = cit_rej / static_cast<double>(n_cit_rej);

  const auto authors = c.author_ids();
  s.authors = authors.size();
  double submissions = 0;
  for (const auto& a : authors) {
    const auto papers = c.papers_of_author(a);
    submissions += static_cast<double>(papers.size());
    if (std::any_of(papers.begin(), papers.end(), [&](std::size_t i) { return c.papers()[i].accepted(); }))
      ++s.authors_with_accept;
  }
  if (s.authors) s.mean_submissions_per_author = submissions / static_cast<double>(s.authors);
  if (s.papers) s.mean_authors_per_paper = authorships / static_cast<double>(s.papers);
  return s;
}

namespace {

std::optional<double> mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

std::optional<double> first_round_length(const paper_record& p) {
  std::vector<double> lengths;
  for (const auto& r : p.reports)
    if (r.round == 1) lengths.push_back(static_cast<double>(tokenize(r.text).size()));
  return mean_of(lengths);
}

std::optional<double> author_acceptance_at_submission(const corpus& c, const paper_record& p) {
  std::vector<double> ratios;
  for (const auto& a : p.author_ids)
    if (auto r = make_author_profile(c, a, p.submitted).acceptance_ratio()) ratios.push_back(*r);
  return mean_of(ratios);
}

std::optional<double> reviewer_accept_at_submission(const corpus& c, const paper_record& p) {
  std::vector<double> ratios;
  for (const auto& r : p.reviewer_ids())
    if (auto a = make_reviewer_profile(c, r, p.submitted).accept_ratio()) ratios.push_back(*a);
  return mean_of(ratios);
}

irregular_case annotate(const corpus& c, const paper_record& p) {
  return {p.id,
          p.decision->outcome,
          p.decision->on.year(),
          p.citations->cumulative_citations,
          author_acceptance_at_submission(c, p),
          reviewer_accept_at_submission(c, p),
          first_round_length(p)};
}

}  // namespace

irregular_result irregular_cases(const corpus& c, int exposure_cutoff_year, irregular_thresholds t) {
  irregular_result res;
  for (const auto& p : c.papers()) {
    if (!p.decision || !p.citations || p.decision->on.year() >= exposure_cutoff_year) continue;
    const auto cites = p.citations->cumulative_citations;
    if (p.rejected() && cites >= t.high_cited_rejected) res.high_cited_rejected.push_back(annotate(c, p));
    if (p.accepted() && cites < t.low_cited_accepted) res.low_cited_accepted.push_back(annotate(c, p));
  }
  return res;
}

namespace {

std::string opt(std::optional<double> v) { return v ? fmt::format("{:.17g}", *v) : std::string(); }

class bundle_writer {
 public:
  explicit bundle_writer(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add(std::string name, std::string file, std::vector<std::string> columns, const std::string& body) {
    std::string text;
    for (std::size_t i = 0; i < columns.size(); ++i) text += (i ? "," : "") + columns[i];
    text += '\n';
    text += body;
    write_file_atomic(dir_ / file, text);
    outputs_.push_back({std::move(name), std::move(file), std::move(columns)});
  }

  std::vector<analysis_output> finish() {
    std::string text = "analysis,file,columns\n";
    for (const auto& o : outputs_) {
      std::string cols;
      for (std::size_t i = 0; i < o.columns.size(); ++i) cols += (i ? ";" : "") + o.columns[i];
      text += fmt::format("{},{},{}\n", o.name, o.file, cols);
    }
    write_file_atomic(dir_ / "manifest.csv", text);
    return outputs_;
  }

 private:
  std::filesystem::path dir_;
  std::vector<analysis_output> outputs_;
};

struct paper_view {
  const paper_record* paper;
  double citations;
  std::optional<double> sentiment;  // mean first-round referee sentiment
  std::optional<double> length;
  std::map<std::string, double, std::less<>> categories;  // mean first-round category pct
};

std::string group_rows(const std::vector<group_stat>& groups) {
  std::ostringstream out;
  for (const auto& g : groups) fmt::print(out, "{},{},{},{:.17g}\n", g.bucket, g.label, g.count, g.mean);
  return out.str();
}

}  // namespace

std::vector<analysis_output> write_analysis_bundle(const corpus& c, const lexicon& lex,
                                                   const std::filesystem::path& dir,
                                                   const analysis_options& opts) {
  std::filesystem::create_directories(dir);
  bundle_writer bundle(dir);

  std::vector<paper_view> views;
  for (const auto& p : c.papers()) {
    if (!p.decision || !p.citations || p.decision->outcome == outcome::withdraw) continue;
    paper_view v{&p, static_cast<double>(p.citations->cumulative_citations), {}, {}, {}};
    std::vector<double> sents, lens;
    std::map<std::string, double, std::less<>> cat_sum;
    for (const auto& r : p.reports) {
      if (r.round != 1) continue;
      const auto s = score_text(r.text, lex);
      sents.push_back(s.sentiment);
      lens.push_back(static_cast<double>(s.token_count));
      for (const auto& [k, pct] : s.category_pct) cat_sum[k] += pct;
    }
    v.sentiment = mean_of(sents);
    v.length = mean_of(lens);
    for (auto& [k, sum] : cat_sum) v.categories[k] = sum / static_cast<double>(sents.size());
    views.push_back(std::move(v));
  }

  {  // dataset summary
    const auto s = summary_table(c);
    std::ostringstream out;
    fmt::print(out, "papers,{}\naccepted,{}\nrejected,{}\nwithdrawn,{}\n", s.papers, s.accepted, s.rejected, s.withdrawn);
    fmt::print(out, "mean_reviews_accepted,{:.17g}\nmean_reviews_rejected,{:.17g}\n", s.mean_reviews_accepted,
               s.mean_reviews_rejected);
    fmt::print(out, "mean_citations_accepted,{:.17g}\nmean_citations_rejected,{:.17g}\n",
               s.mean_citations_accepted, s.mean_citations_rejected);
    fmt::print(out, "authors,{}\nauthors_with_accept,{}\n", s.authors, s.authors_with_accept);
    fmt::print(out, "mean_submissions_per_author,{:.17g}\nmean_authors_per_paper,{:.17g}\n",
               s.mean_submissions_per_author, s.mean_authors_per_paper);
    bundle.add("summary", "summary.csv", {"metric", "value"}, out.str());
  }

  {  // accepted/rejected share and mean review rounds per citation bucket
    std::map<int, std::array<double, 4>> acc;  // accepted n, rejected n, accepted rounds, rejected rounds
    double n_acc = 0, n_rej = 0;
    for (const auto& v : views) {
      auto& a = acc[bucket_powers_of_two(v.paper->citations->cumulative_citations)];
      if (v.paper->accepted()) {
        a[0] += 1;
        a[2] += v.paper->review_rounds();
        n_acc += 1;
      } else {
        a[1] += 1;
        a[3] += v.paper->review_rounds();
        n_rej += 1;
      }
    }
    std::ostringstream out;
    const auto spec = bucket_spec::powers_of_two();
    for (const auto& [k, a] : acc)
      fmt::print(out, "{},{},{},{},{},{},{},{}\n", k, spec.label(k), a[0], a[1], opt(n_acc ? std::optional(a[0] / n_acc) : std::nullopt),
                 opt(n_rej ? std::optional(a[1] / n_rej) : std::nullopt),
                 opt(a[0] ? std::optional(a[2] / a[0]) : std::nullopt),
                 opt(a[1] ? std::optional(a[3] / a[1]) : std::nullopt));
    bundle.add("citation_buckets", "citation_buckets.csv",
               {"bucket", "label", "accepted", "rejected", "accepted_fraction", "rejected_fraction",
                "accepted_mean_reviews", "rejected_mean_reviews"},
               out.str());
  }

  {  // mean citations of the top 20 percentile accepted papers per number of review rounds
    std::map<int, std::vector<double>> by_rounds;
    for (const auto& v : views)
      if (v.paper->accepted()) by_rounds[v.paper->review_rounds()].push_back(v.citations);
    std::ostringstream out;
    for (auto& [rounds, cites] : by_rounds) {
      std::sort(cites.begin(), cites.end(), std::greater<>());
      const auto q = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(cites.size()))));
      const double cut = cites[q - 1];
      double sum = 0;
      std::size_t n = 0;
      for (double x : cites)
        if (x >= cut) {  // ties at the percentile boundary are included
          sum += x;
          ++n;
        }
      fmt::print(out, "{},{},{},{:.17g}\n", rounds, cites.size(), n, sum / static_cast<double>(n));
    }
    bundle.add("top20_by_rounds", "top20_by_rounds.csv", {"rounds", "papers", "top_count", "top_mean_citations"},
               out.str());
  }

  {  // team size
    std::vector<double> cites, sizes;
    for (const auto& v : views) {
      cites.push_back(v.citations);
      sizes.push_back(static_cast<double>(v.paper->author_ids.size()));
    }
    bundle.add("team_size", "team_size.csv", {"bucket", "label", "count", "mean_citations"},
               group_rows(bucket_mean(cites, sizes, bucket_spec::fixed(1))));
  }

  {  // report length
    std::vector<double> cites, lens;
    for (const auto& v : views)
      if (v.paper->accepted() && v.length) {
        cites.push_back(v.citations);
        lens.push_back(*v.length);
      }
    bundle.add("report_length", "report_length.csv", {"bucket", "label", "count", "mean_citations"},
               group_rows(bucket_mean(cites, lens, bucket_spec::fixed(100))));
  }

  {  // sentiment scatter per decision year and polarity groups
    std::ostringstream scatter, groups;
    std::map<std::pair<std::string, std::string>, std::pair<std::size_t, double>> acc;
    for (const auto& v : views) {
      if (!v.sentiment) continue;
      const auto out_name = to_string(v.paper->decision->outcome);
      fmt::print(scatter, "{},{},{},{:.17g},{}\n", v.paper->decision->on.year(), v.paper->id, out_name,
                 *v.sentiment, v.paper->citations->cumulative_citations);
      const std::string polarity = *v.sentiment > 0 ? "positive" : (*v.sentiment < 0 ? "negative" : "neutral");
      auto& a = acc[{std::string(out_name), polarity}];
      ++a.first;
      a.second += v.citations;
    }
    for (const auto& [key, a] : acc)
      fmt::print(groups, "{},{},{},{:.17g}\n", key.first, key.second, a.first, a.second / static_cast<double>(a.first));
    bundle.add("sentiment_scatter", "sentiment_scatter.csv", {"year", "paper_id", "outcome", "sentiment", "citations"},
               scatter.str());
    bundle.add("sentiment_groups", "sentiment_groups.csv", {"outcome", "polarity", "count", "mean_citations"},
               groups.str());
  }

  {  // word categories of highly vs lowly cited papers
    std::vector<const paper_view*> pool;
    for (const auto& v : views)
      if (v.sentiment && v.paper->decision->on.year() < opts.exposure_cutoff_year) pool.push_back(&v);
    std::sort(pool.begin(), pool.end(), [](const paper_view* a, const paper_view* b) {
      if (a->citations != b->citations) return a->citations > b->citations;
      return a->paper->id < b->paper->id;
    });
    const auto k = static_cast<std::size_t>(std::floor(opts.extreme_fraction * static_cast<double>(pool.size())));
    std::ostringstream out;
    if (k > 0) {
      for (const auto& [name, words] : lex.categories) {
        double hi = 0, lo = 0;
        for (std::size_t i = 0; i < k; ++i) {
          hi += pool[i]->categories.at(name);
          lo += pool[pool.size() - 1 - i]->categories.at(name);
        }
        fmt::print(out, "{},{:.17g},{:.17g},{},{}\n", name, hi / static_cast<double>(k), lo / static_cast<double>(k), k, k);
      }
    }
    bundle.add("lqi_contrast", "lqi_contrast.csv",
               {"category", "high_cited_mean_pct", "low_cited_mean_pct", "high_n", "low_n"}, out.str());
  }

  const auto* view_of = [&] {
    static thread_local std::map<const paper_record*, const paper_view*> m;
    m.clear();
    for (const auto& v : views) m[v.paper] = &v;
    return &m;
  }();

  {  // author acceptance ratio deciles (full history)
    std::ostringstream out;
    std::map<std::int64_t, std::array<double, 5>> acc;  // papers, cites, rounds, sentiment sum, sentiment n
    const auto spec = bucket_spec::deciles();
    for (const auto& a : c.author_ids()) {
      const auto ratio = make_author_profile(c, a, date::max()).acceptance_ratio();
      if (!ratio) continue;
      auto& s = acc[spec.index(*ratio)];
      for (auto i : c.papers_of_author(a)) {
        auto it = view_of->find(&c.papers()[i]);
        if (it == view_of->end()) continue;
        s[0] += 1;
        s[1] += it->second->citations;
        s[2] += it->first->review_rounds();
        if (it->second->sentiment) {
          s[3] += *it->second->sentiment;
          s[4] += 1;
        }
      }
    }
    for (const auto& [k, s] : acc) {
      if (s[0] == 0) continue;
      fmt::print(out, "{},{},{},{:.17g},{:.17g},{}\n", k, spec.label(k), s[0], s[1] / s[0], s[2] / s[0],
                 opt(s[4] ? std::optional(s[3] / s[4]) : std::nullopt));
    }
    bundle.add("author_acceptance", "author_acceptance.csv",
               {"bucket", "label", "papers", "mean_citations", "mean_reviews", "mean_sentiment"}, out.str());
  }

  {  // first-author mean gap between submissions, as of submission
    std::vector<double> cites, gaps;
    for (const auto& v : views) {
      const auto& p = *v.paper;
      if (auto g = make_author_profile(c, p.author_ids.front(), p.submitted).mean_inter_submission_gap) {
        cites.push_back(v.citations);
        gaps.push_back(*g);
      }
    }
    bundle.add("author_productivity", "author_productivity.csv", {"bucket", "label", "count", "mean_citations"},
               group_rows(bucket_mean(cites, gaps, bucket_spec::fixed(100))));
  }

  {  // reviewer accept ratio deciles (full history)
    std::ostringstream out;
    std::map<std::int64_t, std::array<double, 5>> acc;
    const auto spec = bucket_spec::deciles();
    for (const auto& r : c.reviewer_ids()) {
      const auto ratio = make_reviewer_profile(c, r, date::max()).accept_ratio();
      if (!ratio) continue;
      auto& s = acc[spec.index(*ratio)];
      for (auto i : c.papers_reported_by(r)) {
        auto it = view_of->find(&c.papers()[i]);
        if (it == view_of->end()) continue;
        s[0] += 1;
        s[1] += it->second->citations;
        s[2] += it->first->review_rounds();
        if (it->second->sentiment) {
          s[3] += *it->second->sentiment;
          s[4] += 1;
        }
      }
    }
    for (const auto& [k, s] : acc) {
      if (s[0] == 0) continue;
      fmt::print(out, "{},{},{},{:.17g},{:.17g},{}\n", k, spec.label(k), s[0], s[1] / s[0], s[2] / s[0],
                 opt(s[4] ? std::optional(s[3] / s[4]) : std::nullopt));
    }
    bundle.add("reviewer_accept", "reviewer_accept.csv",
               {"bucket", "label", "papers", "mean_citations", "mean_reviews", "mean_sentiment"}, out.str());
  }

  {  // reviewer idle time and report delay
    std::vector<double> c_idle, idle, c_delay, delay;
    for (const auto& v : views) {
      const auto& p = *v.paper;
      std::vector<double> gaps;
      for (const auto& r : p.reviewer_ids())
        if (auto last = make_reviewer_profile(c, r, p.submitted).last_assignment)
          gaps.push_back(static_cast<double>(p.submitted - *last));
      if (auto g = mean_of(gaps)) {
        c_idle.push_back(v.citations);
        idle.push_back(*g);
      }
      std::vector<double> ds;
      for (const auto& a : p.assignments) {
        if (a.round != 1) continue;
        for (const auto& r : p.reports)
          if (r.round == 1 && r.reviewer_id == a.reviewer_id) {
            ds.push_back(static_cast<double>(r.on - a.on));
            break;
          }
      }
      if (auto d = mean_of(ds)) {
        c_delay.push_back(v.citations);
        delay.push_back(*d);
      }
    }
    bundle.add("reviewer_idle", "reviewer_idle.csv", {"bucket", "label", "count", "mean_citations"},
               group_rows(bucket_mean(c_idle, idle, bucket_spec::fixed(100))));
    bundle.add("report_delay", "report_delay.csv", {"bucket", "label", "count", "mean_citations"},
               group_rows(bucket_mean(c_delay, delay, bucket_spec::fixed(25))));
  }

  {  // top/bottom quartile reviewers by network position, full-history graph
    const auto g = project(snapshot(c, date::max()));
    const auto t = compute_centralities(g);
    std::map<std::string, std::vector<double>> cites;
    for (const auto& v : views)
      if (v.paper->accepted())
        for (const auto& r : v.paper->reviewer_ids()) cites[r].push_back(v.citations);
    std::ostringstream out;
    if (g.size() >= 4) {
      const std::array<std::pair<const char*, Eigen::VectorXd>, 5> measures = {{
          {"degree", t.degree.cast<double>()},
          {"betweenness", t.betweenness},
          {"closeness", t.closeness},
          {"clustering", t.clustering},
          {"pagerank", t.pagerank},
      }};
      for (const auto& [name, values] : measures) {
        std::vector<std::pair<std::string, double>> scores;
        for (std::size_t i = 0; i < g.size(); ++i) scores.emplace_back(g.id(i), values[static_cast<Eigen::Index>(i)]);
        const auto q = quartile_contrast(scores, cites);
        for (const auto& pt : q.top_cdf) fmt::print(out, "{},top,{:.17g},{:.17g}\n", name, pt.value, pt.fraction);
        for (const auto& pt : q.bottom_cdf) fmt::print(out, "{},bottom,{:.17g},{:.17g}\n", name, pt.value, pt.fraction);
      }
    }
    bundle.add("network_quartiles", "network_quartiles.csv", {"measure", "group", "citations", "cdf"}, out.str());
  }

  {  // irregular cases and their CDF contrasts
    const auto irr = irregular_cases(c, opts.exposure_cutoff_year);
    auto rows = [](const std::vector<irregular_case>& cases) {
      std::ostringstream out;
      for (const auto& k : cases)
        fmt::print(out, "{},{},{},{},{},{},{}\n", k.paper_id, to_string(k.outcome), k.decision_year, k.citations,
                   opt(k.author_acceptance), opt(k.reviewer_accept), opt(k.report_length));
      return out.str();
    };
    const std::vector<std::string> cols = {"paper_id",          "outcome",         "decision_year", "citations",
                                           "author_acceptance", "reviewer_accept", "report_length"};
    bundle.add("irregular_high_cited_rejected", "irregular_high_cited_rejected.csv", cols,
               rows(irr.high_cited_rejected));
    bundle.add("irregular_low_cited_accepted", "irregular_low_cited_accepted.csv", cols, rows(irr.low_cited_accepted));

    std::vector<irregular_case> accepted, rejected;
    for (const auto& v : views) {
      if (v.paper->decision->on.year() >= opts.exposure_cutoff_year) continue;
      (v.paper->accepted() ? accepted : rejected).push_back(annotate(c, *v.paper));
    }
    std::ostringstream out;
    auto emit = [&](const char* contrast, const char* group, const std::vector<irregular_case>& cases,
                    std::optional<double> irregular_case::*field) {
      std::vector<double> xs;
      for (const auto& k : cases)
        if (k.*field) xs.push_back(*(k.*field));
      for (const auto& pt : empirical_cdf(std::move(xs)))
        fmt::print(out, "{},{},{:.17g},{:.17g}\n", contrast, group, pt.value, pt.fraction);
    };
    emit("author_acceptance", "accepted", accepted, &irregular_case::author_acceptance);
    emit("author_acceptance", "high_cited_rejected", irr.high_cited_rejected, &irregular_case::author_acceptance);
    emit("reviewer_accept", "accepted", accepted, &irregular_case::reviewer_accept);
    emit("reviewer_accept", "high_cited_rejected", irr.high_cited_rejected, &irregular_case::reviewer_accept);
    emit("reviewer_accept_low", "rejected", rejected, &irregular_case::reviewer_accept);
    emit("reviewer_accept_low", "low_cited_accepted", irr.low_cited_accepted, &irregular_case::reviewer_accept);
    emit("author_acceptance_low", "rejected", rejected, &irregular_case::author_acceptance);
    emit("author_acceptance_low", "low_cited_accepted", irr.low_cited_accepted, &irregular_case::author_acceptance);
    emit("report_length", "rejected", rejected, &irregular_case::report_length);
    emit("report_length", "low_cited_accepted", irr.low_cited_accepted, &irregular_case::report_length);
    bundle.add("irregular_cdfs", "irregular_cdfs.csv", {"contrast", "group", "value", "cdf"}, out.str());
  }

  return bundle.finish();
}

}  // namespace revnet
