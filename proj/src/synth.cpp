#include <revnet/synth.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <revnet/io.hpp>
#include <revnet/random.hpp>

namespace revnet {

std::optional<std::size_t> effect_index(std::string_view name) {
  for (std::size_t i = 0; i < effect_count; ++i)
    if (effect_names[i] == name) return i;
  return std::nullopt;
}

double& synth_config::effect(std::string_view name) {
  auto i = effect_index(name);
  if (!i) throw std::invalid_argument(fmt::format("unknown effect '{}'", name));
  return effects[*i];
}

double synth_config::effect(std::string_view name) const {
  return const_cast<synth_config*>(this)->effect(name);
}

std::size_t synth_config::paper_total() const {
  if (year_to < year_from || papers_per_year < 1) return 0;
  return static_cast<std::size_t>(year_to - year_from + 1) * static_cast<std::size_t>(papers_per_year);
}

void synth_config::check() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("synth config: " + m); };
  if (year_to < year_from) fail("years.to precedes years.from");
  if (year_from < 1900 || year_to > 2999) fail("years outside 1900..2999");
  if (papers_per_year < 1) fail("papers_per_year must be >= 1");
  if (n_editors < 1) fail("n_editors must be >= 1");
  if (n_reviewers < 1) fail("n_reviewers must be >= 1");
  if (n_authors < 0) fail("n_authors must be >= 0");
  if (max_editors_per_reviewer < 1) fail("max_editors_per_reviewer must be >= 1");
  for (auto [name, v] : {std::pair{"multi_reviewer_fraction", multi_reviewer_fraction},
                         std::pair{"accept_rate", accept_rate}, std::pair{"withdraw_rate", withdraw_rate}})
    if (!(v >= 0.0 && v <= 1.0)) fail(fmt::format("{} must lie in [0, 1]", name));
  if (!(mean_team_size >= 1.0)) fail("mean_team_size must be >= 1");
  for (std::size_t i = 0; i < effect_count; ++i)
    if (!std::isfinite(effects[i])) fail(fmt::format("effect {} is not finite", effect_names[i]));
  for (auto [name, v] : {std::pair{"noise_sd", noise_sd}, std::pair{"decision_noise", decision_noise},
                         std::pair{"author_activity_sd", author_activity_sd}})
    if (!(v >= 0.0) || !std::isfinite(v)) fail(fmt::format("{} must be finite and >= 0", name));
  if (!std::isfinite(leniency_weight) || !std::isfinite(citation_mu) || !std::isfinite(rejected_penalty))
    fail("non-finite decision or citation parameter");
  if (!(citation_sigma >= 0.0) || !std::isfinite(citation_sigma)) fail("citations.sigma must be >= 0");
  if (citation_year < year_to) fail("citations.as_of_year precedes the last submission year");
}

namespace {

using ptree = boost::property_tree::ptree;

struct field {
  const char* section;
  const char* key;
  std::function<void(synth_config&, const std::string&)> set;
  std::function<std::string(const synth_config&)> get;
};

template <typename T>
T parse_value(const std::string& s, const char* section, const char* key) {
  std::istringstream in(s);
  T v{};
  in >> v;
  if (in.fail() || !(in >> std::ws).eof())
    throw std::runtime_error(fmt::format("config {}.{}: cannot parse '{}'", section, key, s));
  return v;
}

template <typename T>
field make_field(const char* section, const char* key, T synth_config::*member) {
  return {section, key,
          [=](synth_config& c, const std::string& s) { c.*member = parse_value<T>(s, section, key); },
          [=](const synth_config& c) { return fmt::format("{}", c.*member); }};
}

const std::vector<field>& schema() {
  static const std::vector<field> fields = [] {
    std::vector<field> f = {
        make_field("generator", "seed", &synth_config::seed),
        make_field("years", "from", &synth_config::year_from),
        make_field("years", "to", &synth_config::year_to),
        make_field("corpus", "papers_per_year", &synth_config::papers_per_year),
        make_field("corpus", "n_editors", &synth_config::n_editors),
        make_field("corpus", "n_reviewers", &synth_config::n_reviewers),
        make_field("corpus", "n_authors", &synth_config::n_authors),
        make_field("corpus", "max_editors_per_reviewer", &synth_config::max_editors_per_reviewer),
        make_field("corpus", "multi_reviewer_fraction", &synth_config::multi_reviewer_fraction),
        make_field("corpus", "accept_rate", &synth_config::accept_rate),
        make_field("corpus", "withdraw_rate", &synth_config::withdraw_rate),
        make_field("corpus", "mean_team_size", &synth_config::mean_team_size),
        make_field("corpus", "author_activity_sd", &synth_config::author_activity_sd),
        make_field("noise", "noise_sd", &synth_config::noise_sd),
        make_field("noise", "decision_noise", &synth_config::decision_noise),
        make_field("noise", "leniency_weight", &synth_config::leniency_weight),
        make_field("citations", "mu", &synth_config::citation_mu),
        make_field("citations", "sigma", &synth_config::citation_sigma),
        make_field("citations", "rejected_penalty", &synth_config::rejected_penalty),
        make_field("citations", "as_of_year", &synth_config::citation_year),
    };
    for (std::size_t i = 0; i < effect_count; ++i) {
      const char* name = effect_names[i].data();
      f.push_back({"effects", name,
                   [=](synth_config& c, const std::string& s) {
                     c.effects[i] = parse_value<double>(s, "effects", name);
                   },
                   [=](const synth_config& c) { return fmt::format("{}", c.effects[i]); }});
    }
    return f;
  }();
  return fields;
}

}  // namespace

synth_config parse_synth_config(std::string_view text) {
  ptree tree;
  std::istringstream in{std::string(text)};
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw std::runtime_error(fmt::format("config line {}: {}", e.line(), e.message()));
  }
  synth_config cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw std::runtime_error(fmt::format("config: key '{}' outside a section", section));
    for (const auto& [key, value] : body) {
      auto it = std::find_if(schema().begin(), schema().end(),
                             [&](const field& f) { return section == f.section && key == f.key; });
      if (it == schema().end()) throw std::runtime_error(fmt::format("config: unknown key {}.{}", section, key));
      it->set(cfg, value.data());
    }
  }
  return cfg;
}

synth_config load_synth_config(const std::filesystem::path& path) { return parse_synth_config(read_file(path)); }

std::string synth_config_to_ini(const synth_config& cfg) {
  std::string out;
  std::string current;
  for (const auto& f : schema()) {
    if (current != f.section) {
      current = f.section;
      out += fmt::format("{}[{}]\n", out.empty() ? "" : "\n", current);
    }
    out += fmt::format("{} = {}\n", f.key, f.get(cfg));
  }
  return out;
}

namespace {

enum effect_slot : std::size_t { s_net, s_ts, s_ar, s_ap, s_rac, s_snt, s_rl, s_lqi, s_rr, s_dr };

// Midpoints of the high/low cited category means, in percent of words, and the
// direction in which each rate moves with the LQI signal.
struct category_rate {
  std::string_view name;
  double pct;
  double direction;
};
constexpr std::array<category_rate, 7> category_rates = {{{"future_tense", 1.11, 1.0},
                                                          {"negation", 0.78, -1.0},
                                                          {"insight", 3.34, 1.0},
                                                          {"causation", 2.49, 1.0},
                                                          {"inclusive", 3.57, 1.0},
                                                          {"exclusive", 1.40, -1.0},
                                                          {"positive_emotion", 2.77, 1.0}}};

constexpr std::array<std::string_view, 60> filler_words = {
    "the",       "paper",     "authors",   "section",   "figure",   "table",    "equation", "model",
    "analysis",  "results",   "data",      "method",    "approach", "theory",   "field",    "energy",
    "mass",      "scale",     "limit",     "term",      "order",    "loop",     "amplitude", "coupling",
    "symmetry",  "string",    "brane",     "gauge",     "boson",    "quark",    "lattice",  "operator",
    "a",         "of",        "in",        "to",        "is",       "on",       "for",      "this",
    "that",      "we",        "it",        "as",        "are",      "by",       "from",     "which",
    "manuscript","appendix",  "reference", "parameter", "value",    "space",    "function", "density",
    "vacuum",    "spectrum",  "correction","expansion"};

struct sampler {
  std::vector<double> cumulative;
  std::size_t pick(rng& r) const {
    const double x = r.uniform() * cumulative.back();
    return static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), x) - cumulative.begin());
  }
};

struct text_source {
  std::vector<std::string> positive, negative, filler;
  std::vector<std::pair<const category_rate*, std::vector<std::string>>> categories;

  explicit text_source(const lexicon& lex) {
    positive.assign(lex.positive.begin(), lex.positive.end());
    negative.assign(lex.negative.begin(), lex.negative.end());
    for (const auto& c : category_rates)
      if (auto it = lex.categories.find(c.name); it != lex.categories.end() && !it->second.empty())
        categories.emplace_back(&c, std::vector<std::string>(it->second.begin(), it->second.end()));
    auto known = [&](std::string_view w) {
      if (lex.positive.contains(w) || lex.negative.contains(w)) return true;
      for (const auto& [name, words] : lex.categories)
        if (words.contains(w)) return true;
      return false;
    };
    for (auto w : filler_words)
      if (!known(w)) filler.emplace_back(w);
    if (filler.empty()) throw std::invalid_argument("lexicon covers every filler word");
  }

  std::string report(rng& r, int words, double snt, double lqi) const {
    const double p_pos = positive.empty() ? 0.0 : 0.03 * std::exp(0.7 * snt);
    const double p_neg = negative.empty() ? 0.0 : 0.03 * std::exp(-0.7 * snt);
    std::vector<double> rates;
    for (const auto& [c, list] : categories) rates.push_back(c->pct / 100.0 * std::exp(0.3 * c->direction * lqi));

    std::string out;
    int sentence = 0;
    const int sentence_len = 8 + static_cast<int>(r.below(10));
    for (int i = 0; i < words; ++i) {
      double u = r.uniform();
      const std::vector<std::string>* list = &filler;
      if (u < p_pos) {
        list = &positive;
      } else if ((u -= p_pos) < p_neg) {
        list = &negative;
      } else {
        u -= p_neg;
        for (std::size_t k = 0; k < rates.size(); ++k) {
          if (u < rates[k]) {
            list = &categories[k].second;
            break;
          }
          u -= rates[k];
        }
      }
      if (!out.empty()) out += ' ';
      out += (*list)[r.below(list->size())];
      if (++sentence == sentence_len) {
        out += '.';
        sentence = 0;
      }
    }
    if (sentence) out += '.';
    return out;
  }
};

// Replaces values by normal scores: mid-rank percentiles (ties averaged) through
// the standard normal quantile. Constant input maps to 0.
void normal_scores(std::vector<double>& xs) {
  static const boost::math::normal_distribution<double> standard;
  const auto n = xs.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> out(n);
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo;
    while (hi + 1 < n && xs[idx[hi + 1]] == xs[idx[lo]]) ++hi;
    const double p = ((static_cast<double>(lo) + static_cast<double>(hi)) / 2.0 + 0.5) / static_cast<double>(n);
    const double z = p == 0.5 ? 0.0 : boost::math::quantile(standard, p);
    for (std::size_t k = lo; k <= hi; ++k) out[idx[k]] = z;
    lo = hi + 1;
  }
  xs = std::move(out);
}

struct draft {
  date submitted;
  std::vector<int> authors;
  int editor = 0;
  std::vector<int> reviewers;
};

struct simulation {
  std::vector<review_event> events;
  ground_truth_result truth;
};

simulation simulate(const synth_config& cfg, const lexicon& lex) {
  cfg.check();
  rng r(cfg.seed);
  const text_source text(lex);
  const auto total = cfg.paper_total();
  const int n_authors = cfg.n_authors > 0
                            ? cfg.n_authors
                            : std::max(1, static_cast<int>(std::lround(static_cast<double>(total) *
                                                                       cfg.mean_team_size / 5.18)));

  auto pad = [](char prefix, int i, int count) {
    const auto width = std::max<std::size_t>(2, fmt::format("{}", count).size());
    return fmt::format("{}{:0{}}", prefix, i + 1, width);
  };
  std::vector<std::string> editor_ids, reviewer_ids, author_ids;
  for (int i = 0; i < cfg.n_editors; ++i) editor_ids.push_back(pad('E', i, cfg.n_editors));
  for (int i = 0; i < cfg.n_reviewers; ++i) reviewer_ids.push_back(pad('R', i, cfg.n_reviewers));
  for (int i = 0; i < n_authors; ++i) author_ids.push_back(pad('A', i, n_authors));

  // hub planting: each reviewer joins 1..max editor pools
  std::vector<std::vector<int>> pools(static_cast<std::size_t>(cfg.n_editors));
  std::vector<int> hub(static_cast<std::size_t>(cfg.n_reviewers), 0);
  const int max_pools = std::min(cfg.max_editors_per_reviewer, cfg.n_editors);
  std::vector<int> editors(static_cast<std::size_t>(cfg.n_editors));
  std::iota(editors.begin(), editors.end(), 0);
  for (int j = 0; j < cfg.n_reviewers; ++j) {
    const int m = 1 + static_cast<int>(r.below(static_cast<std::uint64_t>(max_pools)));
    r.shuffle(editors);
    for (int k = 0; k < m; ++k) pools[static_cast<std::size_t>(editors[static_cast<std::size_t>(k)])].push_back(j);
    hub[static_cast<std::size_t>(j)] = m;
  }
  for (auto& pool : pools) {
    if (!pool.empty()) continue;
    const int j = static_cast<int>(r.below(static_cast<std::uint64_t>(cfg.n_reviewers)));
    pool.push_back(j);
    ++hub[static_cast<std::size_t>(j)];
  }
  for (auto& pool : pools) std::sort(pool.begin(), pool.end());

  // network position the pipeline has to recover: degree in the pool graph
  std::vector<int> pool_degree(static_cast<std::size_t>(cfg.n_reviewers), 0);
  {
    std::vector<std::vector<char>> linked(pool_degree.size(), std::vector<char>(pool_degree.size(), 0));
    for (const auto& pool : pools)
      for (int a : pool)
        for (int b : pool) linked[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = a != b;
    for (std::size_t a = 0; a < linked.size(); ++a)
      pool_degree[a] = static_cast<int>(std::count(linked[a].begin(), linked[a].end(), 1));
  }

  std::vector<double> leniency(static_cast<std::size_t>(cfg.n_reviewers));
  for (auto& l : leniency) l = r.normal();
  std::vector<double> reputation(static_cast<std::size_t>(n_authors)), activity(reputation.size());
  sampler author_pick;
  double acc = 0.0;
  for (std::size_t a = 0; a < reputation.size(); ++a) {
    reputation[a] = r.normal();
    activity[a] = cfg.author_activity_sd * r.normal();
    acc += std::exp(activity[a]);
    author_pick.cumulative.push_back(acc);
  }

  // structure of every paper
  std::vector<draft> drafts;
  drafts.reserve(total);
  for (int y = cfg.year_from; y <= cfg.year_to; ++y) {
    const date jan1 = date::from_ymd(y, 1, 1);
    const int days = date::from_ymd(y + 1, 1, 1) - jan1;
    for (int i = 0; i < cfg.papers_per_year; ++i) {
      draft d;
      d.submitted = jan1 + static_cast<int>(r.below(static_cast<std::uint64_t>(days)));
      const int team = std::min(n_authors, 1 + r.poisson(cfg.mean_team_size - 1.0));
      while (static_cast<int>(d.authors.size()) < team) {
        const int a = static_cast<int>(author_pick.pick(r));
        if (std::find(d.authors.begin(), d.authors.end(), a) == d.authors.end()) d.authors.push_back(a);
      }
      d.editor = static_cast<int>(r.below(static_cast<std::uint64_t>(cfg.n_editors)));
      const auto& pool = pools[static_cast<std::size_t>(d.editor)];
      d.reviewers.push_back(pool[r.below(pool.size())]);
      if (pool.size() >= 2 && r.bernoulli(cfg.multi_reviewer_fraction)) {
        int second;
        do second = pool[r.below(pool.size())];
        while (second == d.reviewers.front());
        d.reviewers.push_back(second);
      }
      drafts.push_back(std::move(d));
    }
  }
  std::stable_sort(drafts.begin(), drafts.end(),
                   [](const draft& a, const draft& b) { return a.submitted < b.submitted; });

  // planted signals as normal scores over papers
  const auto n = drafts.size();
  std::array<std::vector<double>, effect_count> sig;
  for (auto& s : sig) s.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = drafts[i];
    double h = 0.0, len = 0.0, rep = 0.0;
    for (int j : d.reviewers) {
      h += pool_degree[static_cast<std::size_t>(j)];
      len += leniency[static_cast<std::size_t>(j)];
    }
    for (int a : d.authors) rep += reputation[static_cast<std::size_t>(a)];
    sig[s_net][i] = h / static_cast<double>(d.reviewers.size());
    sig[s_rac][i] = len / static_cast<double>(d.reviewers.size());
    sig[s_ts][i] = static_cast<double>(d.authors.size());
    sig[s_ar][i] = rep / static_cast<double>(d.authors.size());
    sig[s_ap][i] = activity[static_cast<std::size_t>(d.authors.front())];
    for (auto k : {s_snt, s_rl, s_lqi, s_rr, s_dr}) sig[k][i] = r.normal();
  }
  for (auto& s : sig) normal_scores(s);

  std::vector<double> quality(n), score(n);
  std::vector<outcome> decision(n, outcome::reject);
  std::vector<std::size_t> decided;
  for (std::size_t i = 0; i < n; ++i) {
    double q = 0.0;
    for (std::size_t k = 0; k < effect_count; ++k) q += cfg.effects[k] * sig[k][i];
    quality[i] = q + cfg.noise_sd * r.normal();
    score[i] = quality[i] + cfg.leniency_weight * sig[s_rac][i] + cfg.decision_noise * r.normal();
    if (r.bernoulli(cfg.withdraw_rate)) decision[i] = outcome::withdraw;
    else decided.push_back(i);
  }
  std::stable_sort(decided.begin(), decided.end(), [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
  const auto n_reject = static_cast<std::size_t>(std::lround((1.0 - cfg.accept_rate) * static_cast<double>(decided.size())));
  for (std::size_t k = n_reject; k < decided.size(); ++k) decision[decided[k]] = outcome::accept;

  simulation sim;
  auto& truth = sim.truth;
  for (int j = 0; j < cfg.n_reviewers; ++j) {
    truth.reviewer_hub_level[reviewer_ids[static_cast<std::size_t>(j)]] = hub[static_cast<std::size_t>(j)];
    truth.reviewer_leniency[reviewer_ids[static_cast<std::size_t>(j)]] = leniency[static_cast<std::size_t>(j)];
    truth.reviewer_pool_degree[reviewer_ids[static_cast<std::size_t>(j)]] = pool_degree[static_cast<std::size_t>(j)];
  }
  for (int a = 0; a < n_authors; ++a)
    truth.author_reputation[author_ids[static_cast<std::size_t>(a)]] = reputation[static_cast<std::size_t>(a)];

  std::vector<review_event> events;
  const auto id_width = std::max<std::size_t>(2, fmt::format("{}", n).size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = drafts[i];
    const std::string id = fmt::format("P{:0{}}", i + 1, id_width);
    const auto out = decision[i];

    std::vector<std::string> authors;
    for (int a : d.authors) authors.push_back(author_ids[static_cast<std::size_t>(a)]);
    events.push_back({id, d.submitted, submission_info{authors, fmt::format("Synthetic paper {}", i + 1)}});

    const double base = out == outcome::accept ? 0.67 : out == outcome::reject ? 0.31 : 0.5;
    const int rounds = std::min(6, 1 + r.poisson(base * std::exp(-0.5 * sig[s_rr][i])));

    date t = d.submitted;
    for (int round = 1; round <= rounds; ++round) {
      const date assigned = t + 1 + static_cast<int>(r.below(round == 1 ? 14 : 10));
      date last = assigned;
      for (int j : d.reviewers)
        events.push_back({id, assigned,
                          assignment_info{editor_ids[static_cast<std::size_t>(d.editor)],
                                          reviewer_ids[static_cast<std::size_t>(j)], round}});
      for (int j : d.reviewers) {
        const double mean_delay = 60.0 - 15.0 * sig[s_dr][i];
        const int delay = std::clamp(static_cast<int>(std::lround(mean_delay + 5.0 * r.normal())), 5, 200);
        const int words =
            std::clamp(static_cast<int>(std::lround(350.0 + 90.0 * sig[s_rl][i] + 30.0 * r.normal())), 40, 1500);
        auto rec = recommendation::revise;
        if (round == rounds && out != outcome::withdraw)
          rec = out == outcome::accept ? recommendation::accept : recommendation::reject;
        const date reported = assigned + delay;
        events.push_back({id, reported,
                          report_info{reviewer_ids[static_cast<std::size_t>(j)], round,
                                      text.report(r, words, sig[s_snt][i], sig[s_lqi][i]), rec}});
        last = std::max(last, reported);
      }
      t = last;
    }
    const date decided_on = t + 1 + static_cast<int>(r.below(10));
    events.push_back({id, decided_on, decision_info{out, rounds}});

    planted_paper pp;
    pp.paper_id = id;
    pp.quality = quality[i];
    for (std::size_t k = 0; k < effect_count; ++k) pp.signals[k] = sig[k][i];
    pp.decision = out;
    for (int j : d.reviewers) pp.reviewer_ids.push_back(reviewer_ids[static_cast<std::size_t>(j)]);

    if (out != outcome::withdraw) {
      const int exposure = std::max(1, cfg.citation_year - decided_on.year() + 1);
      const double mu = cfg.citation_mu - (out == outcome::reject ? cfg.rejected_penalty : 0.0);
      const auto cites = static_cast<std::int64_t>(
          std::llround(static_cast<double>(exposure) * std::exp(mu + cfg.citation_sigma * quality[i])));
      const date as_of = std::max(decided_on + 1, date::from_ymd(cfg.citation_year, 12, 31));
      events.push_back({id, as_of, citation_info{cites, cfg.citation_year}});
      pp.citations = cites;
    }
    truth.papers.push_back(std::move(pp));
  }

  // global date order; equal dates keep causal order
  std::stable_sort(events.begin(), events.end(),
                   [](const review_event& a, const review_event& b) { return a.on < b.on; });
  sim.events = std::move(events);
  return sim;
}

}  // namespace

std::vector<review_event> generate(const synth_config& cfg, const lexicon& lex) {
  return simulate(cfg, lex).events;
}

ground_truth_result ground_truth(const synth_config& cfg, const lexicon& lex, std::span<const review_event> log) {
  auto sim = simulate(cfg, lex);
  if (sim.events.size() != log.size() || !std::equal(log.begin(), log.end(), sim.events.begin()))
    throw std::invalid_argument("event log was not generated by this config");
  return std::move(sim.truth);
}

}  // namespace revnet
