#pragma once

#include <string>
#include <utility>
#include <vector>

#include <revnet/corpus.hpp>
#include <revnet/synth.hpp>
#include <revnet/text_metrics.hpp>

namespace support {

using namespace revnet;

inline date day(int n) { return date::from_ymd(2010, 1, 1) + n; }
inline date ymd(int y, unsigned m, unsigned d) { return date::from_ymd(y, m, d); }

inline review_event submit(std::string paper, date on, std::vector<std::string> authors) {
  return {std::move(paper), on, submission_info{std::move(authors), "t"}};
}
inline review_event assign(std::string paper, date on, std::string editor, std::string reviewer, int round = 1) {
  return {std::move(paper), on, assignment_info{std::move(editor), std::move(reviewer), round}};
}
inline review_event report(std::string paper, date on, std::string reviewer, int round = 1,
                           std::string text = "fine", recommendation rec = recommendation::revise) {
  return {std::move(paper), on, report_info{std::move(reviewer), round, std::move(text), rec}};
}
inline review_event decide(std::string paper, date on, outcome o, int round = 1) {
  return {std::move(paper), on, decision_info{o, round}};
}
inline review_event cite(std::string paper, date on, std::int64_t c, int year = 2015) {
  return {std::move(paper), on, citation_info{c, year}};
}

inline const lexicon& bundled_lexicon() {
  static const lexicon lex = lexicon::load(REVNET_TEST_LEXICON_DIR);
  return lex;
}

inline synth_config small_config(std::uint64_t seed, int papers_per_year = 60) {
  synth_config cfg;
  cfg.seed = seed;
  cfg.year_from = 2008;
  cfg.year_to = 2012;
  cfg.papers_per_year = papers_per_year;
  cfg.n_reviewers = 30;
  cfg.n_editors = 6;
  return cfg;
}

}  // namespace support
