#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <revnet/text_metrics.hpp>

#include "support.hpp"

using namespace revnet;
using support::bundled_lexicon;

namespace {

lexicon tiny() {
  lexicon lex;
  lex.positive = {"good", "fine"};
  lex.negative = {"bad"};
  for (auto c : lqi_categories) lex.categories[std::string(c)] = {};
  lex.categories["future_tense"] = {"will"};
  lex.categories["negation"] = {"not"};
  return lex;
}

}  // namespace

TEST_SUITE("text") {

TEST_CASE("tokenize") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("Good, results.") == std::vector<std::string>{"good", "results"});
  CHECK(tokenize("It will work") == std::vector<std::string>{"it", "will", "work"});
  CHECK(tokenize("don't 'quote' x2y") == std::vector<std::string>{"don't", "quote", "x", "y"});
}

TEST_CASE("sentiment") {
  const auto lex = tiny();
  CHECK(sentiment_score("", lex) == 0.0);
  CHECK(sentiment_score("the method is described", lex) == 0.0);
  CHECK(sentiment_score("good good bad", lex) == doctest::Approx(1.0 / 3.0));
  CHECK(sentiment_score("bad, bad.", lex) == -1.0);
}

TEST_CASE("category percentages") {
  const auto lex = tiny();
  const auto pct = category_percentages("we will show", lex);
  CHECK(pct.at("future_tense") == doctest::Approx(100.0 / 3.0));
  CHECK(pct.at("negation") == 0.0);
  for (const auto& [name, v] : category_percentages("", lex)) CHECK(v == 0.0);
  CHECK(score_text("", lex).token_count == 0);
}

TEST_CASE("scores are invariant to repeating the text") {
  const auto& lex = bundled_lexicon();
  const std::string texts[] = {"The results are good but the discussion is unclear and will not convince.",
                               "We think the authors should include more detail, because the effect is weak.",
                               "Excellent and nice work; I enjoy reading it."};
  for (const auto& t : texts) {
    const auto a = score_text(t, lex);
    const auto b = score_text(t + " " + t, lex);
    CHECK(a.sentiment == doctest::Approx(b.sentiment).epsilon(1e-15));
    for (const auto& [name, v] : a.category_pct) CHECK(v == doctest::Approx(b.category_pct.at(name)));
  }
}

TEST_CASE("swapping polarity negates sentiment exactly") {
  auto lex = bundled_lexicon();
  const std::string t = "good excellent work but the argument is wrong and the plots are poor and weak";
  const double s = sentiment_score(t, lex);
  std::swap(lex.positive, lex.negative);
  CHECK(sentiment_score(t, lex) == -s);
  CHECK(s != 0.0);
}

TEST_CASE("bundled lexicon loads every category") {
  const auto& lex = bundled_lexicon();
  CHECK(lex.positive.size() > 10);
  CHECK(lex.negative.size() > 10);
  for (auto c : lqi_categories) CHECK(lex.categories.count(std::string(c)) == 1);
  CHECK_NOTHROW(lex.check());
}

TEST_CASE("lexicon files are validated") {
  const auto dir = std::filesystem::temp_directory_path() / "revnet_lexicon_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "positive.txt") << "# c\nGood\n\nfine\n";
  std::ofstream(dir / "negative.txt") << "bad\n";
  const auto lex = lexicon::load(dir);
  CHECK(lex.positive == word_set{"fine", "good"});

  std::ofstream(dir / "negative.txt") << "bad\ngood\n";
  CHECK_THROWS(lexicon::load(dir));
  std::filesystem::remove(dir / "negative.txt");
  CHECK_THROWS(lexicon::load(dir));
  std::filesystem::remove_all(dir);

  auto bad = tiny();
  bad.negative.insert("good");
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);
}

}
