#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace revnet {

/// The seven word-category dimensions tracked for referee reports.
inline constexpr std::array<std::string_view, 7> lqi_categories = {
    "future_tense", "negation", "insight", "causation", "inclusive", "exclusive", "positive_emotion"};

using word_set = std::set<std::string, std::less<>>;

struct lexicon {
  word_set positive;
  word_set negative;
  std::map<std::string, word_set, std::less<>> categories;

  /// Loads `positive.txt`, `negative.txt` and every `cat_<name>.txt` from `dir`.
  /// Entries are lowercased; blank lines and `#` comments are skipped. Throws
  /// io_error if a required file is missing and std::invalid_argument if a word
  /// is both positive and negative.
  static lexicon load(const std::filesystem::path& dir);

  /// Throws std::invalid_argument when the positive and negative sets overlap.
  void check() const;
};

struct text_score {
  std::size_t token_count = 0;
  double sentiment = 0.0;                             // in [-1, 1]
  std::map<std::string, double, std::less<>> category_pct;  // 0..100
};

/// Lowercase alphabetic tokens. Apostrophes are kept only between letters.
std::vector<std::string> tokenize(std::string_view text);

/// (positive hits - negative hits) / token count; 0 for empty text.
double sentiment_score(std::string_view text, const lexicon& lex);

/// 100 * hits / token count for each category of the lexicon.
std::map<std::string, double, std::less<>> category_percentages(std::string_view text, const lexicon& lex);

text_score score_text(std::string_view text, const lexicon& lex);

}  // namespace revnet
