#include <revnet/text_metrics.hpp>

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include <revnet/io.hpp>

namespace revnet {

namespace {

bool is_letter(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80; }

char lower(unsigned char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c); }

word_set read_words(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw io_error(fmt::format("cannot read lexicon file {}", file.string()));
  word_set words;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string w = line.substr(first, last - first + 1);
    for (auto& c : w) c = lower(static_cast<unsigned char>(c));
    words.insert(std::move(w));
  }
  return words;
}

}  // namespace

void lexicon::check() const {
  for (const auto& w : positive)
    if (negative.contains(w))
      throw std::invalid_argument(fmt::format("lexicon word '{}' is both positive and negative", w));
}

lexicon lexicon::load(const std::filesystem::path& dir) {
  lexicon lex;
  lex.positive = read_words(dir / "positive.txt");
  lex.negative = read_words(dir / "negative.txt");
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto name = entry.path().filename().string();
    if (name.size() > 8 && name.starts_with("cat_") && name.ends_with(".txt"))
      lex.categories.emplace(name.substr(4, name.size() - 8), read_words(entry.path()));
  }
  if (ec) throw io_error(fmt::format("cannot list lexicon directory {}", dir.string()));
  lex.check();
  return lex;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_letter(c)) {
      cur.push_back(lower(c));
    } else if (c == '\'' && !cur.empty() && i + 1 < text.size() &&
               is_letter(static_cast<unsigned char>(text[i + 1]))) {
      cur.push_back('\'');
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

text_score score_text(std::string_view text, const lexicon& lex) {
  text_score s;
  const auto tokens = tokenize(text);
  s.token_count = tokens.size();
  for (const auto& [name, words] : lex.categories) s.category_pct[name] = 0.0;
  if (tokens.empty()) return s;

  long long pos = 0, neg = 0;
  std::map<std::string_view, long long> hits;
  for (const auto& t : tokens) {
    if (lex.positive.contains(t)) ++pos;
    if (lex.negative.contains(t)) ++neg;
    for (const auto& [name, words] : lex.categories)
      if (words.contains(t)) ++hits[name];
  }
  const auto n = static_cast<double>(tokens.size());
  s.sentiment = static_cast<double>(pos - neg) / n;
  for (const auto& [name, k] : hits) s.category_pct[std::string(name)] = 100.0 * static_cast<double>(k) / n;
  return s;
}

double sentiment_score(std::string_view text, const lexicon& lex) { return score_text(text, lex).sentiment; }

std::map<std::string, double, std::less<>> category_percentages(std::string_view text, const lexicon& lex) {
  return score_text(text, lex).category_pct;
}

}  // namespace revnet
