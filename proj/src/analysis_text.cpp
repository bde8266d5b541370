#include "teachsim/analysis/text.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace teachsim::text {

namespace {

const std::set<std::string>& lexicon_words() {
  static const std::set<std::string> words = [] {
    std::set<std::string> all;
    for (const auto& [name, entries] : CategoryLexicon::defaults().categories)
      all.insert(entries.begin(), entries.end());
    return all;
  }();
  return words;
}

std::string singularize(std::string token) {
  if (token.size() > 2 && token.ends_with("es")) {
    std::string base = token.substr(0, token.size() - 2);
    if (lexicon_words().contains(base)) return base;
  }
  if (token.size() > 1 && token.ends_with('s')) {
    std::string base = token.substr(0, token.size() - 1);
    if (lexicon_words().contains(base)) return base;
  }
  return token;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view raw) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : raw) {
    const auto uc = static_cast<unsigned char>(ch);
    if (std::isalnum(uc)) {
      current.push_back(static_cast<char>(std::tolower(uc)));
    } else if (!current.empty()) {
      tokens.push_back(singularize(std::move(current)));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(singularize(std::move(current)));
  return tokens;
}

const std::set<std::string>& stopwords() {
  static const std::set<std::string> words = {
      "a",    "an",   "the",  "and",  "or",    "but",  "if",    "then", "than",
      "of",   "to",   "in",   "on",   "at",    "by",   "with",  "from", "as",
      "for",  "it",   "its",  "this", "that",  "these", "those", "there",
      "here", "i",    "you",  "he",   "she",   "we",   "they",  "me",   "him",
      "her",  "us",   "them", "my",   "your",  "our",  "their", "do",   "does",
      "did",  "have", "has",  "had",  "will",  "would", "can",  "could",
      "should", "may", "might", "must", "very", "really", "just", "also", "too",
      "so",   "not",  "no",   "yes"};
  return words;
}

namespace {

void accumulate_ngrams(const std::vector<std::string>& tokens, int n, bool remove_stopwords,
                       std::map<std::vector<std::string>, int>& counts) {
  const std::vector<std::string>* source = &tokens;
  std::vector<std::string> filtered;
  if (remove_stopwords) {
    for (const auto& t : tokens)
      if (!stopwords().contains(t)) filtered.push_back(t);
    source = &filtered;
  }
  if (static_cast<int>(source->size()) < n) return;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= source->size(); ++i)
    ++counts[std::vector<std::string>(source->begin() + static_cast<std::ptrdiff_t>(i),
                                      source->begin() + static_cast<std::ptrdiff_t>(i) + n)];
}

std::vector<NgramCount> sorted_counts(std::map<std::vector<std::string>, int>&& counts) {
  std::vector<NgramCount> out;
  out.reserve(counts.size());
  for (auto& [gram, count] : counts) out.push_back({gram, count});
  std::stable_sort(out.begin(), out.end(), [](const NgramCount& a, const NgramCount& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.gram < b.gram;
  });
  return out;
}

}  // namespace

std::vector<NgramCount> ngram_counts(const std::vector<std::string>& tokens, int n,
                                     bool remove_stopwords) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  std::map<std::vector<std::string>, int> counts;
  accumulate_ngrams(tokens, n, remove_stopwords, counts);
  return sorted_counts(std::move(counts));
}

std::vector<NgramCount> ngram_counts(const std::vector<std::vector<std::string>>& documents,
                                     int n, bool remove_stopwords) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  std::map<std::vector<std::string>, int> counts;
  for (const auto& document : documents)
    accumulate_ngrams(document, n, remove_stopwords, counts);
  return sorted_counts(std::move(counts));
}

CategoryLexicon CategoryLexicon::defaults() {
  CategoryLexicon lex;
  lex.categories["Shapes"] = {"circle", "triangle", "square"};
  lex.categories["Colors"] = {"pink", "white", "cyan", "yellow", "turquoise"};
  lex.categories["Numbers"] = {"zero", "one",  "two", "three", "four", "five", "six",
                               "seven", "eight", "nine", "ten",  "0",   "1",   "2",
                               "3",     "4",    "5",   "6",     "7",   "8",   "9",
                               "10"};
  lex.categories["Relational"] = {"top",    "bottom", "left",  "right",  "upper", "lower",
                                  "corner", "first",  "second", "third", "fourth", "fifth",
                                  "last",   "next",   "middle", "near",  "far",   "side"};
  lex.validate();
  return lex;
}

void CategoryLexicon::validate() const {
  std::set<std::string> seen;
  for (const auto& [name, words] : categories) {
    for (const auto& w : words) {
      if (!seen.insert(w).second)
        throw std::invalid_argument("lexicon categories overlap on '" + w + "'");
    }
  }
}

std::map<std::string, double> category_proportions(const std::vector<std::string>& tokens,
                                                   const CategoryLexicon& lexicon) {
  std::map<std::string, double> out;
  for (const auto& [name, words] : lexicon.categories) out[name] = 0.0;
  if (tokens.empty()) return out;
  for (const auto& token : tokens)
    for (const auto& [name, words] : lexicon.categories)
      if (words.contains(token)) out[name] += 1.0;
  for (auto& [name, count] : out) count /= static_cast<double>(tokens.size());
  return out;
}

}  // namespace teachsim::text
