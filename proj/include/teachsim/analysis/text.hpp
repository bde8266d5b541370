#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace teachsim::text {

// Lowercases, splits on any non-alphanumeric character, and reduces simple
// plurals of lexicon words ("circles" -> "circle").
std::vector<std::string> tokenize(std::string_view raw);

// Embedded stopword list (v1): articles, conjunctions, prepositions,
// pronouns, and do/have auxiliaries. Be-verbs are deliberately kept as
// tokens.
const std::set<std::string>& stopwords();

struct NgramCount {
  std::vector<std::string> gram;
  int count = 0;
};

// Counts consecutive n-grams, ordered by count descending then
// lexicographically. With remove_stopwords the sequence is filtered before
// counting, so grams can bridge removed words.
std::vector<NgramCount> ngram_counts(const std::vector<std::string>& tokens, int n,
                                     bool remove_stopwords = false);

// Same, over separate documents; grams never bridge document boundaries.
std::vector<NgramCount> ngram_counts(const std::vector<std::vector<std::string>>& documents,
                                     int n, bool remove_stopwords = false);

// Disjoint word categories: Shapes, Colors, Numbers, Relational.
struct CategoryLexicon {
  std::map<std::string, std::set<std::string>> categories;

  static CategoryLexicon defaults();
  void validate() const;  // categories must be disjoint
};

// Fraction of all tokens (no stopword removal) falling in each category.
std::map<std::string, double> category_proportions(const std::vector<std::string>& tokens,
                                                   const CategoryLexicon& lexicon);

}  // namespace teachsim::text
