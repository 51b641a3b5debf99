#ifndef CAUSELEX_BOOTSTRAP_HPP
#define CAUSELEX_BOOTSTRAP_HPP

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causelex/corpus.hpp"
#include "causelex/patterns.hpp"

namespace causelex {

struct LexiconEntry {
    std::string form;
    TargetKind kind = TargetKind::Word;
    int iteration_added = 0;  // 0 = seed
    double score = 0.0;
};

// Category lexicons stay disjoint: a form belongs to at most one category,
// and entries are never removed once added.
class Lexicon {
  public:
    Lexicon() = default;
    explicit Lexicon(const SeedLexicon& seeds);

    bool contains(const std::string& form) const { return owner_.count(form) > 0; }
    bool in_category(const std::string& form, const std::string& category) const;
    void add(const std::string& category, LexiconEntry entry);

    const std::map<std::string, std::vector<LexiconEntry>>& entries() const { return entries_; }
    std::vector<std::string> categories() const;
    size_t size() const { return owner_.size(); }

  private:
    std::map<std::string, std::vector<LexiconEntry>> entries_;
    std::map<std::string, std::string> owner_;
};

struct Thresholds {
    long min_word_freq = 1;
    long max_word_freq = std::numeric_limits<long>::max();
    long min_pattern_freq = 1;
    long max_pattern_distinct_targets = std::numeric_limits<long>::max();

    void validate() const;
};

// (F/N) * log2(F); F = distinct extracted targets already in the category
// lexicon, N = distinct extracted targets. F = 0 maps to -infinity so the
// pattern can never enter a pool.
double rlogf(const Pattern& pattern, const std::string& category, const CooccurrenceIndex& index,
             const Lexicon& lexicon);

double avglog(const Target& word, const std::string& category, const CooccurrenceIndex& index,
              const Lexicon& lexicon);

double diff_score(const Target& word, const std::string& category, const CooccurrenceIndex& index,
                  const Lexicon& lexicon, const std::vector<std::string>& all_categories);

// Pattern-marginalized probability that the word belongs to the category.
double semprob(const Target& word, const std::string& category, const CooccurrenceIndex& index,
               const Lexicon& lexicon);

// True when every target the pattern extracts is already a lexicon member.
bool pattern_depleted(const Pattern& pattern, const CooccurrenceIndex& index, const Lexicon& lexicon);

// Top (20 + iteration) non-depleted patterns with F >= 1 by rlogf; with
// thresholds set, patterns additionally need min_pattern_freq occurrences
// and at most max_pattern_distinct_targets distinct extractions.
std::vector<Pattern> select_pattern_pool(const std::string& category, int iteration,
                                         const CooccurrenceIndex& index, const Lexicon& lexicon,
                                         const std::optional<Thresholds>& thresholds = std::nullopt);

Lexicon bootstrap_original(const SeedLexicon& seeds, const CooccurrenceIndex& index, int iterations);

Lexicon bootstrap_modified(const SeedLexicon& seeds, const CooccurrenceIndex& index, int iterations,
                           const Thresholds& thresholds, int per_category_cap = 5);

void save_lexicon(const Lexicon& lexicon, const std::string& path, const std::string& header);
Lexicon load_lexicon(const std::string& path);

}  // namespace causelex

#endif
