#ifndef CAUSELEX_PATTERNS_HPP
#define CAUSELEX_PATTERNS_HPP

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "causelex/corpus.hpp"

namespace causelex {

enum class Direction { LeftContext, RightContext };
enum class TargetKind { Word, Phrase };
enum class PatternOrigin { Ngram, SyntacticImport };

struct Pattern {
    Direction direction = Direction::LeftContext;
    std::string context;  // lowercased tokens joined by spaces
    TargetKind target_kind = TargetKind::Word;
    PatternOrigin origin = PatternOrigin::Ngram;

    auto operator<=>(const Pattern&) const = default;

    // "line of <x>" / "<x> was detected"; used for display and tie-breaking
    std::string repr() const;
};

struct Target {
    std::string form;  // lowercased tokens joined by spaces
    TargetKind kind = TargetKind::Word;

    auto operator<=>(const Target&) const = default;
};

struct Extraction {
    Target target;
    Pattern pattern;
};

struct CooccurrenceIndex {
    std::map<Target, long> target_token_freq;
    std::map<Pattern, long> pattern_token_freq;
    std::map<Pattern, std::map<Target, long>> pair_by_pattern;
    std::map<Target, std::map<Pattern, long>> pair_by_target;

    long pair_count(const Pattern& p, const Target& t) const;
    long distinct_targets(const Pattern& p) const;

    void add_target_occurrence(const Target& t);
    void add_extraction(const Target& t, const Pattern& p);
    void merge(const CooccurrenceIndex& other);

    bool operator==(const CooccurrenceIndex&) const = default;
};

struct IndexConfig {
    bool word_patterns = true;
    bool phrase_patterns = true;
    bool syntactic_patterns = false;
    int n = 2;
    std::string syntactic_file;  // required when syntactic_patterns is set
};

bool is_noun_tag(const std::string& pos);
bool is_adjective_tag(const std::string& pos);
bool is_article_or_possessive(const TaggedToken& tok);

// Maximal adjective*-noun+ runs become noun phrases; maximal adjective runs
// not followed by a noun become adjective phrases. Articles and possessives
// never enter a span.
std::vector<PhraseSpan> chunk_phrases(const Sentence& sentence);

std::vector<Extraction> extract_word_patterns(const Sentence& sentence, int n);
std::vector<Extraction> extract_phrase_patterns(const Sentence& sentence, int n);

CooccurrenceIndex build_index(const Corpus& corpus, const IndexConfig& config);

void save_index(const CooccurrenceIndex& index, const std::string& path, const std::string& header);
CooccurrenceIndex load_index(const std::string& path);

}  // namespace causelex

#endif
