#ifndef CAUSELEX_CORPUS_HPP
#define CAUSELEX_CORPUS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace causelex {

struct TaggedToken {
    std::string surface;
    std::string pos;  // Penn Treebank tag
};

enum class PhraseKind { NounPhrase, AdjectivePhrase };

struct PhraseSpan {
    int start = 0;  // inclusive token index
    int end = 0;    // exclusive
    PhraseKind kind = PhraseKind::NounPhrase;
};

struct Sentence {
    std::vector<TaggedToken> tokens;
    std::vector<PhraseSpan> phrases;
};

struct Document {
    std::string id;
    std::string raw_text;
    std::vector<Sentence> sentences;
    std::optional<std::set<std::string>> labels;

    std::vector<std::string> surfaces() const;  // flat token stream, sentence order
};

using Corpus = std::vector<Document>;

struct SeedLexicon {
    // category -> phrases, insertion order preserved per category
    std::map<std::string, std::vector<std::string>> entries;
};

// --- preprocessing ---

// Tokens equal (case-sensitively) to a map key are replaced by the
// expansion, which may be multi-token; everything else passes through.
std::vector<std::string> expand_abbreviations(const std::vector<std::string>& tokens,
                                              const std::map<std::string, std::string>& abbrev_map);

// Tokens whose lowercased form is in the dictionary come out lowercase.
// "I" is kept as-is; unknown tokens stay untouched.
std::vector<std::string> restore_case(const std::vector<std::string>& tokens,
                                      const std::set<std::string>& dictionary);

// Splits after terminal punctuation (. ! ? ;), punctuation kept with its
// sentence. Never emits an empty sentence.
std::vector<std::vector<std::string>> split_sentences(const std::vector<std::string>& tokens);

// Whitespace split plus peeling of leading/trailing punctuation marks into
// their own tokens. Word-internal punctuation ("10/28", "DIDN't") is kept.
std::vector<std::string> tokenize(const std::string& text);

// Closed-class fallback tagger for corpora without supplied POS tags.
std::string naive_pos_tag(const std::string& surface);

// --- file formats ---

std::map<std::string, std::string> load_abbrev_map(const std::string& path);
std::set<std::string> load_dictionary(const std::string& path);

Corpus load_corpus(const std::string& path);
void save_corpus(const Corpus& corpus, const std::string& path, const std::string& header);

SeedLexicon load_seed_lexicon(const std::string& path);

}  // namespace causelex

#endif
