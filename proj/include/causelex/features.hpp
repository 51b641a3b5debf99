#ifndef CAUSELEX_FEATURES_HPP
#define CAUSELEX_FEATURES_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "causelex/bootstrap.hpp"
#include "causelex/corpus.hpp"

namespace causelex {

enum class FeatureKind { Unigram, Bigram, LexiconEntry };

std::string feature_kind_name(FeatureKind kind);

struct Feature {
    std::string name;  // lowercased token, "tok1 tok2" bigram, or verbatim lexicon form
    FeatureKind kind = FeatureKind::Unigram;
    long df = 0;
};

// Sparse document representation: feature index -> tf*idf weight.
using FeatureVector = std::map<size_t, double>;

class FeatureSpace {
  public:
    size_t size() const { return features_.size(); }
    const std::vector<Feature>& features() const { return features_; }
    const std::set<std::string>& stopwords() const { return stopwords_; }
    long corpus_size() const { return corpus_size_; }

    std::optional<size_t> find(const std::string& name, FeatureKind kind) const;

  private:
    std::vector<Feature> features_;
    std::map<std::pair<int, std::string>, size_t> index_;
    std::set<std::string> stopwords_;
    long corpus_size_ = 0;

    friend FeatureSpace build_feature_space(const Corpus&, const std::set<std::string>&, bool, bool,
                                            bool, const Lexicon*);
    friend FeatureSpace select_features(const FeatureSpace&, const Corpus&, const std::vector<int>&,
                                        int);
    friend FeatureSpace read_feature_space(std::istream&);
};

struct IncludeFlags {
    bool unigrams = true;
    bool bigrams = true;
    bool lexicon = false;
};

// Lowercased, stop-word-filtered unigrams and adjacent-survivor bigrams from
// the training corpus; lexicon entries, when enabled, become features verbatim.
FeatureSpace build_feature_space(const Corpus& train, const std::set<std::string>& stopwords,
                                 bool unigrams, bool bigrams, bool lexicon_features,
                                 const Lexicon* lexicon = nullptr);

// tf * ln(corpus_size / df). Lexicon-entry tf counts contiguous
// case-insensitive token-sequence matches; out-of-space features are dropped.
FeatureVector vectorize(const Document& doc, const FeatureSpace& space);

// H(label) - H(label | presence); presence/labels are parallel over the
// training documents. Labels may be binary or multiclass.
double information_gain(const std::vector<bool>& presence, const std::vector<int>& labels);

// Keeps the top percent% of unigram+bigram features ranked jointly by
// information gain against `labels` (ties broken lexicographically); count
// rounded up; lexicon-entry features always survive.
FeatureSpace select_features(const FeatureSpace& space, const Corpus& train,
                             const std::vector<int>& labels, int percent);

std::set<std::string> load_stopwords(const std::string& path);

// TSV dump feature<TAB>kind<TAB>df<TAB>ig; ig entries default to 0 when no
// gain map is supplied.
void save_feature_space(const FeatureSpace& space, const std::map<size_t, double>& gains,
                        const std::string& path, const std::string& header);

// Exact-round-trip stream form, embedded in saved models.
void write_feature_space(std::ostream& out, const FeatureSpace& space);
FeatureSpace read_feature_space(std::istream& in);

}  // namespace causelex

#endif
