#ifndef CAUSELEX_LABELER_HPP
#define CAUSELEX_LABELER_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "causelex/bootstrap.hpp"
#include "causelex/corpus.hpp"

namespace causelex {

struct LabelSet {
    std::string document_id;
    std::set<std::string> labels;
};

// Occurrence heuristic: a document gets every category one of whose lexicon
// entries occurs as a contiguous, case-insensitive token subsequence.
LabelSet label_document(const Document& doc, const Lexicon& lexicon);

// Output ordered by document id.
std::vector<LabelSet> label_corpus(const Corpus& corpus, const Lexicon& lexicon);

void save_predictions(const std::vector<LabelSet>& predictions, const std::string& path,
                      const std::string& header);
std::map<std::string, std::set<std::string>> load_predictions(const std::string& path);

}  // namespace causelex

#endif
