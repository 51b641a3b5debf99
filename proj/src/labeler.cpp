#include "causelex/labeler.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "causelex/util.hpp"

namespace causelex {

namespace {

bool contains_subsequence(const std::vector<std::string>& haystack, const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > haystack.size()) return false;
    for (size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        bool match = true;
        for (size_t j = 0; j < needle.size(); ++j) {
            if (haystack[i + j] != needle[j]) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

}  // namespace

LabelSet label_document(const Document& doc, const Lexicon& lexicon) {
    std::vector<std::string> tokens;
    for (const auto& s : doc.surfaces()) tokens.push_back(to_lower(s));
    LabelSet out;
    out.document_id = doc.id;
    for (const auto& [category, entries] : lexicon.entries()) {
        for (const auto& entry : entries) {
            if (contains_subsequence(tokens, split_ws(to_lower(entry.form)))) {
                out.labels.insert(category);
                break;
            }
        }
    }
    return out;
}

std::vector<LabelSet> label_corpus(const Corpus& corpus, const Lexicon& lexicon) {
    std::vector<LabelSet> out;
    out.reserve(corpus.size());
    for (const auto& doc : corpus) out.push_back(label_document(doc, lexicon));
    std::sort(out.begin(), out.end(),
              [](const LabelSet& a, const LabelSet& b) { return a.document_id < b.document_id; });
    return out;
}

void save_predictions(const std::vector<LabelSet>& predictions, const std::string& path,
                      const std::string& header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write predictions: " + path);
    if (!header.empty()) out << header << "\n";
    for (const auto& p : predictions) {
        out << p.document_id << "\t";
        bool first = true;
        for (const auto& label : p.labels) {
            if (!first) out << ",";
            out << label;
            first = false;
        }
        out << "\n";
    }
}

std::map<std::string, std::set<std::string>> load_predictions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open predictions: " + path);
    std::map<std::string, std::set<std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected doc_id<TAB>labels");
        std::string id = line.substr(0, tab);
        std::set<std::string> labels;
        std::string rest = line.substr(tab + 1);
        if (!rest.empty())
            for (const auto& l : split_on(rest, ','))
                if (!l.empty()) labels.insert(l);
        if (!out.emplace(id, std::move(labels)).second)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": duplicate document id '" +
                                     id + "'");
    }
    return out;
}

}  // namespace causelex
