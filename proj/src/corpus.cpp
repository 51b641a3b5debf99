#include "causelex/corpus.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "causelex/util.hpp"

namespace causelex {

using nlohmann::json;

std::vector<std::string> Document::surfaces() const {
    std::vector<std::string> out;
    for (const auto& s : sentences)
        for (const auto& t : s.tokens) out.push_back(t.surface);
    return out;
}

std::vector<std::string> expand_abbreviations(const std::vector<std::string>& tokens,
                                              const std::map<std::string, std::string>& abbrev_map) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& tok : tokens) {
        auto it = abbrev_map.find(tok);
        if (it == abbrev_map.end()) {
            out.push_back(tok);
        } else {
            for (auto& piece : split_ws(it->second)) out.push_back(std::move(piece));
        }
    }
    return out;
}

std::vector<std::string> restore_case(const std::vector<std::string>& tokens,
                                      const std::set<std::string>& dictionary) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& tok : tokens) {
        if (tok == "I") {
            out.push_back(tok);
            continue;
        }
        std::string lower = to_lower(tok);
        out.push_back(dictionary.count(lower) ? lower : tok);
    }
    return out;
}

std::vector<std::vector<std::string>> split_sentences(const std::vector<std::string>& tokens) {
    std::vector<std::vector<std::string>> out;
    std::vector<std::string> cur;
    for (const auto& tok : tokens) {
        cur.push_back(tok);
        if (tok == "." || tok == "!" || tok == "?" || tok == ";") {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

namespace {

bool is_peelable(char c) {
    static const std::string marks = ".,;:!?()[]\"";
    return marks.find(c) != std::string::npos;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    for (const auto& raw : split_ws(text)) {
        size_t b = 0, e = raw.size();
        std::vector<std::string> lead, trail;
        while (b < e && is_peelable(raw[b])) lead.push_back(std::string(1, raw[b++]));
        while (e > b && is_peelable(raw[e - 1])) trail.push_back(std::string(1, raw[--e]));
        for (auto& t : lead) out.push_back(std::move(t));
        if (e > b) out.push_back(raw.substr(b, e - b));
        for (auto it = trail.rbegin(); it != trail.rend(); ++it) out.push_back(std::move(*it));
    }
    return out;
}

std::string naive_pos_tag(const std::string& surface) {
    static const std::set<std::string> articles = {"a", "an", "the"};
    static const std::set<std::string> possessives = {"my", "your", "his", "her", "its", "our", "their"};
    static const std::set<std::string> preps = {"of",   "in",  "on",  "at",   "to",   "from", "with",
                                                "by",   "for", "as",  "into", "over", "under"};
    static const std::set<std::string> conj = {"and", "or", "but"};
    static const std::set<std::string> verbs = {"is", "was", "were", "are", "be", "been", "had", "has", "have"};
    std::string lower = to_lower(surface);
    if (surface.size() == 1 && is_peelable(surface[0])) return surface == "," ? "," : ".";
    bool digits = !surface.empty();
    for (char c : surface)
        if (!(c >= '0' && c <= '9') && c != '/' && c != '.') digits = false;
    if (digits) return "CD";
    if (articles.count(lower)) return "DT";
    if (possessives.count(lower)) return "PRP$";
    if (preps.count(lower)) return "IN";
    if (conj.count(lower)) return "CC";
    if (verbs.count(lower)) return "VBD";
    return "NN";
}

std::map<std::string, std::string> load_abbrev_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open abbreviation map: " + path);
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected ABBREV<TAB>expansion");
        std::string key = line.substr(0, tab), val = line.substr(tab + 1);
        if (key.empty() || val.empty())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty field");
        // ambiguous abbreviations: first listed expansion wins
        out.emplace(key, val);
    }
    return out;
}

std::set<std::string> load_dictionary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dictionary: " + path);
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        out.insert(line);
    }
    return out;
}

namespace {

PhraseKind phrase_kind_from_string(const std::string& s, const std::string& where) {
    if (s == "np" || s == "noun-phrase") return PhraseKind::NounPhrase;
    if (s == "adjp" || s == "adjective-phrase") return PhraseKind::AdjectivePhrase;
    throw std::runtime_error(where + ": unknown phrase kind '" + s + "'");
}

std::string phrase_kind_to_string(PhraseKind k) {
    return k == PhraseKind::NounPhrase ? "np" : "adjp";
}

}  // namespace

Corpus load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus: " + path);
    Corpus corpus;
    std::set<std::string> seen_ids;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const std::string where = path + ":" + std::to_string(lineno);
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error(where + ": malformed record: " + e.what());
        }
        if (!rec.contains("id") || !rec["id"].is_string())
            throw std::runtime_error(where + ": missing required string field 'id'");
        if (!rec.contains("text") || !rec["text"].is_string())
            throw std::runtime_error(where + ": missing required string field 'text'");
        Document doc;
        doc.id = rec["id"].get<std::string>();
        doc.raw_text = rec["text"].get<std::string>();
        if (doc.id.empty()) throw std::runtime_error(where + ": empty document id");
        if (!seen_ids.insert(doc.id).second)
            throw std::runtime_error(where + ": duplicate document id '" + doc.id + "'");
        if (rec.contains("tokens")) {
            for (const auto& sent : rec["tokens"]) {
                Sentence s;
                for (const auto& pair : sent) {
                    if (!pair.is_array() || pair.size() != 2)
                        throw std::runtime_error(where + ": token entries must be [surface, pos] pairs");
                    TaggedToken t{pair[0].get<std::string>(), pair[1].get<std::string>()};
                    if (t.surface.empty()) throw std::runtime_error(where + ": empty token surface");
                    s.tokens.push_back(std::move(t));
                }
                if (s.tokens.empty()) throw std::runtime_error(where + ": empty sentence");
                doc.sentences.push_back(std::move(s));
            }
        }
        if (rec.contains("phrases")) {
            for (const auto& ph : rec["phrases"]) {
                if (!ph.is_array() || ph.size() != 4)
                    throw std::runtime_error(where + ": phrase entries must be [sentence, start, end, kind]");
                int si = ph[0].get<int>();
                PhraseSpan span;
                span.start = ph[1].get<int>();
                span.end = ph[2].get<int>();
                span.kind = phrase_kind_from_string(ph[3].get<std::string>(), where);
                if (si < 0 || si >= static_cast<int>(doc.sentences.size()))
                    throw std::runtime_error(where + ": phrase sentence index out of range");
                auto& sent = doc.sentences[si];
                if (span.start < 0 || span.end > static_cast<int>(sent.tokens.size()) || span.start >= span.end)
                    throw std::runtime_error(where + ": phrase span out of bounds");
                for (const auto& other : sent.phrases)
                    if (span.start < other.end && other.start < span.end)
                        throw std::runtime_error(where + ": overlapping phrase spans");
                sent.phrases.push_back(span);
            }
        }
        if (rec.contains("labels")) {
            std::set<std::string> labels;
            for (const auto& l : rec["labels"]) labels.insert(l.get<std::string>());
            doc.labels = std::move(labels);
        }
        corpus.push_back(std::move(doc));
    }
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path, const std::string& header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write corpus: " + path);
    if (!header.empty()) out << header << "\n";
    for (const auto& doc : corpus) {
        json rec;
        rec["id"] = doc.id;
        rec["text"] = doc.raw_text;
        json sents = json::array();
        json phrases = json::array();
        for (size_t si = 0; si < doc.sentences.size(); ++si) {
            const auto& s = doc.sentences[si];
            json toks = json::array();
            for (const auto& t : s.tokens) toks.push_back(json::array({t.surface, t.pos}));
            sents.push_back(std::move(toks));
            for (const auto& ph : s.phrases)
                phrases.push_back(json::array(
                    {static_cast<int>(si), ph.start, ph.end, phrase_kind_to_string(ph.kind)}));
        }
        rec["tokens"] = std::move(sents);
        if (!phrases.empty()) rec["phrases"] = std::move(phrases);
        if (doc.labels) rec["labels"] = *doc.labels;
        out << rec.dump() << "\n";
    }
}

SeedLexicon load_seed_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open seed lexicon: " + path);
    SeedLexicon seeds;
    std::map<std::string, std::string> owner;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected category<TAB>phrase");
        std::string cat = line.substr(0, tab);
        std::string phrase = join(split_ws(line.substr(tab + 1)));
        if (cat.empty() || phrase.empty())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty field");
        auto [it, inserted] = owner.emplace(phrase, cat);
        if (!inserted && it->second != cat)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": phrase '" + phrase +
                                     "' assigned to both '" + it->second + "' and '" + cat + "'");
        if (inserted) seeds.entries[cat].push_back(phrase);
    }
    return seeds;
}

}  // namespace causelex
