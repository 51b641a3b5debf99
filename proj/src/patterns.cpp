#include "causelex/patterns.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "causelex/util.hpp"

namespace causelex {

std::string Pattern::repr() const {
    std::string out = direction == Direction::LeftContext ? context + " <x>" : "<x> " + context;
    if (origin == PatternOrigin::SyntacticImport) out = "syn:" + context;
    if (target_kind == TargetKind::Phrase) out += " [phrase]";
    return out;
}

long CooccurrenceIndex::pair_count(const Pattern& p, const Target& t) const {
    auto it = pair_by_pattern.find(p);
    if (it == pair_by_pattern.end()) return 0;
    auto jt = it->second.find(t);
    return jt == it->second.end() ? 0 : jt->second;
}

long CooccurrenceIndex::distinct_targets(const Pattern& p) const {
    auto it = pair_by_pattern.find(p);
    return it == pair_by_pattern.end() ? 0 : static_cast<long>(it->second.size());
}

void CooccurrenceIndex::add_target_occurrence(const Target& t) { ++target_token_freq[t]; }

void CooccurrenceIndex::add_extraction(const Target& t, const Pattern& p) {
    ++pattern_token_freq[p];
    ++pair_by_pattern[p][t];
    ++pair_by_target[t][p];
}

void CooccurrenceIndex::merge(const CooccurrenceIndex& other) {
    for (const auto& [t, c] : other.target_token_freq) target_token_freq[t] += c;
    for (const auto& [p, c] : other.pattern_token_freq) pattern_token_freq[p] += c;
    for (const auto& [p, m] : other.pair_by_pattern)
        for (const auto& [t, c] : m) pair_by_pattern[p][t] += c;
    for (const auto& [t, m] : other.pair_by_target)
        for (const auto& [p, c] : m) pair_by_target[t][p] += c;
}

bool is_noun_tag(const std::string& pos) { return pos.rfind("NN", 0) == 0; }
bool is_adjective_tag(const std::string& pos) { return pos.rfind("JJ", 0) == 0; }

bool is_article_or_possessive(const TaggedToken& tok) {
    static const std::set<std::string> articles = {"a", "an", "the"};
    static const std::set<std::string> possessives = {"my", "your", "his", "her", "its", "our", "their"};
    if (tok.pos == "PRP$" || tok.pos == "WP$") return true;
    std::string lower = to_lower(tok.surface);
    return articles.count(lower) > 0 || possessives.count(lower) > 0;
}

std::vector<PhraseSpan> chunk_phrases(const Sentence& sentence) {
    const auto& toks = sentence.tokens;
    const int n = static_cast<int>(toks.size());
    auto adj = [&](int i) { return is_adjective_tag(toks[i].pos) && !is_article_or_possessive(toks[i]); };
    auto noun = [&](int i) { return is_noun_tag(toks[i].pos) && !is_article_or_possessive(toks[i]); };
    std::vector<PhraseSpan> spans;
    int i = 0;
    while (i < n) {
        if (adj(i)) {
            int j = i;
            while (j < n && adj(j)) ++j;
            if (j < n && noun(j)) {
                int k = j;
                while (k < n && noun(k)) ++k;
                spans.push_back({i, k, PhraseKind::NounPhrase});
                i = k;
            } else {
                spans.push_back({i, j, PhraseKind::AdjectivePhrase});
                i = j;
            }
        } else if (noun(i)) {
            int k = i;
            while (k < n && noun(k)) ++k;
            spans.push_back({i, k, PhraseKind::NounPhrase});
            i = k;
        } else {
            ++i;
        }
    }
    return spans;
}

namespace {

std::string lowered_context(const std::vector<TaggedToken>& toks, int begin, int end) {
    std::vector<std::string> ctx;
    for (int i = begin; i < end; ++i) ctx.push_back(to_lower(toks[i].surface));
    return join(ctx);
}

}  // namespace

std::vector<Extraction> extract_word_patterns(const Sentence& sentence, int n) {
    if (n < 1) throw std::invalid_argument("context width must be >= 1");
    const auto& toks = sentence.tokens;
    const int len = static_cast<int>(toks.size());
    std::vector<Extraction> out;
    for (int i = 0; i < len; ++i) {
        if (!(is_noun_tag(toks[i].pos) || is_adjective_tag(toks[i].pos))) continue;
        Target target{to_lower(toks[i].surface), TargetKind::Word};
        if (i >= n)
            out.push_back({target, {Direction::LeftContext, lowered_context(toks, i - n, i),
                                    TargetKind::Word, PatternOrigin::Ngram}});
        if (len - i - 1 >= n)
            out.push_back({target, {Direction::RightContext, lowered_context(toks, i + 1, i + 1 + n),
                                    TargetKind::Word, PatternOrigin::Ngram}});
    }
    return out;
}

std::vector<Extraction> extract_phrase_patterns(const Sentence& sentence, int n) {
    if (n < 1) throw std::invalid_argument("context width must be >= 1");
    const auto& toks = sentence.tokens;
    const int len = static_cast<int>(toks.size());
    std::vector<Extraction> out;
    for (const auto& span : sentence.phrases) {
        int start = span.start;
        while (start < span.end && is_article_or_possessive(toks[start])) ++start;
        if (start >= span.end) continue;  // span was all articles/possessives
        Target target{lowered_context(toks, start, span.end), TargetKind::Phrase};
        // the phrase's own leading article sits outside the span; skip past
        // any such tokens before taking the left context
        int before = start;
        while (before > 0 && is_article_or_possessive(toks[before - 1])) --before;
        if (before >= n)
            out.push_back({target, {Direction::LeftContext, lowered_context(toks, before - n, before),
                                    TargetKind::Phrase, PatternOrigin::Ngram}});
        if (len - span.end >= n)
            out.push_back({target, {Direction::RightContext, lowered_context(toks, span.end, span.end + n),
                                    TargetKind::Phrase, PatternOrigin::Ngram}});
    }
    return out;
}

namespace {

Target phrase_target(const Sentence& sentence, const PhraseSpan& span) {
    int start = span.start;
    while (start < span.end && is_article_or_possessive(sentence.tokens[start])) ++start;
    std::vector<std::string> form;
    for (int i = start; i < span.end; ++i) form.push_back(to_lower(sentence.tokens[i].surface));
    return {join(form), TargetKind::Phrase};
}

void import_syntactic(CooccurrenceIndex& index, const Corpus& corpus, const std::string& path) {
    std::set<std::string> ids;
    for (const auto& doc : corpus) ids.insert(doc.id);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open syntactic pattern file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_on(line, '\t');
        if (fields.size() != 4)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected doc_id<TAB>pattern<TAB>target<TAB>kind");
        if (!ids.count(fields[0]))
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown document '" +
                                     fields[0] + "'");
        TargetKind kind;
        if (fields[3] == "word")
            kind = TargetKind::Word;
        else if (fields[3] == "phrase")
            kind = TargetKind::Phrase;
        else
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown target kind '" +
                                     fields[3] + "'");
        Target target{to_lower(join(split_ws(fields[2]))), kind};
        Pattern pattern{Direction::LeftContext, fields[1], kind, PatternOrigin::SyntacticImport};
        index.add_extraction(target, pattern);
    }
}

}  // namespace

CooccurrenceIndex build_index(const Corpus& corpus, const IndexConfig& config) {
    CooccurrenceIndex index;
    const bool count_words = config.word_patterns || config.syntactic_patterns;
    const bool count_phrases = config.phrase_patterns || config.syntactic_patterns;
    for (const auto& doc : corpus) {
        for (const auto& sentence : doc.sentences) {
            Sentence working = sentence;
            if (working.phrases.empty()) working.phrases = chunk_phrases(working);
            if (count_words) {
                for (const auto& tok : working.tokens)
                    if (is_noun_tag(tok.pos) || is_adjective_tag(tok.pos))
                        index.add_target_occurrence({to_lower(tok.surface), TargetKind::Word});
            }
            if (count_phrases) {
                for (const auto& span : working.phrases) {
                    Target t = phrase_target(working, span);
                    if (!t.form.empty()) index.add_target_occurrence(t);
                }
            }
            if (config.word_patterns)
                for (const auto& e : extract_word_patterns(working, config.n))
                    index.add_extraction(e.target, e.pattern);
            if (config.phrase_patterns)
                for (const auto& e : extract_phrase_patterns(working, config.n))
                    index.add_extraction(e.target, e.pattern);
        }
    }
    if (config.syntactic_patterns) import_syntactic(index, corpus, config.syntactic_file);
    return index;
}

namespace {

const char* kIndexMagic = "!causelex-index v1";

std::string kind_str(TargetKind k) { return k == TargetKind::Word ? "word" : "phrase"; }
std::string dir_str(Direction d) { return d == Direction::LeftContext ? "L" : "R"; }
std::string origin_str(PatternOrigin o) { return o == PatternOrigin::Ngram ? "ngram" : "syn"; }

TargetKind parse_kind(const std::string& s) {
    if (s == "word") return TargetKind::Word;
    if (s == "phrase") return TargetKind::Phrase;
    throw std::runtime_error("bad target kind in index: " + s);
}

}  // namespace

void save_index(const CooccurrenceIndex& index, const std::string& path, const std::string& header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write index: " + path);
    if (!header.empty()) out << header << "\n";
    out << kIndexMagic << "\n";
    std::map<Target, size_t> tid;
    std::map<Pattern, size_t> pid;
    for (const auto& [t, c] : index.target_token_freq) {
        tid.emplace(t, tid.size());
        out << "T\t" << kind_str(t.kind) << "\t" << c << "\t" << t.form << "\n";
    }
    // targets appearing only in extractions (freq 0) still need ids
    for (const auto& [t, m] : index.pair_by_target)
        if (tid.emplace(t, tid.size()).second)
            out << "T\t" << kind_str(t.kind) << "\t0\t" << t.form << "\n";
    for (const auto& [p, c] : index.pattern_token_freq) {
        pid.emplace(p, pid.size());
        out << "P\t" << dir_str(p.direction) << "\t" << kind_str(p.target_kind) << "\t"
            << origin_str(p.origin) << "\t" << c << "\t" << p.context << "\n";
    }
    for (const auto& [p, m] : index.pair_by_pattern)
        for (const auto& [t, c] : m) out << "E\t" << pid.at(p) << "\t" << tid.at(t) << "\t" << c << "\n";
}

CooccurrenceIndex load_index(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open index: " + path);
    std::string line;
    bool magic_seen = false;
    CooccurrenceIndex index;
    std::vector<Target> targets;
    std::vector<Pattern> patterns;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!magic_seen) {
            if (line != kIndexMagic)
                throw std::runtime_error(path + ": unrecognized index format header '" + line + "'");
            magic_seen = true;
            continue;
        }
        auto fields = split_on(line, '\t');
        const std::string where = path + ":" + std::to_string(lineno);
        if (fields[0] == "T" && fields.size() == 4) {
            Target t{fields[3], parse_kind(fields[1])};
            long c = std::stol(fields[2]);
            if (c > 0) index.target_token_freq[t] = c;
            targets.push_back(t);
        } else if (fields[0] == "P" && fields.size() == 6) {
            Pattern p{fields[1] == "L" ? Direction::LeftContext : Direction::RightContext, fields[5],
                      parse_kind(fields[2]),
                      fields[3] == "ngram" ? PatternOrigin::Ngram : PatternOrigin::SyntacticImport};
            index.pattern_token_freq[p] = std::stol(fields[4]);
            patterns.push_back(p);
        } else if (fields[0] == "E" && fields.size() == 4) {
            size_t pi = std::stoul(fields[1]), ti = std::stoul(fields[2]);
            if (pi >= patterns.size() || ti >= targets.size())
                throw std::runtime_error(where + ": extraction references unknown entry");
            long c = std::stol(fields[3]);
            index.pair_by_pattern[patterns[pi]][targets[ti]] = c;
            index.pair_by_target[targets[ti]][patterns[pi]] = c;
        } else {
            throw std::runtime_error(where + ": malformed index line");
        }
    }
    if (!magic_seen) throw std::runtime_error(path + ": missing index format header");
    return index;
}

}  // namespace causelex
