#include "causelex/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "causelex/util.hpp"

namespace causelex {

std::string feature_kind_name(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::Unigram: return "unigram";
        case FeatureKind::Bigram: return "bigram";
        case FeatureKind::LexiconEntry: return "lexicon-entry";
    }
    return "?";
}

namespace {

FeatureKind kind_from_name(const std::string& s) {
    if (s == "unigram") return FeatureKind::Unigram;
    if (s == "bigram") return FeatureKind::Bigram;
    if (s == "lexicon-entry") return FeatureKind::LexiconEntry;
    throw std::runtime_error("unknown feature kind '" + s + "'");
}

// Lowercased tokens with stopwords removed; the base stream for n-grams.
std::vector<std::string> content_tokens(const Document& doc, const std::set<std::string>& stop) {
    std::vector<std::string> out;
    for (const auto& s : doc.surfaces()) {
        std::string lc = to_lower(s);
        if (!stop.count(lc)) out.push_back(std::move(lc));
    }
    return out;
}

long count_matches(const std::vector<std::string>& tokens, const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > tokens.size()) return 0;
    long n = 0;
    for (size_t i = 0; i + needle.size() <= tokens.size(); ++i) {
        bool hit = true;
        for (size_t j = 0; j < needle.size(); ++j)
            if (tokens[i + j] != needle[j]) {
                hit = false;
                break;
            }
        if (hit) ++n;
    }
    return n;
}

double entropy(const std::map<int, long>& counts, long total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    for (const auto& [cls, c] : counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace

std::optional<size_t> FeatureSpace::find(const std::string& name, FeatureKind kind) const {
    auto it = index_.find({static_cast<int>(kind), name});
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

FeatureSpace build_feature_space(const Corpus& train, const std::set<std::string>& stopwords,
                                 bool unigrams, bool bigrams, bool lexicon_features,
                                 const Lexicon* lexicon) {
    if (lexicon_features && lexicon == nullptr)
        throw std::runtime_error("lexicon features requested but no lexicon given");

    FeatureSpace space;
    space.stopwords_ = stopwords;
    space.corpus_size_ = static_cast<long>(train.size());

    // df keyed by (kind, name); map keeps feature order deterministic.
    std::map<std::pair<int, std::string>, long> df;
    for (const auto& doc : train) {
        auto toks = content_tokens(doc, stopwords);
        std::set<std::pair<int, std::string>> seen;
        if (unigrams)
            for (const auto& t : toks) seen.insert({static_cast<int>(FeatureKind::Unigram), t});
        if (bigrams)
            for (size_t i = 0; i + 1 < toks.size(); ++i)
                seen.insert({static_cast<int>(FeatureKind::Bigram), toks[i] + " " + toks[i + 1]});
        for (const auto& k : seen) ++df[k];
    }

    for (const auto& [key, count] : df) {
        space.index_[key] = space.features_.size();
        space.features_.push_back({key.second, static_cast<FeatureKind>(key.first), count});
    }

    if (lexicon_features) {
        // Lexicon forms become features verbatim, with df measured by
        // contiguous case-insensitive matches in the training docs.
        std::vector<std::vector<std::string>> lowered;
        lowered.reserve(train.size());
        for (const auto& doc : train) {
            std::vector<std::string> lc;
            for (const auto& s : doc.surfaces()) lc.push_back(to_lower(s));
            lowered.push_back(std::move(lc));
        }
        for (const auto& [category, entries] : lexicon->entries()) {
            for (const auto& e : entries) {
                std::pair<int, std::string> key{static_cast<int>(FeatureKind::LexiconEntry), e.form};
                if (space.index_.count(key)) continue;
                auto needle = split_ws(to_lower(e.form));
                long d = 0;
                for (const auto& toks : lowered)
                    if (count_matches(toks, needle) > 0) ++d;
                space.index_[key] = space.features_.size();
                space.features_.push_back({e.form, FeatureKind::LexiconEntry, d});
            }
        }
    }
    return space;
}

FeatureVector vectorize(const Document& doc, const FeatureSpace& space) {
    FeatureVector vec;
    if (space.corpus_size() == 0) return vec;

    auto toks = content_tokens(doc, space.stopwords());
    std::map<size_t, long> tf;
    for (const auto& t : toks)
        if (auto idx = space.find(t, FeatureKind::Unigram)) ++tf[*idx];
    for (size_t i = 0; i + 1 < toks.size(); ++i)
        if (auto idx = space.find(toks[i] + " " + toks[i + 1], FeatureKind::Bigram)) ++tf[*idx];

    std::vector<std::string> raw;
    bool lowered = false;
    for (const auto& f : space.features()) {
        if (f.kind != FeatureKind::LexiconEntry) continue;
        if (!lowered) {
            for (const auto& s : doc.surfaces()) raw.push_back(to_lower(s));
            lowered = true;
        }
        long c = count_matches(raw, split_ws(to_lower(f.name)));
        if (c > 0) tf[*space.find(f.name, FeatureKind::LexiconEntry)] += c;
    }

    for (const auto& [idx, count] : tf) {
        long df = space.features()[idx].df;
        if (df <= 0) continue;  // unseen in training: no usable idf
        double w = static_cast<double>(count) *
                   std::log(static_cast<double>(space.corpus_size()) / static_cast<double>(df));
        if (w != 0.0) vec[idx] = w;
    }
    return vec;
}

double information_gain(const std::vector<bool>& presence, const std::vector<int>& labels) {
    if (presence.size() != labels.size())
        throw std::runtime_error("presence/label length mismatch");
    if (labels.empty()) throw std::runtime_error("information gain needs at least one document");

    long total = static_cast<long>(labels.size());
    std::map<int, long> cls, cls_present, cls_absent;
    long n_present = 0;
    for (size_t i = 0; i < labels.size(); ++i) {
        ++cls[labels[i]];
        if (presence[i]) {
            ++cls_present[labels[i]];
            ++n_present;
        } else {
            ++cls_absent[labels[i]];
        }
    }
    long n_absent = total - n_present;
    double h = entropy(cls, total);
    double cond = 0.0;
    if (n_present > 0)
        cond += (static_cast<double>(n_present) / total) * entropy(cls_present, n_present);
    if (n_absent > 0)
        cond += (static_cast<double>(n_absent) / total) * entropy(cls_absent, n_absent);
    double ig = h - cond;
    return ig < 0.0 ? 0.0 : ig;  // clamp tiny negative rounding error
}

FeatureSpace select_features(const FeatureSpace& space, const Corpus& train,
                             const std::vector<int>& labels, int percent) {
    if (percent < 1 || percent > 100) throw std::invalid_argument("percent must be in 1..100");
    if (train.size() != labels.size())
        throw std::runtime_error("label vector does not match training corpus");

    // Presence of each n-gram feature per training doc.
    std::vector<std::vector<bool>> presence(space.size(),
                                            std::vector<bool>(train.size(), false));
    for (size_t d = 0; d < train.size(); ++d) {
        auto toks = content_tokens(train[d], space.stopwords());
        for (const auto& t : toks)
            if (auto idx = space.find(t, FeatureKind::Unigram)) presence[*idx][d] = true;
        for (size_t i = 0; i + 1 < toks.size(); ++i)
            if (auto idx = space.find(toks[i] + " " + toks[i + 1], FeatureKind::Bigram))
                presence[*idx][d] = true;
    }

    struct Ranked {
        double ig;
        std::string name;
        size_t idx;
    };
    std::vector<Ranked> ngrams;
    for (size_t i = 0; i < space.size(); ++i) {
        if (space.features()[i].kind == FeatureKind::LexiconEntry) continue;
        ngrams.push_back({information_gain(presence[i], labels), space.features()[i].name, i});
    }
    std::stable_sort(ngrams.begin(), ngrams.end(), [](const Ranked& a, const Ranked& b) {
        if (a.ig != b.ig) return a.ig > b.ig;
        return a.name < b.name;
    });
    size_t keep = static_cast<size_t>(
        std::ceil(static_cast<double>(ngrams.size()) * percent / 100.0));
    std::set<size_t> kept;
    for (size_t i = 0; i < keep && i < ngrams.size(); ++i) kept.insert(ngrams[i].idx);

    FeatureSpace out;
    out.stopwords_ = space.stopwords();
    out.corpus_size_ = space.corpus_size();
    for (size_t i = 0; i < space.size(); ++i) {
        const auto& f = space.features()[i];
        if (f.kind != FeatureKind::LexiconEntry && !kept.count(i)) continue;
        out.index_[{static_cast<int>(f.kind), f.name}] = out.features_.size();
        out.features_.push_back(f);
    }
    return out;
}

std::set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stopword file: " + path);
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        out.insert(to_lower(line));
    }
    return out;
}

void save_feature_space(const FeatureSpace& space, const std::map<size_t, double>& gains,
                        const std::string& path, const std::string& header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write feature space: " + path);
    if (!header.empty()) out << header << "\n";
    out << "feature\tkind\tdf\tig\n";
    for (size_t i = 0; i < space.size(); ++i) {
        const auto& f = space.features()[i];
        auto it = gains.find(i);
        out << f.name << "\t" << feature_kind_name(f.kind) << "\t" << f.df << "\t"
            << (it == gains.end() ? 0.0 : it->second) << "\n";
    }
}

void write_feature_space(std::ostream& out, const FeatureSpace& space) {
    out << "space " << space.corpus_size() << " " << space.stopwords().size() << " "
        << space.size() << "\n";
    for (const auto& s : space.stopwords()) out << s << "\n";
    for (const auto& f : space.features())
        out << static_cast<int>(f.kind) << "\t" << f.df << "\t" << f.name << "\n";
}

FeatureSpace read_feature_space(std::istream& in) {
    std::string tag;
    long corpus_size = 0, n_stop = 0, n_feat = 0;
    if (!(in >> tag >> corpus_size >> n_stop >> n_feat) || tag != "space")
        throw std::runtime_error("malformed feature space block");
    std::string line;
    std::getline(in, line);
    FeatureSpace space;
    space.corpus_size_ = corpus_size;
    for (long i = 0; i < n_stop; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("truncated stopword list");
        space.stopwords_.insert(line);
    }
    for (long i = 0; i < n_feat; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("truncated feature list");
        auto fields = split_on(line, '\t');
        if (fields.size() != 3) throw std::runtime_error("malformed feature line: " + line);
        Feature f;
        f.kind = static_cast<FeatureKind>(std::stoi(fields[0]));
        f.df = std::stol(fields[1]);
        f.name = fields[2];
        space.index_[{static_cast<int>(f.kind), f.name}] = space.features_.size();
        space.features_.push_back(std::move(f));
    }
    return space;
}

}  // namespace causelex
