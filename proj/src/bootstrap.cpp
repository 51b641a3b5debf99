#include "causelex/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "causelex/util.hpp"

namespace causelex {

Lexicon::Lexicon(const SeedLexicon& seeds) {
    for (const auto& [category, phrases] : seeds.entries)
        for (const auto& phrase : phrases) {
            TargetKind kind = phrase.find(' ') == std::string::npos ? TargetKind::Word : TargetKind::Phrase;
            add(category, {phrase, kind, 0, 0.0});
        }
}

bool Lexicon::in_category(const std::string& form, const std::string& category) const {
    auto it = owner_.find(form);
    return it != owner_.end() && it->second == category;
}

void Lexicon::add(const std::string& category, LexiconEntry entry) {
    auto [it, inserted] = owner_.emplace(entry.form, category);
    if (!inserted)
        throw std::runtime_error("lexicon form '" + entry.form + "' already assigned to '" + it->second +
                                 "'");
    entries_[category].push_back(std::move(entry));
}

std::vector<std::string> Lexicon::categories() const {
    std::vector<std::string> out;
    for (const auto& [cat, _] : entries_) out.push_back(cat);
    return out;
}

void Thresholds::validate() const {
    if (min_word_freq < 1 || min_pattern_freq < 1 || max_pattern_distinct_targets < 1)
        throw std::invalid_argument("thresholds must be positive");
    if (min_word_freq > max_word_freq)
        throw std::invalid_argument("min_word_freq must not exceed max_word_freq");
}

namespace {

// Distinct targets of the pattern whose forms are in the category lexicon.
long category_distinct(const Pattern& pattern, const CooccurrenceIndex& index, const Lexicon& lexicon,
                       const std::string& category) {
    auto it = index.pair_by_pattern.find(pattern);
    if (it == index.pair_by_pattern.end()) return 0;
    long f = 0;
    for (const auto& [target, _] : it->second)
        if (lexicon.in_category(target.form, category)) ++f;
    return f;
}

// Token-level extractions of category members by the pattern.
long category_tokens(const Pattern& pattern, const CooccurrenceIndex& index, const Lexicon& lexicon,
                     const std::string& category) {
    auto it = index.pair_by_pattern.find(pattern);
    if (it == index.pair_by_pattern.end()) return 0;
    long f = 0;
    for (const auto& [target, count] : it->second)
        if (lexicon.in_category(target.form, category)) f += count;
    return f;
}

}  // namespace

double rlogf(const Pattern& pattern, const std::string& category, const CooccurrenceIndex& index,
             const Lexicon& lexicon) {
    auto it = index.pair_by_pattern.find(pattern);
    if (it == index.pair_by_pattern.end()) throw std::runtime_error("unknown pattern: " + pattern.repr());
    long f = category_distinct(pattern, index, lexicon, category);
    if (f == 0) return -std::numeric_limits<double>::infinity();
    long n = static_cast<long>(it->second.size());
    return (static_cast<double>(f) / static_cast<double>(n)) * std::log2(static_cast<double>(f));
}

double avglog(const Target& word, const std::string& category, const CooccurrenceIndex& index,
              const Lexicon& lexicon) {
    auto it = index.pair_by_target.find(word);
    if (it == index.pair_by_target.end() || it->second.empty())
        throw std::runtime_error("target extracted by no pattern: " + word.form);
    double sum = 0.0;
    for (const auto& [pattern, _] : it->second)
        sum += std::log2(static_cast<double>(category_distinct(pattern, index, lexicon, category)) + 1.0);
    return sum / static_cast<double>(it->second.size());
}

double diff_score(const Target& word, const std::string& category, const CooccurrenceIndex& index,
                  const Lexicon& lexicon, const std::vector<std::string>& all_categories) {
    double own = avglog(word, category, index, lexicon);
    double best_other = -std::numeric_limits<double>::infinity();
    for (const auto& other : all_categories)
        if (other != category) best_other = std::max(best_other, avglog(word, other, index, lexicon));
    if (std::isinf(best_other)) return own;  // single-category run
    return own - best_other;
}

double semprob(const Target& word, const std::string& category, const CooccurrenceIndex& index,
               const Lexicon& lexicon) {
    auto ft = index.target_token_freq.find(word);
    if (ft == index.target_token_freq.end() || ft->second <= 0)
        throw std::runtime_error("zero-frequency target: " + word.form);
    auto it = index.pair_by_target.find(word);
    if (it == index.pair_by_target.end()) return 0.0;
    double prob = 0.0;
    for (const auto& [pattern, pair_count] : it->second) {
        double p_pattern_given_word = static_cast<double>(pair_count) / static_cast<double>(ft->second);
        long pattern_freq = index.pattern_token_freq.at(pattern);
        double p_cat_given_pattern = static_cast<double>(category_tokens(pattern, index, lexicon, category)) /
                                     static_cast<double>(pattern_freq);
        prob += p_cat_given_pattern * p_pattern_given_word;
    }
    return prob;
}

bool pattern_depleted(const Pattern& pattern, const CooccurrenceIndex& index, const Lexicon& lexicon) {
    auto it = index.pair_by_pattern.find(pattern);
    if (it == index.pair_by_pattern.end()) return true;
    for (const auto& [target, _] : it->second)
        if (!lexicon.contains(target.form)) return false;
    return true;
}

std::vector<Pattern> select_pattern_pool(const std::string& category, int iteration,
                                         const CooccurrenceIndex& index, const Lexicon& lexicon,
                                         const std::optional<Thresholds>& thresholds) {
    if (iteration < 1) throw std::invalid_argument("iteration must be >= 1");
    std::vector<std::pair<double, const Pattern*>> scored;
    for (const auto& [pattern, targets] : index.pair_by_pattern) {
        if (thresholds) {
            if (index.pattern_token_freq.at(pattern) < thresholds->min_pattern_freq) continue;
            if (static_cast<long>(targets.size()) > thresholds->max_pattern_distinct_targets) continue;
        }
        if (pattern_depleted(pattern, index, lexicon)) continue;
        double score = rlogf(pattern, category, index, lexicon);
        if (std::isinf(score)) continue;  // F = 0, never admissible
        scored.emplace_back(score, &pattern);
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second->repr() < b.second->repr();
    });
    size_t pool_size = std::min(scored.size(), static_cast<size_t>(20 + iteration));
    std::vector<Pattern> pool;
    pool.reserve(pool_size);
    for (size_t i = 0; i < pool_size; ++i) pool.push_back(*scored[i].second);
    return pool;
}

namespace {

// Targets extracted by any pooled pattern and not yet in the lexicon.
std::set<Target> pool_candidates(const std::vector<Pattern>& pool, const CooccurrenceIndex& index,
                                 const Lexicon& lexicon) {
    std::set<Target> out;
    for (const auto& pattern : pool) {
        auto it = index.pair_by_pattern.find(pattern);
        if (it == index.pair_by_pattern.end()) continue;
        for (const auto& [target, _] : it->second)
            if (!lexicon.contains(target.form)) out.insert(target);
    }
    return out;
}

struct ScoredCandidate {
    Target target;
    double score;
};

void add_top(Lexicon& lexicon, const std::string& category, std::vector<ScoredCandidate> candidates,
             int cap, int iteration) {
    std::stable_sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.target.form < b.target.form;
    });
    int added = 0;
    for (const auto& cand : candidates) {
        if (added >= cap) break;
        // the same surface form can be pooled as both a word and a phrase
        // target; only the first (higher-scoring) one may claim the form
        if (lexicon.contains(cand.target.form)) continue;
        lexicon.add(category, {cand.target.form, cand.target.kind, iteration, cand.score});
        ++added;
    }
}

}  // namespace

Lexicon bootstrap_original(const SeedLexicon& seeds, const CooccurrenceIndex& index, int iterations) {
    if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
    Lexicon lexicon(seeds);
    const std::vector<std::string> categories = lexicon.categories();
    for (int it = 1; it <= iterations; ++it) {
        // per-category word pools from this iteration's pattern pools
        std::map<std::string, std::set<Target>> pools;
        for (const auto& category : categories)
            pools[category] = pool_candidates(select_pattern_pool(category, it, index, lexicon), index,
                                              lexicon);
        // diff scores; a candidate in several pools goes to its best category
        std::map<Target, std::pair<std::string, double>> assignment;
        std::map<std::string, std::map<Target, double>> scores;
        for (const auto& category : categories) {
            for (const auto& target : pools[category]) {
                double score = diff_score(target, category, index, lexicon, categories);
                scores[category][target] = score;
                auto it2 = assignment.find(target);
                if (it2 == assignment.end() || score > it2->second.second)
                    assignment[target] = {category, score};
            }
        }
        for (const auto& category : categories) {
            std::vector<ScoredCandidate> mine;
            for (const auto& [target, score] : scores[category])
                if (assignment.at(target).first == category) mine.push_back({target, score});
            add_top(lexicon, category, std::move(mine), 5, it);
        }
    }
    return lexicon;
}

Lexicon bootstrap_modified(const SeedLexicon& seeds, const CooccurrenceIndex& index, int iterations,
                           const Thresholds& thresholds, int per_category_cap) {
    if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
    thresholds.validate();
    Lexicon lexicon(seeds);
    const std::vector<std::string> categories = lexicon.categories();
    for (int it = 1; it <= iterations; ++it) {
        // one common candidate pool across all category pattern pools
        std::set<Target> common;
        for (const auto& category : categories) {
            auto pool = select_pattern_pool(category, it, index, lexicon, thresholds);
            auto cands = pool_candidates(pool, index, lexicon);
            common.insert(cands.begin(), cands.end());
        }
        std::map<std::string, std::vector<ScoredCandidate>> assigned;
        for (const auto& target : common) {
            long freq = 0;
            if (auto f = index.target_token_freq.find(target); f != index.target_token_freq.end())
                freq = f->second;
            if (freq < thresholds.min_word_freq || freq > thresholds.max_word_freq) continue;
            std::string best_cat;
            double best = -1.0;
            for (const auto& category : categories) {
                double p = semprob(target, category, index, lexicon);
                if (p > best) {
                    best = p;
                    best_cat = category;
                }
            }
            assigned[best_cat].push_back({target, best});
        }
        for (const auto& category : categories)
            add_top(lexicon, category, assigned[category], per_category_cap, it);
    }
    return lexicon;
}

void save_lexicon(const Lexicon& lexicon, const std::string& path, const std::string& header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write lexicon: " + path);
    if (!header.empty()) out << header << "\n";
    struct Row {
        std::string category;
        LexiconEntry entry;
    };
    std::vector<Row> rows;
    for (const auto& [category, entries] : lexicon.entries())
        for (const auto& e : entries) rows.push_back({category, e});
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.category != b.category) return a.category < b.category;
        if (a.entry.iteration_added != b.entry.iteration_added)
            return a.entry.iteration_added < b.entry.iteration_added;
        if (a.entry.score != b.entry.score) return a.entry.score > b.entry.score;
        return a.entry.form < b.entry.form;
    });
    out << std::setprecision(17);
    for (const auto& row : rows)
        out << row.category << "\t" << row.entry.form << "\t" << row.entry.iteration_added << "\t"
            << row.entry.score << "\n";
}

Lexicon load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lexicon: " + path);
    Lexicon lexicon;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_on(line, '\t');
        if (fields.size() != 4)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected category<TAB>form<TAB>iteration<TAB>score");
        TargetKind kind =
            fields[1].find(' ') == std::string::npos ? TargetKind::Word : TargetKind::Phrase;
        lexicon.add(fields[0], {fields[1], kind, std::stoi(fields[2]), std::stod(fields[3])});
    }
    return lexicon;
}

}  // namespace causelex
