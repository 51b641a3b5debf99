#ifndef CAUSELEX_TESTS_SYNTHETIC_HPP
#define CAUSELEX_TESTS_SYNTHETIC_HPP

// Deterministic synthetic fixtures shared by the unit and acceptance suites.

#include <random>
#include <string>
#include <vector>

#include "causelex/corpus.hpp"

namespace synth {

inline causelex::Sentence sentence(const std::vector<std::pair<std::string, std::string>>& toks) {
    causelex::Sentence s;
    for (const auto& [surface, pos] : toks) s.tokens.push_back({surface, pos});
    return s;
}

inline causelex::Document doc(const std::string& id, std::vector<causelex::Sentence> sentences) {
    causelex::Document d;
    d.id = id;
    for (auto& s : sentences) d.sentences.push_back(std::move(s));
    return d;
}

// Corpus of short "context context TARGET context context" sentences where
// context tokens are prepositions (never extraction targets) and targets are
// nouns drawn mostly from one of three coherent groups. Word patterns only.
inline causelex::Corpus bootstrap_corpus(int docs = 50, std::uint64_t seed = 7) {
    std::mt19937_64 rng(seed);
    const std::vector<std::string> groups = {"alpha", "beta", "gamma"};
    // characteristic context pairs per group, plus shared noise contexts
    const std::vector<std::vector<std::string>> left = {
        {"amid", "around"}, {"beyond", "beside"}, {"given", "despite"}};
    const std::vector<std::vector<std::string>> right = {
        {"across", "after"}, {"before", "behind"}, {"during", "except"}};
    const std::vector<std::string> noise = {"near", "onto", "upon", "via"};

    causelex::Corpus corpus;
    for (int d = 0; d < docs; ++d) {
        causelex::Document document;
        document.id = "doc" + std::to_string(1000 + d);
        for (int s = 0; s < 3; ++s) {
            size_t g = rng() % groups.size();
            // 80%: a group member word; 20%: a shared noise word
            std::string word = (rng() % 10) < 8
                                   ? groups[g] + std::to_string(rng() % 8)
                                   : "shared" + std::to_string(rng() % 4);
            std::vector<std::pair<std::string, std::string>> toks;
            bool noisy_left = (rng() % 5) == 0;
            bool noisy_right = (rng() % 5) == 0;
            auto pick_noise = [&] { return noise[rng() % noise.size()]; };
            toks.push_back({noisy_left ? pick_noise() : left[g][0], "IN"});
            toks.push_back({noisy_left ? pick_noise() : left[g][1], "IN"});
            toks.push_back({word, "NN"});
            toks.push_back({noisy_right ? pick_noise() : right[g][0], "IN"});
            toks.push_back({noisy_right ? pick_noise() : right[g][1], "IN"});
            document.sentences.push_back(sentence(toks));
        }
        corpus.push_back(std::move(document));
    }
    return corpus;
}

inline causelex::SeedLexicon bootstrap_seeds() {
    causelex::SeedLexicon seeds;
    seeds.entries["GroupA"] = {"alpha0", "alpha1"};
    seeds.entries["GroupB"] = {"beta0", "beta1"};
    seeds.entries["GroupC"] = {"gamma0", "gamma1"};
    return seeds;
}

// Labeled corpus for classifier tests: each document's gold labels are the
// groups whose marker words it contains.
inline causelex::Corpus labeled_corpus(int docs = 60, std::uint64_t seed = 11) {
    std::mt19937_64 rng(seed);
    const std::vector<std::string> cats = {"A", "B", "C"};
    const std::vector<std::vector<std::string>> markers = {
        {"anchor", "apple", "arrow"}, {"basket", "bridge", "button"}, {"candle", "castle", "copper"}};
    const std::vector<std::string> filler = {"report", "states", "that", "crew", "noted", "minor",
                                             "issue", "with", "the", "aircraft"};
    causelex::Corpus corpus;
    for (int d = 0; d < docs; ++d) {
        causelex::Document document;
        document.id = "r" + std::to_string(100 + d);
        std::set<std::string> labels;
        std::vector<std::pair<std::string, std::string>> toks;
        for (int w = 0; w < 4; ++w) toks.push_back({filler[rng() % filler.size()], "NN"});
        for (size_t c = 0; c < cats.size(); ++c) {
            if ((rng() % 3) == 0) {
                labels.insert(cats[c]);
                toks.push_back({markers[c][rng() % markers[c].size()], "NN"});
                toks.push_back({markers[c][rng() % markers[c].size()], "NN"});
            }
        }
        for (int w = 0; w < 3; ++w) toks.push_back({filler[rng() % filler.size()], "NN"});
        document.sentences.push_back(sentence(toks));
        document.labels = labels;
        corpus.push_back(std::move(document));
    }
    return corpus;
}

}  // namespace synth

#endif
