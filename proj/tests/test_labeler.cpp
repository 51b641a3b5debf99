#include <cstdio>

#include "causelex/labeler.hpp"
#include "doctest.h"
#include "synthetic.hpp"

using namespace causelex;

namespace {

Lexicon small_lexicon() {
    SeedLexicon seeds;
    seeds.entries["Duty Cycle"] = {"11 hour duty day", "inadequate rest"};
    seeds.entries["Physical Environment"] = {"fog", "rain", "snow"};
    seeds.entries["Physical Factors"] = {"fatigue"};
    return Lexicon(seeds);
}

Document doc_with(const std::string& id, const std::vector<std::string>& words) {
    std::vector<std::pair<std::string, std::string>> toks;
    for (const auto& w : words) toks.push_back({w, "NN"});
    return synth::doc(id, {synth::sentence(toks)});
}

}  // namespace

TEST_CASE("multi-token entries must match contiguously and in order") {
    auto lex = small_lexicon();
    auto hit = label_document(doc_with("d1", {"after", "an", "11", "hour", "duty", "day"}), lex);
    CHECK(hit.labels == std::set<std::string>{"Duty Cycle"});

    // same tokens, broken order: no match
    auto miss = label_document(doc_with("d2", {"duty", "11", "day", "hour"}), lex);
    CHECK(miss.labels.empty());

    // tokens present but not contiguous: no match
    auto gap = label_document(doc_with("d3", {"11", "hour", "of", "duty", "day"}), lex);
    CHECK(gap.labels.empty());
}

TEST_CASE("matching is case-insensitive and token-based") {
    auto lex = small_lexicon();
    CHECK(label_document(doc_with("d1", {"FOG", "ahead"}), lex).labels ==
          std::set<std::string>{"Physical Environment"});
    // "rest" must not fire inside "restore"
    CHECK(label_document(doc_with("d2", {"inadequate", "restore"}), lex).labels.empty());
}

TEST_CASE("documents collect every matching category") {
    auto lex = small_lexicon();
    auto both = label_document(doc_with("d1", {"rain", "and", "fatigue"}), lex);
    CHECK(both.labels ==
          std::set<std::string>{"Physical Environment", "Physical Factors"});
    CHECK(label_document(doc_with("d2", {"clear", "skies"}), lex).labels.empty());
}

TEST_CASE("growing the lexicon never removes labels") {
    auto lex = small_lexicon();
    Document d = doc_with("d1", {"fog", "turbulence"});
    auto before = label_document(d, lex).labels;
    lex.add("Physical Environment", {"turbulence", TargetKind::Word, 1, 0.5});
    auto after = label_document(d, lex).labels;
    for (const auto& l : before) CHECK(after.count(l) == 1);
}

TEST_CASE("corpus labeling is ordered by document id") {
    auto lex = small_lexicon();
    Corpus corpus;
    corpus.push_back(doc_with("z9", {"fog"}));
    corpus.push_back(doc_with("a1", {"fatigue"}));
    auto results = label_corpus(corpus, lex);
    REQUIRE(results.size() == 2);
    CHECK(results[0].document_id == "a1");
    CHECK(results[1].document_id == "z9");
    CHECK(label_corpus({}, lex).empty());
}

TEST_CASE("prediction files round-trip, including empty label sets") {
    std::vector<LabelSet> preds = {{"a1", {"X", "Y"}}, {"b2", {}}};
    const std::string path = "test_tmp_preds.tsv";
    save_predictions(preds, path, "# hdr");
    auto back = load_predictions(path);
    REQUIRE(back.size() == 2);
    CHECK(back.at("a1") == std::set<std::string>{"X", "Y"});
    CHECK(back.at("b2").empty());
    std::remove(path.c_str());
}
