#include <algorithm>
#include <cmath>
#include <cstdio>

#include "causelex/bootstrap.hpp"
#include "causelex/patterns.hpp"
#include "doctest.h"
#include "synthetic.hpp"

using namespace causelex;

namespace {

Target W(const std::string& f) { return {f, TargetKind::Word}; }

Pattern L(const std::string& ctx) {
    return {Direction::LeftContext, ctx, TargetKind::Word, PatternOrigin::Ngram};
}

void link(CooccurrenceIndex& idx, const Pattern& p, const Target& t, long count) {
    idx.pair_by_pattern[p][t] = count;
    idx.pair_by_target[t][p] = count;
}

// Index where each of three patterns extracts the probe word plus five
// category members; extraction/frequency figures set directly.
struct ProbScenario {
    CooccurrenceIndex idx;
    Lexicon lexicon;
    Target word = W("probe");

    ProbScenario() {
        SeedLexicon seeds;
        seeds.entries["Cat"] = {"member"};
        lexicon = Lexicon(seeds);
        idx.target_token_freq[word] = 100;
        idx.target_token_freq[W("member")] = 15;
        Pattern p1 = L("ctx one"), p2 = L("ctx two"), p3 = L("ctx three");
        idx.pattern_token_freq[p1] = 100;
        idx.pattern_token_freq[p2] = 500;
        idx.pattern_token_freq[p3] = 1000;
        link(idx, p1, word, 10);
        link(idx, p2, word, 20);
        link(idx, p3, word, 70);
        link(idx, p1, W("member"), 5);
        link(idx, p2, W("member"), 5);
        link(idx, p3, W("member"), 5);
    }
};

}  // namespace

TEST_CASE("pattern-marginalized membership probability on the reference figures") {
    // word seen 100 times; extracted 10/20/70 times by patterns of frequency
    // 100/500/1000, each extracting 5 category-member tokens:
    // (5/100)(10/100) + (5/500)(20/100) + (5/1000)(70/100) = 0.0105
    ProbScenario s;
    CHECK(semprob(s.word, "Cat", s.idx, s.lexicon) == doctest::Approx(0.0105).epsilon(1e-9));

    // never-extracted word with nonzero frequency scores zero
    s.idx.target_token_freq[W("loner")] = 3;
    CHECK(semprob(W("loner"), "Cat", s.idx, s.lexicon) == 0.0);

    CHECK_THROWS_AS(semprob(W("ghost"), "Cat", s.idx, s.lexicon), std::runtime_error);
}

TEST_CASE("membership probability is 1 for a pure always-extracting pattern") {
    CooccurrenceIndex idx;
    SeedLexicon seeds;
    seeds.entries["Cat"] = {"member"};
    Lexicon lex(seeds);
    Pattern p = L("only ctx");
    idx.target_token_freq[W("probe")] = 4;
    idx.target_token_freq[W("member")] = 6;
    idx.pattern_token_freq[p] = 10;
    link(idx, p, W("probe"), 4);
    link(idx, p, W("member"), 6);
    // pattern extracts only probe/member; after probe's own extractions are
    // not category members, Prob(Cat|p) = 6/10, Prob(p|probe) = 1
    CHECK(semprob(W("probe"), "Cat", idx, lex) == doctest::Approx(0.6));
    // add probe to the lexicon: a word always extracted by a pattern that
    // only extracts category members scores 1
    lex.add("Cat", {"probe", TargetKind::Word, 1, 0.0});
    CHECK(semprob(W("probe"), "Cat", idx, lex) == doctest::Approx(1.0));
}

TEST_CASE("scaling all counts by a constant leaves the probability unchanged") {
    ProbScenario a;
    ProbScenario b;
    for (auto& [t, c] : b.idx.target_token_freq) c *= 7;
    for (auto& [p, c] : b.idx.pattern_token_freq) c *= 7;
    for (auto& [p, m] : b.idx.pair_by_pattern)
        for (auto& [t, c] : m) c *= 7;
    for (auto& [t, m] : b.idx.pair_by_target)
        for (auto& [p, c] : m) c *= 7;
    CHECK(semprob(a.word, "Cat", a.idx, a.lexicon) ==
          doctest::Approx(semprob(b.word, "Cat", b.idx, b.lexicon)).epsilon(1e-12));
}

TEST_CASE("pattern affinity score ratios and sentinel") {
    CooccurrenceIndex idx;
    SeedLexicon seeds;
    seeds.entries["Cat"] = {"m1", "m2", "m3", "m4"};
    Lexicon lex(seeds);
    Pattern p = L("ctx");
    idx.pattern_token_freq[p] = 8;
    for (int i = 1; i <= 4; ++i) link(idx, p, W("m" + std::to_string(i)), 1);
    for (int i = 1; i <= 4; ++i) link(idx, p, W("x" + std::to_string(i)), 1);
    // 4 of 8 distinct extractions are members: (4/8) * log2(4) = 1
    CHECK(rlogf(p, "Cat", idx, lex) == doctest::Approx(1.0));

    CooccurrenceIndex idx2;
    Pattern q = L("other");
    idx2.pattern_token_freq[q] = 1;
    link(idx2, q, W("m1"), 1);
    CHECK(rlogf(q, "Cat", idx2, lex) == doctest::Approx(0.0));  // F = N = 1

    CHECK(std::isinf(rlogf(q, "Nope", idx2, lex)));  // F = 0 sentinel
    CHECK_THROWS_AS(rlogf(L("missing"), "Cat", idx2, lex), std::runtime_error);
}

TEST_CASE("candidate word score averages log2(F+1) over its extracting patterns") {
    // three patterns, each extracting five category members, also extract the
    // candidate: score = log2(5 + 1) = 2.585. Note: averaging log2(F) instead
    // (a plausible off-by-one misreading) would give log2(5) = 2.32; the
    // formula used here adds one inside the log as defined.
    CooccurrenceIndex idx;
    SeedLexicon seeds;
    seeds.entries["Cat"] = {"m1", "m2", "m3", "m4", "m5"};
    Lexicon lex(seeds);
    for (int pi = 0; pi < 3; ++pi) {
        Pattern p = L("ctx " + std::to_string(pi));
        idx.pattern_token_freq[p] = 6;
        for (int i = 1; i <= 5; ++i) link(idx, p, W("m" + std::to_string(i)), 1);
        link(idx, p, W("cand"), 1);
    }
    CHECK(avglog(W("cand"), "Cat", idx, lex) ==
          doctest::Approx(std::log2(6.0)).epsilon(1e-12));
    CHECK(avglog(W("cand"), "Cat", idx, lex) == doctest::Approx(2.585).epsilon(1e-3));

    CHECK_THROWS_AS(avglog(W("never"), "Cat", idx, lex), std::runtime_error);

    // single pattern with F = 0 / F = 1
    CooccurrenceIndex idx2;
    Pattern q = L("q");
    idx2.pattern_token_freq[q] = 2;
    link(idx2, q, W("cand"), 1);
    CHECK(avglog(W("cand"), "Cat", idx2, lex) == doctest::Approx(0.0));
    link(idx2, q, W("m1"), 1);
    CHECK(avglog(W("cand"), "Cat", idx2, lex) == doctest::Approx(1.0));
}

TEST_CASE("category-difference score") {
    CooccurrenceIndex idx;
    SeedLexicon seeds;
    seeds.entries["A"] = {"a1", "a2", "a3"};
    seeds.entries["B"] = {"b1"};
    Lexicon lex(seeds);
    Pattern p = L("ctx");
    idx.pattern_token_freq[p] = 5;
    for (const auto& m : {"a1", "a2", "a3", "b1"}) link(idx, p, W(m), 1);
    link(idx, p, W("cand"), 1);
    double a = avglog(W("cand"), "A", idx, lex);
    double b = avglog(W("cand"), "B", idx, lex);
    CHECK(diff_score(W("cand"), "A", idx, lex, {"A", "B"}) == doctest::Approx(a - b));
    CHECK(diff_score(W("cand"), "B", idx, lex, {"A", "B"}) == doctest::Approx(b - a));
    // single category: returns the category's own score
    CHECK(diff_score(W("cand"), "A", idx, lex, {"A"}) == doctest::Approx(a));
}

namespace {

// Three disjoint categories; pattern k extracts its seed plus 7 fresh words.
struct PoolFixture {
    CooccurrenceIndex idx;
    SeedLexicon seeds;

    PoolFixture() {
        for (const std::string cat : {"A", "B", "C"}) {
            std::string seed = cat + "seed";
            seeds.entries[cat] = {seed};
            Pattern p = L("ctx " + cat);
            idx.pattern_token_freq[p] = 8;
            idx.target_token_freq[W(seed)] = 5;
            link(idx, p, W(seed), 1);
            for (int i = 0; i < 7; ++i) {
                std::string cand = cat + "cand" + std::to_string(i);
                idx.target_token_freq[W(cand)] = 5;
                link(idx, p, W(cand), 1);
            }
        }
    }
};

}  // namespace

TEST_CASE("exactly five entries per category per iteration with enough candidates") {
    PoolFixture f;
    Lexicon after1 = bootstrap_original(f.seeds, f.idx, 1);
    for (const auto& cat : {"A", "B", "C"})
        CHECK(after1.entries().at(cat).size() == 6);  // seed + 5
    // two candidates remain per category for the second iteration
    Lexicon after2 = bootstrap_original(f.seeds, f.idx, 2);
    for (const auto& cat : {"A", "B", "C"})
        CHECK(after2.entries().at(cat).size() == 8);  // everything assigned
    // growth is monotone: iteration-1 entries persist with their scores
    for (const auto& cat : {"A", "B", "C"})
        for (size_t i = 0; i < after1.entries().at(cat).size(); ++i)
            CHECK(after2.entries().at(cat)[i].form == after1.entries().at(cat)[i].form);
}

TEST_CASE("zero iterations return the seeds") {
    PoolFixture f;
    Lexicon lex = bootstrap_original(f.seeds, f.idx, 0);
    CHECK(lex.size() == 3);
    Thresholds th;
    CHECK(bootstrap_modified(f.seeds, f.idx, 0, th).size() == 3);
}

TEST_CASE("pattern pool holds the top 20+i admissible patterns") {
    CooccurrenceIndex idx;
    SeedLexicon seeds;
    seeds.entries["A"] = {"seed"};
    Lexicon lex(seeds);
    for (int i = 0; i < 30; ++i) {
        Pattern p = L("ctx " + std::to_string(i));
        idx.pattern_token_freq[p] = 2 + i;
        link(idx, p, W("seed"), 1);
        link(idx, p, W("cand" + std::to_string(i)), 1 + i);
    }
    CHECK(select_pattern_pool("A", 1, idx, lex).size() == 21);
    CHECK(select_pattern_pool("A", 5, idx, lex).size() == 25);
    CHECK(select_pattern_pool("A", 15, idx, lex).size() == 30);  // fewer qualify than 35

    // depleted patterns are excluded
    Pattern dep = L("depleted ctx");
    idx.pattern_token_freq[dep] = 4;
    link(idx, dep, W("seed"), 4);
    auto pool = select_pattern_pool("A", 15, idx, lex);
    CHECK(std::find(pool.begin(), pool.end(), dep) == pool.end());

    // frequency thresholds apply only when given
    Thresholds th;
    th.min_pattern_freq = 10;
    th.max_pattern_distinct_targets = 100;
    auto filtered = select_pattern_pool("A", 1, idx, lex, th);
    for (const auto& p : filtered) CHECK(idx.pattern_token_freq.at(p) >= 10);

    th.min_pattern_freq = 1;
    th.max_pattern_distinct_targets = 1;
    CHECK(select_pattern_pool("A", 1, idx, lex, th).empty());  // all extract 2 words
}

TEST_CASE("modified loop respects word-frequency bounds and the common pool") {
    PoolFixture f;
    // push one candidate of category A below the frequency floor and one
    // above the ceiling
    f.idx.target_token_freq[W("Acand0")] = 1;
    f.idx.target_token_freq[W("Acand1")] = 100;
    Thresholds th;
    th.min_word_freq = 2;
    th.max_word_freq = 50;
    Lexicon lex = bootstrap_modified(f.seeds, f.idx, 1, th);
    for (const auto& e : lex.entries().at("A")) {
        CHECK(e.form != "Acand0");
        CHECK(e.form != "Acand1");
    }
    CHECK(lex.entries().at("A").size() == 6);  // five of the seven remain eligible
    CHECK(lex.entries().at("B").size() == 6);

    // per-category cap is configurable
    Lexicon capped = bootstrap_modified(f.seeds, f.idx, 1, th, 2);
    CHECK(capped.entries().at("B").size() == 3);
}

TEST_CASE("both loops are deterministic") {
    auto corpus = synth::bootstrap_corpus(50, 7);
    IndexConfig cfg;
    cfg.phrase_patterns = false;
    auto idx = build_index(corpus, cfg);
    auto seeds = synth::bootstrap_seeds();
    Thresholds th;
    th.min_word_freq = 1;
    th.max_word_freq = 10000;
    th.min_pattern_freq = 1;
    th.max_pattern_distinct_targets = 10000;

    auto a1 = bootstrap_original(seeds, idx, 2);
    auto a2 = bootstrap_original(seeds, idx, 2);
    auto b1 = bootstrap_modified(seeds, idx, 2, th);
    auto b2 = bootstrap_modified(seeds, idx, 2, th);
    for (const auto& [cat, entries] : a1.entries()) {
        REQUIRE(a2.entries().at(cat).size() == entries.size());
        for (size_t i = 0; i < entries.size(); ++i) {
            CHECK(a2.entries().at(cat)[i].form == entries[i].form);
            CHECK(a2.entries().at(cat)[i].score == entries[i].score);
        }
    }
    for (const auto& [cat, entries] : b1.entries())
        CHECK(b2.entries().at(cat).size() == entries.size());
}

TEST_CASE("category lexicons stay disjoint and monotone across iterations") {
    auto corpus = synth::bootstrap_corpus(50, 7);
    IndexConfig cfg;
    cfg.phrase_patterns = false;
    auto idx = build_index(corpus, cfg);
    auto seeds = synth::bootstrap_seeds();

    auto one = bootstrap_original(seeds, idx, 1);
    auto two = bootstrap_original(seeds, idx, 2);
    std::set<std::string> seen;
    for (const auto& [cat, entries] : two.entries())
        for (const auto& e : entries) CHECK(seen.insert(e.form).second);
    for (const auto& [cat, entries] : one.entries()) {
        const auto& later = two.entries().at(cat);
        REQUIRE(later.size() >= entries.size());
        for (size_t i = 0; i < entries.size(); ++i) CHECK(later[i].form == entries[i].form);
    }
}

TEST_CASE("probability values stay in range on generated data") {
    auto corpus = synth::bootstrap_corpus(50, 13);
    IndexConfig cfg;
    cfg.phrase_patterns = false;
    auto idx = build_index(corpus, cfg);
    Lexicon lex(synth::bootstrap_seeds());
    auto cats = lex.categories();
    for (const auto& [t, freq] : idx.target_token_freq) {
        double sum = 0.0;
        for (const auto& cat : cats) {
            double p = semprob(t, cat, idx, lex);
            CHECK(p >= 0.0);
            sum += p;
        }
        // each occurrence can emit both a left and a right pattern, so the
        // pattern-event mass per occurrence is bounded by 2, not 1
        CHECK(sum <= 2.0 + 1e-9);
    }
}

TEST_CASE("lexicon files round-trip") {
    PoolFixture f;
    Lexicon lex = bootstrap_original(f.seeds, f.idx, 1);
    const std::string path = "test_tmp_lexicon.tsv";
    save_lexicon(lex, path, "# hdr");
    Lexicon back = load_lexicon(path);
    REQUIRE(back.size() == lex.size());
    for (const auto& [cat, entries] : lex.entries()) {
        for (const auto& e : entries) {
            CHECK(back.in_category(e.form, cat));
        }
    }
    std::remove(path.c_str());
}
