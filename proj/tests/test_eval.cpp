#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "causelex/eval.hpp"
#include "doctest.h"

using namespace causelex;

namespace {

std::set<std::string> S(std::initializer_list<std::string> xs) { return {xs}; }

// independent re-derivation of the set distance used in the agreement tests
double masi_oracle(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    size_t inter = 0;
    for (const auto& x : a) inter += b.count(x);
    size_t uni = a.size() + b.size() - inter;
    double m;
    if (a == b)
        m = 1.0;
    else if (inter == a.size() || inter == b.size())
        m = 2.0 / 3.0;
    else if (inter > 0)
        m = 1.0 / 3.0;
    else
        m = 0.0;
    return 1.0 - (static_cast<double>(inter) / uni) * m;
}

double micro_f_oracle(const LabelMap& pred, const LabelMap& gold,
                      const std::vector<std::string>& cats) {
    long tp = 0, p = 0, n = 0;
    for (const auto& [id, g] : gold)
        for (const auto& c : cats) {
            bool ig = g.count(c) > 0, ip = pred.at(id).count(c) > 0;
            if (ig) ++n;
            if (ip) ++p;
            if (ig && ip) ++tp;
        }
    if (p == 0 || n == 0) return 0.0;
    double prec = static_cast<double>(tp) / p, rec = static_cast<double>(tp) / n;
    return prec + rec == 0.0 ? 0.0 : 2.0 * prec * rec / (prec + rec);
}

}  // namespace

TEST_CASE("counting predictions against gold") {
    LabelMap gold = {{"d1", S({"A", "B"})}, {"d2", S({"B"})}, {"d3", {}},
                     {"d4", S({"C"})},      {"d5", S({"A"})}};
    LabelMap pred = {{"d1", S({"A"})},      {"d2", S({"B", "C"})}, {"d3", S({"A"})},
                     {"d4", {}},            {"d5", S({"A"})}};
    auto counts = count(pred, gold, {"A", "B", "C"});
    CHECK(counts.documents == 5);
    CHECK(counts.per_category.at("A").gold == 2);
    CHECK(counts.per_category.at("A").predicted == 3);
    CHECK(counts.per_category.at("A").tp == 2);
    CHECK(counts.per_category.at("B").gold == 2);
    CHECK(counts.per_category.at("B").predicted == 1);
    CHECK(counts.per_category.at("B").tp == 1);
    CHECK(counts.per_category.at("C").gold == 1);
    CHECK(counts.per_category.at("C").predicted == 1);
    CHECK(counts.per_category.at("C").tp == 0);

    // perfect predictions: tp == predicted == gold everywhere
    auto perfect = count(gold, gold, {"A", "B", "C"});
    for (const auto& [cat, c] : perfect.per_category) {
        CHECK(c.tp == c.gold);
        CHECK(c.predicted == c.gold);
    }

    // a category nobody used still gets a zero row
    CHECK(count(pred, gold, {"A", "Z"}).per_category.at("Z").gold == 0);

    LabelMap missing = pred;
    missing.erase("d3");
    CHECK_THROWS_AS(count(missing, gold, {"A"}), std::runtime_error);
    missing["dX"] = {};
    CHECK_THROWS_AS(count(missing, gold, {"A"}), std::runtime_error);
}

TEST_CASE("micro-averaged precision, recall and F") {
    // aggregate figures: tp 784, predicted 1475, gold 1648
    EvalCounts counts;
    counts.documents = 1000;
    counts.per_category["A"] = {1000, 900, 500};
    counts.per_category["B"] = {648, 575, 284};
    auto r = micro_prf(counts);
    CHECK(r.precision == doctest::Approx(784.0 / 1475.0).epsilon(1e-12));
    CHECK(r.recall == doctest::Approx(784.0 / 1648.0).epsilon(1e-12));
    CHECK(r.precision * 100 == doctest::Approx(53.15).epsilon(1e-3));
    CHECK(r.recall * 100 == doctest::Approx(47.57).epsilon(1e-3));
    CHECK(r.f * 100 == doctest::Approx(50.21).epsilon(1e-3));

    // single class: tp 195, predicted 292, gold 265
    auto one = prf_from(195, 292, 265);
    CHECK(one.precision * 100 == doctest::Approx(66.78).epsilon(1e-3));
    CHECK(one.recall * 100 == doctest::Approx(73.58).epsilon(1e-3));
    CHECK(one.f * 100 == doctest::Approx(70.02).epsilon(1e-3));

    // empty denominators collapse to zero, not NaN
    auto zero = prf_from(0, 0, 0);
    CHECK(zero.precision == 0.0);
    CHECK(zero.recall == 0.0);
    CHECK(zero.f == 0.0);

    // F lies between P and R
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        long n = 1 + rng() % 50, p = 1 + rng() % 50;
        long tp = rng() % (std::min(n, p) + 1);
        auto x = prf_from(tp, p, n);
        CHECK(x.f >= std::min(x.precision, x.recall) - 1e-12);
        CHECK(x.f <= std::max(x.precision, x.recall) + 1e-12);
    }
}

TEST_CASE("continuity-corrected paired chi-square test") {
    std::vector<bool> same{true, false, true, true, false};
    auto [s0, p0] = mcnemar(same, same);
    CHECK(s0 == 0.0);
    CHECK(p0 == 1.0);

    // b = 15, c = 5: (|10| - 1)^2 / 20 = 4.05
    std::vector<bool> a, b;
    for (int i = 0; i < 15; ++i) { a.push_back(true); b.push_back(false); }
    for (int i = 0; i < 5; ++i) { a.push_back(false); b.push_back(true); }
    for (int i = 0; i < 30; ++i) { a.push_back(true); b.push_back(true); }
    auto [stat, p] = mcnemar(a, b);
    CHECK(stat == doctest::Approx(4.05).epsilon(1e-12));
    CHECK(p == doctest::Approx(0.0441).epsilon(0.02));

    // balanced disagreement: tiny statistic, large p
    std::vector<bool> ba{true, true, false, false}, bb{false, false, true, true};
    auto [s2, p2] = mcnemar(ba, bb);
    CHECK(s2 < 1.0);
    CHECK(p2 > 0.3);

    CHECK_THROWS_AS(mcnemar({true}, {true, false}), std::runtime_error);
}

TEST_CASE("randomization test: identical systems get p = 1") {
    LabelMap gold = {{"d1", S({"A"})}, {"d2", S({"B"})}, {"d3", S({"A", "B"})}};
    LabelMap pred = {{"d1", S({"A"})}, {"d2", {}}, {"d3", S({"B"})}};
    double p = approx_randomization(pred, pred, gold, {"A", "B"}, 99, 5);
    CHECK(p == doctest::Approx(1.0));
    // p can never drop below 1/(shuffles+1)
    LabelMap other = {{"d1", {}}, {"d2", S({"B"})}, {"d3", S({"A", "B"})}};
    double q = approx_randomization(pred, other, gold, {"A", "B"}, 99, 5);
    CHECK(q >= 1.0 / 100.0);
    CHECK(q <= 1.0);
}

TEST_CASE("randomization test matches exhaustive swap enumeration on 6 documents") {
    std::vector<std::string> cats{"A", "B", "C"};
    LabelMap gold = {{"d1", S({"A"})},      {"d2", S({"B"})},      {"d3", S({"A", "C"})},
                     {"d4", S({"C"})},      {"d5", S({"B", "C"})}, {"d6", S({"A"})}};
    LabelMap pa = {{"d1", S({"A"})},        {"d2", S({"B"})},      {"d3", S({"A"})},
                   {"d4", S({"C"})},        {"d5", S({"C"})},      {"d6", S({"B"})}};
    LabelMap pb = {{"d1", S({"B"})},        {"d2", S({"C"})},      {"d3", S({"C"})},
                   {"d4", S({"A", "C"})},   {"d5", S({"B"})},      {"d6", S({"A"})}};

    double observed = std::abs(micro_f_oracle(pa, gold, cats) - micro_f_oracle(pb, gold, cats));
    std::vector<std::string> ids{"d1", "d2", "d3", "d4", "d5", "d6"};
    long exceed = 0;
    for (int mask = 0; mask < 64; ++mask) {
        LabelMap xa, xb;
        for (int i = 0; i < 6; ++i) {
            bool swap = (mask >> i) & 1;
            xa[ids[i]] = swap ? pb.at(ids[i]) : pa.at(ids[i]);
            xb[ids[i]] = swap ? pa.at(ids[i]) : pb.at(ids[i]);
        }
        double stat = std::abs(micro_f_oracle(xa, gold, cats) - micro_f_oracle(xb, gold, cats));
        if (stat >= observed - 1e-12) ++exceed;
    }
    double exact = static_cast<double>(exceed) / 64.0;
    double estimated = approx_randomization(pa, pb, gold, cats, 20000, 42);
    CHECK(std::abs(estimated - exact) <= 0.02);
}

TEST_CASE("set distance for annotation agreement") {
    CHECK(masi_distance(S({"a", "b"}), S({"a", "b"})) == doctest::Approx(0.0));
    CHECK(masi_distance({}, {}) == doctest::Approx(0.0));
    CHECK(masi_distance(S({"a"}), S({"b"})) == doctest::Approx(1.0));
    // subset: jaccard 1/2, monotonicity 2/3 -> distance 2/3
    CHECK(masi_distance(S({"a"}), S({"a", "b"})) == doctest::Approx(2.0 / 3.0));
    // proper overlap: jaccard 1/3, monotonicity 1/3
    CHECK(masi_distance(S({"a", "b"}), S({"b", "c"})) == doctest::Approx(1.0 - 1.0 / 9.0));

    std::mt19937_64 rng(31);
    std::vector<std::string> pool{"a", "b", "c", "d"};
    for (int i = 0; i < 100; ++i) {
        std::set<std::string> x, y;
        for (const auto& s : pool) {
            if (rng() & 1) x.insert(s);
            if (rng() & 1) y.insert(s);
        }
        CHECK(masi_distance(x, y) == doctest::Approx(masi_distance(y, x)));
        CHECK(masi_distance(x, y) == doctest::Approx(masi_oracle(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("two-annotator agreement coefficient") {
    std::vector<AnnotationPair> perfect = {{S({"a"}), S({"a"})}, {S({"b", "c"}), S({"b", "c"})}};
    CHECK(krippendorff_alpha(perfect) == doctest::Approx(1.0));

    // constant annotations: zero expected disagreement, perfect agreement
    std::vector<AnnotationPair> constant = {{S({"a"}), S({"a"})}, {S({"a"}), S({"a"})}};
    CHECK(krippendorff_alpha(constant) == doctest::Approx(1.0));

    CHECK_THROWS_AS(krippendorff_alpha({{S({"a"}), S({"b"})}}), std::runtime_error);

    // 4-item case checked against a from-scratch computation
    std::vector<AnnotationPair> pairs = {{S({"a"}), S({"a", "b"})},
                                         {S({"b"}), S({"b"})},
                                         {S({"a", "c"}), S({"c"})},
                                         {S({"b", "c"}), S({"a"})}};
    double d_o = 0.0;
    for (const auto& pr : pairs) d_o += masi_oracle(pr.first, pr.second);
    d_o /= pairs.size();
    std::vector<std::set<std::string>> pooled;
    for (const auto& pr : pairs) {
        pooled.push_back(pr.first);
        pooled.push_back(pr.second);
    }
    double d_e = 0.0;
    for (size_t u = 0; u < pooled.size(); ++u)
        for (size_t v = 0; v < pooled.size(); ++v)
            if (u != v) d_e += masi_oracle(pooled[u], pooled[v]);
    d_e /= static_cast<double>(pooled.size() * (pooled.size() - 1));
    CHECK(krippendorff_alpha(pairs) == doctest::Approx(1.0 - d_o / d_e).epsilon(1e-9));
}

TEST_CASE("metrics report lists every category plus an overall row") {
    EvalCounts counts;
    counts.documents = 10;
    counts.per_category["Alpha"] = {4, 5, 3};  // gold, predicted, tp
    counts.per_category["Beta"] = {2, 1, 1};
    const std::string path = "test_tmp_metrics.tsv";
    save_metrics_report(counts, path, "# hdr");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# hdr");
    std::getline(in, line);
    CHECK(line == "category\tTP\tFN\tTN\tFP\tP\tR\tF");
    std::getline(in, line);
    // Alpha: tp 3, fn 1, fp 2, tn 10-4-2=4, P 60%, R 75%, F ~66.67%
    CHECK(line == "Alpha\t3\t1\t4\t2\t60.00\t75.00\t66.67");
    std::getline(in, line);
    CHECK(line == "Beta\t1\t1\t8\t0\t100.00\t50.00\t66.67");
    std::getline(in, line);
    // Overall: tp 4, fn 2, fp 2, tn 2*10-6-2=12
    CHECK(line == "Overall\t4\t2\t12\t2\t66.67\t66.67\t66.67");
    std::remove(path.c_str());
}
