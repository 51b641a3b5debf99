#include "causelex/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <stdexcept>

namespace causelex {

void EvalCounts::merge(const EvalCounts& other) {
    documents += other.documents;
    for (const auto& [cat, c] : other.per_category) {
        auto& mine = per_category[cat];
        mine.gold += c.gold;
        mine.predicted += c.predicted;
        mine.tp += c.tp;
    }
}

EvalCounts count(const LabelMap& predictions, const LabelMap& gold,
                 const std::vector<std::string>& categories) {
    if (predictions.size() != gold.size())
        throw std::runtime_error("prediction/gold document sets differ in size");
    for (const auto& [id, labels] : gold)
        if (!predictions.count(id))
            throw std::runtime_error("document '" + id + "' has gold labels but no prediction");

    EvalCounts out;
    out.documents = static_cast<long>(gold.size());
    for (const auto& cat : categories) out.per_category[cat];  // keep zero rows
    for (const auto& [id, g] : gold) {
        const auto& p = predictions.at(id);
        for (const auto& cat : categories) {
            bool in_gold = g.count(cat) > 0;
            bool in_pred = p.count(cat) > 0;
            auto& c = out.per_category[cat];
            if (in_gold) ++c.gold;
            if (in_pred) ++c.predicted;
            if (in_gold && in_pred) ++c.tp;
        }
    }
    return out;
}

Prf prf_from(long tp, long predicted, long gold) {
    Prf r;
    r.precision = predicted == 0 ? 0.0 : static_cast<double>(tp) / predicted;
    r.recall = gold == 0 ? 0.0 : static_cast<double>(tp) / gold;
    r.f = (r.precision + r.recall) == 0.0
              ? 0.0
              : 2.0 * r.precision * r.recall / (r.precision + r.recall);
    return r;
}

Prf micro_prf(const EvalCounts& counts) {
    long tp = 0, p = 0, n = 0;
    for (const auto& [cat, c] : counts.per_category) {
        tp += c.tp;
        p += c.predicted;
        n += c.gold;
    }
    return prf_from(tp, p, n);
}

double chi_square_1df_sf(double x) {
    if (x <= 0.0) return 1.0;
    return std::erfc(std::sqrt(x / 2.0));
}

std::pair<double, double> mcnemar(const std::vector<bool>& correct_a,
                                  const std::vector<bool>& correct_b) {
    if (correct_a.size() != correct_b.size())
        throw std::runtime_error("correctness vectors differ in length");
    long b = 0, c = 0;
    for (size_t i = 0; i < correct_a.size(); ++i) {
        if (correct_a[i] && !correct_b[i]) ++b;
        if (!correct_a[i] && correct_b[i]) ++c;
    }
    if (b + c == 0) return {0.0, 1.0};
    double diff = std::abs(static_cast<double>(b - c)) - 1.0;
    if (diff < 0.0) diff = 0.0;
    double stat = diff * diff / static_cast<double>(b + c);
    return {stat, chi_square_1df_sf(stat)};
}

namespace {

struct DocTally {
    long tp_a = 0, p_a = 0;
    long tp_b = 0, p_b = 0;
    long gold = 0;
};

double micro_f_from_tallies(const std::vector<DocTally>& tallies, const std::vector<bool>& swap,
                            bool system_a) {
    long tp = 0, p = 0, n = 0;
    for (size_t i = 0; i < tallies.size(); ++i) {
        bool take_a = system_a != swap[i];
        tp += take_a ? tallies[i].tp_a : tallies[i].tp_b;
        p += take_a ? tallies[i].p_a : tallies[i].p_b;
        n += tallies[i].gold;
    }
    return prf_from(tp, p, n).f;
}

}  // namespace

double approx_randomization(const LabelMap& preds_a, const LabelMap& preds_b, const LabelMap& gold,
                            const std::vector<std::string>& categories, int shuffles,
                            std::uint64_t rng_seed) {
    if (shuffles < 1) throw std::invalid_argument("shuffles must be >= 1");

    std::vector<DocTally> tallies;
    tallies.reserve(gold.size());
    for (const auto& [id, g] : gold) {
        auto ita = preds_a.find(id);
        auto itb = preds_b.find(id);
        if (ita == preds_a.end() || itb == preds_b.end())
            throw std::runtime_error("document '" + id + "' missing from a prediction set");
        DocTally t;
        for (const auto& cat : categories) {
            bool in_gold = g.count(cat) > 0;
            if (in_gold) ++t.gold;
            if (ita->second.count(cat)) {
                ++t.p_a;
                if (in_gold) ++t.tp_a;
            }
            if (itb->second.count(cat)) {
                ++t.p_b;
                if (in_gold) ++t.tp_b;
            }
        }
        tallies.push_back(t);
    }

    std::vector<bool> no_swap(tallies.size(), false);
    double observed = std::abs(micro_f_from_tallies(tallies, no_swap, true) -
                               micro_f_from_tallies(tallies, no_swap, false));

    long exceed = 0;
    std::vector<bool> swap(tallies.size());
    for (int s = 0; s < shuffles; ++s) {
        // counter-based seeding: each shuffle's stream is independent of
        // execution order, so parallel and sequential runs agree
        std::mt19937_64 rng(rng_seed + static_cast<std::uint64_t>(s) + 1);
        for (size_t i = 0; i < swap.size(); ++i) swap[i] = (rng() & 1) != 0;
        double stat = std::abs(micro_f_from_tallies(tallies, swap, true) -
                               micro_f_from_tallies(tallies, swap, false));
        if (stat >= observed - 1e-12) ++exceed;
    }
    return static_cast<double>(1 + exceed) / static_cast<double>(shuffles + 1);
}

double masi_distance(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::vector<std::string> inter;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
    size_t uni = a.size() + b.size() - inter.size();
    double jaccard = static_cast<double>(inter.size()) / static_cast<double>(uni);
    double m;
    if (a == b)
        m = 1.0;
    else if (inter.size() == a.size() || inter.size() == b.size())
        m = 2.0 / 3.0;  // one set contains the other
    else if (!inter.empty())
        m = 1.0 / 3.0;
    else
        m = 0.0;
    return 1.0 - jaccard * m;
}

double krippendorff_alpha(const std::vector<AnnotationPair>& pairs) {
    if (pairs.size() < 2) throw std::runtime_error("agreement needs at least 2 items");

    double d_o = 0.0;
    for (const auto& p : pairs) d_o += masi_distance(p.first, p.second);
    d_o /= static_cast<double>(pairs.size());

    // expected disagreement over all ordered pairs of distinct values in the
    // pooled 2n annotations
    std::vector<const std::set<std::string>*> values;
    for (const auto& p : pairs) {
        values.push_back(&p.first);
        values.push_back(&p.second);
    }
    double d_e = 0.0;
    size_t m = values.size();
    for (size_t u = 0; u < m; ++u)
        for (size_t v = 0; v < m; ++v)
            if (u != v) d_e += masi_distance(*values[u], *values[v]);
    d_e /= static_cast<double>(m) * static_cast<double>(m - 1);

    if (d_e == 0.0) {
        if (d_o == 0.0) return 1.0;
        throw std::runtime_error("zero expected disagreement with nonzero observed disagreement");
    }
    return 1.0 - d_o / d_e;
}

void save_metrics_report(const EvalCounts& counts, const std::string& path,
                         const std::string& header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write metrics report: " + path);
    if (!header.empty()) out << header << "\n";
    out << "category\tTP\tFN\tTN\tFP\tP\tR\tF\n";
    out << std::fixed << std::setprecision(2);
    long tp_sum = 0, p_sum = 0, n_sum = 0;
    for (const auto& [cat, c] : counts.per_category) {
        long fp = c.predicted - c.tp;
        long fn = c.gold - c.tp;
        long tn = counts.documents - c.gold - fp;
        Prf r = prf_from(c.tp, c.predicted, c.gold);
        out << cat << "\t" << c.tp << "\t" << fn << "\t" << tn << "\t" << fp << "\t"
            << r.precision * 100 << "\t" << r.recall * 100 << "\t" << r.f * 100 << "\n";
        tp_sum += c.tp;
        p_sum += c.predicted;
        n_sum += c.gold;
    }
    long fp_sum = p_sum - tp_sum;
    long fn_sum = n_sum - tp_sum;
    long tn_sum = counts.documents * static_cast<long>(counts.per_category.size()) - n_sum - fp_sum;
    Prf r = prf_from(tp_sum, p_sum, n_sum);
    out << "Overall\t" << tp_sum << "\t" << fn_sum << "\t" << tn_sum << "\t" << fp_sum << "\t"
        << r.precision * 100 << "\t" << r.recall * 100 << "\t" << r.f * 100 << "\n";
}

}  // namespace causelex
