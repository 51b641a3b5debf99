#ifndef CAUSELEX_EVAL_HPP
#define CAUSELEX_EVAL_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace causelex {

using LabelMap = std::map<std::string, std::set<std::string>>;  // doc id -> categories

struct CategoryCounts {
    long gold = 0;       // n_i
    long predicted = 0;  // p_i
    long tp = 0;
};

struct EvalCounts {
    std::map<std::string, CategoryCounts> per_category;
    long documents = 0;

    void merge(const EvalCounts& other);
};

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f = 0.0;
};

EvalCounts count(const LabelMap& predictions, const LabelMap& gold,
                 const std::vector<std::string>& categories);

// Aggregate counts first, then P = tp/p, R = tp/n, F = 2PR/(P+R); 0/0 -> 0.
Prf micro_prf(const EvalCounts& counts);
Prf prf_from(long tp, long predicted, long gold);

// Continuity-corrected McNemar over parallel correctness indicators.
// Returns (statistic, p); both-correct/both-wrong cells don't contribute.
std::pair<double, double> mcnemar(const std::vector<bool>& correct_a,
                                  const std::vector<bool>& correct_b);

// Upper tail of chi-square with one degree of freedom.
double chi_square_1df_sf(double x);

// Stratified approximate randomization on |micro-F(A) - micro-F(B)|: each
// shuffle swaps the two systems' label sets per document with probability 1/2.
double approx_randomization(const LabelMap& preds_a, const LabelMap& preds_b, const LabelMap& gold,
                            const std::vector<std::string>& categories, int shuffles,
                            std::uint64_t rng_seed);

// 1 - Jaccard * monotonicity (1 equal, 2/3 subset, 1/3 overlap, 0 disjoint).
double masi_distance(const std::set<std::string>& a, const std::set<std::string>& b);

struct AnnotationPair {
    std::set<std::string> first;
    std::set<std::string> second;
};

double krippendorff_alpha(const std::vector<AnnotationPair>& pairs);

// TSV report: category, TP, FN, TN, FP, P, R, F rows plus an Overall row.
void save_metrics_report(const EvalCounts& counts, const std::string& path,
                         const std::string& header);

}  // namespace causelex

#endif
