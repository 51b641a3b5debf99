#ifndef CAUSELEX_MULTILABEL_HPP
#define CAUSELEX_MULTILABEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "causelex/corpus.hpp"
#include "causelex/eval.hpp"
#include "causelex/features.hpp"
#include "causelex/learner.hpp"

namespace causelex {

// Feature selection runs per classification task (gain measured against that
// task's own labels), so every binary/multiclass model carries the feature
// space it was trained in.

struct OvaModel {
    std::vector<std::string> categories;
    std::vector<FeatureSpace> spaces;  // parallel to categories
    std::vector<LinearModel> models;
    double theta = 0.0;
    int percent = 100;
};

struct MetaModel {
    std::vector<std::string> categories;
    std::vector<FeatureSpace> spaces;
    std::vector<LinearModel> models;
    FeatureSpace cardinality_space;
    MulticlassModel cardinality;  // class ids = label counts seen in training
    int percent = 100;
};

struct PrunedSetsModel {
    std::vector<std::set<std::string>> label_sets;  // pseudo-label id = index
    FeatureSpace space;
    std::vector<MulticlassModel> ensemble;
    int p = 1;
    int b = 1;
    double t = 0.5;
    double sample_fraction = 1.0;
    int percent = 100;
};

// Gold labels of the training docs drive all three schemes; docs without a
// label set are rejected.
OvaModel ova_train(const Corpus& train, const FeatureSpace& base_space, int percent, double theta,
                   const SvmParams& params,
                   const std::vector<std::string>* categories = nullptr);
std::vector<double> ova_decisions(const OvaModel& model, const Document& doc);
std::set<std::string> ova_predict(const OvaModel& model, const Document& doc);
std::set<std::string> ova_predict_at(const OvaModel& model, const std::vector<double>& decisions,
                                     double theta);

MetaModel metalabeler_train(const Corpus& train, const FeatureSpace& base_space, int percent,
                            const SvmParams& params,
                            const std::vector<std::string>* categories = nullptr);
std::set<std::string> metalabeler_predict(const MetaModel& model, const Document& doc);

PrunedSetsModel prunedsets_train(const Corpus& train, const FeatureSpace& base_space, int percent,
                                 int p, int b, double t, int ensemble_size, double sample_fraction,
                                 const SvmParams& params, std::uint64_t rng_seed);
std::map<std::string, int> prunedsets_votes(const PrunedSetsModel& model, const Document& doc);
std::set<std::string> prunedsets_predict(const PrunedSetsModel& model, const Document& doc);
std::set<std::string> prunedsets_predict_at(const PrunedSetsModel& model, const Document& doc,
                                            double t);

// Label-set decomposition of pruned sets, exposed for direct testing:
// returns pseudo-label ids plus one (doc index, pseudo-label) pair per
// training instance kept (originals once, pruned instances once per
// accepted subset of their label set).
struct PrunedSetsDecomposition {
    std::vector<std::set<std::string>> label_sets;
    std::vector<std::pair<size_t, int>> instances;
};
PrunedSetsDecomposition prunedsets_decompose(const std::vector<std::set<std::string>>& gold, int p,
                                             int b);

enum class Scheme { Ova, Meta, PrunedSets };

struct SchemeConfig {
    Scheme scheme = Scheme::Ova;
    int percent = 100;
    double theta = 0.0;
    int p = 10;
    int b = 2;
    double t = 0.5;
    int ensemble_size = 10;
    double sample_fraction = 0.63;
    SvmParams svm;
};

struct TunePoint {
    SchemeConfig config;
    Prf dev;
};

// Exhaustive grid search maximizing micro-F on dev; ties keep the earliest
// grid point. OVA grid: percent 10..100 x theta -2.0..2.0 (21 values).
// Pruned sets grid: b {2,3,5} x p {3,5,10} x t {0.1..1.0} x percent 10..100.
SchemeConfig tune(const SchemeConfig& base, const Corpus& train, const Corpus& dev,
                  const FeatureSpace& base_space, std::vector<TunePoint>* report = nullptr);

void save_tuning_report(const std::vector<TunePoint>& report, const std::string& path,
                        const std::string& header);

// k-fold over eval_pool with base_train added to every training split;
// counts aggregated over the whole pool before any ratio is taken.
EvalCounts cross_validate_augmented(const Corpus& base_train, const Corpus& eval_pool, int k,
                                    const SchemeConfig& config,
                                    const std::set<std::string>& stopwords, const Lexicon* lexicon,
                                    bool lexicon_features);

struct MultiLabelModel {
    Scheme scheme = Scheme::Ova;
    std::optional<OvaModel> ova;
    std::optional<MetaModel> meta;
    std::optional<PrunedSetsModel> pruned;

    std::set<std::string> predict(const Document& doc) const;
};

MultiLabelModel train_scheme(const Corpus& train, const FeatureSpace& base_space,
                             const SchemeConfig& config);

void save_model(const MultiLabelModel& model, const std::string& path, const std::string& header);
MultiLabelModel load_model(const std::string& path);

}  // namespace causelex

#endif
