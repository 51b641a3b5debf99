#ifndef CAUSELEX_LEARNER_HPP
#define CAUSELEX_LEARNER_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "causelex/features.hpp"

namespace causelex {

// Linear decision function w.x + b; the binary model of every scheme.
struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;

    double decision(const FeatureVector& x) const;
};

struct SvmParams {
    double C = 1.0;
    int epochs = 100;
    std::uint64_t seed = 1;
};

// Soft-margin hinge objective (1/2)|w|^2 + C sum(xi), minimized by stochastic
// subgradient descent with step 1/(lambda t), lambda = 1/(C m); the bias is
// treated as a regularized intercept. Bit-for-bit deterministic given the seed.
LinearModel train_linear_reference(const std::vector<FeatureVector>& xs,
                                   const std::vector<int>& ys, size_t dim,
                                   const SvmParams& params);

// One-vs-rest reduction over the linear learner; argmax decision value,
// ties broken toward the smallest class id.
struct MulticlassModel {
    std::vector<int> class_ids;  // sorted ascending
    std::vector<LinearModel> models;

    int predict(const FeatureVector& x) const;
};

MulticlassModel train_multiclass(const std::vector<FeatureVector>& xs, const std::vector<int>& ys,
                                 size_t dim, const SvmParams& params);

void write_linear_model(std::ostream& out, const LinearModel& m);
LinearModel read_linear_model(std::istream& in);
void write_multiclass_model(std::ostream& out, const MulticlassModel& m);
MulticlassModel read_multiclass_model(std::istream& in);

}  // namespace causelex

#endif
