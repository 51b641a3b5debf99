#include "causelex/learner.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace causelex {

double LinearModel::decision(const FeatureVector& x) const {
    double d = bias;
    for (const auto& [idx, v] : x)
        if (idx < weights.size()) d += weights[idx] * v;
    return d;
}

LinearModel train_linear_reference(const std::vector<FeatureVector>& xs,
                                   const std::vector<int>& ys, size_t dim,
                                   const SvmParams& params) {
    if (xs.empty()) throw std::runtime_error("empty training set");
    if (xs.size() != ys.size()) throw std::runtime_error("example/label count mismatch");
    for (int y : ys)
        if (y != 1 && y != -1) throw std::runtime_error("binary labels must be +1/-1");
    if (params.C <= 0.0) throw std::invalid_argument("C must be positive");

    size_t m = xs.size();
    double lambda = 1.0 / (params.C * static_cast<double>(m));

    LinearModel model;
    model.weights.assign(dim, 0.0);
    std::vector<size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(params.seed);

    long t = 0;
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (size_t i : order) {
            ++t;
            double eta = 1.0 / (lambda * static_cast<double>(t));
            double y = ys[i];
            double margin = y * model.decision(xs[i]);
            // the intercept is regularized along with the weights; an
            // unregularized intercept at this step size takes a first step of
            // C*m and then drifts back only harmonically
            double shrink = 1.0 - eta * lambda;
            for (double& w : model.weights) w *= shrink;
            model.bias *= shrink;
            if (margin < 1.0) {
                for (const auto& [idx, v] : xs[i]) model.weights[idx] += eta * y * v;
                model.bias += eta * y;
            }
        }
    }
    return model;
}

int MulticlassModel::predict(const FeatureVector& x) const {
    if (class_ids.empty()) throw std::runtime_error("multiclass model has no classes");
    if (class_ids.size() == 1) return class_ids[0];
    int best = class_ids[0];
    double best_d = models[0].decision(x);
    for (size_t k = 1; k < class_ids.size(); ++k) {
        double d = models[k].decision(x);
        if (d > best_d) {  // strict: ties go to the smallest class id
            best_d = d;
            best = class_ids[k];
        }
    }
    return best;
}

MulticlassModel train_multiclass(const std::vector<FeatureVector>& xs, const std::vector<int>& ys,
                                 size_t dim, const SvmParams& params) {
    if (xs.empty()) throw std::runtime_error("empty training set");
    if (xs.size() != ys.size()) throw std::runtime_error("example/label count mismatch");

    MulticlassModel out;
    for (int y : ys)
        if (std::find(out.class_ids.begin(), out.class_ids.end(), y) == out.class_ids.end())
            out.class_ids.push_back(y);
    std::sort(out.class_ids.begin(), out.class_ids.end());

    if (out.class_ids.size() == 1) return out;  // constant predictor, no models needed
    for (size_t k = 0; k < out.class_ids.size(); ++k) {
        std::vector<int> binary(ys.size());
        for (size_t i = 0; i < ys.size(); ++i) binary[i] = ys[i] == out.class_ids[k] ? 1 : -1;
        SvmParams p = params;
        p.seed = params.seed + k;  // independent stream per one-vs-rest task
        out.models.push_back(train_linear_reference(xs, binary, dim, p));
    }
    return out;
}

void write_linear_model(std::ostream& out, const LinearModel& m) {
    long nonzero = 0;
    for (double w : m.weights)
        if (w != 0.0) ++nonzero;
    out << "linear " << m.weights.size() << " " << nonzero << " " << std::hexfloat << m.bias
        << std::defaultfloat << "\n";
    for (size_t i = 0; i < m.weights.size(); ++i)
        if (m.weights[i] != 0.0)
            out << i << " " << std::hexfloat << m.weights[i] << std::defaultfloat << "\n";
}

LinearModel read_linear_model(std::istream& in) {
    std::string tag, bias_s;
    size_t dim = 0;
    long nonzero = 0;
    if (!(in >> tag >> dim >> nonzero >> bias_s) || tag != "linear")
        throw std::runtime_error("malformed linear model block");
    LinearModel m;
    m.bias = std::strtod(bias_s.c_str(), nullptr);
    m.weights.assign(dim, 0.0);
    for (long i = 0; i < nonzero; ++i) {
        size_t idx;
        std::string w;
        if (!(in >> idx >> w) || idx >= dim)
            throw std::runtime_error("malformed linear model weight entry");
        m.weights[idx] = std::strtod(w.c_str(), nullptr);
    }
    return m;
}

void write_multiclass_model(std::ostream& out, const MulticlassModel& m) {
    out << "multiclass " << m.class_ids.size() << "\n";
    for (int id : m.class_ids) out << id << " ";
    out << "\n";
    for (const auto& lm : m.models) write_linear_model(out, lm);
}

MulticlassModel read_multiclass_model(std::istream& in) {
    std::string tag;
    size_t n = 0;
    if (!(in >> tag >> n) || tag != "multiclass")
        throw std::runtime_error("malformed multiclass model block");
    MulticlassModel m;
    m.class_ids.resize(n);
    for (auto& id : m.class_ids)
        if (!(in >> id)) throw std::runtime_error("truncated class id list");
    if (n > 1)
        for (size_t k = 0; k < n; ++k) m.models.push_back(read_linear_model(in));
    return m;
}

}  // namespace causelex
