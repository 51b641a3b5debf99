#include "causelex/multilabel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "causelex/util.hpp"

namespace causelex {

namespace {

const std::set<std::string>& gold_of(const Document& doc) {
    if (!doc.labels) throw std::runtime_error("document '" + doc.id + "' carries no gold labels");
    return *doc.labels;
}

std::vector<std::string> observed_categories(const Corpus& train) {
    std::set<std::string> cats;
    for (const auto& doc : train)
        for (const auto& c : gold_of(doc)) cats.insert(c);
    return {cats.begin(), cats.end()};
}

std::vector<FeatureVector> vectorize_all(const Corpus& docs, const FeatureSpace& space) {
    std::vector<FeatureVector> out;
    out.reserve(docs.size());
    for (const auto& doc : docs) out.push_back(vectorize(doc, space));
    return out;
}

// One binary task: select features against the task's own labels, train.
std::pair<FeatureSpace, LinearModel> train_binary_task(const Corpus& train,
                                                       const FeatureSpace& base_space, int percent,
                                                       const std::vector<int>& labels01,
                                                       const SvmParams& params) {
    FeatureSpace space = select_features(base_space, train, labels01, percent);
    auto xs = vectorize_all(train, space);
    std::vector<int> ys(labels01.size());
    for (size_t i = 0; i < labels01.size(); ++i) ys[i] = labels01[i] ? 1 : -1;
    LinearModel lm = train_linear_reference(xs, ys, space.size(), params);
    return {std::move(space), std::move(lm)};
}

constexpr double kVoteEps = 1e-9;

}  // namespace

OvaModel ova_train(const Corpus& train, const FeatureSpace& base_space, int percent, double theta,
                   const SvmParams& params, const std::vector<std::string>* categories) {
    OvaModel model;
    model.categories = categories ? *categories : observed_categories(train);
    model.theta = theta;
    model.percent = percent;
    for (size_t k = 0; k < model.categories.size(); ++k) {
        std::vector<int> labels01(train.size());
        for (size_t i = 0; i < train.size(); ++i)
            labels01[i] = gold_of(train[i]).count(model.categories[k]) ? 1 : 0;
        SvmParams p = params;
        p.seed = params.seed + k;
        auto [space, lm] = train_binary_task(train, base_space, percent, labels01, p);
        model.spaces.push_back(std::move(space));
        model.models.push_back(std::move(lm));
    }
    return model;
}

std::vector<double> ova_decisions(const OvaModel& model, const Document& doc) {
    std::vector<double> out;
    out.reserve(model.categories.size());
    for (size_t k = 0; k < model.categories.size(); ++k)
        out.push_back(model.models[k].decision(vectorize(doc, model.spaces[k])));
    return out;
}

std::set<std::string> ova_predict_at(const OvaModel& model, const std::vector<double>& decisions,
                                     double theta) {
    std::set<std::string> out;
    for (size_t k = 0; k < model.categories.size(); ++k)
        if (decisions[k] > theta) out.insert(model.categories[k]);
    return out;
}

std::set<std::string> ova_predict(const OvaModel& model, const Document& doc) {
    return ova_predict_at(model, ova_decisions(model, doc), model.theta);
}

MetaModel metalabeler_train(const Corpus& train, const FeatureSpace& base_space, int percent,
                            const SvmParams& params, const std::vector<std::string>* categories) {
    MetaModel model;
    model.categories = categories ? *categories : observed_categories(train);
    model.percent = percent;
    for (size_t k = 0; k < model.categories.size(); ++k) {
        std::vector<int> labels01(train.size());
        for (size_t i = 0; i < train.size(); ++i)
            labels01[i] = gold_of(train[i]).count(model.categories[k]) ? 1 : 0;
        SvmParams p = params;
        p.seed = params.seed + k;
        auto [space, lm] = train_binary_task(train, base_space, percent, labels01, p);
        model.spaces.push_back(std::move(space));
        model.models.push_back(std::move(lm));
    }

    std::vector<int> counts(train.size());
    for (size_t i = 0; i < train.size(); ++i)
        counts[i] = static_cast<int>(gold_of(train[i]).size());
    model.cardinality_space = select_features(base_space, train, counts, percent);
    SvmParams p = params;
    p.seed = params.seed + 10000;
    model.cardinality = train_multiclass(vectorize_all(train, model.cardinality_space), counts,
                                         model.cardinality_space.size(), p);
    return model;
}

std::set<std::string> metalabeler_predict(const MetaModel& model, const Document& doc) {
    int k = model.cardinality.predict(vectorize(doc, model.cardinality_space));
    std::vector<std::pair<double, std::string>> positives;
    for (size_t i = 0; i < model.categories.size(); ++i) {
        double d = model.models[i].decision(vectorize(doc, model.spaces[i]));
        if (d > 0.0) positives.push_back({d, model.categories[i]});
    }
    std::sort(positives.begin(), positives.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::set<std::string> out;
    for (size_t i = 0; i < positives.size() && static_cast<int>(i) < k; ++i)
        out.insert(positives[i].second);
    return out;
}

PrunedSetsDecomposition prunedsets_decompose(const std::vector<std::set<std::string>>& gold, int p,
                                             int b) {
    if (p < 1 || b < 1) throw std::invalid_argument("pruned-sets p and b must be >= 1");

    std::map<std::set<std::string>, long> freq;
    for (const auto& g : gold) ++freq[g];

    auto superset_count = [&](const std::set<std::string>& s) {
        long n = 0;
        for (const auto& [set, c] : freq)
            if (std::includes(set.begin(), set.end(), s.begin(), s.end())) n += c;
        return n;
    };

    std::map<std::set<std::string>, int> id_of;  // deterministic pseudo-label order
    for (const auto& [set, c] : freq)
        if (c >= p) id_of.emplace(set, 0);

    // decompose each pruned instance's set into proper subsets of size >= b;
    // a subset survives if enough original sets contain it
    std::set<std::set<std::string>> accepted_subsets;
    for (const auto& [set, c] : freq) {
        if (c >= p) continue;
        std::vector<std::string> elems(set.begin(), set.end());
        size_t n = elems.size();
        if (n == 0 || static_cast<size_t>(b) >= n) continue;
        for (size_t mask = 1; mask + 1 < (1ull << n); ++mask) {
            if (static_cast<int>(std::popcount(mask)) < b) continue;
            std::set<std::string> sub;
            for (size_t j = 0; j < n; ++j)
                if (mask & (1ull << j)) sub.insert(elems[j]);
            if (superset_count(sub) >= p) accepted_subsets.insert(std::move(sub));
        }
    }
    for (const auto& s : accepted_subsets) id_of.emplace(s, 0);

    if (id_of.empty()) throw std::runtime_error("no accepted label sets");

    PrunedSetsDecomposition out;
    int next = 0;
    for (auto& [set, id] : id_of) {
        id = next++;
        out.label_sets.push_back(set);
    }

    for (size_t i = 0; i < gold.size(); ++i) {
        if (freq.at(gold[i]) >= p) {
            out.instances.push_back({i, id_of.at(gold[i])});
        } else {
            for (const auto& s : accepted_subsets)
                if (s.size() < gold[i].size() &&
                    std::includes(gold[i].begin(), gold[i].end(), s.begin(), s.end()))
                    out.instances.push_back({i, id_of.at(s)});
        }
    }
    return out;
}

PrunedSetsModel prunedsets_train(const Corpus& train, const FeatureSpace& base_space, int percent,
                                 int p, int b, double t, int ensemble_size, double sample_fraction,
                                 const SvmParams& params, std::uint64_t rng_seed) {
    if (ensemble_size < 1) throw std::invalid_argument("ensemble size must be >= 1");
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("vote threshold must lie in (0,1]");
    if (!(sample_fraction > 0.0 && sample_fraction <= 1.0))
        throw std::invalid_argument("sample fraction must lie in (0,1]");

    std::vector<std::set<std::string>> gold;
    gold.reserve(train.size());
    for (const auto& doc : train) gold.push_back(gold_of(doc));
    auto decomp = prunedsets_decompose(gold, p, b);

    Corpus kept;
    std::vector<int> pseudo;
    for (const auto& [doc_idx, id] : decomp.instances) {
        kept.push_back(train[doc_idx]);
        pseudo.push_back(id);
    }

    PrunedSetsModel model;
    model.label_sets = decomp.label_sets;
    model.p = p;
    model.b = b;
    model.t = t;
    model.sample_fraction = sample_fraction;
    model.percent = percent;
    model.space = select_features(base_space, kept, pseudo, percent);

    auto xs = vectorize_all(kept, model.space);
    size_t n = kept.size();
    size_t take = static_cast<size_t>(std::llround(sample_fraction * static_cast<double>(n)));
    take = std::clamp<size_t>(take, 1, n);

    for (int m = 0; m < ensemble_size; ++m) {
        std::vector<size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::mt19937_64 rng(rng_seed + static_cast<std::uint64_t>(m) + 1);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<FeatureVector> sx;
        std::vector<int> sy;
        for (size_t i = 0; i < take; ++i) {
            sx.push_back(xs[order[i]]);
            sy.push_back(pseudo[order[i]]);
        }
        SvmParams sp = params;
        sp.seed = params.seed + 20000 + static_cast<std::uint64_t>(m) * 100;
        model.ensemble.push_back(train_multiclass(sx, sy, model.space.size(), sp));
    }
    return model;
}

std::map<std::string, int> prunedsets_votes(const PrunedSetsModel& model, const Document& doc) {
    FeatureVector x = vectorize(doc, model.space);
    std::map<std::string, int> votes;
    for (const auto& m : model.ensemble) {
        int id = m.predict(x);
        for (const auto& cat : model.label_sets.at(static_cast<size_t>(id))) ++votes[cat];
    }
    return votes;
}

std::set<std::string> prunedsets_predict_at(const PrunedSetsModel& model, const Document& doc,
                                            double t) {
    auto votes = prunedsets_votes(model, doc);
    double m = static_cast<double>(model.ensemble.size());
    std::set<std::string> out;
    for (const auto& [cat, v] : votes)
        if (static_cast<double>(v) / m >= t - kVoteEps) out.insert(cat);
    return out;
}

std::set<std::string> prunedsets_predict(const PrunedSetsModel& model, const Document& doc) {
    return prunedsets_predict_at(model, doc, model.t);
}

std::set<std::string> MultiLabelModel::predict(const Document& doc) const {
    switch (scheme) {
        case Scheme::Ova: return ova_predict(*ova, doc);
        case Scheme::Meta: return metalabeler_predict(*meta, doc);
        case Scheme::PrunedSets: return prunedsets_predict(*pruned, doc);
    }
    throw std::runtime_error("unknown scheme");
}

MultiLabelModel train_scheme(const Corpus& train, const FeatureSpace& base_space,
                             const SchemeConfig& config) {
    MultiLabelModel model;
    model.scheme = config.scheme;
    switch (config.scheme) {
        case Scheme::Ova:
            model.ova = ova_train(train, base_space, config.percent, config.theta, config.svm);
            break;
        case Scheme::Meta:
            model.meta = metalabeler_train(train, base_space, config.percent, config.svm);
            break;
        case Scheme::PrunedSets:
            model.pruned = prunedsets_train(train, base_space, config.percent, config.p, config.b,
                                            config.t, config.ensemble_size, config.sample_fraction,
                                            config.svm, config.svm.seed);
            break;
    }
    return model;
}

namespace {

Prf dev_prf(const LabelMap& preds, const Corpus& dev, const std::vector<std::string>& cats) {
    LabelMap gold;
    for (const auto& doc : dev) gold[doc.id] = gold_of(doc);
    return micro_prf(count(preds, gold, cats));
}

std::vector<int> percent_grid() {
    return {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
}

std::vector<double> theta_grid() {
    std::vector<double> out;
    for (int i = 0; i <= 20; ++i) out.push_back(-2.0 + 0.2 * i);
    return out;
}

}  // namespace

SchemeConfig tune(const SchemeConfig& base, const Corpus& train, const Corpus& dev,
                  const FeatureSpace& base_space, std::vector<TunePoint>* report) {
    if (train.empty() || dev.empty()) throw std::runtime_error("tuning needs train and dev data");
    auto cats = observed_categories(train);

    std::vector<TunePoint> points;
    if (base.scheme == Scheme::Ova) {
        for (int percent : percent_grid()) {
            OvaModel model = ova_train(train, base_space, percent, 0.0, base.svm, &cats);
            std::vector<std::vector<double>> decisions;
            for (const auto& doc : dev) decisions.push_back(ova_decisions(model, doc));
            for (double theta : theta_grid()) {
                LabelMap preds;
                for (size_t i = 0; i < dev.size(); ++i)
                    preds[dev[i].id] = ova_predict_at(model, decisions[i], theta);
                TunePoint pt;
                pt.config = base;
                pt.config.percent = percent;
                pt.config.theta = theta;
                pt.dev = dev_prf(preds, dev, cats);
                points.push_back(pt);
            }
        }
    } else if (base.scheme == Scheme::Meta) {
        for (int percent : percent_grid()) {
            MetaModel model = metalabeler_train(train, base_space, percent, base.svm, &cats);
            LabelMap preds;
            for (const auto& doc : dev) preds[doc.id] = metalabeler_predict(model, doc);
            TunePoint pt;
            pt.config = base;
            pt.config.percent = percent;
            pt.dev = dev_prf(preds, dev, cats);
            points.push_back(pt);
        }
    } else {
        const std::vector<int> bs{2, 3, 5}, ps{3, 5, 10};
        std::vector<double> ts;
        for (int i = 1; i <= 10; ++i) ts.push_back(0.1 * i);
        auto pg = percent_grid();
        // grid order is (b, p, t, percent); models depend only on (b, p,
        // percent), so train once per triple and sweep t over cached votes
        std::map<std::tuple<int, int, size_t, int>, Prf> prf_at;
        for (int b : bs) {
            for (int p : ps) {
                for (int percent : pg) {
                    bool feasible = true;
                    std::vector<std::map<std::string, int>> votes;
                    int m = base.ensemble_size;
                    try {
                        PrunedSetsModel model =
                            prunedsets_train(train, base_space, percent, p, b, 1.0,
                                             base.ensemble_size, base.sample_fraction, base.svm,
                                             base.svm.seed);
                        for (const auto& doc : dev) votes.push_back(prunedsets_votes(model, doc));
                        m = static_cast<int>(model.ensemble.size());
                    } catch (const std::runtime_error&) {
                        feasible = false;  // e.g. no label set meets support at this p
                    }
                    for (size_t ti = 0; ti < ts.size(); ++ti) {
                        Prf prf{};
                        if (feasible) {
                            LabelMap preds;
                            for (size_t i = 0; i < dev.size(); ++i) {
                                std::set<std::string> s;
                                for (const auto& [cat, v] : votes[i])
                                    if (static_cast<double>(v) / m >= ts[ti] - kVoteEps)
                                        s.insert(cat);
                                preds[dev[i].id] = std::move(s);
                            }
                            prf = dev_prf(preds, dev, cats);
                        }
                        prf_at[{b, p, ti, percent}] = prf;
                    }
                }
            }
        }
        for (int b : bs)
            for (int p : ps)
                for (size_t ti = 0; ti < ts.size(); ++ti)
                    for (int percent : pg) {
                        TunePoint pt;
                        pt.config = base;
                        pt.config.b = b;
                        pt.config.p = p;
                        pt.config.t = ts[ti];
                        pt.config.percent = percent;
                        pt.dev = prf_at.at({b, p, ti, percent});
                        points.push_back(pt);
                    }
    }

    size_t best = 0;
    for (size_t i = 1; i < points.size(); ++i)
        if (points[i].dev.f > points[best].dev.f) best = i;  // ties keep the earlier point
    if (report) *report = points;
    return points[best].config;
}

void save_tuning_report(const std::vector<TunePoint>& report, const std::string& path,
                        const std::string& header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write tuning report: " + path);
    if (!header.empty()) out << header << "\n";
    out << "percent\ttheta\tp\tb\tt\tP\tR\tF\n";
    out << std::fixed << std::setprecision(4);
    for (const auto& pt : report)
        out << pt.config.percent << "\t" << pt.config.theta << "\t" << pt.config.p << "\t"
            << pt.config.b << "\t" << pt.config.t << "\t" << pt.dev.precision * 100 << "\t"
            << pt.dev.recall * 100 << "\t" << pt.dev.f * 100 << "\n";
}

EvalCounts cross_validate_augmented(const Corpus& base_train, const Corpus& eval_pool, int k,
                                    const SchemeConfig& config,
                                    const std::set<std::string>& stopwords, const Lexicon* lexicon,
                                    bool lexicon_features) {
    if (k < 2) throw std::invalid_argument("cross-validation needs k >= 2");
    if (eval_pool.empty()) throw std::runtime_error("empty evaluation pool");

    size_t n = eval_pool.size();
    size_t quot = n / static_cast<size_t>(k), rem = n % static_cast<size_t>(k);
    std::vector<std::pair<size_t, size_t>> folds;  // [start, end)
    size_t pos = 0;
    for (int i = 0; i < k; ++i) {
        size_t len = quot + (static_cast<size_t>(i) < rem ? 1 : 0);
        folds.push_back({pos, pos + len});
        pos += len;
    }

    std::set<std::string> cat_set;
    for (const auto& doc : base_train)
        for (const auto& c : gold_of(doc)) cat_set.insert(c);
    for (const auto& doc : eval_pool)
        for (const auto& c : gold_of(doc)) cat_set.insert(c);
    std::vector<std::string> cats(cat_set.begin(), cat_set.end());

    EvalCounts total;
    for (const auto& [start, end] : folds) {
        if (start == end) continue;
        Corpus train = base_train;
        for (size_t i = 0; i < n; ++i)
            if (i < start || i >= end) train.push_back(eval_pool[i]);
        FeatureSpace base_space =
            build_feature_space(train, stopwords, true, true, lexicon_features, lexicon);
        MultiLabelModel model = train_scheme(train, base_space, config);
        LabelMap preds, gold;
        for (size_t i = start; i < end; ++i) {
            preds[eval_pool[i].id] = model.predict(eval_pool[i]);
            gold[eval_pool[i].id] = gold_of(eval_pool[i]);
        }
        total.merge(count(preds, gold, cats));
    }
    return total;
}

// --- persistence ---

namespace {

void write_categories(std::ostream& out, const std::vector<std::string>& cats) {
    out << cats.size() << "\n";
    for (const auto& c : cats) out << c << "\n";
}

std::vector<std::string> read_categories(std::istream& in) {
    size_t n = 0;
    if (!(in >> n)) throw std::runtime_error("malformed category count");
    std::string line;
    std::getline(in, line);
    std::vector<std::string> cats;
    for (size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("truncated category list");
        cats.push_back(line);
    }
    return cats;
}

std::string hexd(double v) {
    std::ostringstream os;
    os << std::hexfloat << v;
    return os.str();
}

}  // namespace

void save_model(const MultiLabelModel& model, const std::string& path, const std::string& header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model: " + path);
    if (!header.empty()) out << header << "\n";
    out << "!causelex-model v1\n";
    switch (model.scheme) {
        case Scheme::Ova: {
            const auto& m = *model.ova;
            out << "ova " << m.percent << " " << hexd(m.theta) << "\n";
            write_categories(out, m.categories);
            for (size_t k = 0; k < m.categories.size(); ++k) {
                write_feature_space(out, m.spaces[k]);
                write_linear_model(out, m.models[k]);
            }
            break;
        }
        case Scheme::Meta: {
            const auto& m = *model.meta;
            out << "meta " << m.percent << "\n";
            write_categories(out, m.categories);
            for (size_t k = 0; k < m.categories.size(); ++k) {
                write_feature_space(out, m.spaces[k]);
                write_linear_model(out, m.models[k]);
            }
            write_feature_space(out, m.cardinality_space);
            write_multiclass_model(out, m.cardinality);
            break;
        }
        case Scheme::PrunedSets: {
            const auto& m = *model.pruned;
            out << "prunedsets " << m.percent << " " << m.p << " " << m.b << " " << hexd(m.t)
                << " " << hexd(m.sample_fraction) << " " << m.ensemble.size() << " "
                << m.label_sets.size() << "\n";
            for (const auto& s : m.label_sets) {
                out << s.size();
                for (const auto& c : s) out << "\t" << c;
                out << "\n";
            }
            write_feature_space(out, m.space);
            for (const auto& mm : m.ensemble) write_multiclass_model(out, mm);
            break;
        }
    }
}

MultiLabelModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model: " + path);
    std::string line;
    do {
        if (!std::getline(in, line)) throw std::runtime_error("empty model file: " + path);
    } while (!line.empty() && line[0] == '#');
    if (line != "!causelex-model v1")
        throw std::runtime_error("unrecognized model format in " + path);

    MultiLabelModel model;
    std::string tag;
    if (!(in >> tag)) throw std::runtime_error("truncated model file: " + path);
    if (tag == "ova") {
        OvaModel m;
        std::string theta_s;
        if (!(in >> m.percent >> theta_s)) throw std::runtime_error("malformed ova parameters");
        m.theta = std::strtod(theta_s.c_str(), nullptr);
        m.categories = read_categories(in);
        for (size_t k = 0; k < m.categories.size(); ++k) {
            m.spaces.push_back(read_feature_space(in));
            m.models.push_back(read_linear_model(in));
        }
        model.scheme = Scheme::Ova;
        model.ova = std::move(m);
    } else if (tag == "meta") {
        MetaModel m;
        if (!(in >> m.percent)) throw std::runtime_error("malformed meta parameters");
        m.categories = read_categories(in);
        for (size_t k = 0; k < m.categories.size(); ++k) {
            m.spaces.push_back(read_feature_space(in));
            m.models.push_back(read_linear_model(in));
        }
        m.cardinality_space = read_feature_space(in);
        m.cardinality = read_multiclass_model(in);
        model.scheme = Scheme::Meta;
        model.meta = std::move(m);
    } else if (tag == "prunedsets") {
        PrunedSetsModel m;
        std::string t_s, sf_s;
        size_t ensemble = 0, nsets = 0;
        if (!(in >> m.percent >> m.p >> m.b >> t_s >> sf_s >> ensemble >> nsets))
            throw std::runtime_error("malformed prunedsets parameters");
        m.t = std::strtod(t_s.c_str(), nullptr);
        m.sample_fraction = std::strtod(sf_s.c_str(), nullptr);
        std::getline(in, line);
        for (size_t i = 0; i < nsets; ++i) {
            if (!std::getline(in, line)) throw std::runtime_error("truncated label set list");
            auto fields = split_on(line, '\t');
            size_t sz = std::stoul(fields[0]);
            if (fields.size() != sz + 1) throw std::runtime_error("malformed label set line");
            std::set<std::string> s(fields.begin() + 1, fields.end());
            m.label_sets.push_back(std::move(s));
        }
        m.space = read_feature_space(in);
        for (size_t i = 0; i < ensemble; ++i) m.ensemble.push_back(read_multiclass_model(in));
        model.scheme = Scheme::PrunedSets;
        model.pruned = std::move(m);
    } else {
        throw std::runtime_error("unknown model scheme '" + tag + "'");
    }
    return model;
}

}  // namespace causelex
