// causelex: bootstrapped semantic lexicons and multi-label cause labeling
// over incident-report corpora. One executable, one subcommand per pipeline
// stage; identical invocations produce byte-identical outputs.

#include <exception>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "causelex/bootstrap.hpp"
#include "causelex/corpus.hpp"
#include "causelex/eval.hpp"
#include "causelex/features.hpp"
#include "causelex/labeler.hpp"
#include "causelex/multilabel.hpp"
#include "causelex/patterns.hpp"
#include "causelex/util.hpp"

namespace {

using namespace causelex;

std::string invocation_text(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return join(args, " ");
}

std::vector<std::string> categories_from(const LabelMap& a, const LabelMap& b) {
    std::set<std::string> cats;
    for (const auto& [id, labels] : a) cats.insert(labels.begin(), labels.end());
    for (const auto& [id, labels] : b) cats.insert(labels.begin(), labels.end());
    return {cats.begin(), cats.end()};
}

LabelMap gold_from_corpus(const Corpus& corpus) {
    LabelMap out;
    for (const auto& doc : corpus) {
        if (!doc.labels)
            throw std::runtime_error("document '" + doc.id + "' carries no gold labels");
        out[doc.id] = *doc.labels;
    }
    return out;
}

Document preprocess_document(const Document& raw, const std::map<std::string, std::string>& abbrev,
                             const std::set<std::string>& dictionary) {
    Document out;
    out.id = raw.id;
    out.raw_text = raw.raw_text;
    out.labels = raw.labels;
    auto tokens = tokenize(raw.raw_text);
    tokens = expand_abbreviations(tokens, abbrev);
    tokens = restore_case(tokens, dictionary);
    for (const auto& sent : split_sentences(tokens)) {
        Sentence s;
        for (const auto& t : sent) s.tokens.push_back({t, naive_pos_tag(t)});
        s.phrases = chunk_phrases(s);
        out.sentences.push_back(std::move(s));
    }
    return out;
}

struct SchemeFlags {
    std::string scheme = "ova";
    int percent = 100;
    double theta = 0.0;
    int p = 10;
    int b = 2;
    double t = 0.5;
    int ensemble = 10;
    double sample_fraction = 0.63;
    double svm_c = 1.0;
    int epochs = 100;
    std::uint64_t seed = 1;
    std::string stopwords_path;
    std::string lexicon_path;
    bool lexicon_features = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--scheme", scheme, "ova, meta, or prunedsets")
            ->check(CLI::IsMember({"ova", "meta", "prunedsets"}));
        cmd->add_option("--percent", percent, "feature-selection percentage")
            ->check(CLI::Range(1, 100));
        cmd->add_option("--theta", theta, "one-vs-all decision threshold");
        cmd->add_option("--ps-p", p, "pruned-sets minimum label-set support");
        cmd->add_option("--ps-b", b, "pruned-sets minimum subset cardinality");
        cmd->add_option("--ps-t", t, "pruned-sets vote threshold in (0,1]");
        cmd->add_option("--ps-ensemble", ensemble, "pruned-sets ensemble size");
        cmd->add_option("--ps-sample", sample_fraction, "pruned-sets sample fraction");
        cmd->add_option("--svm-c", svm_c, "soft-margin C");
        cmd->add_option("--epochs", epochs, "training epochs");
        cmd->add_option("--seed", seed, "rng seed");
        cmd->add_option("--stopwords", stopwords_path, "stopword file");
        cmd->add_option("--lexicon", lexicon_path, "lexicon file for lexicon features");
        cmd->add_flag("--lexicon-features", lexicon_features, "add lexicon entries as features");
    }

    SchemeConfig to_config() const {
        SchemeConfig cfg;
        cfg.scheme = scheme == "ova" ? Scheme::Ova
                     : scheme == "meta" ? Scheme::Meta
                                        : Scheme::PrunedSets;
        cfg.percent = percent;
        cfg.theta = theta;
        cfg.p = p;
        cfg.b = b;
        cfg.t = t;
        cfg.ensemble_size = ensemble;
        cfg.sample_fraction = sample_fraction;
        cfg.svm.C = svm_c;
        cfg.svm.epochs = epochs;
        cfg.svm.seed = seed;
        return cfg;
    }

    std::set<std::string> stopwords() const {
        return stopwords_path.empty() ? std::set<std::string>{} : load_stopwords(stopwords_path);
    }
};

int run(int argc, char** argv) {
    CLI::App app{"causelex: semantic-lexicon bootstrapping and multi-label cause labeling"};
    app.set_config("--config", "", "flat key=value config file; flags override");
    int threads = 1;
    app.add_option("--threads", threads, "worker limit (execution is sequential)");
    app.require_subcommand(1);

    std::string header = output_header(invocation_text(argc, argv));

    // preprocess
    auto* pre = app.add_subcommand("preprocess", "tokenize, expand abbreviations, restore case");
    std::string pre_in, pre_out, pre_abbrev, pre_dict;
    pre->add_option("--in", pre_in, "raw corpus (one record per line)")->required();
    pre->add_option("--out", pre_out, "preprocessed corpus")->required();
    pre->add_option("--abbrev", pre_abbrev, "abbreviation map TSV");
    pre->add_option("--dictionary", pre_dict, "known lowercase words, one per line");
    pre->callback([&] {
        auto corpus = load_corpus(pre_in);
        auto abbrev = pre_abbrev.empty() ? std::map<std::string, std::string>{}
                                         : load_abbrev_map(pre_abbrev);
        auto dict = pre_dict.empty() ? std::set<std::string>{} : load_dictionary(pre_dict);
        Corpus out;
        for (const auto& doc : corpus) out.push_back(preprocess_document(doc, abbrev, dict));
        save_corpus(out, pre_out, header);
    });

    // index
    auto* idx = app.add_subcommand("index", "build the pattern/target co-occurrence index");
    std::string idx_in, idx_out, idx_syn;
    IndexConfig idx_cfg;
    idx->add_option("--in", idx_in, "preprocessed corpus")->required();
    idx->add_option("--out", idx_out, "index dump")->required();
    idx->add_option("--n", idx_cfg.n, "context width")->check(CLI::PositiveNumber);
    idx->add_flag("!--no-words", idx_cfg.word_patterns, "disable word patterns");
    idx->add_flag("!--no-phrases", idx_cfg.phrase_patterns, "disable phrase patterns");
    idx->add_option("--syntactic", idx_syn, "syntactic-pattern import TSV");
    idx->callback([&] {
        idx_cfg.syntactic_patterns = !idx_syn.empty();
        idx_cfg.syntactic_file = idx_syn;
        auto corpus = load_corpus(idx_in);
        save_index(build_index(corpus, idx_cfg), idx_out, header);
    });

    // bootstrap
    auto* boot = app.add_subcommand("bootstrap", "grow category lexicons from seeds");
    std::string boot_index, boot_seeds, boot_out, boot_mode = "modified";
    int boot_iters = 10, boot_cap = 5;
    Thresholds th;
    th.min_word_freq = 10;
    th.max_word_freq = 2500;
    th.min_pattern_freq = 250;
    th.max_pattern_distinct_targets = 100;
    boot->add_option("--index", boot_index, "index dump")->required();
    boot->add_option("--seeds", boot_seeds, "seed lexicon TSV")->required();
    boot->add_option("--out", boot_out, "lexicon output TSV")->required();
    boot->add_option("--mode", boot_mode, "original or modified")
        ->check(CLI::IsMember({"original", "modified"}));
    boot->add_option("--iterations", boot_iters)->check(CLI::NonNegativeNumber);
    boot->add_option("--cap", boot_cap, "entries added per category per iteration");
    boot->add_option("--min-w", th.min_word_freq, "minimum word frequency");
    boot->add_option("--max-w", th.max_word_freq, "maximum word frequency");
    boot->add_option("--min-p", th.min_pattern_freq, "minimum pattern frequency");
    boot->add_option("--max-p", th.max_pattern_distinct_targets, "maximum pattern generality");
    boot->callback([&] {
        auto index = load_index(boot_index);
        auto seeds = load_seed_lexicon(boot_seeds);
        Lexicon lex = boot_mode == "original"
                          ? bootstrap_original(seeds, index, boot_iters)
                          : bootstrap_modified(seeds, index, boot_iters, th, boot_cap);
        save_lexicon(lex, boot_out, header);
    });

    // label
    auto* lab = app.add_subcommand("label", "occurrence-heuristic labeling");
    std::string lab_in, lab_lex, lab_out;
    lab->add_option("--in", lab_in, "preprocessed corpus")->required();
    lab->add_option("--lexicon", lab_lex, "lexicon TSV")->required();
    lab->add_option("--out", lab_out, "predictions TSV")->required();
    lab->callback([&] {
        auto corpus = load_corpus(lab_in);
        auto lexicon = load_lexicon(lab_lex);
        save_predictions(label_corpus(corpus, lexicon), lab_out, header);
    });

    // train
    auto* tr = app.add_subcommand("train", "train a multi-label model on gold labels");
    std::string tr_in, tr_out;
    SchemeFlags tr_flags;
    tr->add_option("--in", tr_in, "labeled corpus")->required();
    tr->add_option("--out", tr_out, "model file")->required();
    tr_flags.add_to(tr);
    tr->callback([&] {
        auto corpus = load_corpus(tr_in);
        Lexicon lexicon;
        if (tr_flags.lexicon_features) {
            if (tr_flags.lexicon_path.empty())
                throw std::runtime_error("--lexicon-features requires --lexicon");
            lexicon = load_lexicon(tr_flags.lexicon_path);
        }
        FeatureSpace base =
            build_feature_space(corpus, tr_flags.stopwords(), true, true,
                                tr_flags.lexicon_features,
                                tr_flags.lexicon_features ? &lexicon : nullptr);
        save_model(train_scheme(corpus, base, tr_flags.to_config()), tr_out, header);
    });

    // predict
    auto* pr = app.add_subcommand("predict", "apply a trained model");
    std::string pr_in, pr_model, pr_out;
    pr->add_option("--in", pr_in, "corpus")->required();
    pr->add_option("--model", pr_model, "model file")->required();
    pr->add_option("--out", pr_out, "predictions TSV")->required();
    pr->callback([&] {
        auto corpus = load_corpus(pr_in);
        auto model = load_model(pr_model);
        std::vector<LabelSet> preds;
        for (const auto& doc : corpus) preds.push_back({doc.id, model.predict(doc)});
        std::sort(preds.begin(), preds.end(),
                  [](const LabelSet& a, const LabelSet& b) { return a.document_id < b.document_id; });
        save_predictions(preds, pr_out, header);
    });

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "micro-averaged metrics report");
    std::string ev_pred, ev_gold, ev_gold_corpus, ev_out;
    ev->add_option("--pred", ev_pred, "predictions TSV")->required();
    ev->add_option("--gold", ev_gold, "gold labels TSV (predictions format)");
    ev->add_option("--gold-corpus", ev_gold_corpus, "corpus with gold label fields");
    ev->add_option("--out", ev_out, "metrics report TSV")->required();
    ev->callback([&] {
        auto preds = load_predictions(ev_pred);
        LabelMap gold;
        if (!ev_gold.empty())
            gold = load_predictions(ev_gold);
        else if (!ev_gold_corpus.empty())
            gold = gold_from_corpus(load_corpus(ev_gold_corpus));
        else
            throw std::runtime_error("evaluate needs --gold or --gold-corpus");
        save_metrics_report(count(preds, gold, categories_from(gold, preds)), ev_out, header);
    });

    // significance
    auto* sig = app.add_subcommand("significance", "compare two prediction files");
    std::string sig_a, sig_b, sig_gold, sig_out, sig_test = "ar";
    int sig_shuffles = 9999;
    std::uint64_t sig_seed = 1;
    sig->add_option("--pred-a", sig_a)->required();
    sig->add_option("--pred-b", sig_b)->required();
    sig->add_option("--gold", sig_gold, "gold labels TSV")->required();
    sig->add_option("--out", sig_out, "significance report TSV")->required();
    sig->add_option("--test", sig_test, "mcnemar or ar")
        ->check(CLI::IsMember({"mcnemar", "ar"}));
    sig->add_option("--shuffles", sig_shuffles)->check(CLI::PositiveNumber);
    sig->add_option("--seed", sig_seed);
    sig->callback([&] {
        auto a = load_predictions(sig_a);
        auto b = load_predictions(sig_b);
        auto gold = load_predictions(sig_gold);
        std::set<std::string> all;
        for (const auto& [id, labels] : gold) all.insert(labels.begin(), labels.end());
        for (const auto& [id, labels] : a) all.insert(labels.begin(), labels.end());
        for (const auto& [id, labels] : b) all.insert(labels.begin(), labels.end());
        std::vector<std::string> cats(all.begin(), all.end());
        double stat = 0.0, p = 1.0;
        if (sig_test == "mcnemar") {
            std::vector<bool> ca, cb;  // per (document, category) decision
            for (const auto& [id, g] : gold) {
                auto ita = a.find(id), itb = b.find(id);
                if (ita == a.end() || itb == b.end())
                    throw std::runtime_error("document '" + id + "' missing from a prediction set");
                for (const auto& cat : cats) {
                    bool in_gold = g.count(cat) > 0;
                    ca.push_back((ita->second.count(cat) > 0) == in_gold);
                    cb.push_back((itb->second.count(cat) > 0) == in_gold);
                }
            }
            auto [s, pv] = mcnemar(ca, cb);
            stat = s;
            p = pv;
        } else {
            p = approx_randomization(a, b, gold, cats, sig_shuffles, sig_seed);
            stat = std::abs(micro_prf(count(a, gold, cats)).f - micro_prf(count(b, gold, cats)).f);
        }
        std::ofstream out(sig_out);
        if (!out) throw std::runtime_error("cannot write significance report: " + sig_out);
        out << header << "\n";
        out << "systemA\tsystemB\ttest\tstatistic\tp\tsignificant@0.05\n";
        out << sig_a << "\t" << sig_b << "\t" << sig_test << "\t" << stat << "\t" << p << "\t"
            << (p < 0.05 ? "yes" : "no") << "\n";
    });

    // tune
    auto* tu = app.add_subcommand("tune", "grid-search scheme parameters on a dev split");
    std::string tu_train, tu_dev, tu_out;
    SchemeFlags tu_flags;
    tu->add_option("--train", tu_train, "training corpus")->required();
    tu->add_option("--dev", tu_dev, "development corpus")->required();
    tu->add_option("--out", tu_out, "tuning report TSV")->required();
    tu_flags.add_to(tu);
    tu->callback([&] {
        auto train = load_corpus(tu_train);
        auto dev = load_corpus(tu_dev);
        Lexicon lexicon;
        if (tu_flags.lexicon_features) {
            if (tu_flags.lexicon_path.empty())
                throw std::runtime_error("--lexicon-features requires --lexicon");
            lexicon = load_lexicon(tu_flags.lexicon_path);
        }
        FeatureSpace base =
            build_feature_space(train, tu_flags.stopwords(), true, true,
                                tu_flags.lexicon_features,
                                tu_flags.lexicon_features ? &lexicon : nullptr);
        std::vector<TunePoint> report;
        SchemeConfig best = tune(tu_flags.to_config(), train, dev, base, &report);
        save_tuning_report(report, tu_out, header);
        std::cout << "best percent=" << best.percent << " theta=" << best.theta
                  << " p=" << best.p << " b=" << best.b << " t=" << best.t << "\n";
    });

    // cv
    auto* cv = app.add_subcommand("cv", "k-fold cross-validation with augmented training");
    std::string cv_base, cv_pool, cv_out;
    int cv_k = 5;
    SchemeFlags cv_flags;
    cv->add_option("--base-train", cv_base, "corpus added to every training split");
    cv->add_option("--pool", cv_pool, "evaluation pool corpus")->required();
    cv->add_option("--out", cv_out, "metrics report TSV")->required();
    cv->add_option("--k", cv_k, "fold count")->check(CLI::Range(2, 1000));
    cv_flags.add_to(cv);
    cv->callback([&] {
        Corpus base = cv_base.empty() ? Corpus{} : load_corpus(cv_base);
        auto pool = load_corpus(cv_pool);
        Lexicon lexicon;
        if (cv_flags.lexicon_features) {
            if (cv_flags.lexicon_path.empty())
                throw std::runtime_error("--lexicon-features requires --lexicon");
            lexicon = load_lexicon(cv_flags.lexicon_path);
        }
        EvalCounts counts = cross_validate_augmented(
            base, pool, cv_k, cv_flags.to_config(), cv_flags.stopwords(),
            cv_flags.lexicon_features ? &lexicon : nullptr, cv_flags.lexicon_features);
        save_metrics_report(counts, cv_out, header);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
