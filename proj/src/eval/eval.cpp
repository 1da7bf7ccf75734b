#include "scan/eval/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>

#include "scan/eval/kfold.hpp"
#include "scan/util/error.hpp"

namespace scan {

namespace {

const std::array<std::string, 3> kVariantNames = {"all", "pca99", "pca95"};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

const std::string& to_string(Variant v) { return kVariantNames[static_cast<int>(v)]; }

Variant variant_from_string(const std::string& name) {
    for (std::size_t i = 0; i < kVariantNames.size(); ++i) {
        if (kVariantNames[i] == name) return static_cast<Variant>(i);
    }
    throw DataError("unknown variant: '" + name + "'");
}

double variant_threshold(Variant v) {
    switch (v) {
        case Variant::pca99: return 0.99;
        case Variant::pca95: return 0.95;
        case Variant::all: break;
    }
    throw std::invalid_argument("variant 'all' has no PCA threshold");
}

std::vector<std::vector<long long>> confusion_matrix(const std::vector<int>& y_true,
                                                     const std::vector<int>& y_pred,
                                                     int n_classes) {
    if (y_true.size() != y_pred.size()) {
        throw std::invalid_argument("confusion_matrix: length mismatch");
    }
    std::vector<std::vector<long long>> m(n_classes, std::vector<long long>(n_classes, 0));
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] < 0 || y_true[i] >= n_classes || y_pred[i] < 0 || y_pred[i] >= n_classes) {
            throw std::invalid_argument("confusion_matrix: label out of range");
        }
        ++m[y_true[i]][y_pred[i]];
    }
    return m;
}

EvalEntry EvalEntry::single(const ClassifierSpec& s) {
    EvalEntry e;
    e.name = to_string(s.algorithm);
    e.spec = s;
    return e;
}

EvalEntry EvalEntry::stacked(std::string name, const StackSpec& s) {
    EvalEntry e;
    e.name = std::move(name);
    e.is_stack = true;
    e.stack = s;
    return e;
}

namespace {

struct FoldData {
    Eigen::MatrixXd x_train_all, x_test_all;
    std::map<Variant, Eigen::MatrixXd> x_train_pca, x_test_pca;
    std::map<Variant, int> pca_k;
    std::vector<int> y_train, y_test;
    std::vector<int> test_indices;
};

FoldData build_fold(const FeatureMatrix& lognorm, const std::vector<int>& labels,
                    const std::vector<int>& holdout, const std::vector<Variant>& variants) {
    const Eigen::Index n = lognorm.values.rows();
    std::vector<char> in_holdout(n, 0);
    for (int idx : holdout) in_holdout[idx] = 1;

    FoldData fold;
    fold.test_indices = holdout;
    FeatureMatrix train_log, test_log;
    train_log.provenance = test_log.provenance = lognorm.provenance;
    train_log.values.resize(n - static_cast<Eigen::Index>(holdout.size()), lognorm.values.cols());
    test_log.values.resize(holdout.size(), lognorm.values.cols());
    Eigen::Index tr = 0, te = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (in_holdout[i]) {
            test_log.values.row(te++) = lognorm.values.row(i);
            fold.y_test.push_back(labels[i]);
        } else {
            train_log.values.row(tr++) = lognorm.values.row(i);
            fold.y_train.push_back(labels[i]);
        }
    }

    Preprocessor pp;
    pp.fit(train_log);
    FeatureMatrix x_train = pp.transform(train_log);
    FeatureMatrix x_test = pp.transform(test_log);

    for (Variant v : variants) {
        if (v == Variant::all) continue;
        const PcaModel pca = pca_fit(x_train, variant_threshold(v));
        fold.x_train_pca[v] = pca_transform(pca, x_train).values;
        fold.x_test_pca[v] = pca_transform(pca, x_test).values;
        fold.pca_k[v] = static_cast<int>(pca.n_components());
    }
    fold.x_train_all = std::move(x_train.values);
    fold.x_test_all = std::move(x_test.values);
    return fold;
}

std::unique_ptr<Classifier> fit_entry(const EvalEntry& entry, const Eigen::MatrixXd& x,
                                      const std::vector<int>& y, int n_classes, int threads) {
    if (entry.is_stack) {
        return train_stacked(entry.stack, x, y, n_classes, threads);
    }
    auto model = make_classifier(entry.spec);
    model->fit(x, y, n_classes, threads);
    return model;
}

} // namespace

std::vector<EvalReport> run_matrix(const Dataset& ds, const std::vector<EvalEntry>& entries,
                                   const std::vector<Variant>& variants, int folds,
                                   std::uint64_t seed, int threads,
                                   const std::function<void(const EvalReport&)>& on_report) {
    if (!ds.labeled()) throw DataError("evaluation requires a labeled dataset");

    // compact label remapping (datasets restricted to a class subset)
    const std::vector<int> raw_labels = ds.labels();
    std::vector<int> class_ids;
    {
        std::vector<char> seen(kNumShapeClasses, 0);
        for (int l : raw_labels) {
            if (l < 0 || l >= kNumShapeClasses) throw DataError("label out of range");
            seen[l] = 1;
        }
        for (int c = 0; c < kNumShapeClasses; ++c) {
            if (seen[c]) class_ids.push_back(c);
        }
    }
    std::vector<int> compact(kNumShapeClasses, -1);
    for (std::size_t i = 0; i < class_ids.size(); ++i) compact[class_ids[i]] = static_cast<int>(i);
    std::vector<int> labels(raw_labels.size());
    for (std::size_t i = 0; i < raw_labels.size(); ++i) labels[i] = compact[raw_labels[i]];
    const int n_classes = static_cast<int>(class_ids.size());

    const FeatureMatrix lognorm = log_normalize(ds);
    const auto fold_sets = kfold_split(labels, folds, seed);

    struct Accum {
        EvalReport report;
        bool dead = false;
    };
    std::vector<Accum> acc(entries.size() * variants.size());
    for (std::size_t e = 0; e < entries.size(); ++e) {
        for (std::size_t v = 0; v < variants.size(); ++v) {
            auto& a = acc[e * variants.size() + v];
            a.report.classifier = entries[e].name;
            a.report.variant = variants[v];
            a.report.class_ids = class_ids;
            a.report.confusion.assign(n_classes, std::vector<long long>(n_classes, 0));
        }
    }

    for (int f = 0; f < folds; ++f) {
        const FoldData fold = build_fold(lognorm, labels, fold_sets[f], variants);
        for (std::size_t v = 0; v < variants.size(); ++v) {
            const Variant variant = variants[v];
            const Eigen::MatrixXd& x_train =
                variant == Variant::all ? fold.x_train_all : fold.x_train_pca.at(variant);
            const Eigen::MatrixXd& x_test =
                variant == Variant::all ? fold.x_test_all : fold.x_test_pca.at(variant);
            for (std::size_t e = 0; e < entries.size(); ++e) {
                auto& a = acc[e * variants.size() + v];
                if (a.dead) continue;
                try {
                    const auto t0 = std::chrono::steady_clock::now();
                    const auto model = fit_entry(entries[e], x_train, fold.y_train, n_classes,
                                                 threads);
                    a.report.train_seconds += seconds_since(t0);

                    const auto t1 = std::chrono::steady_clock::now();
                    const std::vector<int> pred = model->predict(x_test, threads);
                    a.report.eval_seconds += seconds_since(t1);

                    long long correct = 0;
                    for (std::size_t i = 0; i < pred.size(); ++i) {
                        if (pred[i] == fold.y_test[i]) ++correct;
                        ++a.report.confusion[fold.y_test[i]][pred[i]];
                    }
                    a.report.fold_accuracies.push_back(static_cast<double>(correct) /
                                                       static_cast<double>(pred.size()));
                    if (variant != Variant::all) {
                        a.report.pca_components.push_back(fold.pca_k.at(variant));
                    }
                } catch (const std::exception& ex) {
                    a.dead = true;
                    a.report.failed = true;
                    a.report.error = std::string("fold ") + std::to_string(f) + ": " + ex.what();
                }
            }
        }
    }

    std::vector<EvalReport> reports;
    reports.reserve(acc.size());
    for (auto& a : acc) {
        auto& rep = a.report;
        if (!rep.fold_accuracies.empty()) {
            double mean = 0.0;
            for (double x : rep.fold_accuracies) mean += x;
            mean /= static_cast<double>(rep.fold_accuracies.size());
            double var = 0.0;
            for (double x : rep.fold_accuracies) var += (x - mean) * (x - mean);
            var /= static_cast<double>(rep.fold_accuracies.size());
            rep.mean = mean;
            rep.stddev = std::sqrt(var);
        }
        if (on_report) on_report(rep);
        reports.push_back(std::move(rep));
    }
    return reports;
}

EvalReport cross_validate(const EvalEntry& entry, const Dataset& ds, Variant variant, int folds,
                          std::uint64_t seed, int threads) {
    return run_matrix(ds, {entry}, {variant}, folds, seed, threads).front();
}

std::vector<Algorithm> suite_algorithms() {
    return {Algorithm::random_forest, Algorithm::gradient_boosted_trees,
            Algorithm::gbt_random_forest, Algorithm::mlp, Algorithm::decision_tree,
            Algorithm::adaboost, Algorithm::gaussian_nb, Algorithm::qda, Algorithm::knn};
}

std::vector<Algorithm> top_algorithms(const std::vector<EvalReport>& reports, Variant variant,
                                      int count) {
    const auto suite = suite_algorithms();
    std::vector<std::pair<double, int>> ranked; // (-accuracy, suite position)
    for (std::size_t pos = 0; pos < suite.size(); ++pos) {
        const std::string name = to_string(suite[pos]);
        for (const auto& rep : reports) {
            if (rep.classifier == name && rep.variant == variant && !rep.failed) {
                ranked.emplace_back(-rep.mean, static_cast<int>(pos));
                break;
            }
        }
    }
    std::sort(ranked.begin(), ranked.end());
    std::vector<Algorithm> out;
    for (int i = 0; i < count && i < static_cast<int>(ranked.size()); ++i) {
        out.push_back(suite[ranked[i].second]);
    }
    return out;
}

} // namespace scan
