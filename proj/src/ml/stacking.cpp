#include "scan/ml/stacking.hpp"

#include <stdexcept>

#include "scan/eval/kfold.hpp"
#include "scan/util/error.hpp"
#include "scan/util/parallel.hpp"
#include "scan/util/rng.hpp"

namespace scan {

void validate_stack_spec(const StackSpec& spec) {
    if (spec.bases.size() < 2) throw std::invalid_argument("stack needs at least 2 base specs");
    if (spec.folds < 2) throw std::invalid_argument("stack needs at least 2 folds");
    for (const auto& b : spec.bases) validate_spec(b);
}

StackedClassifier::StackedClassifier(StackSpec spec) : Classifier({}), stack_spec_(std::move(spec)) {
    stack_spec_.meta.algorithm = Algorithm::logistic_regression;
    spec_ = stack_spec_.meta;
    spec_.seed = stack_spec_.seed;
}

void StackedClassifier::do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int threads) {
    validate_stack_spec(stack_spec_);
    const int n = static_cast<int>(x.rows());
    const int n_bases = static_cast<int>(stack_spec_.bases.size());
    const int k = n_classes_;

    const auto folds = kfold_split(y, stack_spec_.folds, mix_seed(stack_spec_.seed, 0x737461ULL));

    // out-of-fold meta features, one probability block per base
    Eigen::MatrixXd meta_x(n, static_cast<Eigen::Index>(n_bases) * k);
    struct Task {
        int base;
        int fold;
    };
    std::vector<Task> tasks;
    for (int b = 0; b < n_bases; ++b) {
        for (int f = 0; f < stack_spec_.folds; ++f) tasks.push_back({b, f});
    }
    parallel_for(tasks.size(), threads, [&](std::size_t t) {
        const auto [b, f] = tasks[t];
        const auto& holdout = folds[f];
        std::vector<char> in_holdout(n, 0);
        for (int idx : holdout) in_holdout[idx] = 1;

        Eigen::MatrixXd x_train(n - static_cast<int>(holdout.size()), x.cols());
        std::vector<int> y_train;
        y_train.reserve(x_train.rows());
        Eigen::Index row = 0;
        for (int i = 0; i < n; ++i) {
            if (!in_holdout[i]) {
                x_train.row(row++) = x.row(i);
                y_train.push_back(y[i]);
            }
        }
        Eigen::MatrixXd x_hold(holdout.size(), x.cols());
        for (std::size_t i = 0; i < holdout.size(); ++i) x_hold.row(i) = x.row(holdout[i]);

        auto model = make_classifier(stack_spec_.bases[b]);
        model->fit(x_train, y_train, n_classes_, 1);
        const Eigen::MatrixXd proba = model->predict_proba(x_hold, 1);
        for (std::size_t i = 0; i < holdout.size(); ++i) {
            meta_x.block(holdout[i], static_cast<Eigen::Index>(b) * k, 1, k) = proba.row(i);
        }
    });

    // full-data base fits used at prediction time
    bases_.clear();
    bases_.resize(n_bases);
    parallel_for(n_bases, threads, [&](std::size_t b) {
        bases_[b] = make_classifier(stack_spec_.bases[b]);
        bases_[b]->fit(x, y, n_classes_, 1);
    });

    ClassifierSpec meta_spec = stack_spec_.meta;
    meta_spec.algorithm = Algorithm::logistic_regression;
    meta_ = std::make_unique<LogisticRegressionClassifier>(meta_spec);
    meta_->fit(meta_x, y, n_classes_, threads);
}

Eigen::MatrixXd StackedClassifier::meta_features(const Eigen::MatrixXd& x, int threads) const {
    const int k = n_classes_;
    Eigen::MatrixXd meta_x(x.rows(), static_cast<Eigen::Index>(bases_.size()) * k);
    for (std::size_t b = 0; b < bases_.size(); ++b) {
        meta_x.middleCols(static_cast<Eigen::Index>(b) * k, k) = bases_[b]->predict_proba(x, threads);
    }
    return meta_x;
}

Eigen::MatrixXd StackedClassifier::do_predict_proba(const Eigen::MatrixXd& x, int threads) const {
    return meta_->predict_proba(meta_features(x, threads), threads);
}

void StackedClassifier::save_state(BinaryWriter& w) const {
    w.put<std::int32_t>(static_cast<std::int32_t>(stack_spec_.folds));
    w.put<std::uint64_t>(stack_spec_.seed);
    serialize_spec(w, stack_spec_.meta);
    w.put<std::uint64_t>(stack_spec_.bases.size());
    for (const auto& b : stack_spec_.bases) serialize_spec(w, b);
    for (const auto& b : bases_) save_classifier(w, *b);
    save_classifier(w, *meta_);
}

void StackedClassifier::load_state(BinaryReader& r) {
    stack_spec_.folds = r.get<std::int32_t>();
    stack_spec_.seed = r.get<std::uint64_t>();
    stack_spec_.meta = deserialize_spec(r);
    stack_spec_.bases.resize(r.get<std::uint64_t>());
    for (auto& b : stack_spec_.bases) b = deserialize_spec(r);
    bases_.clear();
    for (std::size_t i = 0; i < stack_spec_.bases.size(); ++i) {
        bases_.push_back(load_classifier(r));
    }
    auto meta = load_classifier(r);
    auto* lr = dynamic_cast<LogisticRegressionClassifier*>(meta.get());
    if (!lr) throw DataError("stacked artifact meta learner has wrong type");
    meta.release();
    meta_.reset(lr);
}

std::unique_ptr<StackedClassifier> train_stacked(const StackSpec& spec, const Eigen::MatrixXd& x,
                                                 const std::vector<int>& y, int n_classes,
                                                 int threads) {
    validate_stack_spec(spec);
    auto model = std::make_unique<StackedClassifier>(spec);
    model->fit(x, y, n_classes, threads);
    return model;
}

} // namespace scan
