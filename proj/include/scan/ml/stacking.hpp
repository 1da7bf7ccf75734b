#pragma once

#include <memory>
#include <vector>

#include "scan/ml/classifier.hpp"
#include "scan/ml/logistic.hpp"

namespace scan {

/// Stacked ensemble description: base classifiers whose out-of-fold
/// predicted probabilities feed a multinomial logistic regression meta
/// learner.
struct StackSpec {
    std::vector<ClassifierSpec> bases; // >= 2
    int folds = 5;
    std::uint64_t seed = 0;
    ClassifierSpec meta; // algorithm forced to logistic_regression
};

void validate_stack_spec(const StackSpec& spec);

/// Base models are trained on the full data for prediction; the meta
/// learner is trained on concatenated out-of-fold base probabilities from
/// an internal stratified split.
class StackedClassifier final : public Classifier {
public:
    explicit StackedClassifier(StackSpec spec);

    const StackSpec& stack_spec() const { return stack_spec_; }
    const std::vector<std::unique_ptr<Classifier>>& bases() const { return bases_; }

    void save_state(BinaryWriter& w) const override;
    void load_state(BinaryReader& r) override;

protected:
    void do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int threads) override;
    Eigen::MatrixXd do_predict_proba(const Eigen::MatrixXd& x, int threads) const override;

private:
    Eigen::MatrixXd meta_features(const Eigen::MatrixXd& x, int threads) const;

    StackSpec stack_spec_;
    std::vector<std::unique_ptr<Classifier>> bases_;
    std::unique_ptr<LogisticRegressionClassifier> meta_;
};

std::unique_ptr<StackedClassifier> train_stacked(const StackSpec& spec, const Eigen::MatrixXd& x,
                                                 const std::vector<int>& y, int n_classes,
                                                 int threads = 1);

} // namespace scan
