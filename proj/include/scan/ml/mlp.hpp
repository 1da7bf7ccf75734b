#pragma once

#include "scan/ml/classifier.hpp"

namespace scan {

namespace mlp_detail {

/// One hidden layer of rectified-linear units, softmax output.
struct Params {
    Eigen::MatrixXd w1; // H x D
    Eigen::VectorXd b1; // H
    Eigen::MatrixXd w2; // K x H
    Eigen::VectorXd b2; // K
};

/// Mean cross-entropy of the batch; when `grads` is non-null the analytic
/// gradient is written to it. Exposed so tests can check the gradient
/// against central finite differences.
double loss_and_grad(const Params& p, const Eigen::MatrixXd& x, const std::vector<int>& y,
                     Params* grads);

Eigen::MatrixXd forward_proba(const Params& p, const Eigen::MatrixXd& x);

} // namespace mlp_detail

/// Multi-layer perceptron: one ReLU hidden layer, softmax cross-entropy,
/// adaptive-moment (Adam) minibatch SGD, training stopped early when the
/// epoch loss plateaus.
class MlpClassifier final : public Classifier {
public:
    explicit MlpClassifier(ClassifierSpec spec) : Classifier(std::move(spec)) {}

    const std::vector<double>& loss_curve() const { return loss_curve_; }
    int epochs_run() const { return static_cast<int>(loss_curve_.size()); }

    void save_state(BinaryWriter& w) const override;
    void load_state(BinaryReader& r) override;

protected:
    void do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int threads) override;
    Eigen::MatrixXd do_predict_proba(const Eigen::MatrixXd& x, int threads) const override;

private:
    mlp_detail::Params params_;
    std::vector<double> loss_curve_;
};

} // namespace scan
