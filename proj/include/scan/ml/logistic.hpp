#pragma once

#include "scan/ml/classifier.hpp"

namespace scan {

/// Multinomial softmax regression minimizing
///   mean cross-entropy + lr_l2 / (2N) * ||W||^2   (bias unpenalized)
/// with L-BFGS (memory 10, Armijo backtracking) from a zero start. Also
/// serves as the stacking meta learner.
class LogisticRegressionClassifier final : public Classifier {
public:
    explicit LogisticRegressionClassifier(ClassifierSpec spec) : Classifier(std::move(spec)) {}

    const Eigen::MatrixXd& weights() const { return w_; }
    const Eigen::VectorXd& bias() const { return b_; }
    int iterations_run() const { return iterations_; }

    void save_state(BinaryWriter& w) const override;
    void load_state(BinaryReader& r) override;

protected:
    void do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int threads) override;
    Eigen::MatrixXd do_predict_proba(const Eigen::MatrixXd& x, int threads) const override;

private:
    Eigen::MatrixXd w_; // K x D
    Eigen::VectorXd b_; // K
    int iterations_ = 0;
};

} // namespace scan
