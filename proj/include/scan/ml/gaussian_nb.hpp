#pragma once

#include "scan/ml/classifier.hpp"

namespace scan {

/// Gaussian naive Bayes: per-class per-feature mean and variance with
/// variance smoothing (gnb_var_smoothing times the largest feature variance
/// added to every variance).
class GaussianNbClassifier final : public Classifier {
public:
    explicit GaussianNbClassifier(ClassifierSpec spec) : Classifier(std::move(spec)) {}

    const Eigen::MatrixXd& class_means() const { return means_; }
    /// Smoothed variances actually used by prediction.
    const Eigen::MatrixXd& class_variances() const { return variances_; }
    const Eigen::VectorXd& log_priors() const { return log_priors_; }

    /// Joint log densities log p(x | class) + log prior, one row per sample.
    Eigen::MatrixXd log_posteriors(const Eigen::MatrixXd& x) const;

    void save_state(BinaryWriter& w) const override;
    void load_state(BinaryReader& r) override;

protected:
    void do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int threads) override;
    Eigen::MatrixXd do_predict_proba(const Eigen::MatrixXd& x, int threads) const override;

private:
    Eigen::MatrixXd means_;     // K x D
    Eigen::MatrixXd variances_; // K x D, smoothed
    Eigen::VectorXd log_priors_;
};

} // namespace scan
