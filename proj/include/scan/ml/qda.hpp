#pragma once

#include <Eigen/Cholesky>

#include "scan/ml/classifier.hpp"

namespace scan {

/// Quadratic discriminant analysis: per-class mean and full covariance with
/// ridge regularization (qda_ridge * trace/D added on the diagonal — the
/// unregularized covariances are singular whenever a class has fewer samples
/// than features). Scores are full Gaussian log densities plus log priors.
class QdaClassifier final : public Classifier {
public:
    explicit QdaClassifier(ClassifierSpec spec) : Classifier(std::move(spec)) {}

    /// Builds fitted state directly from moments; `covariances` are used
    /// as given (no ridge). Used by deserialization and by tests comparing
    /// against naive Bayes with diagonal covariances.
    void set_parts(Eigen::MatrixXd means, const std::vector<Eigen::MatrixXd>& covariances,
                   Eigen::VectorXd log_priors, int n_classes);

    /// log p(x | class) + log prior per row and class.
    Eigen::MatrixXd log_posteriors(const Eigen::MatrixXd& x) const;

    void save_state(BinaryWriter& w) const override;
    void load_state(BinaryReader& r) override;

protected:
    void do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int threads) override;
    Eigen::MatrixXd do_predict_proba(const Eigen::MatrixXd& x, int threads) const override;

private:
    void factorize(const std::vector<Eigen::MatrixXd>& covariances);

    Eigen::MatrixXd means_; // K x D
    std::vector<Eigen::MatrixXd> chol_; // lower Cholesky factors, one per class
    Eigen::VectorXd log_dets_;
    Eigen::VectorXd log_priors_;
};

} // namespace scan
