#pragma once

#include "scan/ml/cart.hpp"
#include "scan/ml/classifier.hpp"

namespace scan {

/// Multi-class AdaBoost (SAMME) over depth-1 CART stumps with sample
/// reweighting. A round whose weighted stump error reaches (K-1)/K halts
/// training; probabilities are alpha-weighted vote shares.
class AdaBoostClassifier final : public Classifier {
public:
    explicit AdaBoostClassifier(ClassifierSpec spec) : Classifier(std::move(spec)) {}

    const std::vector<double>& alphas() const { return alphas_; }
    /// Weighted stump errors of the accepted rounds; each < (K-1)/K.
    const std::vector<double>& round_errors() const { return errors_; }

    void save_state(BinaryWriter& w) const override;
    void load_state(BinaryReader& r) override;

protected:
    void do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int threads) override;
    Eigen::MatrixXd do_predict_proba(const Eigen::MatrixXd& x, int threads) const override;

private:
    std::vector<cart::Tree> stumps_;
    std::vector<double> alphas_;
    std::vector<double> errors_;
};

} // namespace scan
