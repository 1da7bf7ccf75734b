#pragma once

#include "scan/ml/cart.hpp"
#include "scan/ml/classifier.hpp"

namespace scan {

/// CART with exhaustive best-split search over all features, grown to
/// purity. Probabilities are leaf class distributions.
class DecisionTreeClassifier final : public Classifier {
public:
    explicit DecisionTreeClassifier(ClassifierSpec spec) : Classifier(std::move(spec)) {}

    const cart::Tree& tree() const { return tree_; }

    void save_state(BinaryWriter& w) const override;
    void load_state(BinaryReader& r) override;

protected:
    void do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int threads) override;
    Eigen::MatrixXd do_predict_proba(const Eigen::MatrixXd& x, int threads) const override;

private:
    cart::Tree tree_;
};

/// Bagged CART trees with a random ceil(sqrt(D)) feature subset per split.
/// Class probability of a row is the fraction of trees voting for the class.
class RandomForestClassifier final : public Classifier {
public:
    explicit RandomForestClassifier(ClassifierSpec spec) : Classifier(std::move(spec)) {}

    const std::vector<cart::Tree>& trees() const { return trees_; }

    void save_state(BinaryWriter& w) const override;
    void load_state(BinaryReader& r) override;

protected:
    void do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int threads) override;
    Eigen::MatrixXd do_predict_proba(const Eigen::MatrixXd& x, int threads) const override;

private:
    std::vector<cart::Tree> trees_;
};

} // namespace scan
