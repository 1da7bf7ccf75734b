#pragma once

#include "scan/ml/classifier.hpp"

namespace scan {

namespace gbt {

/// Regression tree over binned features. Thresholds are stored as real
/// feature values (bin edges), so prediction works on unbinned data.
struct Node {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0; // leaves: additive margin contribution
};

struct Tree {
    std::vector<Node> nodes;
    double predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
    void save(BinaryWriter& w) const;
    static Tree load(BinaryReader& r);
};

} // namespace gbt

/// Multi-class softmax gradient boosting with histogram split finding
/// (256 quantile bins). Each round fits one depth-limited regression tree
/// per class to the first/second-order gradient statistics, with L2-
/// regularized Newton leaf weights. gbt_random_forest mode is the same
/// machinery run for a single round of many parallel row/column-subsampled
/// trees whose contributions are averaged.
class GradientBoostedTrees final : public Classifier {
public:
    explicit GradientBoostedTrees(ClassifierSpec spec) : Classifier(std::move(spec)) {}

    /// Mean softmax cross-entropy on the training set after each round
    /// (index 0 is the pre-training loss). Non-increasing by construction
    /// of the Newton steps; asserted by tests.
    const std::vector<double>& training_loss_curve() const { return loss_curve_; }

    const std::vector<std::vector<gbt::Tree>>& rounds() const { return rounds_; }

    void save_state(BinaryWriter& w) const override;
    void load_state(BinaryReader& r) override;

protected:
    void do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int threads) override;
    Eigen::MatrixXd do_predict_proba(const Eigen::MatrixXd& x, int threads) const override;

private:
    std::vector<std::vector<gbt::Tree>> rounds_; // [round][class * parallel + t]
    std::vector<double> loss_curve_;
};

} // namespace scan
