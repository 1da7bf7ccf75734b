#pragma once

#include "scan/ml/classifier.hpp"

namespace scan {

/// k nearest neighbors, Euclidean distance, uniform vote weights.
/// Distances are computed by a direct per-pair scan (no algebraic
/// rearrangement), so predictions are exactly those of a brute-force
/// reference; distance ties break on the lower training index.
class KnnClassifier final : public Classifier {
public:
    explicit KnnClassifier(ClassifierSpec spec) : Classifier(std::move(spec)) {}

    void save_state(BinaryWriter& w) const override;
    void load_state(BinaryReader& r) override;

protected:
    void do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int threads) override;
    Eigen::MatrixXd do_predict_proba(const Eigen::MatrixXd& x, int threads) const override;

private:
    using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    RowMajorMatrix train_x_; // row-major so the per-pair scan streams memory
    std::vector<int> train_y_;
};

} // namespace scan
