#pragma once

#include <Eigen/Core>

#include "scan/sim/dataset.hpp"

namespace scan {

enum class Provenance { raw, log_normalized, pca_projected };

/// N x D feature matrix with a provenance tag (rows are curves).
struct FeatureMatrix {
    Eigen::MatrixXd values;
    Provenance provenance = Provenance::raw;
};

/// Row-local part of the feature transform:
/// log10(max(I_i / max_j I_j, 1e-12)) per curve. Leakage-free, so it can be
/// computed once for a whole dataset before fold splitting.
FeatureMatrix log_normalize(const Dataset& ds);
FeatureMatrix log_normalize(const Eigen::MatrixXd& raw_intensities);

/// Column standardization fitted on a training set and reusable on held-out
/// data. Constant columns divide by 1.
class Preprocessor {
public:
    void fit(const FeatureMatrix& log_features);
    FeatureMatrix transform(const FeatureMatrix& log_features) const;

    bool fitted() const { return fitted_; }
    const Eigen::VectorXd& column_means() const { return means_; }
    const Eigen::VectorXd& column_stds() const { return stds_; }

    // serialization hooks (model artifact)
    void set_statistics(Eigen::VectorXd means, Eigen::VectorXd stds);

private:
    Eigen::VectorXd means_;
    Eigen::VectorXd stds_;
    bool fitted_ = false;
};

} // namespace scan
