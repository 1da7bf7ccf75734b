#pragma once

#include <Eigen/Core>

#include "scan/feat/preprocess.hpp"

namespace scan {

/// Principal component model fitted by SVD of the centered data matrix.
/// Rows of `components` are orthonormal; eigenvalues (sample covariance
/// convention, divisor N-1) are sorted descending. The sign convention —
/// largest-magnitude entry of each component is positive — makes the
/// decomposition deterministic.
struct PcaModel {
    Eigen::VectorXd mean;              // D
    Eigen::MatrixXd components;        // k x D
    Eigen::VectorXd eigenvalues;       // k, non-increasing
    Eigen::VectorXd explained_ratio;   // k, fractions of total variance
    double total_variance = 0.0;       // sum over all D directions
    double threshold = 0.0;

    Eigen::Index n_components() const { return components.rows(); }
    Eigen::Index input_dim() const { return mean.size(); }
};

/// Fits the smallest k whose cumulative explained variance reaches
/// `variance_threshold` (in (0, 1]). Throws NumericError on zero-variance
/// input, std::invalid_argument on a bad threshold or N < 2.
PcaModel pca_fit(const FeatureMatrix& x, double variance_threshold);

/// Projects rows onto the component basis: Y = (X - mean) * components^T.
FeatureMatrix pca_transform(const PcaModel& model, const FeatureMatrix& x);

/// Back-projection used by reconstruction-error checks.
Eigen::MatrixXd pca_inverse_transform(const PcaModel& model, const FeatureMatrix& projected);

} // namespace scan
