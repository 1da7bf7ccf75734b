#include "scan/feat/pca.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "scan/util/error.hpp"

namespace scan {

PcaModel pca_fit(const FeatureMatrix& x, double variance_threshold) {
    if (!(variance_threshold > 0.0 && variance_threshold <= 1.0)) {
        throw std::invalid_argument("variance threshold must be in (0, 1]");
    }
    const Eigen::Index n = x.values.rows();
    const Eigen::Index d = x.values.cols();
    if (n < 2) throw std::invalid_argument("PCA requires at least 2 rows");

    PcaModel model;
    model.threshold = variance_threshold;
    model.mean = x.values.colwise().mean();
    Eigen::MatrixXd centered = x.values.rowwise() - model.mean.transpose();

    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const Eigen::Index rank_max = sv.size();

    Eigen::VectorXd eigenvalues(rank_max);
    for (Eigen::Index i = 0; i < rank_max; ++i) eigenvalues[i] = sv[i] * sv[i] / (n - 1);
    const double total = eigenvalues.sum();
    if (total <= 0.0) throw NumericError("PCA input has zero total variance");
    model.total_variance = total;

    Eigen::Index k = rank_max;
    double cum = 0.0;
    for (Eigen::Index i = 0; i < rank_max; ++i) {
        cum += eigenvalues[i] / total;
        if (cum + 1e-12 >= variance_threshold) {
            k = i + 1;
            break;
        }
    }

    model.components = svd.matrixV().leftCols(k).transpose();
    model.eigenvalues = eigenvalues.head(k);
    model.explained_ratio = (eigenvalues.head(k) / total).eval();

    // Deterministic orientation: flip each component so its
    // largest-magnitude entry (lowest index on ties) is positive.
    for (Eigen::Index r = 0; r < k; ++r) {
        Eigen::Index arg = 0;
        double best = 0.0;
        for (Eigen::Index c = 0; c < d; ++c) {
            const double mag = std::fabs(model.components(r, c));
            if (mag > best) {
                best = mag;
                arg = c;
            }
        }
        if (model.components(r, arg) < 0.0) model.components.row(r) = -model.components.row(r);
    }
    return model;
}

FeatureMatrix pca_transform(const PcaModel& model, const FeatureMatrix& x) {
    if (x.values.cols() != model.input_dim()) {
        throw DataError("PCA dimension mismatch: input has " + std::to_string(x.values.cols()) +
                        " columns, model expects " + std::to_string(model.input_dim()));
    }
    FeatureMatrix out;
    out.values = (x.values.rowwise() - model.mean.transpose()) * model.components.transpose();
    out.provenance = Provenance::pca_projected;
    return out;
}

Eigen::MatrixXd pca_inverse_transform(const PcaModel& model, const FeatureMatrix& projected) {
    if (projected.values.cols() != model.n_components()) {
        throw DataError("PCA inverse-transform dimension mismatch");
    }
    return (projected.values * model.components).rowwise() + model.mean.transpose();
}

} // namespace scan
