#include "scan/feat/preprocess.hpp"

#include <cmath>

#include "scan/util/error.hpp"

namespace scan {

namespace {

constexpr double kLogFloor = 1e-12;

FeatureMatrix log_normalize_matrix(const Eigen::MatrixXd& raw) {
    FeatureMatrix out;
    out.values.resize(raw.rows(), raw.cols());
    for (Eigen::Index r = 0; r < raw.rows(); ++r) {
        double peak = 0.0;
        for (Eigen::Index c = 0; c < raw.cols(); ++c) {
            const double v = raw(r, c);
            if (!std::isfinite(v)) {
                throw DataError("non-finite intensity in curve " + std::to_string(r));
            }
            peak = std::max(peak, v);
        }
        if (peak <= 0.0) {
            // all-zero curve: every ratio hits the floor
            out.values.row(r).setConstant(std::log10(kLogFloor));
            continue;
        }
        for (Eigen::Index c = 0; c < raw.cols(); ++c) {
            out.values(r, c) = std::log10(std::max(raw(r, c) / peak, kLogFloor));
        }
    }
    out.provenance = Provenance::log_normalized;
    return out;
}

} // namespace

FeatureMatrix log_normalize(const Eigen::MatrixXd& raw_intensities) {
    return log_normalize_matrix(raw_intensities);
}

FeatureMatrix log_normalize(const Dataset& ds) {
    if (ds.curves.empty()) throw DataError("empty dataset");
    const std::size_t width = ds.q.size();
    Eigen::MatrixXd raw(ds.curves.size(), width);
    for (std::size_t r = 0; r < ds.curves.size(); ++r) {
        if (ds.curves[r].intensity.size() != width) {
            throw DataError("curve " + std::to_string(r) + " has " +
                            std::to_string(ds.curves[r].intensity.size()) +
                            " points, expected " + std::to_string(width));
        }
        for (std::size_t c = 0; c < width; ++c) raw(r, c) = ds.curves[r].intensity[c];
    }
    return log_normalize_matrix(raw);
}

void Preprocessor::fit(const FeatureMatrix& log_features) {
    const auto& x = log_features.values;
    if (x.rows() < 1) throw DataError("cannot fit preprocessor on empty matrix");
    means_ = x.colwise().mean();
    Eigen::MatrixXd centered = x.rowwise() - means_.transpose();
    stds_ = (centered.array().square().colwise().sum() / x.rows()).sqrt();
    for (Eigen::Index c = 0; c < stds_.size(); ++c) {
        if (stds_[c] < 1e-12) stds_[c] = 1.0;
    }
    fitted_ = true;
}

FeatureMatrix Preprocessor::transform(const FeatureMatrix& log_features) const {
    if (!fitted_) throw NumericError("preprocessor not fitted");
    if (log_features.values.cols() != means_.size()) {
        throw DataError("feature width " + std::to_string(log_features.values.cols()) +
                        " does not match fitted width " + std::to_string(means_.size()));
    }
    FeatureMatrix out;
    out.values = (log_features.values.rowwise() - means_.transpose()).array().rowwise() /
                 stds_.transpose().array();
    out.provenance = log_features.provenance;
    return out;
}

void Preprocessor::set_statistics(Eigen::VectorXd means, Eigen::VectorXd stds) {
    means_ = std::move(means);
    stds_ = std::move(stds);
    fitted_ = true;
}

} // namespace scan
