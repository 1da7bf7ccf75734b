#include "scan/ml/qda.hpp"

#include <cmath>

#include "scan/util/error.hpp"
#include "scan/util/parallel.hpp"

namespace scan {

void QdaClassifier::factorize(const std::vector<Eigen::MatrixXd>& covariances) {
    const int k = static_cast<int>(covariances.size());
    chol_.resize(k);
    log_dets_.resize(k);
    for (int c = 0; c < k; ++c) {
        Eigen::LLT<Eigen::MatrixXd> llt(covariances[c]);
        if (llt.info() != Eigen::Success) {
            throw NumericError("QDA covariance for class " + std::to_string(c) +
                               " is not positive definite");
        }
        chol_[c] = llt.matrixL();
        log_dets_[c] = 2.0 * chol_[c].diagonal().array().log().sum();
    }
}

void QdaClassifier::do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int threads) {
    const Eigen::Index d = x.cols();
    means_ = Eigen::MatrixXd::Zero(n_classes_, d);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_classes_);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        means_.row(y[i]) += x.row(i);
        counts[y[i]] += 1.0;
    }
    for (int k = 0; k < n_classes_; ++k) means_.row(k) /= counts[k];

    std::vector<Eigen::MatrixXd> covs(n_classes_);
    parallel_for(n_classes_, threads, [&](std::size_t k) {
        Eigen::MatrixXd centered(static_cast<Eigen::Index>(counts[k]), d);
        Eigen::Index row = 0;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            if (y[i] == static_cast<int>(k)) centered.row(row++) = x.row(i) - means_.row(k);
        }
        const double denom = std::max(1.0, counts[k] - 1.0);
        covs[k] = centered.transpose() * centered / denom;
        const double ridge = spec_.qda_ridge * covs[k].trace() / static_cast<double>(d);
        covs[k].diagonal().array() += std::max(ridge, 1e-300);
    });
    factorize(covs);
    log_priors_ = (counts / static_cast<double>(x.rows())).array().log();
}

void QdaClassifier::set_parts(Eigen::MatrixXd means,
                              const std::vector<Eigen::MatrixXd>& covariances,
                              Eigen::VectorXd log_priors, int n_classes) {
    means_ = std::move(means);
    log_priors_ = std::move(log_priors);
    n_classes_ = n_classes;
    factorize(covariances);
    info_.n_features = means_.cols();
    info_.n_samples = 0;
    fitted_ = true;
}

Eigen::MatrixXd QdaClassifier::log_posteriors(const Eigen::MatrixXd& x) const {
    const Eigen::Index d = x.cols();
    const double const_term = -0.5 * d * std::log(2.0 * M_PI);
    Eigen::MatrixXd out(x.rows(), n_classes_);
    for (int k = 0; k < n_classes_; ++k) {
        Eigen::MatrixXd centered = (x.rowwise() - means_.row(k)).transpose(); // D x N
        chol_[k].triangularView<Eigen::Lower>().solveInPlace(centered);
        out.col(k) = -0.5 * centered.array().square().colwise().sum().transpose();
        out.col(k).array() += const_term - 0.5 * log_dets_[k] + log_priors_[k];
    }
    return out;
}

Eigen::MatrixXd QdaClassifier::do_predict_proba(const Eigen::MatrixXd& x, int /*threads*/) const {
    Eigen::MatrixXd lp = log_posteriors(x);
    Eigen::MatrixXd proba(lp.rows(), lp.cols());
    for (Eigen::Index i = 0; i < lp.rows(); ++i) {
        const double m = lp.row(i).maxCoeff();
        proba.row(i) = (lp.row(i).array() - m).exp();
        proba.row(i) /= proba.row(i).sum();
    }
    return proba;
}

void QdaClassifier::save_state(BinaryWriter& w) const {
    w.put_matrix(means_);
    w.put<std::uint64_t>(chol_.size());
    for (const auto& c : chol_) w.put_matrix(c);
    w.put_vector_xd(log_dets_);
    w.put_vector_xd(log_priors_);
}

void QdaClassifier::load_state(BinaryReader& r) {
    means_ = r.get_matrix();
    chol_.resize(r.get<std::uint64_t>());
    for (auto& c : chol_) c = r.get_matrix();
    log_dets_ = r.get_vector_xd();
    log_priors_ = r.get_vector_xd();
}

} // namespace scan
