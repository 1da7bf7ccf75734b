#include "scan/ml/gaussian_nb.hpp"

#include <cmath>

#include "scan/util/parallel.hpp"

namespace scan {

void GaussianNbClassifier::do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                  int /*threads*/) {
    const Eigen::Index d = x.cols();
    means_ = Eigen::MatrixXd::Zero(n_classes_, d);
    variances_ = Eigen::MatrixXd::Zero(n_classes_, d);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_classes_);

    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        means_.row(y[i]) += x.row(i);
        counts[y[i]] += 1.0;
    }
    for (int k = 0; k < n_classes_; ++k) means_.row(k) /= counts[k];
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        variances_.row(y[i]) += (x.row(i) - means_.row(y[i])).array().square().matrix();
    }
    for (int k = 0; k < n_classes_; ++k) variances_.row(k) /= counts[k];

    // smoothing: epsilon = var_smoothing * max feature variance of the data
    const Eigen::RowVectorXd global_mean = x.colwise().mean();
    const double max_var =
        ((x.rowwise() - global_mean).array().square().colwise().sum() / x.rows()).maxCoeff();
    variances_.array() += spec_.gnb_var_smoothing * max_var;

    log_priors_ = (counts / static_cast<double>(x.rows())).array().log();
}

Eigen::MatrixXd GaussianNbClassifier::log_posteriors(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd out(x.rows(), n_classes_);
    for (int k = 0; k < n_classes_; ++k) {
        const double log_norm = -0.5 * (variances_.row(k).array() * 2.0 * M_PI).log().sum();
        out.col(k) =
            (((x.rowwise() - means_.row(k)).array().square().rowwise() /
              variances_.row(k).array()) *
             -0.5)
                .rowwise()
                .sum();
        out.col(k).array() += log_norm + log_priors_[k];
    }
    return out;
}

Eigen::MatrixXd GaussianNbClassifier::do_predict_proba(const Eigen::MatrixXd& x,
                                                       int /*threads*/) const {
    Eigen::MatrixXd lp = log_posteriors(x);
    Eigen::MatrixXd proba(lp.rows(), lp.cols());
    for (Eigen::Index i = 0; i < lp.rows(); ++i) {
        const double m = lp.row(i).maxCoeff();
        proba.row(i) = (lp.row(i).array() - m).exp();
        proba.row(i) /= proba.row(i).sum();
    }
    return proba;
}

void GaussianNbClassifier::save_state(BinaryWriter& w) const {
    w.put_matrix(means_);
    w.put_matrix(variances_);
    w.put_vector_xd(log_priors_);
}

void GaussianNbClassifier::load_state(BinaryReader& r) {
    means_ = r.get_matrix();
    variances_ = r.get_matrix();
    log_priors_ = r.get_vector_xd();
}

} // namespace scan
