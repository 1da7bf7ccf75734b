#include "scan/ml/logistic.hpp"

#include <cmath>
#include <deque>

namespace scan {

namespace {

struct Objective {
    const Eigen::MatrixXd& x;
    const std::vector<int>& y;
    int n_classes;
    double lambda;

    // theta layout: K*D weights (column-major blocks of W) then K biases
    double eval(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) const {
        const Eigen::Index n = x.rows();
        const Eigen::Index d = x.cols();
        const int k = n_classes;
        Eigen::Map<const Eigen::MatrixXd> w(theta.data(), k, d);
        Eigen::Map<const Eigen::VectorXd> b(theta.data() + k * d, k);

        Eigen::MatrixXd logits = (x * w.transpose()).rowwise() + b.transpose();
        double loss = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double m = logits.row(i).maxCoeff();
            logits.row(i) = (logits.row(i).array() - m).exp();
            const double z = logits.row(i).sum();
            loss -= std::log(std::max(logits(i, y[i]) / z, 1e-300));
            logits.row(i) /= z; // now probabilities
        }
        loss /= static_cast<double>(n);
        loss += 0.5 * lambda / static_cast<double>(n) * w.squaredNorm();

        if (grad) {
            for (Eigen::Index i = 0; i < n; ++i) logits(i, y[i]) -= 1.0;
            logits /= static_cast<double>(n);
            grad->resize(theta.size());
            Eigen::Map<Eigen::MatrixXd> gw(grad->data(), k, d);
            Eigen::Map<Eigen::VectorXd> gb(grad->data() + k * d, k);
            gw = logits.transpose() * x + (lambda / static_cast<double>(n)) * w;
            gb = logits.colwise().sum();
        }
        return loss;
    }
};

} // namespace

void LogisticRegressionClassifier::do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                          int /*threads*/) {
    const Eigen::Index d = x.cols();
    const int k = n_classes_;
    const Objective obj{x, y, k, spec_.lr_l2};

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(k * d + k);
    Eigen::VectorXd grad;
    double loss = obj.eval(theta, &grad);

    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;
    const int memory = 10;
    iterations_ = 0;

    for (int iter = 0; iter < spec_.lr_max_iter; ++iter) {
        if (grad.lpNorm<Eigen::Infinity>() <= spec_.lr_tol) break;

        // two-loop recursion
        Eigen::VectorXd q = grad;
        std::vector<double> alpha(s_hist.size());
        for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
            alpha[i] = rho_hist[i] * s_hist[i].dot(q);
            q -= alpha[i] * y_hist[i];
        }
        if (!s_hist.empty()) {
            const auto& s = s_hist.back();
            const auto& yv = y_hist.back();
            q *= s.dot(yv) / yv.dot(yv);
        }
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            const double beta = rho_hist[i] * y_hist[i].dot(q);
            q += (alpha[i] - beta) * s_hist[i];
        }
        Eigen::VectorXd direction = -q;

        double dir_deriv = grad.dot(direction);
        if (dir_deriv >= 0.0) { // not a descent direction; restart from steepest
            direction = -grad;
            dir_deriv = -grad.squaredNorm();
        }

        double t = iter == 0 ? std::min(1.0, 1.0 / grad.lpNorm<1>()) : 1.0;
        const double c1 = 1e-4;
        Eigen::VectorXd theta_new;
        double loss_new = loss;
        bool accepted = false;
        for (int half = 0; half < 60; ++half) {
            theta_new = theta + t * direction;
            loss_new = obj.eval(theta_new, nullptr);
            if (loss_new <= loss + c1 * t * dir_deriv) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;

        Eigen::VectorXd grad_new;
        obj.eval(theta_new, &grad_new);
        Eigen::VectorXd s = theta_new - theta;
        Eigen::VectorXd yv = grad_new - grad;
        const double sy = s.dot(yv);
        if (sy > 1e-12 * s.norm() * yv.norm()) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(yv));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        theta = std::move(theta_new);
        grad = std::move(grad_new);
        loss = loss_new;
        iterations_ = iter + 1;
    }

    w_ = Eigen::Map<const Eigen::MatrixXd>(theta.data(), k, d);
    b_ = theta.tail(k);
}

Eigen::MatrixXd LogisticRegressionClassifier::do_predict_proba(const Eigen::MatrixXd& x,
                                                               int /*threads*/) const {
    Eigen::MatrixXd logits = (x * w_.transpose()).rowwise() + b_.transpose();
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        const double m = logits.row(i).maxCoeff();
        logits.row(i) = (logits.row(i).array() - m).exp();
        logits.row(i) /= logits.row(i).sum();
    }
    return logits;
}

void LogisticRegressionClassifier::save_state(BinaryWriter& w) const {
    w.put_matrix(w_);
    w.put_vector_xd(b_);
    w.put<std::int32_t>(iterations_);
}

void LogisticRegressionClassifier::load_state(BinaryReader& r) {
    w_ = r.get_matrix();
    b_ = r.get_vector_xd();
    iterations_ = r.get<std::int32_t>();
}

} // namespace scan
