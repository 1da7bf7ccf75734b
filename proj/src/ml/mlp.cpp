#include "scan/ml/mlp.hpp"

#include <cmath>
#include <numeric>

#include "scan/util/rng.hpp"

namespace scan {

namespace mlp_detail {

namespace {

Eigen::MatrixXd softmax_rows(Eigen::MatrixXd z) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        const double m = z.row(i).maxCoeff();
        z.row(i) = (z.row(i).array() - m).exp();
        z.row(i) /= z.row(i).sum();
    }
    return z;
}

} // namespace

Eigen::MatrixXd forward_proba(const Params& p, const Eigen::MatrixXd& x) {
    Eigen::MatrixXd a1 =
        ((x * p.w1.transpose()).rowwise() + p.b1.transpose()).cwiseMax(0.0);
    return softmax_rows((a1 * p.w2.transpose()).rowwise() + p.b2.transpose());
}

double loss_and_grad(const Params& p, const Eigen::MatrixXd& x, const std::vector<int>& y,
                     Params* grads) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd z1 = (x * p.w1.transpose()).rowwise() + p.b1.transpose();
    Eigen::MatrixXd a1 = z1.cwiseMax(0.0);
    Eigen::MatrixXd proba = softmax_rows((a1 * p.w2.transpose()).rowwise() + p.b2.transpose());

    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        loss -= std::log(std::max(proba(i, y[i]), 1e-300));
    }
    loss /= static_cast<double>(n);

    if (grads) {
        Eigen::MatrixXd dz2 = proba;
        for (Eigen::Index i = 0; i < n; ++i) dz2(i, y[i]) -= 1.0;
        dz2 /= static_cast<double>(n);

        grads->w2 = dz2.transpose() * a1;
        grads->b2 = dz2.colwise().sum();
        Eigen::MatrixXd dz1 =
            (dz2 * p.w2).array() * (z1.array() > 0.0).cast<double>();
        grads->w1 = dz1.transpose() * x;
        grads->b1 = dz1.colwise().sum();
    }
    return loss;
}

} // namespace mlp_detail

void MlpClassifier::do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int /*threads*/) {
    using mlp_detail::Params;
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    const int h = spec_.mlp_hidden;
    const int k = n_classes_;

    Rng rng(mix_seed(spec_.seed, 0x6d6cULL));
    const auto glorot = [&](Eigen::MatrixXd& w, int fan_in, int fan_out) {
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.uniform(-bound, bound);
        }
    };
    params_.w1.resize(h, d);
    params_.w2.resize(k, h);
    glorot(params_.w1, static_cast<int>(d), h);
    glorot(params_.w2, h, k);
    params_.b1 = Eigen::VectorXd::Zero(h);
    params_.b2 = Eigen::VectorXd::Zero(k);

    Params m, v; // Adam moments
    m.w1 = Eigen::MatrixXd::Zero(h, d);
    m.w2 = Eigen::MatrixXd::Zero(k, h);
    m.b1 = Eigen::VectorXd::Zero(h);
    m.b2 = Eigen::VectorXd::Zero(k);
    v = m;

    const double lr = spec_.mlp_learning_rate;
    const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    long long step = 0;

    const int batch_size = std::min<int>(spec_.mlp_batch, static_cast<int>(n));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    loss_curve_.clear();
    double best_loss = std::numeric_limits<double>::infinity();
    int no_improvement = 0;

    Params g;
    for (int epoch = 0; epoch < spec_.mlp_max_epochs; ++epoch) {
        rng.shuffle(perm);
        double epoch_loss = 0.0;
        for (int start = 0; start < n; start += batch_size) {
            const int b = std::min<int>(batch_size, static_cast<int>(n) - start);
            Eigen::MatrixXd xb(b, d);
            std::vector<int> yb(b);
            for (int i = 0; i < b; ++i) {
                xb.row(i) = x.row(perm[start + i]);
                yb[i] = y[perm[start + i]];
            }
            epoch_loss += loss_and_grad(params_, xb, yb, &g) * b;

            ++step;
            const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
            const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
            const auto adam = [&](Eigen::MatrixXd& theta, Eigen::MatrixXd& mm, Eigen::MatrixXd& vv,
                                  const Eigen::MatrixXd& grad) {
                mm = beta1 * mm + (1.0 - beta1) * grad;
                vv = beta2 * vv + (1.0 - beta2) * grad.array().square().matrix();
                theta.array() -=
                    lr * (mm.array() / c1) / ((vv.array() / c2).sqrt() + eps);
            };
            adam(params_.w1, m.w1, v.w1, g.w1);
            adam(params_.w2, m.w2, v.w2, g.w2);
            const auto adam_vec = [&](Eigen::VectorXd& theta, Eigen::VectorXd& mm,
                                      Eigen::VectorXd& vv, const Eigen::VectorXd& grad) {
                mm = beta1 * mm + (1.0 - beta1) * grad;
                vv = beta2 * vv + (1.0 - beta2) * grad.array().square().matrix();
                theta.array() -=
                    lr * (mm.array() / c1) / ((vv.array() / c2).sqrt() + eps);
            };
            adam_vec(params_.b1, m.b1, v.b1, g.b1);
            adam_vec(params_.b2, m.b2, v.b2, g.b2);
        }
        epoch_loss /= static_cast<double>(n);
        loss_curve_.push_back(epoch_loss);

        if (epoch_loss > best_loss - spec_.mlp_plateau_tol) {
            ++no_improvement;
        } else {
            no_improvement = 0;
        }
        if (epoch_loss < best_loss) best_loss = epoch_loss;
        if (no_improvement >= spec_.mlp_patience) break;
    }
}

Eigen::MatrixXd MlpClassifier::do_predict_proba(const Eigen::MatrixXd& x, int /*threads*/) const {
    return mlp_detail::forward_proba(params_, x);
}

void MlpClassifier::save_state(BinaryWriter& w) const {
    w.put_matrix(params_.w1);
    w.put_vector_xd(params_.b1);
    w.put_matrix(params_.w2);
    w.put_vector_xd(params_.b2);
    w.put_vector(loss_curve_);
}

void MlpClassifier::load_state(BinaryReader& r) {
    params_.w1 = r.get_matrix();
    params_.b1 = r.get_vector_xd();
    params_.w2 = r.get_matrix();
    params_.b2 = r.get_vector_xd();
    loss_curve_ = r.get_vector<double>();
}

} // namespace scan
