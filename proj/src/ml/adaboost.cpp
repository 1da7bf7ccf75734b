#include "scan/ml/adaboost.hpp"

#include <cmath>
#include <numeric>

#include "scan/util/error.hpp"
#include "scan/util/parallel.hpp"

namespace scan {

void AdaBoostClassifier::do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                int /*threads*/) {
    const int n = static_cast<int>(x.rows());
    const double k = n_classes_;
    std::vector<double> weights(n, 1.0 / n);
    std::vector<int> indices(n);
    stumps_.clear();
    alphas_.clear();
    errors_.clear();

    for (int round = 0; round < spec_.ada_rounds; ++round) {
        std::iota(indices.begin(), indices.end(), 0);
        cart::GrowOptions opt;
        opt.max_depth = 1;
        opt.sample_weights = weights.data();
        cart::Tree stump = cart::grow_tree(x, y, n_classes_, indices, opt);

        std::vector<int> pred(n);
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            pred[i] = stump.vote(x.row(i));
            if (pred[i] != y[i]) err += weights[i];
        }

        if (err <= 0.0) {
            // perfect stump: keep it alone with full confidence
            stumps_ = {std::move(stump)};
            alphas_ = {1.0};
            errors_ = {0.0};
            return;
        }
        if (err >= 1.0 - 1.0 / k) {
            // SAMME validity condition violated; halt
            if (stumps_.empty()) {
                throw NumericError("adaboost: first stump is no better than chance");
            }
            return;
        }

        const double alpha = std::log((1.0 - err) / err) + std::log(k - 1.0);
        stumps_.push_back(std::move(stump));
        alphas_.push_back(alpha);
        errors_.push_back(err);

        double wsum = 0.0;
        for (int i = 0; i < n; ++i) {
            if (pred[i] != y[i]) weights[i] *= std::exp(alpha);
            wsum += weights[i];
        }
        for (double& w : weights) w /= wsum;
    }
}

Eigen::MatrixXd AdaBoostClassifier::do_predict_proba(const Eigen::MatrixXd& x,
                                                     int threads) const {
    const double alpha_sum = std::accumulate(alphas_.begin(), alphas_.end(), 0.0);
    Eigen::MatrixXd proba = Eigen::MatrixXd::Zero(x.rows(), n_classes_);
    parallel_for(x.rows(), threads, [&](std::size_t r) {
        for (std::size_t m = 0; m < stumps_.size(); ++m) {
            proba(r, stumps_[m].vote(x.row(r))) += alphas_[m] / alpha_sum;
        }
    });
    return proba;
}

void AdaBoostClassifier::save_state(BinaryWriter& w) const {
    w.put<std::uint64_t>(stumps_.size());
    for (const auto& s : stumps_) s.save(w);
    w.put_vector(alphas_);
    w.put_vector(errors_);
}

void AdaBoostClassifier::load_state(BinaryReader& r) {
    stumps_.resize(r.get<std::uint64_t>());
    for (auto& s : stumps_) s = cart::Tree::load(r);
    alphas_ = r.get_vector<double>();
    errors_ = r.get_vector<double>();
}

} // namespace scan
