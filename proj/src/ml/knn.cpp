#include "scan/ml/knn.hpp"

#include <algorithm>

#include "scan/util/parallel.hpp"

namespace scan {

void KnnClassifier::do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int /*threads*/) {
    train_x_ = x;
    train_y_ = y;
}

Eigen::MatrixXd KnnClassifier::do_predict_proba(const Eigen::MatrixXd& x, int threads) const {
    const int k = std::min<int>(spec_.knn_k, static_cast<int>(train_x_.rows()));
    const Eigen::Index n_train = train_x_.rows();
    const Eigen::Index d = train_x_.cols();
    Eigen::MatrixXd proba = Eigen::MatrixXd::Zero(x.rows(), n_classes_);

    parallel_for(x.rows(), threads, [&](std::size_t r) {
        Eigen::RowVectorXd query = x.row(r);
        std::vector<std::pair<double, int>> dist(n_train);
        for (Eigen::Index j = 0; j < n_train; ++j) {
            const double* tr = train_x_.data() + j * d;
            double s = 0.0;
            for (Eigen::Index f = 0; f < d; ++f) {
                const double diff = query[f] - tr[f];
                s += diff * diff;
            }
            dist[j] = {s, static_cast<int>(j)};
        }
        std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
        const double w = 1.0 / k;
        for (int j = 0; j < k; ++j) proba(r, train_y_[dist[j].second]) += w;
    });
    return proba;
}

void KnnClassifier::save_state(BinaryWriter& w) const {
    w.put_matrix(Eigen::MatrixXd(train_x_));
    w.put_vector(train_y_);
}

void KnnClassifier::load_state(BinaryReader& r) {
    train_x_ = r.get_matrix();
    train_y_ = r.get_vector<int>();
}

} // namespace scan
