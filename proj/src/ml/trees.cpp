#include "scan/ml/trees.hpp"

#include <cmath>
#include <numeric>

#include "scan/util/parallel.hpp"

namespace scan {

void DecisionTreeClassifier::do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                    int /*threads*/) {
    std::vector<int> indices(x.rows());
    std::iota(indices.begin(), indices.end(), 0);
    cart::GrowOptions opt;
    tree_ = cart::grow_tree(x, y, n_classes_, indices, opt);
}

Eigen::MatrixXd DecisionTreeClassifier::do_predict_proba(const Eigen::MatrixXd& x,
                                                         int threads) const {
    Eigen::MatrixXd proba(x.rows(), n_classes_);
    parallel_for(x.rows(), threads, [&](std::size_t r) {
        const auto& dist = tree_.leaf_distribution(x.row(r));
        for (int k = 0; k < n_classes_; ++k) proba(r, k) = dist[k];
    });
    return proba;
}

void DecisionTreeClassifier::save_state(BinaryWriter& w) const { tree_.save(w); }

void DecisionTreeClassifier::load_state(BinaryReader& r) { tree_ = cart::Tree::load(r); }

void RandomForestClassifier::do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                    int threads) {
    const int n = static_cast<int>(x.rows());
    const int features = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(x.cols()))));
    trees_.assign(spec_.rf_trees, {});
    parallel_for(trees_.size(), threads, [&](std::size_t t) {
        Rng rng(mix_seed(spec_.seed, 0x7265ULL, t));
        std::vector<int> bootstrap(n);
        for (int i = 0; i < n; ++i) bootstrap[i] = static_cast<int>(rng.uniform_int(n));
        std::sort(bootstrap.begin(), bootstrap.end());
        cart::GrowOptions opt;
        opt.features_per_split = features;
        opt.rng = &rng;
        trees_[t] = cart::grow_tree(x, y, n_classes_, bootstrap, opt);
    });
}

Eigen::MatrixXd RandomForestClassifier::do_predict_proba(const Eigen::MatrixXd& x,
                                                         int threads) const {
    Eigen::MatrixXd proba = Eigen::MatrixXd::Zero(x.rows(), n_classes_);
    const double inv = 1.0 / static_cast<double>(trees_.size());
    parallel_for(x.rows(), threads, [&](std::size_t r) {
        for (const auto& tree : trees_) proba(r, tree.vote(x.row(r))) += inv;
    });
    return proba;
}

void RandomForestClassifier::save_state(BinaryWriter& w) const {
    w.put<std::uint64_t>(trees_.size());
    for (const auto& t : trees_) t.save(w);
}

void RandomForestClassifier::load_state(BinaryReader& r) {
    trees_.resize(r.get<std::uint64_t>());
    for (auto& t : trees_) t = cart::Tree::load(r);
}

} // namespace scan
