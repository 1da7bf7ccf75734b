#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "scan/util/binary_io.hpp"

namespace scan {

enum class Algorithm : int {
    decision_tree = 0,
    random_forest = 1,
    gradient_boosted_trees = 2,
    gbt_random_forest = 3,
    knn = 4,
    gaussian_nb = 5,
    adaboost = 6,
    qda = 7,
    mlp = 8,
    logistic_regression = 9,
};

const std::string& to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

/// Algorithm choice, seed and hyperparameters. Every default below is the
/// documented "default parameters" configuration of the suite; evaluation
/// runs never override them.
struct ClassifierSpec {
    Algorithm algorithm = Algorithm::random_forest;
    std::uint64_t seed = 0;

    // random_forest: bagged CART, per-split feature subset ceil(sqrt(D)),
    // grown to purity, probabilities are per-tree vote fractions.
    int rf_trees = 100;

    // gradient_boosted_trees: multi-class softmax, one depth-limited
    // regression tree per class per round on first/second-order statistics.
    int gbt_rounds = 100;
    int gbt_max_depth = 6;
    double gbt_learning_rate = 0.3;
    double gbt_l2 = 1.0;
    double gbt_min_child_weight = 1.0;

    // gbt_random_forest: same machinery, one round of many parallel trees,
    // averaged, with row/column subsampling and unit learning rate.
    int gbtrf_trees = 100;
    double gbtrf_row_subsample = 0.8;
    double gbtrf_col_subsample = 0.8;
    double gbtrf_learning_rate = 1.0;

    int knn_k = 5; // Euclidean, uniform weights

    double gnb_var_smoothing = 1e-9; // times max feature variance

    int ada_rounds = 50; // SAMME with depth-1 stumps

    double qda_ridge = 1e-6; // times trace(cov)/D, added on the diagonal

    int mlp_hidden = 100;
    int mlp_max_epochs = 200;
    int mlp_batch = 200;
    double mlp_learning_rate = 1e-3; // Adam step size
    double mlp_plateau_tol = 1e-4;   // stop after `patience` epochs without
    int mlp_patience = 10;           // this much training-loss improvement

    double lr_l2 = 1.0; // penalty lambda/(2N) * ||W||^2, bias unpenalized
    double lr_tol = 1e-6;
    int lr_max_iter = 1000;
};

void validate_spec(const ClassifierSpec& spec);
void serialize_spec(BinaryWriter& w, const ClassifierSpec& spec);
ClassifierSpec deserialize_spec(BinaryReader& r);

struct TrainInfo {
    double seconds = 0.0;
    Eigen::Index n_samples = 0;
    Eigen::Index n_features = 0;
};

/// Lowest-index argmax; the global tie-breaking rule.
int argmax_lowest(const Eigen::Ref<const Eigen::RowVectorXd>& row);

/// Common train / predict-probability contract. Rows of predict_proba sum
/// to 1 within 1e-9; fitted models are immutable and safe for concurrent
/// prediction. Training that parallelizes internally derives per-unit seeds,
/// so results are identical for any thread count.
class Classifier {
public:
    virtual ~Classifier() = default;

    void fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes, int threads = 1);
    Eigen::MatrixXd predict_proba(const Eigen::MatrixXd& x, int threads = 1) const;
    std::vector<int> predict(const Eigen::MatrixXd& x, int threads = 1) const;

    const ClassifierSpec& spec() const { return spec_; }
    int n_classes() const { return n_classes_; }
    Eigen::Index n_features() const { return info_.n_features; }
    bool fitted() const { return fitted_; }
    const TrainInfo& train_info() const { return info_; }

    virtual void save_state(BinaryWriter& w) const = 0;
    virtual void load_state(BinaryReader& r) = 0;

protected:
    explicit Classifier(ClassifierSpec spec) : spec_(std::move(spec)) {}

    virtual void do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int threads) = 0;
    virtual Eigen::MatrixXd do_predict_proba(const Eigen::MatrixXd& x, int threads) const = 0;

    ClassifierSpec spec_;
    int n_classes_ = 0;
    bool fitted_ = false;
    TrainInfo info_;

    friend std::unique_ptr<Classifier> load_classifier(BinaryReader& r);
};

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec);

/// Writes algorithm tag + spec + fitted state.
void save_classifier(BinaryWriter& w, const Classifier& c);
std::unique_ptr<Classifier> load_classifier(BinaryReader& r);

} // namespace scan
