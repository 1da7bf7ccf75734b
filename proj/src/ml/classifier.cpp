#include "scan/ml/classifier.hpp"

#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

#include "scan/ml/adaboost.hpp"
#include "scan/ml/gaussian_nb.hpp"
#include "scan/ml/gbt.hpp"
#include "scan/ml/knn.hpp"
#include "scan/ml/logistic.hpp"
#include "scan/ml/mlp.hpp"
#include "scan/ml/qda.hpp"
#include "scan/ml/stacking.hpp"
#include "scan/ml/trees.hpp"
#include "scan/util/error.hpp"

namespace scan {

namespace {

const std::array<std::string, 10> kAlgorithmNames = {
    "decision_tree", "random_forest", "gradient_boosted_trees", "gbt_random_forest",
    "knn",           "gaussian_nb",   "adaboost",               "qda",
    "mlp",           "logistic_regression",
};

constexpr std::int32_t kStackedTag = 100;

} // namespace

const std::string& to_string(Algorithm a) { return kAlgorithmNames[static_cast<int>(a)]; }

Algorithm algorithm_from_string(const std::string& name) {
    for (std::size_t i = 0; i < kAlgorithmNames.size(); ++i) {
        if (kAlgorithmNames[i] == name) return static_cast<Algorithm>(i);
    }
    throw DataError("unknown classifier: '" + name + "'");
}

void validate_spec(const ClassifierSpec& s) {
    const auto positive = [](double v, const char* what) {
        if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be > 0");
    };
    positive(s.rf_trees, "rf_trees");
    positive(s.gbt_rounds, "gbt_rounds");
    positive(s.gbt_max_depth, "gbt_max_depth");
    positive(s.gbt_learning_rate, "gbt_learning_rate");
    if (s.gbt_l2 < 0.0) throw std::invalid_argument("gbt_l2 must be >= 0");
    if (s.gbt_min_child_weight < 0.0) throw std::invalid_argument("gbt_min_child_weight must be >= 0");
    positive(s.gbtrf_trees, "gbtrf_trees");
    if (!(s.gbtrf_row_subsample > 0.0 && s.gbtrf_row_subsample <= 1.0) ||
        !(s.gbtrf_col_subsample > 0.0 && s.gbtrf_col_subsample <= 1.0)) {
        throw std::invalid_argument("subsample ratios must be in (0, 1]");
    }
    positive(s.knn_k, "knn_k");
    if (s.gnb_var_smoothing < 0.0) throw std::invalid_argument("gnb_var_smoothing must be >= 0");
    positive(s.ada_rounds, "ada_rounds");
    if (s.qda_ridge < 0.0) throw std::invalid_argument("qda_ridge must be >= 0");
    positive(s.mlp_hidden, "mlp_hidden");
    positive(s.mlp_max_epochs, "mlp_max_epochs");
    positive(s.mlp_batch, "mlp_batch");
    positive(s.mlp_learning_rate, "mlp_learning_rate");
    positive(s.mlp_patience, "mlp_patience");
    if (s.lr_l2 < 0.0) throw std::invalid_argument("lr_l2 must be >= 0");
    positive(s.lr_tol, "lr_tol");
    positive(s.lr_max_iter, "lr_max_iter");
}

void serialize_spec(BinaryWriter& w, const ClassifierSpec& s) {
    w.put<std::int32_t>(static_cast<std::int32_t>(s.algorithm));
    w.put<std::uint64_t>(s.seed);
    w.put<std::int32_t>(s.rf_trees);
    w.put<std::int32_t>(s.gbt_rounds);
    w.put<std::int32_t>(s.gbt_max_depth);
    w.put<double>(s.gbt_learning_rate);
    w.put<double>(s.gbt_l2);
    w.put<double>(s.gbt_min_child_weight);
    w.put<std::int32_t>(s.gbtrf_trees);
    w.put<double>(s.gbtrf_row_subsample);
    w.put<double>(s.gbtrf_col_subsample);
    w.put<double>(s.gbtrf_learning_rate);
    w.put<std::int32_t>(s.knn_k);
    w.put<double>(s.gnb_var_smoothing);
    w.put<std::int32_t>(s.ada_rounds);
    w.put<double>(s.qda_ridge);
    w.put<std::int32_t>(s.mlp_hidden);
    w.put<std::int32_t>(s.mlp_max_epochs);
    w.put<std::int32_t>(s.mlp_batch);
    w.put<double>(s.mlp_learning_rate);
    w.put<double>(s.mlp_plateau_tol);
    w.put<std::int32_t>(s.mlp_patience);
    w.put<double>(s.lr_l2);
    w.put<double>(s.lr_tol);
    w.put<std::int32_t>(s.lr_max_iter);
}

ClassifierSpec deserialize_spec(BinaryReader& r) {
    ClassifierSpec s;
    s.algorithm = static_cast<Algorithm>(r.get<std::int32_t>());
    s.seed = r.get<std::uint64_t>();
    s.rf_trees = r.get<std::int32_t>();
    s.gbt_rounds = r.get<std::int32_t>();
    s.gbt_max_depth = r.get<std::int32_t>();
    s.gbt_learning_rate = r.get<double>();
    s.gbt_l2 = r.get<double>();
    s.gbt_min_child_weight = r.get<double>();
    s.gbtrf_trees = r.get<std::int32_t>();
    s.gbtrf_row_subsample = r.get<double>();
    s.gbtrf_col_subsample = r.get<double>();
    s.gbtrf_learning_rate = r.get<double>();
    s.knn_k = r.get<std::int32_t>();
    s.gnb_var_smoothing = r.get<double>();
    s.ada_rounds = r.get<std::int32_t>();
    s.qda_ridge = r.get<double>();
    s.mlp_hidden = r.get<std::int32_t>();
    s.mlp_max_epochs = r.get<std::int32_t>();
    s.mlp_batch = r.get<std::int32_t>();
    s.mlp_learning_rate = r.get<double>();
    s.mlp_plateau_tol = r.get<double>();
    s.mlp_patience = r.get<std::int32_t>();
    s.lr_l2 = r.get<double>();
    s.lr_tol = r.get<double>();
    s.lr_max_iter = r.get<std::int32_t>();
    return s;
}

int argmax_lowest(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
    int best = 0;
    for (int k = 1; k < row.size(); ++k) {
        if (row[k] > row[best]) best = k;
    }
    return best;
}

void Classifier::fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
                     int threads) {
    if (x.rows() != static_cast<Eigen::Index>(y.size())) {
        throw std::invalid_argument("feature rows do not match label count");
    }
    if (n_classes < 2) throw std::invalid_argument("need at least 2 classes");
    if (x.rows() < n_classes) {
        throw std::invalid_argument("need at least one sample per class");
    }
    std::set<int> present(y.begin(), y.end());
    if (static_cast<int>(present.size()) < 2) {
        throw std::invalid_argument("degenerate labels: a single class is present");
    }
    for (int l : y) {
        if (l < 0 || l >= n_classes) throw std::invalid_argument("label out of range");
    }
    if (static_cast<int>(present.size()) != n_classes) {
        throw std::invalid_argument("every class must be present at least once");
    }
    if (!x.allFinite()) throw NumericError("non-finite feature value in training data");

    validate_spec(spec_);
    n_classes_ = n_classes;
    info_.n_samples = x.rows();
    info_.n_features = x.cols();

    const auto start = std::chrono::steady_clock::now();
    do_fit(x, y, std::max(1, threads));
    info_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fitted_ = true;
}

Eigen::MatrixXd Classifier::predict_proba(const Eigen::MatrixXd& x, int threads) const {
    if (!fitted_) throw NumericError("classifier is not fitted");
    if (x.cols() != info_.n_features) {
        throw DataError("feature dimension " + std::to_string(x.cols()) +
                        " does not match training dimension " + std::to_string(info_.n_features));
    }
    return do_predict_proba(x, std::max(1, threads));
}

std::vector<int> Classifier::predict(const Eigen::MatrixXd& x, int threads) const {
    const Eigen::MatrixXd proba = predict_proba(x, threads);
    std::vector<int> labels(proba.rows());
    for (Eigen::Index i = 0; i < proba.rows(); ++i) labels[i] = argmax_lowest(proba.row(i));
    return labels;
}

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec) {
    validate_spec(spec);
    switch (spec.algorithm) {
        case Algorithm::decision_tree:
            return std::make_unique<DecisionTreeClassifier>(spec);
        case Algorithm::random_forest:
            return std::make_unique<RandomForestClassifier>(spec);
        case Algorithm::gradient_boosted_trees:
        case Algorithm::gbt_random_forest:
            return std::make_unique<GradientBoostedTrees>(spec);
        case Algorithm::knn:
            return std::make_unique<KnnClassifier>(spec);
        case Algorithm::gaussian_nb:
            return std::make_unique<GaussianNbClassifier>(spec);
        case Algorithm::adaboost:
            return std::make_unique<AdaBoostClassifier>(spec);
        case Algorithm::qda:
            return std::make_unique<QdaClassifier>(spec);
        case Algorithm::mlp:
            return std::make_unique<MlpClassifier>(spec);
        case Algorithm::logistic_regression:
            return std::make_unique<LogisticRegressionClassifier>(spec);
    }
    throw std::invalid_argument("unknown algorithm");
}

void save_classifier(BinaryWriter& w, const Classifier& c) {
    const auto* stacked = dynamic_cast<const StackedClassifier*>(&c);
    w.put<std::int32_t>(stacked ? kStackedTag : static_cast<std::int32_t>(c.spec().algorithm));
    serialize_spec(w, c.spec());
    w.put<std::int32_t>(c.n_classes());
    w.put<std::int64_t>(static_cast<std::int64_t>(c.train_info().n_samples));
    w.put<std::int64_t>(static_cast<std::int64_t>(c.train_info().n_features));
    c.save_state(w);
}

std::unique_ptr<Classifier> load_classifier(BinaryReader& r) {
    const auto tag = r.get<std::int32_t>();
    const ClassifierSpec spec = deserialize_spec(r);
    std::unique_ptr<Classifier> model;
    if (tag == kStackedTag) {
        StackSpec stack;
        stack.meta = spec;
        model = std::make_unique<StackedClassifier>(stack);
    } else {
        if (tag < 0 || tag >= static_cast<std::int32_t>(kAlgorithmNames.size())) {
            throw DataError("unknown classifier tag in artifact");
        }
        model = make_classifier(spec);
    }
    model->n_classes_ = r.get<std::int32_t>();
    model->info_.n_samples = r.get<std::int64_t>();
    model->info_.n_features = r.get<std::int64_t>();
    model->load_state(r);
    model->fitted_ = true;
    return model;
}

} // namespace scan
