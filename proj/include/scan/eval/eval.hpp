#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scan/feat/pca.hpp"
#include "scan/feat/preprocess.hpp"
#include "scan/ml/stacking.hpp"
#include "scan/sim/dataset.hpp"

namespace scan {

enum class Variant { all, pca99, pca95 };

const std::string& to_string(Variant v);
Variant variant_from_string(const std::string& name);
/// 0.99 / 0.95; throws for Variant::all.
double variant_threshold(Variant v);

/// Cross-validation result for one (classifier, input variant) pair.
/// train/eval seconds are wall-clock around classifier fit and predict,
/// summed over folds; shared preprocessing is not attributed to entries.
struct EvalReport {
    std::string classifier;
    Variant variant = Variant::all;
    std::vector<double> fold_accuracies;
    double mean = 0.0;
    double stddev = 0.0; // population stddev of the fold accuracies
    std::vector<std::vector<long long>> confusion; // pooled, true x predicted
    double train_seconds = 0.0;
    double eval_seconds = 0.0;
    std::vector<int> pca_components; // per fold; empty for Variant::all
    std::vector<int> class_ids;      // original label values, confusion order
    bool failed = false;
    std::string error;
};

std::vector<std::vector<long long>> confusion_matrix(const std::vector<int>& y_true,
                                                     const std::vector<int>& y_pred,
                                                     int n_classes);

/// One classifier or stacked ensemble to evaluate.
struct EvalEntry {
    std::string name;
    bool is_stack = false;
    ClassifierSpec spec;
    StackSpec stack;

    static EvalEntry single(const ClassifierSpec& s);
    static EvalEntry stacked(std::string name, const StackSpec& s);
};

/// Runs stratified k-fold cross-validation for every (entry, variant)
/// combination. Per fold, the column standardization and PCA models are
/// fitted on the training split only and shared across entries. A failing
/// combination is reported with `failed` set; the rest continue.
/// `on_report` (when given) observes each finished report in order.
std::vector<EvalReport> run_matrix(const Dataset& ds, const std::vector<EvalEntry>& entries,
                                   const std::vector<Variant>& variants, int folds,
                                   std::uint64_t seed, int threads,
                                   const std::function<void(const EvalReport&)>& on_report = {});

/// Single-combination convenience wrapper.
EvalReport cross_validate(const EvalEntry& entry, const Dataset& ds, Variant variant, int folds,
                          std::uint64_t seed, int threads);

/// The nine individual classifiers of the suite, in ranking-tie order.
std::vector<Algorithm> suite_algorithms();

/// Picks the `count` best entries by mean accuracy (ties: suite order) from
/// individual reports of the given variant.
std::vector<Algorithm> top_algorithms(const std::vector<EvalReport>& reports, Variant variant,
                                      int count);

} // namespace scan
