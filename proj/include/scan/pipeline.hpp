#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scan/eval/eval.hpp"
#include "scan/feat/pca.hpp"
#include "scan/feat/preprocess.hpp"
#include "scan/ml/classifier.hpp"
#include "scan/sim/dataset.hpp"

namespace scan {

/// A trained end-to-end predictor: q grid + feature transform + optional
/// PCA + classifier, with the label table needed to name predictions.
/// This is the unit the model artifact file stores.
struct Pipeline {
    std::string name; // display name, e.g. "random_forest" or "stacked_top5"
    QGrid q{std::vector<double>{1.0}};
    Preprocessor preprocessor;
    std::optional<PcaModel> pca;
    std::unique_ptr<Classifier> classifier;
    std::vector<std::string> class_names; // classifier output order
    Variant variant = Variant::all;
    std::uint64_t train_seed = 0;
    std::uint64_t dataset_fingerprint = 0;

    /// Probabilities for curves on a matching grid (throws DataError on
    /// grid mismatch; no resampling).
    Eigen::MatrixXd predict_proba(const Dataset& curves, int threads = 1) const;
    std::vector<int> predict(const Dataset& curves, int threads = 1) const;
};

/// FNV-1a over intensities and labels; recorded in artifacts.
std::uint64_t dataset_fingerprint(const Dataset& ds);

/// Fits preprocess (+ PCA for pca variants) and the classifier on the full
/// labeled dataset.
Pipeline train_pipeline(const Dataset& ds, const EvalEntry& entry, Variant variant, int threads);

} // namespace scan
