#include "scan/pipeline.hpp"

#include <cstring>

#include "scan/util/error.hpp"

namespace scan {

Eigen::MatrixXd Pipeline::predict_proba(const Dataset& curves, int threads) const {
    if (!q.matches(curves.q)) {
        throw DataError("q grid mismatch between model and input curves");
    }
    FeatureMatrix features = preprocessor.transform(log_normalize(curves));
    if (pca) features = pca_transform(*pca, features);
    return classifier->predict_proba(features.values, threads);
}

std::vector<int> Pipeline::predict(const Dataset& curves, int threads) const {
    const Eigen::MatrixXd proba = predict_proba(curves, threads);
    std::vector<int> out(proba.rows());
    for (Eigen::Index i = 0; i < proba.rows(); ++i) out[i] = argmax_lowest(proba.row(i));
    return out;
}

std::uint64_t dataset_fingerprint(const Dataset& ds) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto mix = [&h](const void* data, std::size_t n) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& c : ds.curves) {
        mix(c.intensity.data(), c.intensity.size() * sizeof(double));
        const int label = c.label.value_or(-1);
        mix(&label, sizeof(label));
    }
    return h;
}

Pipeline train_pipeline(const Dataset& ds, const EvalEntry& entry, Variant variant, int threads) {
    if (!ds.labeled()) throw DataError("training requires a labeled dataset");

    const std::vector<int> raw_labels = ds.labels();
    std::vector<char> seen(kNumShapeClasses, 0);
    for (int l : raw_labels) {
        if (l < 0 || l >= kNumShapeClasses) throw DataError("label out of range");
        seen[l] = 1;
    }
    Pipeline p;
    std::vector<int> compact(kNumShapeClasses, -1);
    for (int c = 0; c < kNumShapeClasses; ++c) {
        if (seen[c]) {
            compact[c] = static_cast<int>(p.class_names.size());
            p.class_names.push_back(to_string(static_cast<ShapeClass>(c)));
        }
    }
    std::vector<int> labels(raw_labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = compact[raw_labels[i]];
    const int n_classes = static_cast<int>(p.class_names.size());

    p.name = entry.name;
    p.q = ds.q;
    p.variant = variant;
    p.train_seed = entry.is_stack ? entry.stack.seed : entry.spec.seed;
    p.dataset_fingerprint = dataset_fingerprint(ds);

    FeatureMatrix lognorm = log_normalize(ds);
    p.preprocessor.fit(lognorm);
    FeatureMatrix features = p.preprocessor.transform(lognorm);
    if (variant != Variant::all) {
        p.pca = pca_fit(features, variant_threshold(variant));
        features = pca_transform(*p.pca, features);
    }

    if (entry.is_stack) {
        p.classifier = train_stacked(entry.stack, features.values, labels, n_classes, threads);
    } else {
        p.classifier = make_classifier(entry.spec);
        p.classifier->fit(features.values, labels, n_classes, threads);
    }
    return p;
}

} // namespace scan
