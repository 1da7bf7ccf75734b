#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "scan/eval/eval.hpp"
#include "scan/eval/kfold.hpp"
#include "scan/util/error.hpp"

using namespace scan;

namespace {

ClassifierSpec spec_for(Algorithm a, std::uint64_t seed = 0) {
    ClassifierSpec s;
    s.algorithm = a;
    s.seed = seed;
    return s;
}

// Curves that are trivially separable by class: a distinct plateau level per
// class plus a small deterministic ripple.
Dataset toy_dataset(int n_classes, int per_class, std::uint64_t seed) {
    const int width = 24;
    std::vector<double> qs(width);
    for (int i = 0; i < width; ++i) qs[i] = 0.01 * (i + 1);
    Dataset ds;
    ds.q = QGrid(qs);
    Rng rng(seed);
    for (int c = 0; c < n_classes; ++c) {
        for (int i = 0; i < per_class; ++i) {
            Curve curve;
            curve.label = c;
            curve.intensity.resize(width);
            for (int j = 0; j < width; ++j) {
                curve.intensity[j] = std::pow(10.0, c) * (1.0 + 0.01 * rng.uniform01()) +
                                     0.1 * j * (c + 1);
            }
            ds.curves.push_back(std::move(curve));
        }
    }
    return ds;
}

// All-constant curves: every classifier degenerates; a decision tree
// becomes a constant lowest-class predictor via the tie-break rule.
Dataset constant_dataset(int n_classes, int per_class) {
    const int width = 8;
    std::vector<double> qs(width);
    for (int i = 0; i < width; ++i) qs[i] = 0.1 * (i + 1);
    Dataset ds;
    ds.q = QGrid(qs);
    for (int c = 0; c < n_classes; ++c) {
        for (int i = 0; i < per_class; ++i) {
            Curve curve;
            curve.label = c;
            curve.intensity.assign(width, 7.0);
            ds.curves.push_back(std::move(curve));
        }
    }
    return ds;
}

} // namespace

TEST_CASE("stratified kfold splits") {
    // N=10, k=5, two balanced classes: every fold holds one of each
    std::vector<int> labels{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    const auto folds = kfold_split(labels, 5, 42);
    REQUIRE(folds.size() == 5);
    std::set<int> all;
    for (const auto& f : folds) {
        REQUIRE(f.size() == 2);
        CHECK(labels[f[0]] + labels[f[1]] == 1);
        for (int idx : f) {
            CHECK(all.insert(idx).second); // pairwise disjoint
        }
    }
    CHECK(all.size() == labels.size()); // exhaustive

    const auto again = kfold_split(labels, 5, 42);
    CHECK(again == folds);
    const auto other = kfold_split(labels, 5, 43);
    CHECK(other != folds);
}

TEST_CASE("kfold rejects class-starved splits") {
    std::vector<int> labels{0, 0, 0, 0, 1};
    CHECK_THROWS_AS(kfold_split(labels, 2, 1), DataError);
    CHECK_THROWS_AS(kfold_split(labels, 1, 1), std::invalid_argument);
}

TEST_CASE("confusion matrix basics") {
    const std::vector<int> truth{0, 1, 2, 1, 0};

    const auto diag = confusion_matrix(truth, truth, 3);
    CHECK(diag[0][0] == 2);
    CHECK(diag[1][1] == 2);
    CHECK(diag[2][2] == 1);
    CHECK(diag[0][1] == 0);

    const std::vector<int> zeros{0, 0, 0, 0, 0};
    const auto col0 = confusion_matrix(truth, zeros, 3);
    long long total = 0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            total += col0[i][j];
            if (j != 0) CHECK(col0[i][j] == 0);
        }
    }
    CHECK(total == 5);

    CHECK_THROWS_AS(confusion_matrix(truth, {0, 1}, 3), std::invalid_argument);
    CHECK_THROWS_AS(confusion_matrix({0, 3}, {0, 0}, 3), std::invalid_argument);
}

TEST_CASE("constant features make the tree a lowest-class predictor") {
    const Dataset ds = constant_dataset(4, 10);
    const auto report = cross_validate(EvalEntry::single(spec_for(Algorithm::decision_tree)), ds,
                                       Variant::all, 5, 7, 1);
    REQUIRE_FALSE(report.failed);
    for (double acc : report.fold_accuracies) {
        CHECK(acc == doctest::Approx(0.25).epsilon(1e-12)); // 1/n_classes
    }
    // only the first predicted column is populated
    for (std::size_t i = 0; i < report.confusion.size(); ++i) {
        for (std::size_t j = 1; j < report.confusion.size(); ++j) {
            CHECK(report.confusion[i][j] == 0);
        }
    }
}

TEST_CASE("separable toy curves give perfect tree accuracy") {
    const Dataset ds = toy_dataset(4, 15, 3);
    const auto report = cross_validate(EvalEntry::single(spec_for(Algorithm::decision_tree)), ds,
                                       Variant::all, 5, 11, 2);
    REQUIRE_FALSE(report.failed);
    CHECK(report.mean == doctest::Approx(1.0));
}

TEST_CASE("report invariants") {
    const Dataset ds = toy_dataset(3, 20, 5);
    const auto report = cross_validate(EvalEntry::single(spec_for(Algorithm::knn)), ds,
                                       Variant::all, 5, 13, 2);
    REQUIRE_FALSE(report.failed);

    // mean equals the arithmetic mean of folds
    double mean = 0.0;
    for (double a : report.fold_accuracies) mean += a;
    mean /= report.fold_accuracies.size();
    CHECK(std::fabs(report.mean - mean) < 1e-12);

    // population standard deviation convention
    double var = 0.0;
    for (double a : report.fold_accuracies) var += (a - mean) * (a - mean);
    var /= report.fold_accuracies.size();
    CHECK(std::fabs(report.stddev - std::sqrt(var)) < 1e-12);

    // row sums are per-class test counts; trace/total is the overall accuracy
    long long total = 0, trace = 0;
    for (std::size_t i = 0; i < report.confusion.size(); ++i) {
        long long row = 0;
        for (std::size_t j = 0; j < report.confusion.size(); ++j) {
            row += report.confusion[i][j];
        }
        CHECK(row == 20);
        total += row;
        trace += report.confusion[i][i];
    }
    CHECK(total == 60);
    double weighted = 0.0;
    for (double a : report.fold_accuracies) weighted += a * 12.0; // 12 per fold
    CHECK(std::fabs(static_cast<double>(trace) / total - weighted / 60.0) < 1e-12);
}

TEST_CASE("pca variants report component counts and run in-fold") {
    const Dataset ds = toy_dataset(3, 20, 17);
    const auto reports = run_matrix(ds, {EvalEntry::single(spec_for(Algorithm::knn))},
                                    {Variant::all, Variant::pca99, Variant::pca95}, 5, 19, 2);
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].pca_components.empty());
    CHECK(reports[1].pca_components.size() == 5);
    CHECK(reports[2].pca_components.size() == 5);
    for (int k : reports[1].pca_components) CHECK(k >= 1);
    // 99% keeps at least as many directions as 95%
    for (std::size_t f = 0; f < 5; ++f) {
        CHECK(reports[1].pca_components[f] >= reports[2].pca_components[f]);
    }
}

TEST_CASE("a failing combination does not stop the matrix") {
    // adaboost halts with an error on XOR-style curves it cannot split;
    // build curves whose single-threshold error is exactly 1/2
    const int width = 6;
    std::vector<double> qs(width);
    for (int i = 0; i < width; ++i) qs[i] = 0.1 * (i + 1);
    Dataset ds;
    ds.q = QGrid(qs);
    Rng rng(23);
    for (int i = 0; i < 40; ++i) {
        const int a = i % 2, b = (i / 2) % 2;
        Curve c;
        c.label = a ^ b;
        c.intensity.assign(width, 1.0);
        c.intensity[0] = 10.0 + a + 0.001 * rng.uniform01();
        c.intensity[1] = 10.0 + b + 0.001 * rng.uniform01();
        ds.curves.push_back(std::move(c));
    }

    const auto reports = run_matrix(ds,
                                    {EvalEntry::single(spec_for(Algorithm::adaboost)),
                                     EvalEntry::single(spec_for(Algorithm::knn))},
                                    {Variant::all}, 5, 29, 1);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].failed);
    CHECK(!reports[0].error.empty());
    CHECK_FALSE(reports[1].failed);
}

TEST_CASE("run_matrix is reproducible") {
    const Dataset ds = toy_dataset(3, 15, 31);
    const auto a = run_matrix(ds, {EvalEntry::single(spec_for(Algorithm::random_forest, 3))},
                              {Variant::all}, 5, 37, 1);
    const auto b = run_matrix(ds, {EvalEntry::single(spec_for(Algorithm::random_forest, 3))},
                              {Variant::all}, 5, 37, 2);
    CHECK(a[0].fold_accuracies == b[0].fold_accuracies);
    CHECK(a[0].confusion == b[0].confusion);
}

TEST_CASE("top_algorithms ranks by mean accuracy with suite-order ties") {
    std::vector<EvalReport> reports;
    const auto make = [&](Algorithm a, double mean) {
        EvalReport r;
        r.classifier = to_string(a);
        r.variant = Variant::all;
        r.mean = mean;
        reports.push_back(r);
    };
    make(Algorithm::knn, 0.9);
    make(Algorithm::random_forest, 0.95);
    make(Algorithm::decision_tree, 0.9);
    make(Algorithm::adaboost, 0.2);
    const auto top = top_algorithms(reports, Variant::all, 3);
    REQUIRE(top.size() == 3);
    CHECK(top[0] == Algorithm::random_forest);
    // tie at 0.9: decision_tree precedes knn in suite order
    CHECK(top[1] == Algorithm::decision_tree);
    CHECK(top[2] == Algorithm::knn);
}

TEST_CASE("preprocessing statistics depend on the training rows only") {
    // the leak-freedom mechanism: identical train rows, different test rows
    const Dataset ds = toy_dataset(3, 10, 41);
    FeatureMatrix lognorm = log_normalize(ds);
    FeatureMatrix train;
    train.values = lognorm.values.topRows(24);
    Preprocessor a, b;
    a.fit(train);
    b.fit(train);
    CHECK(a.column_means() == b.column_means());
    CHECK(a.column_stds() == b.column_stds());
    // perturbing rows outside the fitting set cannot change the transform
    lognorm.values.row(29).setConstant(123.0);
    FeatureMatrix train_again;
    train_again.values = lognorm.values.topRows(24);
    Preprocessor c;
    c.fit(train_again);
    CHECK(c.column_means() == a.column_means());
    CHECK(c.column_stds() == a.column_stds());
}
