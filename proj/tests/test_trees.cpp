#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scan/ml/trees.hpp"
#include "toy_data.hpp"

using namespace scan;

namespace {

ClassifierSpec spec_for(Algorithm a, std::uint64_t seed = 0) {
    ClassifierSpec s;
    s.algorithm = a;
    s.seed = seed;
    return s;
}

} // namespace

TEST_CASE("decision tree grows to purity") {
    const auto p = toy::random_labels(3, 90, 6, 17); // distinct rows, noisy labels
    DecisionTreeClassifier tree(spec_for(Algorithm::decision_tree));
    tree.fit(p.x, p.y, p.n_classes);
    CHECK(toy::accuracy(p.y, tree.predict(p.x)) == 1.0);

    const Eigen::MatrixXd proba = tree.predict_proba(p.x);
    for (Eigen::Index i = 0; i < proba.rows(); ++i) {
        CHECK(proba.row(i).sum() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(proba.row(i).minCoeff() >= 0.0);
    }
}

TEST_CASE("duplicate rows with mixed labels give distribution leaves") {
    Eigen::MatrixXd x(4, 2);
    x << 1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 5.0, 5.0;
    const std::vector<int> y{0, 0, 1, 1};
    DecisionTreeClassifier tree(spec_for(Algorithm::decision_tree));
    tree.fit(x, y, 2);
    const Eigen::MatrixXd proba = tree.predict_proba(x.topRows(1));
    CHECK(proba(0, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(proba(0, 1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("equal-gain ties choose the lowest feature index") {
    // feature 1 duplicates feature 0, both split perfectly
    Eigen::MatrixXd x(6, 2);
    x << 0, 0, 1, 1, 2, 2, 10, 10, 11, 11, 12, 12;
    const std::vector<int> y{0, 0, 0, 1, 1, 1};
    DecisionTreeClassifier tree(spec_for(Algorithm::decision_tree));
    tree.fit(x, y, 2);
    CHECK(tree.tree().nodes[0].feature == 0);
}

TEST_CASE("fit precondition checks") {
    const auto p = toy::blobs(3, 10, 4, 3);
    DecisionTreeClassifier tree(spec_for(Algorithm::decision_tree));

    std::vector<int> single(p.y.size(), 0);
    CHECK_THROWS_AS(tree.fit(p.x, single, 3), std::invalid_argument);

    Eigen::MatrixXd bad = p.x;
    bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(tree.fit(bad, p.y, 3), NumericError);

    CHECK_THROWS_AS(tree.predict_proba(p.x), NumericError); // unfitted
}

TEST_CASE("random forest probabilities are vote fractions") {
    const auto p = toy::blobs(3, 25, 5, 11, 1.2);
    ClassifierSpec spec = spec_for(Algorithm::random_forest, 5);
    spec.rf_trees = 20;
    RandomForestClassifier forest(spec);
    forest.fit(p.x, p.y, p.n_classes);
    REQUIRE(forest.trees().size() == 20);

    const Eigen::MatrixXd proba = forest.predict_proba(p.x);
    for (Eigen::Index i = 0; i < proba.rows(); ++i) {
        Eigen::RowVectorXd votes = Eigen::RowVectorXd::Zero(p.n_classes);
        for (const auto& tree : forest.trees()) {
            votes[tree.vote(p.x.row(i))] += 1.0;
        }
        votes /= static_cast<double>(forest.trees().size());
        for (int k = 0; k < p.n_classes; ++k) {
            CHECK(proba(i, k) == doctest::Approx(votes[k]).epsilon(1e-12));
        }
        CHECK(proba.row(i).sum() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("random forest separates blobs") {
    const auto p = toy::blobs(4, 30, 6, 23);
    RandomForestClassifier forest(spec_for(Algorithm::random_forest, 1));
    forest.fit(p.x, p.y, p.n_classes);
    CHECK(toy::accuracy(p.y, forest.predict(p.x)) >= 0.99);
}

TEST_CASE("random forest training is thread-count invariant") {
    const auto p = toy::blobs(3, 20, 5, 29, 1.5);
    ClassifierSpec spec = spec_for(Algorithm::random_forest, 9);
    spec.rf_trees = 15;

    RandomForestClassifier serial(spec), threaded(spec);
    serial.fit(p.x, p.y, p.n_classes, 1);
    threaded.fit(p.x, p.y, p.n_classes, 4);

    BinaryWriter a, b;
    serial.save_state(a);
    threaded.save_state(b);
    CHECK(a.bytes() == b.bytes());
    CHECK(serial.predict_proba(p.x) == threaded.predict_proba(p.x));
}

TEST_CASE("tree serialization round trip") {
    const auto p = toy::blobs(3, 15, 4, 31);
    ClassifierSpec spec = spec_for(Algorithm::random_forest, 2);
    spec.rf_trees = 8;
    RandomForestClassifier forest(spec);
    forest.fit(p.x, p.y, p.n_classes);

    BinaryWriter w;
    save_classifier(w, forest);
    BinaryReader r(w.bytes().data(), w.bytes().size());
    const auto loaded = load_classifier(r);
    CHECK(loaded->predict_proba(p.x) == forest.predict_proba(p.x));
    CHECK(loaded->spec().rf_trees == 8);
}
