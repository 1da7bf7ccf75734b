#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "scan/ml/adaboost.hpp"
#include "scan/ml/gaussian_nb.hpp"
#include "scan/ml/knn.hpp"
#include "scan/ml/qda.hpp"
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

TEST_CASE("knn with k=1 reproduces training labels") {
    const auto p = toy::random_labels(4, 60, 5, 61);
    ClassifierSpec spec = spec_for(Algorithm::knn);
    spec.knn_k = 1;
    KnnClassifier knn(spec);
    knn.fit(p.x, p.y, p.n_classes);
    CHECK(toy::accuracy(p.y, knn.predict(p.x)) == 1.0);
}

TEST_CASE("unanimous neighborhood gives probability one") {
    const auto p = toy::blobs(3, 20, 4, 62); // tight, far-apart blobs
    KnnClassifier knn(spec_for(Algorithm::knn));
    knn.fit(p.x, p.y, p.n_classes);
    const Eigen::MatrixXd proba = knn.predict_proba(p.x.topRows(5));
    for (int i = 0; i < 5; ++i) {
        CHECK(proba(i, p.y[i]) == 1.0);
        CHECK(proba.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("knn equals a brute-force scan on 200 points") {
    const auto train = toy::random_labels(4, 200, 8, 63);
    const auto query = toy::random_labels(4, 100, 8, 64);

    KnnClassifier knn(spec_for(Algorithm::knn));
    knn.fit(train.x, train.y, train.n_classes);
    const Eigen::MatrixXd proba = knn.predict_proba(query.x, 2);

    // reference: direct all-pairs scan with (distance, index) ordering
    for (int i = 0; i < 100; ++i) {
        std::vector<std::pair<double, int>> dist(200);
        for (int j = 0; j < 200; ++j) {
            double s = 0.0;
            for (int f = 0; f < 8; ++f) {
                const double d = query.x(i, f) - train.x(j, f);
                s += d * d;
            }
            dist[j] = {s, j};
        }
        std::sort(dist.begin(), dist.end());
        Eigen::RowVectorXd votes = Eigen::RowVectorXd::Zero(4);
        for (int j = 0; j < 5; ++j) votes[train.y[dist[j].second]] += 0.2;
        for (int k = 0; k < 4; ++k) CHECK(proba(i, k) == votes[k]);
    }
}

TEST_CASE("gaussian nb matches hand-computed posteriors") {
    Eigen::MatrixXd x(4, 1);
    x << 0.0, 1.0, 10.0, 11.0;
    const std::vector<int> y{0, 0, 1, 1};

    GaussianNbClassifier nb(spec_for(Algorithm::gaussian_nb));
    nb.fit(x, y, 2);

    // class moments: mean 0.5 / 10.5, population variance 0.25 each,
    // smoothing epsilon = 1e-9 * max feature variance
    const double global_mean = (0.0 + 1.0 + 10.0 + 11.0) / 4.0;
    const double max_var = ((0.0 - global_mean) * (0.0 - global_mean) +
                            (1.0 - global_mean) * (1.0 - global_mean) +
                            (10.0 - global_mean) * (10.0 - global_mean) +
                            (11.0 - global_mean) * (11.0 - global_mean)) /
                           4.0;
    const double var = 0.25 + 1e-9 * max_var;
    CHECK(nb.class_means()(0, 0) == doctest::Approx(0.5));
    CHECK(nb.class_means()(1, 0) == doctest::Approx(10.5));
    CHECK(nb.class_variances()(0, 0) == doctest::Approx(var).epsilon(1e-12));

    Eigen::MatrixXd probe(3, 1);
    probe << 0.2, 5.5, 10.9;
    const Eigen::MatrixXd proba = nb.predict_proba(probe);
    const auto posterior0 = [&](double v) {
        const auto logpdf = [&](double mu) {
            return -0.5 * std::log(2.0 * M_PI * var) - (v - mu) * (v - mu) / (2.0 * var);
        };
        const double l0 = logpdf(0.5) + std::log(0.5);
        const double l1 = logpdf(10.5) + std::log(0.5);
        const double m = std::max(l0, l1);
        return std::exp(l0 - m) / (std::exp(l0 - m) + std::exp(l1 - m));
    };
    for (int i = 0; i < 3; ++i) {
        CHECK(proba(i, 0) == doctest::Approx(posterior0(probe(i, 0))).epsilon(1e-12));
    }
    // exact midpoint is an even split
    CHECK(proba(1, 0) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("qda coincides with nb when covariances are forced diagonal") {
    const auto p = toy::blobs(3, 30, 5, 66, 1.0);
    GaussianNbClassifier nb(spec_for(Algorithm::gaussian_nb));
    nb.fit(p.x, p.y, p.n_classes);

    std::vector<Eigen::MatrixXd> diag_covs;
    for (int k = 0; k < p.n_classes; ++k) {
        diag_covs.push_back(nb.class_variances().row(k).asDiagonal());
    }
    QdaClassifier qda(spec_for(Algorithm::qda));
    qda.set_parts(nb.class_means(), diag_covs, nb.log_priors(), p.n_classes);

    const Eigen::MatrixXd pa = nb.predict_proba(p.x);
    const Eigen::MatrixXd pb = qda.predict_proba(p.x);
    for (Eigen::Index i = 0; i < pa.rows(); ++i) {
        for (int k = 0; k < p.n_classes; ++k) {
            CHECK(std::fabs(std::log(pa(i, k)) - std::log(pb(i, k))) < 1e-8);
        }
    }
}

TEST_CASE("qda separates anisotropic gaussians") {
    // two classes with identical means but different covariance
    Rng rng(67);
    const int n = 200;
    Eigen::MatrixXd x(2 * n, 2);
    std::vector<int> y(2 * n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = 0.3 * rng.normal();
        x(i, 1) = 3.0 * rng.normal();
        y[i] = 0;
        x(n + i, 0) = 3.0 * rng.normal();
        x(n + i, 1) = 0.3 * rng.normal();
        y[n + i] = 1;
    }
    QdaClassifier qda(spec_for(Algorithm::qda));
    qda.fit(x, y, 2);
    CHECK(toy::accuracy(y, qda.predict(x)) >= 0.9);
}

TEST_CASE("qda regularization keeps singular covariances solvable") {
    // 6 samples in 10 dimensions: per-class covariance is rank deficient
    const auto p = toy::random_labels(2, 6, 10, 68);
    QdaClassifier qda(spec_for(Algorithm::qda));
    CHECK_NOTHROW(qda.fit(p.x, p.y, 2));
    const Eigen::MatrixXd proba = qda.predict_proba(p.x);
    CHECK(proba.allFinite());
}

TEST_CASE("adaboost rounds satisfy the SAMME validity condition") {
    const auto p = toy::blobs(4, 30, 5, 69, 2.5);
    AdaBoostClassifier ada(spec_for(Algorithm::adaboost));
    ada.fit(p.x, p.y, p.n_classes);
    REQUIRE(!ada.alphas().empty());
    const double limit = 1.0 - 1.0 / p.n_classes;
    for (double err : ada.round_errors()) CHECK(err < limit);
    for (double alpha : ada.alphas()) CHECK(alpha > 0.0);

    const Eigen::MatrixXd proba = ada.predict_proba(p.x);
    for (Eigen::Index i = 0; i < proba.rows(); ++i) {
        CHECK(proba.row(i).sum() == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(toy::accuracy(p.y, ada.predict(p.x)) > 0.5);
}

TEST_CASE("adaboost halts when a stump cannot beat chance") {
    // XOR: no single axis-aligned stump does better than 1/2
    Eigen::MatrixXd x(40, 2);
    std::vector<int> y(40);
    Rng rng(70);
    for (int i = 0; i < 40; ++i) {
        const int a = i % 2, b = (i / 2) % 2;
        x(i, 0) = a + 0.01 * rng.normal();
        x(i, 1) = b + 0.01 * rng.normal();
        y[i] = a ^ b;
    }
    AdaBoostClassifier ada(spec_for(Algorithm::adaboost));
    CHECK_THROWS_AS(ada.fit(x, y, 2), NumericError);
}
