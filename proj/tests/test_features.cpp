#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "scan/feat/pca.hpp"
#include "scan/feat/preprocess.hpp"
#include "scan/util/error.hpp"
#include "scan/util/rng.hpp"

using namespace scan;

namespace {

Eigen::MatrixXd random_matrix(int n, int d, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd m(n, d);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < d; ++c) m(r, c) = rng.normal();
    }
    return m;
}

} // namespace

TEST_CASE("log normalization") {
    Eigen::MatrixXd raw(3, 4);
    raw.row(0) << 5.0, 5.0, 5.0, 5.0;     // constant curve
    raw.row(1) << 10.0, 1.0, 0.0, 1e-30;  // zero and underflow hit the floor
    raw.row(2) << 1.0, 10.0, 100.0, 1000.0;

    const FeatureMatrix f = log_normalize(raw);
    CHECK(f.provenance == Provenance::log_normalized);
    for (int c = 0; c < 4; ++c) CHECK(f.values(0, c) == 0.0);
    CHECK(f.values(1, 0) == 0.0);
    CHECK(f.values(1, 2) == doctest::Approx(-12.0));
    CHECK(f.values(1, 3) == doctest::Approx(-12.0));
    CHECK(f.values(2, 3) == 0.0);
    CHECK(f.values(2, 0) == doctest::Approx(-3.0));
    CHECK(f.values.allFinite());
}

TEST_CASE("log normalization rejects bad input") {
    Eigen::MatrixXd raw(1, 3);
    raw << 1.0, std::numeric_limits<double>::quiet_NaN(), 2.0;
    CHECK_THROWS_AS(log_normalize(raw), DataError);

    Dataset ds;
    ds.q = QGrid(std::vector<double>{0.1, 0.2});
    Curve c;
    c.intensity = {1.0};
    ds.curves.push_back(c);
    CHECK_THROWS_AS(log_normalize(ds), DataError);
}

TEST_CASE("standardization statistics and reuse") {
    FeatureMatrix f;
    f.values = random_matrix(200, 6, 99);
    f.values.col(3).setConstant(4.2); // constant column divides by 1

    Preprocessor pp;
    pp.fit(f);
    const FeatureMatrix t = pp.transform(f);
    for (int c = 0; c < 6; ++c) {
        const double mean = t.values.col(c).mean();
        CHECK(std::fabs(mean) < 1e-9);
        if (c == 3) continue;
        const double std = std::sqrt(t.values.col(c).squaredNorm() / t.values.rows() -
                                     mean * mean);
        CHECK(std == doctest::Approx(1.0).epsilon(1e-6));
    }

    // applying the stored transform twice gives identical matrices
    const FeatureMatrix t2 = pp.transform(f);
    CHECK(t.values == t2.values);

    // statistics come from the fitting set only
    FeatureMatrix other;
    other.values = random_matrix(50, 6, 100);
    Preprocessor pp2;
    pp2.fit(f);
    CHECK(pp2.column_means() == pp.column_means());
    const FeatureMatrix o = pp2.transform(other);
    CHECK(o.values.allFinite());

    FeatureMatrix wrong;
    wrong.values = random_matrix(5, 7, 1);
    CHECK_THROWS_AS(pp.transform(wrong), DataError);
}

TEST_CASE("pca on rank-2 data finds k = 2") {
    // points on a 2-D plane embedded in 5-D
    Rng rng(5);
    Eigen::MatrixXd basis = random_matrix(2, 5, 6);
    Eigen::MatrixXd coeff = random_matrix(40, 2, 7);
    FeatureMatrix f;
    f.values = coeff * basis;

    const PcaModel model = pca_fit(f, 0.999);
    CHECK(model.n_components() == 2);
    CHECK(model.explained_ratio.sum() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("pca component count is monotone in the threshold") {
    FeatureMatrix f;
    f.values = random_matrix(60, 10, 8);
    Eigen::Index prev = 0;
    for (double thr : {0.2, 0.5, 0.8, 0.95, 0.99, 1.0}) {
        const PcaModel m = pca_fit(f, thr);
        CHECK(m.n_components() >= prev);
        prev = m.n_components();
    }
}

TEST_CASE("pca agrees with a brute-force covariance eigendecomposition") {
    for (std::uint64_t seed : {21, 22, 23}) {
        FeatureMatrix f;
        f.values = random_matrix(50, 8, seed);
        const PcaModel model = pca_fit(f, 1.0);

        const Eigen::MatrixXd centered = f.values.rowwise() - f.values.colwise().mean();
        const Eigen::MatrixXd cov = centered.transpose() * centered / (f.values.rows() - 1);
        Eigen::VectorXd ref_values;
        Eigen::MatrixXd ref_vectors;
        oracle::jacobi_eigen(cov, ref_values, ref_vectors);

        REQUIRE(model.n_components() == 8);
        for (int i = 0; i < 8; ++i) {
            CHECK(model.eigenvalues[i] == doctest::Approx(ref_values[i]).epsilon(1e-8));
            const double align = std::fabs(model.components.row(i).dot(ref_vectors.col(i)));
            CHECK(align >= 1.0 - 1e-10); // principal angle well below 1e-6
        }
    }
}

TEST_CASE("pca reconstruction error matches the discarded spectrum") {
    FeatureMatrix f;
    f.values = random_matrix(80, 12, 31);
    const Eigen::Index n = f.values.rows();

    const PcaModel full = pca_fit(f, 1.0);
    const PcaModel partial = pca_fit(f, 0.7);
    REQUIRE(partial.n_components() < full.n_components());

    const FeatureMatrix projected = pca_transform(partial, f);
    const Eigen::MatrixXd reconstructed = pca_inverse_transform(partial, projected);
    const double frob = (f.values - reconstructed).norm();

    double discarded = 0.0;
    for (Eigen::Index i = partial.n_components(); i < full.n_components(); ++i) {
        discarded += full.eigenvalues[i];
    }
    CHECK(frob == doctest::Approx(std::sqrt(discarded * (n - 1))).epsilon(1e-6));

    // k = D reconstructs exactly
    const FeatureMatrix full_proj = pca_transform(full, f);
    const Eigen::MatrixXd full_rec = pca_inverse_transform(full, full_proj);
    CHECK((f.values - full_rec).norm() < 1e-8);
}

TEST_CASE("pca ignores zero-variance directions") {
    FeatureMatrix f;
    f.values = random_matrix(30, 6, 77);
    f.values.col(2).setConstant(3.14);
    const PcaModel model = pca_fit(f, 1.0);
    for (Eigen::Index r = 0; r < model.n_components(); ++r) {
        CHECK(std::fabs(model.components(r, 2)) < 1e-10);
    }
}

TEST_CASE("pca error paths") {
    FeatureMatrix f;
    f.values = Eigen::MatrixXd::Constant(10, 4, 1.5);
    CHECK_THROWS_AS(pca_fit(f, 0.99), NumericError); // zero variance

    FeatureMatrix ok;
    ok.values = random_matrix(10, 4, 3);
    CHECK_THROWS_AS(pca_fit(ok, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(pca_fit(ok, 1.5), std::invalid_argument);

    const PcaModel m = pca_fit(ok, 0.9);
    FeatureMatrix wrong;
    wrong.values = random_matrix(4, 5, 4);
    CHECK_THROWS_AS(pca_transform(m, wrong), DataError);
}

TEST_CASE("pca fit is deterministic") {
    FeatureMatrix f;
    f.values = random_matrix(40, 9, 55);
    const PcaModel a = pca_fit(f, 0.95);
    const PcaModel b = pca_fit(f, 0.95);
    CHECK(a.components == b.components);
    CHECK(a.eigenvalues == b.eigenvalues);
    // orientation convention: dominant entry of each component is positive
    for (Eigen::Index r = 0; r < a.n_components(); ++r) {
        Eigen::Index arg = 0;
        a.components.row(r).cwiseAbs().maxCoeff(&arg);
        CHECK(a.components(r, arg) > 0.0);
    }
}
