#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scan/io/csv.hpp"
#include "scan/sim/dataset.hpp"

using namespace scan;

TEST_CASE("sphere parameter ranges hold over 10000 draws") {
    Rng rng(11);
    for (int i = 0; i < 10000; ++i) {
        const ModelParams p = sample_params(ShapeClass::sphere, rng);
        const auto& g = std::get<SphereGeom>(p.geom);
        CHECK(g.radius >= 2.0);
        CHECK(g.radius <= 100.0);
        CHECK(g.pd >= 0.0);
        CHECK(g.pd <= 0.2);
        CHECK(p.scale >= 0.1);
        CHECK(p.scale <= 10.0);
    }
}

TEST_CASE("mixture weights stay inside (0.1, 0.9) over 10000 draws") {
    Rng rng(12);
    for (int i = 0; i < 10000; ++i) {
        const ModelParams p = sample_params(ShapeClass::sphere_cylinder_mix, rng);
        const auto& g = std::get<MixtureGeom>(p.geom);
        CHECK(g.weight >= 0.1);
        CHECK(g.weight < 0.9);
    }
}

TEST_CASE("every class samples valid parameters") {
    Rng rng(13);
    for (int c = 0; c < kNumShapeClasses; ++c) {
        for (int i = 0; i < 200; ++i) {
            const ModelParams p = sample_params(static_cast<ShapeClass>(c), rng);
            CHECK_NOTHROW(validate_params(p));
            CHECK(p.shape == static_cast<ShapeClass>(c));
        }
    }
}

TEST_CASE("two generators with one seed give identical parameter streams") {
    Rng a(777), b(777);
    for (int i = 0; i < 500; ++i) {
        const ShapeClass c = static_cast<ShapeClass>(i % kNumShapeClasses);
        const ModelParams pa = sample_params(c, a);
        const ModelParams pb = sample_params(c, b);
        CHECK(pa.scale == pb.scale);
        CHECK(params_to_json(pa) == params_to_json(pb));
    }
}

TEST_CASE("hollow cylinder core ratio range") {
    Rng rng(14);
    for (int i = 0; i < 2000; ++i) {
        const ModelParams p = sample_params(ShapeClass::cylinder_hollow, rng);
        const auto& g = std::get<HollowCylinderGeom>(p.geom);
        const double gamma = g.core_radius / g.radius;
        CHECK(gamma >= 0.3 - 1e-12);
        CHECK(gamma <= 0.8 + 1e-12);
        CHECK(g.length / g.radius >= 2.0 - 1e-12);
        CHECK(g.length / g.radius <= 10.0 + 1e-12);
    }
}

TEST_CASE("generate_dataset single curve") {
    const QGrid q = QGrid::standard();
    const Dataset ds = generate_dataset({ShapeClass::sphere}, 1, q, 5);
    CHECK(ds.curves.size() == 1);
    CHECK(ds.labeled());
    CHECK(*ds.curves[0].label == static_cast<int>(ShapeClass::sphere));
    CHECK(ds.curves[0].intensity.size() == q.size());
    CHECK(ds.curves[0].params.has_value());
}

TEST_CASE("generate_dataset balanced counts and reproducibility") {
    const QGrid q = QGrid::standard();
    const std::vector<ShapeClass> classes{ShapeClass::sphere, ShapeClass::dab,
                                          ShapeClass::teubner_strey};
    const Dataset a = generate_dataset(classes, 7, q, 123);
    CHECK(a.curves.size() == 21);
    const auto counts = a.class_counts();
    CHECK(counts[static_cast<int>(ShapeClass::sphere)] == 7);
    CHECK(counts[static_cast<int>(ShapeClass::dab)] == 7);
    CHECK(counts[static_cast<int>(ShapeClass::teubner_strey)] == 7);

    const Dataset b = generate_dataset(classes, 7, q, 123);
    REQUIRE(b.curves.size() == a.curves.size());
    for (std::size_t i = 0; i < a.curves.size(); ++i) {
        CHECK(a.curves[i].intensity == b.curves[i].intensity);
    }
}

TEST_CASE("parallel generation is bit-identical to serial") {
    const QGrid q = QGrid::standard();
    GenerateOptions serial;
    serial.threads = 1;
    GenerateOptions threaded;
    threaded.threads = 4;
    const std::vector<ShapeClass> classes{ShapeClass::sphere, ShapeClass::cylinder_long,
                                          ShapeClass::dab};
    const Dataset a = generate_dataset(classes, 6, q, 321, serial);
    const Dataset b = generate_dataset(classes, 6, q, 321, threaded);
    REQUIRE(a.curves.size() == b.curves.size());
    for (std::size_t i = 0; i < a.curves.size(); ++i) {
        CHECK(a.curves[i].intensity == b.curves[i].intensity);
    }
}

TEST_CASE("noiseless pipeline reproduces analytic values exactly") {
    const QGrid q = QGrid::standard();
    GenerateOptions opts;
    opts.noiseless = true;
    const Dataset ds = generate_dataset({ShapeClass::dab}, 3, q, 9, opts);
    for (const auto& curve : ds.curves) {
        REQUIRE(curve.params.has_value());
        const auto analytic = evaluate_intensity(q, *curve.params);
        CHECK(curve.intensity == analytic);
    }
}

TEST_CASE("generated curves satisfy the curve invariants") {
    const QGrid q = QGrid::standard();
    std::vector<ShapeClass> all;
    for (int c = 0; c < kNumShapeClasses; ++c) all.push_back(static_cast<ShapeClass>(c));
    GenerateOptions opts;
    opts.threads = 2;
    const Dataset ds = generate_dataset(all, 3, q, 2025, opts);
    CHECK(ds.curves.size() == 36);
    for (const auto& curve : ds.curves) {
        REQUIRE(curve.intensity.size() == q.size());
        for (double v : curve.intensity) {
            CHECK(std::isfinite(v));
            CHECK(v >= 0.0);
        }
    }
}
