#include "scan/sim/params.hpp"

#include <cmath>
#include <stdexcept>

#include "scan/util/error.hpp"

namespace scan {

const std::array<std::string, kNumShapeClasses>& shape_class_names() {
    static const std::array<std::string, kNumShapeClasses> names = {
        "sphere",
        "fuzzy_sphere",
        "ellipsoid_prolate",
        "ellipsoid_oblate",
        "cylinder_long",
        "cylinder_hollow",
        "cylinder_long_hollow",
        "disk",
        "dab",
        "polymer_excluded_volume",
        "teubner_strey",
        "sphere_cylinder_mix",
    };
    return names;
}

const std::string& to_string(ShapeClass c) {
    return shape_class_names()[static_cast<int>(c)];
}

ShapeClass shape_class_from_string(const std::string& name) {
    const auto& names = shape_class_names();
    for (int i = 0; i < kNumShapeClasses; ++i) {
        if (names[i] == name) return static_cast<ShapeClass>(i);
    }
    throw DataError("unknown shape class: '" + name + "'");
}

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void check_pd(double pd) {
    require(pd >= 0.0 && pd <= 0.3, "pd must be in [0, 0.3]");
}

} // namespace

void validate_params(const ModelParams& p) {
    require(std::isfinite(p.scale) && p.scale > 0.0, "scale must be > 0");
    require(std::isfinite(p.background) && p.background >= 0.0, "background must be >= 0");
    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, SphereGeom>) {
                require(g.radius > 0.0, "sphere radius must be > 0");
                check_pd(g.pd);
            } else if constexpr (std::is_same_v<T, FuzzySphereGeom>) {
                require(g.radius > 0.0, "fuzzy sphere radius must be > 0");
                require(g.sigma_fuzzy > 0.0, "fuzzy interface width must be > 0");
                check_pd(g.pd);
            } else if constexpr (std::is_same_v<T, EllipsoidGeom>) {
                require(g.r_equatorial > 0.0, "ellipsoid radius must be > 0");
                require(g.aspect > 0.0, "ellipsoid aspect must be > 0");
                check_pd(g.pd);
            } else if constexpr (std::is_same_v<T, CylinderGeom>) {
                require(g.radius > 0.0, "cylinder radius must be > 0");
                require(g.length > 0.0, "cylinder length must be > 0");
                check_pd(g.pd);
            } else if constexpr (std::is_same_v<T, HollowCylinderGeom>) {
                require(g.radius > 0.0, "cylinder radius must be > 0");
                require(g.length > 0.0, "cylinder length must be > 0");
                require(g.core_radius > 0.0 && g.core_radius < g.radius,
                        "hollow cylinder requires 0 < core < radius");
                check_pd(g.pd);
            } else if constexpr (std::is_same_v<T, DabGeom>) {
                require(g.xi > 0.0, "correlation length must be > 0");
            } else if constexpr (std::is_same_v<T, PolymerEvGeom>) {
                require(g.rg > 0.0, "radius of gyration must be > 0");
                require(g.nu >= 0.33 && g.nu <= 0.60, "nu must be in [0.33, 0.60]");
            } else if constexpr (std::is_same_v<T, TeubnerStreyGeom>) {
                require(g.d_period > 0.0, "domain period must be > 0");
                require(g.xi > 0.0, "correlation length must be > 0");
            } else if constexpr (std::is_same_v<T, MixtureGeom>) {
                require(g.weight > 0.0 && g.weight < 1.0, "mixture weight must be in (0, 1)");
                require(g.sphere.radius > 0.0, "mixture sphere radius must be > 0");
                require(g.cylinder.radius > 0.0 && g.cylinder.length > 0.0,
                        "mixture cylinder dimensions must be > 0");
                check_pd(g.sphere.pd);
                check_pd(g.cylinder.pd);
            }
        },
        p.geom);
}

namespace {

// Documented sampling ranges. Radii/lengths are log-uniform so every size
// decade of the probed window is equally represented.
SphereGeom sample_sphere(Rng& rng) {
    SphereGeom g;
    g.radius = rng.log_uniform(2.0, 100.0);
    g.pd = rng.uniform(0.0, 0.2);
    return g;
}

CylinderGeom sample_cylinder_long(Rng& rng) {
    CylinderGeom g;
    g.radius = rng.log_uniform(2.0, 20.0);
    g.length = g.radius * rng.uniform(10.0, 100.0);
    g.pd = rng.uniform(0.0, 0.2);
    return g;
}

} // namespace

ModelParams sample_params(ShapeClass c, Rng& rng) {
    ModelParams p;
    p.shape = c;
    p.scale = rng.log_uniform(0.1, 10.0);
    p.background = 0.0;
    switch (c) {
        case ShapeClass::sphere:
            p.geom = sample_sphere(rng);
            break;
        case ShapeClass::fuzzy_sphere: {
            FuzzySphereGeom g;
            g.radius = rng.log_uniform(2.0, 100.0);
            g.sigma_fuzzy = g.radius * rng.uniform(0.05, 0.3);
            g.pd = rng.uniform(0.0, 0.2);
            p.geom = g;
            break;
        }
        case ShapeClass::ellipsoid_prolate:
        case ShapeClass::ellipsoid_oblate: {
            EllipsoidGeom g;
            g.r_equatorial = rng.log_uniform(2.0, 100.0);
            g.aspect = c == ShapeClass::ellipsoid_prolate ? rng.uniform(1.5, 5.0)
                                                          : rng.uniform(0.2, 0.67);
            g.pd = rng.uniform(0.0, 0.2);
            p.geom = g;
            break;
        }
        case ShapeClass::cylinder_long:
            p.geom = sample_cylinder_long(rng);
            break;
        case ShapeClass::cylinder_hollow:
        case ShapeClass::cylinder_long_hollow: {
            HollowCylinderGeom g;
            g.radius = rng.log_uniform(2.0, 20.0);
            g.length = g.radius * (c == ShapeClass::cylinder_long_hollow
                                       ? rng.uniform(10.0, 100.0)
                                       : rng.uniform(2.0, 10.0));
            g.core_radius = g.radius * rng.uniform(0.3, 0.8);
            g.pd = rng.uniform(0.0, 0.2);
            p.geom = g;
            break;
        }
        case ShapeClass::disk: {
            CylinderGeom g;
            g.radius = rng.log_uniform(20.0, 200.0);
            g.length = g.radius * rng.uniform(0.02, 0.1);
            g.pd = rng.uniform(0.0, 0.2);
            p.geom = g;
            break;
        }
        case ShapeClass::dab:
            p.geom = DabGeom{rng.log_uniform(5.0, 100.0)};
            break;
        case ShapeClass::polymer_excluded_volume: {
            PolymerEvGeom g;
            g.rg = rng.log_uniform(2.0, 50.0);
            g.nu = rng.uniform(0.33, 0.60);
            p.geom = g;
            break;
        }
        case ShapeClass::teubner_strey: {
            // Denominator positivity is guaranteed by the (d, xi)
            // parameterization; the resample loop guards the invariant anyway.
            TeubnerStreyGeom g;
            for (int attempt = 0; attempt < 100; ++attempt) {
                g.d_period = rng.log_uniform(10.0, 100.0);
                g.xi = g.d_period * rng.uniform(0.2, 2.0);
                const double k = 2.0 * M_PI / g.d_period;
                const double b = 1.0 / g.xi;
                const double a2 = (k * k + b * b) * (k * k + b * b);
                const double c1 = 2.0 * (b * b - k * k);
                // min over u = q^2 >= 0 of u^2 + c1 u + a2
                const double u_star = std::max(0.0, -0.5 * c1);
                if (a2 + c1 * u_star + u_star * u_star > 0.0) break;
            }
            p.geom = g;
            break;
        }
        case ShapeClass::sphere_cylinder_mix: {
            MixtureGeom g;
            g.weight = rng.uniform(0.1, 0.9);
            g.sphere = sample_sphere(rng);
            g.cylinder = sample_cylinder_long(rng);
            p.geom = g;
            break;
        }
    }
    validate_params(p);
    return p;
}

} // namespace scan
