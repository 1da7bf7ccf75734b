#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>

#include "scan/util/rng.hpp"

namespace scan {

/// The 12 classification labels. Integer encoding is part of the file
/// format contract and must not be reordered.
enum class ShapeClass : int {
    sphere = 0,
    fuzzy_sphere = 1,
    ellipsoid_prolate = 2,
    ellipsoid_oblate = 3,
    cylinder_long = 4,
    cylinder_hollow = 5,
    cylinder_long_hollow = 6,
    disk = 7,
    dab = 8,
    polymer_excluded_volume = 9,
    teubner_strey = 10,
    sphere_cylinder_mix = 11,
};

constexpr int kNumShapeClasses = 12;

const std::array<std::string, kNumShapeClasses>& shape_class_names();
const std::string& to_string(ShapeClass c);
/// Throws DataError for unknown names.
ShapeClass shape_class_from_string(const std::string& name);

// Geometry records. Lengths in nm; pd is the relative Gaussian width of the
// dispersed parameter (radius, or aspect for ellipsoids).
struct SphereGeom {
    double radius = 30.0;
    double pd = 0.0;
};

struct FuzzySphereGeom {
    double radius = 30.0;
    double sigma_fuzzy = 3.0;
    double pd = 0.0;
};

struct EllipsoidGeom {
    double r_equatorial = 10.0;
    double aspect = 3.0; // polar/equatorial; > 1 prolate, < 1 oblate
    double pd = 0.0;     // dispersed parameter: aspect
};

struct CylinderGeom {
    double radius = 5.0;
    double length = 100.0;
    double pd = 0.0;
};

struct HollowCylinderGeom {
    double radius = 10.0;
    double length = 100.0;
    double core_radius = 5.0; // 0 < core_radius < radius
    double pd = 0.0;          // dispersed: outer radius, core ratio held fixed
};

struct DabGeom {
    double xi = 20.0;
};

struct PolymerEvGeom {
    double rg = 10.0;
    double nu = 0.5; // excluded-volume exponent, [0.33, 0.60]
};

struct TeubnerStreyGeom {
    double d_period = 30.0;
    double xi = 20.0;
};

struct MixtureGeom {
    SphereGeom sphere;
    CylinderGeom cylinder;
    double weight = 0.5; // sphere fraction, (0, 1)
};

using Geometry = std::variant<SphereGeom, FuzzySphereGeom, EllipsoidGeom, CylinderGeom,
                              HollowCylinderGeom, DabGeom, PolymerEvGeom, TeubnerStreyGeom,
                              MixtureGeom>;

/// Full per-curve model description: shape tag, overall scale/background and
/// the geometry record matching the tag.
struct ModelParams {
    ShapeClass shape = ShapeClass::sphere;
    double scale = 1.0;
    double background = 0.0;
    Geometry geom = SphereGeom{};
};

/// Throws std::invalid_argument when a parameter violates its documented
/// range (non-positive length, pd outside [0, 0.3], core >= radius, ...).
void validate_params(const ModelParams& p);

/// Draws randomized parameters from the documented per-class ranges.
/// Backgrounds are left at 0 here; the dataset generator assigns them
/// relative to each curve's peak intensity.
ModelParams sample_params(ShapeClass c, Rng& rng);

} // namespace scan
