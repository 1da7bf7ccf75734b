#pragma once

#include <functional>
#include <vector>

#include "scan/math/quadrature.hpp"
#include "scan/sim/params.hpp"
#include "scan/sim/qgrid.hpp"

namespace scan {

/// Normalized sphere amplitude A(x) = 3(sin x - x cos x)/x^3, A(0) = 1.
double sphere_amplitude(double x);

/// Order of the orientation-average rule for a given oscillation phase span
/// (q_max times the length swept by the amplitude arguments). The 76-point
/// base rule aliases once the integrand oscillates faster than its nodes,
/// so the order grows linearly with the span; quantized for rule caching.
int orientation_order(double phase_span);

/// Cached Gauss-Legendre rule of the given order on [0, pi/2].
const GaussLegendreRule& orientation_rule_for(int order);

// Monodisperse intensity kernels. Each returns scale * P(q) + background on
// the full grid; pd fields of the geometry records are ignored here (see
// apply_polydispersity / evaluate_intensity). Orientation-averaged kernels
// use the default 76-point rule unless another is supplied (convergence
// checks pass the doubled rule).
std::vector<double> intensity_sphere(const QGrid& q, const SphereGeom& g, double scale,
                                     double background);
std::vector<double> intensity_fuzzy_sphere(const QGrid& q, const FuzzySphereGeom& g, double scale,
                                           double background);
std::vector<double> intensity_ellipsoid(const QGrid& q, const EllipsoidGeom& g, double scale,
                                        double background,
                                        const GaussLegendreRule* rule = nullptr);
std::vector<double> intensity_cylinder(const QGrid& q, const CylinderGeom& g, double scale,
                                       double background,
                                       const GaussLegendreRule* rule = nullptr);
std::vector<double> intensity_hollow_cylinder(const QGrid& q, const HollowCylinderGeom& g,
                                              double scale, double background,
                                              const GaussLegendreRule* rule = nullptr);
std::vector<double> intensity_dab(const QGrid& q, const DabGeom& g, double scale,
                                  double background);
std::vector<double> intensity_teubner_strey(const QGrid& q, const TeubnerStreyGeom& g,
                                            double scale, double background);
std::vector<double> intensity_polymer_ev(const QGrid& q, const PolymerEvGeom& g, double scale,
                                         double background);
std::vector<double> intensity_mixture(const QGrid& q, const MixtureGeom& g, double scale,
                                      double background);

/// Gaussian size-distribution grid: `points` equally spaced abscissae over
/// mean +- nsigmas * (pd * mean), weights proportional to the Gaussian
/// density and normalized to sum 1. Non-positive abscissae are dropped
/// (window shrunk), which cannot happen for pd <= 0.3 at nsigmas = 3.
struct DispersionGrid {
    std::vector<double> abscissae;
    std::vector<double> weights;
    bool window_shrunk = false;
};

DispersionGrid polydispersity_grid(double mean, double pd, int points = 35, double nsigmas = 3.0);

/// Weighted average of a one-parameter intensity family over the Gaussian
/// grid above. pd = 0 returns eval_at(mean) exactly.
struct PolydispersityResult {
    std::vector<double> intensity;
    bool window_shrunk = false;
};

PolydispersityResult apply_polydispersity(
    const std::function<std::vector<double>(double)>& eval_at, double mean, double pd,
    int points = 35, double nsigmas = 3.0);

/// Full per-class evaluation: dispatches on the shape tag and applies
/// polydispersity to the designated parameter (radius for sphere and
/// cylinder families, aspect for ellipsoids; statistical models carry none).
std::vector<double> evaluate_intensity(const QGrid& q, const ModelParams& p,
                                       bool* window_shrunk = nullptr);

} // namespace scan
