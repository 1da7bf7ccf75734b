#include "scan/sim/form_factors.hpp"

#include <cmath>
#include <stdexcept>

#include <map>
#include <memory>
#include <mutex>

#include "scan/math/special.hpp"
#include "scan/util/error.hpp"

namespace scan {

int orientation_order(double phase_span) {
    if (!(phase_span > 0.0)) return 76;
    const double needed = 0.7 * phase_span + 40.0;
    if (needed <= 76.0) return 76;
    return static_cast<int>(std::ceil(needed / 32.0)) * 32;
}

const GaussLegendreRule& orientation_rule_for(int order) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<GaussLegendreRule>(gauss_legendre(order, 0.0, M_PI / 2.0));
    return *slot;
}

double sphere_amplitude(double x) {
    const double ax = std::fabs(x);
    if (ax < 1e-2) {
        // 1 - x^2/10 + x^4/280 - x^6/15120
        const double t = x * x;
        return 1.0 + t * (-0.1 + t * (1.0 / 280.0 - t / 15120.0));
    }
    return 3.0 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

namespace {

double sinc(double x) {
    const double ax = std::fabs(x);
    if (ax < 1e-4) {
        const double t = x * x;
        return 1.0 - t / 6.0 * (1.0 - t / 20.0);
    }
    return std::sin(x) / x;
}

// Normalized radial amplitude of a hollow circular section,
// Psi(u) = 2/(1-gamma^2) * [J1(u)/u - gamma^2 J1(gamma*u)/(gamma*u)].
double hollow_radial_amplitude(double u, double gamma) {
    const double g2 = gamma * gamma;
    return (bessel_j1c(u) - g2 * bessel_j1c(gamma * u)) / (1.0 - g2);
}

} // namespace

std::vector<double> intensity_sphere(const QGrid& q, const SphereGeom& g, double scale,
                                     double background) {
    std::vector<double> out(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double a = sphere_amplitude(q[i] * g.radius);
        out[i] = scale * a * a + background;
    }
    return out;
}

std::vector<double> intensity_fuzzy_sphere(const QGrid& q, const FuzzySphereGeom& g, double scale,
                                           double background) {
    std::vector<double> out(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double a = sphere_amplitude(q[i] * g.radius) *
                         std::exp(-0.5 * (g.sigma_fuzzy * q[i]) * (g.sigma_fuzzy * q[i]));
        out[i] = scale * a * a + background;
    }
    return out;
}

std::vector<double> intensity_ellipsoid(const QGrid& q, const EllipsoidGeom& g, double scale,
                                        double background, const GaussLegendreRule* rule_arg) {
    const double span = q.values().back() * std::fabs(g.aspect - 1.0) * g.r_equatorial;
    const auto& rule = rule_arg ? *rule_arg : orientation_rule_for(orientation_order(span));
    const std::size_t nq = q.size();
    std::vector<double> out(nq, 0.0);
    const double r_eq2 = g.r_equatorial * g.r_equatorial;
    const double r_pol2 = r_eq2 * g.aspect * g.aspect;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double s = std::sin(rule.nodes[k]);
        const double c = std::cos(rule.nodes[k]);
        const double r_eff = std::sqrt(r_eq2 * s * s + r_pol2 * c * c);
        const double w = rule.weights[k] * s;
        for (std::size_t i = 0; i < nq; ++i) {
            const double a = sphere_amplitude(q[i] * r_eff);
            out[i] += w * a * a;
        }
    }
    for (double& v : out) v = scale * v + background;
    return out;
}

std::vector<double> intensity_cylinder(const QGrid& q, const CylinderGeom& g, double scale,
                                       double background, const GaussLegendreRule* rule_arg) {
    const double span = q.values().back() * (0.5 * g.length + g.radius);
    const auto& rule = rule_arg ? *rule_arg : orientation_rule_for(orientation_order(span));
    const std::size_t nq = q.size();
    std::vector<double> out(nq, 0.0);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double s = std::sin(rule.nodes[k]);
        const double c = std::cos(rule.nodes[k]);
        const double w = rule.weights[k] * s;
        for (std::size_t i = 0; i < nq; ++i) {
            const double axial = sinc(0.5 * q[i] * g.length * c);
            const double radial = bessel_j1c(q[i] * g.radius * s);
            const double a = axial * radial;
            out[i] += w * a * a;
        }
    }
    for (double& v : out) v = scale * v + background;
    return out;
}

std::vector<double> intensity_hollow_cylinder(const QGrid& q, const HollowCylinderGeom& g,
                                              double scale, double background,
                                              const GaussLegendreRule* rule_arg) {
    const double span = q.values().back() * (0.5 * g.length + g.radius);
    const auto& rule = rule_arg ? *rule_arg : orientation_rule_for(orientation_order(span));
    const double gamma = g.core_radius / g.radius;
    const std::size_t nq = q.size();
    std::vector<double> out(nq, 0.0);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double s = std::sin(rule.nodes[k]);
        const double c = std::cos(rule.nodes[k]);
        const double w = rule.weights[k] * s;
        for (std::size_t i = 0; i < nq; ++i) {
            const double axial = sinc(0.5 * q[i] * g.length * c);
            const double radial = hollow_radial_amplitude(q[i] * g.radius * s, gamma);
            const double a = axial * radial;
            out[i] += w * a * a;
        }
    }
    for (double& v : out) v = scale * v + background;
    return out;
}

std::vector<double> intensity_dab(const QGrid& q, const DabGeom& g, double scale,
                                  double background) {
    std::vector<double> out(q.size());
    const double xi3 = g.xi * g.xi * g.xi;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double d = 1.0 + (q[i] * g.xi) * (q[i] * g.xi);
        out[i] = scale * 8.0 * M_PI * xi3 / (d * d) + background;
    }
    return out;
}

std::vector<double> intensity_teubner_strey(const QGrid& q, const TeubnerStreyGeom& g,
                                            double scale, double background) {
    const double k = 2.0 * M_PI / g.d_period;
    const double b = 1.0 / g.xi;
    const double a2 = (k * k + b * b) * (k * k + b * b);
    const double c1 = 2.0 * (b * b - k * k);
    std::vector<double> out(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double q2 = q[i] * q[i];
        const double denom = a2 + c1 * q2 + q2 * q2;
        if (!(denom > 0.0)) {
            throw std::invalid_argument("teubner-strey denominator non-positive on the grid");
        }
        out[i] = scale / denom + background;
    }
    return out;
}

std::vector<double> intensity_polymer_ev(const QGrid& q, const PolymerEvGeom& g, double scale,
                                         double background) {
    const double s1 = 1.0 / (2.0 * g.nu);
    const double s2 = 1.0 / g.nu;
    const double gamma_s1 = std::tgamma(s1);
    const double gamma_s2 = std::tgamma(s2);
    const double u_coeff = g.rg * g.rg * (2.0 * g.nu + 1.0) * (2.0 * g.nu + 2.0) / 6.0;
    std::vector<double> out(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double u = u_coeff * q[i] * q[i];
        double p;
        if (u < 1e-8) {
            p = 1.0; // Guinier limit of the normalized form
        } else {
            p = regularized_gamma_p(s1, u) * gamma_s1 / (g.nu * std::pow(u, s1)) -
                regularized_gamma_p(s2, u) * gamma_s2 / (g.nu * std::pow(u, s2));
        }
        out[i] = scale * p + background;
    }
    return out;
}

std::vector<double> intensity_mixture(const QGrid& q, const MixtureGeom& g, double scale,
                                      double background) {
    const auto sph = intensity_sphere(q, g.sphere, 1.0, 0.0);
    const auto cyl = intensity_cylinder(q, g.cylinder, 1.0, 0.0);
    std::vector<double> out(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        out[i] = scale * (g.weight * sph[i] + (1.0 - g.weight) * cyl[i]) + background;
    }
    return out;
}

DispersionGrid polydispersity_grid(double mean, double pd, int points, double nsigmas) {
    DispersionGrid grid;
    if (pd == 0.0) {
        grid.abscissae = {mean};
        grid.weights = {1.0};
        return grid;
    }
    if (pd < 0.0) throw std::invalid_argument("pd must be >= 0");
    const double sigma = pd * mean;
    double wsum = 0.0;
    for (int i = 0; i < points; ++i) {
        const double t = -nsigmas + 2.0 * nsigmas * i / (points - 1);
        const double x = mean + sigma * t;
        if (x <= 0.0) {
            grid.window_shrunk = true;
            continue;
        }
        grid.abscissae.push_back(x);
        grid.weights.push_back(std::exp(-0.5 * t * t));
        wsum += grid.weights.back();
    }
    for (double& w : grid.weights) w /= wsum;
    return grid;
}

PolydispersityResult apply_polydispersity(
    const std::function<std::vector<double>(double)>& eval_at, double mean, double pd, int points,
    double nsigmas) {
    PolydispersityResult res;
    if (pd == 0.0) {
        res.intensity = eval_at(mean);
        return res;
    }
    const DispersionGrid grid = polydispersity_grid(mean, pd, points, nsigmas);
    res.window_shrunk = grid.window_shrunk;
    for (std::size_t j = 0; j < grid.abscissae.size(); ++j) {
        const auto curve = eval_at(grid.abscissae[j]);
        if (res.intensity.empty()) res.intensity.assign(curve.size(), 0.0);
        for (std::size_t i = 0; i < curve.size(); ++i) {
            res.intensity[i] += grid.weights[j] * curve[i];
        }
    }
    return res;
}

namespace {

// Dispersed cylinder-family evaluation. The axial factor is independent of
// the dispersed radius, so it is computed once per (orientation, q) pair and
// reused across the size distribution. Must stay numerically equivalent to
// apply_polydispersity over the monodisperse kernel (same grid, same sums).
template <typename RadialFn>
std::vector<double> dispersed_cylinder_family(const QGrid& q, double mean_radius, double pd,
                                              double length, const RadialFn& radial) {
    const DispersionGrid grid = polydispersity_grid(mean_radius, pd);
    const double max_radius = grid.abscissae.back();
    const double span = q.values().back() * (0.5 * length + max_radius);
    const auto& rule = orientation_rule_for(orientation_order(span));
    const std::size_t nq = q.size();
    const std::size_t na = rule.nodes.size();
    std::vector<double> axial(na * nq);
    std::vector<double> sin_a(na), wsin(na);
    for (std::size_t k = 0; k < na; ++k) {
        sin_a[k] = std::sin(rule.nodes[k]);
        wsin[k] = rule.weights[k] * sin_a[k];
        const double c = std::cos(rule.nodes[k]);
        for (std::size_t i = 0; i < nq; ++i) {
            axial[k * nq + i] = sinc(0.5 * q[i] * length * c);
        }
    }
    std::vector<double> out(nq, 0.0);
    std::vector<double> qr(nq);
    for (std::size_t j = 0; j < grid.abscissae.size(); ++j) {
        const double r = grid.abscissae[j];
        const double wj = grid.weights[j];
        // (q*r)*sin matches the monodisperse kernel's association exactly,
        // so pd = 0 reproduces it bit for bit
        for (std::size_t i = 0; i < nq; ++i) qr[i] = q[i] * r;
        for (std::size_t k = 0; k < na; ++k) {
            const double s = sin_a[k];
            const double w = wj * wsin[k];
            const double* ax = &axial[k * nq];
            for (std::size_t i = 0; i < nq; ++i) {
                const double a = ax[i] * radial(qr[i] * s);
                out[i] += w * a * a;
            }
        }
    }
    return out;
}

std::vector<double> scaled(std::vector<double> v, double scale, double background) {
    for (double& x : v) x = scale * x + background;
    return v;
}

} // namespace

std::vector<double> evaluate_intensity(const QGrid& q, const ModelParams& p, bool* window_shrunk) {
    validate_params(p);
    bool shrunk = false;
    std::vector<double> out;
    switch (p.shape) {
        case ShapeClass::sphere: {
            const auto& g = std::get<SphereGeom>(p.geom);
            auto res = apply_polydispersity(
                [&](double r) {
                    return intensity_sphere(q, SphereGeom{r, 0.0}, 1.0, 0.0);
                },
                g.radius, g.pd);
            shrunk = res.window_shrunk;
            out = scaled(std::move(res.intensity), p.scale, p.background);
            break;
        }
        case ShapeClass::fuzzy_sphere: {
            const auto& g = std::get<FuzzySphereGeom>(p.geom);
            auto res = apply_polydispersity(
                [&](double r) {
                    return intensity_fuzzy_sphere(q, FuzzySphereGeom{r, g.sigma_fuzzy, 0.0}, 1.0,
                                                  0.0);
                },
                g.radius, g.pd);
            shrunk = res.window_shrunk;
            out = scaled(std::move(res.intensity), p.scale, p.background);
            break;
        }
        case ShapeClass::ellipsoid_prolate:
        case ShapeClass::ellipsoid_oblate: {
            const auto& g = std::get<EllipsoidGeom>(p.geom);
            auto res = apply_polydispersity(
                [&](double aspect) {
                    return intensity_ellipsoid(q, EllipsoidGeom{g.r_equatorial, aspect, 0.0}, 1.0,
                                               0.0);
                },
                g.aspect, g.pd);
            shrunk = res.window_shrunk;
            out = scaled(std::move(res.intensity), p.scale, p.background);
            break;
        }
        case ShapeClass::cylinder_long:
        case ShapeClass::disk: {
            const auto& g = std::get<CylinderGeom>(p.geom);
            out = scaled(dispersed_cylinder_family(q, g.radius, g.pd, g.length,
                                                   [](double u) { return bessel_j1c(u); }),
                         p.scale, p.background);
            break;
        }
        case ShapeClass::cylinder_hollow:
        case ShapeClass::cylinder_long_hollow: {
            const auto& g = std::get<HollowCylinderGeom>(p.geom);
            const double gamma = g.core_radius / g.radius;
            out = scaled(
                dispersed_cylinder_family(
                    q, g.radius, g.pd, g.length,
                    [gamma](double u) { return hollow_radial_amplitude(u, gamma); }),
                p.scale, p.background);
            break;
        }
        case ShapeClass::dab:
            out = intensity_dab(q, std::get<DabGeom>(p.geom), p.scale, p.background);
            break;
        case ShapeClass::polymer_excluded_volume:
            out = intensity_polymer_ev(q, std::get<PolymerEvGeom>(p.geom), p.scale, p.background);
            break;
        case ShapeClass::teubner_strey:
            out = intensity_teubner_strey(q, std::get<TeubnerStreyGeom>(p.geom), p.scale,
                                          p.background);
            break;
        case ShapeClass::sphere_cylinder_mix: {
            const auto& g = std::get<MixtureGeom>(p.geom);
            auto sph = apply_polydispersity(
                [&](double r) {
                    return intensity_sphere(q, SphereGeom{r, 0.0}, 1.0, 0.0);
                },
                g.sphere.radius, g.sphere.pd);
            auto cyl = dispersed_cylinder_family(q, g.cylinder.radius, g.cylinder.pd,
                                                 g.cylinder.length,
                                                 [](double u) { return bessel_j1c(u); });
            shrunk = sph.window_shrunk;
            out.resize(q.size());
            for (std::size_t i = 0; i < q.size(); ++i) {
                out[i] = p.scale * (g.weight * sph.intensity[i] + (1.0 - g.weight) * cyl[i]) +
                         p.background;
            }
            break;
        }
    }
    if (window_shrunk) *window_shrunk = shrunk;
    return out;
}

} // namespace scan
