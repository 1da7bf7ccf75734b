#include "scan/math/quadrature.hpp"

#include <cmath>

namespace scan {

// Newton iteration on Legendre polynomials; nodes accurate to ~1e-15.
GaussLegendreRule gauss_legendre(int n, double a, double b) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    const double xm = 0.5 * (b + a);
    const double xl = 0.5 * (b - a);
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p0 / pp;
            if (std::fabs(z - z1) < 1e-15) break;
        }
        rule.nodes[i] = xm - xl * z;
        rule.nodes[n - 1 - i] = xm + xl * z;
        rule.weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
}

const GaussLegendreRule& orientation_rule() {
    static const GaussLegendreRule rule = gauss_legendre(76, 0.0, M_PI / 2.0);
    return rule;
}

const GaussLegendreRule& orientation_rule_doubled() {
    static const GaussLegendreRule rule = gauss_legendre(152, 0.0, M_PI / 2.0);
    return rule;
}

} // namespace scan
