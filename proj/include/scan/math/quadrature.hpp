#pragma once

#include <vector>

namespace scan {

/// Nodes and weights of an n-point Gauss-Legendre rule on [a, b].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n, double a, double b);

/// Default orientation-average rule: 76 points on [0, pi/2].
const GaussLegendreRule& orientation_rule();

/// Same interval at doubled order, for convergence checks.
const GaussLegendreRule& orientation_rule_doubled();

} // namespace scan
