#pragma once

namespace scan {

/// Bessel function of the first kind, order 1. Power series for |x| <= 17,
/// truncated Hankel asymptotic expansion beyond. Absolute error below 1e-10
/// for |x| <= 1e4.
double bessel_j1(double x);

/// 2*J1(x)/x with the removable singularity filled in (value 1 at x = 0).
/// This is the radial amplitude of a thin circular section.
double bessel_j1c(double x);

/// Lower incomplete gamma function, gamma(s, x) = integral of
/// t^(s-1) e^(-t) over [0, x]. Series expansion for x < s + 1, continued
/// fraction for the upper tail otherwise. Relative error below 1e-12 for
/// s in (0, 10], x in [0, 1e6]. Throws std::domain_error for s <= 0 or x < 0.
double lower_incomplete_gamma(double s, double x);

/// Regularized form P(s, x) = gamma(s, x) / Gamma(s).
double regularized_gamma_p(double s, double x);

} // namespace scan
