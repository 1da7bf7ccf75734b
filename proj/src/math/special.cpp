#include "scan/math/special.hpp"

#include <cmath>
#include <stdexcept>

namespace scan {

namespace {

// J1 power series: (x/2) * sum_k (-t)^k / (k! (k+1)!), t = x^2/4.
// Worst-case cancellation at x = 17 costs ~5 digits, leaving ~1e-11 absolute.
double j1_series(double x) {
    const double t = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= -t / (static_cast<double>(k) * (k + 1));
        sum += term;
        if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    }
    return 0.5 * x * sum;
}

// Hankel expansion coefficients a_k = prod_{m=1..k} (4 - (2m-1)^2) / (k! 8^k)
// for nu = 1. P keeps even terms through a8, Q odd terms through a7; the
// truncation error is below 2e-11 for x >= 17.
double j1_asymptotic(double x) {
    const double inv2 = 1.0 / (x * x);
    const double a1 = 3.0 / 8.0;
    const double a2 = -15.0 / 128.0;
    const double a3 = 315.0 / 3072.0;
    const double a4 = -14175.0 / 98304.0;
    const double a5 = 1091475.0 / 3932160.0;
    const double a6 = -127702575.0 / 188743680.0;
    const double a7 = 21071819250.0 / 10569646080.0;
    const double a8 = -4656872104250.0 / 676457349120.0;
    const double p = 1.0 + inv2 * (-a2 + inv2 * (a4 + inv2 * (-a6 + inv2 * a8)));
    const double q = (a1 + inv2 * (-a3 + inv2 * (a5 + inv2 * -a7))) / x;
    const double chi = x - 2.356194490192344929; // 3*pi/4
    return std::sqrt(2.0 / (M_PI * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

} // namespace

double bessel_j1(double x) {
    const double ax = std::fabs(x);
    const double v = ax <= 17.0 ? j1_series(ax) : j1_asymptotic(ax);
    return x < 0.0 ? -v : v;
}

double bessel_j1c(double x) {
    const double ax = std::fabs(x);
    if (ax < 1e-2) {
        // 2*J1(x)/x = 1 - x^2/8 + x^4/192 - x^6/9216 + ...
        const double t = x * x;
        return 1.0 + t * (-1.0 / 8.0 + t * (1.0 / 192.0 - t / 9216.0));
    }
    return 2.0 * bessel_j1(x) / x;
}

namespace {

// Series for P(s,x), valid and fast for x < s + 1.
double gamma_p_series(double s, double x) {
    double ap = s;
    double term = 1.0 / s;
    double sum = term;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Modified Lentz continued fraction for Q(s,x), x >= s + 1.
double gamma_q_continued_fraction(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

} // namespace

double regularized_gamma_p(double s, double x) {
    if (!(s > 0.0)) throw std::domain_error("lower_incomplete_gamma: s must be > 0");
    if (x < 0.0) throw std::domain_error("lower_incomplete_gamma: x must be >= 0");
    if (x == 0.0) return 0.0;
    return x < s + 1.0 ? gamma_p_series(s, x) : 1.0 - gamma_q_continued_fraction(s, x);
}

double lower_incomplete_gamma(double s, double x) {
    return regularized_gamma_p(s, x) * std::tgamma(s);
}

} // namespace scan
