#pragma once

// Reference implementations used only by tests. These deliberately take
// different numerical routes than the library (long-double power series,
// adaptive Simpson quadrature, cyclic Jacobi eigendecomposition) so they can
// serve as independent oracles.

#include <cmath>
#include <vector>

#include <Eigen/Core>

namespace oracle {

// --- adaptive Simpson quadrature (long double) ------------------------------

namespace detail {

template <typename F>
long double simpson_step(const F& f, long double a, long double m, long double b, long double fa,
                         long double fm, long double fb, long double whole, long double tol,
                         int depth) {
    const long double lm = 0.5L * (a + m);
    const long double rm = 0.5L * (m + b);
    const long double flm = f(lm);
    const long double frm = f(rm);
    const long double left = (m - a) / 6.0L * (fa + 4.0L * flm + fm);
    const long double right = (b - m) / 6.0L * (fm + 4.0L * frm + fb);
    if (depth <= 0 || std::fabs(static_cast<double>(left + right - whole)) < 15.0L * tol) {
        return left + right + (left + right - whole) / 15.0L;
    }
    return simpson_step(f, a, lm, m, fa, flm, fm, left, 0.5L * tol, depth - 1) +
           simpson_step(f, m, rm, b, fm, frm, fb, right, 0.5L * tol, depth - 1);
}

} // namespace detail

template <typename F>
long double adaptive_simpson(const F& f, long double a, long double b, long double tol,
                             int max_depth = 40) {
    const long double m = 0.5L * (a + b);
    const long double fa = f(a), fm = f(m), fb = f(b);
    const long double whole = (b - a) / 6.0L * (fa + 4.0L * fm + fb);
    return detail::simpson_step(f, a, m, b, fa, fm, fb, whole, tol, max_depth);
}

// --- special functions -------------------------------------------------------

/// J1 power series in long double; converges well for |x| <= 30.
inline long double j1_series(long double x) {
    const long double t = 0.25L * x * x;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < 120; ++k) {
        term *= -t / (static_cast<long double>(k) * (k + 1));
        sum += term;
        if (std::fabs(static_cast<double>(term)) < 1e-25 * std::fabs(static_cast<double>(sum))) {
            break;
        }
    }
    return 0.5L * x * sum;
}

/// Sphere amplitude in long double (closed form; series near zero).
inline long double sphere_amplitude(long double x) {
    if (std::fabs(static_cast<double>(x)) < 1e-3) {
        const long double t = x * x;
        return 1.0L - t / 10.0L + t * t / 280.0L;
    }
    return 3.0L * (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

inline long double sphere_intensity(long double q, long double radius, long double scale,
                                    long double background) {
    const long double a = sphere_amplitude(q * radius);
    return scale * a * a + background;
}

/// Debye chain scattering function 2(e^-x - 1 + x)/x^2.
inline double debye(double x) {
    if (x < 1e-6) return 1.0 - x / 3.0;
    return 2.0 * (std::exp(-x) - 1.0 + x) / (x * x);
}

// --- linear algebra ----------------------------------------------------------

/// Cyclic Jacobi eigendecomposition of a symmetric matrix; eigenvalues are
/// returned descending with matching eigenvector columns.
inline void jacobi_eigen(Eigen::MatrixXd a, Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
    const int n = static_cast<int>(a.rows());
    vectors = Eigen::MatrixXd::Identity(n, n);
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        }
        if (std::sqrt(off) < 1e-30 + 1e-15 * a.norm()) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t =
                    (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1.0 / std::sqrt(t * t + 1);
                const double s = t * c;
                Eigen::VectorXd ap = a.col(p), aq = a.col(q);
                a.col(p) = c * ap - s * aq;
                a.col(q) = s * ap + c * aq;
                Eigen::VectorXd rp = a.row(p), rq = a.row(q);
                a.row(p) = c * rp.transpose() - s * rq.transpose();
                a.row(q) = s * rp.transpose() + c * rq.transpose();
                Eigen::VectorXd vp = vectors.col(p), vq = vectors.col(q);
                vectors.col(p) = c * vp - s * vq;
                vectors.col(q) = s * vp + c * vq;
            }
        }
    }
    values = a.diagonal();
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) { return values[i] > values[j]; });
    Eigen::VectorXd sorted_values(n);
    Eigen::MatrixXd sorted_vectors(n, n);
    for (int i = 0; i < n; ++i) {
        sorted_values[i] = values[order[i]];
        sorted_vectors.col(i) = vectors.col(order[i]);
    }
    values = sorted_values;
    vectors = sorted_vectors;
}

} // namespace oracle
