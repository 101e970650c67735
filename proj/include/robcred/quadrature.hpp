#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace robcred {

// Gauss-Legendre nodes/weights on [-1,1], computed by Newton iteration on the
// Legendre recurrence and cached per order.
inline const std::pair<std::vector<double>, std::vector<double>>&
gauss_legendre_rule(int n) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<double> x(n), w(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

template <class F>
double gauss_legendre(const F& f, double a, double b, int n) {
    const auto& [x, w] = gauss_legendre_rule(n);
    const double c = 0.5 * (b - a), mid = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * f(mid + c * x[i]);
    return c * s;
}

// Adaptive G7-K15 quadrature (boost.math). Returns the estimate; optionally
// reports the error bound.
template <class F>
double adaptive_integrate(const F& f, double a, double b, double tol = 1e-10,
                          double* err_out = nullptr) {
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 15, tol, &err);
    if (err_out) *err_out = err;
    return v;
}

// Integrates f over [a,b] inside [0,1] where f may carry integrable power or
// log singularities at the endpoints 0 and 1. A power substitution
// (w = s^4 near 0, 1-w = s^16 near 1) turns such singularities into bounded
// integrands before the adaptive rule runs; away from the endpoints the
// integrand is passed through unchanged.
//
// Near w = 1 the integrand is evaluated through f_tail(1-w): the substituted
// tail 1-w = s^16 is known to full relative precision while 1 - s^16 is not,
// and forming w there silently flattens everything closer to 1 than machine
// epsilon — a region the substitution makes wide enough to carry real mass.
template <class F, class G>
double integrate01_tail(const F& f, const G& f_tail, double a, double b,
                        double tol = 1e-10) {
    if (!(a < b)) return 0.0;
    double total = 0.0;
    double lo = a, hi = b;

    if (a == 0.0) {
        const double cut = std::min(b, 0.25);
        const double s1 = std::pow(cut, 0.25);
        total += adaptive_integrate(
            [&](double s) {
                const double s2 = s * s;
                const double w = s2 * s2;
                if (w <= 0.0) return 0.0;  // underflow: weight 4s^3 ~ 0 too
                return 4.0 * s2 * s * f(w);
            },
            0.0, s1, tol);
        lo = cut;
    }
    if (b == 1.0) {
        const double cut = std::max(a, 0.75);
        const double s1 = std::pow(1.0 - cut, 1.0 / 16.0);
        total += adaptive_integrate(
            [&](double s) {
                const double s2 = s * s, s4 = s2 * s2, s8 = s4 * s4;
                const double omw = s8 * s8;
                if (omw <= 0.0) return 0.0;  // s^16 below DBL_MIN
                return 16.0 * s8 * s4 * s2 * s * f_tail(omw);
            },
            0.0, s1, tol);
        hi = cut;
    }
    if (lo < hi) total += adaptive_integrate(f, lo, hi, tol);
    return total;
}

template <class F>
double integrate01(const F& f, double a, double b, double tol = 1e-10) {
    // Fallback without a tail form: below machine epsilon 1 - omw rounds to
    // exactly 1, so treat that region as zero. Callers whose integrand keeps
    // real mass there must supply f_tail via integrate01_tail.
    return integrate01_tail(
        f,
        [&](double omw) {
            const double w = 1.0 - omw;
            return w >= 1.0 ? 0.0 : f(w);
        },
        a, b, tol);
}

}  // namespace robcred
