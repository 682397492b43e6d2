#pragma once

// Thin wrappers around Boost.Math: adaptive Gauss-Kronrod integration on
// finite intervals and on [0, inf) (via the rational substitution
// u = t/(1-t), which keeps integrands with u^-2 tails finite at t = 1), and
// TOMS 748 bracketed root finding.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "qmed/common.hpp"

namespace qmed {

inline double integrate_interval(const std::function<double(double)>& f, double a, double b,
                                 double abs_tol) {
    double err = 0.0;
    // Ask boost for 1e-12 relative accuracy. Asking for less than what the
    // nodes can deliver makes the refinement give up and report the larger
    // unconverged estimate instead.
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, /*max_depth=*/18, /*tol=*/1e-12, &err);
    if (!std::isfinite(v) || err > std::max(abs_tol, 1e-12 * std::abs(v)))
        throw numerical_error("integrate_interval: did not converge");
    return v;
}

// Integral of f over [0, inf). f must be evaluable for arbitrarily large
// arguments (returning 0 beyond its support is fine).
inline double integrate_half_line(const std::function<double(double)>& f, double abs_tol) {
    auto g = [&f](double t) {
        const double om = 1.0 - t;
        const double u = t / om;
        const double fu = f(u);
        if (fu == 0.0) return 0.0;
        return fu / (om * om);
    };
    double err = 0.0;
    // Same tol note as integrate_interval: 1e-12 is the achievable target.
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        g, 0.0, 1.0, /*max_depth=*/18, /*tol=*/1e-12, &err);
    if (!std::isfinite(v) || err > std::max(abs_tol, 1e-12 * std::abs(v)))
        throw numerical_error("integrate_half_line: did not converge");
    return v;
}

// Root of f in [lo, hi]; f(lo) and f(hi) must bracket (opposite signs or a
// zero endpoint). Terminates when the bracket is below tol * max(1, |root|).
inline double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                                  double tol) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw numerical_error("find_root_bracketed: endpoints do not bracket a root");
    std::uintmax_t max_iter = 200;
    auto done = [tol](double a, double b) { return b - a <= tol * std::max(1.0, std::abs(b)); };
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, done, max_iter);
    return 0.5 * (r.first + r.second);
}

}  // namespace qmed
