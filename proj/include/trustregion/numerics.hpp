#pragma once

// Scalar numerical building blocks: adaptive Simpson quadrature and
// bracketed bisection.

#include "trustregion/errors.hpp"

#include <cmath>
#include <string>

namespace trustregion {

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive composite Simpson rule on [a, b] with absolute tolerance `tol`.
/// Richardson-corrected; exact for cubics.
template <class F>
double integrate_simpson(const F& f, double a, double b, double tol = 1e-10, int max_depth = 48) {
    if (b == a) {
        return 0.0;
    }
    if (b < a) {
        return -integrate_simpson(f, b, a, tol, max_depth);
    }
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

/// Root of a continuous function on [lo, hi] by bisection. Requires a sign
/// change (or a zero) at the bracket ends; stops when the bracket is shorter
/// than `x_tol`.
template <class F>
double bisect(const F& f, double lo, double hi, double x_tol = 1e-13, int max_iter = 400) {
    double flo = f(lo);
    if (flo == 0.0) {
        return lo;
    }
    const double fhi = f(hi);
    if (fhi == 0.0) {
        return hi;
    }
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw SolverError("bisection: root not bracketed on [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]",
                          {flo, fhi});
    }
    for (int it = 0; it < max_iter && hi - lo > x_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double fm = f(mid);
        if (fm == 0.0) {
            return mid;
        }
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace trustregion
