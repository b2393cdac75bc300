#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace hypecurve {

struct QuadratureOptions {
    double rel_tol = 1e-8;
    int max_depth = 40;
};

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

}  // namespace detail

/// Adaptive Simpson with Richardson correction. The error target is
/// rel_tol times the magnitude of the first whole-interval estimate.
template <class F>
double adaptive_simpson(const F& f, double a, double b, const QuadratureOptions& opts = {}) {
    if (a == b) {
        return 0.0;
    }
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = std::max(opts.rel_tol * std::abs(whole),
                                std::numeric_limits<double>::min());
    return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, tol, opts.max_depth);
}

}  // namespace hypecurve
