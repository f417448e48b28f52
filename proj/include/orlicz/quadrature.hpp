#pragma once

#include <cmath>

namespace orlicz::quad {

namespace detail {

template <class F>
double simpson_recurse(const F& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
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
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson on [a, b]. The error target is max(rel_tol * |estimate|, abs_floor).
template <class F>
double adaptive_simpson(const F& f, double a, double b, double rel_tol = 1e-10,
                        double abs_floor = 1e-30, int max_depth = 48)
{
    if (b == a) {
        return 0.0;
    }
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // a coarse estimate of the magnitude fixes the absolute target for the recursion
    const double coarse = std::abs(whole);
    const double tol = std::fmax(rel_tol * coarse, abs_floor);
    return detail::simpson_recurse(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace orlicz::quad
