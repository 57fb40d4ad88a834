#ifndef GASWALL_NUMERICS_HPP
#define GASWALL_NUMERICS_HPP

#include <gaswall/error.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace gaswall::numerics {

namespace detail {

struct Panel
{
    double value;
    double error;
    double l1;
};

template <typename F>
Panel gk_panel(F& f, double a, double b)
{
    Panel p{0, 0, 0};
    p.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 0, 0.0,
                                                                            &p.error, &p.l1);
    // Boost reports the single-panel error for the map onto [-1, 1]; rescale it.
    p.error *= 0.5 * std::abs(b - a);
    return p;
}

template <typename F>
Panel gk_adaptive(F& f, double a, double b, Panel whole, double budget, unsigned depth)
{
    if (whole.error <= budget || depth == 0) {
        return whole;
    }
    double const mid = 0.5 * (a + b);
    Panel const left = gk_adaptive(f, a, mid, gk_panel(f, a, mid), 0.5 * budget, depth - 1);
    Panel const right = gk_adaptive(f, mid, b, gk_panel(f, mid, b), 0.5 * budget, depth - 1);
    return {left.value + right.value, left.error + right.error, left.l1 + right.l1};
}

} // namespace detail

/**
 * Adaptive Gauss-Kronrod (61 point) integral of f over [a, b].
 *
 * Panels are bisected until the error estimate drops below
 * max(rel_tol * L1, abs_floor), L1 taken from the first pass. Throws
 * numerical_error if that is not reached within max_depth levels.
 */
template <typename F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12,
                 double abs_floor = 1e-15, unsigned max_depth = 15)
{
    if (a == b) {
        return 0.0;
    }
    detail::Panel const first = detail::gk_panel(f, a, b);
    double const target = std::max(rel_tol * first.l1, abs_floor);
    detail::Panel const result = detail::gk_adaptive(f, a, b, first, target, max_depth);
    if (!std::isfinite(result.value)) {
        throw numerical_error("quadrature produced a non-finite value");
    }
    if (result.error > std::max(rel_tol * result.l1, abs_floor)) {
        throw numerical_error("quadrature did not converge: error estimate "
                              + std::to_string(result.error));
    }
    return result.value;
}

/**
 * Root of a sign-changing function on [lo, hi], bisected until the bracket
 * cannot shrink any further in double precision.
 */
template <typename F>
double bisect(F&& f, double lo, double hi)
{
    double const flo = f(lo);
    double const fhi = f(hi);
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    if ((flo > 0) == (fhi > 0)) {
        throw numerical_error("bisection: root is not bracketed");
    }
    std::uintmax_t max_iter = 200;
    auto const bracket = boost::math::tools::bisect(
        f, lo, hi, boost::math::tools::eps_tolerance<double>(), max_iter);
    return 0.5 * (bracket.first + bracket.second);
}

/// Five-point central first derivative, one Richardson step (h, h/2).
template <typename F>
double derivative(F&& f, double x, double h)
{
    auto stencil = [&](double s) {
        return (-f(x + 2 * s) + 8 * f(x + s) - 8 * f(x - s) + f(x - 2 * s)) / (12 * s);
    };
    double const coarse = stencil(h);
    double const fine = stencil(0.5 * h);
    return (16 * fine - coarse) / 15;
}

/// Five-point central second derivative, one Richardson step (h, h/2).
template <typename F>
double second_derivative(F&& f, double x, double h)
{
    double const f0 = f(x);
    auto stencil = [&](double s) {
        return (-f(x + 2 * s) + 16 * f(x + s) - 30 * f0 + 16 * f(x - s) - f(x - 2 * s))
               / (12 * s * s);
    };
    double const coarse = stencil(h);
    double const fine = stencil(0.5 * h);
    return (16 * fine - coarse) / 15;
}

/// Symmetric difference with one Richardson step; error O(h^4).
template <typename F>
double symmetric_derivative(F&& f, double x, double h)
{
    auto central = [&](double s) { return (f(x + s) - f(x - s)) / (2 * s); };
    return (4 * central(0.5 * h) - central(h)) / 3;
}

} // namespace gaswall::numerics

#endif // GASWALL_NUMERICS_HPP
