#ifndef GASWALL_LOG_GAS_HPP
#define GASWALL_LOG_GAS_HPP

#include <gaswall/error.hpp>
#include <gaswall/numerics.hpp>
#include <gaswall/potential.hpp>
#include <gaswall/special_fns.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace gaswall {

enum class Phase { pushed, pulled };

inline char const* to_string(Phase p) noexcept { return p == Phase::pushed ? "pushed" : "pulled"; }

namespace log_gas {

struct ExpansionOptions
{
    double tol = 1e-12;            // truncation threshold on |n c_n|
    std::size_t max_degree = 4096; // hard cap on the truncation index
    int max_nodes = 1 << 16;
};

namespace detail {

// Gauss-Chebyshev estimate of c_0..c_{count-1} for V(R u) with k nodes.
inline std::vector<double> chebyshev_transform(RadialPotential const& pot, double R, int k,
                                               std::size_t count)
{
    std::vector<double> c(count, 0.0);
    for (int j = 1; j <= k; ++j) {
        double const u = std::cos((2.0 * j - 1) * std::numbers::pi / (2.0 * k));
        double const f = pot.v(std::abs(R * u));
        double t_prev = 1.0;
        double t = u;
        c[0] += f;
        for (std::size_t n = 1; n < count; ++n) {
            c[n] += f * t;
            double const next = 2 * u * t - t_prev;
            t_prev = t;
            t = next;
        }
    }
    c[0] /= k;
    for (std::size_t n = 1; n < count; ++n) {
        c[n] *= 2.0 / k;
    }
    for (std::size_t n = 1; n < count; n += 2) {
        c[n] = 0.0;
    }
    return c;
}

} // namespace detail

/**
 * Chebyshev coefficients c_n(R) of V(R u) on [-1, 1].
 *
 * Node count doubles from 64 until two successive estimates agree to
 * 1e-12 max(1, |c_0|); the series is cut after the last n with
 * |n c_n| >= tol (or at max_degree, in which case tail_bound reports what
 * was dropped). Odd coefficients are zero by symmetry.
 */
inline ChebExpansion expand_potential(RadialPotential const& pot, double R,
                                      ExpansionOptions const& opt = {})
{
    if (!(R > 0) || !std::isfinite(R)) {
        throw domain_error("expand_potential: R must be positive and finite");
    }
    if (!(opt.tol > 0)) {
        throw domain_error("expand_potential: tol must be positive");
    }
    auto count_for = [&](int k) {
        return std::min<std::size_t>(static_cast<std::size_t>(k), opt.max_degree + 2);
    };
    int k = 64;
    std::vector<double> prev = detail::chebyshev_transform(pot, R, k, count_for(k));
    while (k < opt.max_nodes) {
        k *= 2;
        std::vector<double> cur = detail::chebyshev_transform(pot, R, k, count_for(k));
        double const scale = std::max(1.0, std::abs(cur[0]));
        std::size_t const resolved = std::min(prev.size(), count_for(k / 2));
        double diff = 0.0;
        for (std::size_t n = 0; n < resolved; ++n) {
            diff = std::max(diff, std::abs(cur[n] - prev[n]));
        }
        if (!std::isfinite(diff)) {
            throw numerical_error("expand_potential: non-finite coefficients at R = "
                                  + std::to_string(R));
        }
        // Rounding noise in c_n is ~1e-16 |c_0|; a threshold below that never terminates.
        double const cut = std::max(opt.tol, 1e-14 * scale);
        std::size_t last = 0;
        for (std::size_t n = 1; n < resolved; ++n) {
            if (std::abs(n * cur[n]) >= cut) {
                last = n;
            }
        }
        bool const tail_seen = last + 2 < resolved || last >= opt.max_degree;
        if (diff <= 1e-12 * scale && tail_seen) {
            std::size_t const keep = std::min(last, opt.max_degree);
            ChebExpansion out;
            out.scale = R;
            out.coeffs.assign(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(keep) + 1);
            for (std::size_t n = keep + 1; n < resolved; ++n) {
                out.tail_bound = std::max(out.tail_bound, std::abs(n * cur[n]));
            }
            return out;
        }
        prev = std::move(cur);
    }
    throw numerical_error("expand_potential: Chebyshev coefficients did not converge with "
                          + std::to_string(opt.max_nodes) + " nodes at R = " + std::to_string(R));
}

/// P_R = 1 - sum_{n>=1} n c_n T_n(x/R).
inline ChebExpansion edge_polynomial(ChebExpansion const& coeffs)
{
    ChebExpansion p;
    p.scale = coeffs.scale;
    p.coeffs.assign(std::max<std::size_t>(coeffs.coeffs.size(), 1), 0.0);
    p.coeffs[0] = 1.0;
    for (std::size_t n = 1; n < coeffs.coeffs.size(); ++n) {
        p.coeffs[n] = -static_cast<double>(n) * coeffs.coeffs[n];
    }
    p.tail_bound = coeffs.tail_bound;
    return p;
}

/// sum_n n c_n; equal to 1 - P_R(R).
inline double edge_sum(ChebExpansion const& coeffs)
{
    double g = 0.0;
    for (std::size_t n = 1; n < coeffs.coeffs.size(); ++n) {
        g += n * coeffs.coeffs[n];
    }
    return g;
}

struct LogGasEquilibrium
{
    double R = 0;
    double R_star = 0;
    ChebExpansion coeffs;    // V(rho .), rho = min(R, R_star)
    ChebExpansion edge_poly; // P_rho
    double mu = 0;
    Phase phase = Phase::pushed;

    double support() const noexcept { return std::min(R, R_star); }
};

/**
 * Log-gas with symmetric hard walls at +-R for a fixed potential.
 *
 * The critical radius is found once at construction; every other quantity
 * re-expands the potential at the radius it needs.
 */
class LogGas
{
public:
    explicit LogGas(RadialPotential pot, ExpansionOptions opt = {}, double root_tol = 1e-10)
        : pot_(std::move(pot)), opt_(opt)
    {
        if (!pot_.v || !pot_.dv) {
            throw domain_error("log gas: potential needs v and dv evaluators");
        }
        r_star_ = find_critical_radius(root_tol);
    }

    RadialPotential const& potential() const noexcept { return pot_; }
    ExpansionOptions const& options() const noexcept { return opt_; }
    double critical_radius() const noexcept { return r_star_; }

    ChebExpansion expand(double R) const { return expand_potential(pot_, R, opt_); }

    /// g(R) = sum_n n c_n(R); the critical radius solves g = 1.
    double criterion(double R) const { return edge_sum(expand(R)); }

    /// P_r(r) = 1 - g(r): the edge value that carries the transition.
    double edge_value(double r) const { return 1.0 - criterion(r); }

    /// d/dr P_r(r) at R_star, symmetric difference with Richardson, h = 1e-5 R_star.
    double edge_slope() const
    {
        return numerics::symmetric_derivative([&](double r) { return edge_value(r); }, r_star_,
                                              1e-5 * r_star_);
    }

    /// -[d/dr P_r(r)]^2 / R_star: the limit of F''' from the pushed side.
    double predicted_jump() const
    {
        double const s = edge_slope();
        return -s * s / r_star_;
    }

    LogGasEquilibrium equilibrium(double R) const
    {
        if (!(R > 0) || !std::isfinite(R)) {
            throw domain_error("log gas: wall radius must be positive and finite");
        }
        LogGasEquilibrium eq;
        eq.R = R;
        eq.R_star = r_star_;
        eq.phase = R < r_star_ ? Phase::pushed : Phase::pulled;
        double const rho = eq.support();
        eq.coeffs = expand(rho);
        eq.edge_poly = edge_polynomial(eq.coeffs);
        eq.mu = -std::log(rho / 2) + eq.coeffs.coefficient(0);
        return eq;
    }

    /// p(r) = P_r(r)^2 / (4 r), zero from R_star on.
    double wall_pressure(double r) const
    {
        if (!(r > 0)) {
            throw domain_error("log gas: pressure needs r > 0");
        }
        if (r >= r_star_) {
            return 0.0;
        }
        double const q = edge_value(r);
        return q * q / (4 * r);
    }

    /// F(R) = 1/2 int_R^{R_star} P_r(r)^2 / r dr.
    double free_energy(double R) const
    {
        if (!(R > 0)) {
            throw domain_error("log gas: free energy needs R > 0");
        }
        if (R >= r_star_) {
            return 0.0;
        }
        return numerics::integrate(
            [&](double r) {
                double const q = edge_value(r);
                return 0.5 * q * q / r;
            },
            R, r_star_, 1e-10, 1e-16);
    }

    /// F'(R) = -P_R(R)^2 / (2R) on the pushed side, 0 beyond R_star.
    double free_energy_derivative(double R) const
    {
        return R >= r_star_ ? 0.0 : free_energy_derivative_extended(R);
    }

    /// The pushed-branch formula for F' continued past R_star.
    double free_energy_derivative_extended(double R) const
    {
        double const q = edge_value(R);
        return -q * q / (2 * R);
    }

private:
    double find_critical_radius(double tol) const
    {
        auto h = [&](double R) { return criterion(R) - 1.0; };
        double lo = 1.0;
        double hi = 1.0;
        if (h(1.0) < 0) {
            while (h(hi) < 0) {
                lo = hi;
                hi *= 2;
                if (hi > 1e6) {
                    throw numerical_error("critical radius: bracket failure, sum n c_n(R) < 1 up "
                                          "to R = 1e6 (potential grows too slowly)");
                }
            }
        } else {
            while (h(lo) >= 0) {
                hi = lo;
                lo *= 0.5;
                if (lo < 1e-6) {
                    throw numerical_error("critical radius: bracket failure below R = 1e-6");
                }
            }
        }
        double const root = numerics::bisect(h, lo, hi);
        double const residual = std::abs(h(root));
        if (!(residual < tol)) {
            throw numerical_error("critical radius: residual " + std::to_string(residual)
                                  + " above tolerance");
        }
        return root;
    }

    RadialPotential pot_;
    ExpansionOptions opt_;
    double r_star_ = 0;
};

inline double critical_radius(RadialPotential const& pot, double tol = 1e-10)
{
    return LogGas(pot, {}, tol).critical_radius();
}

/**
 * Equilibrium density at x. Pushed: P_R(x) / (pi sqrt(R^2 - x^2)), +inf
 * exactly at the walls. Pulled: the same at R_star, vanishing at the edge.
 */
inline double density(LogGasEquilibrium const& eq, double x)
{
    double const rho = eq.support();
    double const ax = std::abs(x);
    if (ax > rho) {
        return 0.0;
    }
    if (ax == rho) {
        return eq.phase == Phase::pushed ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return eq.edge_poly(x) / (std::numbers::pi * std::sqrt((rho - ax) * (rho + ax)));
}

inline double chemical_potential(LogGasEquilibrium const& eq) noexcept { return eq.mu; }

/**
 * -int log|x - y| d rho(y) + V(x), from the Chebyshev electrostatic
 * formula applied to each term of P. Valid on and off the support.
 */
inline double effective_potential(LogGasEquilibrium const& eq, RadialPotential const& pot, double x)
{
    double const rho = eq.support();
    double const u = x / rho;
    auto const& a = eq.edge_poly.coeffs;
    double value = a[0] * (gaswall::detail::log_moment_zero(u) - std::log(rho));
    if (std::abs(u) <= 1.0) {
        // T_n(u)/n summed by Clenshaw over the rescaled coefficients.
        ChebExpansion scaled;
        scaled.coeffs.assign(a.size(), 0.0);
        for (std::size_t n = 1; n < a.size(); ++n) {
            scaled.coeffs[n] = a[n] / static_cast<double>(n);
        }
        value += scaled.evaluate_unit(u);
    } else {
        for (std::size_t n = 1; n < a.size(); ++n) {
            if (a[n] != 0.0) {
                value += a[n] * chebyshev_log_moment(static_cast<int>(n), u);
            }
        }
    }
    return value + pot.v(std::abs(x));
}

/// max over grid points inside the support of |U(x) - mu|.
inline double euler_lagrange_residual(LogGasEquilibrium const& eq, RadialPotential const& pot,
                                      std::vector<double> const& grid)
{
    double worst = 0.0;
    for (double x : grid) {
        if (std::abs(x) <= eq.support()) {
            worst = std::max(worst, std::abs(effective_potential(eq, pot, x) - eq.mu));
        }
    }
    return worst;
}

/// min over grid points outside the support of U(x) - mu (>= 0 when the E-L inequality holds).
inline double euler_lagrange_gap(LogGasEquilibrium const& eq, RadialPotential const& pot,
                                 std::vector<double> const& grid)
{
    double gap = std::numeric_limits<double>::infinity();
    for (double x : grid) {
        if (std::abs(x) > eq.support()) {
            gap = std::min(gap, effective_potential(eq, pot, x) - eq.mu);
        }
    }
    return gap;
}

/// Single-wall models with closed-form constrained densities: support [a, b].
namespace single_wall {

enum class Model { gue_wall, wishart_c1 };

inline char const* to_string(Model m) noexcept
{
    return m == Model::gue_wall ? "gue_wall" : "wishart_c1";
}

/// Wall position beyond which the constraint is inactive.
inline double critical_wall(Model m) noexcept
{
    return m == Model::gue_wall ? std::numbers::sqrt2 : 4.0;
}

inline void check_wall(Model m, double b)
{
    if (!std::isfinite(b) || (m == Model::wishart_c1 && b <= 0)) {
        throw domain_error(std::string(to_string(m)) + ": invalid wall position");
    }
}

/// Lower edge of the support when the wall sits at b (b <= b_star).
inline double lower_edge(Model m, double b)
{
    check_wall(m, b);
    if (m == Model::gue_wall) {
        return -(2 * std::sqrt(b * b + 6) - b) / 3;
    }
    return 0.0;
}

inline double density(Model m, double b, double x)
{
    check_wall(m, b);
    double const a = lower_edge(m, b);
    if (x <= a || x >= b) {
        return 0.0;
    }
    if (m == Model::gue_wall) {
        return std::sqrt((x - a) / (b - x)) * (b - a - 2 * x) / (2 * std::numbers::pi);
    }
    return (b / 2 + 2 - x) / (2 * std::numbers::pi * std::sqrt(x * (b - x)));
}

/// Closed-form pressure on the wall at u (zero at b_star).
inline double pressure(Model m, double u)
{
    check_wall(m, u);
    if (u >= critical_wall(m)) {
        return 0.0;
    }
    if (m == Model::gue_wall) {
        double const s = std::sqrt(u * u + 6);
        return (u * u * u + s * u * u + 6 * s - 18 * u) / 27;
    }
    return (u * u - 8 * u + 16) / (32 * u);
}

/**
 * (pi^2/2) |Res_{z=u} rho_u(z)^2|, with the residue taken by the trapezoid
 * rule on a circle around u (rho_u^2 is rational, so this converges
 * geometrically).
 */
inline double pressure_from_residue(Model m, double u, int points = 64)
{
    check_wall(m, u);
    if (u >= critical_wall(m)) {
        return 0.0;
    }
    double const a = lower_edge(m, u);
    double const radius = 0.4 * (u - a);
    constexpr double pi = std::numbers::pi;
    auto rho_squared = [&](std::complex<double> z) {
        if (m == Model::gue_wall) {
            auto const w = u - a - 2.0 * z;
            return (z - a) * w * w / ((u - z) * (4 * pi * pi));
        }
        auto const w = u / 2 + 2 - z;
        return w * w / (z * (u - z) * (4 * pi * pi));
    };
    std::complex<double> sum = 0;
    for (int k = 0; k < points; ++k) {
        auto const e = std::polar(radius, 2 * pi * k / points);
        sum += rho_squared(u + e) * e;
    }
    std::complex<double> const residue = sum / static_cast<double>(points);
    return 0.5 * pi * pi * std::abs(residue);
}

/// Closed-form rate F(b); zero for b >= b_star.
inline double rate_closed_form(Model m, double b)
{
    check_wall(m, b);
    if (b >= critical_wall(m)) {
        return 0.0;
    }
    if (m == Model::wishart_c1) {
        return -b * b / 64 + b / 4 - 0.5 * std::log(b / 4) - 0.75;
    }
    // Antiderivative of 27 p(u).
    auto G = [](double u) {
        double const s = std::sqrt(u * u + 6);
        return u * u * u * u / 4 - 9 * u * u + s * (u * u * u + 15 * u) / 4
               + 13.5 * std::log(u + s);
    };
    return (G(std::numbers::sqrt2) - G(b)) / 27;
}

/// F(b) = -int_{b_star}^{b} p(u) du by adaptive quadrature.
inline double rate_quadrature(Model m, double b)
{
    check_wall(m, b);
    double const b_star = critical_wall(m);
    if (b >= b_star) {
        return 0.0;
    }
    return numerics::integrate([&](double u) { return pressure(m, u); }, b, b_star, 1e-12, 1e-16);
}

struct SingleWallRate
{
    Model model;
    double b = 0;
    double b_star = 0;
    double rate = 0;            // closed form
    double rate_quadrature = 0; // -int p
    double pressure = 0;        // p(b)
};

inline SingleWallRate single_wall_rate(Model m, double b)
{
    SingleWallRate r{m, b, critical_wall(m), rate_closed_form(m, b), 0.0, pressure(m, b)};
    r.rate_quadrature = single_wall::rate_quadrature(m, b);
    return r;
}

} // namespace single_wall

} // namespace log_gas
} // namespace gaswall

#endif // GASWALL_LOG_GAS_HPP
