#ifndef GASWALL_TRANSITION_HPP
#define GASWALL_TRANSITION_HPP

#include <gaswall/error.hpp>
#include <gaswall/log_gas.hpp>
#include <gaswall/numerics.hpp>
#include <gaswall/parallel.hpp>
#include <gaswall/yukawa_gas.hpp>

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

namespace gaswall::transition {

/**
 * What the analysis needs from a gas: F, the analytic F' (zero in the
 * pulled phase) and the pushed-side F' formula continued past R_star so
 * one-sided derivatives at R_star can be taken with centred stencils.
 */
struct Model
{
    std::string id;
    double r_star = 0;
    std::function<double(double)> free_energy;
    std::function<double(double)> derivative;
    std::function<double(double)> derivative_extended;
    std::function<double()> predicted_jump; // closed-form lim F''' from the left
};

inline Model make_model(log_gas::LogGas gas, std::string id)
{
    auto g = std::make_shared<log_gas::LogGas const>(std::move(gas));
    return Model{std::move(id),
                 g->critical_radius(),
                 [g](double R) { return g->free_energy(R); },
                 [g](double R) { return g->free_energy_derivative(R); },
                 [g](double R) { return g->free_energy_derivative_extended(R); },
                 [g] { return g->predicted_jump(); }};
}

inline Model make_model(yukawa::YukawaGas gas, std::string id)
{
    auto g = std::make_shared<yukawa::YukawaGas const>(std::move(gas));
    return Model{std::move(id),
                 g->critical_radius(),
                 [g](double R) { return g->free_energy(R); },
                 [g](double R) { return g->free_energy_derivative(R); },
                 [g](double R) { return g->free_energy_derivative_extended(R); },
                 [g] { return g->predicted_jump(); }};
}

/// GUE: F = (8R^2 - R^4 - 16 log R - 12 + 8 log 2)/32 below sqrt 2.
inline Model gue_exact()
{
    double const rs = std::numbers::sqrt2;
    auto dfe = [](double R) { return -(2 - R * R) * (2 - R * R) / (8 * R); };
    return Model{"gue_exact", rs,
                 [rs](double R) {
                     if (R >= rs) {
                         return 0.0;
                     }
                     return (8 * R * R - std::pow(R, 4) - 16 * std::log(R) - 12
                             + 8 * std::numbers::ln2) / 32;
                 },
                 [rs, dfe](double R) { return R >= rs ? 0.0 : dfe(R); }, dfe,
                 [] { return -std::numbers::sqrt2; }};
}

/// GinUE: F = (4R^2 - R^4 - 4 log R - 3)/8 below 1.
inline Model ginue_exact()
{
    auto dfe = [](double R) { return -(1 - R * R) * (1 - R * R) / (2 * R); };
    return Model{"ginue_exact", 1.0,
                 [](double R) {
                     return R >= 1 ? 0.0 : (4 * R * R - std::pow(R, 4) - 4 * std::log(R) - 3) / 8;
                 },
                 [dfe](double R) { return R >= 1 ? 0.0 : dfe(R); }, dfe, [] { return -4.0; }};
}

struct FreeEnergyCurve
{
    std::string model_id;
    std::vector<double> grid;
    std::vector<double> F;
    std::vector<double> dF;
    std::vector<double> d2F;
    std::vector<double> d3F;
    std::vector<Phase> phase;
    double R_star = 0;
    double jump = 0;   // lim F''' from the pushed side (negative)
    double C_star = 0; // -jump / 6
};

/// lim_{R -> R_star^-} F''' from the continued F', steps 1e-3 and 5e-4 R_star.
inline double estimate_jump(Model const& model)
{
    return numerics::second_derivative(model.derivative_extended, model.r_star,
                                       1e-3 * model.r_star);
}

inline FreeEnergyCurve sweep(Model const& model, std::vector<double> const& grid)
{
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw domain_error("sweep: grid must be positive and strictly ascending");
        }
    }
    FreeEnergyCurve c;
    c.model_id = model.id;
    c.grid = grid;
    c.R_star = model.r_star;
    std::size_t const n = grid.size();
    c.F.assign(n, 0.0);
    c.dF.assign(n, 0.0);
    c.d2F.assign(n, 0.0);
    c.d3F.assign(n, 0.0);
    c.phase.assign(n, Phase::pulled);
    parallel_for(n, [&](std::size_t i) {
        double const R = grid[i];
        if (R >= model.r_star) {
            return;
        }
        c.phase[i] = Phase::pushed;
        c.F[i] = model.free_energy(R);
        c.dF[i] = model.derivative(R);
        double const h = std::min(1e-3 * model.r_star, 0.2 * R);
        c.d2F[i] = numerics::derivative(model.derivative_extended, R, h);
        c.d3F[i] = numerics::second_derivative(model.derivative_extended, R, h);
    });
    c.jump = estimate_jump(model);
    c.C_star = -c.jump / 6;
    return c;
}

/// n radii below R_star at offsets log-spaced from 1e-3 R_star to just under 0.05 R_star.
inline std::vector<double> fit_window_grid(double r_star, int n = 20)
{
    std::vector<double> grid;
    double const lo = std::log(1e-3);
    double const hi = std::log(0.0499);
    for (int i = n - 1; i >= 0; --i) {
        double const t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        grid.push_back(r_star * (1 - std::exp(lo + t * (hi - lo))));
    }
    return grid;
}

struct CubicFit
{
    double coefficient = 0;
    double residual = 0; // rms of F - C delta^3 relative to rms F
    std::size_t points = 0;
};

/// Least squares F ~ C (R_star - R)^3 over the points with R_star - R < 0.05 R_star.
inline CubicFit cubic_fit(FreeEnergyCurve const& curve)
{
    double s36 = 0;
    double s6 = 0;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        double const delta = curve.R_star - curve.grid[i];
        if (delta > 0 && delta < 0.05 * curve.R_star) {
            double const d3 = delta * delta * delta;
            s36 += curve.F[i] * d3;
            s6 += d3 * d3;
            pts.emplace_back(d3, curve.F[i]);
        }
    }
    if (pts.size() < 5) {
        throw domain_error("cubic_fit: fewer than 5 points inside the fit window");
    }
    CubicFit fit;
    fit.points = pts.size();
    fit.coefficient = s36 / s6;
    double res = 0;
    double norm = 0;
    for (auto const& [d3, f] : pts) {
        res += (f - fit.coefficient * d3) * (f - fit.coefficient * d3);
        norm += f * f;
    }
    fit.residual = norm > 0 ? std::sqrt(res / norm) : 0.0;
    return fit;
}

struct ContinuityReport
{
    double F = 0;   // F(R_star^-)
    double dF = 0;  // F'(R_star^-)
    double d2F = 0; // F''(R_star^-)
    double d3F = 0; // lim F''' from the left
    double d3F_right = 0;
    double predicted_jump = 0;
    bool pass = false;
};

inline ContinuityReport continuity_report(Model const& model, double tol = 1e-6)
{
    double const rs = model.r_star;
    double const h = 1e-3 * rs;
    ContinuityReport r;
    r.F = model.free_energy(rs * (1 - 1e-6));
    r.dF = model.derivative_extended(rs);
    r.d2F = numerics::derivative(model.derivative_extended, rs, h);
    r.d3F = estimate_jump(model);
    r.d3F_right = numerics::second_derivative(model.derivative, rs + 4 * h, h);
    r.predicted_jump = model.predicted_jump();
    r.pass = std::abs(r.F) < tol && std::abs(r.dF) < tol && std::abs(r.d2F) < tol && r.d3F < 0;
    return r;
}

} // namespace gaswall::transition

#endif // GASWALL_TRANSITION_HPP
