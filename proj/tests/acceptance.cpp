// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <gaswall/gaswall.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

using namespace gaswall;

namespace {

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(char const* f, double a, double b = 0, double c = 0, double d = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

int failures = 0;

void criterion(int id, char const* title, double budget_s, std::function<Outcome()> const& body)
{
    auto const t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (std::exception const& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0 && secs > budget_s) {
        o.pass = false;
        o.detail += fmt("; runtime %.2f s over budget %.0f s", secs, budget_s);
    }
    failures += !o.pass;
    std::printf("%s  %2d  %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
    std::fflush(stdout);
}

double gue_rate(double R)
{
    return R >= std::numbers::sqrt2
               ? 0.0
               : (8 * R * R - std::pow(R, 4) - 16 * std::log(R) - 12 + 8 * std::numbers::ln2) / 32;
}

double ginue_rate(double R)
{
    return R >= 1 ? 0.0 : (4 * R * R - std::pow(R, 4) - 4 * std::log(R) - 3) / 8;
}

std::vector<double> linspace(double lo, double hi, int n)
{
    std::vector<double> v;
    for (int i = 0; i < n; ++i) {
        v.push_back(lo + (hi - lo) * i / (n - 1));
    }
    return v;
}

} // namespace

int main()
{
    criterion(1, "GUE critical radius", 1.0, [] {
        double const rs = log_gas::critical_radius(quadratic(0.5));
        double const err = std::abs(rs - std::numbers::sqrt2);
        return Outcome{err < 1e-10, fmt("R* = %.17g, |R* - sqrt2| = %.2e (tol 1e-10)", rs, err)};
    });

    criterion(2, "GUE free energy from the Chebyshev pipeline", 10.0, [] {
        log_gas::LogGas const g(quadratic(0.5));
        double worst = 0;
        for (double R : linspace(0.2, 1.41, 20)) {
            worst = std::max(worst, std::abs(g.free_energy(R) - gue_rate(R)));
        }
        return Outcome{worst < 1e-8, fmt("max |F - closed form| = %.2e over 20 radii (tol 1e-8)", worst)};
    });

    criterion(3, "GinUE excess charge, critical radius and free energy", 0, [] {
        yukawa::YukawaGas const g(yukawa::YukawaParams::coulomb(2), quadratic(0.5));
        double c_err = 0;
        for (double R : linspace(0.05, 0.95, 10)) {
            c_err = std::max(c_err, std::abs(g.excess_charge(R) - (1 - R * R)));
        }
        double const rs_err = std::abs(g.critical_radius() - 1);
        double f_err = 0;
        for (double R : linspace(0.05, 0.99, 20)) {
            f_err = std::max(f_err, std::abs(g.free_energy(R) - ginue_rate(R)));
        }
        bool const pass = c_err <= 4 * std::numeric_limits<double>::epsilon() && rs_err < 1e-12
                          && f_err < 1e-8;
        return Outcome{pass, fmt("max |c - (1-R^2)| = %.2e, |R* - 1| = %.2e, max |F err| = %.2e", c_err,
                                 rs_err, f_err)};
    });

    criterion(4, "third-order jump and smoothness at R*", 0, [] {
        using namespace transition;
        auto const gue = continuity_report(gue_exact());
        auto const gin = continuity_report(ginue_exact());
        auto const gue_num = continuity_report(make_model(log_gas::LogGas(quadratic(0.5)), "gue"));
        auto const gin_num = continuity_report(
            make_model(yukawa::YukawaGas(yukawa::YukawaParams::coulomb(2), quadratic(0.5)), "ginue"));
        double const cg = -gue.d3F / 6;
        double const cn = -gin.d3F / 6;
        double smooth = 0;
        for (auto const* r : {&gue, &gin, &gue_num, &gin_num}) {
            smooth = std::max({smooth, std::abs(r->F), std::abs(r->dF), std::abs(r->d2F)});
        }
        bool const pass = std::abs(gue.d3F + std::numbers::sqrt2) < 1e-3 && std::abs(gin.d3F + 4) < 1e-3
                          && std::abs(gue_num.d3F + std::numbers::sqrt2) < 1e-3
                          && std::abs(gin_num.d3F + 4) < 1e-3 && smooth < 1e-6
                          && std::abs(cg - std::numbers::sqrt2 / 6) < 1e-3 / 6
                          && std::abs(cn - 2.0 / 3) < 1e-3 / 6;
        return Outcome{pass, fmt("GUE F''' = %.9f (pipeline %.9f), GinUE F''' = %.9f (pipeline %.9f)",
                                 gue.d3F, gue_num.d3F, gin.d3F, gin_num.d3F)
                                 + fmt("; C* = %.6f, %.6f; max |F|,|F'|,|F''| at R* = %.1e", cg, cn, smooth)};
    });

    criterion(5, "Wishart single-wall rate", 0, [] {
        using log_gas::single_wall::Model;
        double const closed = -4.0 / 64 + 0.5 - 0.5 * std::log(0.5) - 0.75;
        double const f2 = log_gas::single_wall::rate_closed_form(Model::wishart_c1, 2.0);
        double worst = std::abs(f2 - closed);
        double quad = 0;
        for (double b : {1.0, 2.0, 3.0}) {
            auto const r = log_gas::single_wall::single_wall_rate(Model::wishart_c1, b);
            quad = std::max(quad, std::abs(r.rate_quadrature - r.rate));
        }
        return Outcome{worst < 1e-8 && quad < 1e-8,
                       fmt("F(2) = %.15f, |err| = %.1e; max |quadrature - closed| on {1,2,3} = %.1e", f2,
                           worst, quad)};
    });

    criterion(6, "Yukawa (mu, c) linear system", 0, [] {
        double worst = 0;
        int checks = 0;
        for (int d = 1; d <= 3; ++d) {
            for (double a : {0.5, 1.0, 2.0}) {
                for (double m : {0.5, 1.0, 2.0}) {
                    for (auto const& pot : {quadratic(0.5), quartic(0.25)}) {
                        yukawa::YukawaGas const g(yukawa::YukawaParams(d, a, m), pot);
                        for (int i = 1; i <= 5; ++i) {
                            auto const c = g.linear_system_check(g.critical_radius() * i / 6.0);
                            worst = std::max({worst, c.row1, c.row2});
                            if (c.determinant == 0) {
                                worst = 1;
                            }
                            ++checks;
                        }
                    }
                }
            }
        }
        return Outcome{worst < 1e-10,
                       fmt("max relative row residual %.2e over %.0f pushed radii (tol 1e-10)", worst, checks)};
    });

    criterion(7, "Yukawa limits toward Coulomb and Thomas-Fermi", 30.0, [] {
        double rs = 0;
        double fe = 0;
        for (int d = 1; d <= 3; ++d) {
            for (auto probe : {yukawa::Probe::coulomb, yukawa::Probe::thomas_fermi}) {
                auto const r = yukawa::limit_consistency(quadratic(0.5), d, probe);
                rs = std::max(rs, r.r_star_deviation);
                fe = std::max(fe, r.free_energy_deviation);
            }
        }
        return Outcome{rs < 1e-3 && fe < 1e-3,
                       fmt("max relative deviation: R* %.2e, F at 0.5/0.8 R* %.2e (tol 1e-3)", rs, fe)};
    });

    criterion(8, "Euler-Lagrange residual", 0, [] {
        log_gas::LogGas const q(quartic(0.25));
        double lg = 0;
        for (double frac : {0.7, 1.3}) {
            auto const eq = q.equilibrium(frac * q.critical_radius());
            double const rho = eq.support();
            std::vector<double> grid;
            for (int i = 1; i <= 20; ++i) {
                grid.push_back(rho * (-1 + 2.0 * i / 21));
            }
            lg = std::max(lg, log_gas::euler_lagrange_residual(eq, q.potential(), grid));
        }
        yukawa::YukawaGas const y(yukawa::YukawaParams(3, 1, 1), quadratic(0.5));
        double yk = 0;
        for (double frac : {0.7, 1.3}) {
            double const R = frac * y.critical_radius();
            double const rho = std::min(R, y.critical_radius());
            std::vector<double> grid;
            for (int i = 1; i <= 20; ++i) {
                grid.push_back(rho * i / 21.0);
            }
            yk = std::max(yk, y.euler_lagrange_residual(R, grid));
        }
        return Outcome{lg < 1e-6 && yk < 1e-6,
                       fmt("log-gas quartic %.2e, yukawa d=3 %.2e, both phases (tol 1e-6)", lg, yk)};
    });

    criterion(9, "identity suites", 0, [] {
        double mp = 0;
        for (int i = 0; i <= 20; ++i) {
            for (int j = 0; j <= 20; ++j) {
                double const x = -1 + 0.1 * i;
                double const y = -1 + 0.1 * j;
                if (std::abs(x - y) >= 0.1 - 1e-12) {
                    mp = std::max(mp, std::abs(multipole_log_partial_sum(x, y, 10000)
                                               + std::log(std::abs(x - y))));
                }
            }
        }
        double lm = 0;
        for (int n = 1; n <= 20; ++n) {
            for (double x : {-3.0, -1.5, -1.0, -0.7, -0.2, 0.0, 0.3, 0.5, 0.9, 1.0, 1.2, 2.5}) {
                lm = std::max(lm, std::abs(chebyshev_log_moment(n, x) - chebyshev_log_moment_quadrature(n, x)));
            }
        }
        double sh = 0;
        for (int d : {2, 3}) {
            for (auto const& p : {yukawa::YukawaParams(d, 1, 1), yukawa::YukawaParams(d, 0.5, 2),
                                  yukawa::YukawaParams::coulomb(d)}) {
                for (int k = 0; k < 10; ++k) {
                    double const r = 0.5 + 0.25 * k;
                    double const x = r * (k % 2 == 0 ? 1 - 0.6 / (k + 2) : 1 + 0.6 / (k + 2));
                    sh = std::max(sh, std::abs(yukawa::shell_average(p, x, r)
                                               - yukawa::shell_average_direct(p, x, r)));
                }
            }
        }
        double wr = 0;
        for (int d = 1; d <= 4; ++d) {
            for (double a : {0.5, 1.0, 2.0}) {
                for (double m : {0.5, 1.0, 2.0}) {
                    for (double r : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
                        yukawa::YukawaParams const p(d, a, m);
                        wr = std::max(wr, std::abs(yukawa::wronskian_defect(p, r)) * a * a * std::pow(r, d - 1));
                    }
                }
            }
        }
        bool const pass = mp < 1e-3 && lm < 1e-8 && sh < 1e-8 && wr < 1e-10;
        return Outcome{pass, fmt("multipole %.2e (1e-3), log moment %.2e (1e-8), shell %.2e (1e-8), "
                                 "Wronskian %.2e (1e-10)",
                                 mp, lm, sh, wr)};
    });

    criterion(10, "Monte Carlo densities, N=100, beta=2, 1e5 sweeps", 120.0, [] {
        mc::GasConfig c;
        c.n = 100;
        c.beta = 2;
        c.pot = quadratic(0.5);
        c.seed = 7;
        c.steps = 100000;
        c.burn_in = 10000;
        auto const free = mc::metropolis_run(c);
        double const l1_free = mc::density_distance(free.histogram, [](double x) {
            return std::abs(x) < std::numbers::sqrt2 ? std::sqrt(2 - x * x) / std::numbers::pi : 0.0;
        });

        c.wall = 1.0;
        auto const walled = mc::metropolis_run(c);
        log_gas::LogGas const g(quadratic(0.5));
        auto const eq = g.equilibrium(1.0);
        double const w = walled.histogram.width();
        double const l1_wall = mc::density_distance(
            walled.histogram,
            [&](double x) { return std::abs(x) < 1 ? log_gas::density(eq, x) : 0.0; }, {-1.0, 1.0},
            2 * w);
        double const drift = std::max(free.max_energy_drift, walled.max_energy_drift);
        bool const pass = l1_free < 0.1 && l1_wall < 0.12 && drift < 1e-9;
        return Outcome{pass, fmt("L1 semicircle %.4f (tol 0.1), L1 pushed %.4f (tol 0.12), energy drift %.1e",
                                 l1_free, l1_wall, drift)
                                 + fmt(", acceptance %.3f/%.3f", free.acceptance_rate, walled.acceptance_rate)};
    });

    criterion(11, "work-energy identity", 0, [] {
        double worst = 0;
        for (auto const& p : {yukawa::YukawaParams::coulomb(2), yukawa::YukawaParams(3, 1, 1)}) {
            yukawa::YukawaGas const g(p, quadratic(0.5));
            double const om = yukawa::surface_area(p.d());
            for (double frac : {0.2, 0.5, 0.8, 0.95}) {
                double const R = frac * g.critical_radius();
                double const work = numerics::integrate(
                    [&](double r) { return om * g.wall_pressure(r) * std::pow(r, p.d() - 1); }, R,
                    g.critical_radius(), 1e-12, 1e-16);
                worst = std::max(worst, std::abs(work - g.free_energy(R)));
            }
        }
        return Outcome{worst < 1e-8, fmt("max |work - F| = %.2e, GinUE and yukawa d=3 (tol 1e-8)", worst)};
    });

    std::printf("%s: %d of 11 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
