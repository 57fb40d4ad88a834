#include <gaswall/transition.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace gaswall;
using namespace gaswall::transition;

TEST(Sweep, GueGridValues)
{
    auto const m = make_model(log_gas::LogGas(quadratic(0.5)), "gue");
    auto const c = sweep(m, {1.0, 1.2, std::numbers::sqrt2, 1.5});
    EXPECT_NEAR(c.F[0], 0.017037, 1e-6);
    // (11.52 - 2.0736 - 16 log 1.2 - 12 + 8 log 2)/32
    EXPECT_NEAR(c.F[1], 0.00232601674300901, 1e-10);
    EXPECT_NEAR(c.F[2], 0.0, 1e-30);
    EXPECT_EQ(c.F[3], 0.0);
    EXPECT_EQ(c.phase[0], Phase::pushed);
    EXPECT_EQ(c.phase[3], Phase::pulled);
    EXPECT_NEAR(c.dF[0], -0.125, 1e-12);
}

TEST(Sweep, GinueGridValues)
{
    auto const m = make_model(yukawa::YukawaGas(yukawa::YukawaParams::coulomb(2), quadratic(0.5)), "ginue");
    auto const c = sweep(m, {0.5, 1.0, 2.0});
    EXPECT_NEAR(c.F[0], 0.088761, 1e-6);
    EXPECT_EQ(c.F[1], 0.0);
    EXPECT_EQ(c.F[2], 0.0);
}

TEST(Sweep, PulledGridIsZeroAndGridChecked)
{
    auto const m = gue_exact();
    auto const c = sweep(m, {1.5, 2.0, 3.0});
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(c.F[i], 0.0);
        EXPECT_EQ(c.dF[i], 0.0);
        EXPECT_EQ(c.d3F[i], 0.0);
    }
    EXPECT_THROW(sweep(m, {1.0, 0.9}), domain_error);
    EXPECT_THROW(sweep(m, {0.0, 1.0}), domain_error);
}

TEST(Sweep, CurveInvariantsAndDerivatives)
{
    auto const m = make_model(log_gas::LogGas(quartic(0.25)), "quartic");
    std::vector<double> grid;
    for (int i = 1; i <= 30; ++i) {
        grid.push_back(0.05 * i);
    }
    auto const c = sweep(m, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_GE(c.F[i], 0.0);
        EXPECT_LE(c.dF[i], 0.0);
        if (i > 0) {
            EXPECT_LE(c.F[i], c.F[i - 1]);
        }
        if (grid[i] >= c.R_star) {
            EXPECT_EQ(c.F[i], 0.0);
        }
    }
    // analytic F' against central differences of F
    for (double R : {0.4, 0.8, 1.1}) {
        double const h = 1e-4 * R;
        double const fd = (m.free_energy(R + h) - m.free_energy(R - h)) / (2 * h);
        EXPECT_LT(std::abs(fd / m.derivative(R) - 1), 1e-5) << R;
    }
}

TEST(Sweep, GueDerivativesMatchExactFormula)
{
    auto const num = make_model(log_gas::LogGas(quadratic(0.5)), "gue");
    auto const c = sweep(num, {0.5, 1.0, 1.3});
    for (std::size_t i = 0; i < 3; ++i) {
        double const R = c.grid[i];
        EXPECT_NEAR(c.dF[i], (4 * R - R * R * R - 4 / R) / 8, 1e-12) << R;
        EXPECT_NEAR(c.d2F[i], (4 - 3 * R * R + 4 / (R * R)) / 8, 1e-7) << R;
        EXPECT_NEAR(c.d3F[i], (-6 * R - 8 / (R * R * R)) / 8, 1e-5) << R;
    }
}

TEST(Jump, ExactModels)
{
    auto const gue = continuity_report(gue_exact());
    EXPECT_NEAR(gue.d3F, -std::numbers::sqrt2, 1e-3);
    EXPECT_TRUE(gue.pass);
    EXPECT_EQ(gue.d3F_right, 0.0);
    auto const gin = continuity_report(ginue_exact());
    EXPECT_NEAR(gin.d3F, -4.0, 1e-3);
    EXPECT_TRUE(gin.pass);
    EXPECT_LT(std::abs(gin.F), 1e-6);
    EXPECT_LT(std::abs(gin.dF), 1e-6);
    EXPECT_LT(std::abs(gin.d2F), 1e-6);
}

TEST(Jump, EstimateMatchesPredictionForEveryModel)
{
    std::vector<Model> models = {
        gue_exact(),
        ginue_exact(),
        make_model(log_gas::LogGas(quadratic(0.5)), "gue"),
        make_model(log_gas::LogGas(quartic(0.25)), "quartic"),
        make_model(log_gas::LogGas(monomial_sum({{0.5, 2.0}, {0.1, 4.0}})), "mixed"),
        make_model(yukawa::YukawaGas(yukawa::YukawaParams::coulomb(2), quadratic(0.5)), "ginue"),
        make_model(yukawa::YukawaGas(yukawa::YukawaParams(3, 1, 1), quadratic(0.5)), "yuk3"),
        make_model(yukawa::YukawaGas(yukawa::YukawaParams(1, 0.5, 2), quartic(0.25)), "yuk1"),
        make_model(yukawa::YukawaGas(yukawa::YukawaParams::thomas_fermi(1), quadratic(0.5)), "tf1"),
    };
    for (auto const& m : models) {
        auto const r = continuity_report(m);
        EXPECT_TRUE(r.pass) << m.id;
        EXPECT_LT(std::abs(r.d3F / r.predicted_jump - 1), 1e-3) << m.id;
    }
}

TEST(Jump, NumericalGueMatchesExact)
{
    auto const r = continuity_report(make_model(log_gas::LogGas(quadratic(0.5)), "gue"));
    EXPECT_NEAR(r.d3F, -std::numbers::sqrt2, 1e-3);
    EXPECT_NEAR(r.predicted_jump, -std::numbers::sqrt2, 1e-6);
}

TEST(CubicFit, GueAndGinueCoefficients)
{
    auto const gue = gue_exact();
    auto const c = sweep(gue, fit_window_grid(gue.r_star));
    EXPECT_NEAR(c.C_star, std::numbers::sqrt2 / 6, 1e-4);
    auto const fit = cubic_fit(c);
    EXPECT_EQ(fit.points, 20u);
    EXPECT_LT(std::abs(fit.coefficient / c.C_star - 1), 0.05);

    auto const gin = ginue_exact();
    auto const cg = sweep(gin, fit_window_grid(1.0));
    EXPECT_NEAR(cg.C_star, 2.0 / 3, 1e-4);
    EXPECT_LT(std::abs(cubic_fit(cg).coefficient / cg.C_star - 1), 0.05);
}

TEST(CubicFit, ThomasFermiAgainstFiniteDifferenceOracle)
{
    yukawa::YukawaGas const tf(yukawa::YukawaParams::thomas_fermi(1), quadratic(0.5));
    auto const m = make_model(tf, "tf1");
    // Oracle: one-sided 4-point backward second difference of the closed-form F'
    double const rs = m.r_star;
    double const h = 1e-3;
    auto f = [&](double k) { return m.derivative_extended(rs - k * h); };
    double const oracle = (2 * f(0) - 5 * f(1) + 4 * f(2) - f(3)) / (h * h);
    auto const c = sweep(m, fit_window_grid(rs));
    EXPECT_LT(std::abs(c.jump / oracle - 1), 1e-2);
    EXPECT_LT(std::abs(cubic_fit(c).coefficient / c.C_star - 1), 0.05);
}

TEST(CubicFit, NeedsFivePointsInWindow)
{
    auto const c = sweep(gue_exact(), {0.5, 1.0, 1.4, 1.41});
    EXPECT_THROW(cubic_fit(c), domain_error);
}
