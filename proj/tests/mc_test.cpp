#include <gaswall/mc.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace gaswall;
using namespace gaswall::mc;

namespace {

GasConfig gue(int n = 100)
{
    GasConfig c;
    c.n = n;
    c.beta = 2.0;
    c.pot = quadratic(0.5);
    c.seed = 7;
    return c;
}

} // namespace

TEST(Rng, UniformChiSquare)
{
    std::mt19937_64 rng(12345);
    int const bins = 100;
    int const draws = 1000000;
    std::vector<long> counts(bins, 0);
    for (int i = 0; i < draws; ++i) {
        double const u = uniform01(rng);
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        ++counts[static_cast<std::size_t>(u * bins)];
    }
    double chi2 = 0;
    double const expected = static_cast<double>(draws) / bins;
    for (long k : counts) {
        chi2 += (k - expected) * (k - expected) / expected;
    }
    // 99 degrees of freedom, upper 0.1% point
    EXPECT_LT(chi2, 148.23);
}

TEST(Rng, SplitMixDerivesDistinctSeeds)
{
    std::uint64_t s = 7;
    auto const a = splitmix64(s);
    auto const b = splitmix64(s);
    EXPECT_NE(a, b);
    std::uint64_t t = 7;
    EXPECT_EQ(splitmix64(t), a);
}

TEST(Energy, HandExamples)
{
    auto c = gue(2);
    c.pot = constant_potential(0.0);
    EXPECT_NEAR(energy(c, {-0.5, 0.5}), 0.0, 1e-15);

    c.pot = quadratic(0.5);
    EXPECT_NEAR(energy(c, {0.0, 1.0}), 1.0, 1e-15);

    GasConfig y;
    y.n = 2;
    y.kernel = yukawa::YukawaParams(3, 1, 1);
    y.pot = constant_potential(0.0);
    EXPECT_NEAR(energy(y, {0, 0, 0, 2, 0, 0}), std::exp(-2.0) / 2, 1e-15);

    EXPECT_THROW(energy(c, {0.3, 0.3}), domain_error);
}

TEST(Energy, IncrementalMatchesFullRecomputation)
{
    std::mt19937_64 rng(3);
    for (auto kernel : {Kernel{LogKernel{}}, Kernel{yukawa::YukawaParams(2, 1, 1)},
                        Kernel{yukawa::YukawaParams::coulomb(2)}, Kernel{yukawa::YukawaParams(3, 0.5, 2)},
                        Kernel{yukawa::YukawaParams(1, 1, 1)}}) {
        GasConfig c;
        c.n = 30;
        c.kernel = kernel;
        c.pot = quartic(0.25);
        int const dim = c.dim();
        Positions x(static_cast<std::size_t>(c.n) * dim);
        for (double& v : x) {
            v = 2 * uniform01(rng) - 1;
        }
        double const e0 = energy(c, x);
        for (int trial = 0; trial < 20; ++trial) {
            int const i = static_cast<int>(uniform01(rng) * c.n);
            std::vector<double> y(x.begin() + i * dim, x.begin() + (i + 1) * dim);
            for (double& v : y) {
                v += 0.2 * (uniform01(rng) - 0.5);
            }
            auto const delta = move_delta(c, x, i, y.data());
            ASSERT_TRUE(delta.has_value());
            Positions moved = x;
            std::copy(y.begin(), y.end(), moved.begin() + i * dim);
            double const direct = energy(c, moved) - e0;
            EXPECT_LT(std::abs(*delta - direct), 1e-9 * std::abs(e0)) << c.dim();
        }
    }
}

TEST(Energy, CoincidentProposalRejected)
{
    auto c = gue(3);
    Positions const x = {0.1, 0.5, -0.4};
    double const y = 0.5 + 1e-13;
    EXPECT_FALSE(move_delta(c, x, 0, &y).has_value());
}

TEST(Config, Validation)
{
    auto c = gue(1);
    EXPECT_THROW(validate(c), domain_error);
    c = gue();
    c.beta = 0;
    EXPECT_THROW(validate(c), domain_error);
    c = gue();
    c.steps = c.burn_in;
    EXPECT_THROW(validate(c), domain_error);
    c = gue();
    c.step_scale = -1;
    EXPECT_THROW(validate(c), domain_error);
    c = gue();
    c.kernel = yukawa::YukawaParams::thomas_fermi(1);
    EXPECT_THROW(validate(c), domain_error);
    EXPECT_NO_THROW(validate(gue()));
}

TEST(Histogram, MassAndVolumes)
{
    DensityHistogram h(1, 1.0, 4);
    for (double x : {-0.9, -0.1, 0.1, 0.2, 1.5}) {
        h.add(x);
    }
    EXPECT_EQ(h.samples, 4);
    EXPECT_EQ(h.overflow, 1);
    double total = 0;
    for (double m : h.mass()) {
        total += m;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);

    DensityHistogram r(3, 1.0, 2);
    EXPECT_NEAR(r.bin_volume(0) + r.bin_volume(1), 4 * std::numbers::pi / 3, 1e-14);
    DensityHistogram other(3, 2.0, 2);
    EXPECT_THROW(r.merge(other), domain_error);
}

TEST(DensityDistance, TrivialCases)
{
    DensityHistogram h(1, 1.0, 10);
    for (int k = 0; k < 10; ++k) {
        h.add(-0.95 + 0.2 * k);
    }
    auto uniform = [](double x) { return std::abs(x) <= 1 ? 0.5 : 0.0; };
    EXPECT_NEAR(density_distance(h, uniform), 0.0, 1e-12);

    DensityHistogram half(1, 1.0, 10);
    for (int k = 5; k < 10; ++k) {
        half.add(-0.95 + 0.2 * k);
    }
    EXPECT_NEAR(density_distance(half, uniform), 1.0, 1e-12);
    // bins touching [0.8, 1.2] are dropped: [0.6, 0.8] and [0.8, 1]
    EXPECT_NEAR(density_distance(half, uniform, {1.0}, 0.2), 0.8, 1e-12);

    DensityHistogram disk(2, 1.0, 8);
    for (int k = 0; k < 8; ++k) {
        double const r2 = (std::pow((k + 1) / 8.0, 2) + std::pow(k / 8.0, 2)) / 2;
        for (int rep = 0; rep < 2 * k + 1; ++rep) {
            disk.add(std::sqrt(r2));
        }
    }
    EXPECT_NEAR(density_distance(disk, [](double r) { return r <= 1 ? 1 / std::numbers::pi : 0.0; }),
                0.0, 1e-12);
}

TEST(Metropolis, ReproducibleAndInsideWall)
{
    auto c = gue(20);
    c.wall = 1.0;
    c.steps = 2000;
    c.burn_in = 500;
    auto const a = metropolis_run(c);
    auto const b = metropolis_run(c);
    EXPECT_EQ(a.histogram.counts, b.histogram.counts);
    EXPECT_EQ(a.final_positions, b.final_positions);
    EXPECT_EQ(a.histogram.overflow, 0);
    for (double x : a.final_positions) {
        EXPECT_LE(std::abs(x), 1.0);
    }
    EXPECT_GT(a.acceptance_rate, 0.2);
    EXPECT_LT(a.acceptance_rate, 0.6);
    EXPECT_LT(a.max_energy_drift, 1e-9);

    c.seed = 8;
    EXPECT_NE(metropolis_run(c).histogram.counts, a.histogram.counts);
}

TEST(Metropolis, TwoParticlesFreezeAtEnergyMinimum)
{
    // -log(2s) + 2 s^2 is minimal at s = 1/2
    auto c = gue(2);
    c.beta = 200;
    c.steps = 20000;
    c.burn_in = 2000;
    c.extent = 1.0;
    auto const r = metropolis_run(c);
    auto const m = r.histogram.mass();
    double mean_abs = 0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        mean_abs += m[k] * std::abs(0.5 * (r.histogram.edges[k] + r.histogram.edges[k + 1]));
    }
    EXPECT_NEAR(mean_abs, 0.5, 0.03);
}

TEST(Metropolis, GinibreMatchesCircularLaw)
{
    GasConfig c;
    c.n = 100;
    c.beta = 2;
    c.kernel = yukawa::YukawaParams::coulomb(2);
    c.pot = quadratic(0.5);
    c.seed = 11;
    c.steps = 20000;
    c.burn_in = 2000;
    c.extent = 1.5;
    c.bins = 32;
    auto const r = metropolis_run(c);
    double const l1 =
        density_distance(r.histogram, [](double x) { return x <= 1 ? 1 / std::numbers::pi : 0.0; }, {}, 0.0,
                         {1.0});
    EXPECT_LT(l1, 0.12);
    EXPECT_LT(r.max_energy_drift, 1e-9);
}

TEST(Metropolis, WallMassGrowsAsWallCloses)
{
    double previous = 0;
    for (double R : {1.0, 0.8, 0.6}) {
        GasConfig c;
        c.n = 100;
        c.beta = 2;
        c.kernel = yukawa::YukawaParams(2, 1, 1);
        c.pot = quadratic(0.5);
        c.wall = R;
        c.seed = 5;
        c.steps = 3000;
        c.burn_in = 500;
        auto const r = metropolis_run(c);
        double const near = mass_near(r.histogram, R, 2 * r.histogram.width());
        EXPECT_GT(near, previous) << R;
        previous = near;
    }
}

TEST(Metropolis, ChainsMergeHistograms)
{
    auto c = gue(10);
    c.steps = 1000;
    c.burn_in = 100;
    auto const merged = metropolis_run_chains(c, 3);
    EXPECT_EQ(merged.histogram.samples, 3L * 900 * 10);
    EXPECT_THROW(metropolis_run_chains(c, 0), domain_error);
}
