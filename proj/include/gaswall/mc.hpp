#ifndef GASWALL_MC_HPP
#define GASWALL_MC_HPP

#include <gaswall/error.hpp>
#include <gaswall/numerics.hpp>
#include <gaswall/parallel.hpp>
#include <gaswall/potential.hpp>
#include <gaswall/yukawa_gas.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <variant>
#include <vector>

namespace gaswall::mc {

/// -log|x - y| on the line.
struct LogKernel
{
};

using Kernel = std::variant<LogKernel, yukawa::YukawaParams>;

struct GasConfig
{
    int n = 100;
    double beta = 2.0;
    Kernel kernel = LogKernel{};
    RadialPotential pot;
    std::optional<double> wall;
    std::uint64_t seed = 1;
    long steps = 100000;  // total sweeps, burn-in included
    long burn_in = 10000; // sweeps spent tuning the step before sampling
    double step_scale = 0.1;
    int bins = 64;
    double extent = 2.0; // histogram range when there is no wall

    int dim() const
    {
        return std::holds_alternative<LogKernel>(kernel)
                   ? 1
                   : std::get<yukawa::YukawaParams>(kernel).d();
    }
};

inline void validate(GasConfig const& c)
{
    if (c.n < 2) {
        throw domain_error("mc: need at least two particles");
    }
    if (!(c.beta > 0)) {
        throw domain_error("mc: beta must be positive");
    }
    if (c.burn_in < 0 || c.steps <= c.burn_in) {
        throw domain_error("mc: need steps > burn_in >= 0");
    }
    if (!(c.step_scale > 0)) {
        throw domain_error("mc: step_scale must be positive");
    }
    if (c.bins < 1) {
        throw domain_error("mc: need at least one histogram bin");
    }
    if (c.wall && !(*c.wall > 0)) {
        throw domain_error("mc: wall radius must be positive");
    }
    if (!c.wall && !(c.extent > 0)) {
        throw domain_error("mc: histogram extent must be positive");
    }
    if (auto const* p = std::get_if<yukawa::YukawaParams>(&c.kernel)) {
        if (p->kind() == yukawa::Kind::thomas_fermi) {
            throw domain_error("mc: the Thomas-Fermi delta kernel cannot be sampled pairwise");
        }
    }
    if (!c.pot.v) {
        throw domain_error("mc: potential is missing");
    }
}

/// SplitMix64 step; used to derive independent chain seeds.
inline std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Uniform [0, 1) from the top 53 bits, identical on every platform.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

using Positions = std::vector<double>; // n * dim, row-major

namespace detail {

inline double norm(double const* x, int dim)
{
    double s = 0;
    for (int k = 0; k < dim; ++k) {
        s += x[k] * x[k];
    }
    return std::sqrt(s);
}

inline double distance2(double const* x, double const* y, int dim)
{
    double s = 0;
    for (int k = 0; k < dim; ++k) {
        s += (x[k] - y[k]) * (x[k] - y[k]);
    }
    return s;
}

inline bool singular_at_zero(GasConfig const& c)
{
    if (std::holds_alternative<LogKernel>(c.kernel)) {
        return true;
    }
    return std::get<yukawa::YukawaParams>(c.kernel).d() >= 2;
}

} // namespace detail

/// Pair interaction at separation r.
inline double pair_energy(GasConfig const& c, double r)
{
    if (std::holds_alternative<LogKernel>(c.kernel)) {
        return -std::log(r);
    }
    return yukawa::phi(std::get<yukawa::YukawaParams>(c.kernel), r);
}

/// sum_{i<j} Phi(x_i - x_j) + N sum_k V(x_k).
inline double energy(GasConfig const& c, Positions const& x)
{
    int const dim = c.dim();
    if (x.size() != static_cast<std::size_t>(c.n) * dim) {
        throw domain_error("energy: positions do not match N * d");
    }
    bool const singular = detail::singular_at_zero(c);
    double e = 0;
    for (int i = 0; i < c.n; ++i) {
        double const* xi = &x[static_cast<std::size_t>(i) * dim];
        double const r = detail::norm(xi, dim);
        if (c.wall && r > *c.wall) {
            throw domain_error("energy: particle outside the wall");
        }
        e += c.n * c.pot.v(r);
        for (int j = i + 1; j < c.n; ++j) {
            double const dist = std::sqrt(detail::distance2(xi, &x[static_cast<std::size_t>(j) * dim], dim));
            if (dist == 0 && singular) {
                throw domain_error("energy: coincident particles (infinite energy)");
            }
            e += pair_energy(c, dist);
        }
    }
    return e;
}

/**
 * Energy change when particle i moves to y, in O(N). Returns nullopt when
 * y comes within 1e-12 of another particle.
 */
inline std::optional<double> move_delta(GasConfig const& c, Positions const& x, int i,
                                        double const* y)
{
    int const dim = c.dim();
    double const* xi = &x[static_cast<std::size_t>(i) * dim];
    double delta = c.n * (c.pot.v(detail::norm(y, dim)) - c.pot.v(detail::norm(xi, dim)));
    bool const log_like =
        std::holds_alternative<LogKernel>(c.kernel)
        || (std::get<yukawa::YukawaParams>(c.kernel).kind() == yukawa::Kind::coulomb
            && std::get<yukawa::YukawaParams>(c.kernel).d() == 2);
    if (log_like) {
        // -log r summed as one log of a product of squared-distance ratios, flushed in blocks.
        double const scale = std::holds_alternative<LogKernel>(c.kernel)
                                 ? 1.0
                                 : 1.0 / (std::get<yukawa::YukawaParams>(c.kernel).a()
                                          * std::get<yukawa::YukawaParams>(c.kernel).a());
        double log_sum = 0;
        double prod = 1;
        int in_block = 0;
        for (int j = 0; j < c.n; ++j) {
            if (j == i) {
                continue;
            }
            double const* xj = &x[static_cast<std::size_t>(j) * dim];
            double const new2 = detail::distance2(y, xj, dim);
            if (new2 < 1e-24) {
                return std::nullopt;
            }
            prod *= detail::distance2(xi, xj, dim) / new2;
            if (++in_block == 16) {
                log_sum += std::log(prod);
                prod = 1;
                in_block = 0;
            }
        }
        log_sum += std::log(prod);
        return delta + 0.5 * scale * log_sum;
    }
    for (int j = 0; j < c.n; ++j) {
        if (j == i) {
            continue;
        }
        double const* xj = &x[static_cast<std::size_t>(j) * dim];
        double const new_r = std::sqrt(detail::distance2(y, xj, dim));
        if (new_r < 1e-12) {
            return std::nullopt;
        }
        delta += pair_energy(c, new_r) - pair_energy(c, std::sqrt(detail::distance2(xi, xj, dim)));
    }
    return delta;
}

/**
 * Histogram of particle positions: linear on [-L, L] in d = 1, radial on
 * [0, L] by |x| otherwise. mass is the fraction of in-range samples per bin.
 */
struct DensityHistogram
{
    std::vector<double> edges;
    std::vector<double> counts;
    int dim = 1;
    bool radial = false;
    long samples = 0;
    long overflow = 0;

    DensityHistogram() = default;
    DensityHistogram(int dim_, double extent, int bins)
        : dim(dim_), radial(dim_ >= 2)
    {
        double const lo = radial ? 0.0 : -extent;
        edges.resize(static_cast<std::size_t>(bins) + 1);
        for (int k = 0; k <= bins; ++k) {
            edges[k] = lo + (extent - lo) * k / bins;
        }
        counts.assign(bins, 0.0);
    }

    std::size_t bins() const noexcept { return counts.size(); }
    double width() const noexcept { return edges[1] - edges[0]; }

    void add(double coordinate)
    {
        double const lo = edges.front();
        double const hi = edges.back();
        if (coordinate < lo || coordinate > hi) {
            ++overflow;
            return;
        }
        auto k = static_cast<std::size_t>((coordinate - lo) / (hi - lo) * bins());
        counts[std::min(k, bins() - 1)] += 1;
        ++samples;
    }

    std::vector<double> mass() const
    {
        std::vector<double> m(counts.size(), 0.0);
        double total = 0;
        for (double c : counts) {
            total += c;
        }
        if (total > 0) {
            for (std::size_t k = 0; k < m.size(); ++k) {
                m[k] = counts[k] / total;
            }
        }
        return m;
    }

    /// Volume of bin k: its length in d = 1, the shell volume otherwise.
    double bin_volume(std::size_t k) const
    {
        if (!radial) {
            return edges[k + 1] - edges[k];
        }
        return yukawa::surface_area(dim) * (std::pow(edges[k + 1], dim) - std::pow(edges[k], dim))
               / dim;
    }

    void merge(DensityHistogram const& other)
    {
        if (other.edges != edges) {
            throw domain_error("histogram merge: bin edges differ");
        }
        for (std::size_t k = 0; k < counts.size(); ++k) {
            counts[k] += other.counts[k];
        }
        samples += other.samples;
        overflow += other.overflow;
    }
};

struct RunResult
{
    DensityHistogram histogram;
    double acceptance_rate = 0; // over the sampling sweeps
    double max_energy_drift = 0; // relative, incremental vs full recomputation
    double step_scale = 0;      // frozen value after burn-in
    Positions final_positions;
};

namespace detail {

inline Positions initial_positions(GasConfig const& c, std::mt19937_64& rng)
{
    int const dim = c.dim();
    double const radius = c.wall ? 0.9 * *c.wall : 1.0;
    Positions x(static_cast<std::size_t>(c.n) * dim);
    for (int i = 0; i < c.n; ++i) {
        double* xi = &x[static_cast<std::size_t>(i) * dim];
        do {
            for (int k = 0; k < dim; ++k) {
                xi[k] = radius * (2 * uniform01(rng) - 1);
            }
        } while (norm(xi, dim) > radius);
    }
    return x;
}

} // namespace detail

/**
 * Metropolis chain with single-particle box proposals. The step is tuned
 * every 100 burn-in sweeps toward 30-50% acceptance and frozen afterwards;
 * the energy is recomputed from scratch every 1000 sweeps.
 */
inline RunResult metropolis_run(GasConfig const& c)
{
    validate(c);
    int const dim = c.dim();
    std::mt19937_64 rng(c.seed);
    Positions x = detail::initial_positions(c, rng);
    double e = energy(c, x);
    double step = c.step_scale;
    double const extent = c.wall ? *c.wall : c.extent;

    RunResult out;
    out.histogram = DensityHistogram(dim, extent, c.bins);
    long accepted = 0;
    long proposed = 0;
    long window_accepted = 0;
    long window_proposed = 0;
    std::vector<double> y(dim);

    for (long sweep = 0; sweep < c.steps; ++sweep) {
        bool const sampling = sweep >= c.burn_in;
        for (int i = 0; i < c.n; ++i) {
            double const* xi = &x[static_cast<std::size_t>(i) * dim];
            for (int k = 0; k < dim; ++k) {
                y[k] = xi[k] + step * (2 * uniform01(rng) - 1);
            }
            bool accept = false;
            double delta = 0;
            if (!c.wall || detail::norm(y.data(), dim) <= *c.wall) {
                if (auto d = move_delta(c, x, i, y.data())) {
                    delta = *d;
                    accept = delta <= 0 || uniform01(rng) < std::exp(-c.beta * delta);
                }
            }
            if (accept) {
                std::copy(y.begin(), y.end(), x.begin() + static_cast<std::ptrdiff_t>(i) * dim);
                e += delta;
            }
            if (sampling) {
                ++proposed;
                accepted += accept;
            } else {
                ++window_proposed;
                window_accepted += accept;
            }
        }
        if (!sampling && window_proposed >= 100L * c.n) {
            double const rate = static_cast<double>(window_accepted) / window_proposed;
            if (rate < 0.3) {
                step *= 0.8;
            } else if (rate > 0.5) {
                step *= 1.25;
            }
            window_accepted = 0;
            window_proposed = 0;
        }
        if ((sweep + 1) % 1000 == 0) {
            double const full = energy(c, x);
            out.max_energy_drift =
                std::max(out.max_energy_drift, std::abs(e - full) / std::max(1.0, std::abs(full)));
            e = full;
        }
        if (sampling) {
            for (int i = 0; i < c.n; ++i) {
                double const* xi = &x[static_cast<std::size_t>(i) * dim];
                out.histogram.add(dim == 1 ? xi[0] : detail::norm(xi, dim));
            }
        }
    }
    out.acceptance_rate = proposed ? static_cast<double>(accepted) / proposed : 0.0;
    out.step_scale = step;
    out.final_positions = std::move(x);
    return out;
}

/// Independent chains with seeds drawn from SplitMix64(seed), histograms added.
inline RunResult metropolis_run_chains(GasConfig const& c, int chains)
{
    if (chains < 1) {
        throw domain_error("mc: need at least one chain");
    }
    std::vector<GasConfig> configs(chains, c);
    std::uint64_t state = c.seed;
    for (auto& cfg : configs) {
        cfg.seed = splitmix64(state);
    }
    std::vector<RunResult> results(chains);
    parallel_for(static_cast<std::size_t>(chains),
                 [&](std::size_t k) { results[k] = metropolis_run(configs[k]); });
    RunResult merged = results.front();
    double acc = merged.acceptance_rate;
    for (int k = 1; k < chains; ++k) {
        merged.histogram.merge(results[k].histogram);
        merged.max_energy_drift = std::max(merged.max_energy_drift, results[k].max_energy_drift);
        acc += results[k].acceptance_rate;
    }
    merged.acceptance_rate = acc / chains;
    return merged;
}

/**
 * sum over bins of |empirical mass - predicted mass|, the prediction being
 * the integral of the density over each bin (times the shell measure in
 * d >= 2). Bins meeting [p - w, p + w] for an excluded point p are skipped;
 * bins containing a breakpoint (a jump of the density) are integrated in two
 * pieces.
 */
inline double density_distance(DensityHistogram const& h, std::function<double(double)> const& density,
                               std::vector<double> const& excluded_points = {},
                               double exclusion_width = 0.0,
                               std::vector<double> const& breakpoints = {})
{
    auto const mass = h.mass();
    double const omega = h.radial ? yukawa::surface_area(h.dim) : 1.0;
    auto weighted = [&](double r) { return (h.radial ? omega * std::pow(r, h.dim - 1) : 1.0) * density(r); };
    double total = 0;
    for (std::size_t k = 0; k < h.bins(); ++k) {
        double const lo = h.edges[k];
        double const hi = h.edges[k + 1];
        bool skip = false;
        for (double p : excluded_points) {
            if (hi >= p - exclusion_width && lo <= p + exclusion_width) {
                skip = true;
            }
        }
        if (skip) {
            continue;
        }
        std::vector<double> cuts = {lo};
        for (double b : breakpoints) {
            if (b > lo && b < hi) {
                cuts.push_back(b);
            }
        }
        std::sort(cuts.begin() + 1, cuts.end());
        cuts.push_back(hi);
        double predicted = 0;
        for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
            predicted += numerics::integrate(weighted, cuts[j], cuts[j + 1], 1e-8, 1e-10);
        }
        total += std::abs(mass[k] - predicted);
    }
    return total;
}

/// Empirical mass in the bins whose lower edge lies within width of r0 from below.
inline double mass_near(DensityHistogram const& h, double r0, double width)
{
    auto const mass = h.mass();
    double s = 0;
    for (std::size_t k = 0; k < h.bins(); ++k) {
        if (h.edges[k] >= r0 - width - 1e-12 && h.edges[k + 1] <= r0 + 1e-12) {
            s += mass[k];
        }
    }
    return s;
}

} // namespace gaswall::mc

#endif // GASWALL_MC_HPP
