#ifndef GASWALL_SPECIAL_FNS_HPP
#define GASWALL_SPECIAL_FNS_HPP

#include <gaswall/error.hpp>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <array>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace gaswall {

/// Order of a modified Bessel function; finite and non-negative.
class BesselOrder
{
public:
    explicit BesselOrder(double nu) : nu_(nu)
    {
        if (!std::isfinite(nu) || nu < 0) {
            throw domain_error("Bessel order must be finite and non-negative");
        }
    }

    double value() const noexcept { return nu_; }

private:
    double nu_;
};

/**
 * Truncated Chebyshev-T series sum_n coeffs[n] T_n(x / scale).
 *
 * tail_bound records max |n c_n| over the discarded coefficients that were
 * resolved by the expansion (zero when the series terminates exactly).
 */
struct ChebExpansion
{
    std::vector<double> coeffs;
    double scale = 1.0;
    double tail_bound = 0.0;

    std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }

    double coefficient(std::size_t n) const noexcept
    {
        return n < coeffs.size() ? coeffs[n] : 0.0;
    }

    /// Clenshaw summation at u = x / scale. Valid for any real u.
    double evaluate_unit(double u) const noexcept
    {
        double b1 = 0.0;
        double b2 = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 1;) {
            double const b0 = coeffs[k] + 2 * u * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        double const c0 = coeffs.empty() ? 0.0 : coeffs[0];
        return c0 + u * b1 - b2;
    }

    double operator()(double x) const noexcept { return evaluate_unit(x / scale); }
};

namespace detail {

// Taylor coefficients of 1/Gamma(1 + x) about x = 0.
inline constexpr std::array<double, 23> rgamma1p_taylor = {
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
};

inline bool is_half_integer(double nu) noexcept
{
    double const twice = 2 * nu;
    return twice == std::round(twice) && std::fmod(std::abs(twice), 2.0) == 1.0;
}

/**
 * Gamma(nu + 1) (x/2)^(-nu) I_nu(x), i.e. 0F1(; nu + 1; x^2/4), for nu > -1.
 *
 * Power series (all terms positive) below the asymptotic regime; Hankel
 * expansion of I_nu beyond it. Equals 1 at x = 0.
 */
inline double bessel_i_normalized(double nu, double x)
{
    if (!(nu > -1.0) || !std::isfinite(nu)) {
        throw domain_error("normalized Bessel I requires nu > -1");
    }
    if (!std::isfinite(x) || x < 0) {
        throw domain_error("Bessel I argument must be finite and non-negative");
    }
    bool const asymptotic = x > 30.0 && x > 2 * nu * nu;
    if (!asymptotic) {
        double const q = 0.25 * x * x;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 10000; ++k) {
            term *= q / (k * (k + nu));
            sum += term;
            if (term < sum * 1e-17) {
                break;
            }
        }
        return sum;
    }
    // I_nu(x) ~ e^x / sqrt(2 pi x) sum_k (-1)^k a_k(nu) / x^k
    double const mu = 4 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double previous = 1.0;
    for (int k = 1; k < 200; ++k) {
        double const odd = 2.0 * k - 1;
        term *= -(mu - odd * odd) / (8.0 * k * x);
        if (std::abs(term) > std::abs(previous)) {
            break;
        }
        sum += term;
        previous = term;
        if (std::abs(term) < std::abs(sum) * 1e-17) {
            break;
        }
    }
    double const log_prefactor = x + std::lgamma(nu + 1) - nu * std::log(0.5 * x)
                                 - 0.5 * std::log(2 * std::numbers::pi * x);
    return std::exp(log_prefactor) * sum;
}

/// e^x (K_{n+1/2}(x), K_{n+3/2}(x)) from the terminating closed form.
inline std::pair<double, double> bessel_k_half_integer_scaled(int n, double x)
{
    auto closed = [x](int order) {
        // K_{order+1/2}(x) e^x = sqrt(pi/(2x)) sum_k (order+k)! / (k! (order-k)! (2x)^k)
        double coeff = 1.0;
        double sum = 1.0;
        for (int k = 1; k <= order; ++k) {
            coeff *= static_cast<double>(order + k) * (order - k + 1) / (k * 2.0 * x);
            sum += coeff;
        }
        return std::sqrt(std::numbers::pi / (2 * x)) * sum;
    };
    return {closed(n), closed(n + 1)};
}

/**
 * e^x (K_nu(x), K_{nu+1}(x)) for nu >= 0 by Temme's method: the Temme
 * series for x < 2, Steed's continued fraction otherwise, followed by
 * upward recurrence from the reduced order |mu| <= 1/2.
 */
inline std::pair<double, double> bessel_k_temme_scaled(double nu, double x)
{
    constexpr double eps = 1e-17;
    constexpr double pi = std::numbers::pi;
    int const nl = static_cast<int>(nu + 0.5);
    double const mu = nu - nl;
    double const mu2 = mu * mu;
    double const xi = 1.0 / x;
    double const xi2 = 2.0 * xi;
    double k_mu = 0.0;
    double k_mu1 = 0.0;

    if (x < 2.0) {
        double const x2 = 0.5 * x;
        double const pimu = pi * mu;
        double const fact = std::abs(pimu) < eps ? 1.0 : pimu / std::sin(pimu);
        double d = -std::log(x2);
        double e = mu * d;
        double const fact2 = std::abs(e) < eps ? 1.0 : std::sinh(e) / e;

        double const gampl = 1.0 / std::tgamma(1.0 + mu);
        double const gammi = 1.0 / std::tgamma(1.0 - mu);
        double gam1 = 0.0;
        double gam2 = 0.0;
        if (std::abs(mu) < 0.2) {
            // Odd and even parts of the 1/Gamma(1+x) Taylor series avoid the
            // cancellation in (gammi - gampl) / (2 mu).
            double power = 1.0;
            for (std::size_t i = 1; i < rgamma1p_taylor.size(); i += 2) {
                gam1 -= rgamma1p_taylor[i] * power;
                power *= mu2;
            }
            power = 1.0;
            for (std::size_t i = 0; i < rgamma1p_taylor.size(); i += 2) {
                gam2 += rgamma1p_taylor[i] * power;
                power *= mu2;
            }
        } else {
            gam1 = (gammi - gampl) / (2 * mu);
            gam2 = 0.5 * (gammi + gampl);
        }

        double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
        double sum = ff;
        e = std::exp(e);
        double p = 0.5 * e / gampl;
        double q = 0.5 / (e * gammi);
        double c = 1.0;
        d = x2 * x2;
        double sum1 = p;
        int i = 1;
        for (; i < 500; ++i) {
            ff = (i * ff + p + q) / (i * i - mu2);
            c *= d / i;
            p /= (i - mu);
            q /= (i + mu);
            double const del = c * ff;
            sum += del;
            double const del1 = c * (p - i * ff);
            sum1 += del1;
            if (std::abs(del) < std::abs(sum) * eps) {
                break;
            }
        }
        if (i == 500) {
            throw numerical_error("Bessel K: Temme series did not converge");
        }
        double const scale = std::exp(x);
        k_mu = sum * scale;
        k_mu1 = sum1 * xi2 * scale;
    } else {
        double b = 2.0 * (1.0 + x);
        double d = 1.0 / b;
        double h = d;
        double delh = d;
        double q1 = 0.0;
        double q2 = 1.0;
        double const a1 = 0.25 - mu2;
        double q = a1;
        double c = a1;
        double a = -a1;
        double s = 1.0 + q * delh;
        int i = 1;
        for (; i < 10000; ++i) {
            a -= 2 * i;
            c = -a * c / (i + 1.0);
            double const qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            double const dels = q * delh;
            s += dels;
            if (std::abs(dels / s) < eps) {
                break;
            }
        }
        if (i == 10000) {
            throw numerical_error("Bessel K: continued fraction did not converge");
        }
        h = a1 * h;
        k_mu = std::sqrt(pi / (2.0 * x)) / s;
        k_mu1 = k_mu * (mu + x + 0.5 - h) * xi;
    }

    for (int i = 1; i <= nl; ++i) {
        double const next = (mu + i) * xi2 * k_mu1 + k_mu;
        k_mu = k_mu1;
        k_mu1 = next;
    }
    return {k_mu, k_mu1};
}

/// e^x K_nu(x) for any real nu (K_{-nu} = K_nu) and x > 0.
inline double bessel_k_scaled(double nu, double x)
{
    if (!std::isfinite(x) || x <= 0) {
        throw domain_error("Bessel K requires a finite argument x > 0");
    }
    double const order = std::abs(nu);
    if (is_half_integer(order)) {
        return bessel_k_half_integer_scaled(static_cast<int>(order - 0.5), x).first;
    }
    return bessel_k_temme_scaled(order, x).first;
}

/// Zero-order logarithmic moment extended off [-1, 1]: log 2 - arccosh|x|.
inline double log_moment_zero(double x) noexcept
{
    double const ax = std::abs(x);
    return ax <= 1.0 ? std::numbers::ln2 : std::numbers::ln2 - std::acosh(ax);
}

} // namespace detail

/// Modified Bessel function of the first kind I_nu(x), x >= 0.
inline double bessel_i(BesselOrder order, double x)
{
    if (!std::isfinite(x) || x < 0) {
        throw domain_error("bessel_i: argument must be finite and non-negative");
    }
    double const nu = order.value();
    if (x == 0) {
        return nu == 0 ? 1.0 : 0.0;
    }
    if (nu == 0.5) {
        return std::sqrt(2 / (std::numbers::pi * x)) * std::sinh(x);
    }
    double const normalized = detail::bessel_i_normalized(nu, x);
    if (nu == 0) {
        return normalized;
    }
    // Gamma(nu+1) (x/2)^-nu can overflow or underflow on its own; go through logs.
    double const log_factor = nu * std::log(0.5 * x) - std::lgamma(nu + 1);
    return normalized * std::exp(log_factor);
}

/// Modified Bessel function of the second kind K_nu(x), x > 0.
inline double bessel_k(BesselOrder order, double x)
{
    if (!std::isfinite(x) || x <= 0) {
        throw domain_error("bessel_k: argument must be finite and positive");
    }
    return detail::bessel_k_scaled(order.value(), x) * std::exp(-x);
}

/// T_n(u) by the three-term recurrence.
inline double chebyshev_t(int n, double u)
{
    if (n < 0) {
        throw domain_error("chebyshev_t: degree must be non-negative");
    }
    if (!(std::abs(u) <= 1.0)) {
        throw domain_error("chebyshev_t: argument must lie in [-1, 1]");
    }
    if (n == 0) {
        return 1.0;
    }
    double t_prev = 1.0;
    double t = u;
    for (int k = 1; k < n; ++k) {
        double const next = 2 * u * t - t_prev;
        t_prev = t;
        t = next;
    }
    return t;
}

struct QuadratureRule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Chebyshev rule for the weight 1/sqrt(1-u^2): exact to degree 2n-1.
inline QuadratureRule gauss_chebyshev(int n_nodes)
{
    if (n_nodes < 1) {
        throw domain_error("gauss_chebyshev: need at least one node");
    }
    QuadratureRule rule;
    rule.nodes.resize(n_nodes);
    rule.weights.assign(n_nodes, std::numbers::pi / n_nodes);
    for (int k = 1; k <= n_nodes; ++k) {
        rule.nodes[k - 1] = std::cos((2.0 * k - 1) * std::numbers::pi / (2.0 * n_nodes));
    }
    return rule;
}

/// log 2 + sum_{n=1..N} (2/n) T_n(x) T_n(y); tends to -log|x - y|.
inline double multipole_log_partial_sum(double x, double y, int terms)
{
    if (!(std::abs(x) <= 1.0) || !(std::abs(y) <= 1.0)) {
        throw domain_error("multipole_log_partial_sum: x and y must lie in [-1, 1]");
    }
    if (x == y) {
        throw domain_error("multipole_log_partial_sum: degenerate input x == y");
    }
    double sum = std::numbers::ln2;
    double tx_prev = 1.0;
    double tx = x;
    double ty_prev = 1.0;
    double ty = y;
    for (int n = 1; n <= terms; ++n) {
        sum += 2.0 / n * tx * ty;
        double const nx = 2 * x * tx - tx_prev;
        double const ny = 2 * y * ty - ty_prev;
        tx_prev = tx;
        tx = nx;
        ty_prev = ty;
        ty = ny;
    }
    return sum;
}

/**
 * -int log|x - y| T_n(y) / (pi sqrt(1 - y^2)) dy over [-1, 1], n >= 1.
 *
 * T_n(x)/n inside [-1, 1]; outside, e^{-n z}/n with |x| = cosh z and the
 * parity (-1)^n for x < -1.
 */
inline double chebyshev_log_moment(int n, double x)
{
    if (n < 1) {
        throw domain_error("chebyshev_log_moment: n must be at least 1");
    }
    if (!std::isfinite(x)) {
        throw domain_error("chebyshev_log_moment: x must be finite");
    }
    double const ax = std::abs(x);
    if (ax <= 1.0) {
        return chebyshev_t(n, x) / n;
    }
    double const z = std::log(ax + std::sqrt(ax * ax - 1));
    double const value = std::exp(-n * z) / n;
    return (x < 0 && n % 2 == 1) ? -value : value;
}

/// The same moment by tanh-sinh quadrature in the angle, split at acos(x).
inline double chebyshev_log_moment_quadrature(int n, double x)
{
    if (n < 1 || !std::isfinite(x)) {
        throw domain_error("chebyshev_log_moment_quadrature: need n >= 1 and finite x");
    }
    boost::math::quadrature::tanh_sinh<double> ts;
    double const t0 = std::acos(std::clamp(x, -1.0, 1.0));
    // |cos t0 - cos t| as a product of sines keeps full precision near t0
    auto dist = [&](double t) {
        return std::abs(x) <= 1 ? 2 * std::abs(std::sin(0.5 * (t + t0)) * std::sin(0.5 * (t - t0)))
                                : std::abs(x - std::cos(t));
    };
    auto g = [&](double t) {
        double const r = dist(t);
        // r underflows only at nodes within ~1e-160 of the singularity
        return r > 0 ? -std::log(r) * std::cos(n * t) : 0.0;
    };
    double value = 0;
    if (t0 > 0 && t0 < std::numbers::pi) {
        value = ts.integrate(g, 0.0, t0, 1e-14) + ts.integrate(g, t0, std::numbers::pi, 1e-14);
    } else {
        value = ts.integrate(g, 0.0, std::numbers::pi, 1e-14);
    }
    return value / std::numbers::pi;
}

/// Coefficients of u T_n'(u) in the T basis, n even: index k holds the T_k weight.
inline std::vector<double> cheb_prime_expansion(int n)
{
    if (n < 0 || n % 2 != 0) {
        throw domain_error("cheb_prime_expansion: n must be a non-negative even integer");
    }
    std::vector<double> coeffs(static_cast<std::size_t>(n) + 1, 0.0);
    if (n == 0) {
        return coeffs;
    }
    coeffs[0] = n;
    coeffs[n] = n;
    for (int k = 2; k < n; k += 2) {
        coeffs[k] = 2.0 * n;
    }
    return coeffs;
}

} // namespace gaswall

#endif // GASWALL_SPECIAL_FNS_HPP
