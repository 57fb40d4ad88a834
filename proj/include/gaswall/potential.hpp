#ifndef GASWALL_POTENTIAL_HPP
#define GASWALL_POTENTIAL_HPP

#include <gaswall/error.hpp>
#include <gaswall/numerics.hpp>

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace gaswall {

/**
 * Radially symmetric confining potential V(x) = v(|x|).
 *
 * The evaluators are only ever called with r >= 0. moment is an optional
 * closed form for int_0^r s^(d-1) v(s) ds; when empty the integral is
 * computed by quadrature.
 */
struct RadialPotential
{
    std::function<double(double)> v;
    std::function<double(double)> dv;
    std::function<double(double)> ddv;
    std::string label;
    std::function<double(double, int)> moment;

    /**
     * Builds a radial potential from a potential on the line, rejecting it
     * unless V(r) == V(-r) (to 1e-10 relative) at sampled radii.
     */
    static RadialPotential from_line(std::function<double(double)> line_v,
                                     std::function<double(double)> line_dv,
                                     std::function<double(double)> line_ddv,
                                     std::string label,
                                     double sample_radius = 10.0)
    {
        for (int k = 1; k <= 64; ++k) {
            double const r = sample_radius * k / 64.0;
            double const plus = line_v(r);
            double const minus = line_v(-r);
            if (std::abs(plus - minus) > 1e-10 * std::max(1.0, std::abs(plus))) {
                throw domain_error("potential '" + label + "' is not symmetric at r = "
                                   + std::to_string(r));
            }
        }
        return RadialPotential{std::move(line_v), std::move(line_dv), std::move(line_ddv),
                               std::move(label), {}};
    }
};

struct Monomial
{
    double coefficient = 0.0;
    double power = 0.0;
};

/// sum_i k_i r^{p_i}, with closed-form derivatives and radial moments.
inline RadialPotential monomial_sum(std::vector<Monomial> terms, std::string label = {})
{
    for (auto const& t : terms) {
        if (!std::isfinite(t.coefficient) || !std::isfinite(t.power) || t.power < 0) {
            throw domain_error("monomial terms need finite coefficients and powers >= 0");
        }
    }
    if (label.empty()) {
        std::ostringstream os;
        os.precision(17);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            os << (i ? "+" : "") << terms[i].coefficient << "*r^" << terms[i].power;
        }
        label = terms.empty() ? "0" : os.str();
    }
    auto power = [](double r, double p) { return p == 0 ? 1.0 : std::pow(r, p); };

    RadialPotential pot;
    pot.label = std::move(label);
    pot.v = [terms, power](double r) {
        double s = 0;
        for (auto const& t : terms) {
            s += t.coefficient * power(r, t.power);
        }
        return s;
    };
    pot.dv = [terms, power](double r) {
        double s = 0;
        for (auto const& t : terms) {
            if (t.power != 0) {
                s += t.coefficient * t.power * power(r, t.power - 1);
            }
        }
        return s;
    };
    pot.ddv = [terms, power](double r) {
        double s = 0;
        for (auto const& t : terms) {
            if (t.power != 0 && t.power != 1) {
                s += t.coefficient * t.power * (t.power - 1) * power(r, t.power - 2);
            }
        }
        return s;
    };
    pot.moment = [terms](double r, int d) {
        double s = 0;
        for (auto const& t : terms) {
            s += t.coefficient * std::pow(r, t.power + d) / (t.power + d);
        }
        return s;
    };
    return pot;
}

inline RadialPotential quadratic(double k) { return monomial_sum({{k, 2.0}}); }
inline RadialPotential quartic(double k) { return monomial_sum({{k, 4.0}}); }
inline RadialPotential constant_potential(double k) { return monomial_sum({{k, 0.0}}); }

/// int_0^r s^(d-1) v(s) ds, from the closed-form hook when available.
inline double radial_moment(RadialPotential const& pot, double r, int d)
{
    if (pot.moment) {
        return pot.moment(r, d);
    }
    return numerics::integrate(
        [&](double s) { return std::pow(s, d - 1) * pot.v(s); }, 0.0, r, 1e-12, 1e-16);
}

/**
 * Largest relative mismatch between dv, ddv and central differences of v
 * and dv at the given radii.
 */
inline double derivative_mismatch(RadialPotential const& pot, std::vector<double> const& radii)
{
    double worst = 0.0;
    for (double r : radii) {
        double const h = 1e-5 * std::max(1.0, r);
        double const fd1 = (pot.v(r + h) - pot.v(r - h)) / (2 * h);
        double const fd2 = (pot.dv(r + h) - pot.dv(r - h)) / (2 * h);
        worst = std::max(worst, std::abs(fd1 - pot.dv(r)) / std::max(1.0, std::abs(pot.dv(r))));
        worst = std::max(worst, std::abs(fd2 - pot.ddv(r)) / std::max(1.0, std::abs(pot.ddv(r))));
    }
    return worst;
}

} // namespace gaswall

#endif // GASWALL_POTENTIAL_HPP
