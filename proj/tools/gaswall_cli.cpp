// gaswall-cli: equilibrium tables, free-energy sweeps, identity checks and
// Monte Carlo runs for gases confined by hard walls.

#include <gaswall/gaswall.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace {

using namespace gaswall;

enum Exit { ok = 0, identity_failure = 1, invalid_input = 2, numerical_failure = 3 };

std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string json_num(double x) { return std::isfinite(x) ? num(x) : "null"; }

std::string jstr(std::string const& s)
{
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') {
            out += '\\';
        }
        out += ch;
    }
    return out + "\"";
}

struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows; // csv cells
    std::vector<std::vector<std::string>> json; // json literals, same shape
};

using Scalars = std::vector<std::pair<std::string, std::string>>; // key, json literal

struct Output
{
    std::string format = "csv";
    std::string out;
};

void write_file(std::string const& path, std::string const& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw domain_error("cannot open " + path + " for writing");
    }
    f << text;
}

std::string scalars_json(Scalars const& s, Table const* t)
{
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (auto const& [k, v] : s) {
        os << (first ? "" : ",") << "\n  " << jstr(k) << ": " << v;
        first = false;
    }
    if (t) {
        for (std::size_t c = 0; c < t->columns.size(); ++c) {
            os << (first ? "" : ",") << "\n  " << jstr(t->columns[c]) << ": [";
            for (std::size_t r = 0; r < t->json.size(); ++r) {
                os << (r ? ", " : "") << t->json[r][c];
            }
            os << "]";
            first = false;
        }
    }
    os << "\n}\n";
    return os.str();
}

void emit(Output const& o, Table const& t, Scalars const& s)
{
    if (o.format == "json") {
        std::string const text = scalars_json(s, &t);
        if (o.out.empty()) {
            std::cout << text;
        } else {
            write_file(o.out, text);
        }
        return;
    }
    std::ostringstream os;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        os << (c ? "," : "") << t.columns[c];
    }
    os << "\n";
    for (auto const& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << (c ? "," : "") << row[c];
        }
        os << "\n";
    }
    if (o.out.empty()) {
        std::cout << os.str();
        std::cerr << scalars_json(s, nullptr);
    } else {
        write_file(o.out, os.str());
        write_file(o.out + ".json", scalars_json(s, nullptr));
    }
}

void add_row(Table& t, std::vector<double> const& values, std::optional<std::string> label = {})
{
    std::vector<std::string> csv;
    std::vector<std::string> js;
    for (double v : values) {
        csv.push_back(num(v));
        js.push_back(json_num(v));
    }
    if (label) {
        csv.push_back(*label);
        js.push_back(jstr(*label));
    }
    t.rows.push_back(std::move(csv));
    t.json.push_back(std::move(js));
}

// ---- model specification --------------------------------------------------

double parse_double(std::string const& s, std::string const& what)
{
    try {
        std::size_t used = 0;
        double const v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (std::exception const&) {
        throw domain_error("cannot parse " + what + " '" + s + "'");
    }
}

std::vector<std::string> split(std::string const& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else if (ch != ' ') {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

/// quadratic:k, quartic:k, monomial:p:k, or a sum such as 0.5*r^2+0.1*r^4.
RadialPotential parse_potential(std::string const& spec)
{
    auto const parts = split(spec, ':');
    if (parts[0] == "quadratic" || parts[0] == "quartic") {
        if (parts.size() != 2) {
            throw domain_error("expected " + parts[0] + ":k");
        }
        double const k = parse_double(parts[1], "coefficient");
        return monomial_sum({{k, parts[0] == "quadratic" ? 2.0 : 4.0}}, spec);
    }
    if (parts[0] == "monomial") {
        if (parts.size() != 3) {
            throw domain_error("expected monomial:p:k");
        }
        double const p = parse_double(parts[1], "exponent");
        if (p < 2 || p != std::floor(p) || static_cast<long>(p) % 2 != 0) {
            throw domain_error("monomial exponent must be an even integer >= 2");
        }
        return monomial_sum({{parse_double(parts[2], "coefficient"), p}}, spec);
    }
    if (parts.size() != 1) {
        throw domain_error("unknown potential '" + spec + "'");
    }
    std::vector<Monomial> terms;
    for (auto const& term : split(spec, '+')) {
        auto const star = term.find("*r^");
        if (term.empty() || star == std::string::npos) {
            throw domain_error("custom potential terms must look like k*r^p, got '" + term + "'");
        }
        terms.push_back({parse_double(term.substr(0, star), "coefficient"),
                         parse_double(term.substr(star + 3), "exponent")});
    }
    return monomial_sum(terms, spec);
}

struct ModelSpec
{
    std::string preset;
    std::string family = "loggas";
    int d = 1;
    double a = 1.0;
    double m = 1.0;
    std::string pot = "quadratic:0.5";
};

void add_model_options(CLI::App* cmd, ModelSpec& s)
{
    cmd->add_option("--preset", s.preset, "gue, ginue, wishart_c1 or tf1");
    cmd->add_option("--family", s.family, "loggas, yukawa, coulomb or thomas_fermi");
    cmd->add_option("--d", s.d, "dimension (yukawa families)");
    cmd->add_option("--a", s.a, "gradient coefficient a");
    cmd->add_option("--m", s.m, "screening mass m");
    cmd->add_option("--pot", s.pot, "quadratic:k, quartic:k, monomial:p:k or k1*r^p1+...");
}

struct Wishart
{
};

using Gas = std::variant<log_gas::LogGas, yukawa::YukawaGas, Wishart>;

struct Resolved
{
    std::string id;
    std::string family;
    std::string potential;
    Gas gas;
};

Resolved resolve(ModelSpec s)
{
    if (!s.preset.empty()) {
        if (s.preset == "gue") {
            s.family = "loggas";
            s.pot = "quadratic:0.5";
        } else if (s.preset == "ginue") {
            s.family = "coulomb";
            s.d = 2;
            s.a = 1;
            s.pot = "quadratic:0.5";
        } else if (s.preset == "tf1") {
            s.family = "thomas_fermi";
            s.d = 1;
            s.m = 1;
            s.pot = "quadratic:0.5";
        } else if (s.preset == "wishart_c1") {
            return {"wishart_c1", "single_wall", "wishart_c1", Wishart{}};
        } else {
            throw domain_error("unknown preset '" + s.preset + "'");
        }
    }
    auto pot = parse_potential(s.pot);
    std::string const id = s.preset.empty() ? s.family : s.preset;
    if (s.family == "loggas") {
        return {id, s.family, s.pot, log_gas::LogGas(std::move(pot))};
    }
    yukawa::YukawaParams params = [&] {
        if (s.family == "yukawa") {
            if (!(s.a > 0) || !(s.m > 0)) {
                throw domain_error("the yukawa family needs a > 0 and m > 0");
            }
            return yukawa::YukawaParams(s.d, s.a, s.m);
        }
        if (s.family == "coulomb") {
            return yukawa::YukawaParams::coulomb(s.d, s.a);
        }
        if (s.family == "thomas_fermi") {
            return yukawa::YukawaParams::thomas_fermi(s.d, s.m);
        }
        throw domain_error("unknown family '" + s.family + "'");
    }();
    return {id, s.family, s.pot, yukawa::YukawaGas(params, std::move(pot))};
}

double r_star_of(Gas const& g)
{
    if (auto const* l = std::get_if<log_gas::LogGas>(&g)) {
        return l->critical_radius();
    }
    if (auto const* y = std::get_if<yukawa::YukawaGas>(&g)) {
        return y->critical_radius();
    }
    return log_gas::single_wall::critical_wall(log_gas::single_wall::Model::wishart_c1);
}

transition::Model model_of(Resolved const& r)
{
    if (auto const* l = std::get_if<log_gas::LogGas>(&r.gas)) {
        return transition::make_model(*l, r.id);
    }
    if (auto const* y = std::get_if<yukawa::YukawaGas>(&r.gas)) {
        return transition::make_model(*y, r.id);
    }
    using log_gas::single_wall::Model;
    // F' = -p with p = (b - 4)^2 / (32 b), continued past b_star = 4.
    auto ext = [](double b) { return -(b - 4) * (b - 4) / (32 * b); };
    return transition::Model{
        r.id, 4.0, [](double b) { return log_gas::single_wall::rate_closed_form(Model::wishart_c1, b); },
        [ext](double b) { return b >= 4 ? 0.0 : ext(b); }, ext, [] { return -1.0 / 64; }};
}

Scalars model_scalars(Resolved const& r)
{
    return {{"model_id", jstr(r.id)}, {"family", jstr(r.family)},
            {"potential", jstr(r.potential)}, {"r_star", json_num(r_star_of(r.gas))}};
}

// ---- commands -------------------------------------------------------------

int cmd_presets(Output const& o)
{
    Table t;
    t.columns = {"name", "family", "d", "potential", "r_star"};
    for (std::string name : {"gue", "ginue", "wishart_c1", "tf1"}) {
        ModelSpec s;
        s.preset = name;
        auto const r = resolve(s);
        int const d = std::holds_alternative<yukawa::YukawaGas>(r.gas)
                          ? std::get<yukawa::YukawaGas>(r.gas).params().d()
                          : 1;
        double const rs = r_star_of(r.gas);
        t.rows.push_back({name, r.family, std::to_string(d), r.potential, num(rs)});
        t.json.push_back({jstr(name), jstr(r.family), std::to_string(d), jstr(r.potential),
                          json_num(rs)});
    }
    emit(o, t, {{"count", "4"}});
    return ok;
}

int cmd_equilibrium(ModelSpec const& spec, double wall, int points, Output const& o)
{
    if (!(wall > 0)) {
        throw domain_error("--wall must be positive");
    }
    if (points < 2) {
        throw domain_error("--points must be at least 2");
    }
    auto const r = resolve(spec);
    Scalars s = model_scalars(r);
    s.emplace_back("wall", json_num(wall));
    Table t;
    if (auto const* l = std::get_if<log_gas::LogGas>(&r.gas)) {
        auto const eq = l->equilibrium(wall);
        double const rho = eq.support();
        t.columns = {"x", "density"};
        for (int i = 0; i < points; ++i) {
            double const x = -rho + 2 * rho * (i + 0.5) / points;
            add_row(t, {x, log_gas::density(eq, x)});
        }
        s.insert(s.end(), {{"phase", jstr(to_string(eq.phase))},
                           {"support", json_num(rho)},
                           {"mu", json_num(eq.mu)},
                           {"pressure", json_num(l->wall_pressure(wall))},
                           {"free_energy", json_num(l->free_energy(wall))}});
    } else if (auto const* y = std::get_if<yukawa::YukawaGas>(&r.gas)) {
        auto const eq = y->equilibrium(wall);
        double const rho = eq.support();
        t.columns = {"r", "density"};
        for (int i = 0; i < points; ++i) {
            double const x = rho * (i + 0.5) / points;
            add_row(t, {x, eq.bulk(x)});
        }
        bool const tf = y->params().kind() == yukawa::Kind::thomas_fermi;
        s.insert(s.end(), {{"phase", jstr(to_string(eq.phase))},
                           {"support", json_num(rho)},
                           {"mu", json_num(eq.mu)},
                           {"c", json_num(eq.c)},
                           {"pressure", tf ? "null" : json_num(y->wall_pressure(wall))},
                           {"free_energy", json_num(y->free_energy(wall))}});
    } else {
        using log_gas::single_wall::Model;
        auto const rate = log_gas::single_wall::single_wall_rate(Model::wishart_c1, wall);
        double const b = std::min(wall, rate.b_star);
        t.columns = {"x", "density"};
        for (int i = 0; i < points; ++i) {
            double const x = b * (i + 0.5) / points;
            add_row(t, {x, log_gas::single_wall::density(Model::wishart_c1, b, x)});
        }
        s.insert(s.end(), {{"phase", jstr(wall < rate.b_star ? "pushed" : "pulled")},
                           {"pressure", json_num(rate.pressure)},
                           {"free_energy", json_num(rate.rate)},
                           {"free_energy_quadrature", json_num(rate.rate_quadrature)}});
    }
    emit(o, t, s);
    return ok;
}

std::vector<double> parse_grid(std::string const& g)
{
    std::vector<double> grid;
    auto const colon = split(g, ':');
    if (colon.size() == 3) {
        double const lo = parse_double(colon[0], "grid start");
        double const hi = parse_double(colon[1], "grid end");
        double const n = parse_double(colon[2], "grid count");
        if (n < 2 || n != std::floor(n) || !(hi > lo)) {
            throw domain_error("grid lo:hi:n needs hi > lo and integer n >= 2");
        }
        for (int i = 0; i < static_cast<int>(n); ++i) {
            grid.push_back(lo + (hi - lo) * i / (n - 1));
        }
        return grid;
    }
    if (colon.size() != 1) {
        throw domain_error("grid must be lo:hi:n or a comma list");
    }
    for (auto const& v : split(g, ',')) {
        grid.push_back(parse_double(v, "grid value"));
    }
    return grid;
}

int cmd_sweep(ModelSpec const& spec, std::string const& grid_spec, bool fit_window, Output const& o)
{
    auto const r = resolve(spec);
    auto const model = model_of(r);
    std::vector<double> grid = fit_window ? transition::fit_window_grid(model.r_star)
                                          : parse_grid(grid_spec);
    auto const c = transition::sweep(model, grid);
    Table t;
    t.columns = {"r", "f", "df", "d2f", "d3f", "phase"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        add_row(t, {c.grid[i], c.F[i], c.dF[i], c.d2F[i], c.d3F[i]}, to_string(c.phase[i]));
    }
    Scalars s = model_scalars(r);
    s.insert(s.end(), {{"jump", json_num(c.jump)},
                       {"predicted_jump", json_num(model.predicted_jump())},
                       {"c_star", json_num(c.C_star)}});
    try {
        auto const fit = transition::cubic_fit(c);
        s.emplace_back("c_star_fit", json_num(fit.coefficient));
        s.emplace_back("fit_points", std::to_string(fit.points));
    } catch (domain_error const&) {
        s.emplace_back("c_star_fit", "null");
        s.emplace_back("fit_points", "0");
    }
    emit(o, t, s);
    return ok;
}

struct SuiteResult
{
    std::string suite;
    int d = 0;
    double deviation = 0;
    double threshold = 0;
};

SuiteResult multipole_suite()
{
    double worst = 0;
    for (int i = 0; i <= 20; ++i) {
        for (int j = 0; j <= 20; ++j) {
            double const x = -1 + 0.1 * i;
            double const y = -1 + 0.1 * j;
            if (std::abs(x - y) < 0.1 - 1e-12) {
                continue;
            }
            worst = std::max(worst, std::abs(multipole_log_partial_sum(x, y, 10000)
                                             + std::log(std::abs(x - y))));
        }
    }
    return {"multipole", 0, worst, 1e-3};
}

SuiteResult log_moment_suite()
{
    double worst = 0;
    for (int n = 1; n <= 20; ++n) {
        for (double x : {-3.0, -1.5, -1.0, -0.7, -0.2, 0.0, 0.3, 0.5, 0.9, 1.0, 1.2, 2.5}) {
            worst = std::max(worst, std::abs(chebyshev_log_moment(n, x)
                                             - chebyshev_log_moment_quadrature(n, x)));
        }
    }
    return {"log_moment", 0, worst, 1e-8};
}

SuiteResult shell_suite(int d, int pairs)
{
    double worst = 0;
    for (auto const& p : {yukawa::YukawaParams(d, 1, 1), yukawa::YukawaParams(d, 0.5, 2),
                          yukawa::YukawaParams::coulomb(d)}) {
        for (int k = 0; k < pairs; ++k) {
            // pairs straddle x = r: ratios alternate below and above 1
            double const r = 0.5 + 0.25 * k;
            double const ratio = k % 2 == 0 ? 1 - 0.6 / (k + 2) : 1 + 0.6 / (k + 2);
            double const x = r * ratio;
            worst = std::max(worst, std::abs(yukawa::shell_average(p, x, r)
                                             - yukawa::shell_average_direct(p, x, r)));
        }
    }
    return {"shell", d, worst, 1e-8};
}

SuiteResult wronskian_suite(int d)
{
    double worst = 0;
    for (double a : {0.5, 1.0, 2.0}) {
        for (double m : {0.5, 1.0, 2.0}) {
            yukawa::YukawaParams const p(d, a, m);
            for (double r : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
                worst = std::max(worst, std::abs(yukawa::wronskian_defect(p, r)) * a * a
                                            * std::pow(r, d - 1));
            }
        }
    }
    return {"wronskian", d, worst, 1e-10};
}

int cmd_identities(std::string const& suite, std::optional<int> d, int pairs, Output const& o)
{
    if (suite != "all" && suite != "multipole" && suite != "log_moment" && suite != "shell"
        && suite != "wronskian") {
        throw domain_error("unknown suite '" + suite + "'");
    }
    if (pairs < 1) {
        throw domain_error("--pairs must be positive");
    }
    std::vector<SuiteResult> results;
    if (suite == "all" || suite == "multipole") {
        results.push_back(multipole_suite());
    }
    if (suite == "all" || suite == "log_moment") {
        results.push_back(log_moment_suite());
    }
    if (suite == "all" || suite == "shell") {
        if (d && (*d < 2 || *d > 3)) {
            throw domain_error("the shell suite runs in d = 2 or 3");
        }
        for (int dd : d ? std::vector<int>{*d} : std::vector<int>{2, 3}) {
            results.push_back(shell_suite(dd, pairs));
        }
    }
    if (suite == "all" || suite == "wronskian") {
        if (d && (*d < 1 || *d > 6)) {
            throw domain_error("--d must lie in 1..6");
        }
        for (int dd : d ? std::vector<int>{*d} : std::vector<int>{1, 2, 3, 4}) {
            results.push_back(wronskian_suite(dd));
        }
    }
    Table t;
    t.columns = {"suite", "d", "max_deviation", "threshold", "ok"};
    bool all_pass = true;
    for (auto const& r : results) {
        bool const pass = r.deviation < r.threshold;
        all_pass = all_pass && pass;
        std::string const dim = r.d ? std::to_string(r.d) : "";
        t.rows.push_back({r.suite, dim, num(r.deviation), num(r.threshold), pass ? "true" : "false"});
        t.json.push_back({jstr(r.suite), r.d ? dim : "null", json_num(r.deviation),
                          json_num(r.threshold), pass ? "true" : "false"});
    }
    emit(o, t, {{"suites", std::to_string(results.size())}, {"all_pass", all_pass ? "true" : "false"}});
    return all_pass ? ok : identity_failure;
}

struct McFlags
{
    int n = 100;
    double beta = 2.0;
    long sweeps = 100000;
    std::optional<long> burn_in;
    std::uint64_t seed = 7;
    std::optional<double> wall;
    int bins = 64;
    double step = 0.1;
    int chains = 1;
    double exclude_bins = 2.0;
};

int cmd_mc(ModelSpec const& spec, McFlags const& f, Output const& o)
{
    auto const r = resolve(spec);
    if (std::holds_alternative<Wishart>(r.gas)) {
        throw domain_error("mc: the single-wall preset has no particle model");
    }
    mc::GasConfig c;
    c.n = f.n;
    c.beta = f.beta;
    c.seed = f.seed;
    c.steps = f.sweeps;
    c.burn_in = f.burn_in ? *f.burn_in : f.sweeps / 10;
    c.step_scale = f.step;
    c.bins = f.bins;
    c.wall = f.wall;
    c.extent = 1.5 * r_star_of(r.gas);

    std::function<double(double)> density;
    std::vector<double> breaks;
    double surface_c = 0;
    if (auto const* l = std::get_if<log_gas::LogGas>(&r.gas)) {
        c.kernel = mc::LogKernel{};
        c.pot = l->potential();
        auto const eq = l->equilibrium(f.wall ? *f.wall : 2 * l->critical_radius());
        density = [eq](double x) {
            double const v = log_gas::density(eq, x);
            return std::isfinite(v) ? v : 0.0;
        };
    } else {
        auto const& y = std::get<yukawa::YukawaGas>(r.gas);
        c.kernel = y.params();
        c.pot = y.potential();
        if (y.params().kind() == yukawa::Kind::thomas_fermi) {
            throw domain_error("mc: the Thomas-Fermi delta kernel cannot be sampled pairwise");
        }
        auto const eq = y.equilibrium(f.wall ? *f.wall : 2 * y.critical_radius());
        surface_c = eq.c;
        double const rho = eq.support();
        density = [eq, rho](double x) { return x <= rho ? eq.bulk(x) : 0.0; };
        breaks.push_back(rho);
    }
    mc::validate(c);
    if (f.chains < 1) {
        throw domain_error("--chains must be positive");
    }
    auto const run = f.chains == 1 ? mc::metropolis_run(c) : mc::metropolis_run_chains(c, f.chains);
    auto const& h = run.histogram;

    std::vector<double> excluded;
    if (f.wall) {
        excluded.push_back(*f.wall);
        if (h.dim == 1) {
            excluded.push_back(-*f.wall);
        }
    }
    double const width = f.exclude_bins * h.width();
    double const l1 = mc::density_distance(h, density, excluded, width, breaks);

    Table t;
    t.columns = {"lo", "hi", "mass", "predicted"};
    auto const mass = h.mass();
    double const omega = h.radial ? yukawa::surface_area(h.dim) : 1.0;
    for (std::size_t k = 0; k < h.bins(); ++k) {
        double const lo = h.edges[k];
        double const hi = h.edges[k + 1];
        auto weighted = [&](double x) {
            return (h.radial ? omega * std::pow(x, h.dim - 1) : 1.0) * density(x);
        };
        double pred = 0;
        double from = lo;
        for (double b : breaks) {
            if (b > lo && b < hi) {
                pred += numerics::integrate(weighted, from, b, 1e-8, 1e-10);
                from = b;
            }
        }
        pred += numerics::integrate(weighted, from, hi, 1e-8, 1e-10);
        add_row(t, {lo, hi, mass[k], pred});
    }
    Scalars s = model_scalars(r);
    s.insert(s.end(), {{"n", std::to_string(f.n)},
                       {"beta", json_num(f.beta)},
                       {"sweeps", std::to_string(f.sweeps)},
                       {"seed", std::to_string(f.seed)},
                       {"acceptance_rate", json_num(run.acceptance_rate)},
                       {"l1_distance", json_num(l1)},
                       {"max_energy_drift", json_num(run.max_energy_drift)},
                       {"step_scale", json_num(run.step_scale)}});
    if (f.wall) {
        double bulk = 0;
        double const R = *f.wall;
        for (std::size_t k = 0; k < h.bins(); ++k) {
            if (h.edges[k] >= R - width - 1e-12) {
                bulk += std::stod(t.rows[k][3]);
            }
        }
        s.insert(s.end(), {{"surface_mass", json_num(mc::mass_near(h, R, width))},
                           {"surface_bulk_prediction", json_num(bulk)},
                           {"surface_charge", json_num(surface_c)}});
    }
    emit(o, t, s);
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hard-wall gas toolkit: equilibria, free-energy sweeps, identities, Monte Carlo"};
    app.require_subcommand(1);
    Output out;
    auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--format", out.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out.out, "output path (default: standard output)");
    };

    auto* presets = app.add_subcommand("presets", "list model presets");
    add_output(presets);

    ModelSpec spec;
    double wall = 1.0;
    int points = 201;
    auto* equilibrium = app.add_subcommand("equilibrium", "equilibrium density and scalars");
    add_model_options(equilibrium, spec);
    equilibrium->add_option("--wall", wall, "wall radius R")->required();
    equilibrium->add_option("--points", points, "density grid size");
    add_output(equilibrium);

    std::string grid = "0.1:2:20";
    bool fit_window = false;
    auto* sweep = app.add_subcommand("sweep", "F(R) and derivatives on a grid");
    add_model_options(sweep, spec);
    sweep->add_option("--grid", grid, "lo:hi:n or comma-separated radii");
    sweep->add_flag("--fit-window", fit_window, "use the 20-point grid clustered below R_star");
    add_output(sweep);

    std::string suite = "all";
    std::optional<int> dim;
    int pairs = 10;
    auto* identities = app.add_subcommand("identities", "run the identity suites");
    identities->add_option("--suite", suite, "all, multipole, log_moment, shell or wronskian");
    identities->add_option("--d", dim, "restrict shell/wronskian to one dimension");
    identities->add_option("--pairs", pairs, "(x, r) pairs per shell-theorem kernel");
    add_output(identities);

    McFlags mcf;
    auto* mc_cmd = app.add_subcommand("mc", "Metropolis run and histogram");
    add_model_options(mc_cmd, spec);
    mc_cmd->add_option("--n", mcf.n, "particles");
    mc_cmd->add_option("--beta", mcf.beta, "inverse temperature");
    mc_cmd->add_option("--sweeps", mcf.sweeps, "total sweeps");
    mc_cmd->add_option("--burn-in", mcf.burn_in, "tuning sweeps (default sweeps/10)");
    mc_cmd->add_option("--seed", mcf.seed, "64-bit seed");
    mc_cmd->add_option("--wall", mcf.wall, "wall radius");
    mc_cmd->add_option("--bins", mcf.bins, "histogram bins");
    mc_cmd->add_option("--step", mcf.step, "initial proposal half-width");
    mc_cmd->add_option("--chains", mcf.chains, "independent chains");
    mc_cmd->add_option("--exclude-bins", mcf.exclude_bins, "bins excluded around the wall");
    add_output(mc_cmd);

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int const code = app.exit(e);
        return code == 0 ? ok : invalid_input;
    }

    try {
        if (*presets) {
            return cmd_presets(out);
        }
        if (*equilibrium) {
            return cmd_equilibrium(spec, wall, points, out);
        }
        if (*sweep) {
            return cmd_sweep(spec, grid, fit_window, out);
        }
        if (*identities) {
            return cmd_identities(suite, dim, pairs, out);
        }
        if (*mc_cmd) {
            return cmd_mc(spec, mcf, out);
        }
    } catch (domain_error const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return invalid_input;
    } catch (numerical_error const& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return numerical_failure;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return numerical_failure;
    }
    return invalid_input;
}
