// Command-line runner: every subcommand writes its tables plus manifest.json
// into --out. Exit status 0 on success, 1 when an acceptance-grade check
// fails, 2 on configuration errors, 3 on IO errors, 4 on other library errors.

#include "isaacs/isaacs.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace isaacs;
using io::json;

namespace {

struct Options {
    int dim = 2;
    std::optional<double> s;
    std::vector<double> c;
    std::string sweep;
    std::optional<double> alpha;
    std::optional<double> eps;
    std::string domain = "ball";
    std::optional<double> h;
    int directions = 0;
    std::optional<double> tol;
    std::string out = "out";
    std::uint64_t seed = 1;
    std::string preset;

    std::string profile;
    std::vector<double> x;
    bool normalized = false;
    double f = -1.0;
    std::string method = "multigrid";
    double mu = 0.1;
    std::string mode = "quadrature";
    std::string input;
    double region = 0.5;
    std::vector<double> radii{1.0, 2.0, 4.0, 8.0};
    double amplitude = 1.0;
};

/// Exit code for failed checks that are not exceptions.
constexpr int check_failed = 1;

class Run {
public:
    Run(const Options& o, std::string sub) : opt(o), name(std::move(sub)) {}

    void input(const std::string& key, json v) { inputs[key] = std::move(v); }

    void csv(const std::string& file, const io::CsvTable& t)
    {
        io::write_csv(fs::path(opt.out) / file, t);
        outputs.push_back(file);
    }
    void write(const std::string& file, const json& j)
    {
        io::write_json(fs::path(opt.out) / file, j);
        outputs.push_back(file);
    }

    void manifest(int status)
    {
        json m;
        m["tool"] = "isaacs_cli";
        m["version"] = io::version;
        m["subcommand"] = name;
        m["inputs"] = inputs;
        m["seed"] = opt.seed;
        m["tolerances"] = tolerances;
        m["outputs"] = outputs;
        m["status"] = status;
        io::write_json(fs::path(opt.out) / "manifest.json", m);
    }

    const Options& opt;
    std::string name;
    json inputs = json::object();
    json tolerances = json::object();
    std::vector<std::string> outputs;
};

std::vector<double> parse_numbers(const std::string& text)
{
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("not a number: '" + item + "'");
        }
    }
    return v;
}

// ball | ball:R | box:L | box:lo,hi | annulus:rin,rout
template <int N>
DomainSpec<N> parse_domain(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const auto args = colon == std::string::npos ? std::vector<double>{} : parse_numbers(text.substr(colon + 1));
    try {
        if (kind == "ball") {
            if (args.size() > 1) throw ConfigError("ball takes one radius");
            return DomainSpec<N>(Ball<N>{Point<N>{}, args.empty() ? 1.0 : args[0]});
        }
        if (kind == "box") {
            Box<N> b;
            double lo = -1.0, hi = 1.0;
            if (args.size() == 1) lo = -args[0], hi = args[0];
            else if (args.size() == 2) lo = args[0], hi = args[1];
            else if (!args.empty()) throw ConfigError("box takes L or lo,hi");
            for (int i = 0; i < N; ++i) b.lo[i] = lo, b.hi[i] = hi;
            return DomainSpec<N>(b);
        }
        if (kind == "annulus") {
            if (args.size() != 2 && !args.empty()) throw ConfigError("annulus takes r_in,r_out");
            return DomainSpec<N>(Annulus<N>{Point<N>{}, args.empty() ? 0.5 : args[0], args.empty() ? 1.0 : args[1]});
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("domain: ") + e.what());
    }
    throw ConfigError("unknown domain '" + text + "' (ball, box, annulus)");
}

template <int N>
Point<N> boundary_point(const DomainSpec<N>& d)
{
    return std::visit(
        [](const auto& sh) {
            using S = std::decay_t<decltype(sh)>;
            Point<N> p{};
            if constexpr (std::is_same_v<S, Ball<N>>) {
                p = sh.center;
                p[0] += sh.radius;
            } else if constexpr (std::is_same_v<S, Annulus<N>>) {
                p = sh.center;
                p[0] += sh.r_out;
            } else {
                for (int i = 0; i < N; ++i) p[i] = 0.5 * (sh.lo[i] + sh.hi[i]);
                p[0] = sh.hi[0];
            }
            return p;
        },
        d.shape());
}

template <int N>
Point<N> to_point(const std::vector<double>& v, const char* what)
{
    if (v.size() != static_cast<std::size_t>(N))
        throw ConfigError(std::string(what) + " needs " + std::to_string(N) + " coordinates");
    Point<N> p{};
    for (int i = 0; i < N; ++i) p[i] = v[i];
    return p;
}

double require_s(const Options& o)
{
    if (!o.s) throw ConfigError("--s is required");
    if (!(*o.s > 0.0 && *o.s < 1.0)) throw ConfigError("--s must lie in (0,1)");
    return *o.s;
}

template <int MaxDim = 3, class F>
int dispatch(int dim, F&& f)
{
    if (dim == 1) return f(std::integral_constant<int, 1>{});
    if (dim == 2) return f(std::integral_constant<int, 2>{});
    if constexpr (MaxDim >= 3)
        if (dim == 3) return f(std::integral_constant<int, 3>{});
    throw ConfigError("--dim " + std::to_string(dim) + " is not supported here");
}

// ---------------------------------------------------------------------------

int cmd_thresholds(Run& run)
{
    const auto& o = run.opt;
    auto spec = quad::QuadratureSpec::thresholds();
    if (o.tol) spec.rel_tol = *o.tol;
    run.tolerances["quadrature_rel_tol"] = spec.rel_tol;
    run.tolerances["quadrature_abs_tol"] = spec.abs_tol;

    std::vector<double> cs = o.c;
    if (!o.sweep.empty()) {
        const auto v = parse_numbers(o.sweep);
        if (v.size() != 3 || v[2] < 0 || v[2] != std::floor(v[2]))
            throw ConfigError("--sweep expects lo,hi,count");
        const int n = static_cast<int>(v[2]);
        for (int i = 0; i < n; ++i) cs.push_back(n == 1 ? v[0] : v[0] + (v[1] - v[0]) * i / (n - 1));
        run.input("sweep", o.sweep);
    } else if (cs.empty()) {
        cs.push_back(2.0);
    }
    for (double c : cs)
        if (!(c > 1.0 && c <= 2.0)) throw ConfigError("--c values must lie in (1,2]");
    run.input("c", cs);
    if (o.s) run.input("s", *o.s);

    std::vector<ThresholdReport> reports;
    for (double c : cs) reports.push_back(make_threshold_report(c, o.s, spec));

    json j;
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(io::to_json(r));
    j["reports"] = arr;
    if (o.s && o.alpha) {
        run.input("alpha", *o.alpha);
        j["l"] = io::to_json(eval_l(*o.s, *o.alpha, spec));
    }
    if (o.s && o.eps) {
        run.input("eps", *o.eps);
        j["supersolution_constant"] = io::to_json(eval_supersolution_constant(*o.s, *o.eps, spec));
    }
    run.write("thresholds.json", j);
    run.csv("thresholds.csv", io::threshold_table(reports));
    int status = 0;
    for (const auto& r : reports)
        if (!r.s0.certified()) status = check_failed;
    std::cout << "thresholds: " << reports.size() << " report(s) written to " << o.out << "\n";
    return status;
}

// ---------------------------------------------------------------------------

template <int N>
int operator_eval(Run& run)
{
    const auto& o = run.opt;
    const double s = require_s(o);
    const std::string profile = o.profile.empty() ? "gaussian" : o.profile;
    const Point<N> x = o.x.empty() ? Point<N>{} : to_point<N>(o.x, "--x");
    OperatorOptions oo;
    oo.directions = o.directions;
    oo.normalized = o.normalized;
    if (o.tol) oo.spec.rel_tol = *o.tol;
    run.tolerances["quadrature_rel_tol"] = oo.spec.rel_tol;
    run.tolerances["quadrature_abs_tol"] = oo.spec.abs_tol;
    run.input("dim", N);
    run.input("s", s);
    run.input("profile", profile);
    run.input("x", io::to_json<N>(x));
    run.input("normalized", o.normalized);
    run.input("directions", o.directions);

    const DomainSpec<N> domain = parse_domain<N>(o.domain);
    const double h = o.h.value_or(0.0);
    std::function<OperatorEvaluation<N>()> eval;
    std::function<double(const Point<N>&)> sample;
    if (profile == "gaussian") {
        Gaussian<N> g;
        eval = [=] { return isaacs_operator<N>(g, x, s, oo); };
        sample = g;
    } else if (profile == "radial-power") {
        RadialPower<N> p{Point<N>{}, o.alpha.value_or(0.5)};
        run.input("alpha", p.beta);
        eval = [=] { return isaacs_operator<N>(p, x, s, oo); };
        sample = p;
    } else if (profile == "supersolution") {
        Supersolution<N> p{o.eps.value_or(0.01)};
        run.input("eps", p.eps);
        eval = [=] { return isaacs_operator<N>(p, x, s, oo); };
        sample = p;
    } else if (profile == "distance-power") {
        DistancePower<N> p{domain, o.alpha.value_or(0.5 * s)};
        run.input("alpha", p.alpha);
        run.input("domain", o.domain);
        eval = [=] { return isaacs_operator<N>(p, x, s, oo); };
        sample = p;
    } else {
        throw ConfigError("unknown --profile '" + profile + "' (gaussian, radial-power, supersolution, distance-power)");
    }

    OperatorEvaluation<N> e;
    if constexpr (N == 3) {
        if (h > 0.0) throw ConfigError("the discrete operator (--h > 0) is available for --dim 1 and 2");
        e = eval();
    } else if (h > 0.0) {
        // discrete operator of the profile sampled on the grid of --domain
        run.input("h", h);
        run.input("domain", o.domain);
        const auto u = GridFunction<N>::sample(domain, h, sample);
        StencilOptions so;
        if (o.directions > 0) so.directions = o.directions;
        so.normalized = o.normalized;
        e = isaacs_operator<N>(u, x, s, so);
    } else {
        e = eval();
    }
    run.write("operator.json", io::to_json<N>(e));
    run.csv("directions.csv", io::direction_table<N>(e));
    std::cout << "operator-eval: I u(x) = " << io::format_double(e.value) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

template <int N>
int solve_cmd(Run& run, double f_value)
{
    const auto& o = run.opt;
    SolveConfig<N> cfg;
    cfg.s = require_s(o);
    cfg.domain = parse_domain<N>(o.domain);
    cfg.h = o.h.value_or(1.0 / 64);
    if (o.directions > 0) cfg.directions = o.directions;
    if (o.tol) cfg.tol = *o.tol;
    cfg.normalized = o.normalized;
    if (o.method == "multigrid") cfg.method = SolveMethod::multigrid;
    else if (o.method == "explicit") cfg.method = SolveMethod::explicit_euler;
    else throw ConfigError("--method must be multigrid or explicit");
    cfg.f = [f_value](const Point<N>&) { return f_value; };
    cfg.validate();
    run.input("dim", N);
    run.input("s", cfg.s);
    run.input("domain", o.domain);
    run.input("h", cfg.h);
    run.input("directions", cfg.directions);
    run.input("f", f_value);
    run.input("method", o.method);
    run.input("normalized", cfg.normalized);
    if (!o.preset.empty()) run.input("preset", o.preset);
    run.tolerances["residual_tol"] = cfg.tol;
    run.tolerances["max_iter"] = cfg.max_iter;
    run.tolerances["anderson_depth"] = cfg.anderson;

    const auto rep = solve(cfg);
    json j = io::to_json<N>(rep);
    const double alpha = o.alpha.value_or(0.5 * cfg.s);
    j["growth_alpha"] = alpha;
    j["growth_constant"] = io::number(verify_boundary_growth(rep, alpha));
    run.write("report.json", j);
    run.csv("solution.csv", io::solution_table<N>(rep.solution));
    std::cout << "solve: " << rep.method << ", " << rep.iterations << " iterations, residual "
              << io::format_double(rep.residual) << (rep.converged ? "" : " (not converged)") << "\n";
    return rep.converged ? 0 : check_failed;
}

int cmd_solve(Run& run)
{
    Options& o = const_cast<Options&>(run.opt);
    double f = o.f;
    if (!o.preset.empty()) {
        if (o.preset == "disk-f-minus-one") {
            o.dim = 2;
            o.domain = "ball";
            f = -1.0;
        } else if (o.preset == "interval-f-minus-one") {
            o.dim = 1;
            o.domain = "ball";
            f = -1.0;
        } else {
            throw ConfigError("unknown --preset '" + o.preset + "' (disk-f-minus-one, interval-f-minus-one)");
        }
    }
    return dispatch<2>(o.dim, [&](auto n) { return solve_cmd<decltype(n)::value>(run, f); });
}

// ---------------------------------------------------------------------------

template <int N>
int barrier_cmd(Run& run)
{
    const auto& o = run.opt;
    const double s = require_s(o);
    const double alpha = o.alpha.value_or(0.5 * s);
    const DomainSpec<N> domain = parse_domain<N>(o.domain);
    const double h = o.h.value_or(1.0 / 16);
    BarrierOptions bo;
    bo.strict = false;
    if (o.mode == "quadrature") bo.mode = BarrierMode::quadrature;
    else if (o.mode == "discrete") bo.mode = BarrierMode::discrete;
    else throw ConfigError("--mode must be quadrature or discrete");
    if (o.directions > 0) bo.op.directions = bo.stencil.directions = o.directions;
    if (o.tol) bo.op.spec.rel_tol = *o.tol;
    run.input("dim", N);
    run.input("s", s);
    run.input("alpha", alpha);
    run.input("mu", o.mu);
    run.input("domain", o.domain);
    run.input("h", h);
    run.input("mode", o.mode);
    run.input("directions", o.directions);
    run.tolerances["quadrature_rel_tol"] = bo.op.spec.rel_tol;

    const auto rep = barrier_check<N>(domain, s, alpha, o.mu, h, bo);
    json j = io::to_json<N>(rep);
    const Point<N> xb = boundary_point<N>(domain);
    const auto lim = extremal_limit_check<N>(domain, s, alpha, xb, domain.inner_normal(xb));
    j["normal_limit"] = io::to_json(lim);
    run.write("barrier.json", j);
    run.csv("barrier.csv", io::barrier_table<N>(rep));
    std::cout << "barrier-check: " << rep.nodes.size() << " strip nodes, m_hat " << io::format_double(rep.m_hat)
              << (rep.boundary_case ? " (boundary case alpha = s, flagged)" : "")
              << (rep.all_negative ? "" : " NOT all negative") << "\n";
    if (rep.boundary_case) return 0;
    return rep.all_negative ? 0 : check_failed;
}

// ---------------------------------------------------------------------------

template <int N>
GridFunction<N> read_solution_csv(const std::string& path, const DomainSpec<N>& domain, double h)
{
    std::ifstream f(path);
    if (!f) throw IOError("cannot read " + path);
    GridFunction<N> u(domain, h);
    const auto& g = u.grid();
    std::string line;
    std::getline(f, line);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto v = parse_numbers(line);
        if (v.size() != static_cast<std::size_t>(N + 1)) throw IOError("bad row in " + path + ": " + line);
        std::array<long, N> idx{};
        for (int i = 0; i < N; ++i) idx[i] = std::lround((v[i] - g.lo()[i]) / h);
        if (!g.in_range(idx)) throw IOError("node outside the grid in " + path);
        u.set(g.flat(idx), v[N]);
    }
    return u;
}

template <int N>
int holder_cmd(Run& run)
{
    const auto& o = run.opt;
    const DomainSpec<N> domain = parse_domain<N>(o.domain);
    const double h = o.h.value_or(1.0 / 256);
    const std::string profile = o.profile.empty() ? (o.input.empty() ? "radial-power" : "input") : o.profile;
    run.input("dim", N);
    run.input("domain", o.domain);
    run.input("h", h);
    run.input("region", o.region);
    run.input("profile", profile);

    GridFunction<N> u;
    if (!o.input.empty()) {
        run.input("input", o.input);
        u = read_solution_csv<N>(o.input, domain, h);
    } else if (profile == "radial-power") {
        const double beta = o.alpha.value_or(0.5);
        run.input("alpha", beta);
        u = GridFunction<N>::sample(domain, h, RadialPower<N>{Point<N>{}, beta});
    } else if (profile == "solve") {
        if constexpr (N == 3) throw ConfigError("--profile solve is available for --dim 1 and 2");
        else {
        SolveConfig<N> cfg;
        cfg.s = require_s(o);
        cfg.domain = domain;
        cfg.h = h;
        if (o.directions > 0) cfg.directions = o.directions;
        if (o.tol) cfg.tol = *o.tol;
        const double fv = o.f;
        cfg.f = [fv](const Point<N>&) { return fv; };
        run.input("s", cfg.s);
        run.input("f", fv);
        run.tolerances["residual_tol"] = cfg.tol;
        const auto rep = solve(cfg);
        if (!rep.converged) throw NonConverged("solver did not reach the residual tolerance", rep.residual, rep.residual);
        u = rep.solution;
        }
    } else {
        throw ConfigError("unknown --profile '" + profile + "' (radial-power, solve, or --input)");
    }

    HolderOptions ho;
    ho.seed = o.seed;
    const auto fit = holder_fit<N>(u, DomainSpec<N>(Ball<N>{Point<N>{}, o.region}), ho);
    run.write("holder.json", io::to_json(fit));
    run.csv("holder.csv", io::holder_table(fit));
    std::cout << "holder-fit: alpha_hat " << io::format_double(fit.alpha_hat) << " over " << fit.fitted_scales
              << " scales\n";
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_liouville(Run& run)
{
    const auto& o = run.opt;
    const double s = require_s(o);
    LiouvilleOptions lo;
    lo.h = o.h.value_or(1.0 / 16);
    if (o.directions > 0) lo.directions = o.directions;
    if (o.tol) lo.tol = *o.tol;
    lo.alpha_ref = o.alpha;
    lo.amplitude = o.amplitude;
    lo.seed = o.seed;
    run.input("s", s);
    run.input("radii", o.radii);
    run.input("h", lo.h);
    run.input("directions", lo.directions);
    run.input("amplitude", lo.amplitude);
    if (o.alpha) run.input("alpha", *o.alpha);
    run.tolerances["residual_tol"] = lo.tol;
    run.tolerances["max_cycles"] = lo.max_cycles;

    const auto tab = liouville_experiment(s, o.radii, lo);
    run.write("liouville.json", io::to_json(tab));
    run.csv("liouville.csv", io::liouville_table(tab));
    bool converged = true;
    for (const auto& r : tab.rows) converged = converged && r.converged;
    std::cout << "liouville: decay exponent " << io::format_double(tab.decay_exponent)
              << (tab.monotone_decay ? ", monotone" : ", NOT monotone") << "\n";
    const bool zero_data = lo.amplitude == 0.0;
    return converged && (tab.monotone_decay || zero_data) ? 0 : check_failed;
}

// ---------------------------------------------------------------------------

/// (1 - x^2)_+^s
struct UnitIntervalProfile {
    double s;
    double operator()(const Point<1>& x) const
    {
        const double v = 1.0 - x[0] * x[0];
        return v > 0.0 ? std::pow(v, s) : 0.0;
    }
    std::vector<double> kinks(const Point<1>& x, const Direction<1>&) const
    {
        std::vector<double> t{1.0 - x[0], 1.0 + x[0]};
        detail::keep_positive(t);
        return t;
    }
};

struct SelfCheck {
    std::string name;
    std::function<bool(std::string&)> run;
};

int cmd_selftest(Run& run)
{
    auto near = [](double a, double b, double tol, std::string& detail) {
        detail = io::format_double(a) + " vs " + io::format_double(b);
        return std::abs(a - b) <= tol;
    };
    const std::vector<SelfCheck> checks{
        {"h_2(1) = -log 2", [&](std::string& d) { return near(eval_h(2.0, 1.0).value, -std::log(2.0), 1e-8, d); }},
        {"h_c(1) closed form at c = 1.5",
         [&](std::string& d) { return near(eval_h(1.5, 1.0).value, h_closed_form_at_one(1.5), 1e-8, d); }},
        {"l(s, s) = 0 at s = 0.75", [&](std::string& d) { return near(eval_l(0.75, 0.75).value, 0.0, 1e-7, d); }},
        {"s0(2) lies in (1/2, 1) with a certified bracket",
         [&](std::string& d) {
             const auto b = find_s0(2.0);
             d = io::format_double(b.root);
             return b.certified() && b.root > 0.5 && b.root < 1.0 && b.width() < 1e-8;
         }},
        {"constant profile has I u = 0",
         [&](std::string& d) {
             OperatorOptions oo;
             oo.directions = 16;
             return near(isaacs_operator<2>(ConstantProfile<2>{3.0}, Point<2>{0.3, 0.1}, 0.7, oo).value, 0.0, 1e-14, d);
         }},
        {"Gaussian directional operator at its center is Gamma(-s)",
         [&](std::string& d) {
             const double v = directional_operator<2>(Gaussian<2>{}, Point<2>{}, Direction<2>::axis(0), 0.6).value;
             return near(v, std::tgamma(-0.6), 1e-5 * std::abs(std::tgamma(-0.6)), d);
         }},
        {"normalized 1-D operator of (1-x^2)_+^s at 0 is -Gamma(1+2s)",
         [&](std::string& d) {
             const double s = 0.7;
             const double v =
                 directional_operator<1>(UnitIntervalProfile{s}, Point<1>{0.0}, Direction<1>::axis(0), s,
                                         quad::QuadratureSpec::sweep(), true)
                     .value;
             return near(v, -std::tgamma(1.0 + 2.0 * s), 1e-3 * std::tgamma(1.0 + 2.0 * s), d);
         }},
        {"f = 0 gives the zero solution",
         [&](std::string& d) {
             SolveConfig<2> cfg;
             cfg.h = 1.0 / 16;
             cfg.directions = 16;
             const auto rep = solve(cfg);
             d = io::format_double(rep.solution.sup_norm());
             return rep.solution.sup_norm() == 0.0;
         }},
        {"oversized pseudo-time step is rejected",
         [&](std::string& d) {
             SolveConfig<1> cfg;
             cfg.h = 1.0 / 16;
             cfg.dt = 10.0;
             cfg.method = SolveMethod::explicit_euler;
             try {
                 (void)solve(cfg);
             } catch (const CFLViolation&) {
                 d = "CFLViolation";
                 return true;
             }
             d = "no exception";
             return false;
         }},
        {"constant data has undefined Hoelder exponent",
         [&](std::string& d) {
             const auto u = GridFunction<1>::sample(DomainSpec<1>::unit_ball(), 1.0 / 256, [](const Point<1>&) { return 1.0; });
             const auto fit = holder_fit<1>(u, DomainSpec<1>(Ball<1>{{0.0}, 0.5}));
             d = fit.alpha_defined ? "defined" : "undefined";
             return !fit.alpha_defined && fit.seminorm_hat == 0.0;
         }},
        {"barrier at alpha = s is flagged as the boundary case",
         [&](std::string& d) {
             const auto rep = barrier_check<1>(DomainSpec<1>::unit_ball(), 0.6, 0.6, 0.1, 1.0 / 32);
             d = rep.boundary_case ? "flagged" : "not flagged";
             return rep.boundary_case;
         }},
        {"empty threshold sweep is a header-only CSV",
         [&](std::string& d) {
             const auto t = io::threshold_table({});
             d = std::to_string(t.rows()) + " rows";
             return t.rows() == 0 && t.str().find('\n') == t.str().size() - 1;
         }},
        {"repeated Hoelder fits are identical",
         [&](std::string& d) {
             const auto u = GridFunction<2>::sample(DomainSpec<2>::unit_ball(), 1.0 / 64,
                                                    [](const Point<2>& x) { return std::sqrt(norm<2>(x)); });
             const auto region = DomainSpec<2>(Ball<2>{{0.0, 0.0}, 0.5});
             HolderOptions ho;
             ho.seed = run.opt.seed;
             ho.min_scales = 2;
             const auto a = io::holder_table(holder_fit<2>(u, region, ho)).str();
             const auto b = io::holder_table(holder_fit<2>(u, region, ho)).str();
             d = std::to_string(a.size()) + " bytes";
             return a == b;
         }},
    };

    json results = json::array();
    int failed = 0;
    for (const auto& c : checks) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        failed += ok ? 0 : 1;
        std::cout << (ok ? "PASS " : "FAIL ") << c.name << " (" << detail << ")\n";
        results.push_back(json{{"name", c.name}, {"passed", ok}, {"detail", detail}});
    }
    run.write("selftest.json", json{{"checks", results}, {"failed", failed}});
    std::cout << "selftest: " << checks.size() - failed << "/" << checks.size() << " passed\n";
    return failed ? check_failed : 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Directional fractional Isaacs operators: thresholds, evaluation, solver, diagnostics"};
    // --h is the grid spacing, so help is long-form only
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_config("--config", "", "INI/TOML file with flag values; command-line flags override it");
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sc) {
        sc->add_option("--out", o.out, "Output directory")->capture_default_str();
        sc->add_option("--seed", o.seed, "Random seed")->capture_default_str();
        sc->add_option("--tol", o.tol, "Tolerance override");
    };
    auto spatial = [&](CLI::App* sc) {
        sc->add_option("--dim", o.dim, "Space dimension")->capture_default_str();
        sc->add_option("--domain", o.domain, "ball[:R] | box[:L | :lo,hi] | annulus[:rin,rout]")->capture_default_str();
        sc->add_option("--h", o.h, "Grid spacing");
        sc->add_option("--directions", o.directions, "Number of sampled directions");
    };

    auto* th = app.add_subcommand("thresholds", "s0(c), alpha*, eps threshold and profile integrals");
    common(th);
    th->add_option("--c", o.c, "Values of c in (1,2]")->delimiter(',');
    th->add_option("--sweep", o.sweep, "lo,hi,count sweep over c");
    th->add_option("--s", o.s, "Order s in (0,1)");
    th->add_option("--alpha", o.alpha, "Exponent for l(s, alpha)");
    th->add_option("--eps", o.eps, "Exponent for c(eps)");

    auto* op = app.add_subcommand("operator-eval", "Isaacs operator of a closed-form profile at a point");
    common(op);
    spatial(op);
    op->add_option("--s", o.s, "Order s in (0,1)")->required();
    op->add_option("--profile", o.profile, "gaussian | radial-power | supersolution | distance-power");
    op->add_option("--x", o.x, "Evaluation point")->delimiter(',');
    op->add_option("--alpha", o.alpha, "Exponent of radial-power or distance-power");
    op->add_option("--eps", o.eps, "Exponent of the supersolution profile");
    op->add_flag("--normalized", o.normalized, "Include the constant C_s");

    auto* so = app.add_subcommand("solve", "Dirichlet problem I u = f with zero exterior data");
    common(so);
    spatial(so);
    so->add_option("--s", o.s, "Order s in (0,1)")->required();
    so->add_option("--f", o.f, "Constant source")->capture_default_str();
    so->add_option("--preset", o.preset, "disk-f-minus-one | interval-f-minus-one");
    so->add_option("--method", o.method, "multigrid | explicit")->capture_default_str();
    so->add_option("--alpha", o.alpha, "Exponent for the growth quotient sup |u|/d^alpha");
    so->add_flag("--normalized", o.normalized, "Include the constant C_s");

    auto* bc = app.add_subcommand("barrier-check", "Sign of d^(2s-alpha) I d^alpha in the boundary strip");
    common(bc);
    spatial(bc);
    bc->add_option("--s", o.s, "Order s in (0,1)")->required();
    bc->add_option("--alpha", o.alpha, "Barrier exponent in (0, s], default s/2");
    bc->add_option("--mu", o.mu, "Strip width")->capture_default_str();
    bc->add_option("--mode", o.mode, "quadrature | discrete")->capture_default_str();

    auto* hf = app.add_subcommand("holder-fit", "Dyadic-scale Hoelder exponent fit");
    common(hf);
    spatial(hf);
    hf->add_option("--s", o.s, "Order s for --profile solve");
    hf->add_option("--profile", o.profile, "radial-power | solve");
    hf->add_option("--input", o.input, "Solution CSV written by solve (same --dim, --domain, --h)");
    hf->add_option("--alpha", o.alpha, "Exponent of radial-power");
    hf->add_option("--f", o.f, "Constant source for --profile solve")->capture_default_str();
    hf->add_option("--region", o.region, "Radius of the fitting ball")->capture_default_str();

    auto* lv = app.add_subcommand("liouville", "Rescaled Hoelder seminorms over growing balls");
    common(lv);
    lv->add_option("--s", o.s, "Order s in (0,1)")->required();
    lv->add_option("--radii", o.radii, "Ball radii")->delimiter(',');
    lv->add_option("--h", o.h, "Grid spacing, the same for every radius");
    lv->add_option("--directions", o.directions, "Number of sampled directions");
    lv->add_option("--alpha", o.alpha, "Reference exponent, default s/2");
    lv->add_option("--amplitude", o.amplitude, "Source amplitude")->capture_default_str();

    auto* st = app.add_subcommand("selftest", "Closed-form and forced-case checks");
    common(st);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    Run run(o, sub->get_name());
    int status = 0;
    try {
        if (sub == th) status = cmd_thresholds(run);
        else if (sub == op) status = dispatch(o.dim, [&](auto n) { return operator_eval<decltype(n)::value>(run); });
        else if (sub == so) status = cmd_solve(run);
        else if (sub == bc) status = dispatch(o.dim, [&](auto n) { return barrier_cmd<decltype(n)::value>(run); });
        else if (sub == hf) status = dispatch(o.dim, [&](auto n) { return holder_cmd<decltype(n)::value>(run); });
        else if (sub == lv) status = cmd_liouville(run);
        else status = cmd_selftest(run);
        run.manifest(status);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IOError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const BarrierViolation& e) {
        std::cerr << "barrier violation: " << e.what() << "\n";
        return check_failed;
    } catch (const NonConverged& e) {
        std::cerr << "not converged: " << e.what() << "\n";
        return check_failed;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return status;
}
