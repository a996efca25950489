// One PASS/FAIL line per acceptance criterion. `acceptance --only N` runs a
// single criterion; the exit status is nonzero if any selected criterion fails.

#include "isaacs/isaacs.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace isaacs;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

std::string fmt(double x, int digits = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

double uniform(std::mt19937_64& rng, double a, double b) { return a + (b - a) * detail::uniform01(rng); }

// ---------------------------------------------------------------------------

void closed_form_anchor(Outcome& o)
{
    const double e2 = std::abs(eval_h(2.0, 1.0).value + std::log(2.0));
    o.require(e2 < 1e-8, "h_2(1) = -log 2");
    double worst = e2;
    for (double c : {1.2, 1.5, 2.0}) {
        const double exact = (c - 1.0) / c * std::log(c - 1.0) - std::log(c);
        const double err = std::abs(eval_h(c, 1.0).value - exact);
        worst = std::max(worst, err);
        o.require(err < 1e-8, "h_c(1) closed form at c = " + fmt(c));
    }
    o.detail << "max |error| " << fmt(worst, 3);
}

void s0_certificate(Outcome& o)
{
    double widest = 0.0;
    for (int k = 1; k <= 10; ++k) {
        const double c = 1.0 + 0.1 * k;
        const auto b = find_s0(c);
        widest = std::max(widest, b.width());
        o.require(b.root > 0.5 && b.root < 1.0, "s0 in (1/2,1) at c = " + fmt(c));
        o.require(b.certified() && b.f_lo > 0.0 && b.f_hi < 0.0, "sign bracket at c = " + fmt(c));
        o.require(b.width() < 1e-8, "bracket width at c = " + fmt(c));
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 50; ++i) {
            const double s = 0.5 + 0.5 * i / 49.0;
            const double sh = s * eval_h(c, s).value;
            if (!(sh < prev)) {
                o.require(false, "s h_c(s) decreasing at c = " + fmt(c) + ", s = " + fmt(s));
                break;
            }
            prev = sh;
        }
    }
    o.detail << "10 values of c, widest bracket " << fmt(widest, 3);
}

void lemma_l(Outcome& o)
{
    double at_s = 0.0;
    for (double s : {0.6, 0.75, 0.9}) at_s = std::max(at_s, std::abs(eval_l(s, s).value));
    o.require(at_s < 1e-7, "|l(s,s)| < 1e-7");
    std::mt19937_64 rng(20240611);
    int sign_ok = 0;
    double reduced = 0.0;
    for (int i = 0; i < 100; ++i) {
        double s, a;
        do {
            s = uniform(rng, 0.05, 0.95);
            a = uniform(rng, 0.05, 2.0 * s - 0.05);
        } while (std::abs(a - s) <= 1e-3);
        const double l = eval_l(s, a).value;
        const double lr = eval_l_reduced(s, a).value;
        if ((l > 0.0) == (a > s) && l != 0.0) ++sign_ok;
        reduced = std::max(reduced, std::abs(l - lr));
    }
    o.require(sign_ok == 100, "sign(l) = sign(alpha - s) on all pairs");
    o.require(reduced < 1e-8, "reduced form agrees within 1e-8");
    o.detail << "max |l(s,s)| " << fmt(at_s, 3) << ", signs " << sign_ok << "/100, max |l - l_reduced| "
             << fmt(reduced, 3);
}

void g_identities(Outcome& o)
{
    const double r2 = std::sqrt(2.0);
    const std::vector<std::pair<double, double>> pairs{{r2, 0.9}, {1.2, 0.8}};
    for (auto [c, s] : pairs) {
        const double g3 = std::abs(eval_g(c, s, 1e-3).value);
        const double g4 = std::abs(eval_g(c, s, 1e-4).value);
        o.require(g3 < 1e-2 && g4 < 1e-2 && g4 < g3, "g -> 0 at (c,s) = (" + fmt(c) + "," + fmt(s) + ")");
        // Richardson on the one-sided quotient g(a)/a
        const double d1 = eval_g(c, s, 1e-4).value / 1e-4;
        const double d2 = eval_g(c, s, 5e-5).value / 5e-5;
        const double slope = 2.0 * d2 - d1;
        const double target = 0.5 * eval_h(c * c > 2.0 ? 2.0 : c * c, s).value;
        o.require(std::abs(slope - target) < 1e-3, "right derivative at (" + fmt(c) + "," + fmt(s) + ")");
        o.detail << "slope(" << fmt(c, 4) << "," << s << ") " << fmt(slope) << " vs " << fmt(target) << "; ";
        const double step = 0.01;
        for (double a = 0.05; a <= 0.75 + 1e-12; a += 0.05) {
            const double dd = eval_g(c, s, a + step).value + eval_g(c, s, a - step).value - 2.0 * eval_g(c, s, a).value;
            if (!(dd > 0.0)) {
                o.require(false, "convexity at alpha = " + fmt(a));
                break;
            }
        }
    }
    const double g1 = eval_g(r2, 0.95, 1.0).value;
    o.require(g1 > 0.0, "g_sqrt2(1) > 0 at s = 0.95");
    o.detail << "g_sqrt2(1) at s=0.95 " << fmt(g1);
}

double angle_between(const Point<2>& a, const Point<2>& b)
{
    // directions are defined up to sign
    return std::acos(std::min(1.0, std::abs(dot<2>(a, b)) / (norm<2>(a) * norm<2>(b))));
}

void extremal_directions(Outcome& o)
{
    constexpr int M = 64;
    const double cell = std::numbers::pi / M;
    OperatorOptions oo;
    oo.directions = M;
    oo.refine = false;
    std::mt19937_64 rng(7);
    const Point<2> y0{0.1, -0.2};
    const RadialPower<2> concave{y0, 0.5};
    const Supersolution<2> convex{0.02};
    int concave_ok = 0, convex_ok = 0;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double r = uniform(rng, 0.2, 1.0), th = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        const Point<2> x{y0[0] + r * std::cos(th), y0[1] + r * std::sin(th)};
        const Point<2> radial = x - y0;
        const Point<2> tangential{-radial[1], radial[0]};
        const auto e = isaacs_operator<2>(concave, x, 0.6, oo);
        const double amin = angle_between(e.samples[e.argmin].direction.vec(), radial);
        const double amax = angle_between(e.samples[e.argmax].direction.vec(), tangential);
        worst = std::max({worst, amin, amax});
        if (amin <= cell * (1 + 1e-9) && amax <= cell * (1 + 1e-9)) ++concave_ok;

        const Point<2> z{uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
        const Point<2> zt{-z[1], z[0]};
        const auto f = isaacs_operator<2>(convex, z, 0.9, oo);
        const double bmin = angle_between(f.samples[f.argmin].direction.vec(), zt);
        const double bmax = angle_between(f.samples[f.argmax].direction.vec(), z);
        if (bmin <= cell * (1 + 1e-9) && bmax <= cell * (1 + 1e-9)) ++convex_ok;
    }
    o.require(concave_ok == 20, "|x-y0|^0.5: argmin radial, argmax tangential");
    o.require(convex_ok == 20, "(1+|x|)^-eps: argmin tangential, argmax radial");
    o.detail << "|x-y0|^0.5 (argmin radial, argmax tangential) " << concave_ok << "/20, max angle "
             << fmt(worst / cell, 3) << " cells; (1+|x|)^-eps (argmin tangential, argmax radial) " << convex_ok
             << "/20";
}

void supersolution(Outcome& o)
{
    const double s = 0.9;
    const auto b = find_eps_threshold(s);
    o.require(b.root > 0.0 && b.certified(), "certified eps threshold at s = 0.9");
    const double eps = 0.5 * b.root;
    const auto ce = eval_supersolution_constant(s, eps);
    const Supersolution<2> u{eps};
    OperatorOptions oo;
    oo.normalized = true;
    std::mt19937_64 rng(11);
    int nonpos = 0, below = 0;
    double worst_gap = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20; ++i) {
        const double r = uniform(rng, 0.05, 5.0), th = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        const Point<2> x{r * std::cos(th), r * std::sin(th)};
        const auto e = isaacs_operator<2>(u, x, s, oo);
        const double bound = ce.value * std::pow(1.0 + r, -eps - 2.0 * s);
        const double tol = 10.0 * (e.quadrature_error + ce.error_estimate) + 1e-9;
        if (e.value <= 0.0) ++nonpos;
        if (e.value <= bound + tol) ++below;
        worst_gap = std::max(worst_gap, e.value - bound);
    }
    o.require(nonpos == 20, "I u <= 0");
    o.require(below == 20, "I u <= c(eps)(1+|x|)^(-eps-2s) + tol");
    const double e8 = find_eps_threshold(0.8).root, e99 = find_eps_threshold(0.99).root;
    o.require(e99 < e8, "eps(0.99) < eps(0.8)");
    o.detail << "eps(0.9) " << fmt(b.root) << ", I u <= 0 at " << nonpos << "/20, bound at " << below
             << "/20 (max I u - bound " << fmt(worst_gap, 3) << "), eps(0.8) " << fmt(e8) << " > eps(0.99) "
             << fmt(e99);
}

void barrier(Outcome& o)
{
    const auto ball = DomainSpec<2>::unit_ball();
    const double s = 0.8, alpha = 0.4, mu = 0.1;
    BarrierOptions bo;
    bo.strict = false;
    double m[2];
    int k = 0;
    for (double h : {1.0 / 32, 1.0 / 64}) {
        const auto rep = barrier_check<2>(ball, s, alpha, mu, h, bo);
        o.require(rep.all_negative && !rep.nodes.empty(), "all strip products negative at h = " + fmt(h));
        o.require(rep.m_hat > 0.0, "m_hat > 0 at h = " + fmt(h));
        m[k++] = rep.m_hat;
        o.detail << "h=" << fmt(h) << ": " << rep.nodes.size() << " nodes, m_hat " << fmt(rep.m_hat) << "; ";
    }
    o.require(std::abs(m[1] / m[0] - 1.0) <= 0.2, "m_hat stable within 20% under halving");
    const auto lim = extremal_limit_check<2>(ball, s, alpha, {1.0, 0.0}, Direction<2>::axis(0), 1e-3);
    const double l = eval_l(s, alpha).value;
    o.require(std::abs(lim.estimate - l) <= 0.02 * std::abs(l), "normal limit within 2% of l(0.8,0.4)");
    o.detail << "normal limit " << fmt(lim.estimate) << " vs l " << fmt(l);
}

void local_limit(Outcome& o)
{
    const Gaussian<2> g;
    OperatorOptions oo;
    oo.normalized = true;
    std::mt19937_64 rng(3);
    int ok = 0;
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double r = 0.5 * std::sqrt(detail::uniform01(rng)), th = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        const Point<2> x{r * std::cos(th), r * std::sin(th)};
        const auto H = g.hessian(x);
        const double tr = H[0][0] + H[1][1];
        const double disc = std::sqrt(0.25 * (H[0][0] - H[1][1]) * (H[0][0] - H[1][1]) + H[0][1] * H[1][0]);
        const double target = (0.5 * tr - disc) + (0.5 * tr + disc);
        const double v = isaacs_operator<2>(g, x, 0.99, oo).value;
        const double rel = std::abs(v - target) / std::abs(target);
        worst = std::max(worst, rel);
        if (rel <= 0.1) ++ok;
    }
    o.require(ok == 10, "within 10% at all points");
    o.detail << ok << "/10 points, max relative error " << fmt(worst, 3);
}

void solver_oracle(Outcome& o)
{
    const DomainSpec<1> iv = DomainSpec<1>::unit_ball();
    for (double s : {0.5, 0.9}) {
        const double amp = normalizing_constant(s) / (2.0 * std::tgamma(1.0 + 2.0 * s));
        double prev = std::numeric_limits<double>::infinity();
        o.detail << "s=" << s << ":";
        for (int n : {64, 128, 256}) {
            SolveConfig<1> cfg;
            cfg.s = s;
            cfg.domain = iv;
            cfg.h = 1.0 / n;
            cfg.tol = 1e-10;
            cfg.f = [](const Point<1>&) { return -1.0; };
            const auto rep = solve(cfg);
            o.require(rep.converged, "solver converged at h = 1/" + std::to_string(n));
            double err = 0.0, top = 0.0;
            for (std::size_t k = 0; k < rep.solution.size(); ++k) {
                if (!rep.solution.inside(k)) continue;
                const double x = rep.solution.grid().position(k)[0];
                const double exact = amp * std::pow(1.0 - x * x, s);
                err = std::max(err, std::abs(rep.solution[k] - exact));
                top = std::max(top, exact);
            }
            const double rel = err / top;
            o.require(rel < prev, "error decreases at h = 1/" + std::to_string(n));
            prev = rel;
            o.detail << " " << fmt(rel, 3);
        }
        o.require(prev < 0.05, "relative sup error < 5% at h = 1/256, s = " + fmt(s));
        o.detail << "; ";
    }
    SolveConfig<1> zero;
    zero.h = 1.0 / 256;
    const auto rep = solve(zero);
    o.require(rep.solution.sup_norm() == 0.0, "f = 0 gives exactly 0");
    o.detail << "f=0 sup " << rep.solution.sup_norm();
}

void global_growth(Outcome& o)
{
    const double s = 0.9;
    std::vector<double> g;
    for (int n : {64, 128, 256}) {
        SolveConfig<2> cfg;
        cfg.s = s;
        cfg.h = 1.0 / n;
        cfg.f = [](const Point<2>&) { return -1.0; };
        if (n >= 128) cfg.pre_smooth = cfg.post_smooth = 3;
        const auto rep = solve(cfg);
        o.require(rep.converged, "solver converged at h = 1/" + std::to_string(n));
        g.push_back(verify_boundary_growth(rep, 0.5 * s));
        o.require(std::isfinite(g.back()), "finite ratio at h = 1/" + std::to_string(n));
        o.detail << "h=1/" << n << ": " << fmt(g.back()) << " ";
    }
    for (double x : g) o.require(std::abs(x / g.back() - 1.0) <= 0.2, "ratio within 20% across h");
}

void holder_liouville(Outcome& o)
{
    // synthetic |x|^(1/2)
    const auto line = GridFunction<1>::sample(DomainSpec<1>::unit_ball(), 1.0 / 1024,
                                              [](const Point<1>& x) { return std::sqrt(std::abs(x[0])); });
    const auto f1 = holder_fit<1>(line, DomainSpec<1>(Ball<1>{{0.0}, 0.5}));
    o.require(f1.alpha_defined && std::abs(f1.alpha_hat - 0.5) <= 0.05, "|x|^1/2 in 1-D gives 0.5 +- 0.05");
    const auto disk = GridFunction<2>::sample(DomainSpec<2>::unit_ball(), 1.0 / 256,
                                              [](const Point<2>& x) { return std::sqrt(norm<2>(x)); });
    const auto f2 = holder_fit<2>(disk, DomainSpec<2>(Ball<2>{{0.0, 0.0}, 0.5}));
    o.require(f2.alpha_defined && std::abs(f2.alpha_hat - 0.5) <= 0.05, "|x|^1/2 in 2-D gives 0.5 +- 0.05");
    o.detail << "|x|^1/2: " << fmt(f1.alpha_hat, 4) << " (1-D), " << fmt(f2.alpha_hat, 4) << " (2-D); ";

    // disk solution at s = 0.95
    std::vector<double> alphas;
    for (int n : {128, 256}) {
        SolveConfig<2> cfg;
        cfg.s = 0.95;
        cfg.h = 1.0 / n;
        cfg.f = [](const Point<2>&) { return -1.0; };
        cfg.pre_smooth = cfg.post_smooth = 3;
        const auto rep = solve(cfg);
        o.require(rep.converged, "s=0.95 solver converged at h = 1/" + std::to_string(n));
        const auto fit = holder_fit<2>(rep.solution, DomainSpec<2>::unit_ball());
        o.require(fit.alpha_defined && fit.alpha_hat > 0.0, "alpha_hat > 0 at h = 1/" + std::to_string(n));
        alphas.push_back(fit.alpha_hat);
    }
    o.require(std::abs(alphas[1] - alphas[0]) <= 0.05, "alpha_hat stable within 0.05 under refinement");
    o.detail << "disk s=0.95 alpha_hat " << fmt(alphas[0], 4) << " (h=1/128), " << fmt(alphas[1], 4)
             << " (h=1/256); ";

    // Liouville rescaling
    const auto tab = liouville_experiment(0.9, {1.0, 2.0, 4.0, 8.0});
    for (const auto& r : tab.rows) o.require(r.converged, "Liouville solve converged at R = " + fmt(r.R));
    o.require(tab.monotone_decay, "seminorms decay monotonically in R");
    o.detail << "Liouville seminorms";
    for (const auto& r : tab.rows) o.detail << " " << fmt(r.seminorm, 4);
    o.detail << ", decay exponent " << fmt(tab.decay_exponent, 3);
}

struct Criterion {
    int id;
    const char* title;
    std::function<void(Outcome&)> run;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> all{
        {1, "closed-form anchor h_c(1)", closed_form_anchor},
        {2, "s0 certificate and monotone s h_c(s)", s0_certificate},
        {3, "sign of l(alpha) at alpha = s", lemma_l},
        {4, "g_c limit, slope, positivity and convexity", g_identities},
        {5, "extremal directions", extremal_directions},
        {6, "supersolution (1+|x|)^-eps", supersolution},
        {7, "boundary barrier d^alpha", barrier},
        {8, "local limit s -> 1", local_limit},
        {9, "1-D solver oracle", solver_oracle},
        {10, "global growth sup |u|/d^(s/2)", global_growth},
        {11, "Hoelder fit and Liouville decay", holder_liouville},
    };
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--only N]\n";
            return 2;
        }
    }
    int failed = 0, ran = 0;
    for (const auto& c : all) {
        if (only && c.id != only) continue;
        ++ran;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "[exception: " << e.what() << "]";
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += o.pass ? 0 : 1;
        std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.title << "  ("
                  << o.detail.str() << ") [" << fmt(sec, 3) << " s]" << std::endl;
    }
    if (!ran) {
        std::cerr << "no criterion " << only << "\n";
        return 2;
    }
    return failed ? 1 : 0;
}
