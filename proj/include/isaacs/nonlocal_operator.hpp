#ifndef ISAACS_NONLOCAL_OPERATOR_HPP
#define ISAACS_NONLOCAL_OPERATOR_HPP

#include "isaacs/discrete_operator.hpp"
#include "isaacs/errors.hpp"
#include "isaacs/geometry.hpp"
#include "isaacs/grid.hpp"
#include "isaacs/kernel.hpp"
#include "isaacs/profiles.hpp"
#include "isaacs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace isaacs {

using quad::IntegralResult;
using quad::QuadratureSpec;

/// u(x+y) + u(x-y) - 2u(x)
template <int N, class U>
double second_difference(const U& u, const Point<N>& x, const Point<N>& y)
{
    if constexpr (HasSecondDifference<U, N>) {
        return u.second_difference(x, y);
    } else {
        return u(x + y) + u(x - y) - 2.0 * u(x);
    }
}

template <int N>
double second_difference(const GridFunction<N>& u, const Point<N>& x, const Point<N>& y)
{
    return u.value_at(x + y) + u.value_at(x - y) - 2.0 * u.value_at(x);
}

namespace detail {

/// int_0^upper of the raw second difference with the small-tau fit.
template <int N, class U>
IntegralResult directional_operator_finite(const U& u, const Point<N>& x, const Direction<N>& xi, double s,
                                           const QuadratureSpec& spec, double first_kink, double upper)
{
    const auto& v = xi.vec();
    const double ux = u(x);
    auto raw = [&](double t) { return u(x + t * v) + u(x - t * v) - 2.0 * ux; };
    const double tc = 1e-3 * std::min(1.0, std::isfinite(first_kink) ? 0.25 * first_kink : 1.0);
    const double g1 = raw(tc) / (tc * tc);
    const double g2 = raw(2.0 * tc) / (4.0 * tc * tc);
    const double B = (g2 - g1) / (3.0 * tc * tc);
    const double A = g1 - B * tc * tc;
    auto delta = [&](double t) {
        if (t < tc) return t * t * (A + B * t * t);
        return raw(t);
    };
    return quad::integrate_singular(delta, 0.0, upper, 1.0 + 2.0 * s, spec);
}

} // namespace detail

/// I_xi u(x) = int_0^inf delta(u, x, tau xi) tau^(-1-2s) dtau for a closed-form u.
///
/// Non-smooth points of tau -> delta come from u.kinks and become panel
/// breaks. Without an exact second_difference, delta/tau^2 is replaced
/// below tau_c by the even fit A + B tau^2 through tau_c and 2 tau_c, which
/// removes the rounding noise of the raw three-point difference.
template <int N, class U>
IntegralResult directional_operator(const U& u, const Point<N>& x, const Direction<N>& xi, double s,
                                    QuadratureSpec spec = QuadratureSpec::sweep(), bool normalized = false)
{
    if (!(s > 0.0 && s < 1.0)) throw DomainError("order s must lie in (0,1)");
    if constexpr (HasTouchable<U, N>)
        if (!u.touchable(x)) throw SingularityAtPoint("profile is not touchable at the evaluation point");

    std::vector<double> kinks;
    if constexpr (HasKinks<U, N>) kinks = u.kinks(x, xi);
    double first_kink = std::numeric_limits<double>::infinity();
    for (double t : kinks) {
        first_kink = std::min(first_kink, t);
        spec.singular_split.push_back(t);
    }
    if (!kinks.empty()) spec.tail_cutoff = std::max(spec.tail_cutoff, 2.0 * kinks.back() + 1.0);
    if (std::isfinite(first_kink)) spec.head_width = std::min(spec.head_width, 0.5 * first_kink);

    const auto& v = xi.vec();
    const double inf = std::numeric_limits<double>::infinity();
    IntegralResult r;
    if constexpr (HasFarDecay<U>) {
        // slowly decaying (or growing) profiles: the constant -2u(x) part of
        // the tail is exact, the rest is mapped with its own decay rate
        const double gamma = u.far_decay();
        if (!(2.0 * s + gamma > 0.0)) throw DomainError("profile grows too fast for the kernel");
        double T = spec.tail_cutoff;
        if (!kinks.empty()) T = std::max(T, 2.0 * kinks.back() + 1.0);
        auto sub = detail::directional_operator_finite<N>(u, x, xi, s, spec, first_kink, T);
        const double ux = u(x);
        auto far = [&](double t) { return (u(x + t * v) + u(x - t * v)) * std::pow(t, gamma); };
        r = sub + quad::integrate_tail(far, T, 2.0 * s + gamma, spec);
        r += -2.0 * ux * std::pow(T, -2.0 * s) / (2.0 * s);
    } else if constexpr (HasSecondDifference<U, N>) {
        auto delta = [&](double t) { return u.second_difference(x, t * v); };
        r = quad::integrate_singular(delta, 0.0, inf, 1.0 + 2.0 * s, spec);
    } else {
        r = detail::directional_operator_finite<N>(u, x, xi, s, spec, first_kink, inf);
    }
    if (normalized) r = normalizing_constant(s) * r;
    return r;
}

/// I_xi of a grid function through the discrete stencil (zero exterior data).
template <int N>
double directional_operator(const GridFunction<N>& u, const Point<N>& x, const Direction<N>& xi, double s,
                            StencilOptions opt = {})
{
    const double near = opt.near_scale > 0.0 ? opt.near_scale : (N == 1 ? 1.0 : 2.0);
    const TauRule rule = make_tau_rule(s, u.h(), near, opt.rho, u.domain().diameter(), opt.normalized);
    double S = 0.0;
    for (std::size_t k = 0; k < rule.tau.size(); ++k) {
        const Point<N> d = rule.tau[k] * xi.vec();
        S += rule.weight[k] * (u.interpolate(x + d) + u.interpolate(x - d));
    }
    return S - rule.diagonal * u.interpolate(x);
}

template <int N>
struct DirectionSample {
    Direction<N> direction;
    double value;
};

template <int N>
struct OperatorEvaluation {
    double value = 0.0;
    double inf_part = 0.0;
    double sup_part = 0.0;
    Direction<N> minimizing_direction;
    Direction<N> maximizing_direction;
    /// Index into `samples` of the discrete extrema, before refinement.
    int argmin = 0;
    int argmax = 0;
    std::vector<DirectionSample<N>> samples;
    /// The mapped tail is exact, so there is no truncation term.
    double truncation_error = 0.0;
    double quadrature_error = 0.0;
};

struct OperatorOptions {
    /// 0 picks 64 for N = 2 and 512 for N = 3.
    int directions = 0;
    QuadratureSpec spec = QuadratureSpec::sweep();
    bool normalized = false;
    /// Local search around the discrete extrema.
    bool refine = true;
};

namespace detail {

/// Golden-section search for the minimum of f on [a, b].
template <class F>
std::pair<double, double> golden_min(const F& f, double a, double b, double tol)
{
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

template <int N>
std::array<Point<N>, 2> tangent_frame(const Point<N>& v)
{
    static_assert(N == 3);
    Point<N> a{1.0, 0.0, 0.0};
    if (std::abs(v[0]) > 0.9) a = {0.0, 1.0, 0.0};
    const double p = dot<N>(a, v);
    Point<N> t1 = a - p * v;
    t1 = (1.0 / norm<N>(t1)) * t1;
    Point<N> t2{v[1] * t1[2] - v[2] * t1[1], v[2] * t1[0] - v[0] * t1[2], v[0] * t1[1] - v[1] * t1[0]};
    return {t1, t2};
}

} // namespace detail

/// I u(x) = inf_xi I_xi u(x) + sup_xi I_xi u(x).
template <int N, class U>
OperatorEvaluation<N> isaacs_operator(const U& u, const Point<N>& x, double s, const OperatorOptions& opt = {})
{
    OperatorEvaluation<N> ev;
    const int M = opt.directions > 0 ? opt.directions : (N == 2 ? 64 : 512);
    const auto dirs = direction_grid<N>(M);

    double err_min = 0.0, err_max = 0.0;
    auto eval = [&](const Direction<N>& d) { return directional_operator<N>(u, x, d, s, opt.spec, opt.normalized); };

    ev.inf_part = std::numeric_limits<double>::infinity();
    ev.sup_part = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        const auto r = eval(dirs[j]);
        ev.samples.push_back({dirs[j], r.value});
        if (r.value < ev.inf_part) {
            ev.inf_part = r.value;
            ev.argmin = static_cast<int>(j);
            err_min = r.error_estimate;
        }
        if (r.value > ev.sup_part) {
            ev.sup_part = r.value;
            ev.argmax = static_cast<int>(j);
            err_max = r.error_estimate;
        }
    }
    ev.minimizing_direction = dirs[ev.argmin];
    ev.maximizing_direction = dirs[ev.argmax];

    if constexpr (N == 1) {
        ev.value = 2.0 * ev.inf_part;
        ev.quadrature_error = 2.0 * err_min;
        return ev;
    }

    if (opt.refine) {
        if constexpr (N == 2) {
            const double cell = std::numbers::pi / M;
            auto refine = [&](int j, double sign, double& best, Direction<N>& arg, double& err) {
                const double th = cell * j;
                auto f = [&](double t) { return sign * eval(Direction<2>::angle(t)).value; };
                const auto [t, v] = detail::golden_min(f, th - cell, th + cell, 1e-4 * cell);
                if (sign * v < sign * best) {
                    best = sign * v;
                    arg = Direction<2>::angle(t);
                    err = eval(arg).error_estimate;
                }
            };
            refine(ev.argmin, 1.0, ev.inf_part, ev.minimizing_direction, err_min);
            refine(ev.argmax, -1.0, ev.sup_part, ev.maximizing_direction, err_max);
        } else if constexpr (N == 3) {
            // compass search on the sphere, step starting at the point spacing
            auto refine = [&](double sign, double& best, Direction<N>& arg, double& err) {
                double step = std::sqrt(4.0 * std::numbers::pi / M);
                double fbest = sign * best;
                while (step > 1e-4) {
                    bool moved = false;
                    const auto frame = detail::tangent_frame<N>(arg.vec());
                    for (const auto& t : frame)
                        for (double sg : {1.0, -1.0}) {
                            const Direction<N> cand(arg.vec() + (sg * step) * t);
                            const auto r = eval(cand);
                            if (sign * r.value < fbest) {
                                fbest = sign * r.value;
                                arg = cand;
                                err = r.error_estimate;
                                moved = true;
                            }
                        }
                    if (!moved) step *= 0.5;
                }
                best = sign * fbest;
            };
            refine(1.0, ev.inf_part, ev.minimizing_direction, err_min);
            refine(-1.0, ev.sup_part, ev.maximizing_direction, err_max);
        }
    }
    ev.value = ev.inf_part + ev.sup_part;
    ev.quadrature_error = err_min + err_max;
    return ev;
}

/// Full operator of a grid function at an arbitrary point, with the discrete stencil.
template <int N>
OperatorEvaluation<N> isaacs_operator(const GridFunction<N>& u, const Point<N>& x, double s, StencilOptions opt = {})
{
    OperatorEvaluation<N> ev;
    const auto dirs = direction_grid<N>(opt.directions);
    ev.inf_part = std::numeric_limits<double>::infinity();
    ev.sup_part = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        const double v = directional_operator<N>(u, x, dirs[j], s, opt);
        ev.samples.push_back({dirs[j], v});
        if (v < ev.inf_part) {
            ev.inf_part = v;
            ev.argmin = static_cast<int>(j);
        }
        if (v > ev.sup_part) {
            ev.sup_part = v;
            ev.argmax = static_cast<int>(j);
        }
    }
    ev.minimizing_direction = dirs[ev.argmin];
    ev.maximizing_direction = dirs[ev.argmax];
    ev.value = N == 1 ? 2.0 * ev.inf_part : ev.inf_part + ev.sup_part;
    return ev;
}

template <int N>
double distance_power(const DomainSpec<N>& domain, double alpha, const Point<N>& x)
{
    const double d = domain.distance(x);
    return d > 0.0 ? std::pow(d, alpha) : 0.0;
}

struct RatioLimit {
    std::vector<double> distances;
    std::vector<double> ratios;
    /// Richardson extrapolation of the last two ratios.
    double limit = 0.0;
    /// (1 + tau nu.xi)_+
    double expected = 0.0;
};

/// d(x_n + d(x_n) tau xi) / d(x_n) along x_n = xbar + d_n nu, d_n = d0 2^-n.
template <int N>
RatioLimit boundary_ratio_limit(const DomainSpec<N>& domain, const Point<N>& xbar, const Direction<N>& xi, double tau,
                                int levels = 12, double d0 = 0.1)
{
    const Direction<N> nu = domain.inner_normal(xbar);
    RatioLimit out;
    double dn = d0;
    for (int n = 0; n < levels; ++n, dn *= 0.5) {
        const Point<N> xn = xbar + dn * nu.vec();
        const double d = domain.distance(xn);
        const double r = domain.distance(xn + (d * tau) * xi.vec()) / d;
        out.distances.push_back(d);
        out.ratios.push_back(r);
    }
    const auto& r = out.ratios;
    out.limit = r.size() >= 2 ? 2.0 * r.back() - r[r.size() - 2] : r.back();
    out.expected = std::max(0.0, 1.0 + tau * dot<N>(nu.vec(), xi.vec()));
    return out;
}

} // namespace isaacs

#endif
