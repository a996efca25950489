#ifndef ISAACS_THRESHOLDS_HPP
#define ISAACS_THRESHOLDS_HPP

// Scalar special functions built from the kernel t^(-1-2s):
//
//   h_c(s)    = int_0^c log|1-t^2| t^(-1-s) + int_c^inf log(1+t) t^(-1-s)
//   l(a)      = int_0^inf ((1+t)^a + (1-t)_+^a - 2) t^(-1-2s)
//   g_c(a)    = int_0^c (|1+t|^a + |1-t|^a - 2) t^(-1-2s)
//               + 2 int_0^inf ((1+t^2)^(a/2) - 1) t^(-1-2s)
//   c(eps)    = C_s [ int_0^inf (|1+t|^-eps + |1-t|^-eps - 2) t^(-1-2s)
//                     + 2 int_0^inf ((1+t^2)^(-eps/2) - 1) t^(-1-2s) ]
//
// Numerators are written with expm1/log1p so that the O(t^2) behaviour at
// t = 0 survives division by the kernel. Growing tails are factored as
// t^k (1 + 1/t)^k and integrated with the mapped tail rule.

#include "isaacs/errors.hpp"
#include "isaacs/kernel.hpp"
#include "isaacs/quadrature.hpp"
#include "isaacs/roots.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace isaacs {

using quad::IntegralResult;
using quad::QuadratureSpec;

namespace detail {

/// log|1 - t^2| without cancellation at t -> 0 or t -> 1.
inline double log_abs_one_minus_sq(double t)
{
    if (t < 0.5) return std::log1p(-t * t);
    return std::log(std::abs((1.0 - t) * (1.0 + t)));
}

/// log|1 - t| for t >= 0.
inline double log_abs_one_minus(double t)
{
    return t < 1.0 ? std::log1p(-t) : std::log(t - 1.0);
}

/// |1+t|^a + |1-t|^a - 2 for t >= 0.
inline double symmetric_power_difference(double t, double a)
{
    if (t < 1.0) {
        // (1+t)^a + (1-t)^a = 2 e^m cosh(d) with both m and d free of cancellation
        const double m = 0.5 * a * std::log1p(-t * t);
        const double d = a * std::atanh(t);
        const double sh = std::sinh(0.5 * d);
        return 2.0 * (std::expm1(m) * std::cosh(d) + 2.0 * sh * sh);
    }
    return std::expm1(a * std::log1p(t)) + std::expm1(a * log_abs_one_minus(t));
}

inline QuadratureSpec with_split(QuadratureSpec q, double point)
{
    q.singular_split = {point};
    if (q.tail_cutoff <= point) q.tail_cutoff = 2.0 * point + 1.0;
    return q;
}

inline void require(bool ok, const std::string& what)
{
    if (!ok) throw DomainError(what);
}

} // namespace detail

inline IntegralResult eval_h(double c, double s, const QuadratureSpec& spec = QuadratureSpec::thresholds())
{
    detail::require(c > 1.0 && c <= 2.0, "eval_h: c must lie in (1,2]");
    detail::require(s >= 0.5 && s <= 1.0, "eval_h: s must lie in [1/2,1]");
    auto near = quad::integrate_singular(detail::log_abs_one_minus_sq, 0.0, c, 1.0 + s,
                                         detail::with_split(spec, 1.0));
    auto far = quad::integrate_tail([](double t) { return std::log1p(t); }, c, s, spec);
    return near + far;
}

/// Closed forms of h_c at the ends of [1/2, 1].
inline double h_closed_form_at_one(double c)
{
    return (c - 1.0) / c * std::log(c - 1.0) - std::log(c);
}

inline double h_closed_form_at_half(double c)
{
    const double r = std::sqrt(c);
    return 2.0 * (std::numbers::pi + (r - 1.0) / r * std::log(r - 1.0) -
                  (r + 1.0) / r * std::log(r + 1.0));
}

inline RootBracket find_s0(double c, const QuadratureSpec& spec = QuadratureSpec::thresholds())
{
    detail::require(c > 1.0 && c <= 2.0, "find_s0: c must lie in (1,2]");
    return bisect([&](double s) { return eval_h(c, s, spec); }, 0.5, 1.0, 1e-11);
}

inline IntegralResult eval_l(double s, double alpha,
                             const QuadratureSpec& spec = QuadratureSpec::thresholds())
{
    detail::require(s > 0.0 && s < 1.0, "eval_l: s must lie in (0,1)");
    detail::require(alpha > 0.0 && alpha < 2.0 * s, "eval_l: alpha must lie in (0,2s)");
    auto inner = quad::integrate_singular(
        [alpha](double t) { return detail::symmetric_power_difference(t, alpha); }, 0.0, 1.0,
        1.0 + 2.0 * s, spec);
    // int_1^inf ((1+t)^a - 2) t^(-1-2s) = int_1^inf (1+1/t)^a t^(a-1-2s) - 1/s
    auto outer = quad::integrate_tail(
        [alpha](double t) { return std::exp(alpha * std::log1p(1.0 / t)); }, 1.0,
        2.0 * s - alpha, spec);
    auto r = inner + outer;
    r += -1.0 / s;
    return r;
}

inline IntegralResult eval_l_reduced(double s, double alpha,
                                     const QuadratureSpec& spec = QuadratureSpec::thresholds())
{
    detail::require(s > 0.0 && s < 1.0, "eval_l_reduced: s must lie in (0,1)");
    detail::require(alpha > 0.0 && alpha < 2.0 * s, "eval_l_reduced: alpha must lie in (0,2s)");
    const double a1 = alpha - 1.0;
    const double a2 = 2.0 * s - alpha - 1.0;
    auto inner = quad::integrate_singular(
        [a1, a2](double t) {
            const double L = std::log1p(t);
            return std::expm1(a1 * L) - std::expm1(a2 * L);
        },
        0.0, 1.0, 2.0 * s, spec);
    auto tail1 = quad::integrate_tail(
        [a1](double t) { return std::exp(a1 * std::log1p(1.0 / t)); }, 1.0, 2.0 * s - alpha, spec);
    auto tail2 = quad::integrate_tail(
        [a2](double t) { return std::exp(a2 * std::log1p(1.0 / t)); }, 1.0, alpha, spec);
    return (alpha / (2.0 * s)) * (inner + tail1 - tail2);
}

inline IntegralResult eval_g(double c, double s, double alpha,
                             const QuadratureSpec& spec = QuadratureSpec::thresholds())
{
    detail::require(c > 1.0 && c <= std::sqrt(2.0) * (1.0 + 1e-15), "eval_g: c must lie in (1,sqrt 2]");
    detail::require(s > 0.5 && s < 1.0, "eval_g: s must lie in (1/2,1)");
    detail::require(alpha > 0.0 && alpha < 2.0 * s, "eval_g: alpha must lie in (0,2s)");
    auto first = quad::integrate_singular(
        [alpha](double t) { return detail::symmetric_power_difference(t, alpha); }, 0.0, c,
        1.0 + 2.0 * s, detail::with_split(spec, 1.0));
    const double T = 2.0;
    auto second_near = quad::integrate_singular(
        [alpha](double t) { return std::expm1(0.5 * alpha * std::log1p(t * t)); }, 0.0, T,
        1.0 + 2.0 * s, spec);
    // (1+t^2)^(a/2) - 1 = t^a (1 + t^-2)^(a/2) - 1
    auto second_far = quad::integrate_tail(
        [alpha](double t) { return std::exp(0.5 * alpha * std::log1p(1.0 / (t * t))); }, T,
        2.0 * s - alpha, spec);
    second_far += -std::pow(T, -2.0 * s) / (2.0 * s);
    return first + 2.0 * (second_near + second_far);
}

inline IntegralResult eval_g_right_derivative_at_zero(double c, double s,
                                                      const QuadratureSpec& spec = QuadratureSpec::thresholds())
{
    double c2 = c * c;
    // sqrt(2)^2 rounds just above 2
    if (c2 > 2.0 && c2 < 2.0 + 1e-12) c2 = 2.0;
    detail::require(c2 > 1.0 && c2 <= 2.0, "eval_g_right_derivative_at_zero: c^2 must lie in (1,2]");
    return 0.5 * eval_h(c2, s, spec);
}

inline RootBracket find_alpha_star(double c, double s,
                                   const QuadratureSpec& spec = QuadratureSpec::thresholds())
{
    detail::require(s > 0.5 && s < 1.0, "find_alpha_star: s must lie in (1/2,1)");
    const auto slope = eval_g_right_derivative_at_zero(c, s, spec);
    if (slope.value >= 0.0)
        throw NoRoot("find_alpha_star: right derivative at 0 is nonnegative (s <= s0(c^2))");
    auto g = [&](double a) { return eval_g(c, s, a, spec); };
    const double amax = std::min(1.0, 2.0 * s - 1.0);
    double a = 1e-4;
    auto ga = g(a);
    // a very shallow slope can put the root below the first scan point
    while (ga.value >= 0.0 && a > 1e-12) {
        a *= 0.5;
        ga = g(a);
    }
    if (ga.value >= 0.0) throw NoRoot("find_alpha_star: g_c is not negative near 0");
    double prev = a;
    while (true) {
        const double next = std::min(2.0 * prev, amax);
        const auto gn = g(next);
        if (gn.value > 0.0) return bisect(g, prev, next, 1e-11);
        if (next >= amax)
            throw NoRoot("find_alpha_star: no sign change of g_c in (0, min(1,2s-1)]");
        prev = next;
    }
}

/// The constant c(eps) attached to the profile (1+|x|)^-eps, including C_s.
inline IntegralResult eval_supersolution_constant(double s, double eps,
                                                  const QuadratureSpec& spec = QuadratureSpec::thresholds())
{
    detail::require(s > 0.0 && s < 1.0, "eval_supersolution_constant: s must lie in (0,1)");
    detail::require(eps >= 0.0 && eps < std::min(1.0, 2.0 * s),
                    "eval_supersolution_constant: eps must lie in [0, min(1,2s))");
    if (eps == 0.0) return {};
    const double T = 2.0;
    auto a_near = quad::integrate_singular(
        [eps](double t) { return detail::symmetric_power_difference(t, -eps); }, 0.0, T,
        1.0 + 2.0 * s, detail::with_split(spec, 1.0));
    // |1+t|^-e + |1-t|^-e = t^-e ((1+1/t)^-e + (1-1/t)^-e) for t > 1
    auto a_far = quad::integrate_tail(
        [eps](double t) {
            return std::exp(-eps * std::log1p(1.0 / t)) + std::exp(-eps * std::log1p(-1.0 / t));
        },
        T, 2.0 * s + eps, spec);
    a_far += -2.0 * std::pow(T, -2.0 * s) / (2.0 * s);
    auto b = quad::integrate_singular(
        [eps](double t) { return std::expm1(-0.5 * eps * std::log1p(t * t)); }, 0.0,
        std::numeric_limits<double>::infinity(), 1.0 + 2.0 * s, spec);
    return normalizing_constant(s) * (a_near + a_far + 2.0 * b);
}

/// First sign change of c(eps) on (0, min(1,2s)).
inline RootBracket find_eps_threshold(double s, const QuadratureSpec& spec = QuadratureSpec::thresholds())
{
    detail::require(s > 0.5 && s < 1.0, "find_eps_threshold: s must lie in (1/2,1)");
    auto c = [&](double e) { return eval_supersolution_constant(s, e, spec); };
    const double emax = std::min(1.0, 2.0 * s) - 1e-3;
    double prev = 1e-7;
    if (c(prev).value >= 0.0) throw NoRoot("find_eps_threshold: c(eps) is not negative near 0");
    while (true) {
        const double next = std::min(2.0 * prev, emax);
        if (c(next).value > 0.0) return bisect(c, prev, next, 1e-12);
        if (next >= emax)
            throw NoRoot("find_eps_threshold: c(eps) stays negative on (0, min(1,2s))");
        prev = next;
    }
}

/// Thresholds attached to one (c, s) pair. `c` is the parameter of h_c in
/// (1,2]; alpha_star is the root of g at sqrt(c).
struct ThresholdReport {
    double c = 0.0;
    std::optional<double> s;
    RootBracket s0;
    std::optional<RootBracket> alpha_star;
    std::optional<RootBracket> eps_threshold;
    double quadrature_error = 0.0;
};

inline ThresholdReport make_threshold_report(double c, std::optional<double> s,
                                             const QuadratureSpec& spec = QuadratureSpec::thresholds())
{
    ThresholdReport r;
    r.c = c;
    r.s = s;
    r.s0 = find_s0(c, spec);
    r.quadrature_error = r.s0.max_error;
    if (s) {
        if (*s > r.s0.root && *s > 0.5 && *s < 1.0) {
            try {
                r.alpha_star = find_alpha_star(std::sqrt(c), *s, spec);
                r.quadrature_error = std::max(r.quadrature_error, r.alpha_star->max_error);
            } catch (const NoRoot&) {
            }
        }
        if (*s > 0.5 && *s < 1.0) {
            r.eps_threshold = find_eps_threshold(*s, spec);
            r.quadrature_error = std::max(r.quadrature_error, r.eps_threshold->max_error);
        }
    }
    return r;
}

} // namespace isaacs

#endif
