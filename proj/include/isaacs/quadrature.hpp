#ifndef ISAACS_QUADRATURE_HPP
#define ISAACS_QUADRATURE_HPP

// One-dimensional quadrature for integrals of the form
//
//     int_lower^upper f(t) / t^p dt,        0 < p < 3,
//
// where f vanishes at t = 0 fast enough for integrability. The interval is
// covered by three kinds of segments that share one adaptive error budget:
//
//   head   [0, t0]     Gauss-Jacobi rule for the weight t^(m-p), m = floor(p),
//                      applied to the regular part f(t)/t^m
//   panel  [a, b]      Gauss-Kronrod 10/21, bisected on demand
//   tail   [T, inf)    t = T u^(-1/q) maps onto u in (0, 1], where the kernel
//                      t^(-1-q) dt becomes the constant T^(-q)/q du
//
// Refinement always splits the segment with the largest error estimate.

#include "isaacs/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <queue>
#include <utility>
#include <vector>

namespace isaacs::quad {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 4000;
    /// Start of the mapped tail for infinite upper limits.
    double tail_cutoff = 4.0;
    /// Interior points where the integrand is singular or not smooth.
    std::vector<double> singular_split;
    /// Upper bound for the Gauss-Jacobi panel at t = 0.
    double head_width = 0.25;

    /// Tight defaults used for the scalar thresholds.
    static QuadratureSpec thresholds() { return {}; }

    /// Looser defaults for pointwise operator sweeps.
    static QuadratureSpec sweep()
    {
        QuadratureSpec q;
        q.rel_tol = 1e-6;
        q.abs_tol = 1e-9;
        return q;
    }

    void validate() const
    {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw DomainError("QuadratureSpec: tolerances must be positive");
        if (max_subdivisions < 1)
            throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
        if (!(head_width > 0.0))
            throw DomainError("QuadratureSpec: head_width must be positive");
        for (double s : singular_split)
            if (!(tail_cutoff > s))
                throw DomainError("QuadratureSpec: tail_cutoff must exceed every split point");
    }
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions_used = 0;

    IntegralResult& operator+=(const IntegralResult& o)
    {
        value += o.value;
        error_estimate += o.error_estimate;
        subdivisions_used += o.subdivisions_used;
        return *this;
    }
    friend IntegralResult operator+(IntegralResult a, const IntegralResult& b) { return a += b; }
    friend IntegralResult operator-(IntegralResult a, const IntegralResult& b)
    {
        a.value -= b.value;
        a.error_estimate += b.error_estimate;
        a.subdivisions_used += b.subdivisions_used;
        return a;
    }
    friend IntegralResult operator*(double c, IntegralResult a)
    {
        a.value *= c;
        a.error_estimate *= std::abs(c);
        return a;
    }
    IntegralResult& operator+=(double exact)
    {
        value += exact;
        return *this;
    }

    bool converged(const QuadratureSpec& spec) const
    {
        return error_estimate <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
    }
};

namespace detail {

// QUADPACK qk21 abscissae and weights.
inline constexpr std::array<double, 11> kronrod_x{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kronrod_w{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980481163, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> gauss_w{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct RuleValue {
    double value;
    double error;
};

template <class G>
RuleValue gauss_kronrod21(const G& g, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fc = g(c);
    bool finite = std::isfinite(fc);
    double kronrod = kronrod_w[10] * (finite ? fc : 0.0);
    double gauss = 0.0;
    for (int k = 0; k < 10; ++k) {
        double f1 = g(c - half * kronrod_x[k]);
        double f2 = g(c + half * kronrod_x[k]);
        if (!std::isfinite(f1) || !std::isfinite(f2)) {
            finite = false;
            f1 = std::isfinite(f1) ? f1 : 0.0;
            f2 = std::isfinite(f2) ? f2 : 0.0;
        }
        kronrod += kronrod_w[k] * (f1 + f2);
        if (k % 2 == 1) gauss += gauss_w[k / 2] * (f1 + f2);
    }
    kronrod *= half;
    gauss *= half;
    double err = std::abs(kronrod - gauss);
    if (!finite) err = std::max(err, std::abs(kronrod) + std::abs(gauss) + 1e-300);
    return {kronrod, err};
}

/// Gauss-Jacobi nodes/weights on [0,1] for the weight x^b (b > -1),
/// computed by Golub-Welsch.
struct JacobiRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline JacobiRule make_jacobi_rule(int n, double b)
{
    const double a = 0.0;
    Eigen::VectorXd diag(n);
    Eigen::VectorXd off(n > 1 ? n - 1 : 1);
    const double ab = a + b;
    diag(0) = (b - a) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        const double t = 2.0 * k + ab;
        diag(k) = (b * b - a * a) / (t * (t + 2.0));
        double beta;
        if (k == 1)
            beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        else
            beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (t * t * (t + 1.0) * (t - 1.0));
        off(k - 1) = std::sqrt(beta);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, off.head(n - 1), Eigen::ComputeEigenvectors);
    const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
                       std::tgamma(ab + 2.0);
    JacobiRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // map y in [-1,1] with weight (1+y)^b to x in [0,1] with weight x^b
    const double scale = std::pow(2.0, -b - 1.0);
    for (int i = 0; i < n; ++i) {
        const double v0 = eig.eigenvectors()(0, i);
        rule.nodes[i] = 0.5 * (1.0 + eig.eigenvalues()(i));
        rule.weights[i] = mu0 * v0 * v0 * scale;
    }
    return rule;
}

inline const JacobiRule& jacobi_rule(int n, double b)
{
    static std::mutex mutex;
    static std::map<std::pair<int, double>, JacobiRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(n, b);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, make_jacobi_rule(n, b)).first;
    return it->second;
}

inline constexpr int head_nodes_fine = 30;
inline constexpr int head_nodes_coarse = 12;

/// Shared adaptive engine. `Integrand` is the caller's f; the kernel power
/// and the mapping are applied here.
template <class F>
class Engine {
public:
    Engine(const F& f, double p, const QuadratureSpec& spec) : f_(f), p_(p), spec_(spec) {}

    void add_head(double t0)
    {
        m_ = std::floor(p_);
        push({Kind::head, 0.0, t0});
    }
    void add_panel(double a, double b)
    {
        if (b > a) push({Kind::panel, a, b});
    }
    /// Tail over [T, inf) with kernel t^(-1-q); the caller's f is not divided by t^p.
    void add_tail(double T, double q)
    {
        tail_T_ = T;
        tail_q_ = q;
        tail_scale_ = std::pow(T, -q) / q;
        push({Kind::tail, 0.0, 1.0});
    }

    IntegralResult run()
    {
        int subdivisions = 0;
        while (!done()) {
            if (queue_.empty() || subdivisions >= spec_.max_subdivisions) {
                const auto r = total();
                throw NonConverged("quadrature did not reach tolerance", r.value, r.error_estimate);
            }
            Segment s = queue_.top();
            queue_.pop();
            refine(s);
            ++subdivisions;
        }
        auto r = total();
        r.subdivisions_used = subdivisions;
        return r;
    }

private:
    enum class Kind { head, panel, tail };
    struct Segment {
        Kind kind;
        double a, b;
        double value = 0.0;
        double error = 0.0;
        bool operator<(const Segment& o) const { return error < o.error; }
    };

    double kernel_point(double t) const { return f_(t) * std::pow(t, -p_); }

    double tail_point(double u) const
    {
        double t = tail_T_ * std::pow(u, -1.0 / tail_q_);
        if (!std::isfinite(t)) t = std::numeric_limits<double>::max() / 4.0;
        return tail_scale_ * f_(t);
    }

    RuleValue head_rule(double t0) const
    {
        const double b = m_ - p_;
        auto apply = [&](const JacobiRule& rule, double width) {
            double sum = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double t = width * rule.nodes[i];
                sum += rule.weights[i] * f_(t) * std::pow(t, -m_);
            }
            return sum * std::pow(width, b + 1.0);
        };
        const auto& rule = jacobi_rule(head_nodes_fine, b);
        const double fine = apply(rule, t0);
        const double coarse = apply(jacobi_rule(head_nodes_coarse, b), t0);
        if (!std::isfinite(fine)) return {0.0, std::numeric_limits<double>::infinity()};
        // a regular part that is not smooth at 0 fools the nested comparison,
        // so the head is also checked against its own bisection
        const auto outer = gauss_kronrod21([this](double t) { return kernel_point(t); }, 0.5 * t0, t0);
        const double inner = apply(rule, 0.5 * t0);
        const double split = inner + outer.value;
        // a rule bias proportional to the head value shows up in the split
        // difference reduced by the factor 1 - inner/fine
        double ratio = fine != 0.0 ? inner / fine : 0.0;
        ratio = std::clamp(ratio, 0.0, 0.999);
        const double err =
            std::max(std::abs(fine - coarse), std::abs(fine - split) / (1.0 - ratio));
        return {fine, err};
    }

    void push(Segment s)
    {
        RuleValue r{};
        switch (s.kind) {
        case Kind::head:
            r = head_rule(s.b);
            break;
        case Kind::panel:
            r = gauss_kronrod21([this](double t) { return kernel_point(t); }, s.a, s.b);
            break;
        case Kind::tail:
            r = gauss_kronrod21([this](double u) { return tail_point(u); }, s.a, s.b);
            break;
        }
        s.value = r.value;
        s.error = r.error;
        sum_value_ += s.value;
        sum_error_ += s.error;
        const double width = s.b - s.a;
        const bool splittable =
            width > 64.0 * std::numeric_limits<double>::epsilon() *
                        std::max({std::abs(s.a), std::abs(s.b), 1e-300}) &&
            (s.kind != Kind::head || s.b > 1e-280);
        if (splittable)
            queue_.push(s);
        else
            frozen_.push_back(s);
    }

    void refine(const Segment& s)
    {
        sum_value_ -= s.value;
        sum_error_ -= s.error;
        if (s.kind == Kind::head) {
            push({Kind::head, 0.0, 0.5 * s.b});
            push({Kind::panel, 0.5 * s.b, s.b});
        } else {
            const double mid = 0.5 * (s.a + s.b);
            push({s.kind, s.a, mid});
            push({s.kind, mid, s.b});
        }
    }

    bool done() const
    {
        // running sums drift; the final figures come from total()
        const double err = std::max(sum_error_, 0.0);
        return err <= std::max(spec_.abs_tol, spec_.rel_tol * std::abs(sum_value_));
    }

    IntegralResult total() const
    {
        IntegralResult r;
        auto copy = queue_;
        while (!copy.empty()) {
            r.value += copy.top().value;
            r.error_estimate += copy.top().error;
            copy.pop();
        }
        for (const auto& s : frozen_) {
            r.value += s.value;
            r.error_estimate += s.error;
        }
        return r;
    }

    const F& f_;
    double p_;
    const QuadratureSpec& spec_;
    double m_ = 0.0;
    double tail_T_ = 0.0, tail_q_ = 1.0, tail_scale_ = 1.0;
    std::priority_queue<Segment> queue_;
    std::vector<Segment> frozen_;
    double sum_value_ = 0.0;
    double sum_error_ = 0.0;
};

} // namespace detail

/// int_lower^upper f(t) t^(-p) dt. `upper` may be +infinity (requires p > 1).
/// For lower = 0 the regular part f(t)/t^floor(p) must be smooth near 0.
template <class F>
IntegralResult integrate_singular(const F& f, double lower, double upper, double p,
                                  const QuadratureSpec& spec)
{
    spec.validate();
    if (!(p > 0.0) || !(p < 3.0)) throw DomainError("integrate_singular: exponent p must lie in (0,3)");
    if (!(lower >= 0.0)) throw DomainError("integrate_singular: lower limit must be >= 0");
    if (!(upper > lower)) {
        if (upper == lower) return {};
        throw DomainError("integrate_singular: upper < lower");
    }
    const bool infinite = std::isinf(upper);
    if (infinite && !(p > 1.0))
        throw DomainError("integrate_singular: infinite range needs p > 1");

    std::vector<double> breaks{lower};
    for (double s : spec.singular_split)
        if (s > lower && s < upper) breaks.push_back(s);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    double T = upper;
    if (infinite) {
        T = spec.tail_cutoff;
        if (T <= breaks.back()) T = 2.0 * breaks.back() + 1.0;
    }
    breaks.push_back(T);

    detail::Engine<F> engine(f, p, spec);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        double a = breaks[i];
        const double b = breaks[i + 1];
        if (a == 0.0) {
            // graded toward the kernel singularity, ratio 1/2
            double t0 = std::min(spec.head_width, 0.5 * b);
            engine.add_head(t0);
            while (2.0 * t0 < b) {
                engine.add_panel(t0, 2.0 * t0);
                t0 *= 2.0;
            }
            engine.add_panel(t0, b);
        } else {
            engine.add_panel(a, b);
        }
    }
    if (infinite) engine.add_tail(T, p - 1.0);
    return engine.run();
}

/// int_T^inf f(t) t^(-1-q) dt via t = T u^(-1/q).
template <class F>
IntegralResult integrate_tail(const F& f, double T, double q, const QuadratureSpec& spec)
{
    spec.validate();
    if (!(q > 0.0)) throw DomainError("integrate_tail: decay exponent must be positive");
    if (!(T > 0.0)) throw DomainError("integrate_tail: cutoff must be positive");
    detail::Engine<F> engine(f, 0.0, spec);
    engine.add_tail(T, q);
    return engine.run();
}

/// Plain adaptive Gauss-Kronrod on a finite interval with a smooth-ish integrand.
template <class F>
IntegralResult integrate(const F& f, double a, double b, const QuadratureSpec& spec)
{
    spec.validate();
    if (b == a) return {};
    detail::Engine<F> engine(f, 0.0, spec);
    std::vector<double> breaks{a};
    for (double s : spec.singular_split)
        if (s > a && s < b) breaks.push_back(s);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) engine.add_panel(breaks[i], breaks[i + 1]);
    return engine.run();
}

} // namespace isaacs::quad

#endif
