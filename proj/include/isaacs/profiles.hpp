#ifndef ISAACS_PROFILES_HPP
#define ISAACS_PROFILES_HPP

// Closed-form test functions. Each profile is a callable u(x) and may add
//   kinks(x, xi)      positive t where t -> u(x + t xi) + u(x - t xi) is not smooth
//   touchable(x)      false where u has a cusp and I_xi u(x) is not classical
//   second_difference(x, y)   cancellation-free u(x+y) + u(x-y) - 2u(x)
//   hessian(x)        exact Hessian, for local-limit checks

#include "isaacs/errors.hpp"
#include "isaacs/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <functional>
#include <vector>

namespace isaacs {

template <class P, int N>
concept ScalarField = requires(const P& p, const Point<N>& x) {
    { p(x) } -> std::convertible_to<double>;
};

template <class P, int N>
concept HasKinks = requires(const P& p, const Point<N>& x, const Direction<N>& d) {
    { p.kinks(x, d) } -> std::convertible_to<std::vector<double>>;
};

template <class P, int N>
concept HasTouchable = requires(const P& p, const Point<N>& x) {
    { p.touchable(x) } -> std::convertible_to<bool>;
};

template <class P, int N>
concept HasSecondDifference = requires(const P& p, const Point<N>& x) {
    { p.second_difference(x, x) } -> std::convertible_to<double>;
};

/// u(x + t xi) = O(t^-far_decay()) as t -> infinity (negative for growth).
template <class P>
concept HasFarDecay = requires(const P& p) {
    { p.far_decay() } -> std::convertible_to<double>;
};

template <int N>
using Matrix = std::array<std::array<double, N>, N>;

namespace detail {

/// |t| of the point on the line x + t xi closest to c, as a list that is
/// empty when that point lies well inside the line's smooth scale
/// (its miss distance from c).
template <int N>
std::vector<double> closest_approach(const Point<N>& x, const Direction<N>& xi, const Point<N>& c)
{
    const double t = std::abs(dot<N>(c - x, xi.vec()));
    const Point<N> miss = (c - x) - dot<N>(c - x, xi.vec()) * xi.vec();
    if (t < 0.5 * norm<N>(miss)) return {};
    return {t};
}

inline void keep_positive(std::vector<double>& t, double floor = 1e-13)
{
    for (auto& v : t) v = std::abs(v);
    t.erase(std::remove_if(t.begin(), t.end(), [floor](double v) { return !(v > floor); }), t.end());
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end(), [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, b); }),
            t.end());
}

} // namespace detail

/// exp(-|x - c|^2 / w^2)
template <int N>
struct Gaussian {
    Point<N> center{};
    double width = 1.0;

    double operator()(const Point<N>& x) const
    {
        const Point<N> y = x - center;
        return std::exp(-dot<N>(y, y) / (width * width));
    }

    double second_difference(const Point<N>& x, const Point<N>& y) const
    {
        // 2 e^{-|x|^2} (e^{-|y|^2} cosh(2 x.y) - 1), lengths in units of w
        const double w2 = width * width;
        const Point<N> z = x - center;
        const double xx = dot<N>(z, z) / w2;
        const double yy = dot<N>(y, y) / w2;
        const double xy = dot<N>(z, y) / w2;
        if (yy > 1.0) return std::exp(-xx - yy + 2.0 * xy) + std::exp(-xx - yy - 2.0 * xy) - 2.0 * std::exp(-xx);
        const double sh = std::sinh(xy);
        return 2.0 * std::exp(-xx) * (std::expm1(-yy) * std::cosh(2.0 * xy) + 2.0 * sh * sh);
    }

    Matrix<N> hessian(const Point<N>& x) const
    {
        const double w2 = width * width;
        const Point<N> z = x - center;
        const double u = (*this)(x);
        Matrix<N> H{};
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                H[i][j] = u * (4.0 * z[i] * z[j] / (w2 * w2) - (i == j ? 2.0 / w2 : 0.0));
        return H;
    }
};

/// |x - c|^beta, beta in (0, 2)
template <int N>
struct RadialPower {
    Point<N> center{};
    double beta = 0.5;

    double operator()(const Point<N>& x) const { return std::pow(norm<N>(x - center), beta); }

    bool touchable(const Point<N>& x) const { return norm<N>(x - center) > 0.0; }
    double far_decay() const { return -beta; }

    std::vector<double> kinks(const Point<N>& x, const Direction<N>& xi) const
    {
        auto t = detail::closest_approach<N>(x, xi, center);
        detail::keep_positive(t);
        return t;
    }
};

/// d(x)^alpha for a domain distance function.
template <int N>
struct DistancePower {
    DomainSpec<N> domain;
    double alpha = 0.5;

    double operator()(const Point<N>& x) const
    {
        const double d = domain.distance(x);
        return d > 0.0 ? std::pow(d, alpha) : 0.0;
    }

    bool touchable(const Point<N>& x) const { return !domain.on_ridge(x); }

    std::vector<double> kinks(const Point<N>& x, const Direction<N>& xi) const
    {
        auto t = domain.boundary_crossings(x, xi.vec());
        auto r = domain.ridge_crossings(x, xi.vec());
        t.insert(t.end(), r.begin(), r.end());
        detail::keep_positive(t);
        return t;
    }
};

/// (1 + |x|)^(-eps)
template <int N>
struct Supersolution {
    double eps = 0.01;

    double operator()(const Point<N>& x) const { return std::exp(-eps * std::log1p(norm<N>(x))); }

    bool touchable(const Point<N>& x) const { return norm<N>(x) > 0.0; }
    double far_decay() const { return eps; }

    std::vector<double> kinks(const Point<N>& x, const Direction<N>& xi) const
    {
        auto t = detail::closest_approach<N>(x, xi, Point<N>{});
        detail::keep_positive(t);
        return t;
    }
};

/// (1/2) sum a_i (x_i - c_i)^2 exp(-|x - c|^2 / w^2); Hessian diag(a) at c.
template <int N>
struct QuadraticCutoff {
    Point<N> center{};
    std::array<double, N> a{};
    double width = 1.0;

    double operator()(const Point<N>& x) const
    {
        const Point<N> y = x - center;
        double q = 0.0;
        for (int i = 0; i < N; ++i) q += 0.5 * a[i] * y[i] * y[i];
        return q * std::exp(-dot<N>(y, y) / (width * width));
    }
};

template <int N>
struct ConstantProfile {
    double value = 1.0;
    double operator()(const Point<N>&) const { return value; }
    double second_difference(const Point<N>&, const Point<N>&) const { return 0.0; }
};

template <int N>
struct AffineProfile {
    Point<N> slope{};
    double offset = 0.0;
    double operator()(const Point<N>& x) const { return dot<N>(slope, x) + offset; }
    double second_difference(const Point<N>&, const Point<N>&) const { return 0.0; }
};

/// x -> u(R x)
template <int N, class P>
struct Dilated {
    P base;
    double R = 1.0;

    double operator()(const Point<N>& x) const { return base(R * x); }

    double far_decay() const
        requires HasFarDecay<P>
    {
        return base.far_decay();
    }

    bool touchable(const Point<N>& x) const
    {
        if constexpr (HasTouchable<P, N>) return base.touchable(R * x);
        return true;
    }

    std::vector<double> kinks(const Point<N>& x, const Direction<N>& xi) const
    {
        std::vector<double> t;
        if constexpr (HasKinks<P, N>) t = base.kinks(R * x, xi);
        for (auto& v : t) v /= R;
        return t;
    }
};

/// x -> u(x - z)
template <int N, class P>
struct Translated {
    P base;
    Point<N> shift{};

    double operator()(const Point<N>& x) const { return base(x - shift); }

    double far_decay() const
        requires HasFarDecay<P>
    {
        return base.far_decay();
    }

    bool touchable(const Point<N>& x) const
    {
        if constexpr (HasTouchable<P, N>) return base.touchable(x - shift);
        return true;
    }

    std::vector<double> kinks(const Point<N>& x, const Direction<N>& xi) const
    {
        if constexpr (HasKinks<P, N>) return base.kinks(x - shift, xi);
        return {};
    }
};

} // namespace isaacs

#endif
