#ifndef ISAACS_GEOMETRY_HPP
#define ISAACS_GEOMETRY_HPP

#include "isaacs/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace isaacs {

template <int N>
using Point = std::array<double, N>;

template <std::size_t M>
std::array<double, M> operator+(std::array<double, M> a, const std::array<double, M>& b)
{
    for (std::size_t i = 0; i < M; ++i) a[i] += b[i];
    return a;
}

template <std::size_t M>
std::array<double, M> operator-(std::array<double, M> a, const std::array<double, M>& b)
{
    for (std::size_t i = 0; i < M; ++i) a[i] -= b[i];
    return a;
}

template <std::size_t M>
std::array<double, M> operator*(double c, std::array<double, M> a)
{
    for (auto& v : a) v *= c;
    return a;
}

template <int N>
double dot(const Point<N>& a, const Point<N>& b)
{
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += a[i] * b[i];
    return s;
}

template <int N>
double norm(const Point<N>& a)
{
    return std::sqrt(dot<N>(a, a));
}

/// Unit vector on S^{N-1}.
template <int N>
class Direction {
public:
    Direction() { v_[0] = 1.0; }

    /// Normalizes `v`; throws DomainError for the zero vector.
    explicit Direction(const Point<N>& v)
    {
        const double n = norm<N>(v);
        if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("Direction: zero or non-finite vector");
        v_ = (1.0 / n) * v;
    }

    static Direction axis(int i)
    {
        Point<N> v{};
        v[i] = 1.0;
        return Direction(v);
    }

    /// N = 2 only: (cos t, sin t).
    static Direction angle(double t)
        requires(N == 2)
    {
        return Direction(Point<2>{std::cos(t), std::sin(t)});
    }

    const Point<N>& vec() const { return v_; }
    double operator[](int i) const { return v_[i]; }
    Direction operator-() const { return Direction(-1.0 * v_); }

private:
    Point<N> v_{};
};

/// Angle between the lines spanned by two directions, in [0, pi/2].
template <int N>
double line_angle(const Direction<N>& a, const Direction<N>& b)
{
    return std::acos(std::min(1.0, std::abs(dot<N>(a.vec(), b.vec()))));
}

template <int N>
struct Ball {
    Point<N> center{};
    double radius = 1.0;
};

template <int N>
struct Box {
    Point<N> lo{};
    Point<N> hi{};
};

template <int N>
struct Annulus {
    Point<N> center{};
    double r_in = 0.5;
    double r_out = 1.0;
};

/// Bounded domain with exact distance to the complement.
template <int N>
class DomainSpec {
public:
    using Shape = std::variant<Ball<N>, Box<N>, Annulus<N>>;

    DomainSpec() : shape_(Ball<N>{}) {}
    DomainSpec(Ball<N> b) : shape_(b)
    {
        if (!(b.radius > 0.0)) throw DomainError("ball radius must be positive");
    }
    DomainSpec(Box<N> b) : shape_(b)
    {
        for (int i = 0; i < N; ++i)
            if (!(b.hi[i] > b.lo[i])) throw DomainError("box must have hi > lo on every axis");
    }
    DomainSpec(Annulus<N> a) : shape_(a)
    {
        if (!(a.r_in > 0.0 && a.r_out > a.r_in)) throw DomainError("annulus needs 0 < r_in < r_out");
    }

    static DomainSpec unit_ball() { return DomainSpec(Ball<N>{Point<N>{}, 1.0}); }

    const Shape& shape() const { return shape_; }

    /// dist(x, complement) inside, 0 outside.
    double distance(const Point<N>& x) const
    {
        return std::visit([&](const auto& s) { return std::max(0.0, signed_distance(s, x)); }, shape_);
    }

    bool contains(const Point<N>& x) const { return distance(x) > 0.0; }

    /// Unit inner normal at (or near) a boundary point.
    Direction<N> inner_normal(const Point<N>& xb) const
    {
        return std::visit([&](const auto& s) { return normal(s, xb); }, shape_);
    }

    Point<N> bbox_lo() const
    {
        return std::visit([](const auto& s) { return lo(s); }, shape_);
    }
    Point<N> bbox_hi() const
    {
        return std::visit([](const auto& s) { return hi(s); }, shape_);
    }

    double diameter() const { return norm<N>(bbox_hi() - bbox_lo()); }

    /// Inradius: maximum of the distance function.
    double inradius() const
    {
        return std::visit(
            [](const auto& s) -> double {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, Ball<N>>) {
                    return s.radius;
                } else if constexpr (std::is_same_v<S, Annulus<N>>) {
                    return 0.5 * (s.r_out - s.r_in);
                } else {
                    double m = std::numeric_limits<double>::infinity();
                    for (int i = 0; i < N; ++i) m = std::min(m, 0.5 * (s.hi[i] - s.lo[i]));
                    return m;
                }
            },
            shape_);
    }

    /// Parameters t where x + t*dir crosses the boundary, sorted.
    std::vector<double> boundary_crossings(const Point<N>& x, const Point<N>& dir) const
    {
        std::vector<double> t;
        std::visit([&](const auto& s) { crossings(s, x, dir, t); }, shape_);
        std::sort(t.begin(), t.end());
        return t;
    }

    /// Parameters t where x + t*dir crosses the ridge set of d (where d is not smooth).
    std::vector<double> ridge_crossings(const Point<N>& x, const Point<N>& dir) const
    {
        std::vector<double> t;
        std::visit([&](const auto& s) { ridges(s, x, dir, t); }, shape_);
        std::sort(t.begin(), t.end());
        return t;
    }

    /// True if x lies on the ridge set, where d has a concave kink.
    bool on_ridge(const Point<N>& x, double tol = 1e-12) const
    {
        return std::visit(
            [&](const auto& s) -> bool {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, Ball<N>>) {
                    return norm<N>(x - s.center) < tol;
                } else if constexpr (std::is_same_v<S, Annulus<N>>) {
                    return std::abs(norm<N>(x - s.center) - 0.5 * (s.r_in + s.r_out)) < tol;
                } else {
                    // two or more faces at the same minimal distance
                    std::vector<double> dd;
                    for (int i = 0; i < N; ++i) {
                        dd.push_back(x[i] - s.lo[i]);
                        dd.push_back(s.hi[i] - x[i]);
                    }
                    std::sort(dd.begin(), dd.end());
                    return dd[1] - dd[0] < tol;
                }
            },
            shape_);
    }

    std::string describe() const
    {
        std::ostringstream os;
        os.precision(17);
        auto pt = [&](const Point<N>& p) {
            for (int i = 0; i < N; ++i) os << (i ? "," : "") << p[i];
        };
        std::visit(
            [&](const auto& s) {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, Ball<N>>) {
                    os << "ball:" << s.radius << "@";
                    pt(s.center);
                } else if constexpr (std::is_same_v<S, Annulus<N>>) {
                    os << "annulus:" << s.r_in << "," << s.r_out << "@";
                    pt(s.center);
                } else {
                    os << "box:";
                    pt(s.lo);
                    os << ":";
                    pt(s.hi);
                }
            },
            shape_);
        return os.str();
    }

private:
    static double signed_distance(const Ball<N>& b, const Point<N>& x)
    {
        return b.radius - norm<N>(x - b.center);
    }
    static double signed_distance(const Annulus<N>& a, const Point<N>& x)
    {
        const double r = norm<N>(x - a.center);
        return std::min(r - a.r_in, a.r_out - r);
    }
    static double signed_distance(const Box<N>& b, const Point<N>& x)
    {
        double d = std::numeric_limits<double>::infinity();
        for (int i = 0; i < N; ++i) d = std::min({d, x[i] - b.lo[i], b.hi[i] - x[i]});
        return d;
    }

    static Direction<N> normal(const Ball<N>& b, const Point<N>& x) { return Direction<N>(b.center - x); }
    static Direction<N> normal(const Annulus<N>& a, const Point<N>& x)
    {
        const Point<N> r = x - a.center;
        const double rr = norm<N>(r);
        return rr < 0.5 * (a.r_in + a.r_out) ? Direction<N>(r) : Direction<N>(-1.0 * r);
    }
    static Direction<N> normal(const Box<N>& b, const Point<N>& x)
    {
        int best = 0;
        double bd = std::numeric_limits<double>::infinity();
        double sign = 1.0;
        for (int i = 0; i < N; ++i) {
            if (std::abs(x[i] - b.lo[i]) < bd) {
                bd = std::abs(x[i] - b.lo[i]);
                best = i;
                sign = 1.0;
            }
            if (std::abs(b.hi[i] - x[i]) < bd) {
                bd = std::abs(b.hi[i] - x[i]);
                best = i;
                sign = -1.0;
            }
        }
        Point<N> v{};
        v[best] = sign;
        return Direction<N>(v);
    }

    static Point<N> lo(const Ball<N>& b)
    {
        Point<N> p = b.center;
        for (auto& v : p) v -= b.radius;
        return p;
    }
    static Point<N> hi(const Ball<N>& b)
    {
        Point<N> p = b.center;
        for (auto& v : p) v += b.radius;
        return p;
    }
    static Point<N> lo(const Annulus<N>& a) { return lo(Ball<N>{a.center, a.r_out}); }
    static Point<N> hi(const Annulus<N>& a) { return hi(Ball<N>{a.center, a.r_out}); }
    static Point<N> lo(const Box<N>& b) { return b.lo; }
    static Point<N> hi(const Box<N>& b) { return b.hi; }

    static void sphere_crossings(const Point<N>& c, double r, const Point<N>& x, const Point<N>& dir,
                                 std::vector<double>& out)
    {
        // |x - c + t dir|^2 = r^2
        const Point<N> q = x - c;
        const double a = dot<N>(dir, dir);
        const double b = dot<N>(q, dir);
        const double cc = dot<N>(q, q) - r * r;
        const double disc = b * b - a * cc;
        if (disc <= 0.0) return;
        const double sq = std::sqrt(disc);
        out.push_back((-b - sq) / a);
        out.push_back((-b + sq) / a);
    }

    static void crossings(const Ball<N>& b, const Point<N>& x, const Point<N>& dir, std::vector<double>& out)
    {
        sphere_crossings(b.center, b.radius, x, dir, out);
    }
    static void crossings(const Annulus<N>& a, const Point<N>& x, const Point<N>& dir,
                          std::vector<double>& out)
    {
        sphere_crossings(a.center, a.r_in, x, dir, out);
        sphere_crossings(a.center, a.r_out, x, dir, out);
    }
    static void crossings(const Box<N>& b, const Point<N>& x, const Point<N>& dir, std::vector<double>& out)
    {
        for (int i = 0; i < N; ++i) {
            if (dir[i] == 0.0) continue;
            for (double face : {b.lo[i], b.hi[i]}) {
                const double t = (face - x[i]) / dir[i];
                const Point<N> p = x + t * dir;
                bool on = true;
                for (int k = 0; k < N && on; ++k)
                    if (k != i) on = p[k] >= b.lo[k] - 1e-14 && p[k] <= b.hi[k] + 1e-14;
                if (on) out.push_back(t);
            }
        }
    }

    static void ridges(const Ball<N>& b, const Point<N>& x, const Point<N>& dir, std::vector<double>& out)
    {
        closest_approach(b.center, x, dir, out);
    }
    /// Closest approach of the line to c: a kink when the line passes through
    /// c, strong curvature on the scale of the miss distance otherwise. Left
    /// out when it sits well inside that scale of t = 0.
    static void closest_approach(const Point<N>& c, const Point<N>& x, const Point<N>& dir, std::vector<double>& out)
    {
        const double t = -dot<N>(x - c, dir) / dot<N>(dir, dir);
        const double miss = norm<N>(x + t * dir - c);
        if (std::abs(t) * std::sqrt(dot<N>(dir, dir)) >= 0.5 * miss) out.push_back(t);
    }
    static void ridges(const Annulus<N>& a, const Point<N>& x, const Point<N>& dir, std::vector<double>& out)
    {
        sphere_crossings(a.center, 0.5 * (a.r_in + a.r_out), x, dir, out);
        closest_approach(a.center, x, dir, out);
    }
    static void ridges(const Box<N>& b, const Point<N>& x, const Point<N>& dir, std::vector<double>& out)
    {
        // ridges of the box distance lie on planes x_i - lo_i = x_k - lo_k etc.;
        // a generous set of candidate kinks: equalities between any two face distances
        std::vector<std::pair<Point<N>, double>> faces;  // distance = g . y + c
        for (int i = 0; i < N; ++i) {
            Point<N> g{};
            g[i] = 1.0;
            faces.push_back({g, -b.lo[i]});
            g[i] = -1.0;
            faces.push_back({g, b.hi[i]});
        }
        for (std::size_t p = 0; p < faces.size(); ++p)
            for (std::size_t q = p + 1; q < faces.size(); ++q) {
                const Point<N> g = faces[p].first - faces[q].first;
                const double den = dot<N>(g, dir);
                if (std::abs(den) < 1e-300) continue;
                const double t = -(dot<N>(g, x) + faces[p].second - faces[q].second) / den;
                out.push_back(t);
            }
    }

    Shape shape_;
};

} // namespace isaacs

#endif
