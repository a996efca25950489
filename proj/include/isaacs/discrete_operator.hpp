#ifndef ISAACS_DISCRETE_OPERATOR_HPP
#define ISAACS_DISCRETE_OPERATOR_HPP

// Monotone discretization of I u on a grid function with zero exterior data.
//
// Along each direction xi_j the integral over tau is split as
//   (0, t0)        delta(tau) ~ delta(t0) tau^2 / t0^2
//   (t0, tK)       delta piecewise linear between node-aligned samples t_k
//   (tK, inf)      both points outside the domain, delta = -2 u(x) exactly
// with t0 = near_scale * h and tK >= domain diameter. Off-node values come
// from the multilinear interpolant of the nodal data extended by zero,
// so every weight is nonnegative and
//   I_j u(x) = S_j(x) - D u(x),    S_j = sum of w_k (u(x + t_k xi) + u(x - t_k xi)).
// The displacement t_k xi_j is the same at every node, so S_j is a sum of
// shifted copies of the nodal array.

#include "isaacs/errors.hpp"
#include "isaacs/geometry.hpp"
#include "isaacs/grid.hpp"
#include "isaacs/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <vector>

namespace isaacs {

struct StencilOptions {
    /// Direction count for N = 2 (angles j pi / M). Ignored for N = 1.
    int directions = 64;
    /// Sample spacing grows like rho * tau (rounded to multiples of h).
    double rho = 0.1;
    /// Near-field scale in units of h; 0 picks 1 for N = 1 and 2 otherwise.
    double near_scale = 0.0;
    /// Multiply by C_s.
    bool normalized = false;
};

/// Uniform half-circle directions for N = 2, the single axis for N = 1,
/// a Fibonacci point set on the sphere for N = 3.
template <int N>
std::vector<Direction<N>> direction_grid(int M)
{
    std::vector<Direction<N>> dirs;
    if constexpr (N == 1) {
        dirs.push_back(Direction<1>::axis(0));
    } else if constexpr (N == 2) {
        if (M < 1) throw DomainError("direction count must be positive");
        for (int j = 0; j < M; ++j) dirs.push_back(Direction<2>::angle(std::numbers::pi * j / M));
    } else {
        if (M < 1) throw DomainError("direction count must be positive");
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int j = 0; j < M; ++j) {
            const double z = 1.0 - (2.0 * j + 1.0) / M;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * j;
            Point<N> v{};
            v[0] = r * std::cos(phi);
            v[1] = r * std::sin(phi);
            v[2] = z;
            dirs.push_back(Direction<N>(v));
        }
    }
    return dirs;
}

/// Radial sample points and weights shared by all directions.
struct TauRule {
    std::vector<double> tau;
    std::vector<double> weight;
    double tail_weight = 0.0;
    /// D = 2 (sum of weights + tail weight)
    double diagonal = 0.0;
};

inline TauRule make_tau_rule(double s, double h, double near_scale, double rho, double reach, bool normalized)
{
    if (!(s > 0.0 && s < 1.0)) throw DomainError("order s must lie in (0,1)");
    if (!(h > 0.0)) throw DomainError("grid spacing must be positive");
    TauRule r;
    const double t0 = near_scale * h;
    r.tau.push_back(t0);
    while (r.tau.back() < reach) {
        const double t = r.tau.back();
        const double step = h * std::max(1.0, std::floor(rho * t / h));
        r.tau.push_back(t + step);
    }
    r.weight.assign(r.tau.size(), 0.0);
    const double two_s = 2.0 * s;
    r.weight[0] = std::pow(t0, -two_s) / (2.0 - two_s);
    for (std::size_t k = 0; k + 1 < r.tau.size(); ++k) {
        const double a = r.tau[k], b = r.tau[k + 1], len = b - a;
        const double m0 = (std::pow(a, -two_s) - std::pow(b, -two_s)) / two_s;
        const double m1 = std::abs(1.0 - two_s) < 1e-12
                              ? std::log(b / a)
                              : (std::pow(b, 1.0 - two_s) - std::pow(a, 1.0 - two_s)) / (1.0 - two_s);
        r.weight[k] += (b * m0 - m1) / len;
        r.weight[k + 1] += (m1 - a * m0) / len;
    }
    r.tail_weight = std::pow(r.tau.back(), -two_s) / two_s;
    const double c = normalized ? normalizing_constant(s) : 1.0;
    for (auto& w : r.weight) w *= c;
    r.tail_weight *= c;
    double sum = r.tail_weight;
    for (double w : r.weight) sum += w;
    r.diagonal = 2.0 * sum;
    return r;
}

template <int N>
class DiscreteIsaacs {
public:
    struct Term {
        std::array<long, N> offset;
        double coeff;
    };

    DiscreteIsaacs(const Grid<N>& grid, const DomainSpec<N>& domain, double s, StencilOptions opt = {})
        : grid_(grid), s_(s), opt_(opt)
    {
        const double near = opt.near_scale > 0.0 ? opt.near_scale : (N == 1 ? 1.0 : 2.0);
        rule_ = make_tau_rule(s, grid.h(), near, opt.rho, domain.diameter(), opt.normalized);
        directions_ = direction_grid<N>(opt.directions);
        terms_.resize(directions_.size());
        for (std::size_t j = 0; j < directions_.size(); ++j) build_terms(j);
        build_rows(domain);
    }

    double s() const { return s_; }
    const Grid<N>& grid() const { return grid_; }
    const TauRule& tau_rule() const { return rule_; }
    const std::vector<Direction<N>>& directions() const { return directions_; }
    /// Merged (offset, weight) pairs per direction.
    const std::vector<std::vector<Term>>& terms() const { return terms_; }
    /// Lipschitz constant of u(x) -> I_h u(x) in the diagonal entry; the
    /// explicit update u + dt (I_h u - f) is monotone for dt <= 1 / lipschitz().
    double lipschitz() const { return 2.0 * rule_.diagonal; }

    /// I_h u at every interior node (0 elsewhere).
    void apply(const GridFunction<N>& u, std::vector<double>& out) const
    {
        static_assert(N <= 2, "bulk sweeps are implemented for N <= 2");
        const auto& v = u.values();
        const long ncol = grid_.nodes(N - 1);
        const long nrow = N == 1 ? 1 : grid_.nodes(0);
        const double D = rule_.diagonal;
        out.assign(grid_.size(), 0.0);
        sj_.assign(static_cast<std::size_t>(ncol), 0.0);
        lo_.assign(static_cast<std::size_t>(ncol), 0.0);
        hi_.assign(static_cast<std::size_t>(ncol), 0.0);
        // row by row so the per-direction sums stay in cache
        for (const auto& row : rows_) {
            const long a0 = row.intervals.front().first, b0 = row.intervals.back().second;
            std::fill(lo_.begin() + a0, lo_.begin() + b0 + 1, std::numeric_limits<double>::infinity());
            std::fill(hi_.begin() + a0, hi_.begin() + b0 + 1, -std::numeric_limits<double>::infinity());
            for (std::size_t j = 0; j < directions_.size(); ++j) {
                std::fill(sj_.begin() + a0, sj_.begin() + b0 + 1, 0.0);
                double* dst = sj_.data();
                for (const auto& t : terms_[j]) {
                    const long dc = t.offset[N - 1];
                    long src_row = row.row;
                    if constexpr (N == 2) src_row += t.offset[0];
                    if (src_row < 0 || src_row >= nrow) continue;
                    const long si = row_index_[static_cast<std::size_t>(src_row)];
                    if (si < 0) continue;
                    // exterior sources are zero: visit only interior-to-interior pairs
                    const double* src = v.data() + src_row * ncol + dc;
                    const double c = t.coeff;
                    for (const auto& [c0, c1] : row.intervals)
                        for (const auto& [s0, s1] : rows_[static_cast<std::size_t>(si)].intervals) {
                            const long a = std::max(c0, s0 - dc);
                            const long b = std::min(c1, s1 - dc);
                            for (long col = a; col <= b; ++col) dst[col] += c * src[col];
                        }
                }
                for (const auto& [c0, c1] : row.intervals)
                    for (long c = c0; c <= c1; ++c) {
                        lo_[c] = std::min(lo_[c], sj_[c]);
                        hi_[c] = std::max(hi_[c], sj_[c]);
                    }
            }
            for (const auto& [c0, c1] : row.intervals)
                for (long c = c0; c <= c1; ++c) {
                    const std::size_t k = row.base + static_cast<std::size_t>(c);
                    out[k] = lo_[c] + hi_[c] - 2.0 * D * v[k];
                }
        }
    }

    struct PointValue {
        double value;
        double inf_part;
        double sup_part;
        int argmin;
        int argmax;
        std::vector<double> per_direction;
    };

    /// Same operator at one node, through the interpolant instead of array shifts.
    PointValue apply_at(const GridFunction<N>& u, std::size_t node) const
    {
        const Point<N> x = grid_.position(node);
        const double ux = u[node];
        PointValue pv{0.0, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0, 0, {}};
        for (std::size_t j = 0; j < directions_.size(); ++j) {
            const double Ij = directional_at(u, x, ux, directions_[j]);
            pv.per_direction.push_back(Ij);
            if (Ij < pv.inf_part) {
                pv.inf_part = Ij;
                pv.argmin = static_cast<int>(j);
            }
            if (Ij > pv.sup_part) {
                pv.sup_part = Ij;
                pv.argmax = static_cast<int>(j);
            }
        }
        pv.value = pv.inf_part + pv.sup_part;
        return pv;
    }

    /// I_xi u(x) for any point x and direction, using the nodal interpolant.
    double directional_at(const GridFunction<N>& u, const Point<N>& x, double ux, const Direction<N>& xi) const
    {
        double S = 0.0;
        for (std::size_t k = 0; k < rule_.tau.size(); ++k) {
            const Point<N> d = rule_.tau[k] * xi.vec();
            S += rule_.weight[k] * (u.interpolate(x + d) + u.interpolate(x - d));
        }
        return S - rule_.diagonal * ux;
    }

private:
    struct Row {
        std::size_t base;                          // flat index of column 0
        long row;                                  // index along axis 0 (N = 2)
        std::vector<std::pair<long, long>> intervals;  // interior columns
    };

    void build_terms(std::size_t j)
    {
        std::map<std::array<long, N>, double> acc;
        const auto& xi = directions_[j];
        for (std::size_t k = 0; k < rule_.tau.size(); ++k) {
            for (double sign : {1.0, -1.0}) {
                std::array<long, N> base{};
                std::array<double, N> frac{};
                for (int i = 0; i < N; ++i) {
                    const double r = sign * rule_.tau[k] * xi[i] / grid_.h();
                    double f = std::floor(r);
                    double fr = r - f;
                    if (fr < 1e-12) fr = 0.0;
                    if (fr > 1.0 - 1e-12) {
                        fr = 0.0;
                        f += 1.0;
                    }
                    base[i] = static_cast<long>(f);
                    frac[i] = fr;
                }
                for (int corner = 0; corner < (1 << N); ++corner) {
                    double w = rule_.weight[k];
                    auto idx = base;
                    for (int i = 0; i < N; ++i) {
                        if (corner & (1 << i)) {
                            w *= frac[i];
                            ++idx[i];
                        } else {
                            w *= 1.0 - frac[i];
                        }
                    }
                    if (w != 0.0) acc[idx] += w;
                }
            }
        }
        for (const auto& [off, c] : acc) terms_[j].push_back({off, c});
    }

    void build_rows(const DomainSpec<N>& domain)
    {
        const long ncol = grid_.nodes(N - 1);
        const long nrow = N == 1 ? 1 : grid_.nodes(0);
        for (long r = 0; r < nrow; ++r) {
            Row row;
            row.row = r;
            row.base = static_cast<std::size_t>(r * ncol);
            long start = -1;
            for (long c = 0; c < ncol; ++c) {
                const bool in = domain.contains(grid_.position(row.base + static_cast<std::size_t>(c)));
                if (in && start < 0) start = c;
                if (!in && start >= 0) {
                    row.intervals.push_back({start, c - 1});
                    start = -1;
                }
            }
            if (start >= 0) row.intervals.push_back({start, ncol - 1});
            row_index_.push_back(row.intervals.empty() ? -1 : static_cast<long>(rows_.size()));
            if (!row.intervals.empty()) rows_.push_back(row);
        }
    }

    Grid<N> grid_;
    double s_;
    StencilOptions opt_;
    TauRule rule_;
    std::vector<Direction<N>> directions_;
    std::vector<std::vector<Term>> terms_;
    std::vector<Row> rows_;
    std::vector<long> row_index_;
    mutable std::vector<double> sj_, lo_, hi_;
};

} // namespace isaacs

#endif
