#ifndef ISAACS_REGULARITY_HPP
#define ISAACS_REGULARITY_HPP

#include "isaacs/dirichlet_solver.hpp"
#include "isaacs/errors.hpp"
#include "isaacs/geometry.hpp"
#include "isaacs/grid.hpp"
#include "isaacs/nonlocal_operator.hpp"
#include "isaacs/profiles.hpp"
#include "isaacs/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

namespace isaacs {

// ---------------------------------------------------------------------------
// Hoelder fits

struct HolderFit {
    /// NaN when undefined (all oscillations zero).
    double alpha_hat = std::numeric_limits<double>::quiet_NaN();
    double seminorm_hat = 0.0;
    bool alpha_defined = false;
    /// Dyadic lower ends r; pairs have |x - y| in [r, 2r).
    std::vector<double> scales;
    /// S(r) = max |u(x) - u(y)| over sampled pairs at scale r.
    std::vector<double> oscillation;
    /// Scales entering the regression (the finest ones).
    std::size_t fitted_scales = 0;
    /// RMS residual of the log-log regression.
    double residual = 0.0;
};

struct HolderOptions {
    std::uint64_t seed = 1;
    int random_pairs = 10000;
    int min_scales = 4;
    int max_scales = 6;
    /// Scales below this many grid spacings are discarded.
    double floor_cells = 4.0;
    /// With a fixed exponent the seminorm is max S(r) / r^alpha over the fitted scales.
    std::optional<double> fixed_alpha;
};

namespace detail {

/// Least squares y = a x + b.
inline std::array<double, 3> line_fit(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double a = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double b = (sy - a * sx) / n;
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) rss += std::pow(y[i] - a * x[i] - b, 2);
    return {a, b, std::sqrt(rss / n)};
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace detail

/// Fits log S(r) = alpha log r + log C over dyadic scales inside `region`.
template <int N>
HolderFit holder_fit(const GridFunction<N>& u, const DomainSpec<N>& region, const HolderOptions& opt = {})
{
    const auto& g = u.grid();
    const double h = g.h();
    std::vector<std::size_t> nodes;
    for (std::size_t k = 0; k < u.size(); ++k)
        if (region.contains(g.position(k))) nodes.push_back(k);
    if (nodes.empty()) throw InsufficientScales("region contains no grid nodes");

    HolderFit fit;
    // separations up to the inradius, so that the coarsest scale is not
    // saturated by the region's own size
    const double reach = region.inradius();
    for (double r = opt.floor_cells * h; 2.0 * r <= reach * (1.0 + 1e-12); r *= 2.0) fit.scales.push_back(r);
    if (static_cast<int>(fit.scales.size()) < opt.min_scales)
        throw InsufficientScales("grid too coarse for the required number of dyadic scales");
    fit.oscillation.assign(fit.scales.size(), 0.0);

    auto scale_of = [&](double dist) -> int {
        if (dist < fit.scales.front()) return -1;
        const int j = static_cast<int>(std::floor(std::log2(dist / fit.scales.front()) + 1e-12));
        return j < static_cast<int>(fit.scales.size()) ? j : -1;
    };

    // axis pairs
    for (std::size_t k : nodes) {
        const auto idx = g.index_of(k);
        for (int i = 0; i < N; ++i) {
            auto jdx = idx;
            for (long m = 1;; ++m) {
                jdx[i] = idx[i] + m;
                const double dist = m * h;
                if (dist >= 2.0 * fit.scales.back() || !g.in_range(jdx)) break;
                const std::size_t q = g.flat(jdx);
                if (!region.contains(g.position(q))) continue;
                const int sc = scale_of(dist);
                if (sc < 0) continue;
                fit.oscillation[sc] = std::max(fit.oscillation[sc], std::abs(u[k] - u[q]));
            }
        }
    }
    // random pairs: random node, random displacement, interpolated partner
    std::mt19937_64 rng(opt.seed);
    for (std::size_t sc = 0; sc < fit.scales.size(); ++sc) {
        const double r = fit.scales[sc];
        int done = 0, attempts = 0;
        while (done < opt.random_pairs && attempts < 50 * opt.random_pairs) {
            ++attempts;
            const std::size_t k = nodes[rng() % nodes.size()];
            const Point<N> x = g.position(k);
            Point<N> dir{};
            if constexpr (N == 1) {
                dir[0] = detail::uniform01(rng) < 0.5 ? -1.0 : 1.0;
            } else {
                // uniform on the sphere by rejection from the cube
                double nn = 0.0;
                while (!(nn > 1e-3 && nn <= 1.0)) {
                    for (auto& c : dir) c = 2.0 * detail::uniform01(rng) - 1.0;
                    nn = norm<N>(dir);
                }
                dir = (1.0 / nn) * dir;
            }
            const double dist = r * (1.0 + detail::uniform01(rng));
            const Point<N> y = x + dist * dir;
            if (!region.contains(y)) continue;
            fit.oscillation[sc] = std::max(fit.oscillation[sc], std::abs(u[k] - u.interpolate(y)));
            ++done;
        }
    }

    const std::size_t nfit = std::min<std::size_t>(fit.scales.size(), static_cast<std::size_t>(opt.max_scales));
    fit.fitted_scales = nfit;
    std::vector<double> lx, ly;
    bool any_zero = false;
    for (std::size_t i = 0; i < nfit; ++i) {
        if (fit.oscillation[i] <= 0.0) any_zero = true;
        lx.push_back(std::log(fit.scales[i]));
        ly.push_back(std::log(fit.oscillation[i]));
    }
    if (opt.fixed_alpha) {
        fit.alpha_hat = *opt.fixed_alpha;
        fit.alpha_defined = true;
        for (std::size_t i = 0; i < nfit; ++i)
            fit.seminorm_hat = std::max(fit.seminorm_hat, fit.oscillation[i] / std::pow(fit.scales[i], *opt.fixed_alpha));
        return fit;
    }
    if (any_zero) {
        // constant (or locally constant) data: no exponent to report
        double m = 0.0;
        for (std::size_t i = 0; i < nfit; ++i) m = std::max(m, fit.oscillation[i]);
        fit.seminorm_hat = m;
        return fit;
    }
    const auto [a, b, res] = detail::line_fit(lx, ly);
    fit.alpha_hat = a;
    fit.alpha_defined = true;
    fit.seminorm_hat = std::exp(b);
    fit.residual = res;
    return fit;
}

/// max over node pairs in `region` of |u(x) - u(y)| / |x - y|^alpha.
template <int N>
double holder_seminorm(const GridFunction<N>& u, const DomainSpec<N>& region, double alpha)
{
    const auto& g = u.grid();
    std::vector<std::size_t> nodes;
    for (std::size_t k = 0; k < u.size(); ++k)
        if (region.contains(g.position(k))) nodes.push_back(k);
    double m = 0.0;
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        const Point<N> x = g.position(nodes[a]);
        for (std::size_t b = a + 1; b < nodes.size(); ++b) {
            const double dist = norm<N>(x - g.position(nodes[b]));
            m = std::max(m, std::abs(u[nodes[a]] - u[nodes[b]]) / std::pow(dist, alpha));
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Barrier

enum class BarrierMode {
    /// Full operator of the closed-form d^alpha by quadrature and direction search.
    quadrature,
    /// Discrete operator I_h of the sampled d^alpha; nodes with d < h are skipped.
    discrete,
};

template <int N>
struct BarrierNode {
    Point<N> x;
    double distance;
    double product;
};

template <int N>
struct BarrierReport {
    double s = 0.0;
    double alpha = 0.0;
    double mu = 0.0;
    double h = 0.0;
    /// -max product; meaningful when all_negative.
    double m_hat = 0.0;
    bool all_negative = false;
    /// alpha = s, where the products tend to 0 at the boundary.
    bool boundary_case = false;
    BarrierNode<N> worst{};
    std::vector<BarrierNode<N>> nodes;
};

struct BarrierOptions {
    BarrierMode mode = BarrierMode::quadrature;
    OperatorOptions op{};
    StencilOptions stencil{};
    /// Throw BarrierViolation on a nonnegative product (never for alpha = s).
    bool strict = true;
};

/// Products d^(2s - alpha) I d^alpha at grid nodes of the strip d < mu.
template <int N>
BarrierReport<N> barrier_check(const DomainSpec<N>& domain, double s, double alpha, double mu, double h,
                               const BarrierOptions& opt = {})
{
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0,1)");
    if (!(alpha > 0.0 && alpha <= s)) throw DomainError("barrier exponent must lie in (0, s]");
    if (!(mu > 0.0)) throw DomainError("strip width must be positive");
    BarrierReport<N> rep;
    rep.s = s;
    rep.alpha = alpha;
    rep.mu = mu;
    rep.h = h;
    rep.boundary_case = std::abs(alpha - s) < 1e-12;

    const GridFunction<N> grid(domain, h);
    const auto& g = grid.grid();
    const DistancePower<N> dp{domain, alpha};
    std::vector<double> discrete;
    if (opt.mode == BarrierMode::discrete) {
        if constexpr (N <= 2) {
            const auto u = GridFunction<N>::sample(domain, h, dp);
            StencilOptions so = opt.stencil;
            DiscreteIsaacs<N> op(g, domain, s, so);
            op.apply(u, discrete);
        } else {
            throw DomainError("discrete barrier mode is implemented for N <= 2");
        }
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!grid.inside(k)) continue;
        const Point<N> x = g.position(k);
        const double d = domain.distance(x);
        if (!(d < mu)) continue;
        double value;
        if (opt.mode == BarrierMode::discrete) {
            if (d < h) continue;
            value = discrete[k];
        } else {
            value = isaacs_operator<N>(dp, x, s, opt.op).value;
        }
        const BarrierNode<N> node{x, d, std::pow(d, 2.0 * s - alpha) * value};
        rep.nodes.push_back(node);
        if (node.product > worst) {
            worst = node.product;
            rep.worst = node;
        }
    }
    if (rep.nodes.empty()) throw InsufficientScales("no grid nodes in the boundary strip");
    rep.m_hat = -worst;
    rep.all_negative = worst < 0.0;
    if (!rep.all_negative && opt.strict && !rep.boundary_case)
        throw BarrierViolation("nonnegative barrier product in the boundary strip");
    return rep;
}

struct ExtremalLimit {
    /// Products at delta, delta/2, delta/4.
    std::array<double, 3> products{};
    double delta = 0.0;
    /// Product at the smallest delta.
    double estimate = 0.0;
    /// Geometric-rate extrapolation of the three products (equals estimate if not monotone).
    double extrapolated = 0.0;
    /// |nu . xi|^(2s) l(alpha)
    double expected = 0.0;
};

/// d^(2s - alpha) I_xi d^alpha along x = xbar + delta nu, delta -> 0.
template <int N>
ExtremalLimit extremal_limit_check(const DomainSpec<N>& domain, double s, double alpha, const Point<N>& xbar,
                                   const Direction<N>& xi, double delta = 4e-3,
                                   quad::QuadratureSpec spec = quad::QuadratureSpec::sweep())
{
    const Direction<N> nu = domain.inner_normal(xbar);
    const DistancePower<N> dp{domain, alpha};
    ExtremalLimit out;
    out.delta = delta;
    double dl = delta;
    for (int i = 0; i < 3; ++i, dl *= 0.5) {
        const Point<N> x = xbar + dl * nu.vec();
        const double d = domain.distance(x);
        out.products[i] = std::pow(d, 2.0 * s - alpha) * directional_operator<N>(dp, x, xi, s, spec).value;
    }
    const auto& p = out.products;
    out.estimate = p[2];
    const double d1 = p[0] - p[1], d2 = p[1] - p[2];
    out.extrapolated = p[2];
    if (d1 != 0.0 && d2 / d1 > 0.0 && d2 / d1 < 1.0) out.extrapolated = p[2] - d2 * (d2 / d1) / (1.0 - d2 / d1);
    out.expected = std::pow(std::abs(dot<N>(nu.vec(), xi.vec())), 2.0 * s) * eval_l(s, alpha).value;
    return out;
}

// ---------------------------------------------------------------------------
// Liouville rescaling

struct LiouvilleRow {
    double R = 0.0;
    double h = 0.0;
    /// Hoelder quotient of u_R over the unit window B_{1/2}, exponent alpha_ref.
    double seminorm = 0.0;
    double sup_norm = 0.0;
    /// Free exponent fitted on B_{R/2}, when enough scales fit.
    std::optional<double> alpha_hat;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct LiouvilleTable {
    double s = 0.0;
    double alpha_ref = 0.0;
    std::vector<LiouvilleRow> rows;
    /// -slope of log seminorm against log R (positive means decay).
    double decay_exponent = std::numeric_limits<double>::quiet_NaN();
    bool monotone_decay = false;
};

struct LiouvilleOptions {
    /// Fixed absolute spacing for every R.
    double h = 1.0 / 16;
    int directions = 64;
    double tol = 1e-8;
    /// V-cycle cap per radius; a radius that misses tol is reported unconverged.
    int max_cycles = 400;
    /// Default s / 2.
    std::optional<double> alpha_ref;
    /// Bump amplitude; 0 gives the zero-data control.
    double amplitude = 1.0;
    Point<2> bump_center{0.3, 0.1};
    double bump_width = 0.3;
    std::uint64_t seed = 1;
};

/// For R in radii solve I u = f_R on B_R with f_R(x) = R^-2s F(x/R), so that
/// v(x) = u(Rx) solves the same problem I v = F on B_1 at every R, and
/// tabulate the Hoelder quotient of u over the fixed window B_{1/2}.
inline LiouvilleTable liouville_experiment(double s, const std::vector<double>& radii, const LiouvilleOptions& opt = {})
{
    LiouvilleTable tab;
    tab.s = s;
    tab.alpha_ref = opt.alpha_ref.value_or(0.5 * s);
    const DomainSpec<2> window(Ball<2>{{0.0, 0.0}, 0.5});
    for (double R : radii) {
        SolveConfig<2> cfg;
        cfg.s = s;
        cfg.domain = DomainSpec<2>(Ball<2>{{0.0, 0.0}, R});
        cfg.h = opt.h;
        cfg.directions = opt.directions;
        cfg.tol = opt.tol * std::pow(R, -2.0 * s);
        cfg.max_iter = opt.max_cycles;
        const double amp = opt.amplitude, w2 = opt.bump_width * opt.bump_width;
        const Point<2> c = opt.bump_center;
        cfg.f = [=](const Point<2>& x) {
            const Point<2> y = (1.0 / R) * x - c;
            return -amp * std::pow(R, -2.0 * s) * std::exp(-dot<2>(y, y) / w2);
        };
        const auto rep = solve(cfg);
        LiouvilleRow row;
        row.R = R;
        row.h = opt.h;
        row.iterations = rep.iterations;
        row.converged = rep.converged;
        row.sup_norm = rep.solution.sup_norm();
        row.seminorm = holder_seminorm<2>(rep.solution, window, tab.alpha_ref);
        try {
            HolderOptions ho;
            ho.seed = opt.seed;
            const auto fit = holder_fit<2>(rep.solution, DomainSpec<2>(Ball<2>{{0.0, 0.0}, 0.5 * R}), ho);
            if (fit.alpha_defined) {
                row.alpha_hat = fit.alpha_hat;
                row.residual = fit.residual;
            }
        } catch (const InsufficientScales&) {
        }
        tab.rows.push_back(row);
    }
    tab.monotone_decay = tab.rows.size() >= 2;
    for (std::size_t i = 1; i < tab.rows.size(); ++i)
        if (!(tab.rows[i].seminorm < tab.rows[i - 1].seminorm)) tab.monotone_decay = false;
    std::vector<double> lx, ly;
    for (const auto& r : tab.rows)
        if (r.seminorm > 0.0) {
            lx.push_back(std::log(r.R));
            ly.push_back(std::log(r.seminorm));
        }
    if (lx.size() >= 2 && lx.size() == tab.rows.size()) tab.decay_exponent = -detail::line_fit(lx, ly)[0];
    return tab;
}

} // namespace isaacs

#endif
