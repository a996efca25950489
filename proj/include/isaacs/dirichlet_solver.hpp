#ifndef ISAACS_DIRICHLET_SOLVER_HPP
#define ISAACS_DIRICHLET_SOLVER_HPP

// I u = f in the domain, u = 0 outside, for N = 1, 2.
//
// The discrete solution is the fixed point of the monotone update
//   u <- u + dt (I_h u - f),   dt * Lambda_h <= 1,
// at interior nodes. `explicit` iterates that update alone; `multigrid`
// uses it as the smoother of a full-approximation-scheme V-cycle on grids
// h, 2h, 4h, ... over the same bounding box, which reaches the same fixed
// point in far fewer fine-grid sweeps.

#include "isaacs/discrete_operator.hpp"
#include "isaacs/errors.hpp"
#include "isaacs/geometry.hpp"
#include "isaacs/grid.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace isaacs {

enum class SolveMethod { multigrid, explicit_euler };

template <int N>
struct SolveConfig {
    double s = 0.9;
    DomainSpec<N> domain = DomainSpec<N>::unit_ball();
    double h = 1.0 / 64;
    int directions = 64;
    /// 0 picks 0.9 / Lambda_h.
    double dt = 0.0;
    double tol = 1e-8;
    int max_iter = 200000;
    std::function<double(const Point<N>&)> f = [](const Point<N>&) { return 0.0; };
    bool normalized = false;
    SolveMethod method = SolveMethod::multigrid;
    double rho = 0.1;
    double near_scale = 0.0;
    int pre_smooth = 2;
    int post_smooth = 2;
    /// Coarsening stops once a level has fewer cells than this along an axis.
    long coarsest_cells = 8;
    /// Anderson mixing depth over V-cycles; 0 takes plain V-cycles.
    int anderson = 5;

    void validate() const
    {
        if (!(s > 0.0 && s < 1.0)) throw ConfigError("s must lie in (0,1)");
        if (!(h > 0.0)) throw ConfigError("h must be positive");
        if (!(tol > 0.0)) throw ConfigError("tol must be positive");
        if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
        if (directions < 1) throw ConfigError("directions must be >= 1");
        if (anderson < 0) throw ConfigError("anderson must be >= 0");
        if (dt < 0.0) throw ConfigError("dt must be >= 0");
        if (!f) throw ConfigError("source f is missing");
    }
};

template <int N>
struct SolveReport {
    GridFunction<N> solution;
    double residual = 0.0;
    /// Fine-grid sweeps (explicit) or V-cycles (multigrid).
    int iterations = 0;
    std::vector<double> history;
    bool converged = false;
    double lipschitz = 0.0;
    double dt = 0.0;
    std::string method;
};

namespace detail {

template <int N>
struct Level {
    GridFunction<N> u;
    std::vector<double> f;
    std::unique_ptr<DiscreteIsaacs<N>> op;
    double dt = 0.0;
    mutable std::vector<double> work;
};

template <int N>
double residual_into(const Level<N>& L, std::vector<double>& r)
{
    L.op->apply(L.u, L.work);
    r.assign(L.u.size(), 0.0);
    double m = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k)
        if (L.u.inside(k)) {
            r[k] = L.f[k] - L.work[k];
            m = std::max(m, std::abs(r[k]));
        }
    return m;
}

/// One explicit sweep; returns the residual sup-norm before the update.
template <int N>
double smooth_once(Level<N>& L)
{
    L.op->apply(L.u, L.work);
    auto& v = L.u.mutable_values();
    double m = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k)
        if (L.u.inside(k)) {
            const double res = L.work[k] - L.f[k];
            m = std::max(m, std::abs(res));
            v[k] += L.dt * res;
        }
    return m;
}

/// Coarse index I sits at fine index 2I.
template <int N>
void inject(const GridFunction<N>& fine, GridFunction<N>& coarse)
{
    auto& c = coarse.mutable_values();
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (!coarse.inside(k)) continue;
        auto idx = coarse.grid().index_of(k);
        for (auto& i : idx) i *= 2;
        c[k] = fine[fine.grid().flat(idx)];
    }
}

/// Full weighting with the tensor stencil (1/4, 1/2, 1/4).
template <int N>
void restrict_full(const Grid<N>& fine, const std::vector<double>& r, const GridFunction<N>& coarse,
                   std::vector<double>& out)
{
    out.assign(coarse.size(), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (!coarse.inside(k)) continue;
        const auto idx = coarse.grid().index_of(k);
        double sum = 0.0;
        for (int corner = 0; corner < static_cast<int>(std::pow(3, N)); ++corner) {
            std::array<long, N> f{};
            double w = 1.0;
            int c = corner;
            for (int i = 0; i < N; ++i) {
                const int o = c % 3 - 1;
                c /= 3;
                f[i] = 2 * idx[i] + o;
                w *= o == 0 ? 0.5 : 0.25;
            }
            if (fine.in_range(f)) sum += w * r[fine.flat(f)];
        }
        out[k] = sum;
    }
}

/// Multilinear prolongation, added at fine interior nodes.
template <int N>
void prolong_add(const Grid<N>& coarse, const std::vector<double>& e, GridFunction<N>& fine)
{
    auto& v = fine.mutable_values();
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!fine.inside(k)) continue;
        const auto idx = fine.grid().index_of(k);
        double sum = 0.0;
        for (int corner = 0; corner < (1 << N); ++corner) {
            std::array<long, N> c{};
            double w = 1.0;
            bool ok = true;
            for (int i = 0; i < N; ++i) {
                const long half = idx[i] / 2;
                if (idx[i] % 2 == 0) {
                    if (corner & (1 << i)) ok = false;
                    c[i] = half;
                } else {
                    c[i] = half + ((corner >> i) & 1);
                    w *= 0.5;
                }
            }
            if (ok && coarse.in_range(c)) sum += w * e[coarse.flat(c)];
        }
        v[k] += sum;
    }
}

} // namespace detail

template <int N>
class DirichletSolver {
public:
    explicit DirichletSolver(SolveConfig<N> cfg) : cfg_(std::move(cfg))
    {
        static_assert(N == 1 || N == 2, "the solver supports N = 1 and N = 2");
        cfg_.validate();
        StencilOptions so;
        so.directions = cfg_.directions;
        so.rho = cfg_.rho;
        so.near_scale = cfg_.near_scale;
        so.normalized = cfg_.normalized;

        double h = cfg_.h;
        for (;;) {
            auto L = std::make_unique<detail::Level<N>>();
            L->u = GridFunction<N>(cfg_.domain, h);
            L->f.assign(L->u.size(), 0.0);
            L->op = std::make_unique<DiscreteIsaacs<N>>(L->u.grid(), cfg_.domain, cfg_.s, so);
            L->dt = 0.9 / L->op->lipschitz();
            levels_.push_back(std::move(L));
            if (cfg_.method != SolveMethod::multigrid) break;
            const auto& g = levels_.back()->u.grid();
            bool can = true;
            for (int i = 0; i < N; ++i)
                if (g.cells(i) % 2 != 0 || g.cells(i) / 2 < cfg_.coarsest_cells) can = false;
            if (!can) break;
            h *= 2.0;
        }
        auto& fine = *levels_.front();
        if (cfg_.dt > 0.0) {
            if (cfg_.dt * fine.op->lipschitz() > 1.0)
                throw CFLViolation("dt * Lambda_h exceeds 1; the update would not be monotone");
            fine.dt = cfg_.dt;
        }
        for (std::size_t k = 0; k < fine.u.size(); ++k)
            if (fine.u.inside(k)) fine.f[k] = cfg_.f(fine.u.grid().position(k));
    }

    double lipschitz() const { return levels_.front()->op->lipschitz(); }
    std::size_t level_count() const { return levels_.size(); }
    const DiscreteIsaacs<N>& discrete_operator() const { return *levels_.front()->op; }

    SolveReport<N> solve()
    {
        SolveReport<N> rep;
        auto& fine = *levels_.front();
        rep.lipschitz = fine.op->lipschitz();
        rep.dt = fine.dt;
        std::vector<double> r;
        if (levels_.size() == 1) {
            rep.method = "explicit";
            for (int it = 0; it < cfg_.max_iter; ++it) {
                const double m = detail::smooth_once(fine);
                if (it % 50 == 0) rep.history.push_back(m);
                if (m <= cfg_.tol) {
                    rep.converged = true;
                    rep.iterations = it;
                    break;
                }
                rep.iterations = it + 1;
            }
        } else {
            rep.method = "multigrid";
            nested_start();
            Mixer mix(cfg_.anderson);
            for (int it = 0; it < cfg_.max_iter; ++it) {
                const double m = detail::residual_into(fine, r);
                rep.history.push_back(m);
                if (m <= cfg_.tol) {
                    rep.converged = true;
                    break;
                }
                const std::vector<double> x = fine.u.values();
                vcycle(0);
                if (cfg_.anderson > 0) mix.step(x, fine.u.mutable_values());
                rep.iterations = it + 1;
            }
        }
        rep.residual = detail::residual_into(fine, r);
        if (rep.method == "explicit") rep.history.push_back(rep.residual);
        rep.converged = rep.residual <= cfg_.tol;
        rep.solution = fine.u;
        return rep;
    }

private:
    /// Anderson acceleration of the fixed-point map x -> G(x) (one V-cycle).
    class Mixer {
    public:
        explicit Mixer(int depth) : depth_(depth) {}

        /// `gx` holds G(x) on entry and the mixed iterate on return.
        void step(const std::vector<double>& x, std::vector<double>& gx)
        {
            const Eigen::Index n = static_cast<Eigen::Index>(x.size());
            const Eigen::Map<const Eigen::VectorXd> X(x.data(), n);
            Eigen::Map<Eigen::VectorXd> G(gx.data(), n);
            const Eigen::VectorXd g = G - X;
            if (have_) {
                dx_.push_back(X - x_prev_);
                dg_.push_back(g - g_prev_);
                if (static_cast<int>(dx_.size()) > depth_) {
                    dx_.erase(dx_.begin());
                    dg_.erase(dg_.begin());
                }
            }
            x_prev_ = X;
            g_prev_ = g;
            have_ = true;
            if (dg_.empty()) return;
            const Eigen::Index m = static_cast<Eigen::Index>(dg_.size());
            Eigen::MatrixXd A(n, m);
            for (Eigen::Index j = 0; j < m; ++j) A.col(j) = dg_[static_cast<std::size_t>(j)];
            const Eigen::VectorXd gamma = A.colPivHouseholderQr().solve(g);
            for (Eigen::Index j = 0; j < m; ++j)
                G -= gamma(j) * (dx_[static_cast<std::size_t>(j)] + dg_[static_cast<std::size_t>(j)]);
        }

    private:
        int depth_;
        bool have_ = false;
        Eigen::VectorXd x_prev_, g_prev_;
        std::vector<Eigen::VectorXd> dx_, dg_;
    };

    void vcycle(std::size_t l)
    {
        auto& L = *levels_[l];
        if (l + 1 == levels_.size()) {
            solve_coarsest(L);
            return;
        }
        auto& C = *levels_[l + 1];
        for (int i = 0; i < cfg_.pre_smooth; ++i) detail::smooth_once(L);
        std::vector<double> r, rc;
        detail::residual_into(L, r);
        detail::inject(L.u, C.u);
        const std::vector<double> u0 = C.u.values();
        detail::restrict_full(L.u.grid(), r, C.u, rc);
        C.op->apply(C.u, C.work);
        for (std::size_t k = 0; k < C.f.size(); ++k) C.f[k] = C.u.inside(k) ? C.work[k] + rc[k] : 0.0;
        vcycle(l + 1);
        std::vector<double> e(C.u.size());
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = C.u[k] - u0[k];
        detail::prolong_add(C.u.grid(), e, L.u);
        for (int i = 0; i < cfg_.post_smooth; ++i) detail::smooth_once(L);
    }

    void solve_coarsest(detail::Level<N>& L)
    {
        const double target = 0.01 * cfg_.tol;
        for (int it = 0; it < 100000; ++it)
            if (detail::smooth_once(L) <= target) break;
    }

    /// Solve on the coarsest grid first, then interpolate upward with one V-cycle per level.
    void nested_start()
    {
        for (std::size_t l = 0; l + 1 < levels_.size(); ++l) {
            auto& F = *levels_[l];
            auto& C = *levels_[l + 1];
            for (std::size_t k = 0; k < C.f.size(); ++k)
                if (C.u.inside(k)) {
                    auto idx = C.u.grid().index_of(k);
                    for (auto& i : idx) i *= 2;
                    C.f[k] = F.f[F.u.grid().flat(idx)];
                }
        }
        for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) {
            auto& L = **it;
            std::fill(L.u.mutable_values().begin(), L.u.mutable_values().end(), 0.0);
        }
        std::vector<std::vector<double>> fs;
        for (auto& L : levels_) fs.push_back(L->f);
        solve_coarsest(*levels_.back());
        for (std::size_t l = levels_.size() - 1; l-- > 0;) {
            auto& F = *levels_[l];
            auto& C = *levels_[l + 1];
            detail::prolong_add(C.u.grid(), C.u.values(), F.u);
            // coarse right-hand sides are overwritten by the V-cycle; restore them below
            vcycle(l);
            for (std::size_t m = l + 1; m < levels_.size(); ++m) levels_[m]->f = fs[m];
        }
    }

    SolveConfig<N> cfg_;
    std::vector<std::unique_ptr<detail::Level<N>>> levels_;
};

template <int N>
SolveReport<N> solve(const SolveConfig<N>& cfg)
{
    DirichletSolver<N> solver(cfg);
    return solver.solve();
}

/// I_h u at one interior node, with the solver's stencil.
template <int N>
double discrete_operator(const GridFunction<N>& u, std::size_t node, const SolveConfig<N>& cfg)
{
    StencilOptions so;
    so.directions = cfg.directions;
    so.rho = cfg.rho;
    so.near_scale = cfg.near_scale;
    so.normalized = cfg.normalized;
    const DiscreteIsaacs<N> op(u.grid(), u.domain(), cfg.s, so);
    return op.apply_at(u, node).value;
}

/// sup over interior nodes of |u| / d^alpha.
template <int N>
double verify_boundary_growth(const SolveReport<N>& rep, double alpha)
{
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    const auto& u = rep.solution;
    double m = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!u.inside(k)) continue;
        const double d = u.domain().distance(u.grid().position(k));
        m = std::max(m, std::abs(u[k]) / std::pow(d, alpha));
    }
    return m;
}

} // namespace isaacs

#endif
