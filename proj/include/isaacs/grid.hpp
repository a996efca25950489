#ifndef ISAACS_GRID_HPP
#define ISAACS_GRID_HPP

#include "isaacs/errors.hpp"
#include "isaacs/geometry.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace isaacs {

/// Uniform Cartesian grid over the bounding box of a domain. Node
/// (i_0, ..., i_{N-1}) sits at lo + h*i; the last axis is contiguous.
template <int N>
class Grid {
public:
    Grid() = default;

    Grid(const Point<N>& lo, const Point<N>& hi, double h) : lo_(lo), h_(h)
    {
        if (!(h > 0.0)) throw DomainError("grid spacing must be positive");
        size_ = 1;
        for (int i = 0; i < N; ++i) {
            const double cells = (hi[i] - lo[i]) / h;
            n_[i] = static_cast<long>(std::ceil(cells - 1e-9));
            if (n_[i] < 2) throw DomainError("grid too coarse for the domain");
            size_ *= static_cast<std::size_t>(n_[i] + 1);
        }
        stride_[N - 1] = 1;
        for (int i = N - 2; i >= 0; --i) stride_[i] = stride_[i + 1] * (n_[i + 1] + 1);
    }

    double h() const { return h_; }
    const Point<N>& lo() const { return lo_; }
    /// Number of cells along axis i (nodes = cells + 1).
    long cells(int i) const { return n_[i]; }
    long nodes(int i) const { return n_[i] + 1; }
    long stride(int i) const { return stride_[i]; }
    std::size_t size() const { return size_; }

    std::array<long, N> index_of(std::size_t flat) const
    {
        std::array<long, N> idx{};
        for (int i = 0; i < N; ++i) {
            idx[i] = static_cast<long>(flat) / stride_[i];
            flat -= static_cast<std::size_t>(idx[i] * stride_[i]);
        }
        return idx;
    }

    std::size_t flat(const std::array<long, N>& idx) const
    {
        long f = 0;
        for (int i = 0; i < N; ++i) f += idx[i] * stride_[i];
        return static_cast<std::size_t>(f);
    }

    bool in_range(const std::array<long, N>& idx) const
    {
        for (int i = 0; i < N; ++i)
            if (idx[i] < 0 || idx[i] > n_[i]) return false;
        return true;
    }

    Point<N> position(const std::array<long, N>& idx) const
    {
        Point<N> x;
        for (int i = 0; i < N; ++i) x[i] = lo_[i] + h_ * static_cast<double>(idx[i]);
        return x;
    }

    Point<N> position(std::size_t flat_index) const { return position(index_of(flat_index)); }

private:
    Point<N> lo_{};
    double h_ = 1.0;
    std::array<long, N> n_{};
    std::array<long, N> stride_{};
    std::size_t size_ = 0;
};

/// Nodal values of u on the bounding-box grid of a domain. Nodes outside
/// the open domain hold exterior_value; evaluation off the grid is
/// multilinear inside the domain and exterior_value outside.
template <int N>
class GridFunction {
public:
    GridFunction() = default;

    GridFunction(const DomainSpec<N>& domain, double h, double exterior_value = 0.0)
        : domain_(domain),
          grid_(domain.bbox_lo(), domain.bbox_hi(), h),
          values_(grid_.size(), exterior_value),
          inside_(grid_.size(), 0),
          exterior_(exterior_value)
    {
        for (std::size_t k = 0; k < grid_.size(); ++k) inside_[k] = domain_.contains(grid_.position(k));
    }

    /// Samples f at interior nodes.
    template <class F>
    static GridFunction sample(const DomainSpec<N>& domain, double h, const F& f)
    {
        GridFunction g(domain, h);
        for (std::size_t k = 0; k < g.size(); ++k)
            if (g.inside_[k]) g.values_[k] = f(g.grid_.position(k));
        return g;
    }

    const DomainSpec<N>& domain() const { return domain_; }
    const Grid<N>& grid() const { return grid_; }
    double h() const { return grid_.h(); }
    std::size_t size() const { return values_.size(); }
    double exterior_value() const { return exterior_; }

    bool inside(std::size_t k) const { return inside_[k] != 0; }
    const std::vector<char>& inside_mask() const { return inside_; }

    double operator[](std::size_t k) const { return values_[k]; }
    /// Writes are ignored at exterior nodes so the exterior condition always holds.
    void set(std::size_t k, double v)
    {
        if (inside_[k]) values_[k] = v;
    }
    const std::vector<double>& values() const { return values_; }
    /// Raw access for bulk updates; callers keep exterior nodes at exterior_value.
    std::vector<double>& mutable_values() { return values_; }

    /// Node value by multi-index, exterior_value for indices outside the grid.
    double node(const std::array<long, N>& idx) const
    {
        return grid_.in_range(idx) ? values_[grid_.flat(idx)] : exterior_;
    }

    double value_at(const Point<N>& x) const
    {
        if (!domain_.contains(x)) return exterior_;
        return interpolate(x);
    }

    /// Multilinear interpolant of the nodal data (no domain test), the
    /// off-node rule of the discrete operator.
    double interpolate(const Point<N>& x) const
    {
        std::array<long, N> base{};
        std::array<double, N> frac{};
        for (int i = 0; i < N; ++i) {
            const double r = (x[i] - grid_.lo()[i]) / grid_.h();
            double f = std::floor(r);
            base[i] = static_cast<long>(f);
            frac[i] = r - f;
        }
        double sum = 0.0;
        for (int corner = 0; corner < (1 << N); ++corner) {
            double w = 1.0;
            std::array<long, N> idx = base;
            for (int i = 0; i < N; ++i) {
                if (corner & (1 << i)) {
                    w *= frac[i];
                    ++idx[i];
                } else {
                    w *= 1.0 - frac[i];
                }
            }
            if (w != 0.0) sum += w * node(idx);
        }
        return sum;
    }

    double sup_norm() const
    {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    DomainSpec<N> domain_;
    Grid<N> grid_;
    std::vector<double> values_;
    std::vector<char> inside_;
    double exterior_ = 0.0;
};

} // namespace isaacs

#endif
