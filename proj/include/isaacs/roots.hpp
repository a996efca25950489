#ifndef ISAACS_ROOTS_HPP
#define ISAACS_ROOTS_HPP

#include "isaacs/errors.hpp"

#include <cmath>
#include <string>

namespace isaacs {

/// A root together with the sign-change certificate that produced it.
struct RootBracket {
    double root = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
    int evaluations = 0;
    /// Largest quadrature error estimate seen while evaluating F.
    double max_error = 0.0;

    double width() const { return hi - lo; }
    bool certified() const { return f_lo * f_hi < 0.0; }
};

/// Plain bisection on [lo, hi]. `eval(x)` returns an object with `.value`
/// and `.error_estimate`. Stops when the bracket is narrower than `width_tol`.
template <class Eval>
RootBracket bisect(const Eval& eval, double lo, double hi, double width_tol, int max_iter = 200)
{
    RootBracket b;
    b.lo = lo;
    b.hi = hi;
    auto rlo = eval(lo);
    auto rhi = eval(hi);
    b.evaluations = 2;
    b.f_lo = rlo.value;
    b.f_hi = rhi.value;
    b.max_error = std::max(rlo.error_estimate, rhi.error_estimate);
    if (!(b.f_lo * b.f_hi < 0.0))
        throw BracketFailure("bisect: no sign change on [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
    for (int it = 0; it < max_iter && b.hi - b.lo >= width_tol; ++it) {
        const double mid = 0.5 * (b.lo + b.hi);
        if (mid <= b.lo || mid >= b.hi) break;
        auto r = eval(mid);
        ++b.evaluations;
        b.max_error = std::max(b.max_error, r.error_estimate);
        if (r.value == 0.0) {
            b.lo = b.hi = mid;
            b.f_lo = b.f_hi = 0.0;
            break;
        }
        if ((r.value < 0.0) == (b.f_lo < 0.0)) {
            b.lo = mid;
            b.f_lo = r.value;
        } else {
            b.hi = mid;
            b.f_hi = r.value;
        }
    }
    b.root = 0.5 * (b.lo + b.hi);
    return b;
}

} // namespace isaacs

#endif
