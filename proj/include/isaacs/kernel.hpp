#ifndef ISAACS_KERNEL_HPP
#define ISAACS_KERNEL_HPP

#include "isaacs/errors.hpp"

#include <cmath>
#include <numbers>

namespace isaacs {

/// C_s = 4^s Gamma(s+1/2) / (sqrt(pi) |Gamma(-s)|). With this constant the
/// one-sided directional integral equals -(-d^2/dt^2)^s along the line and
/// tends to the second directional derivative as s -> 1.
inline double normalizing_constant(double s)
{
    if (!(s > 0.0 && s < 1.0)) throw DomainError("normalizing_constant: s must lie in (0,1)");
    // |Gamma(-s)| = Gamma(1-s)/s
    return s * std::pow(4.0, s) * std::tgamma(s + 0.5) /
           (std::sqrt(std::numbers::pi) * std::tgamma(1.0 - s));
}

} // namespace isaacs

#endif
