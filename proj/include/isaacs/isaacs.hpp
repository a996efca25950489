#ifndef ISAACS_ISAACS_HPP
#define ISAACS_ISAACS_HPP

#include "isaacs/dirichlet_solver.hpp"
#include "isaacs/discrete_operator.hpp"
#include "isaacs/errors.hpp"
#include "isaacs/geometry.hpp"
#include "isaacs/grid.hpp"
#include "isaacs/io.hpp"
#include "isaacs/kernel.hpp"
#include "isaacs/nonlocal_operator.hpp"
#include "isaacs/profiles.hpp"
#include "isaacs/quadrature.hpp"
#include "isaacs/regularity.hpp"
#include "isaacs/roots.hpp"
#include "isaacs/thresholds.hpp"

#endif
