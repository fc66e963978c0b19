#pragma once

#include <utility>
#include <vector>

#include "orbit/poly.hpp"

namespace orbit {

// Factors p over Q into monic irreducible factors with multiplicities.
// The product of factor^multiplicity equals p up to a rational unit.
std::vector<std::pair<RatPoly, int>> factor_poly(const RatPoly& p);

bool is_irreducible(const RatPoly& p);

}  // namespace orbit
