#pragma once

#include <vector>

#include "orbit/rational.hpp"

namespace orbit {

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

// LLL reduction (delta = 3/4) of a linearly independent integer row basis.
IntMat lll_reduce(IntMat basis);

// Canonical basis of the lattice spanned by the given rows: row-style Hermite
// normal form with positive pivots, entries above each pivot reduced into
// [0, pivot), zero rows removed. Rows may be dependent.
IntMat hnf_basis(IntMat rows);

// Whether v lies in the lattice spanned by an HNF basis.
bool hnf_contains(const IntMat& hnf, const IntVec& v);

}  // namespace orbit
