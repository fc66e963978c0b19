#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbit/algnum.hpp"
#include "orbit/lattice.hpp"
#include "orbit/linalg.hpp"

namespace orbit {

// Case split on the eigenvalues of a normalized Jordan-form instance.
struct CaseTag {
    enum class Kind {
        HasModulusGreaterOne,
        HasModulusLessOne,
        ModOneNonDiagonal,
        ModOneDiagonal,
    };
    Kind kind;
    int block = -1;  // index into the block list; -1 for ModOneDiagonal
};

// Basis of the group of verified multiplicative relations among eigenvalues:
// every basis vector v satisfies lambda_1^{v_1} ... lambda_d^{v_d} = 1 exactly.
// Completeness is relative to exponent_bound.
struct RelationLattice {
    IntMat basis;  // Hermite normal form, canonical
    long exponent_bound = 0;
};

// Torus element mapping x to y coordinatewise: mu_i = y_i / x_i with
// |mu_i| = 1 and mu^v = 1 for every lattice basis vector.
struct TorusWitness {
    AlgVec mu;
};

// First applicable: |lambda| > 1 block, |lambda| < 1 block, non-diagonal
// block, else all eigenvalues have modulus one and the matrix is diagonal.
CaseTag classify(const std::vector<JordanBlockDesc>& blocks);

// Exact check of lambda_1^{v_1} ... lambda_d^{v_d} = 1.
bool verify_relation(const std::vector<AlgNum>& eigs, const IntVec& v);

// Basis of the relations with coordinates bounded by exponent_bound, for
// eigenvalues of modulus one. Root-of-unity orders are found exactly;
// further candidates come from integer lattice reduction on high-precision
// argument approximations, each candidate verified exactly; small search
// regions are saturated exhaustively.
RelationLattice relation_lattice(const std::vector<AlgNum>& eigs, long exponent_bound);

// Whether y = diag(mu) x for some mu on the torus cut out by the lattice.
// Requires all x_i != 0. On failure, *reason (if given) names the exact
// disqualifying check.
std::optional<TorusWitness> closure_membership(const AlgVec& x, const AlgVec& y,
                                               const std::vector<AlgNum>& eigs,
                                               const RelationLattice& lattice,
                                               std::string* reason = nullptr);

}  // namespace orbit
