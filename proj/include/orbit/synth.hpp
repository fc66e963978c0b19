#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbit/formula.hpp"
#include "orbit/linalg.hpp"
#include "orbit/reduce.hpp"
#include "orbit/spectral.hpp"

namespace orbit {

// Case parameters: the threshold index and the driving coordinate.
struct SynthParams {
    long n0 = 0;
    int block = -1;  // index into the block list
    int k = -1;      // 1-based coordinate within the block
};

struct SynthConfig {
    long search_bound = 10000;   // reachability search in the torus case
    long exponent_bound = 64;    // relation-lattice completeness parameter
    long samples = 1000;         // verification sampling
    unsigned long seed = 1;
};

enum class Reachability { Reachable, Unreachable, UnreachableRelativeToClosure, Indeterminate };

struct ReachResult {
    Reachability status;
    long n = -1;        // Reachable
    long bound = -1;    // last index searched exhaustively
    std::string note;
};

struct SynthCertificate {
    enum class Verdict { Reachable, InvariantFound, NoInvariant };
    Verdict verdict;

    long reachable_n = -1;

    SemialgFormula invariant;         // original coordinates
    SemialgFormula jordan_invariant;  // Jordan coordinates, pre change of basis
    bool closed = false;
    std::optional<CaseTag> case_tag;  // empty when normalization settled it
    SynthParams params;

    RelationLattice lattice;  // torus case
    TorusWitness witness;     // NoInvariant
    ReachResult reachability{Reachability::Indeterminate};

    OrbitInstance instance;
    JordanDecomposition jordan;
    OrbitInstance jordan_instance;
    std::vector<ReductionStep> trace;
    OrbitInstance reduced_instance;  // valid when a case construction ran
    std::vector<JordanBlockDesc> reduced_blocks;
    std::vector<AlgVec> prefix_points;  // in reduced coordinates
};

// [x, Ax, ..., A^{n-1} x], exactly.
std::vector<AlgVec> orbit_prefix(const OrbitInstance& inst, long n);

// Square root of a non-negative real algebraic number.
AlgNum alg_sqrt(const AlgNum& s);

// A rational r with |lambda| <= r < 1 for |lambda| < 1; exact when |lambda|
// is rational. Deterministic, and rational on purpose: the tube constants
// built from it stay inside the eigenvalue's field.
Rat contraction_rate(const AlgNum& lambda);

// |lambda| > 1 on the given block: after n0 steps the last nonzero coordinate
// of x in the block has modulus strictly above |y|'s, and stays there.
std::pair<SemialgFormula, SynthParams> synth_divergent(const OrbitInstance& inst,
                                                       const std::vector<JordanBlockDesc>& blocks,
                                                       int block);

// |lambda| < 1: a shrinking tube |z_{J,k}|^2 <= ((1-|lambda|)^k |y_J|_inf)^2
// entered by the orbit at n0 and excluding y.
std::pair<SemialgFormula, SynthParams> synth_contracting(
    const OrbitInstance& inst, const std::vector<JordanBlockDesc>& blocks, int block);

// |lambda| = 1, non-diagonal block: modulus growth of coordinate k-1 plus the
// wedge <lambda z_{k-1}, z_k> >= 0.
std::pair<SemialgFormula, SynthParams> synth_nondiag(const OrbitInstance& inst,
                                                     const std::vector<JordanBlockDesc>& blocks,
                                                     int block);

// Diagonal modulus-one case: either y is on the torus orbit closure (witness,
// no invariant exists) or the closure itself as a formula.
struct ClosureSynthesis {
    std::optional<SemialgFormula> formula;
    std::optional<TorusWitness> witness;
    std::string reason;  // why y is off the closure, when formula is set
};
ClosureSynthesis synth_diag_closure(const OrbitInstance& inst, const RelationLattice& lattice);

// Exhaustive exact orbit search up to a structural bound derived from the
// case analysis; Indeterminate only in the torus case with y on the closure.
ReachResult decide_reachability(const OrbitInstance& inst, long search_bound);

// Full pipeline; throws std::runtime_error if the produced invariant fails
// independent verification.
SynthCertificate synthesize(const OrbitInstance& inst, const SynthConfig& config = {});

}  // namespace orbit
