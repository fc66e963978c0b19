#pragma once

#include "orbit/formula.hpp"
#include "orbit/linalg.hpp"

namespace orbit {

// Reads the block structure off a matrix in Jordan normal form; throws if the
// matrix is not in that shape.
std::vector<JordanBlockDesc> jordan_blocks_of(const AlgMat& A);

struct ReductionStep {
    enum class Kind {
        NilpotentYNonzero,
        NilpotentDropBlocks,
        XZeroYNonzero,
        XNonzeroYZero,
        DropZeroBlocks,
        NonDiagFirstCoordYNonzero,
        DropTailCoordinates,
    };
    Kind kind;
    std::vector<int> removed_coordinates;  // in the pre-step coordinate indexing
    int prefix_length = 0;
    int block = -1;
    int k = -1;
};

struct NormalizeOutcome {
    enum class Status { EarlyInvariant, Reduced, Reachable };
    Status status;
    // EarlyInvariant
    SemialgFormula invariant;
    bool closed_invariant = true;
    // Reduced
    OrbitInstance reduced;
    std::vector<JordanBlockDesc> reduced_blocks;
    std::vector<ReductionStep> trace;
    // Reachable
    int reachable_n = -1;
};

// Normalization of a Jordan-form instance to a non-trivial one: no zero
// eigenvalue blocks, x_J != 0 and y_J != 0 for every block J, and x_{J,>1} != 0
// for every non-diagonal block. Degenerate configurations yield an invariant
// immediately; y found among x, Ax, ..., A^{d-1}x yields Reachable.
NormalizeOutcome normalize(const OrbitInstance& inst);

// Transforms an invariant for the reduced instance into one for the original
// instance by replaying the trace backwards: dropped zero blocks pin their
// coordinates to zero, the nilpotent drop frees its coordinates and unions
// the orbit prefix back in.
SemialgFormula lift_invariant(const SemialgFormula& f, const std::vector<ReductionStep>& trace,
                              const OrbitInstance& context);

}  // namespace orbit
