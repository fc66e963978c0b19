#pragma once

#include "orbit/matrix.hpp"

namespace orbit {

struct OrbitInstance {
    AlgMat A;
    AlgVec x, y;
    int d = 0;
};

OrbitInstance make_instance(AlgMat A, AlgVec x, AlgVec y);
OrbitInstance make_instance(const RatMat& A, const std::vector<Rat>& x, const std::vector<Rat>& y);

struct JordanBlockDesc {
    AlgNum eigenvalue;
    int size = 0;
    int first = 0;  // coordinate range [first, first + size)
};

struct JordanDecomposition {
    std::vector<JordanBlockDesc> blocks;
    AlgMat Q;     // Jordan coordinates:  J = Q A Qinv
    AlgMat Qinv;  // columns are the Jordan chain vectors
};

// det(tI - A); requires rational entries.
RatPoly char_poly(const AlgMat& A);

// Jordan normal form with exact change of basis, plus the conjugated instance
// (Q A Qinv, Qx, Qy). Internal identities (chain relations, ranks, Q*Qinv = I
// per block) are verified exactly; a mismatch throws.
std::pair<JordanDecomposition, OrbitInstance> jordan_decompose(const OrbitInstance& inst);

// (Q A Q^{-1}, Qx, Qy); throws on singular Q.
OrbitInstance conjugate_instance(const OrbitInstance& inst, const AlgMat& Q);

}  // namespace orbit
