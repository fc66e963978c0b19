#pragma once

#include <vector>

#include "orbit/algnum.hpp"

namespace orbit {

using AlgVec = std::vector<AlgNum>;
using AlgMat = std::vector<std::vector<AlgNum>>;
using RatMat = std::vector<std::vector<Rat>>;

AlgMat alg_mat(const RatMat& m);
AlgVec alg_vec(const std::vector<Rat>& v);
AlgMat mat_identity(int d);
AlgMat mat_mul(const AlgMat& a, const AlgMat& b);
AlgVec mat_vec_mul(const AlgMat& a, const AlgVec& v);
// Gauss-Jordan inverse; throws std::invalid_argument on a singular matrix.
AlgMat mat_inverse(const AlgMat& a);
bool mat_equal(const AlgMat& a, const AlgMat& b);

bool is_rational_mat(const AlgMat& a);
RatMat to_rational_mat(const AlgMat& a);

}  // namespace orbit
