#pragma once

#include <vector>

#include "orbit/interval.hpp"
#include "orbit/poly.hpp"

namespace orbit {

struct IsolatedRoot {
    Box box;
    int multiplicity;
};

// Isolates all complex roots of p: pairwise-disjoint boxes, one distinct root
// each, multiplicities summing to deg(p). Real roots get boxes on the real
// axis; non-real roots get boxes strictly off it. Throws on the zero polynomial.
std::vector<IsolatedRoot> isolate_roots(const RatPoly& p);

// Exact number of roots of squarefree p strictly inside the box, computed by
// the argument principle with Cauchy indices along the boundary. The box must
// not be degenerate. Returns -1 if a root lies on (or the test is unsafe at)
// the boundary; callers nudge and retry.
int count_roots_rect(const RatPoly& p, const Box& box);

// Shrinks the isolating box of the unique root of squarefree p inside box.
// The result has at most half the width (point boxes are returned unchanged).
Box refine_root_box(const RatPoly& p, const Box& box);

}  // namespace orbit
