#include "orbit/reduce.hpp"

#include <algorithm>
#include <stdexcept>

namespace orbit {
namespace {

AlgNum zero() { return AlgNum(Rat(0)); }
AlgNum one() { return AlgNum(Rat(1)); }

bool vec_zero(const AlgVec& v, int from, int to) {
    for (int i = from; i < to; ++i)
        if (!v[i].is_zero()) return false;
    return true;
}

bool vec_equal(const AlgVec& a, const AlgVec& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

// z_c = 0 for every coordinate c in coords, as real/imaginary equations
SemialgFormula coords_zero(int d, const std::vector<int>& coords) {
    std::vector<SemialgFormula> eqs;
    for (int c : coords) {
        eqs.push_back(SemialgFormula::atom(d, MPoly::var(2 * d, 2 * c), Rel::Eq));
        eqs.push_back(SemialgFormula::atom(d, MPoly::var(2 * d, 2 * c + 1), Rel::Eq));
    }
    return SemialgFormula::conj(d, std::move(eqs));
}

// |z_c|^2 != 0 as a single atom
SemialgFormula coord_nonzero(int d, int c) {
    MPoly p = MPoly::var(2 * d, 2 * c) * MPoly::var(2 * d, 2 * c) +
              MPoly::var(2 * d, 2 * c + 1) * MPoly::var(2 * d, 2 * c + 1);
    return SemialgFormula::atom(d, std::move(p), Rel::Ne);
}

std::vector<AlgVec> orbit_prefix_points(const OrbitInstance& inst, int n) {
    std::vector<AlgVec> pts;
    AlgVec v = inst.x;
    for (int i = 0; i < n; ++i) {
        pts.push_back(v);
        v = mat_vec_mul(inst.A, v);
    }
    return pts;
}

OrbitInstance restrict_instance(const OrbitInstance& inst, const std::vector<int>& removed) {
    std::vector<bool> drop(inst.d, false);
    for (int c : removed) drop[c] = true;
    std::vector<int> kept;
    for (int i = 0; i < inst.d; ++i)
        if (!drop[i]) kept.push_back(i);
    AlgMat A;
    AlgVec x, y;
    for (int i : kept) {
        AlgVec row;
        for (int j : kept) row.push_back(inst.A[i][j]);
        A.push_back(std::move(row));
        x.push_back(inst.x[i]);
        y.push_back(inst.y[i]);
    }
    if (kept.empty()) return {{}, {}, {}, 0};
    return make_instance(std::move(A), std::move(x), std::move(y));
}

}  // namespace

std::vector<JordanBlockDesc> jordan_blocks_of(const AlgMat& A) {
    int d = (int)A.size();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (i == j || (j == i + 1)) continue;
            if (!A[i][j].is_zero())
                throw std::invalid_argument("matrix is not in Jordan normal form");
        }
    std::vector<JordanBlockDesc> blocks;
    int first = 0;
    for (int i = 0; i < d; ++i) {
        bool chained = i + 1 < d && !A[i][i + 1].is_zero();
        if (chained) {
            if (A[i][i + 1] != one() || A[i][i] != A[i + 1][i + 1])
                throw std::invalid_argument("matrix is not in Jordan normal form");
        } else {
            blocks.push_back({A[first][first], i - first + 1, first});
            first = i + 1;
        }
    }
    return blocks;
}

NormalizeOutcome normalize(const OrbitInstance& input) {
    NormalizeOutcome out;
    out.status = NormalizeOutcome::Status::Reduced;

    OrbitInstance inst = input;
    std::vector<JordanBlockDesc> blocks = jordan_blocks_of(inst.A);
    const int d0 = input.d;

    // y among the first d orbit points => reachable
    {
        AlgVec v = inst.x;
        for (int n = 0; n < d0; ++n) {
            if (vec_equal(v, inst.y)) {
                out.status = NormalizeOutcome::Status::Reachable;
                out.reachable_n = n;
                return out;
            }
            v = mat_vec_mul(inst.A, v);
        }
    }

    auto early = [&](SemialgFormula f, bool closed) {
        out.status = NormalizeOutcome::Status::EarlyInvariant;
        out.invariant = std::move(f);
        out.closed_invariant = closed;
        return out;
    };
    auto block_coords = [](const JordanBlockDesc& b, int from = 0) {
        std::vector<int> cs;
        for (int i = from; i < b.size; ++i) cs.push_back(b.first + i);
        return cs;
    };

    // 1. zero-eigenvalue (nilpotent) blocks
    {
        std::vector<int> removed;
        for (const auto& b : blocks) {
            if (!b.eigenvalue.is_zero()) continue;
            if (!vec_zero(inst.y, b.first, b.first + b.size)) {
                auto pts = orbit_prefix_points(inst, inst.d);
                return early(
                    SemialgFormula::disj(inst.d, {SemialgFormula::point_set(inst.d, pts),
                                                  coords_zero(inst.d, block_coords(b))}),
                    true);
            }
            for (int c : block_coords(b)) removed.push_back(c);
        }
        if (!removed.empty()) {
            AlgVec v = inst.x;
            for (int n = 0; n < inst.d; ++n) v = mat_vec_mul(inst.A, v);
            inst.x = std::move(v);  // A^d x, before restriction
            ReductionStep step{ReductionStep::Kind::NilpotentDropBlocks, removed, inst.d};
            inst = restrict_instance(inst, removed);
            out.trace.push_back(std::move(step));
            if (inst.d == 0) {
                // everything was nilpotent and y = 0 = A^d x
                out.status = NormalizeOutcome::Status::Reachable;
                out.reachable_n = d0;
                out.trace.clear();
                return out;
            }
            blocks = jordan_blocks_of(inst.A);
        }
    }

    // 2. blocks where x_J or y_J vanishes
    {
        std::vector<int> removed;
        for (const auto& b : blocks) {
            bool xz = vec_zero(inst.x, b.first, b.first + b.size);
            bool yz = vec_zero(inst.y, b.first, b.first + b.size);
            if (xz && !yz) return early(coords_zero(inst.d, block_coords(b)), true);
            if (!xz && yz) {
                int k = b.size - 1;
                while (inst.x[b.first + k].is_zero()) --k;
                std::vector<SemialgFormula> parts{coord_nonzero(inst.d, b.first + k)};
                if (k + 1 < b.size)
                    parts.push_back(coords_zero(inst.d, block_coords(b, k + 1)));
                return early(SemialgFormula::conj(inst.d, std::move(parts)), false);
            }
            if (xz && yz)
                for (int c : block_coords(b)) removed.push_back(c);
        }
        if (!removed.empty()) {
            out.trace.push_back({ReductionStep::Kind::DropZeroBlocks, removed});
            inst = restrict_instance(inst, removed);
            blocks = jordan_blocks_of(inst.A);
        }
    }

    // 3. non-diagonal blocks with x supported on the first coordinate only
    {
        std::vector<int> removed;
        for (const auto& b : blocks) {
            if (b.size == 1) continue;
            bool xz = vec_zero(inst.x, b.first + 1, b.first + b.size);
            if (!xz) continue;
            bool yz = vec_zero(inst.y, b.first + 1, b.first + b.size);
            if (!yz) return early(coords_zero(inst.d, block_coords(b, 1)), true);
            for (int c : block_coords(b, 1)) removed.push_back(c);
        }
        if (!removed.empty()) {
            out.trace.push_back({ReductionStep::Kind::DropTailCoordinates, removed});
            inst = restrict_instance(inst, removed);
            blocks = jordan_blocks_of(inst.A);
        }
    }

    out.reduced = std::move(inst);
    out.reduced_blocks = std::move(blocks);
    return out;
}

// ----- lifting -----

namespace {

// Re-express a formula over the pre-removal coordinate space. Removed
// coordinates are pinned to zero when pin_zero, otherwise left unconstrained
// (point sets then expand into equations over the kept coordinates).
SemialgFormula embed_node(const FormulaNode& n, int big_d, const std::vector<int>& kept,
                          bool pin_zero) {
    int small_d = (int)kept.size();
    switch (n.kind) {
        case FormulaNode::Kind::Atom: {
            std::vector<MPoly> repl;
            for (int j = 0; j < small_d; ++j) {
                repl.push_back(MPoly::var(2 * big_d, 2 * kept[j]));
                repl.push_back(MPoly::var(2 * big_d, 2 * kept[j] + 1));
            }
            return SemialgFormula::atom(big_d, n.poly.substitute(repl), n.rel);
        }
        case FormulaNode::Kind::And:
        case FormulaNode::Kind::Or: {
            std::vector<SemialgFormula> kids;
            for (const auto& k : n.kids) kids.push_back(embed_node(*k, big_d, kept, pin_zero));
            return n.kind == FormulaNode::Kind::And
                       ? SemialgFormula::conj(big_d, std::move(kids))
                       : SemialgFormula::disj(big_d, std::move(kids));
        }
        case FormulaNode::Kind::Not:
            return SemialgFormula::negation(embed_node(*n.kids[0], big_d, kept, pin_zero));
        case FormulaNode::Kind::Points: {
            if (pin_zero) {
                std::vector<AlgVec> pts;
                for (const auto& p : n.points) {
                    AlgVec q(big_d, AlgNum(Rat(0)));
                    for (int j = 0; j < small_d; ++j) q[kept[j]] = p[j];
                    pts.push_back(std::move(q));
                }
                return SemialgFormula::point_set(big_d, std::move(pts));
            }
            // free coordinates: expand into equations over the kept coordinates
            std::vector<SemialgFormula> alts;
            for (const auto& p : n.points) {
                std::vector<SemialgFormula> eqs;
                for (int j = 0; j < small_d; ++j) {
                    auto [re, im] = re_im(p[j]);
                    eqs.push_back(SemialgFormula::atom(
                        big_d,
                        MPoly::var(2 * big_d, 2 * kept[j]) - MPoly::constant(2 * big_d, re),
                        Rel::Eq));
                    eqs.push_back(SemialgFormula::atom(
                        big_d,
                        MPoly::var(2 * big_d, 2 * kept[j] + 1) - MPoly::constant(2 * big_d, im),
                        Rel::Eq));
                }
                alts.push_back(SemialgFormula::conj(big_d, std::move(eqs)));
            }
            return SemialgFormula::disj(big_d, std::move(alts));
        }
    }
    throw std::logic_error("unreachable");
}

SemialgFormula embed(const SemialgFormula& f, int big_d, const std::vector<int>& removed,
                     bool pin_zero) {
    std::vector<bool> drop(big_d, false);
    for (int c : removed) {
        if (c < 0 || c >= big_d) throw std::invalid_argument("trace/context mismatch");
        drop[c] = true;
    }
    std::vector<int> kept;
    for (int i = 0; i < big_d; ++i)
        if (!drop[i]) kept.push_back(i);
    if ((int)kept.size() != f.dim()) throw std::invalid_argument("trace/context mismatch");
    std::vector<SemialgFormula> parts{embed_node(*f.root(), big_d, kept, pin_zero)};
    if (pin_zero) parts.push_back(coords_zero(big_d, removed));
    return SemialgFormula::conj(big_d, std::move(parts));
}

}  // namespace

SemialgFormula lift_invariant(const SemialgFormula& f, const std::vector<ReductionStep>& trace,
                              const OrbitInstance& context) {
    // replay forward to recover the instance seen before each step
    std::vector<OrbitInstance> states{context};
    for (const auto& step : trace) {
        OrbitInstance cur = states.back();
        switch (step.kind) {
            case ReductionStep::Kind::NilpotentDropBlocks: {
                AlgVec v = cur.x;
                for (int n = 0; n < cur.d; ++n) v = mat_vec_mul(cur.A, v);
                cur.x = std::move(v);
                break;
            }
            case ReductionStep::Kind::DropZeroBlocks:
            case ReductionStep::Kind::DropTailCoordinates:
                break;
            default:
                throw std::invalid_argument("trace contains a non-reducing step");
        }
        states.push_back(restrict_instance(cur, step.removed_coordinates));
    }
    if (states.back().d != f.dim()) throw std::invalid_argument("trace/context mismatch");

    SemialgFormula g = f;
    for (int i = (int)trace.size() - 1; i >= 0; --i) {
        const auto& step = trace[i];
        const OrbitInstance& pre = states[i];
        bool pin_zero = step.kind != ReductionStep::Kind::NilpotentDropBlocks;
        g = embed(g, pre.d, step.removed_coordinates, pin_zero);
        if (step.kind == ReductionStep::Kind::NilpotentDropBlocks) {
            auto pts = orbit_prefix_points(pre, step.prefix_length);
            g = SemialgFormula::disj(pre.d,
                                     {SemialgFormula::point_set(pre.d, std::move(pts)), g});
        }
    }
    return g;
}

}  // namespace orbit
