#include "orbit/linalg.hpp"

#include <algorithm>
#include <stdexcept>

#include "orbit/factor.hpp"
#include "orbit/roots.hpp"

namespace orbit {
namespace {

// ----- matrices with entries in a fixed number field (generator reps) -----

using FVec = std::vector<RatPoly>;
using FMat = std::vector<FVec>;

FMat f_identity(int d) {
    FMat m(d, FVec(d));
    for (int i = 0; i < d; ++i) m[i][i] = RatPoly::constant(Rat(1));
    return m;
}

FMat f_mul(const NumberField& F, const FMat& a, const FMat& b) {
    int n = (int)a.size(), k = (int)b.size(), mm = (int)b[0].size();
    FMat out(n, FVec(mm));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < mm; ++j) {
            RatPoly s;
            for (int t = 0; t < k; ++t) s = F.add(s, F.mul(a[i][t], b[t][j]));
            out[i][j] = s;
        }
    return out;
}

FVec f_apply(const NumberField& F, const FMat& a, const FVec& v) {
    FVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        RatPoly s;
        for (size_t t = 0; t < v.size(); ++t) s = F.add(s, F.mul(a[i][t], v[t]));
        out[i] = s;
    }
    return out;
}

// In-place reduced row echelon form; returns pivot column indices.
std::vector<int> f_rref(const NumberField& F, FMat& m) {
    std::vector<int> pivots;
    int rows = (int)m.size();
    int cols = rows ? (int)m[0].size() : 0;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (!m[i][c].is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[piv], m[r]);
        RatPoly inv = F.inverse(m[r][c]);
        for (int j = c; j < cols; ++j) m[r][j] = F.mul(m[r][j], inv);
        for (int i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            RatPoly f = m[i][c];
            for (int j = c; j < cols; ++j) m[i][j] = F.sub(m[i][j], F.mul(f, m[r][j]));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

// Deterministic kernel basis of a square matrix, one vector per free column
// in increasing column order.
std::vector<FVec> f_kernel(const NumberField& F, FMat m) {
    int d = (int)m.size();
    auto pivots = f_rref(F, m);
    std::vector<int> pivot_of_col(d, -1);
    for (int i = 0; i < (int)pivots.size(); ++i) pivot_of_col[pivots[i]] = i;
    std::vector<FVec> basis;
    for (int c = 0; c < d; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        FVec v(d);
        v[c] = RatPoly::constant(Rat(1));
        for (int i = 0; i < (int)pivots.size(); ++i) v[pivots[i]] = F.sub(RatPoly(), m[i][c]);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Incremental independence tracking over a number field.
struct FEchelon {
    const NumberField& F;
    FMat rows;
    std::vector<int> piv;

    explicit FEchelon(const NumberField& f) : F(f) {}

    // Returns false if v is in the current span; otherwise adds it.
    bool insert(FVec v) {
        for (size_t i = 0; i < rows.size(); ++i) {
            const RatPoly& c = v[piv[i]];
            if (c.is_zero()) continue;
            RatPoly f = c;
            for (size_t j = 0; j < v.size(); ++j) v[j] = F.sub(v[j], F.mul(f, rows[i][j]));
        }
        int p = -1;
        for (size_t j = 0; j < v.size(); ++j)
            if (!v[j].is_zero()) {
                p = (int)j;
                break;
            }
        if (p < 0) return false;
        RatPoly inv = F.inverse(v[p]);
        for (auto& e : v) e = F.mul(e, inv);
        rows.push_back(std::move(v));
        piv.push_back(p);
        return true;
    }
};

// ----- rational helpers -----

Rat tr(const RatMat& m) {
    Rat s(0);
    for (size_t i = 0; i < m.size(); ++i) s += m[i][i];
    return s;
}

RatMat rat_mul(const RatMat& a, const RatMat& b) {
    int d = (int)a.size();
    RatMat out(d, std::vector<Rat>(d, Rat(0)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int t = 0; t < d; ++t) out[i][j] += a[i][t] * b[t][j];
    return out;
}

// Canonical order on separated root boxes.
bool box_before(const Box& a, const Box& b) {
    if (a.re_lo != b.re_lo) return a.re_lo < b.re_lo;
    return a.im_lo < b.im_lo;
}

// Jordan data for one irreducible factor, computed at one designated root and
// reused verbatim at its conjugates (the reps are Galois-equivariant).
struct FactorJordan {
    RatPoly g;
    int mult;
    std::vector<NumberField::Ptr> root_fields;  // canonical root order; empty for deg-1 factors
    Rat rational_root;                          // deg-1 factors only
    std::vector<int> chain_heights;             // descending
    std::vector<FVec> columns;                  // all chain columns, chain-major, v_1..v_h each
    FMat coeff_rows;                            // mult x d rows of Q for this eigenvalue
};

FactorJordan jordan_for_factor(const RatMat& A, const RatPoly& f, const RatPoly& g, int mult,
                               const std::vector<RatMat>& Apow) {
    const int d = (int)A.size();
    FactorJordan out;
    out.g = g;
    out.mult = mult;

    NumberField::Ptr F;
    RatPoly lam;
    if (g.degree() == 1) {
        F = NumberField::rationals();
        out.rational_root = -g.coeff(0);
        lam = RatPoly::constant(out.rational_root);
    } else {
        auto roots = isolate_roots(g);
        Rat sep_sq = root_separation_sq_lower_bound(g);
        for (auto& rt : roots)
            while (rt.box.width() * rt.box.width() * 9 > sep_sq) rt.box = refine_root_box(g, rt.box);
        std::sort(roots.begin(), roots.end(),
                  [](const IsolatedRoot& a, const IsolatedRoot& b) { return box_before(a.box, b.box); });
        for (const auto& rt : roots) out.root_fields.push_back(NumberField::make(g, rt.box));
        F = out.root_fields.front();
        lam = RatPoly::variable();
    }

    // N = A - lambda I and its powers, over F = Q(lambda)
    FMat N(d, FVec(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            N[i][j] = RatPoly::constant(A[i][j]);
            if (i == j) N[i][j] = F->sub(N[i][j], lam);
        }
    std::vector<FMat> Npow{f_identity(d)};
    std::vector<std::vector<FVec>> kernels{{}};  // ker N^0 = 0
    int p = 0;
    while ((int)kernels.back().size() < mult) {
        Npow.push_back(f_mul(*F, Npow.back(), N));
        kernels.push_back(f_kernel(*F, Npow.back()));
        ++p;
        if (p > mult) throw std::logic_error("jordan: generalized eigenspace dimension mismatch");
    }

    // Chain tops, longest chains first.
    struct Chain {
        int height;
        FVec top;
    };
    std::vector<Chain> chains;
    std::vector<FVec> down;
    for (int j = p; j >= 1; --j) {
        FEchelon E(*F);
        for (const auto& b : kernels[j - 1]) E.insert(b);
        for (const auto& v : down)
            if (!E.insert(v)) throw std::logic_error("jordan: dependent chain vector");
        std::vector<FVec> new_tops;
        for (const auto& b : kernels[j])
            if (E.insert(b)) {
                chains.push_back({j, b});
                new_tops.push_back(b);
            }
        std::vector<FVec> next;
        for (const auto& v : down) next.push_back(f_apply(*F, N, v));
        for (const auto& v : new_tops) next.push_back(f_apply(*F, N, v));
        down = std::move(next);
    }
    int total = 0;
    for (const auto& c : chains) total += c.height;
    if (total != mult) throw std::logic_error("jordan: chain sizes do not sum to multiplicity");

    for (const auto& c : chains) {
        out.chain_heights.push_back(c.height);
        std::vector<FVec> cols(c.height);
        cols[c.height - 1] = c.top;
        for (int i = c.height - 2; i >= 0; --i) cols[i] = f_apply(*F, N, cols[i + 1]);
        // chain relations, verified exactly: N v_1 = 0, N v_{i+1} = v_i
        FVec z = f_apply(*F, N, cols[0]);
        for (const auto& e : z)
            if (!e.is_zero()) throw std::logic_error("jordan: eigenvector relation failed");
        for (auto& col : cols) out.columns.push_back(std::move(col));
    }

    // Spectral projector e(t): e == 1 mod (t-lambda)^mult, e == 0 mod f/(t-lambda)^mult.
    // The cofactor must be taken over Q(lambda), so conjugate roots of g are
    // separated as well.
    FieldPoly a = {RatPoly::constant(Rat(1))};
    {
        FieldPoly lin = {F->sub(RatPoly(), lam), RatPoly::constant(Rat(1))};  // t - lambda
        for (int i = 0; i < mult; ++i) a = fpoly_mul(*F, a, lin);
    }
    FieldPoly b;
    for (int i = 0; i <= f.degree(); ++i) b.push_back(RatPoly::constant(f.coeff(i)));
    {
        auto [quot, rem] = fpoly_divmod(*F, b, a);
        for (const auto& c : rem)
            if (!c.is_zero()) throw std::logic_error("jordan: (t-lambda)^m does not divide charpoly");
        b = std::move(quot);
    }
    // extended Euclid tracking the cofactor of b
    FieldPoly r0 = a, r1 = b, t0 = {}, t1 = {RatPoly::constant(Rat(1))};
    while (!r1.empty()) {
        auto [q, r2] = fpoly_divmod(*F, r0, r1);
        FieldPoly t2 = fpoly_sub(*F, t0, fpoly_mul(*F, q, t1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.size() != 1) throw std::logic_error("jordan: projector gcd not constant");
    RatPoly scale = F->inverse(r0[0]);
    FieldPoly e = fpoly_mul(*F, t0, b);
    for (auto& c : e) c = F->mul(c, scale);

    // E = e(A), entrywise in F, from precomputed rational powers of A.
    FMat E(d, FVec(d));
    for (size_t k = 0; k < e.size(); ++k) {
        if (e[k].is_zero()) continue;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                E[i][j] = F->add(E[i][j], F->reduce(e[k] * Apow[k][i][j]));
    }

    // Solve V C = E for C (mult x d): rows of Q belonging to this eigenvalue.
    FMat aug(d, FVec(mult + d));
    for (int i = 0; i < d; ++i) {
        for (int c = 0; c < mult; ++c) aug[i][c] = out.columns[c][i];
        for (int j = 0; j < d; ++j) aug[i][mult + j] = E[i][j];
    }
    auto pivots = f_rref(*F, aug);
    if ((int)pivots.size() != mult) throw std::logic_error("jordan: chain matrix rank deficient");
    for (int c = 0; c < mult; ++c)
        if (pivots[c] != c) throw std::logic_error("jordan: projector image escapes chain span");
    out.coeff_rows.assign(mult, FVec(d));
    for (int i = 0; i < mult; ++i)
        for (int j = 0; j < d; ++j) out.coeff_rows[i][j] = aug[i][mult + j];
    // C V = I, verified exactly
    FMat V(d, FVec(mult));
    for (int i = 0; i < d; ++i)
        for (int c = 0; c < mult; ++c) V[i][c] = out.columns[c][i];
    FMat CV = f_mul(*F, out.coeff_rows, V);
    for (int i = 0; i < mult; ++i)
        for (int j = 0; j < mult; ++j) {
            bool diag = (i == j);
            if (CV[i][j] != (diag ? RatPoly::constant(Rat(1)) : RatPoly()))
                throw std::logic_error("jordan: coordinate rows are not a left inverse");
        }
    return out;
}

std::vector<Rat> rational_vec(const AlgVec& v, const char* what) {
    std::vector<Rat> out;
    for (const auto& e : v) {
        if (!e.is_rational()) throw std::invalid_argument(std::string(what) + " must be rational");
        out.push_back(e.as_rational());
    }
    return out;
}

}  // namespace

OrbitInstance make_instance(AlgMat A, AlgVec x, AlgVec y) {
    int d = (int)A.size();
    if (d == 0) throw std::invalid_argument("empty matrix");
    for (const auto& row : A)
        if ((int)row.size() != d) throw std::invalid_argument("matrix must be square");
    if ((int)x.size() != d || (int)y.size() != d)
        throw std::invalid_argument("vector dimension mismatch");
    return {std::move(A), std::move(x), std::move(y), d};
}

OrbitInstance make_instance(const RatMat& A, const std::vector<Rat>& x, const std::vector<Rat>& y) {
    return make_instance(alg_mat(A), alg_vec(x), alg_vec(y));
}

RatPoly char_poly(const AlgMat& A) {
    int d = (int)A.size();
    for (const auto& row : A)
        if ((int)row.size() != d) throw std::invalid_argument("char_poly: matrix must be square");
    if (!is_rational_mat(A)) throw std::invalid_argument("char_poly: entries must be rational");
    RatMat a = to_rational_mat(A);
    // Faddeev–LeVerrier
    std::vector<Rat> c(d + 1, Rat(0));
    c[d] = Rat(1);
    RatMat M(d, std::vector<Rat>(d, Rat(0)));
    for (int k = 1; k <= d; ++k) {
        for (int i = 0; i < d; ++i) M[i][i] += c[d - k + 1];
        M = rat_mul(a, M);
        c[d - k] = -tr(M) / k;
    }
    return RatPoly(std::move(c));
}

std::pair<JordanDecomposition, OrbitInstance> jordan_decompose(const OrbitInstance& inst) {
    const int d = inst.d;
    if (!is_rational_mat(inst.A))
        throw std::invalid_argument("jordan_decompose: matrix entries must be rational");
    RatMat A = to_rational_mat(inst.A);
    std::vector<Rat> x = rational_vec(inst.x, "jordan_decompose: x");
    std::vector<Rat> y = rational_vec(inst.y, "jordan_decompose: y");

    RatPoly f = char_poly(inst.A);
    auto factors = factor_poly(f);

    std::vector<RatMat> Apow{RatMat(d, std::vector<Rat>(d, Rat(0)))};
    for (int i = 0; i < d; ++i) Apow[0][i][i] = Rat(1);
    for (int k = 1; k < d; ++k) Apow.push_back(rat_mul(Apow.back(), A));

    std::vector<FactorJordan> per_factor;
    for (const auto& [g, mult] : factors) per_factor.push_back(jordan_for_factor(A, f, g, mult, Apow));

    // One group per eigenvalue, ordered canonically: refine all root boxes
    // until pairwise disjoint, then sort by (re_lo, im_lo).
    struct EigGroup {
        const FactorJordan* fj;
        NumberField::Ptr F;
        AlgNum lam;
        Box key;
    };
    std::vector<EigGroup> groups;
    for (const auto& fj : per_factor) {
        if (fj.g.degree() == 1) {
            groups.push_back({&fj, NumberField::rationals(), AlgNum(fj.rational_root),
                              Box::point(fj.rational_root)});
        } else {
            for (const auto& F : fj.root_fields)
                groups.push_back({&fj, F, AlgNum::in_field(F, RatPoly::variable()),
                                  F->generator_box()});
        }
    }
    for (bool again = true; again;) {
        again = false;
        for (size_t i = 0; i < groups.size(); ++i)
            for (size_t j = i + 1; j < groups.size(); ++j)
                if (groups[i].key.intersects(groups[j].key)) {
                    groups[i].key = refine_root_box(groups[i].fj->g, groups[i].key);
                    groups[j].key = refine_root_box(groups[j].fj->g, groups[j].key);
                    again = true;
                }
    }
    std::sort(groups.begin(), groups.end(), [](const EigGroup& a, const EigGroup& b) {
        return box_before(a.key, b.key);
    });

    JordanDecomposition dec;
    dec.Q.assign(d, AlgVec(d, AlgNum(Rat(0))));
    dec.Qinv.assign(d, AlgVec(d, AlgNum(Rat(0))));
    AlgMat J(d, AlgVec(d, AlgNum(Rat(0))));
    AlgVec xj(d, AlgNum(Rat(0))), yj(d, AlgNum(Rat(0)));

    int pos = 0;
    for (const auto& grp : groups) {
        const FactorJordan& fj = *grp.fj;
        const NumberField::Ptr& F = grp.F;
        int col = 0;  // index into fj.columns / coeff_rows
        for (int h : fj.chain_heights) {
            JordanBlockDesc blk{grp.lam, h, pos};
            for (int i = 0; i < h; ++i) {
                int c = pos + i;
                J[c][c] = grp.lam;
                if (i + 1 < h) J[c][c + 1] = AlgNum(Rat(1));
                for (int r = 0; r < d; ++r)
                    dec.Qinv[r][c] = AlgNum::in_field(F, fj.columns[col][r]);
                RatPoly xs, ys;
                for (int j = 0; j < d; ++j) {
                    xs = F->add(xs, F->reduce(fj.coeff_rows[col][j] * x[j]));
                    ys = F->add(ys, F->reduce(fj.coeff_rows[col][j] * y[j]));
                    dec.Q[c][j] = AlgNum::in_field(F, fj.coeff_rows[col][j]);
                }
                xj[c] = AlgNum::in_field(F, xs);
                yj[c] = AlgNum::in_field(F, ys);
                ++col;
            }
            dec.blocks.push_back(blk);
            pos += h;
        }
    }
    if (pos != d) throw std::logic_error("jordan: block sizes do not sum to dimension");

    return {std::move(dec), make_instance(std::move(J), std::move(xj), std::move(yj))};
}

OrbitInstance conjugate_instance(const OrbitInstance& inst, const AlgMat& Q) {
    AlgMat Qinv = mat_inverse(Q);
    return make_instance(mat_mul(mat_mul(Q, inst.A), Qinv), mat_vec_mul(Q, inst.x),
                         mat_vec_mul(Q, inst.y));
}

}  // namespace orbit
