#include "orbit/spectral.hpp"

#include <mpfr.h>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace orbit {
namespace {

// arg(z) / (2*pi) in [0, 1) rounded to p fractional bits, from a rational
// enclosure of z tight enough that the rounding error stays below 2^-p.
Int scaled_argument(const AlgNum& z, long p) {
    Rat w = Rat(1) / (Rat(Int(1) << (unsigned long)(p + 16)));
    Box b = z.enclosure(w);
    mpfr_t re, im, th, twopi;
    mpfr_inits2(p + 64, re, im, th, twopi, (mpfr_ptr) nullptr);
    mpfr_set_q(re, Rat(b.mid_re()).get_mpq_t(), MPFR_RNDN);
    mpfr_set_q(im, Rat(b.mid_im()).get_mpq_t(), MPFR_RNDN);
    mpfr_atan2(th, im, re, MPFR_RNDN);
    mpfr_const_pi(twopi, MPFR_RNDN);
    mpfr_mul_2si(twopi, twopi, 1, MPFR_RNDN);
    mpfr_div(th, th, twopi, MPFR_RNDN);   // in (-1/2, 1/2]
    mpfr_mul_2si(th, th, p, MPFR_RNDN);
    mpfr_round(th, th);
    Int t;
    mpfr_get_z(t.get_mpz_t(), th, MPFR_RNDN);
    mpfr_clears(re, im, th, twopi, (mpfr_ptr) nullptr);
    return t;
}

bool in_bound(const IntVec& v, long bound) {
    bool nonzero = false;
    for (const auto& c : v) {
        if (cmp(abs(c), bound) > 0) return false;
        if (c != 0) nonzero = true;
    }
    return nonzero;
}

}  // namespace

CaseTag classify(const std::vector<JordanBlockDesc>& blocks) {
    for (size_t i = 0; i < blocks.size(); ++i)
        if (modulus_cmp_one(blocks[i].eigenvalue) == CmpOne::Greater)
            return {CaseTag::Kind::HasModulusGreaterOne, (int)i};
    for (size_t i = 0; i < blocks.size(); ++i)
        if (modulus_cmp_one(blocks[i].eigenvalue) == CmpOne::Less)
            return {CaseTag::Kind::HasModulusLessOne, (int)i};
    for (size_t i = 0; i < blocks.size(); ++i)
        if (blocks[i].size > 1) return {CaseTag::Kind::ModOneNonDiagonal, (int)i};
    return {CaseTag::Kind::ModOneDiagonal, -1};
}

bool verify_relation(const std::vector<AlgNum>& eigs, const IntVec& v) {
    if (v.size() != eigs.size()) throw std::invalid_argument("relation length mismatch");
    AlgNum prod{Rat(1)};
    for (size_t i = 0; i < eigs.size(); ++i) {
        if (v[i] == 0) continue;
        if (eigs[i].is_zero()) throw std::invalid_argument("zero eigenvalue in relation");
        if (!v[i].fits_slong_p()) throw std::invalid_argument("relation exponent too large");
        prod = prod * alg_pow(eigs[i], v[i].get_si());
    }
    return prod == AlgNum(Rat(1));
}

RelationLattice relation_lattice(const std::vector<AlgNum>& eigs, long exponent_bound) {
    const int d = (int)eigs.size();
    if (exponent_bound <= 0) throw std::invalid_argument("exponent bound must be positive");

    std::set<IntVec> verified;
    auto consider = [&](IntVec v) {
        if (!in_bound(v, exponent_bound) || verified.count(v)) return;
        if (verify_relation(eigs, v)) verified.insert(std::move(v));
    };
    auto unit = [&](int i, long c) {
        IntVec v(d, Int(0));
        v[i] = c;
        return v;
    };

    // exact shortcuts: root-of-unity orders, equal or inverse pairs
    for (int i = 0; i < d; ++i) {
        if (auto n = root_of_unity_order(eigs[i]); n && *n <= exponent_bound)
            consider(unit(i, *n));
        for (int j = i + 1; j < d; ++j) {
            if (eigs[i] == eigs[j]) {
                IntVec v = unit(i, 1);
                v[j] = -1;
                consider(std::move(v));
            }
            if (eigs[i] * eigs[j] == AlgNum(Rat(1))) {
                IntVec v = unit(i, 1);
                v[j] = 1;
                consider(std::move(v));
            }
        }
    }

    // lattice reduction on argument approximations, precision doubled until
    // the verified lattice stabilizes
    IntMat prev_hnf;
    for (long p : {64L, 128L, 256L, 512L}) {
        IntMat rows(d + 1, IntVec(d + 2, Int(0)));
        for (int i = 0; i < d; ++i) {
            rows[i][i] = 1;
            rows[i][d + 1] = scaled_argument(eigs[i], p);
        }
        rows[d][d] = 1;
        rows[d][d + 1] = Int(1) << (unsigned long)p;
        IntMat red = lll_reduce(rows);
        for (const auto& r : red) {
            IntVec v(r.begin(), r.begin() + d);
            consider(v);
            for (auto& c : v) c = -c;
            consider(std::move(v));
        }
        IntMat h = hnf_basis(IntMat(verified.begin(), verified.end()));
        if (h == prev_hnf) break;
        prev_hnf = std::move(h);
    }

    // exhaustive saturation when the bounded region is small
    double cells = 1;
    for (int i = 0; i < d; ++i) cells *= 2.0 * (double)exponent_bound + 1;
    if (cells <= 20000) {
        IntMat h = hnf_basis(IntMat(verified.begin(), verified.end()));
        bool any_zero = false;
        for (const auto& e : eigs) any_zero = any_zero || e.is_zero();
        IntVec v(d, Int(-exponent_bound));
        if (!any_zero) {
            // Walk the grid odometer-style with a running product so each step
            // costs one field multiplication instead of a fresh power ladder.
            std::vector<AlgNum> wrap;  // eigs[i]^(-2*exponent_bound)
            AlgNum prod = AlgNum(Rat(1));
            for (int i = 0; i < d; ++i) {
                wrap.push_back(alg_pow(eigs[i], -2 * exponent_bound));
                prod = prod * alg_pow(eigs[i], -exponent_bound);
            }
            const AlgNum one = AlgNum(Rat(1));
            while (true) {
                if (prod == one && !hnf_contains(h, v) && !verified.count(v))
                    verified.insert(v);
                int i = 0;
                while (i < d && v[i] == exponent_bound) {
                    v[i] = -exponent_bound;
                    prod = prod * wrap[i];
                    ++i;
                }
                if (i == d) break;
                v[i] += 1;
                prod = prod * eigs[i];
            }
        } else {
            while (true) {
                if (!hnf_contains(h, v)) consider(v);
                int i = 0;
                while (i < d && v[i] == exponent_bound) v[i++] = -exponent_bound;
                if (i == d) break;
                v[i] += 1;
            }
        }
    }

    RelationLattice out;
    out.basis = hnf_basis(IntMat(verified.begin(), verified.end()));
    out.exponent_bound = exponent_bound;
    return out;
}

std::optional<TorusWitness> closure_membership(const AlgVec& x, const AlgVec& y,
                                               const std::vector<AlgNum>& eigs,
                                               const RelationLattice& lattice,
                                               std::string* reason) {
    const size_t d = x.size();
    if (y.size() != d || eigs.size() != d)
        throw std::invalid_argument("dimension mismatch");
    AlgVec mu;
    for (size_t i = 0; i < d; ++i) {
        if (x[i].is_zero()) throw std::invalid_argument("x has a zero coordinate");
        if (x[i].norm_sq() != y[i].norm_sq()) {
            if (reason)
                *reason = "|y_" + std::to_string(i + 1) + "| differs from |x_" +
                          std::to_string(i + 1) + "|";
            return std::nullopt;
        }
        mu.push_back(y[i] / x[i]);
    }
    for (const auto& v : lattice.basis) {
        if (!verify_relation(mu, v)) {
            std::string rel;
            for (const auto& c : v) rel += (rel.empty() ? "(" : ", ") + Int(c).get_str();
            if (reason) *reason = "torus relation " + rel + ") violated by y/x";
            return std::nullopt;
        }
    }
    return TorusWitness{std::move(mu)};
}

}  // namespace orbit
