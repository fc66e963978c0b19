#include "orbit/synth.hpp"

#include <numeric>
#include <stdexcept>

#include "orbit/factor.hpp"
#include "orbit/roots.hpp"
#include "orbit/verify.hpp"

namespace orbit {
namespace {

constexpr long kThresholdGuard = 1000000;

MPoly vre(int d, int c) { return MPoly::var(2 * d, 2 * c); }
MPoly vim(int d, int c) { return MPoly::var(2 * d, 2 * c + 1); }

// |z_c|^2 rel t
SemialgFormula modsq_atom(int d, int c, const AlgNum& t, Rel rel) {
    MPoly p = vre(d, c) * vre(d, c) + vim(d, c) * vim(d, c) - MPoly::constant(2 * d, t);
    return SemialgFormula::atom(d, std::move(p), rel);
}

SemialgFormula coords_zero(int d, int first, int last) {  // z_c = 0 for c in [first, last)
    std::vector<SemialgFormula> eqs;
    for (int c = first; c < last; ++c) {
        eqs.push_back(SemialgFormula::atom(d, vre(d, c), Rel::Eq));
        eqs.push_back(SemialgFormula::atom(d, vim(d, c), Rel::Eq));
    }
    return SemialgFormula::conj(d, std::move(eqs));
}

// <lambda z_{c1}, z_{c2}> = Re(lambda z_{c1} conj(z_{c2})) as a real polynomial
MPoly wedge_poly(int d, const AlgNum& lambda, int c1, int c2) {
    auto [a, b] = re_im(lambda);
    MPoly re1 = vre(d, c1) * a - vim(d, c1) * b;
    MPoly im1 = vre(d, c1) * b + vim(d, c1) * a;
    return re1 * vre(d, c2) + im1 * vim(d, c2);
}

SemialgFormula with_prefix(const OrbitInstance& inst, long n0, SemialgFormula body) {
    if (n0 <= 0) return body;
    return SemialgFormula::disj(
        inst.d, {SemialgFormula::point_set(inst.d, orbit_prefix(inst, n0)), std::move(body)});
}

int last_nonzero_in_block(const AlgVec& v, const JordanBlockDesc& b) {
    for (int k = b.size; k >= 1; --k)
        if (!v[b.first + k - 1].is_zero()) return k;
    throw std::invalid_argument("vector vanishes on the block");
}

// <u, w> = Re(u conj(w))
AlgNum inner(const AlgNum& u, const AlgNum& w) { return (u * w.conj()).real_part(); }

int cmp_real(const AlgNum& a, const AlgNum& b) { return (a - b).sign_real(); }

// floor/ceil rational bounds of sqrt(v) for v >= 0
std::pair<Rat, Rat> rat_sqrt_bounds(const Rat& v) {
    Int n = v.get_num(), den = v.get_den();
    Int s;
    mpz_sqrt(s.get_mpz_t(), Int(n * den).get_mpz_t());
    Rat lo(s, den), hi(s + 1, den);
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
}

}  // namespace

Rat contraction_rate(const AlgNum& lambda) {
    if (modulus_cmp_one(lambda) != CmpOne::Less)
        throw std::invalid_argument("contraction_rate: modulus is not below one");
    AlgNum m2 = lambda.norm_sq();
    if (m2.is_rational()) {
        Rat v = m2.as_rational();
        auto [lo, hi] = rat_sqrt_bounds(v);
        if (lo * lo == v) return lo;
    }
    for (Rat w(1, 1024);; w = w / 4096) {
        Rat hi2 = m2.enclosure(w).re_hi;
        if (hi2 >= 1) continue;
        Rat r = rat_sqrt_bounds(hi2).second;
        if (r < 1) return r;
    }
}

std::vector<AlgVec> orbit_prefix(const OrbitInstance& inst, long n) {
    std::vector<AlgVec> pts;
    AlgVec v = inst.x;
    for (long i = 0; i < n; ++i) {
        pts.push_back(v);
        v = mat_vec_mul(inst.A, v);
    }
    return pts;
}

AlgNum alg_sqrt(const AlgNum& s) {
    if (s.sign_real() < 0) throw std::invalid_argument("sqrt of a negative number");
    if (s.is_zero()) return s;
    if (s.is_rational()) {
        Rat r = s.as_rational();
        Int n = r.get_num(), d = r.get_den(), sn, sd;
        if (mpz_perfect_square_p(n.get_mpz_t()) && mpz_perfect_square_p(d.get_mpz_t())) {
            mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
            mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
            Rat q(sn, sd);
            q.canonicalize();
            return AlgNum(q);
        }
    }
    // roots of p(t^2) include sqrt(s); isolate the positive real one
    RatPoly p = s.minpoly();
    std::vector<Rat> doubled(2 * p.degree() + 1, Rat(0));
    for (int i = 0; i <= p.degree(); ++i) doubled[2 * i] = p.coeff(i);
    struct Cand {
        RatPoly g;
        Box box;
    };
    std::vector<Cand> cands;
    for (const auto& [g, mult] : factor_poly(RatPoly(doubled)))
        for (const auto& r : isolate_roots(g))
            if (r.box.is_real_line() && r.box.re_hi > 0) cands.push_back({g, r.box});

    Rat w(1, 16);
    for (int round = 0; round < 2000; ++round) {
        Box e = s.enclosure(w);
        Rat lo = rat_max(e.re_lo, Rat(0));
        Box target(rat_sqrt_bounds(lo).first, rat_sqrt_bounds(e.re_hi).second, Rat(0), Rat(0));
        std::vector<Cand> live;
        for (auto& c : cands) {
            if (c.box.width() > target.width()) c.box = refine_root_box(c.g, c.box);
            if (c.box.intersects(target)) live.push_back(c);
        }
        if (live.size() == 1) return AlgNum::from_minpoly(live[0].g, live[0].box);
        cands = std::move(live);
        w /= 64;
    }
    throw std::runtime_error("sqrt: failed to isolate");
}

std::pair<SemialgFormula, SynthParams> synth_divergent(const OrbitInstance& inst,
                                                       const std::vector<JordanBlockDesc>& blocks,
                                                       int block) {
    const auto& J = blocks[block];
    const AlgNum& lam = J.eigenvalue;
    if (modulus_cmp_one(lam) != CmpOne::Greater)
        throw std::invalid_argument("block eigenvalue modulus is not above one");
    int k = last_nonzero_in_block(inst.x, J);
    int c = J.first + k - 1;

    AlgNum m2 = lam.norm_sq();
    AlgNum cur = inst.x[c].norm_sq();
    AlgNum ysq = inst.y[c].norm_sq();
    long n0 = 0;
    while (cmp_real(cur, ysq) <= 0) {
        cur = cur * m2;
        if (++n0 > kThresholdGuard) throw std::runtime_error("divergence threshold not reached");
    }

    std::vector<SemialgFormula> parts{modsq_atom(inst.d, c, cur, Rel::Ge),
                                      coords_zero(inst.d, c + 1, J.first + J.size)};
    auto body = SemialgFormula::conj(inst.d, std::move(parts));
    return {with_prefix(inst, n0, std::move(body)), SynthParams{n0, block, k}};
}

std::pair<SemialgFormula, SynthParams> synth_contracting(
    const OrbitInstance& inst, const std::vector<JordanBlockDesc>& blocks, int block) {
    const auto& J = blocks[block];
    if (modulus_cmp_one(J.eigenvalue) != CmpOne::Less)
        throw std::invalid_argument("block eigenvalue modulus is not below one");
    AlgNum shrink = AlgNum(Rat(1) - contraction_rate(J.eigenvalue));  // <= 1 - |lambda|

    // |y_J|_inf^2 and its witness coordinate
    AlgNum ymax2 = inst.y[J.first].norm_sq();
    int kstar = 1;
    for (int k = 2; k <= J.size; ++k) {
        AlgNum cand = inst.y[J.first + k - 1].norm_sq();
        if (cmp_real(cand, ymax2) > 0) {
            ymax2 = cand;
            kstar = k;
        }
    }
    if (ymax2.is_zero()) throw std::invalid_argument("y vanishes on the block");

    std::vector<AlgNum> tube;  // tube[k-1] = ((1 - |lambda|)^k |y_J|_inf)^2
    for (int k = 1; k <= J.size; ++k) tube.push_back(alg_pow(shrink, 2 * k) * ymax2);

    long n0 = 0;
    AlgVec v = inst.x;
    auto inside = [&](const AlgVec& z) {
        for (int k = 1; k <= J.size; ++k)
            if (cmp_real(z[J.first + k - 1].norm_sq(), tube[k - 1]) > 0) return false;
        return true;
    };
    while (!inside(v)) {
        v = mat_vec_mul(inst.A, v);
        if (++n0 > kThresholdGuard) throw std::runtime_error("tube entry not reached");
    }

    std::vector<SemialgFormula> parts;
    for (int k = 1; k <= J.size; ++k) {
        int c = J.first + k - 1;
        MPoly p = MPoly::constant(2 * inst.d, tube[k - 1]) - vre(inst.d, c) * vre(inst.d, c) -
                  vim(inst.d, c) * vim(inst.d, c);
        parts.push_back(SemialgFormula::atom(inst.d, std::move(p), Rel::Ge));
    }
    auto body = SemialgFormula::conj(inst.d, std::move(parts));
    return {with_prefix(inst, n0, std::move(body)), SynthParams{n0, block, kstar}};
}

std::pair<SemialgFormula, SynthParams> synth_nondiag(const OrbitInstance& inst,
                                                     const std::vector<JordanBlockDesc>& blocks,
                                                     int block) {
    const auto& J = blocks[block];
    const AlgNum& lam = J.eigenvalue;
    if (J.size < 2 || modulus_cmp_one(lam) != CmpOne::Equal)
        throw std::invalid_argument("block is not a modulus-one Jordan block");
    int k = last_nonzero_in_block(inst.x, J);
    if (k < 2) throw std::invalid_argument("x is supported on the first block coordinate only");
    int c1 = J.first + k - 2, c2 = J.first + k - 1;

    AlgNum thr = inner(lam * inst.x[c1], inst.x[c2]);
    AlgNum xk2 = inst.x[c2].norm_sq();
    AlgNum y1sq = inst.y[c1].norm_sq();

    long n0 = 0;
    AlgVec v = inst.x;
    auto ready = [&](long n) {
        return cmp_real(v[c1].norm_sq(), y1sq) > 0 &&
               (thr + AlgNum(Rat(n)) * xk2).sign_real() >= 0;
    };
    while (!ready(n0)) {
        v = mat_vec_mul(inst.A, v);
        if (++n0 > kThresholdGuard) throw std::runtime_error("wedge threshold not reached");
    }

    std::vector<SemialgFormula> parts{
        modsq_atom(inst.d, c1, v[c1].norm_sq(), Rel::Ge),
        SemialgFormula::atom(inst.d, wedge_poly(inst.d, lam, c1, c2), Rel::Ge),
        coords_zero(inst.d, c2 + 1, J.first + J.size)};
    auto body = SemialgFormula::conj(inst.d, std::move(parts));
    return {with_prefix(inst, n0, std::move(body)), SynthParams{n0, block, k}};
}

namespace {

// complex polynomial as a (re, im) pair of real polynomials
struct CPoly {
    MPoly re, im;
    CPoly operator*(const CPoly& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
};

CPoly cpoly_const(int d, const AlgNum& c) {
    auto [r, i] = re_im(c);
    return {MPoly::constant(2 * d, r), MPoly::constant(2 * d, i)};
}

CPoly cpoly_var(int d, int c) { return {vre(d, c), vim(d, c)}; }

}  // namespace

ClosureSynthesis synth_diag_closure(const OrbitInstance& inst, const RelationLattice& lattice) {
    const int d = inst.d;
    std::vector<AlgNum> eigs;
    for (int i = 0; i < d; ++i) eigs.push_back(inst.A[i][i]);

    ClosureSynthesis out;
    std::string reason;
    if (auto w = closure_membership(inst.x, inst.y, eigs, lattice, &reason)) {
        out.witness = std::move(w);
        return out;
    }
    out.reason = std::move(reason);

    std::vector<SemialgFormula> parts;
    for (int i = 0; i < d; ++i)
        parts.push_back(modsq_atom(d, i, inst.x[i].norm_sq(), Rel::Eq));
    for (const auto& v : lattice.basis) {
        // prod_{v_i>0} z_i^{v_i} * prod_{v_i<0} x_i^{-v_i}
        //   = prod_{v_i>0} x_i^{v_i} * prod_{v_i<0} z_i^{-v_i}
        CPoly lhs = cpoly_const(d, AlgNum(Rat(1))), rhs = lhs;
        for (int i = 0; i < d; ++i) {
            if (v[i] == 0) continue;
            long e = v[i].get_si();
            if (e > 0) {
                for (long t = 0; t < e; ++t) lhs = lhs * cpoly_var(d, i);
                rhs = rhs * cpoly_const(d, alg_pow(inst.x[i], e));
            } else {
                lhs = lhs * cpoly_const(d, alg_pow(inst.x[i], -e));
                for (long t = 0; t < -e; ++t) rhs = rhs * cpoly_var(d, i);
            }
        }
        parts.push_back(SemialgFormula::atom(d, lhs.re - rhs.re, Rel::Eq));
        parts.push_back(SemialgFormula::atom(d, lhs.im - rhs.im, Rel::Eq));
    }
    out.formula = SemialgFormula::conj(d, std::move(parts));
    return out;
}

namespace {

std::optional<long> orbit_search(const OrbitInstance& inst, long limit) {
    AlgVec v = inst.x;
    for (long n = 0; n <= limit; ++n) {
        bool eq = true;
        for (int i = 0; i < inst.d && eq; ++i) eq = v[i] == inst.y[i];
        if (eq) return n;
        if (n < limit) v = mat_vec_mul(inst.A, v);
    }
    return std::nullopt;
}

}  // namespace

ReachResult decide_reachability(const OrbitInstance& inst, long search_bound) {
    if (search_bound <= 0) throw std::invalid_argument("search bound must be positive");
    auto [dec, jinst] = jordan_decompose(inst);
    auto norm = normalize(jinst);

    if (norm.status == NormalizeOutcome::Status::Reachable)
        return {Reachability::Reachable, norm.reachable_n, norm.reachable_n, ""};
    if (norm.status == NormalizeOutcome::Status::EarlyInvariant) {
        long b = inst.d;
        if (auto n = orbit_search(inst, b)) return {Reachability::Reachable, *n, b, ""};
        return {Reachability::Unreachable, -1, b,
                "a degenerate-coordinate invariant separates y from the orbit"};
    }

    const auto& red = norm.reduced;
    auto tag = classify(norm.reduced_blocks);
    auto bounded = [&](long n0, const std::string& why) -> ReachResult {
        long b = n0 + 2 * inst.d;  // reduction steps shift orbit indices by at most d
        if (auto n = orbit_search(inst, b)) return {Reachability::Reachable, *n, b, ""};
        return {Reachability::Unreachable, -1, b, why};
    };

    switch (tag.kind) {
        case CaseTag::Kind::HasModulusGreaterOne: {
            auto [f, p] = synth_divergent(red, norm.reduced_blocks, tag.block);
            return bounded(p.n0, "a diverging coordinate modulus exceeds |y|'s for all later n");
        }
        case CaseTag::Kind::HasModulusLessOne: {
            auto [f, p] = synth_contracting(red, norm.reduced_blocks, tag.block);
            return bounded(p.n0, "the orbit enters a tube that excludes y");
        }
        case CaseTag::Kind::ModOneNonDiagonal: {
            auto [f, p] = synth_nondiag(red, norm.reduced_blocks, tag.block);
            return bounded(p.n0, "a growing coordinate modulus exceeds |y|'s for all later n");
        }
        case CaseTag::Kind::ModOneDiagonal:
            break;
    }

    std::vector<AlgNum> eigs;
    std::vector<long> orders;
    bool finite = true;
    for (int i = 0; i < red.d; ++i) {
        eigs.push_back(red.A[i][i]);
        auto o = root_of_unity_order(eigs.back());
        if (o)
            orders.push_back(*o);
        else
            finite = false;
    }
    if (finite) {
        long period = 1;
        for (long o : orders) period = std::lcm(period, o);
        long b = period + 2 * inst.d;
        if (auto n = orbit_search(inst, b)) return {Reachability::Reachable, *n, b, ""};
        return {Reachability::Unreachable, -1, b, "the orbit is periodic and never hits y"};
    }

    auto lattice = relation_lattice(eigs, 64);
    std::string reason;
    auto w = closure_membership(red.x, red.y, eigs, lattice, &reason);
    if (!w) {
        bool modulus = reason.find("relation") == std::string::npos;
        if (auto n = orbit_search(inst, 2 * inst.d))
            return {Reachability::Reachable, *n, 2 * inst.d, ""};
        return {modulus ? Reachability::Unreachable : Reachability::UnreachableRelativeToClosure,
                -1, 2 * inst.d, "y is off the orbit closure: " + reason};
    }
    if (auto n = orbit_search(inst, search_bound))
        return {Reachability::Reachable, *n, search_bound, ""};
    return {Reachability::Indeterminate, -1, search_bound,
            "y lies on the orbit closure; not hit within the search bound"};
}

SynthCertificate synthesize(const OrbitInstance& inst, const SynthConfig& config) {
    SynthCertificate cert;
    cert.instance = inst;
    auto [dec, jinst] = jordan_decompose(inst);
    cert.jordan = dec;
    cert.jordan_instance = jinst;

    auto norm = normalize(jinst);
    cert.trace = norm.trace;

    if (norm.status == NormalizeOutcome::Status::Reachable) {
        cert.verdict = SynthCertificate::Verdict::Reachable;
        cert.reachable_n = norm.reachable_n;
        cert.reachability = {Reachability::Reachable, norm.reachable_n, norm.reachable_n, ""};
        return cert;
    }

    SemialgFormula reduced_formula;
    if (norm.status == NormalizeOutcome::Status::EarlyInvariant) {
        reduced_formula = norm.invariant;
        cert.reachability = {Reachability::Unreachable, -1, jinst.d,
                             "a degenerate-coordinate invariant separates y from the orbit"};
    } else {
        cert.reachability = decide_reachability(inst, config.search_bound);
        if (cert.reachability.status == Reachability::Reachable) {
            cert.verdict = SynthCertificate::Verdict::Reachable;
            cert.reachable_n = cert.reachability.n;
            return cert;
        }
        cert.reduced_instance = norm.reduced;
        cert.reduced_blocks = norm.reduced_blocks;
        auto tag = classify(norm.reduced_blocks);
        cert.case_tag = tag;
        switch (tag.kind) {
            case CaseTag::Kind::HasModulusGreaterOne:
                std::tie(reduced_formula, cert.params) =
                    synth_divergent(norm.reduced, norm.reduced_blocks, tag.block);
                break;
            case CaseTag::Kind::HasModulusLessOne:
                std::tie(reduced_formula, cert.params) =
                    synth_contracting(norm.reduced, norm.reduced_blocks, tag.block);
                break;
            case CaseTag::Kind::ModOneNonDiagonal:
                std::tie(reduced_formula, cert.params) =
                    synth_nondiag(norm.reduced, norm.reduced_blocks, tag.block);
                break;
            case CaseTag::Kind::ModOneDiagonal: {
                std::vector<AlgNum> eigs;
                for (int i = 0; i < norm.reduced.d; ++i) eigs.push_back(norm.reduced.A[i][i]);
                cert.lattice = relation_lattice(eigs, config.exponent_bound);
                auto cs = synth_diag_closure(norm.reduced, cert.lattice);
                if (cs.witness) {
                    cert.verdict = SynthCertificate::Verdict::NoInvariant;
                    cert.witness = *cs.witness;
                    return cert;
                }
                reduced_formula = *cs.formula;
                break;
            }
        }
        cert.prefix_points = orbit_prefix(norm.reduced, cert.params.n0);
        cert.params.block = cert.case_tag->block;
    }

    cert.jordan_invariant = lift_invariant(reduced_formula, norm.trace, jinst);
    cert.invariant = substitute_linear(cert.jordan_invariant, dec.Q);
    cert.closed = is_closed(cert.invariant);
    cert.verdict = SynthCertificate::Verdict::InvariantFound;

    VerifyConfig vc;
    vc.samples = config.samples;
    vc.seed = config.seed;
    auto report = verify_certificate(cert, vc);
    if (!report.ok())
        throw std::runtime_error("synthesized invariant failed verification: " + report.detail);
    return cert;
}

}  // namespace orbit
