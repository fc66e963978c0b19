#include "orbit/verify.hpp"

#include <map>
#include <optional>
#include <random>
#include <stdexcept>

namespace orbit {
namespace {

MPoly vre(int d, int c) { return MPoly::var(2 * d, 2 * c); }
MPoly vim(int d, int c) { return MPoly::var(2 * d, 2 * c + 1); }

int cmp_real(const AlgNum& a, const AlgNum& b) { return (a - b).sign_real(); }

// ----- sampling -----

// circle atom u_{2c}^2 + u_{2c+1}^2 = r^2 with rational r: coordinate c and r
struct CircleAtom {
    int coord;
    Rat radius;
};

struct AtomScan {
    std::vector<CircleAtom> circles;
    std::vector<Rat> scales;  // magnitudes appearing as atom constants
    std::vector<AlgVec> points;
};

std::optional<Rat> rational_sqrt(const Rat& v) {
    if (v < 0) return std::nullopt;
    Int n = v.get_num(), d = v.get_den(), sn, sd;
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
        return std::nullopt;
    mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
    Rat q(sn, sd);
    q.canonicalize();
    return q;
}

void scan_node(const FormulaNode& n, AtomScan& out) {
    switch (n.kind) {
        case FormulaNode::Kind::Atom: {
            AlgNum c0;
            for (const auto& [mono, coef] : n.poly.terms()) {
                bool is_const = true;
                for (int e : mono) is_const = is_const && e == 0;
                if (is_const) c0 = coef;
            }
            if (c0.is_rational()) {
                Rat mag = rat_abs(c0.as_rational());
                if (mag != 0) {
                    out.scales.push_back(mag);
                    if (auto r = rational_sqrt(mag)) out.scales.push_back(*r);
                }
            }
            if (n.rel != Rel::Eq || n.poly.terms().size() != 3) break;
            // u_{2c}^2 + u_{2c+1}^2 - r^2, up to sign
            int coord = -1;
            bool shape = true;
            AlgNum lead;
            for (const auto& [mono, coef] : n.poly.terms()) {
                int nz = 0, idx = -1;
                for (size_t i = 0; i < mono.size(); ++i)
                    if (mono[i] != 0) {
                        ++nz;
                        idx = (int)i;
                    }
                if (nz == 0) continue;
                if (nz != 1 || mono[idx] != 2) {
                    shape = false;
                    break;
                }
                if (coord < 0) {
                    coord = idx / 2;
                    lead = coef;
                } else if (idx / 2 != coord || !(coef == lead)) {
                    shape = false;
                    break;
                }
            }
            if (!shape || coord < 0 || !lead.is_rational() || !c0.is_rational()) break;
            Rat r2 = -(c0.as_rational() / lead.as_rational());
            if (auto r = rational_sqrt(r2)) out.circles.push_back({coord, *r});
            break;
        }
        case FormulaNode::Kind::Points:
            for (const auto& p : n.points) out.points.push_back(p);
            break;
        default:
            for (const auto& k : n.kids) scan_node(*k, out);
    }
}

AlgNum complex_of(const Rat& re, const Rat& im) {
    return AlgNum(re) + alg_i() * AlgNum(im);
}

}  // namespace

std::vector<AlgVec> sample_points(const SemialgFormula& f, unsigned long seed, long count) {
    const int d = f.dim();
    std::mt19937_64 rng(seed);
    AtomScan scan;
    if (f.root()) scan_node(*f.root(), scan);
    scan.scales.push_back(Rat(1));
    scan.scales.push_back(Rat(4));

    std::vector<AlgVec> out;
    for (const auto& p : scan.points) {
        if ((long)out.size() >= count) break;
        if (f.eval_at(p)) out.push_back(p);
    }

    std::uniform_int_distribution<int> num(-16, 16);
    std::uniform_int_distribution<size_t> pick_scale(0, scan.scales.size() - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    std::map<int, std::vector<Rat>> circle_radii;
    for (const auto& c : scan.circles) circle_radii[c.coord].push_back(c.radius);

    long attempts = 0, max_attempts = count * 40 + 40;
    while ((long)out.size() < count && attempts++ < max_attempts) {
        AlgVec z;
        Rat s = scan.scales[pick_scale(rng)];
        for (int i = 0; i < d; ++i) {
            auto it = circle_radii.find(i);
            if (it != circle_radii.end() && coin(rng)) {
                // rational point on the circle via t -> ((1-t^2), 2t)/(1+t^2)
                const Rat& r = it->second[rng() % it->second.size()];
                Rat t(num(rng), 7);
                Rat den = 1 + t * t;
                z.push_back(complex_of(r * (1 - t * t) / den, r * 2 * t / den));
            } else {
                z.push_back(complex_of(s * Rat(num(rng), 16), s * Rat(num(rng), 16)));
            }
        }
        if (f.eval_at(z)) out.push_back(std::move(z));
    }
    return out;
}

// ----- exact membership and sampled stability -----

VerifyReport verify_invariant(const OrbitInstance& inst, const SemialgFormula& f,
                              const VerifyConfig& config) {
    if (f.dim() != inst.d) throw std::invalid_argument("formula dimension mismatch");
    VerifyReport rep;
    rep.seed = config.seed;
    rep.x_in = f.eval_at(inst.x);
    if (!rep.x_in) rep.detail = "x does not satisfy the formula";
    rep.y_out = !f.eval_at(inst.y);
    if (rep.detail.empty() && !rep.y_out) rep.detail = "y satisfies the formula";

    rep.orbit_all_in = true;
    rep.orbit_never_hits_y = true;
    AlgVec v = inst.x;
    for (long n = 0; n < config.orbit_iterations; ++n) {
        if (!f.eval_at(v)) {
            rep.orbit_all_in = false;
            if (rep.detail.empty())
                rep.detail = "orbit point " + std::to_string(n) + " leaves the formula";
            break;
        }
        bool eq = true;
        for (int i = 0; i < inst.d && eq; ++i) eq = v[i] == inst.y[i];
        if (eq) {
            rep.orbit_never_hits_y = false;
            if (rep.detail.empty()) rep.detail = "orbit hits y at step " + std::to_string(n);
            break;
        }
        v = mat_vec_mul(inst.A, v);
        rep.orbit_iterations = n + 1;
    }
    rep.prefix_in = rep.orbit_all_in;

    auto pts = sample_points(f, config.seed, config.samples);
    rep.stability_total = (long)pts.size();
    for (const auto& z : pts) {
        if (f.eval_at(mat_vec_mul(inst.A, z)))
            ++rep.stability_passes;
        else if (rep.detail.empty())
            rep.detail = "a sampled point leaves the formula after one step";
    }
    return rep;
}

// ----- case-specific symbolic obligations -----

namespace {

struct Obligations {
    bool ok = true;
    std::string detail;
    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

AlgNum inner(const AlgNum& u, const AlgNum& w) { return (u * w.conj()).real_part(); }

void check_divergent(const SynthCertificate& cert, Obligations& ob) {
    const auto& inst = cert.reduced_instance;
    const auto& J = cert.reduced_blocks[cert.params.block];
    int c = J.first + cert.params.k - 1;
    ob.require(modulus_cmp_one(J.eigenvalue) == CmpOne::Greater,
               "divergent case eigenvalue has modulus <= 1");
    for (int j = c + 1; j < J.first + J.size; ++j)
        ob.require(inst.x[j].is_zero(), "x has support beyond the driving coordinate");
    AlgNum m2 = J.eigenvalue.norm_sq();
    AlgNum grown = alg_pow(m2, cert.params.n0) * inst.x[c].norm_sq();
    ob.require(cmp_real(grown, inst.y[c].norm_sq()) > 0,
               "threshold |lambda^{n0} x_k|^2 > |y_k|^2 fails");
    if (cert.params.n0 > 0) {
        AlgNum prev = alg_pow(m2, cert.params.n0 - 1) * inst.x[c].norm_sq();
        ob.require(cmp_real(prev, inst.y[c].norm_sq()) <= 0, "n0 is not minimal");
    }
}

void check_contracting(const SynthCertificate& cert, Obligations& ob) {
    const auto& inst = cert.reduced_instance;
    const auto& J = cert.reduced_blocks[cert.params.block];
    ob.require(modulus_cmp_one(J.eigenvalue) == CmpOne::Less,
               "contracting case eigenvalue has modulus >= 1");
    Rat r = contraction_rate(J.eigenvalue);
    AlgNum shrink = AlgNum(Rat(1) - r);
    // telescoping: |lambda| + shrink <= 1, i.e. r >= |lambda|, exactly
    ob.require(cmp_real(AlgNum(r * r), J.eigenvalue.norm_sq()) >= 0,
               "contraction rate falls below |lambda|");
    ob.require(r < 1, "1 - shrink is not a contraction");

    AlgNum ymax2 = inst.y[J.first + cert.params.k - 1].norm_sq();
    for (int j = 1; j <= J.size; ++j)
        ob.require(cmp_real(inst.y[J.first + j - 1].norm_sq(), ymax2) <= 0,
                   "recorded coordinate does not realize |y_J|_inf");
    ob.require(!ymax2.is_zero(), "y vanishes on the block");
    // y outside the tube at the max coordinate: (1-|lambda|)^{2k} < 1
    AlgNum tube_k = alg_pow(shrink, 2 * cert.params.k) * ymax2;
    ob.require(cmp_real(ymax2, tube_k) > 0, "y is not excluded by the tube");

    auto in_tube = [&](const AlgVec& z) {
        for (int j = 1; j <= J.size; ++j)
            if (cmp_real(z[J.first + j - 1].norm_sq(), alg_pow(shrink, 2 * j) * ymax2) > 0)
                return false;
        return true;
    };
    AlgVec v = inst.x;
    AlgVec prev;
    for (long n = 0; n < cert.params.n0; ++n) {
        prev = v;
        v = mat_vec_mul(inst.A, v);
    }
    ob.require(in_tube(v), "orbit point n0 is outside the tube");
    if (cert.params.n0 > 0) ob.require(!in_tube(prev), "n0 is not minimal");
}

void check_nondiag(const SynthCertificate& cert, Obligations& ob) {
    const auto& inst = cert.reduced_instance;
    const auto& J = cert.reduced_blocks[cert.params.block];
    const AlgNum& lam = J.eigenvalue;
    int k = cert.params.k;
    int c1 = J.first + k - 2, c2 = J.first + k - 1;
    ob.require(modulus_cmp_one(lam) == CmpOne::Equal, "eigenvalue modulus is not one");
    ob.require(k >= 2 && J.size >= k, "driving coordinate outside the block");
    for (int j = c2 + 1; j < J.first + J.size; ++j)
        ob.require(inst.x[j].is_zero(), "x has support beyond the driving coordinate");

    // polynomial identities over z = (z1, z2), image (lambda z1 + z2, lambda z2):
    //   |z1'|^2 = |z1|^2 + 2 <lambda z1, z2> + |z2|^2
    //   <lambda z1', z2'> = <lambda z1, z2> + |z2|^2
    const int d = 2;
    auto [a, b] = re_im(lam);
    MPoly r1 = vre(d, 0) * a - vim(d, 0) * b + vre(d, 1);   // Re(lambda z1 + z2)
    MPoly i1 = vre(d, 0) * b + vim(d, 0) * a + vim(d, 1);   // Im
    MPoly r2 = vre(d, 1) * a - vim(d, 1) * b;               // Re(lambda z2)
    MPoly i2 = vre(d, 1) * b + vim(d, 1) * a;
    MPoly wedge = (vre(d, 0) * a - vim(d, 0) * b) * vre(d, 1) +
                  (vre(d, 0) * b + vim(d, 0) * a) * vim(d, 1);
    MPoly n1 = vre(d, 0) * vre(d, 0) + vim(d, 0) * vim(d, 0);
    MPoly n2 = vre(d, 1) * vre(d, 1) + vim(d, 1) * vim(d, 1);
    MPoly lhs1 = r1 * r1 + i1 * i1;
    ob.require(lhs1 == n1 + wedge * AlgNum(Rat(2)) + n2, "modulus growth identity fails");
    MPoly wedge_next = (r1 * a - i1 * b) * r2 + (r1 * b + i1 * a) * i2;
    ob.require(wedge_next == wedge + n2, "wedge stability identity fails");

    AlgNum thr = inner(lam * inst.x[c1], inst.x[c2]);
    AlgNum xk2 = inst.x[c2].norm_sq();
    ob.require((thr + AlgNum(Rat(cert.params.n0)) * xk2).sign_real() >= 0,
               "wedge threshold fails at n0");
    AlgVec v = inst.x;
    AlgVec prev;
    for (long n = 0; n < cert.params.n0; ++n) {
        prev = v;
        v = mat_vec_mul(inst.A, v);
    }
    ob.require(cmp_real(v[c1].norm_sq(), inst.y[c1].norm_sq()) > 0,
               "modulus threshold fails at n0");
    if (cert.params.n0 > 0) {
        bool prev_ok =
            cmp_real(prev[c1].norm_sq(), inst.y[c1].norm_sq()) > 0 &&
            (thr + AlgNum(Rat(cert.params.n0 - 1)) * xk2).sign_real() >= 0;
        ob.require(!prev_ok, "n0 is not minimal");
    }
}

void check_closure(const SynthCertificate& cert, Obligations& ob) {
    const auto& inst = cert.reduced_instance;
    std::vector<AlgNum> eigs;
    for (int i = 0; i < inst.d; ++i) {
        eigs.push_back(inst.A[i][i]);
        ob.require(modulus_cmp_one(eigs.back()) == CmpOne::Equal,
                   "eigenvalue modulus is not one");
        ob.require(!inst.x[i].is_zero(), "x has a zero coordinate");
    }
    for (const auto& v : cert.lattice.basis)
        ob.require(verify_relation(eigs, v), "eigenvalues violate a recorded torus relation");
}

void check_witness(const SynthCertificate& cert, Obligations& ob) {
    const auto& inst = cert.reduced_instance;
    const auto& mu = cert.witness.mu;
    ob.require((int)mu.size() == inst.d, "witness dimension mismatch");
    if ((int)mu.size() != inst.d) return;
    for (int i = 0; i < inst.d; ++i) {
        ob.require(modulus_cmp_one(mu[i]) == CmpOne::Equal, "|mu_i| != 1");
        ob.require(mu[i] * inst.x[i] == inst.y[i], "mu does not map x to y");
    }
    for (const auto& v : cert.lattice.basis)
        ob.require(verify_relation(mu, v), "witness violates a torus relation");
}

// the recorded invariant matches an independent replay of the construction
void check_replay(const SynthCertificate& cert, Obligations& ob) {
    auto [dec, jinst] = jordan_decompose(cert.instance);
    auto norm = normalize(jinst);
    SemialgFormula reduced;
    if (norm.status == NormalizeOutcome::Status::EarlyInvariant) {
        ob.require(!cert.case_tag.has_value(), "certificate case tag contradicts normalization");
        reduced = norm.invariant;
    } else if (norm.status == NormalizeOutcome::Status::Reduced && cert.case_tag) {
        auto tag = classify(norm.reduced_blocks);
        ob.require(tag.kind == cert.case_tag->kind, "certificate case tag mismatch");
        SynthParams p;
        switch (tag.kind) {
            case CaseTag::Kind::HasModulusGreaterOne:
                std::tie(reduced, p) = synth_divergent(norm.reduced, norm.reduced_blocks,
                                                       tag.block);
                break;
            case CaseTag::Kind::HasModulusLessOne:
                std::tie(reduced, p) = synth_contracting(norm.reduced, norm.reduced_blocks,
                                                         tag.block);
                break;
            case CaseTag::Kind::ModOneNonDiagonal:
                std::tie(reduced, p) = synth_nondiag(norm.reduced, norm.reduced_blocks,
                                                     tag.block);
                break;
            case CaseTag::Kind::ModOneDiagonal: {
                auto cs = synth_diag_closure(norm.reduced, cert.lattice);
                ob.require(cs.formula.has_value(), "replay finds y on the orbit closure");
                if (!cs.formula) return;
                reduced = *cs.formula;
                break;
            }
        }
        if (tag.kind != CaseTag::Kind::ModOneDiagonal)
            ob.require(p.n0 == cert.params.n0, "recorded n0 differs from replay");
    } else {
        ob.require(false, "certificate status contradicts normalization");
        return;
    }
    auto lifted = lift_invariant(reduced, norm.trace, jinst);
    ob.require(lifted == cert.jordan_invariant, "recorded Jordan-coordinate formula differs");
    ob.require(substitute_linear(lifted, dec.Q) == cert.invariant,
               "recorded formula differs from replay");
}

}  // namespace

VerifyReport verify_certificate(const SynthCertificate& cert, const VerifyConfig& config) {
    if (cert.verdict == SynthCertificate::Verdict::Reachable) {
        VerifyReport rep;
        rep.seed = config.seed;
        AlgVec v = cert.instance.x;
        for (long n = 0; n < cert.reachable_n; ++n) v = mat_vec_mul(cert.instance.A, v);
        bool eq = true;
        for (int i = 0; i < cert.instance.d; ++i) eq = eq && v[i] == cert.instance.y[i];
        rep.x_in = rep.y_out = rep.prefix_in = rep.orbit_all_in = rep.orbit_never_hits_y = eq;
        rep.stability_symbolic = eq ? VerifyReport::Tri::Pass : VerifyReport::Tri::Fail;
        if (!eq) rep.detail = "A^n x != y for the recorded n";
        return rep;
    }

    if (cert.verdict == SynthCertificate::Verdict::NoInvariant) {
        VerifyReport rep;
        rep.seed = config.seed;
        Obligations ob;
        check_witness(cert, ob);
        rep.x_in = rep.y_out = rep.prefix_in = rep.orbit_all_in = rep.orbit_never_hits_y = true;
        rep.stability_symbolic = ob.ok ? VerifyReport::Tri::Pass : VerifyReport::Tri::Fail;
        rep.detail = ob.detail;
        return rep;
    }

    VerifyReport rep = verify_invariant(cert.instance, cert.invariant, config);
    Obligations ob;
    if (cert.case_tag) {
        switch (cert.case_tag->kind) {
            case CaseTag::Kind::HasModulusGreaterOne: check_divergent(cert, ob); break;
            case CaseTag::Kind::HasModulusLessOne: check_contracting(cert, ob); break;
            case CaseTag::Kind::ModOneNonDiagonal: check_nondiag(cert, ob); break;
            case CaseTag::Kind::ModOneDiagonal: check_closure(cert, ob); break;
        }
    }
    check_replay(cert, ob);
    rep.stability_symbolic = ob.ok ? VerifyReport::Tri::Pass : VerifyReport::Tri::Fail;
    if (!ob.ok && rep.detail.empty()) rep.detail = ob.detail;
    return rep;
}

}  // namespace orbit
