// End-to-end acceptance checks for the invariant synthesis pipeline.
// Each criterion prints one pass/fail line; the exit code reflects the
// gating criteria only.

#include <array>
#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "orbit/io.hpp"
#include "orbit/synth.hpp"
#include "orbit/verify.hpp"

using namespace orbit;
using Clock = std::chrono::steady_clock;

namespace {

Rat q(long n, long d = 1) { return Rat(n, d); }

const RatMat kRotation{{q(4, 5), q(-3, 5)}, {q(3, 5), q(4, 5)}};
const RatMat kRot90{{q(0), q(-1)}, {q(1), q(0)}};
const RatMat kContracting{{q(16, 25), q(-12, 25), q(16, 25), q(-12, 25)},
                          {q(12, 25), q(16, 25), q(12, 25), q(16, 25)},
                          {q(0), q(0), q(16, 25), q(-12, 25)},
                          {q(0), q(0), q(12, 25), q(16, 25)}};
const RatMat kShear{{q(4, 5), q(-3, 5), q(4, 5), q(-3, 5)},
                    {q(3, 5), q(4, 5), q(3, 5), q(4, 5)},
                    {q(0), q(0), q(4, 5), q(-3, 5)},
                    {q(0), q(0), q(3, 5), q(4, 5)}};

int g_failures = 0;

void report(int n, bool pass, const std::string& what, bool gating = true) {
    std::cout << "criterion " << n << ": " << (pass ? "pass" : "fail") << " - " << what;
    if (!gating) std::cout << " (informational)";
    std::cout << "\n";
    if (!pass && gating) ++g_failures;
    std::cout.flush();
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

SynthConfig fast_config(long samples = 50) {
    SynthConfig c;
    c.samples = samples;
    return c;
}

bool eval_real2(const SemialgFormula& f, const Rat& a, const Rat& b) {
    return f.eval_at({AlgNum(a), AlgNum(b)});
}

// ---- criterion 1: planar rotation fixture -------------------------------

bool criterion1(std::string& what) {
    auto t0 = Clock::now();
    auto off = make_instance(kRotation, {q(1), q(0)}, {q(2), q(0)});
    auto cert = synthesize(off, fast_config());
    if (cert.verdict != SynthCertificate::Verdict::InvariantFound) {
        what = "expected an invariant for y = (2,0)";
        return false;
    }
    // restricted to real points the invariant is the unit circle
    const std::array<std::pair<Rat, Rat>, 16> probes = {{
        {q(1), q(0)}, {q(0), q(1)}, {q(-1), q(0)}, {q(0), q(-1)},
        {q(3, 5), q(4, 5)}, {q(4, 5), q(-3, 5)}, {q(5, 13), q(12, 13)}, {q(-12, 13), q(5, 13)},
        {q(2), q(0)}, {q(1, 2), q(0)}, {q(0), q(0)}, {q(1), q(1)},
        {q(2), q(2)}, {q(1, 3), q(1, 3)}, {q(-1), q(1)}, {q(7, 5), q(1, 5)},
    }};
    for (const auto& [a, b] : probes) {
        bool on_circle = a * a + b * b == 1;
        if (eval_real2(cert.invariant, a, b) != on_circle) {
            std::ostringstream os;
            os << "invariant disagrees with the unit circle at (" << a << ", " << b << ")";
            what = os.str();
            return false;
        }
    }
    double t_off = seconds_since(t0);

    t0 = Clock::now();
    SynthConfig cfg = fast_config();
    cfg.search_bound = 200;
    auto on = make_instance(kRotation, {q(1), q(0)}, {q(0), q(1)});
    auto cert2 = synthesize(on, cfg);
    if (cert2.verdict != SynthCertificate::Verdict::NoInvariant) {
        what = "expected NoInvariant for y = (0,1)";
        return false;
    }
    const auto& mu = cert2.witness.mu;
    bool pair_ok = mu.size() == 2 &&
                   ((mu[0] == alg_i() && mu[1] == -alg_i()) ||
                    (mu[0] == -alg_i() && mu[1] == alg_i()));
    if (!pair_ok) {
        what = "torus witness is not (i, -i)";
        return false;
    }
    for (const auto& m : mu)
        if (m * m * m * m != AlgNum(q(1))) {
            what = "witness entries are not 4th roots of unity";
            return false;
        }
    double t_on = seconds_since(t0);
    if (t_off >= 1.0 || t_on >= 1.0) {
        std::ostringstream os;
        os << "runtime over 1 s (" << t_off << " s / " << t_on << " s)";
        what = os.str();
        return false;
    }
    std::ostringstream os;
    os << "unit circle on 16 probes, witness (i, -i); " << t_off << " s / " << t_on << " s";
    what = os.str();
    return true;
}

// ---- criterion 2: contracting fixture with the hand-built box family ----

bool criterion2(std::string& what) {
    auto t0 = Clock::now();
    auto inst = make_instance(kContracting, {q(1), q(0), q(1), q(0)}, {q(3), q(0), q(0), q(1)});
    auto cert = synthesize(inst, fast_config(1000));
    VerifyConfig vc;
    vc.samples = 1000;
    auto rep = verify_certificate(cert, vc);
    if (cert.verdict != SynthCertificate::Verdict::InvariantFound || !rep.ok()) {
        what = "synthesized certificate failed verification: " + rep.detail;
        return false;
    }
    if (rep.stability_passes != rep.stability_total) {
        what = "sampled stability not clean on the synthesized invariant";
        return false;
    }

    // the hand-built invariant: the box family u1^2+u2^2 <= e^2, u3^2+u4^2 <=
    // e^2/16 with e small enough to exclude y, plus the orbit prefix outside it
    Rat e2 = q(1, 4);
    MPoly u1 = MPoly::var(8, 0), u2 = MPoly::var(8, 2), u3 = MPoly::var(8, 4),
          u4 = MPoly::var(8, 6);
    MPoly v1 = MPoly::var(8, 1), v2 = MPoly::var(8, 3), v3 = MPoly::var(8, 5),
          v4 = MPoly::var(8, 7);
    auto box = SemialgFormula::conj(
        4, {SemialgFormula::atom(4,
              MPoly::constant(8, AlgNum(e2)) - u1 * u1 - v1 * v1 - u2 * u2 - v2 * v2, Rel::Ge),
            SemialgFormula::atom(4,
              MPoly::constant(8, AlgNum(e2 / 16)) - u3 * u3 - v3 * v3 - u4 * u4 - v4 * v4,
              Rel::Ge)});
    std::vector<AlgVec> prefix;
    AlgVec v = inst.x;
    while (!box.eval_at(v)) {
        prefix.push_back(v);
        v = mat_vec_mul(inst.A, v);
        if (prefix.size() > 200) {
            what = "orbit never entered the hand-built box";
            return false;
        }
    }
    auto handmade = SemialgFormula::disj(4, {SemialgFormula::point_set(4, prefix), box});
    auto rep2 = verify_invariant(inst, handmade, vc);
    if (!rep2.ok()) {
        what = "hand-built box invariant rejected: " + rep2.detail;
        return false;
    }
    if (rep2.stability_total < 1000 || rep2.stability_passes != rep2.stability_total) {
        std::ostringstream os;
        os << "sampled stability " << rep2.stability_passes << "/" << rep2.stability_total;
        what = os.str();
        return false;
    }
    double t = seconds_since(t0);
    if (t >= 5.0) {
        std::ostringstream os;
        os << "runtime over 5 s (" << t << " s)";
        what = os.str();
        return false;
    }
    std::ostringstream os;
    os << "synthesized and hand-built invariants verified, stability "
       << rep2.stability_passes << "/" << rep2.stability_total << "; " << t << " s";
    what = os.str();
    return true;
}

// ---- criterion 3: non-diagonalizable modulus-one fixture ----------------

bool atom_is_modulus_bound(const FormulaNode& n) {
    if (n.kind != FormulaNode::Kind::Atom || n.rel != Rel::Ge) return false;
    bool has_square = false;
    for (const auto& [mono, c] : n.poly.terms()) {
        int vars = 0, deg = 0;
        for (int e : mono) {
            if (e) ++vars;
            deg += e;
        }
        if (vars == 0) continue;                 // the constant -c
        if (vars != 1 || deg != 2) return false; // anything else breaks the shape
        has_square = true;
    }
    return has_square;
}

bool atom_is_wedge(const FormulaNode& n) {
    if (n.kind != FormulaNode::Kind::Atom || n.rel != Rel::Ge) return false;
    bool any = false;
    for (const auto& [mono, c] : n.poly.terms()) {
        int vars = 0;
        for (int e : mono)
            if (e) ++vars;
        if (vars != 2) return false;  // every term is bilinear
        any = true;
    }
    return any;
}

void scan_atoms(const FormulaNode& n, bool& modulus, bool& wedge) {
    if (atom_is_modulus_bound(n)) modulus = true;
    if (atom_is_wedge(n)) wedge = true;
    for (const auto& k : n.kids) scan_atoms(*k, modulus, wedge);
}

bool criterion3(std::string& what) {
    auto t0 = Clock::now();
    auto inst = make_instance(kShear, {q(1), q(0), q(1), q(0)}, {q(2), q(0), q(0), q(0)});
    auto cert = synthesize(inst, fast_config(200));
    if (cert.verdict != SynthCertificate::Verdict::InvariantFound || !cert.case_tag ||
        cert.case_tag->kind != CaseTag::Kind::ModOneNonDiagonal) {
        what = "expected the non-diagonal modulus-one construction";
        return false;
    }
    bool modulus = false, wedge = false;
    scan_atoms(*cert.jordan_invariant.root(), modulus, wedge);
    if (!modulus || !wedge) {
        what = "invariant lacks the modulus-bound or wedge conjunct";
        return false;
    }
    VerifyConfig vc;
    vc.samples = 200;
    auto rep = verify_certificate(cert, vc);
    if (!rep.ok() || rep.stability_symbolic != VerifyReport::Tri::Pass) {
        what = "exact expansion identities failed: " + rep.detail;
        return false;
    }
    double t = seconds_since(t0);
    if (t >= 5.0) {
        std::ostringstream os;
        os << "runtime over 5 s (" << t << " s)";
        what = os.str();
        return false;
    }
    std::ostringstream os;
    os << "wedge and modulus conjuncts present, identities exact; " << t << " s";
    what = os.str();
    return true;
}

// ---- criterion 4: relation lattices ---------------------------------------

bool criterion4(std::string& what) {
    AlgNum lam = AlgNum::from_minpoly(RatPoly({q(1), q(-8, 5), q(1)}), Box(q(0), q(1), q(0), q(1)));
    IntMat expected = {{Int(1), Int(1)}};
    for (long bound : {4L, 16L, 64L}) {
        auto lat = relation_lattice({lam, lam.conj()}, bound);
        if (lat.basis != expected) {
            std::ostringstream os;
            os << "rotation lattice at bound " << bound << " is not {(1,1)}";
            what = os.str();
            return false;
        }
    }
    auto lat = relation_lattice({alg_i(), alg_i()}, 16);
    IntMat gens = hnf_basis({{Int(4), Int(0)}, {Int(1), Int(-1)}});
    bool mutual = true;
    for (const auto& v : gens) mutual = mutual && hnf_contains(lat.basis, v);
    for (const auto& v : lat.basis) mutual = mutual && hnf_contains(gens, v);
    if (!mutual) {
        what = "lattice for (i, i) does not match <(4,0), (1,-1)>";
        return false;
    }
    what = "bases stable across bounds 4/16/64 and equal by mutual membership";
    return true;
}

// ---- criterion 5: rotation by 90 degrees -----------------------------------

bool criterion5(std::string& what) {
    auto reach = synthesize(make_instance(kRot90, {q(1), q(0)}, {q(0), q(1)}));
    if (reach.verdict != SynthCertificate::Verdict::Reachable || reach.reachable_n != 1) {
        what = "y = (0,1) not recognized as A^1 x";
        return false;
    }
    auto cert = synthesize(make_instance(kRot90, {q(1), q(0)}, {q(1), q(1)}), fast_config());
    if (cert.verdict != SynthCertificate::Verdict::InvariantFound) {
        what = "expected the finite orbit closure for y = (1,1)";
        return false;
    }
    const std::array<Rat, 5> grid = {q(-1), q(-1, 2), q(0), q(1, 2), q(1)};
    auto in_orbit = [](const Rat& a, const Rat& b) {
        return (abs(a) == 1 && b == 0) || (a == 0 && abs(b) == 1);
    };
    for (const auto& a : grid)
        for (const auto& b : grid)
            if (eval_real2(cert.invariant, a, b) != in_orbit(a, b)) {
                std::ostringstream os;
                os << "set disagrees with the 4-point orbit at (" << a << ", " << b << ")";
                what = os.str();
                return false;
            }
    for (const auto& p : {std::pair{q(1), q(0)}, {q(0), q(1)}, {q(-1), q(0)}, {q(0), q(-1)}})
        if (!eval_real2(cert.invariant, p.first, p.second)) {
            what = "an orbit point is missing from the invariant";
            return false;
        }
    what = "Reachable(1) and exact 4-point closure on the 5x5 grid";
    return true;
}

// ---- criterion 6: randomized instances -------------------------------------

bool criterion6(std::string& what) {
    std::mt19937_64 rng(20260826);
    std::uniform_int_distribution<int> num(-3, 3), den(1, 5), dims(2, 4), steps(0, 3);
    auto rat = [&] { return Rat(num(rng), den(rng)); };

    long accepted = 0, attempts = 0;
    while (accepted < 200 && attempts < 2000) {
        ++attempts;
        int d = dims(rng);
        RatMat A(d, std::vector<Rat>(d));
        std::vector<Rat> x(d);
        for (auto& row : A)
            for (auto& e : row) e = rat();
        bool xz = true;
        for (auto& e : x) {
            e = rat();
            if (e != 0) xz = false;
        }
        if (xz) continue;
        auto inst0 = make_instance(A, x, x);
        AlgVec yv = inst0.x;
        int k = steps(rng);
        for (int i = 0; i < k; ++i) yv = mat_vec_mul(inst0.A, yv);
        Rat delta = Rat(num(rng), den(rng));
        if (delta == 0) delta = q(1, 2);
        int coord = std::uniform_int_distribution<int>(0, d - 1)(rng);
        yv[coord] = yv[coord] + AlgNum(delta);
        auto inst = make_instance(inst0.A, inst0.x, yv);

        auto r = decide_reachability(inst, 10000);
        if (r.status != Reachability::Unreachable &&
            r.status != Reachability::UnreachableRelativeToClosure)
            continue;  // not confirmed unreachable; draw again

        SynthCertificate cert;
        try {
            cert = synthesize(inst, fast_config(25));
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "instance " << attempts << ": " << e.what();
            what = os.str();
            return false;
        }
        if (cert.verdict != SynthCertificate::Verdict::InvariantFound) {
            std::ostringstream os;
            os << "instance " << attempts << ": unreachable but no invariant emitted";
            what = os.str();
            return false;
        }
        VerifyConfig vc;
        vc.samples = 25;
        auto rep = verify_certificate(cert, vc);
        if (!rep.ok() || rep.stability_passes != rep.stability_total || !rep.orbit_all_in ||
            !rep.orbit_never_hits_y) {
            std::ostringstream os;
            os << "instance " << attempts << ": verification failed: " << rep.detail;
            what = os.str();
            return false;
        }
        ++accepted;
        if (accepted % 10 == 0)
            std::cerr << "  [random suite] " << accepted << "/200 (attempt " << attempts << ")"
                      << std::endl;
    }
    if (accepted < 200) {
        what = "could not confirm 200 unreachable instances";
        return false;
    }
    std::ostringstream os;
    os << "200 random certificates verified (from " << attempts << " draws)";
    what = os.str();
    return true;
}

// ---- criterion 7: mutations ----------------------------------------------

SemialgFormula strip_wedge(const SemialgFormula& f, const FormulaPtr& node) {
    const FormulaNode& n = *node;
    int d = f.dim();
    switch (n.kind) {
        case FormulaNode::Kind::Atom:
            return SemialgFormula::atom(d, n.poly, n.rel);
        case FormulaNode::Kind::Points:
            return SemialgFormula::point_set(d, n.points);
        case FormulaNode::Kind::Not:
            return SemialgFormula::negation(strip_wedge(f, n.kids[0]));
        case FormulaNode::Kind::And:
        case FormulaNode::Kind::Or: {
            std::vector<SemialgFormula> kids;
            for (const auto& k : n.kids) {
                if (n.kind == FormulaNode::Kind::And && atom_is_wedge(*k)) continue;
                kids.push_back(strip_wedge(f, k));
            }
            return n.kind == FormulaNode::Kind::And ? SemialgFormula::conj(d, std::move(kids))
                                                    : SemialgFormula::disj(d, std::move(kids));
        }
    }
    return f;
}

bool criterion7(std::string& what) {
    VerifyConfig vc;
    vc.samples = 30;
    SynthConfig cfg = fast_config(30);

    auto divergent = synthesize(make_instance(RatMat{{q(2)}}, {q(1)}, {q(3)}), cfg);
    auto m1 = divergent;
    m1.params.n0 -= 1;
    if (verify_certificate(m1, vc).ok()) {
        what = "shrinking n0 on the divergent fixture went undetected";
        return false;
    }

    auto contracting = synthesize(make_instance(RatMat{{q(1, 2)}}, {q(1)}, {q(1, 3)}), cfg);
    auto m2 = contracting;
    MPoly u = MPoly::var(2, 0), v = MPoly::var(2, 1);
    MPoly tube = MPoly::constant(2, AlgNum(q(1, 36) * q(101, 100))) - u * u - v * v;
    m2.invariant = SemialgFormula::disj(
        1, {SemialgFormula::point_set(1, orbit_prefix(m2.instance, m2.params.n0)),
            SemialgFormula::atom(1, tube, Rel::Ge)});
    m2.jordan_invariant = m2.invariant;
    if (verify_certificate(m2, vc).ok()) {
        what = "inflating the tube constant by 1% went undetected";
        return false;
    }

    auto nondiag = synthesize(
        make_instance(kShear, {q(1), q(0), q(1), q(0)}, {q(2), q(0), q(0), q(0)}), cfg);
    auto m3 = nondiag;
    m3.jordan_invariant = strip_wedge(m3.jordan_invariant, m3.jordan_invariant.root());
    m3.invariant = strip_wedge(m3.invariant, m3.invariant.root());
    if (m3.jordan_invariant == nondiag.jordan_invariant) {
        what = "wedge conjunct not found to drop";
        return false;
    }
    if (verify_certificate(m3, vc).ok()) {
        what = "dropping the wedge conjunct went undetected";
        return false;
    }

    auto closure = synthesize(make_instance(kRotation, {q(1), q(0)}, {q(2), q(0)}), cfg);
    auto m4 = closure;
    m4.lattice.basis.clear();
    if (verify_certificate(m4, vc).ok()) {
        what = "dropping the closure relation went undetected";
        return false;
    }
    what = "all four designated perturbations rejected";
    return true;
}

// ---- criterion 8: determinism ---------------------------------------------

bool criterion8(std::string& what) {
    std::vector<OrbitInstance> corpus = {
        make_instance(kRotation, {q(1), q(0)}, {q(2), q(0)}),
        make_instance(kRotation, {q(1), q(0)}, {q(0), q(1)}),
        make_instance(kContracting, {q(1), q(0), q(1), q(0)}, {q(3), q(0), q(0), q(1)}),
        make_instance(kShear, {q(1), q(0), q(1), q(0)}, {q(2), q(0), q(0), q(0)}),
        make_instance(kRot90, {q(1), q(0)}, {q(0), q(1)}),
        make_instance(kRot90, {q(1), q(0)}, {q(1), q(1)}),
        make_instance(RatMat{{q(2)}}, {q(1)}, {q(3)}),
        make_instance(RatMat{{q(1, 2)}}, {q(1)}, {q(1, 3)}),
    };
    SynthConfig cfg = fast_config(30);
    cfg.search_bound = 200;
    for (size_t i = 0; i < corpus.size(); ++i) {
        std::string a = certificate_to_json(synthesize(corpus[i], cfg), cfg);
        std::string b = certificate_to_json(synthesize(corpus[i], cfg), cfg);
        if (a != b) {
            std::ostringstream os;
            os << "fixture " << i << " produced differing certificates";
            what = os.str();
            return false;
        }
    }
    what = "byte-identical certificates across the fixture corpus";
    return true;
}

// ---- criterion 9: certificate size trend (informational) -------------------

bool criterion9(std::string& what) {
    std::vector<double> ds, sizes;
    for (int d = 2; d <= 10; ++d) {
        RatMat A(d, std::vector<Rat>(d, q(0)));
        std::vector<Rat> x(d), y(d);
        int i = 0;
        for (; i + 1 < d; i += 2) {
            A[i][i] = q(4, 5);
            A[i][i + 1] = q(-3, 5);
            A[i + 1][i] = q(3, 5);
            A[i + 1][i + 1] = q(4, 5);
        }
        if (i < d) A[i][i] = q(1);  // odd dimension: one fixed coordinate
        for (int j = 0; j < d; ++j) {
            x[j] = (j % 2 == 0) ? q(1) : q(0);
            y[j] = (j % 2 == 0) ? q(3) : q(0);
        }
        auto cert = synthesize(make_instance(A, x, y), fast_config(10));
        if (cert.verdict != SynthCertificate::Verdict::InvariantFound) {
            what = "family member d=" + std::to_string(d) + " produced no invariant";
            return false;
        }
        ds.push_back(d);
        sizes.push_back(static_cast<double>(serialize(cert.invariant).size()));
    }
    // cubic least squares in (d, bytes)
    const int m = 4;
    double N[m][m + 1] = {};
    for (size_t s = 0; s < ds.size(); ++s) {
        double p[2 * m - 1];
        p[0] = 1;
        for (int j = 1; j < 2 * m - 1; ++j) p[j] = p[j - 1] * ds[s];
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < m; ++c) N[r][c] += p[r + c];
            N[r][m] += p[r] * sizes[s];
        }
    }
    for (int c = 0; c < m; ++c) {
        int piv = c;
        for (int r = c + 1; r < m; ++r)
            if (std::fabs(N[r][c]) > std::fabs(N[piv][c])) piv = r;
        std::swap(N[c], N[piv]);
        for (int r = 0; r < m; ++r) {
            if (r == c) continue;
            double f = N[r][c] / N[c][c];
            for (int k = c; k <= m; ++k) N[r][k] -= f * N[c][k];
        }
    }
    double coef[m];
    for (int r = 0; r < m; ++r) coef[r] = N[r][m] / N[r][r];
    double mean = 0;
    for (double s : sizes) mean += s;
    mean /= sizes.size();
    double ss_res = 0, ss_tot = 0;
    for (size_t s = 0; s < ds.size(); ++s) {
        double fit = coef[0] + coef[1] * ds[s] + coef[2] * ds[s] * ds[s] +
                     coef[3] * ds[s] * ds[s] * ds[s];
        ss_res += (sizes[s] - fit) * (sizes[s] - fit);
        ss_tot += (sizes[s] - mean) * (sizes[s] - mean);
    }
    double r2 = 1.0 - ss_res / ss_tot;
    std::ostringstream os;
    os << "formula bytes for d=2..10 fit a cubic with R^2 = " << r2;
    what = os.str();
    return r2 >= 0.99;
}

}  // namespace

int main() {
    struct Entry {
        int n;
        bool (*fn)(std::string&);
        bool gating;
    };
    const Entry entries[] = {
        {1, criterion1, true}, {2, criterion2, true}, {3, criterion3, true},
        {4, criterion4, true}, {5, criterion5, true}, {6, criterion6, true},
        {7, criterion7, true}, {8, criterion8, true}, {9, criterion9, false},
    };
    for (const auto& e : entries) {
        std::cerr << "[criterion " << e.n << "] running" << std::endl;
        std::string what;
        bool pass = false;
        try {
            pass = e.fn(what);
        } catch (const std::exception& ex) {
            what = std::string("exception: ") + ex.what();
        }
        report(e.n, pass, what, e.gating);
    }
    return g_failures == 0 ? 0 : 1;
}
