#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "orbit/synth.hpp"
#include "orbit/verify.hpp"

using namespace orbit;

namespace {

Rat q(long n, long d = 1) { return Rat(n, d); }

const RatMat kRotation{{q(4, 5), q(-3, 5)}, {q(3, 5), q(4, 5)}};

// {1, 2} union {|z|^2 >= c} in C^1
SemialgFormula ray_formula(const Rat& c) {
    MPoly u = MPoly::var(2, 0), v = MPoly::var(2, 1);
    MPoly p = u * u + v * v - MPoly::constant(2, AlgNum(c));
    return SemialgFormula::disj(
        1, {SemialgFormula::point_set(1, {{AlgNum(q(1))}, {AlgNum(q(2))}}),
            SemialgFormula::atom(1, p, Rel::Ge)});
}

VerifyConfig small() {
    VerifyConfig vc;
    vc.samples = 50;
    return vc;
}

}  // namespace

TEST_CASE("verify_invariant accepts a correct invariant") {
    auto inst = make_instance(RatMat{{q(2)}}, {q(1)}, {q(3)});
    auto rep = verify_invariant(inst, ray_formula(q(16)), small());
    CAPTURE(rep.detail);
    CHECK(rep.ok());
    CHECK(rep.x_in);
    CHECK(rep.y_out);
    CHECK(rep.orbit_all_in);
    CHECK(rep.orbit_never_hits_y);
    CHECK(rep.stability_total > 0);
    CHECK(rep.stability_passes == rep.stability_total);
}

TEST_CASE("verify_invariant rejects an invariant containing y") {
    auto inst = make_instance(RatMat{{q(2)}}, {q(1)}, {q(4)});
    auto rep = verify_invariant(inst, ray_formula(q(16)), small());
    CHECK_FALSE(rep.ok());
    CHECK_FALSE(rep.y_out);
    CHECK(rep.detail.find("y") != std::string::npos);
}

TEST_CASE("verify_invariant rejects a non-invariant set") {
    // {1} alone is not stable under doubling
    auto inst = make_instance(RatMat{{q(2)}}, {q(1)}, {q(3)});
    auto f = SemialgFormula::point_set(1, {{AlgNum(q(1))}});
    auto rep = verify_invariant(inst, f, small());
    CHECK_FALSE(rep.ok());
    CHECK_FALSE(rep.orbit_all_in);
}

TEST_CASE("verify_invariant rejects an invariant missing x") {
    auto inst = make_instance(RatMat{{q(1, 2)}}, {q(1, 3)}, {q(1, 5)});
    auto rep = verify_invariant(inst, ray_formula(q(16)), small());
    CHECK_FALSE(rep.ok());
    CHECK_FALSE(rep.x_in);
}

TEST_CASE("a formula synthesized for one target does not certify another") {
    SynthConfig cfg;
    cfg.samples = 20;
    auto off = make_instance(kRotation, {q(1), q(0)}, {q(2), q(0)});
    auto cert = synthesize(off, cfg);
    REQUIRE(cert.verdict == SynthCertificate::Verdict::InvariantFound);
    // (0, 1) lies on the closure of the orbit: the same circle contains it
    auto on = make_instance(kRotation, {q(1), q(0)}, {q(0), q(1)});
    auto rep = verify_invariant(on, cert.invariant, small());
    CHECK_FALSE(rep.ok());
    CHECK_FALSE(rep.y_out);
}

TEST_CASE("sample_points is deterministic and respects the formula") {
    auto f = ray_formula(q(16));
    auto a = sample_points(f, 7, 40);
    auto b = sample_points(f, 7, 40);
    auto c = sample_points(f, 8, 40);
    CHECK(a.size() >= 20);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    CHECK(a != c);
    for (const auto& p : a) CHECK(f.eval_at(p));
    // the point-set members appear exactly
    CHECK(a[0][0] == AlgNum(q(1)));
    CHECK(a[1][0] == AlgNum(q(2)));
}

TEST_CASE("sample_points covers circle atoms with exact boundary points") {
    MPoly u = MPoly::var(2, 0), v = MPoly::var(2, 1);
    MPoly p = u * u + v * v - MPoly::constant(2, AlgNum(q(1)));
    auto circle = SemialgFormula::atom(1, p, Rel::Eq);
    auto pts = sample_points(circle, 3, 30);
    CHECK(pts.size() >= 10);
    bool nontrivial = false;
    for (const auto& z : pts) {
        CHECK(circle.eval_at(z));
        if (z[0].real_part() != AlgNum(q(1)) && z[0].real_part() != AlgNum(q(-1)))
            nontrivial = true;
    }
    CHECK(nontrivial);
}

TEST_CASE("verify_certificate accepts synthesized certificates") {
    SynthConfig cfg;
    cfg.samples = 20;
    std::vector<OrbitInstance> fixtures = {
        make_instance(RatMat{{q(2)}}, {q(1)}, {q(3)}),
        make_instance(RatMat{{q(1, 2)}}, {q(1)}, {q(1, 3)}),
        make_instance(kRotation, {q(1), q(0)}, {q(2), q(0)}),
    };
    for (size_t i = 0; i < fixtures.size(); ++i) {
        CAPTURE(i);
        auto cert = synthesize(fixtures[i], cfg);
        auto rep = verify_certificate(cert, small());
        CAPTURE(rep.detail);
        CHECK(rep.ok());
        CHECK(rep.stability_symbolic == VerifyReport::Tri::Pass);
    }
}

TEST_CASE("verify_certificate accepts non-invariant verdicts") {
    auto reach = synthesize(
        make_instance(RatMat{{q(0), q(-1)}, {q(1), q(0)}}, {q(1), q(0)}, {q(0), q(1)}));
    CHECK(verify_certificate(reach, small()).ok());

    SynthConfig cfg;
    cfg.search_bound = 200;
    auto none = synthesize(make_instance(kRotation, {q(1), q(0)}, {q(0), q(1)}), cfg);
    REQUIRE(none.verdict == SynthCertificate::Verdict::NoInvariant);
    CHECK(verify_certificate(none, small()).ok());
}

TEST_CASE("verify_certificate detects tampering") {
    SynthConfig cfg;
    cfg.samples = 20;

    SUBCASE("prefix shortened below the crossing index") {
        auto cert = synthesize(make_instance(RatMat{{q(2)}}, {q(1)}, {q(3)}), cfg);
        REQUIRE(cert.params.n0 == 2);
        cert.params.n0 = 1;
        CHECK_FALSE(verify_certificate(cert, small()).ok());
    }

    SUBCASE("prefix padded beyond the minimal index") {
        auto cert = synthesize(make_instance(RatMat{{q(2)}}, {q(1)}, {q(3)}), cfg);
        cert.params.n0 = 3;
        CHECK_FALSE(verify_certificate(cert, small()).ok());
    }

    SUBCASE("tube constant inflated") {
        auto cert = synthesize(make_instance(RatMat{{q(1, 2)}}, {q(1)}, {q(1, 3)}), cfg);
        REQUIRE(cert.verdict == SynthCertificate::Verdict::InvariantFound);
        // uniformly scaling the invariant's constants keeps x in and stability
        // intact but must be flagged against the recorded construction
        auto inst = cert.instance;
        MPoly u = MPoly::var(2, 0), v = MPoly::var(2, 1);
        MPoly tube = MPoly::constant(2, AlgNum(q(101, 3600))) - u * u - v * v;
        auto pts = orbit_prefix(inst, cert.params.n0);
        cert.invariant = SemialgFormula::disj(
            1, {SemialgFormula::point_set(1, std::move(pts)),
                SemialgFormula::atom(1, tube, Rel::Ge)});
        cert.jordan_invariant = cert.invariant;
        CHECK_FALSE(verify_certificate(cert, small()).ok());
    }

    SUBCASE("invariant replaced by the whole space") {
        auto cert = synthesize(make_instance(kRotation, {q(1), q(0)}, {q(2), q(0)}), cfg);
        cert.invariant = SemialgFormula::verum(2);
        auto rep = verify_certificate(cert, small());
        CHECK_FALSE(rep.ok());
    }

    SUBCASE("witness perturbed") {
        SynthConfig cfg2;
        cfg2.search_bound = 200;
        auto cert = synthesize(make_instance(kRotation, {q(1), q(0)}, {q(0), q(1)}), cfg2);
        REQUIRE(cert.verdict == SynthCertificate::Verdict::NoInvariant);
        cert.witness.mu[0] = cert.witness.mu[0] * AlgNum(q(2));
        CHECK_FALSE(verify_certificate(cert, small()).ok());
    }
}

TEST_CASE("verification reports are deterministic for a fixed seed") {
    SynthConfig cfg;
    cfg.samples = 30;
    auto cert = synthesize(make_instance(kRotation, {q(1), q(0)}, {q(2), q(0)}), cfg);
    VerifyConfig vc;
    vc.samples = 30;
    vc.seed = 42;
    auto a = verify_certificate(cert, vc);
    auto b = verify_certificate(cert, vc);
    CHECK(a.stability_passes == b.stability_passes);
    CHECK(a.stability_total == b.stability_total);
    CHECK(a.ok() == b.ok());
    CHECK(a.seed == 42);
}
