#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "orbit/io.hpp"
#include "orbit/synth.hpp"
#include "orbit/verify.hpp"

using namespace orbit;
namespace fs = std::filesystem;

namespace {

Rat q(long n, long d = 1) { return Rat(n, d); }

const char* kCircleJson =
    R"({"A": [["4/5", "-3/5"], ["3/5", "4/5"]], "x": ["1", "0"], "y": ["2", "0"]})";
const char* kRot90Json =
    R"({"A": [["0", "-1"], ["1", "0"]], "x": ["1", "0"], "y": ["0", "1"]})";

bool same_instance(const OrbitInstance& a, const OrbitInstance& b) {
    if (a.d != b.d) return false;
    for (int i = 0; i < a.d; ++i) {
        if (a.x[i] != b.x[i] || a.y[i] != b.y[i]) return false;
        for (int j = 0; j < a.d; ++j)
            if (a.A[i][j] != b.A[i][j]) return false;
    }
    return true;
}

SynthConfig small() {
    SynthConfig c;
    c.samples = 20;
    return c;
}

fs::path write_tmp(const std::string& name, const std::string& text) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream(p) << text;
    return p;
}

int run(const std::string& cmd) {
    int status = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

const bool kHaveBinary = fs::exists("orbitctl");

}  // namespace

TEST_CASE("instance JSON round trip") {
    auto inst = parse_instance_json(kCircleJson);
    CHECK(inst.d == 2);
    CHECK(inst.A[0][0] == AlgNum(q(4, 5)));
    CHECK(inst.A[1][0] == AlgNum(q(3, 5)));
    CHECK(inst.y[0] == AlgNum(q(2)));
    auto again = parse_instance_json(instance_to_json(inst));
    CHECK(same_instance(inst, again));
}

TEST_CASE("malformed instances are rejected with diagnostics") {
    auto expect_bad = [](const std::string& text, const std::string& needle) {
        try {
            parse_instance_json(text);
            FAIL("expected a parse error for " << text);
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_bad("not json", "invalid JSON");
    expect_bad(R"({"A": [["1","2"]], "x": ["1"], "y": ["1"]})", "not square");
    expect_bad(R"({"A": [["1"]], "x": ["1"]})", "expected fields");
    expect_bad(R"({"A": [["1"]], "x": ["1/0"], "y": ["1"]})", "denominator");
    expect_bad(R"({"A": [["abc"]], "x": ["1"], "y": ["1"]})", "malformed rational");
    expect_bad(R"({"A": [["1"]], "x": ["1", "2"], "y": ["1"]})", "dimension mismatch");
}

TEST_CASE("certificate JSON survives a round trip and still verifies") {
    SynthConfig cfg = small();
    VerifyConfig vc;
    vc.samples = 20;

    SUBCASE("invariant certificate") {
        auto cert = synthesize(parse_instance_json(kCircleJson), cfg);
        std::string text = certificate_to_json(cert, cfg);
        auto back = parse_certificate_json(text);
        CHECK(back.verdict == cert.verdict);
        CHECK(back.params.n0 == cert.params.n0);
        CHECK(back.closed == cert.closed);
        CHECK(back.invariant == cert.invariant);
        CHECK(back.jordan_invariant == cert.jordan_invariant);
        CHECK(back.lattice.basis == cert.lattice.basis);
        REQUIRE(back.case_tag.has_value());
        CHECK(back.case_tag->kind == cert.case_tag->kind);
        auto rep = verify_certificate(back, vc);
        CAPTURE(rep.detail);
        CHECK(rep.ok());
    }

    SUBCASE("no-invariant certificate keeps its witness") {
        SynthConfig cfg2 = small();
        cfg2.search_bound = 200;
        auto inst = make_instance(RatMat{{q(4, 5), q(-3, 5)}, {q(3, 5), q(4, 5)}},
                                  {q(1), q(0)}, {q(0), q(1)});
        auto cert = synthesize(inst, cfg2);
        REQUIRE(cert.verdict == SynthCertificate::Verdict::NoInvariant);
        auto back = parse_certificate_json(certificate_to_json(cert, cfg2));
        REQUIRE(back.witness.mu.size() == 2);
        CHECK(back.witness.mu[0] == cert.witness.mu[0]);
        CHECK(verify_certificate(back, vc).ok());
    }

    SUBCASE("reachable certificate") {
        auto cert = synthesize(parse_instance_json(kRot90Json), cfg);
        auto back = parse_certificate_json(certificate_to_json(cert, cfg));
        CHECK(back.verdict == SynthCertificate::Verdict::Reachable);
        CHECK(back.reachable_n == 1);
        CHECK(verify_certificate(back, vc).ok());
    }
}

TEST_CASE("certificate serialization is deterministic") {
    SynthConfig cfg = small();
    auto inst = parse_instance_json(kCircleJson);
    std::string a = certificate_to_json(synthesize(inst, cfg), cfg);
    std::string b = certificate_to_json(synthesize(inst, cfg), cfg);
    CHECK(a == b);
}

TEST_CASE("a tampered certificate constant is rejected") {
    SynthConfig cfg = small();
    auto cert = synthesize(parse_instance_json(kCircleJson), cfg);
    std::string text = certificate_to_json(cert, cfg);
    // tamper inside the canonical formula text, which is what gets parsed back
    auto key = text.find("\"text\"");
    REQUIRE(key != std::string::npos);
    auto pos = text.find("-1/4", key);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 4, "-1/5");
    auto back = parse_certificate_json(text);
    VerifyConfig vc;
    vc.samples = 20;
    CHECK_FALSE(verify_certificate(back, vc).ok());
}

TEST_CASE("SMT-LIB2 obligations pin the target and assert stability") {
    SynthConfig cfg = small();
    auto cert = synthesize(parse_instance_json(kCircleJson), cfg);
    std::string smt = obligations_smt2(cert);
    CHECK(smt.find("(set-logic QF_NRA)") != std::string::npos);
    CHECK(smt.find("(check-sat)") != std::string::npos);
    CHECK(smt.find("expect unsat") != std::string::npos);
    // both obligations present: this A is invertible
    CHECK(smt.find("obligation 2") != std::string::npos);
    CHECK(smt.find("not") != std::string::npos);
}

TEST_CASE("verification report serializes its exact fields") {
    auto inst = parse_instance_json(kCircleJson);
    SynthConfig cfg = small();
    auto cert = synthesize(inst, cfg);
    VerifyConfig vc;
    vc.samples = 20;
    std::string j = report_to_json(verify_certificate(cert, vc));
    CHECK(j.find("\"ok\": true") != std::string::npos);
    CHECK(j.find("\"x_in\": true") != std::string::npos);
    CHECK(j.find("\"stability_symbolic\": \"pass\"") != std::string::npos);
}

TEST_CASE("command-line front end") {
    if (!kHaveBinary) return;  // only meaningful from the build directory
    fs::path dir = fs::temp_directory_path() / "orbitctl_cli_test";
    fs::create_directories(dir);
    fs::path circle = write_tmp("orbitctl_cli_test/circle.json", kCircleJson);
    fs::path rot = write_tmp("orbitctl_cli_test/rot90.json", kRot90Json);
    fs::path cert = dir / "circle.cert.json";

    SUBCASE("decide and synth exit 0; verify accepts the fresh certificate") {
        CHECK(run("./orbitctl decide " + rot.string()) == 0);
        CHECK(run("./orbitctl synth " + circle.string() + " --samples 20") == 0);
        REQUIRE(fs::exists(cert));
        CHECK(run("./orbitctl verify " + circle.string() + " " + cert.string() +
                  " --samples 20") == 0);
    }

    SUBCASE("tampering the certificate makes verify exit 1") {
        REQUIRE(run("./orbitctl synth " + circle.string() + " --samples 20") == 0);
        std::ifstream in(cert);
        std::stringstream ss;
        ss << in.rdbuf();
        std::string text = ss.str();
        auto key = text.find("\"text\"");
        REQUIRE(key != std::string::npos);
        auto pos = text.find("-1/4", key);
        REQUIRE(pos != std::string::npos);
        text.replace(pos, 4, "-1/5");
        fs::path bad = write_tmp("orbitctl_cli_test/bad.cert.json", text);
        CHECK(run("./orbitctl verify " + circle.string() + " " + bad.string() +
                  " --samples 10") == 1);
    }

    SUBCASE("input errors exit 2") {
        fs::path bad = write_tmp("orbitctl_cli_test/bad.json",
                                 R"({"A": [["1","2"]], "x": ["1"], "y": ["1"]})");
        CHECK(run("./orbitctl decide " + bad.string()) == 2);
        CHECK(run("./orbitctl synth " + (dir / "missing.json").string()) == 2);
    }

    SUBCASE("smt2 format writes the obligation bundle") {
        REQUIRE(run("./orbitctl synth " + circle.string() + " --samples 20 --format smt2") == 0);
        CHECK(fs::exists(dir / "circle.cert.smt2"));
    }

    fs::remove_all(dir);
}
