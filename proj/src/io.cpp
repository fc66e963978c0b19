#include "orbit/io.hpp"

#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace orbit {

using nlohmann::json;

namespace {

std::string rat_str(const Rat& r) { return r.get_str(); }

Rat parse_rat(const std::string& s, const std::string& where) {
    Rat r;
    if (s.empty() || r.set_str(s, 10) != 0)
        throw std::invalid_argument(where + ": malformed rational \"" + s + "\"");
    if (r.get_den() == 0) throw std::invalid_argument(where + ": zero denominator in \"" + s + "\"");
    r.canonicalize();
    return r;
}

json alg_json(const AlgNum& a) {
    if (a.is_rational()) return rat_str(a.as_rational());
    json o;
    RatPoly p = a.minpoly();
    json coeffs = json::array();
    for (int i = 0; i <= p.degree(); ++i) coeffs.push_back(rat_str(p.coeff(i)));
    o["minpoly"] = std::move(coeffs);
    Box b = a.isolating_box();
    o["box"] = {rat_str(b.re_lo), rat_str(b.re_hi), rat_str(b.im_lo), rat_str(b.im_hi)};
    return o;
}

AlgNum parse_alg(const json& j, const std::string& where) {
    if (j.is_string()) return AlgNum(parse_rat(j.get<std::string>(), where));
    if (!j.is_object() || !j.contains("minpoly") || !j.contains("box"))
        throw std::invalid_argument(where + ": expected rational string or {minpoly, box}");
    std::vector<Rat> coeffs;
    for (const auto& c : j.at("minpoly")) coeffs.push_back(parse_rat(c.get<std::string>(), where));
    const auto& b = j.at("box");
    if (!b.is_array() || b.size() != 4)
        throw std::invalid_argument(where + ": box must list four rationals");
    return AlgNum::from_minpoly(RatPoly(coeffs),
                                Box(parse_rat(b[0].get<std::string>(), where),
                                    parse_rat(b[1].get<std::string>(), where),
                                    parse_rat(b[2].get<std::string>(), where),
                                    parse_rat(b[3].get<std::string>(), where)));
}

json vec_json(const AlgVec& v) {
    json a = json::array();
    for (const auto& e : v) a.push_back(alg_json(e));
    return a;
}

AlgVec parse_vec(const json& j, const std::string& where) {
    if (!j.is_array()) throw std::invalid_argument(where + ": expected an array");
    AlgVec v;
    for (size_t i = 0; i < j.size(); ++i)
        v.push_back(parse_alg(j[i], where + "[" + std::to_string(i) + "]"));
    return v;
}

const char* rel_str(Rel r) {
    switch (r) {
        case Rel::Ge: return ">=";
        case Rel::Gt: return ">";
        case Rel::Eq: return "=";
        case Rel::Ne: return "!=";
    }
    return "?";
}

json poly_json(const MPoly& p) {
    json terms = json::array();
    for (const auto& [mono, c] : p.terms()) {
        json t;
        t["coeff"] = alg_json(c);
        t["monomial"] = mono;
        terms.push_back(std::move(t));
    }
    return terms;
}

json ast_json(const FormulaNode& n) {
    json o;
    switch (n.kind) {
        case FormulaNode::Kind::Atom:
            o["node"] = "atom";
            o["rel"] = rel_str(n.rel);
            o["poly"] = poly_json(n.poly);
            break;
        case FormulaNode::Kind::And:
        case FormulaNode::Kind::Or: {
            o["node"] = n.kind == FormulaNode::Kind::And ? "and" : "or";
            json args = json::array();
            for (const auto& k : n.kids) args.push_back(ast_json(*k));
            o["args"] = std::move(args);
            break;
        }
        case FormulaNode::Kind::Not:
            o["node"] = "not";
            o["arg"] = ast_json(*n.kids.at(0));
            break;
        case FormulaNode::Kind::Points: {
            o["node"] = "points";
            json pts = json::array();
            for (const auto& p : n.points) pts.push_back(vec_json(p));
            o["points"] = std::move(pts);
            break;
        }
    }
    return o;
}

json formula_json(const SemialgFormula& f) {
    json o;
    o["text"] = serialize(f);
    o["ast"] = ast_json(*f.root());
    return o;
}

const char* verdict_str(SynthCertificate::Verdict v) {
    switch (v) {
        case SynthCertificate::Verdict::Reachable: return "REACHABLE";
        case SynthCertificate::Verdict::InvariantFound: return "INVARIANT_FOUND";
        case SynthCertificate::Verdict::NoInvariant: return "NO_INVARIANT";
    }
    return "?";
}

SynthCertificate::Verdict parse_verdict(const std::string& s) {
    if (s == "REACHABLE") return SynthCertificate::Verdict::Reachable;
    if (s == "INVARIANT_FOUND") return SynthCertificate::Verdict::InvariantFound;
    if (s == "NO_INVARIANT") return SynthCertificate::Verdict::NoInvariant;
    throw std::invalid_argument("certificate: unknown verdict \"" + s + "\"");
}

const char* case_str(CaseTag::Kind k) {
    switch (k) {
        case CaseTag::Kind::HasModulusGreaterOne: return "modulus_greater_one";
        case CaseTag::Kind::HasModulusLessOne: return "modulus_less_one";
        case CaseTag::Kind::ModOneNonDiagonal: return "modulus_one_nondiagonal";
        case CaseTag::Kind::ModOneDiagonal: return "modulus_one_diagonal";
    }
    return "?";
}

CaseTag::Kind parse_case(const std::string& s) {
    if (s == "modulus_greater_one") return CaseTag::Kind::HasModulusGreaterOne;
    if (s == "modulus_less_one") return CaseTag::Kind::HasModulusLessOne;
    if (s == "modulus_one_nondiagonal") return CaseTag::Kind::ModOneNonDiagonal;
    if (s == "modulus_one_diagonal") return CaseTag::Kind::ModOneDiagonal;
    throw std::invalid_argument("certificate: unknown case \"" + s + "\"");
}

const char* reach_str(Reachability r) {
    switch (r) {
        case Reachability::Reachable: return "reachable";
        case Reachability::Unreachable: return "unreachable";
        case Reachability::UnreachableRelativeToClosure: return "unreachable_relative_to_closure";
        case Reachability::Indeterminate: return "indeterminate";
    }
    return "?";
}

Reachability parse_reach(const std::string& s) {
    if (s == "reachable") return Reachability::Reachable;
    if (s == "unreachable") return Reachability::Unreachable;
    if (s == "unreachable_relative_to_closure") return Reachability::UnreachableRelativeToClosure;
    if (s == "indeterminate") return Reachability::Indeterminate;
    throw std::invalid_argument("certificate: unknown reachability \"" + s + "\"");
}

const char* step_str(ReductionStep::Kind k) {
    switch (k) {
        case ReductionStep::Kind::NilpotentYNonzero: return "nilpotent_y_nonzero";
        case ReductionStep::Kind::NilpotentDropBlocks: return "nilpotent_drop_blocks";
        case ReductionStep::Kind::XZeroYNonzero: return "x_zero_y_nonzero";
        case ReductionStep::Kind::XNonzeroYZero: return "x_nonzero_y_zero";
        case ReductionStep::Kind::DropZeroBlocks: return "drop_zero_blocks";
        case ReductionStep::Kind::NonDiagFirstCoordYNonzero: return "nondiag_first_coord_y_nonzero";
        case ReductionStep::Kind::DropTailCoordinates: return "drop_tail_coordinates";
    }
    return "?";
}

json instance_json_obj(const OrbitInstance& inst) {
    json o;
    json rows = json::array();
    for (const auto& row : inst.A) rows.push_back(vec_json(row));
    o["A"] = std::move(rows);
    o["x"] = vec_json(inst.x);
    o["y"] = vec_json(inst.y);
    return o;
}

OrbitInstance parse_instance_obj(const json& j) {
    if (!j.is_object() || !j.contains("A") || !j.contains("x") || !j.contains("y"))
        throw std::invalid_argument("instance: expected fields A, x, y");
    const auto& ja = j.at("A");
    if (!ja.is_array() || ja.empty()) throw std::invalid_argument("instance: A must be a non-empty matrix");
    AlgMat A;
    for (size_t i = 0; i < ja.size(); ++i) {
        auto row = parse_vec(ja[i], "A row " + std::to_string(i));
        if (row.size() != ja.size())
            throw std::invalid_argument("instance: A is not square (row " + std::to_string(i) +
                                        " has " + std::to_string(row.size()) + " entries, expected " +
                                        std::to_string(ja.size()) + ")");
        A.push_back(std::move(row));
    }
    AlgVec x = parse_vec(j.at("x"), "x");
    AlgVec y = parse_vec(j.at("y"), "y");
    if (x.size() != A.size() || y.size() != A.size())
        throw std::invalid_argument("instance: dimension mismatch between A, x, y");
    return make_instance(std::move(A), std::move(x), std::move(y));
}

}  // namespace

OrbitInstance parse_instance_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("instance: invalid JSON: ") + e.what());
    }
    return parse_instance_obj(j);
}

std::string instance_to_json(const OrbitInstance& inst) {
    return instance_json_obj(inst).dump(2) + "\n";
}

std::string certificate_to_json(const SynthCertificate& cert, const SynthConfig& config) {
    json o;
    o["schema_version"] = 1;
    o["verdict"] = verdict_str(cert.verdict);
    o["instance"] = instance_json_obj(cert.instance);
    o["config"] = {{"search_bound", config.search_bound},
                   {"exponent_bound", config.exponent_bound},
                   {"samples", config.samples},
                   {"seed", config.seed}};
    o["reachable_n"] = cert.reachable_n;
    if (cert.verdict == SynthCertificate::Verdict::InvariantFound) {
        o["invariant"] = formula_json(cert.invariant);
        o["invariant"]["closed"] = cert.closed;
        o["jordan_invariant"] = formula_json(cert.jordan_invariant);
    }
    if (cert.case_tag)
        o["case"] = {{"kind", case_str(cert.case_tag->kind)}, {"block", cert.case_tag->block}};
    else
        o["case"] = nullptr;
    o["params"] = {{"n0", cert.params.n0}, {"block", cert.params.block}, {"k", cert.params.k}};
    json basis = json::array();
    for (const auto& row : cert.lattice.basis) {
        json r = json::array();
        for (const auto& e : row) r.push_back(e.get_str());
        basis.push_back(std::move(r));
    }
    o["lattice"] = {{"basis", std::move(basis)}, {"exponent_bound", cert.lattice.exponent_bound}};
    json mu = json::array();
    for (const auto& m : cert.witness.mu) mu.push_back(alg_json(m));
    o["witness"] = std::move(mu);
    o["reachability"] = {{"status", reach_str(cert.reachability.status)},
                         {"n", cert.reachability.n},
                         {"bound", cert.reachability.bound},
                         {"note", cert.reachability.note}};
    json trace = json::array();
    for (const auto& s : cert.trace)
        trace.push_back({{"kind", step_str(s.kind)},
                         {"removed_coordinates", s.removed_coordinates},
                         {"prefix_length", s.prefix_length},
                         {"block", s.block},
                         {"k", s.k}});
    o["trace"] = std::move(trace);
    return o.dump(2) + "\n";
}

SynthCertificate parse_certificate_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("certificate: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("schema_version", 0) != 1)
        throw std::invalid_argument("certificate: missing or unsupported schema_version");

    SynthCertificate cert;
    cert.verdict = parse_verdict(j.at("verdict").get<std::string>());
    cert.instance = parse_instance_obj(j.at("instance"));
    cert.reachable_n = j.value("reachable_n", -1L);
    if (j.contains("invariant")) {
        cert.invariant = parse_formula(j.at("invariant").at("text").get<std::string>(),
                                       cert.instance.d);
        cert.closed = j.at("invariant").value("closed", false);
        cert.jordan_invariant = parse_formula(
            j.at("jordan_invariant").at("text").get<std::string>(), cert.instance.d);
    }
    if (j.contains("case") && !j.at("case").is_null()) {
        CaseTag tag;
        tag.kind = parse_case(j.at("case").at("kind").get<std::string>());
        tag.block = j.at("case").at("block").get<int>();
        cert.case_tag = tag;
    }
    const auto& p = j.at("params");
    cert.params.n0 = p.at("n0").get<long>();
    cert.params.block = p.at("block").get<int>();
    cert.params.k = p.at("k").get<int>();
    for (const auto& row : j.at("lattice").at("basis")) {
        IntVec r;
        for (const auto& e : row) r.push_back(Int(e.get<std::string>()));
        cert.lattice.basis.push_back(std::move(r));
    }
    cert.lattice.exponent_bound = j.at("lattice").at("exponent_bound").get<long>();
    for (const auto& m : j.at("witness")) cert.witness.mu.push_back(parse_alg(m, "witness"));
    const auto& r = j.at("reachability");
    cert.reachability.status = parse_reach(r.at("status").get<std::string>());
    cert.reachability.n = r.at("n").get<long>();
    cert.reachability.bound = r.at("bound").get<long>();
    cert.reachability.note = r.at("note").get<std::string>();

    // Derived data is recomputed from the embedded instance; the recorded
    // trace is audit information only.
    auto [dec, jinst] = jordan_decompose(cert.instance);
    cert.jordan = dec;
    cert.jordan_instance = jinst;
    auto norm = normalize(jinst);
    if (norm.status == NormalizeOutcome::Status::Reduced) {
        cert.trace = norm.trace;
        cert.reduced_instance = norm.reduced;
        cert.reduced_blocks = norm.reduced_blocks;
        if (cert.params.n0 > 0)
            cert.prefix_points = orbit_prefix(norm.reduced, cert.params.n0);
    }
    return cert;
}

std::string certificate_summary(const SynthCertificate& cert) {
    std::ostringstream os;
    os << "verdict: " << verdict_str(cert.verdict) << "\n";
    os << "dimension: " << cert.instance.d << "\n";
    switch (cert.verdict) {
        case SynthCertificate::Verdict::Reachable:
            os << "y = A^" << cert.reachable_n << " x\n";
            break;
        case SynthCertificate::Verdict::NoInvariant:
            os << "y lies on the closure of the orbit; witness ratios y_i/x_i recorded\n";
            os << "reachability: " << reach_str(cert.reachability.status) << " (searched to n = "
               << cert.reachability.bound << ")\n";
            break;
        case SynthCertificate::Verdict::InvariantFound: {
            if (cert.case_tag)
                os << "case: " << case_str(cert.case_tag->kind) << " (block "
                   << cert.case_tag->block << ")\n";
            else
                os << "case: settled during normalization\n";
            os << "prefix length n0 = " << cert.params.n0 << ", "
               << (cert.closed ? "topologically closed" : "not closed") << "\n";
            os << "reachability: " << reach_str(cert.reachability.status);
            if (!cert.reachability.note.empty()) os << " (" << cert.reachability.note << ")";
            os << "\n";
            std::string f = serialize(cert.invariant);
            if (f.size() > 400) f = f.substr(0, 400) + "...";
            os << "invariant: " << f << "\n";
            break;
        }
    }
    return os.str();
}

std::string report_to_json(const VerifyReport& report) {
    auto tri = [](VerifyReport::Tri t) {
        switch (t) {
            case VerifyReport::Tri::Pass: return "pass";
            case VerifyReport::Tri::Fail: return "fail";
            case VerifyReport::Tri::NotApplicable: return "not_applicable";
        }
        return "?";
    };
    json o;
    o["ok"] = report.ok();
    o["x_in"] = report.x_in;
    o["y_out"] = report.y_out;
    o["prefix_in"] = report.prefix_in;
    o["stability_symbolic"] = tri(report.stability_symbolic);
    o["stability_sampled"] = {{"passes", report.stability_passes},
                              {"total", report.stability_total}};
    o["orbit_check"] = {{"iterations", report.orbit_iterations},
                        {"all_in", report.orbit_all_in},
                        {"never_hits_y", report.orbit_never_hits_y}};
    o["seed"] = report.seed;
    o["detail"] = report.detail;
    return o.dump(2) + "\n";
}

std::string obligations_smt2(const SynthCertificate& cert) {
    std::ostringstream os;
    if (cert.verdict != SynthCertificate::Verdict::InvariantFound) {
        os << "; no stability obligations: verdict " << verdict_str(cert.verdict) << "\n";
        return os.str();
    }
    const SemialgFormula& f = cert.invariant;
    int d = cert.instance.d;

    // y is excluded: f(u) with u pinned to y must be unsat.
    std::vector<SemialgFormula> pin = {f};
    for (int i = 0; i < d; ++i) {
        auto [re, im] = re_im(cert.instance.y[i]);
        pin.push_back(SemialgFormula::atom(
            d, MPoly::var(2 * d, 2 * i) - MPoly::constant(2 * d, re), Rel::Eq));
        pin.push_back(SemialgFormula::atom(
            d, MPoly::var(2 * d, 2 * i + 1) - MPoly::constant(2 * d, im), Rel::Eq));
    }
    os << "; obligation 1 (expect unsat): the target point satisfies the invariant\n";
    os << to_smt2(SemialgFormula::conj(d, std::move(pin)));

    // One-step stability: f(z) and not f(Az) must be unsat. Point sets are
    // carried to preimages, so this needs invertible dynamics.
    try {
        SemialgFormula step = substitute_linear(f, cert.instance.A);
        os << "; obligation 2 (expect unsat): a point of the invariant leaves in one step\n";
        os << to_smt2(SemialgFormula::conj(d, {f, SemialgFormula::negation(step)}));
    } catch (const std::exception&) {
        os << "; obligation 2 omitted: dynamics not invertible, stability checked exactly"
              " by the verifier\n";
    }
    return os.str();
}

}  // namespace orbit
