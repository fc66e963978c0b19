#pragma once

#include <string>

#include "orbit/synth.hpp"
#include "orbit/verify.hpp"

namespace orbit {

// Instance files: {"A": [["p/q", ...], ...], "x": [...], "y": [...]},
// matrices row-major, rationals as "p/q" (or plain integer) strings.
// Malformed input throws std::invalid_argument naming the offending field.
OrbitInstance parse_instance_json(const std::string& text);
std::string instance_to_json(const OrbitInstance& inst);

// Self-contained certificate: verdict, formulas (canonical text plus a
// structured AST), case parameters, relation lattice with its exponent bound,
// witness, reduction trace, and the embedded instance ("schema_version": 1).
// Deterministic: identical certificates serialize to identical bytes.
std::string certificate_to_json(const SynthCertificate& cert, const SynthConfig& config);

// Rebuilds a certificate from its JSON form. Derived data (Jordan
// decomposition, reduction trace, reduced instance) is recomputed from the
// embedded instance; recorded fields are taken from the file so that
// verify_certificate can detect tampering.
SynthCertificate parse_certificate_json(const std::string& text);

// Human-readable one-screen summary.
std::string certificate_summary(const SynthCertificate& cert);

std::string report_to_json(const VerifyReport& report);

// SMT-LIB2 obligations for third-party cross-checking: each script ends in
// (check-sat) and is expected unsat. Covers exclusion of y and, when the
// dynamics are invertible, one-step stability of the invariant.
std::string obligations_smt2(const SynthCertificate& cert);

}  // namespace orbit
