#pragma once

#include <string>
#include <vector>

#include "orbit/synth.hpp"

namespace orbit {

struct VerifyConfig {
    long samples = 1000;
    unsigned long seed = 1;
    long orbit_iterations = 200;
};

struct VerifyReport {
    enum class Tri { Pass, Fail, NotApplicable };

    bool x_in = false;
    bool y_out = false;
    bool prefix_in = true;
    Tri stability_symbolic = Tri::NotApplicable;
    long stability_passes = 0;
    long stability_total = 0;
    long orbit_iterations = 0;
    bool orbit_all_in = false;
    bool orbit_never_hits_y = false;
    unsigned long seed = 0;
    std::string detail;  // first failure, for diagnostics

    bool ok() const {
        return x_in && y_out && prefix_in && orbit_all_in && orbit_never_hits_y &&
               stability_symbolic != Tri::Fail && stability_passes == stability_total;
    }
};

// Exact membership checks (x, y, orbit up to orbit_iterations) plus sampled
// one-step stability; symbolic obligations are NotApplicable without a
// certificate.
VerifyReport verify_invariant(const OrbitInstance& inst, const SemialgFormula& f,
                              const VerifyConfig& config = {});

// Additionally replays the case-specific stability identities recorded in the
// certificate, exactly.
VerifyReport verify_certificate(const SynthCertificate& cert, const VerifyConfig& config = {});

// Deterministic sampling of points satisfying f: point-set members, rational
// rejection samples, and boundary-biased points on circle atoms. May return
// fewer than count on thin sets.
std::vector<AlgVec> sample_points(const SemialgFormula& f, unsigned long seed, long count);

}  // namespace orbit
