#pragma once

#include <string>
#include <vector>

#include "fhks/config.hpp"

namespace fhks {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double tolerance = 0.0;
};

/// Invariants evaluated on the manifest's domain and model: transform round
/// trip, orthonormality, multiplier self-adjointness, the mean relation, the
/// chemoattractant bounds, and bounds plus mass drift over the configured run.
std::vector<CheckResult> run_checks(const RunManifest& manifest);

}  // namespace fhks
