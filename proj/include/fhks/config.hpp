#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fhks/domain.hpp"
#include "fhks/evolution.hpp"
#include "fhks/kinetic.hpp"

namespace fhks {

enum class PresetKind { constant, bump, two_bumps, riemann_step, random_clipped };

struct Preset {
    PresetKind kind = PresetKind::bump;
    double value = 0.5;       // used by `constant`
    std::uint64_t seed = 0;   // used by `random_clipped`

    bool operator==(const Preset&) const = default;
};

enum class SweepAxis { none, s, epsilon, sigma };

struct SweepSpec {
    SweepAxis axis = SweepAxis::none;
    std::vector<double> values;
    bool defect = false;
    DefectWindow window;

    bool operator==(const SweepSpec& o) const {
        return axis == o.axis && values == o.values && defect == o.defect &&
               window.cells == o.window.cells && window.steps == o.window.steps;
    }
};

struct RunManifest {
    DomainSpec domain;
    SimConfig sim;
    Preset preset;
    std::vector<double> output_times;
    bool write_series = true;
    bool write_snapshots = true;
    std::string output_dir = "out";
    SweepSpec sweep;

    void validate() const;
    bool operator==(const RunManifest&) const = default;
};

/// Parses the INI-style grammar documented in the README. Unknown sections
/// or keys and malformed lines raise ValidationError carrying the line
/// number; the result is validated.
RunManifest parse_config(std::string_view text);

/// Canonical text for a manifest; parse_config(render(m)) == m.
std::string render(const RunManifest& manifest);

const char* to_string(PresetKind kind);
const char* to_string(SweepAxis axis);

}  // namespace fhks
