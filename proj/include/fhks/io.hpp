#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fhks/config.hpp"
#include "fhks/evolution.hpp"

namespace fhks {

/// Initial data in [0, 1].
///   constant       value everywhere
///   bump           0.9 exp(-r^2), r = |x - centre| / (L / 8) (per-axis scaling)
///   two_bumps      0.9 (exp(-r1^2) + exp(-r2^2)), centres at L0/4 and 3 L0/4, width L0/12
///   riemann_step   0.9 for x0 < L0 / 2, 0.1 otherwise
///   random_clipped uniform in [0, 1) from mt19937_64(seed), 53-bit mantissa
GridField make_initial_data(const Preset& preset, const DomainSpec& domain);

/// CSV with columns t, mass, u_min, u_max, c_min, c_max, viscous_energy_cum
/// and one entropy_k<level> column per diagnostic level; 17 significant
/// digits, '\n' line endings.
void write_series(const Trajectory& traj, const std::vector<double>& levels,
                  const std::string& path);
std::string series_csv(const Trajectory& traj, const std::vector<double>& levels);

inline constexpr std::uint16_t snapshot_version = 1;

/// Header size in bytes for a domain of the given dimension.
std::size_t snapshot_header_size(int dimension);

void write_snapshot(const SimState& state, const std::string& path);
std::vector<std::uint8_t> encode_snapshot(const SimState& state);

struct Snapshot {
    DomainSpec domain;
    double t = 0.0;
    GridField u;
    GridField c;
};

/// Throws ValidationError on a bad magic, an unknown version or a truncated
/// payload; nothing is returned in those cases.
Snapshot read_snapshot(const std::string& path);
Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes);

struct SweepRow {
    double value = 0.0;
    bool ok = true;
    std::string error;
    double terminal_mass = 0.0;
    double l1_to_reference = 0.0;
    double mass_factor = 1.0;
    double mass_relation_residual = 0.0;
    double defect = 0.0;  // only when requested
};

struct SweepTable {
    SweepAxis axis = SweepAxis::none;
    bool with_defect = false;
    std::string reference;  // description of the reference run
    std::vector<SweepRow> rows;
};

/// One row per value of the sweep axis, computed on `threads` workers and
/// returned in axis order. The reference is daper_run for the s and sigma
/// axes and the smallest-epsilon run for the epsilon axis. A failing row
/// records its error and the sweep continues.
SweepTable sweep(const RunManifest& manifest, int threads = 1);

std::string sweep_csv(const SweepTable& table);

/// Writes text to a file byte-for-byte; IoError names the path on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace fhks
