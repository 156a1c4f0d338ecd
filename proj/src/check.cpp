#include "fhks/check.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fhks/chemo.hpp"
#include "fhks/fractional.hpp"
#include "fhks/io.hpp"

namespace fhks {

namespace {

GridField random_field(const DomainSpec& d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    GridField f(d);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = dist(rng);
    return f;
}

}  // namespace

std::vector<CheckResult> run_checks(const RunManifest& manifest) {
    manifest.validate();
    std::vector<CheckResult> out;
    const auto& d = manifest.domain;
    const auto basis = build_basis(d);
    std::mt19937_64 rng(manifest.preset.seed);

    {
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const GridField f = random_field(d, rng);
            const GridField back = to_grid(to_spectral(f, basis));
            for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(back[i] - f[i]));
        }
        out.push_back({"transform round trip", worst <= 1e-12, worst, 1e-12});
    }
    {
        // Orthonormality through the first few modes of every axis.
        double worst = 0.0;
        const std::size_t modes = std::min<std::size_t>(basis->mode_count(), 16);
        for (std::size_t a = 0; a < modes; ++a) {
            for (std::size_t b = 0; b < modes; ++b) {
                double acc = 0.0;
                for (std::size_t c = 0; c < d.total_cells(); ++c) {
                    acc += basis->eigenfunction_at_cell(a, c) * basis->eigenfunction_at_cell(b, c);
                }
                acc *= d.cell_volume();
                worst = std::max(worst, std::abs(acc - (a == b ? 1.0 : 0.0)));
            }
        }
        out.push_back({"orthonormality", worst <= 1e-12, worst, 1e-12});
    }
    {
        double worst = 0.0;
        const MultiplierKind kinds[] = {MultiplierKind::power_s,     MultiplierKind::ks,
                                        MultiplierKind::hs,          MultiplierKind::resolvent,
                                        MultiplierKind::composite_L, MultiplierKind::heat,
                                        MultiplierKind::chemo_resolvent};
        const GridField f = random_field(d, rng);
        const GridField g = random_field(d, rng);
        const SpectralField fs = to_spectral(f, basis);
        const SpectralField gs = to_spectral(g, basis);
        for (auto kind : kinds) {
            const auto m = make_multiplier(kind, *basis, manifest.sim.frac,
                                           MultiplierArgs{1.0, 0.1, manifest.sim.epsilon});
            const double lhs = inner_product(to_grid(apply(m, fs)), g);
            const double rhs = inner_product(f, to_grid(apply(m, gs)));
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
        }
        out.push_back({"multiplier self-adjointness", worst <= 1e-12, worst, 1e-12});
    }
    {
        double worst = 0.0;
        double c_low = 0.0;
        double c_high = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const GridField u = random_field(d, rng);
            const ChemoSolution sol = solve_chemo(u, manifest.sim.frac, basis);
            worst = std::max(worst, mass_relation_residual(u, sol));
            c_low = std::min(c_low, sol.c.min());
            c_high = std::max(c_high, sol.c.max() - 1.0);
        }
        out.push_back({"mean relation", worst <= 1e-12, worst, 1e-12});
        const double excess = std::max(c_high, -c_low);
        out.push_back({"chemoattractant bounds", excess <= 1e-8, excess, 1e-8});
    }
    {
        const GridField u0 = make_initial_data(manifest.preset, d);
        const Trajectory traj = run(u0, manifest.sim, manifest.output_times);
        double excess = 0.0;
        double drift = 0.0;
        const double m0 = traj.diagnostics.front().mass;
        for (const auto& r : traj.diagnostics) {
            excess = std::max({excess, -r.u_min, r.u_max - 1.0, -r.c_min, r.c_max - 1.0});
            drift = std::max(drift, std::abs(r.mass - m0));
        }
        out.push_back({"run bounds", excess <= 1e-8, excess, 1e-8});
        out.push_back({"run mass drift", drift <= 1e-12, drift, 1e-12});
    }
    return out;
}

}  // namespace fhks
