#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fhks/errors.hpp"
#include "fhks/evolution.hpp"
#include "fhks/io.hpp"
#include "oracles.hpp"

using namespace fhks;

namespace {

// Exhaustive search over a fine grid of [lo, hi], endpoints and vertex included.
double brute_force_godunov(double ul, double ur, double v) {
    const double lo = std::min(ul, ur);
    const double hi = std::max(ul, ur);
    const bool minimise = ul <= ur;
    double best = minimise ? 1e300 : -1e300;
    auto visit = [&](double w) {
        const double f = v * w * (1.0 - w);
        best = minimise ? std::min(best, f) : std::max(best, f);
    };
    const int n = 20000;
    for (int i = 0; i <= n; ++i) visit(lo + (hi - lo) * i / n);
    if (lo < 0.5 && 0.5 < hi) visit(0.5);
    return best;
}

double mass(const GridField& u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += u[i];
    return acc * u.domain().cell_volume();
}

GridField bump(int n) {
    DomainSpec d;
    d.cells = {n};
    return make_initial_data(Preset{PresetKind::bump}, d);
}

GridField coarsen(const GridField& f) {
    DomainSpec d = f.domain();
    d.cells = {d.cells[0] / 2};
    GridField g(d);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = 0.5 * (f[2 * i] + f[2 * i + 1]);
    return g;
}

}  // namespace

TEST_CASE("numerical flux examples") {
    CHECK(numerical_flux(0.3, 0.8, 0.0) == 0.0);
    for (double u : {0.0, 0.2, 0.5, 0.9, 1.0}) {
        for (double v : {-2.0, 0.5, 3.0}) {
            CHECK(numerical_flux(u, u, v) == doctest::Approx(v * u * (1.0 - u)).epsilon(1e-15));
            CHECK(numerical_flux(u, u, v, FluxScheme::lax_friedrichs) ==
                  doctest::Approx(v * u * (1.0 - u)).epsilon(1e-15));
        }
    }
    CHECK(brute_force_godunov(0.2, 0.9, 1.0) == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(numerical_flux(0.2, 0.9, 1.0) == doctest::Approx(0.09).epsilon(1e-14));
}

TEST_CASE("Godunov flux matches exhaustive extremisation") {
    std::mt19937_64 rng(60);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> vel(-3.0, 3.0);
    for (int trial = 0; trial < 400; ++trial) {
        const double ul = unit(rng);
        const double ur = unit(rng);
        const double v = vel(rng);
        CHECK(std::abs(numerical_flux(ul, ur, v) - brute_force_godunov(ul, ur, v)) <= 1e-8);
        CHECK(numerical_flux(ul, ur, v) == doctest::Approx(v * logistic_flux(godunov_state(ul, ur, v))));
    }
}

TEST_CASE("numerical fluxes are monotone") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto scheme : {FluxScheme::godunov, FluxScheme::lax_friedrichs}) {
        for (int trial = 0; trial < 300; ++trial) {
            const double a = unit(rng);
            const double b = unit(rng);
            const double other = unit(rng);
            const double v = 4.0 * unit(rng) - 2.0;
            const double lo = std::min(a, b);
            const double hi = std::max(a, b);
            CHECK(numerical_flux(lo, other, v, scheme) <= numerical_flux(hi, other, v, scheme) + 1e-15);
            CHECK(numerical_flux(other, lo, v, scheme) >= numerical_flux(other, hi, v, scheme) - 1e-15);
        }
    }
}

TEST_CASE("cfl time step") {
    const DomainSpec d = oracle::line(64);
    SimConfig config;
    config.t_end = 1.0;
    SimState state = make_state(GridField(d, 0.5), config, 0.25);
    CHECK(cfl_dt(state, config) == doctest::Approx(0.75));

    state.chemo.velocity.component(0)[10] = -2.0;
    state.chemo.velocity.component(0)[20] = 1.0;
    CHECK(cfl_dt(state, config) == doctest::Approx(0.45 * (1.0 / 64.0) / 2.0).epsilon(1e-15));
    CHECK(cfl_dt(state, config) == doctest::Approx(3.5156e-3).epsilon(1e-4));

    SimState fine = make_state(GridField(oracle::line(128), 0.5), config, 0.25);
    fine.chemo.velocity.component(0)[10] = 2.0;
    CHECK(cfl_dt(fine, config) == doctest::Approx(0.5 * cfl_dt(state, config)).epsilon(1e-15));
}

TEST_CASE("step keeps a constant state") {
    SimConfig config;
    for (auto splitting : {Splitting::lie, Splitting::strang}) {
        config.splitting = splitting;
        const SimState s0 = make_state(GridField(oracle::rect(8, 6), 0.35), config);
        const SimState s1 = step(s0, config, 0.1);
        CHECK(s1.t == doctest::Approx(0.1));
        CHECK(oracle::max_abs_diff(s1.u, s0.u) <= 1e-14);
    }
}

TEST_CASE("step conserves mass and bounds") {
    std::mt19937_64 rng(62);
    for (auto splitting : {Splitting::lie, Splitting::strang}) {
        for (auto scheme : {FluxScheme::godunov, FluxScheme::lax_friedrichs}) {
            SimConfig config;
            config.splitting = splitting;
            config.flux = scheme;
            config.t_end = 100.0;
            for (const DomainSpec& d : {oracle::line(64), oracle::rect(16, 12)}) {
                SimState s = make_state(oracle::random_field(d, rng), config);
                for (int n = 0; n < 20; ++n) {
                    const SimState next = step(s, config);
                    CHECK(std::abs(mass(next.u) - mass(s.u)) <= 1e-13);
                    CHECK(next.u.min() >= -1e-8);
                    CHECK(next.u.max() <= 1.0 + 1e-8);
                    s = next;
                }
            }
        }
    }
}

TEST_CASE("two hundred steps on the bump stay in [0, 1]") {
    SimConfig config;
    config.epsilon = 1e-3;
    config.frac.s = 0.4;
    config.t_end = 1e6;
    SimState s = make_state(bump(128), config);
    double lo = 1.0;
    double hi = 0.0;
    for (int n = 0; n < 200; ++n) {
        s = step(s, config);
        lo = std::min(lo, s.u.min());
        hi = std::max(hi, s.u.max());
    }
    CHECK(lo >= -1e-8);
    CHECK(hi <= 1.0 + 1e-8);
}

TEST_CASE("step refuses to run past t_end") {
    SimConfig config;
    config.t_end = 0.5;
    const SimState s = make_state(bump(16), config, 0.5);
    CHECK_THROWS_AS(step(s, config), ValidationError);
}

TEST_CASE("run examples") {
    SimConfig config;
    const DomainSpec d = oracle::line(64);
    const Trajectory constant = run(GridField(d, 0.5), config);
    for (const auto& snap : constant.snapshots) {
        CHECK(snap.u.min() == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(snap.u.max() == doctest::Approx(0.5).epsilon(1e-14));
    }
    const Trajectory zero = run(GridField(d, 0.0), config);
    for (const auto& snap : zero.snapshots) {
        CHECK(snap.u.min() == 0.0);
        CHECK(snap.u.max() == 0.0);
    }

    const Trajectory traj = run(bump(128), config, {0.1, 0.25});
    REQUIRE(traj.snapshots.size() == 4);
    CHECK(traj.snapshots[0].t == 0.0);
    CHECK(traj.snapshots[1].t == 0.1);
    CHECK(traj.snapshots[2].t == 0.25);
    CHECK(traj.snapshots[3].t == config.t_end);
    for (std::size_t i = 1; i < traj.diagnostics.size(); ++i) {
        CHECK(traj.diagnostics[i].t > traj.diagnostics[i - 1].t);
        CHECK(std::abs(traj.diagnostics[i].mass - traj.diagnostics[0].mass) <= 1e-12);
    }
    CHECK(traj.diagnostics.back().t == config.t_end);
}

TEST_CASE("daper reference run") {
    SimConfig config;
    const Trajectory constant = daper_run(GridField(oracle::line(32), 0.7), config);
    CHECK(constant.snapshots.back().u.min() == doctest::Approx(0.7));
    CHECK(constant.snapshots.back().u.max() == doctest::Approx(0.7));
    const Trajectory traj = daper_run(bump(128), config);
    for (const auto& r : traj.diagnostics) CHECK(std::abs(r.mass - traj.diagnostics[0].mass) <= 1e-12);
    CHECK(traj.snapshots.back().chemo.coupling == Coupling::classical);
}

TEST_CASE("fractional runs approach the reference as s decreases") {
    const GridField u0 = bump(128);
    SimConfig config;
    const GridField reference = daper_run(u0, config).snapshots.back().u;
    double previous = 1e300;
    for (double s : {0.45, 0.2, 0.02}) {
        config.frac.s = s;
        const GridField u = run(u0, config).snapshots.back().u;
        double l1 = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) l1 += std::abs(u[i] - reference[i]);
        l1 *= u.domain().cell_volume();
        CHECK(l1 < previous);
        previous = l1;
    }
}

TEST_CASE("Duhamel map examples") {
    SimConfig config;
    config.epsilon = 1e-2;
    const PicardResult constant = duhamel_picard(GridField(oracle::line(32), 0.4), config, 1e-2);
    CHECK(constant.iterations == 1);
    CHECK(oracle::max_abs_diff(constant.u, GridField(oracle::line(32), 0.4)) <= 1e-14);

    const PicardResult result = duhamel_picard(bump(64), config, 1e-2);
    REQUIRE(result.iterate_diffs.size() >= 4);
    CHECK(result.iterate_diffs.back() <= 1e-10);
    for (std::size_t i = 1; i < result.iterate_diffs.size(); ++i) {
        CHECK(result.iterate_diffs[i] < 0.1 * result.iterate_diffs[i - 1]);
    }
    CHECK_THROWS_AS(duhamel_picard(bump(64), config, 0.0), ValidationError);
}

TEST_CASE("Duhamel fixed point agrees with the splitting scheme") {
    SimConfig config;
    config.epsilon = 1e-2;
    config.frac.s = 0.4;
    config.t_end = 1e-2;
    const GridField u0 = bump(64);
    const PicardResult picard = duhamel_picard(u0, config, 1e-2);
    const GridField stepped = run(u0, config).snapshots.back().u;
    CHECK(oracle::max_abs_diff(picard.u, stepped) <= 5e-4);
}

TEST_CASE("first-order self-convergence") {
    SimConfig config;
    std::vector<GridField> finals;
    for (int n : {128, 256, 512}) finals.push_back(run(bump(n), config).snapshots.back().u);
    auto distance = [](const GridField& coarse, const GridField& fine) {
        const GridField c = coarsen(fine);
        double acc = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) acc += std::abs(c[i] - coarse[i]);
        return acc * c.domain().cell_volume();
    };
    const double d1 = distance(finals[0], finals[1]);
    const double d2 = distance(finals[1], finals[2]);
    MESSAGE("successive L1 differences " << d1 << ", " << d2);
    CHECK(d2 < d1);
    CHECK(d1 / d2 >= 1.5);
    CHECK(d1 / d2 <= 2.5);
}

TEST_CASE("invalid configurations are rejected") {
    SimConfig config;
    config.epsilon = 0.0;
    CHECK_THROWS_AS(config.validate(), ValidationError);
    config = SimConfig{};
    config.cfl = 1.5;
    CHECK_THROWS_AS(config.validate(), ValidationError);
    config = SimConfig{};
    config.diag_levels = {0.5, 0.25};
    CHECK_THROWS_AS(config.validate(), ValidationError);
    config = SimConfig{};
    config.diag_levels = {1.5};
    CHECK_THROWS_AS(config.validate(), ValidationError);
}
