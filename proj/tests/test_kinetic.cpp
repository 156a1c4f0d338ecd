#include <doctest.h>

#include <cmath>
#include <random>

#include "fhks/errors.hpp"
#include "fhks/io.hpp"
#include "fhks/kinetic.hpp"
#include "oracles.hpp"

using namespace fhks;

TEST_CASE("kinetic function examples") {
    const DomainSpec d = oracle::line(4);
    const KineticField f = kinetic_f(GridField(d, 0.5), {0.25, 0.75});
    for (std::size_t c = 0; c < 4; ++c) {
        CHECK(f.at(c, 0) == 1);
        CHECK(f.at(c, 1) == 0);
    }
    const KineticField tie = kinetic_f(GridField(d, 0.5), {0.5});
    CHECK(tie.at(0, 0) == 0);
    CHECK_THROWS_AS(kinetic_f(GridField(d, 0.5), {0.7, 0.2}), ValidationError);
}

TEST_CASE("kinetic function is monotone with the boundary values") {
    std::mt19937_64 rng(80);
    const DomainSpec d = oracle::rect(9, 7);
    const GridField u = oracle::random_field(d, rng);
    std::vector<double> k{-0.5, -1e-12};
    for (double x : uniform_levels(40)) k.push_back(x);
    k.push_back(1.0 + 1e-12);
    k.push_back(1.5);
    const KineticField f = kinetic_f(u, k);
    for (std::size_t c = 0; c < f.cells; ++c) {
        for (std::size_t j = 0; j + 1 < k.size(); ++j) CHECK(f.at(c, j) >= f.at(c, j + 1));
        CHECK(f.at(c, 0) == 1);
        CHECK(f.at(c, 1) == 1);
        CHECK(f.at(c, k.size() - 1) == 0);
        CHECK(f.at(c, k.size() - 2) == 0);
        for (std::size_t j = 0; j < k.size(); ++j) CHECK(f.at(c, j) == (u[c] - k[j] > 0.0 ? 1 : 0));
    }
}

TEST_CASE("uniform levels") {
    const auto k = uniform_levels(4);
    REQUIRE(k.size() == 5);
    CHECK(k.front() == 0.0);
    CHECK(k.back() == 1.0);
    CHECK(k[2] == 0.5);
}

TEST_CASE("layer cake and rho identities") {
    const DomainSpec d = oracle::line(16);
    CHECK(rho_identity_residual(GridField(d, 0.0), uniform_levels(64)) == 0.0);
    // u = 1: exact on levels inside (0, 1); the trapezoid over the jump at k = 1
    // costs half a level spacing.
    std::vector<double> open_levels = uniform_levels(64);
    open_levels.pop_back();
    CHECK(rho_identity_residual(GridField(d, 1.0), open_levels) <= 1e-15);
    CHECK(rho_identity_residual(GridField(d, 1.0), uniform_levels(64)) <= 0.5 / 64 + 1e-15);
    std::mt19937_64 rng(81);
    const DomainSpec big = oracle::line(2000);
    double previous_rho = 0.0;
    double previous_layer = 0.0;
    for (int levels : {64, 128, 256, 512}) {
        const GridField u = oracle::random_field(big, rng);
        const double layer = layer_cake_residual(u, uniform_levels(levels));
        const double rho = rho_identity_residual(u, uniform_levels(levels));
        CHECK(layer <= 1.0 / levels);
        CHECK(rho <= 1.0 / levels);
        if (previous_rho > 0.0) {
            CHECK(previous_rho / rho >= 1.5);
            CHECK(previous_rho / rho <= 2.5);
            CHECK(previous_layer / layer >= 1.5);
            CHECK(previous_layer / layer <= 2.5);
        }
        previous_rho = rho;
        previous_layer = layer;
    }
}

TEST_CASE("defect of a constant state is zero") {
    DomainSpec d;
    d.cells = {64};
    SimConfig base;
    base.t_end = 0.2;
    const DefectSeries series = defect_sweep(GridField(d, 0.4), base, {1e-1, 1e-2, 1e-3});
    REQUIRE(series.F_integral.size() == 3);
    for (double F : series.F_integral) CHECK(F == 0.0);
    CHECK(series.monotone);
}

TEST_CASE("a one-cell one-step window has no defect") {
    DomainSpec d;
    d.cells = {64};
    SimConfig base;
    base.t_end = 0.2;
    const GridField u0 = make_initial_data(Preset{PresetKind::riemann_step}, d);
    const DefectSeries series = defect_sweep(u0, base, {1e-2}, DefectWindow{1, 1});
    REQUIRE(series.F_integral.size() == 1);
    CHECK(series.F_integral[0] == 0.0);
    const DefectSeries coarse = defect_sweep(u0, base, {1e-1, 1e-2}, DefectWindow{4, 4});
    for (double F : coarse.F_integral) CHECK(F >= 0.0);
}

TEST_CASE("defect sweep validates its epsilons") {
    DomainSpec d;
    d.cells = {16};
    const GridField u0(d, 0.5);
    CHECK_THROWS_AS(defect_sweep(u0, SimConfig{}, {1e-2, 1e-1}), ValidationError);
    CHECK_THROWS_AS(defect_sweep(u0, SimConfig{}, {1e-2, 1e-2}), ValidationError);
    CHECK_THROWS_AS(defect_sweep(u0, SimConfig{}, {}), ValidationError);
}

TEST_CASE("defect sweep is independent of the worker count") {
    DomainSpec d;
    d.cells = {64};
    SimConfig base;
    base.t_end = 0.2;
    const GridField u0 = make_initial_data(Preset{PresetKind::riemann_step}, d);
    const DefectSeries one = defect_sweep(u0, base, {1e-1, 3e-2, 1e-2}, {}, 1);
    const DefectSeries four = defect_sweep(u0, base, {1e-1, 3e-2, 1e-2}, {}, 4);
    CHECK(one.F_integral == four.F_integral);
}
