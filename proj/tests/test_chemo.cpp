#include <doctest.h>

#include <cmath>
#include <random>

#include "fhks/chemo.hpp"
#include "oracles.hpp"

using namespace fhks;

namespace {

double integral(const GridField& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i];
    return acc * f.domain().cell_volume();
}

}  // namespace

TEST_CASE("constant u gives constant c and no velocity") {
    for (const DomainSpec& d : {oracle::line(16), oracle::rect(6, 5)}) {
        const auto sol = solve_chemo(GridField(d, 0.42), FracParams{0.4, 0.0});
        CHECK(sol.c.min() == doctest::Approx(0.42).epsilon(1e-13));
        CHECK(sol.c.max() == doctest::Approx(0.42).epsilon(1e-13));
        for (int a = 0; a < d.dimension; ++a) CHECK(sol.velocity.max_abs(a) <= 1e-14);
    }
}

TEST_CASE("first eigenfunction is scaled by the resolvent symbol") {
    const DomainSpec d = oracle::line(32);
    const auto basis = build_basis(d);
    const double s = 0.3;
    const GridField phi1 = oracle::cosine_mode(d, 1);
    const auto sol = solve_chemo(phi1, FracParams{s, 0.0}, basis);
    const double factor = 1.0 / (1.0 + std::pow(basis->eigenvalue(1), 1.0 - s));
    for (std::size_t i = 0; i < d.total_cells(); ++i) CHECK(std::abs(sol.c[i] - factor * phi1[i]) <= 1e-12);
}

TEST_CASE("sigma family coefficients and mean relations") {
    const DomainSpec d = oracle::rect(8, 6, 1.0, 2.0);
    const auto basis = build_basis(d);
    std::mt19937_64 rng(50);
    for (double s : {0.2, 0.5, 0.8}) {
        for (double sigma : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const FracParams p{s, sigma};
            const GridField u = oracle::random_field(d, rng);
            const auto sol = solve_chemo(u, p, basis);
            const SpectralField us = to_spectral(u, basis);
            for (std::size_t k = 0; k < us.size(); ++k) {
                const double l = basis->eigenvalue(k);
                const double expected = us[k] / (std::pow(l + sigma, 1.0 - s) + 1.0 - sigma);
                CHECK(std::abs(sol.c_spec[k] - expected) <= 1e-13);
            }
            const double factor = sigma == 0.0 ? 1.0 : std::pow(sigma, 1.0 - s) + 1.0 - sigma;
            CHECK(mass_relation_factor(p) == doctest::Approx(factor).epsilon(1e-15));
            CHECK(std::abs(factor * integral(sol.c) - integral(u)) <= 1e-12);
            CHECK(mass_relation_residual(u, sol) <= 1e-12);
        }
    }
}

TEST_CASE("sigma = 1 uses (1 + lambda)^(s - 1) and conserves the mean") {
    const DomainSpec d = oracle::line(20);
    const auto basis = build_basis(d);
    std::mt19937_64 rng(51);
    const GridField u = oracle::random_field(d, rng);
    const auto sol = solve_chemo(u, FracParams{0.4, 1.0}, basis);
    const SpectralField us = to_spectral(u, basis);
    for (std::size_t k = 0; k < us.size(); ++k) {
        CHECK(std::abs(sol.c_spec[k] - us[k] * std::pow(1.0 + basis->eigenvalue(k), -0.6)) <= 1e-13);
    }
    CHECK(std::abs(integral(sol.c) - integral(u)) <= 1e-12);
}

TEST_CASE("mass relation factor example") {
    const FracParams p{0.5, 0.5};
    CHECK(mass_relation_factor(p) == doctest::Approx(1.2071).epsilon(1e-4));
    CHECK(mass_relation_factor(FracParams{0.5, 0.0}) == 1.0);
    CHECK(mass_relation_factor(FracParams{0.5, 1.0}) == 1.0);
    std::mt19937_64 rng(52);
    const DomainSpec d = oracle::line(30);
    for (int trial = 0; trial < 20; ++trial) {
        const GridField u = oracle::random_field(d, rng);
        CHECK(mass_relation_residual(u, solve_chemo(u, p)) <= 1e-12);
    }
}

TEST_CASE("zero-mean u gives zero-mean c for every sigma") {
    const DomainSpec d = oracle::rect(7, 7);
    std::mt19937_64 rng(53);
    const GridField u = oracle::mean_zero(oracle::random_field(d, rng));
    for (double sigma : {0.0, 0.3, 1.0}) {
        CHECK(std::abs(integral(solve_chemo(u, FracParams{0.6, sigma}).c)) <= 1e-14);
    }
}

TEST_CASE("velocity bound examples") {
    const DomainSpec d = oracle::line(32, 1.0, SymbolMode::continuum);
    const auto basis = build_basis(d);
    const double s = 0.4;
    const auto constant = solve_chemo(GridField(d, 0.3), FracParams{s, 0.0}, basis);
    CHECK(velocity_bound_check(GridField(d, 0.3), constant) <= 0.0);

    const GridField phi1 = oracle::cosine_mode(d, 1);
    const auto sol = solve_chemo(phi1, FracParams{s, 0.0}, basis);
    const double l1 = basis->eigenvalue(1);
    const double lhs = l1 / std::pow(l1 + std::pow(l1, s), 2);
    const double sup = std::sqrt(2.0) * std::cos(oracle::pi / 64.0);
    const double rhs = d.measure() * sup * sup / l1;
    CHECK(inner_product(sol.velocity, sol.velocity) == doctest::Approx(lhs).epsilon(1e-12));
    CHECK(velocity_bound_check(phi1, sol) == doctest::Approx(lhs - rhs).epsilon(1e-12));
    CHECK(lhs <= rhs);

    std::mt19937_64 rng(54);
    for (const DomainSpec& dd : {oracle::line(64), oracle::rect(16, 12, 1.0, 2.0)}) {
        const auto b = build_basis(dd);
        for (int trial = 0; trial < 50; ++trial) {
            const GridField u = oracle::random_field(dd, rng);
            CHECK(velocity_bound_check(u, solve_chemo(u, FracParams{0.3, 0.0}, b)) <= 1e-10);
        }
    }
}

TEST_CASE("chemoattractant stays in [0, 1] for random u in [0, 1]") {
    std::mt19937_64 rng(55);
    const DomainSpec d1 = oracle::line(64);
    const DomainSpec d2 = oracle::rect(12, 10);
    const auto b1 = build_basis(d1);
    const auto b2 = build_basis(d2);
    int violations = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const bool two = trial % 2 == 1;
        const DomainSpec& d = two ? d2 : d1;
        const GridField u = oracle::random_field(d, rng);
        const FracParams p{0.05 + 0.9 * (trial % 7) / 6.0, (trial % 3) / 2.0};
        const auto sol = solve_chemo(u, p, two ? b2 : b1);
        if (sol.c.min() < -1e-8 || sol.c.max() > 1.0 + 1e-8) {
            ++violations;
            MESSAGE("c out of bounds for trial " << trial << ": [" << sol.c.min() << ", " << sol.c.max() << "]");
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("structural invariants of the solve") {
    const DomainSpec d = oracle::rect(9, 8, 1.0, 1.5);
    const auto basis = build_basis(d);
    std::mt19937_64 rng(56);
    const FracParams p{0.35, 0.0};
    const GridField u = oracle::random_field(d, rng);
    const GridField w = oracle::random_field(d, rng);
    const auto su = solve_chemo(u, p, basis);
    const auto sw = solve_chemo(w, p, basis);

    CHECK(oracle::max_abs_diff(to_grid(su.c_spec), su.c) <= 1e-12);
    const auto v0 = su.velocity.component(0);
    const auto v1 = su.velocity.component(1);
    for (int c = 0; c < 8; ++c) {
        CHECK(v0[c] == 0.0);
        CHECK(v0[9 * 8 + c] == 0.0);
    }
    for (int r = 0; r < 9; ++r) {
        CHECK(v1[r * 9] == 0.0);
        CHECK(v1[r * 9 + 8] == 0.0);
    }

    // The composite path equals grad K_s of the stored c.
    const FaceField direct = gradient(apply(make_multiplier(MultiplierKind::ks, *basis, p), su.c_spec));
    for (int a = 0; a < 2; ++a) {
        const auto x = direct.component(a);
        const auto y = su.velocity.component(a);
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - y[i]) <= 1e-12);
    }

    // (-Delta_N)^(1-s) c has zero mean.
    const auto power = make_multiplier(MultiplierKind::power_s, *basis, FracParams{1.0 - p.s, 0.0});
    CHECK(std::abs(apply(power, su.c_spec)[0]) <= 1e-12);

    GridField mix(d);
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 2.0 * u[i] - 3.0 * w[i];
    const auto sm = solve_chemo(mix, p, basis);
    for (std::size_t i = 0; i < mix.size(); ++i) CHECK(std::abs(sm.c[i] - (2.0 * su.c[i] - 3.0 * sw.c[i])) <= 1e-12);

    for (double l : basis->eigenvalues()) {
        CHECK(std::pow(l, 2.0 * (1.0 - p.s)) / std::pow(1.0 + std::pow(l, 1.0 - p.s), 2) <= 1.0);
    }
}

TEST_CASE("classical reference solve") {
    const DomainSpec d = oracle::line(24);
    const auto basis = build_basis(d);
    std::mt19937_64 rng(57);
    const GridField u = oracle::random_field(d, rng);
    const auto sol = solve_reference_chemo(u, basis);
    const SpectralField us = to_spectral(u, basis);
    for (std::size_t k = 0; k < us.size(); ++k) {
        CHECK(std::abs(sol.c_spec[k] - us[k] / (1.0 + basis->eigenvalue(k))) <= 1e-13);
    }
    CHECK(sol.coupling == Coupling::classical);
    CHECK(mass_relation_residual(u, sol) <= 1e-12);
    const FaceField grad_s = gradient(sol.c_spec);
    for (std::size_t i = 0; i < grad_s.component(0).size(); ++i) {
        CHECK(std::abs(grad_s.component(0)[i] - sol.velocity.component(0)[i]) <= 1e-12);
    }
}
