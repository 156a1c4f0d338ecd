#include "fhks/chemo.hpp"

#include <algorithm>
#include <cmath>

namespace fhks {

namespace {

double integral(const GridField& f) {
    double acc = 0.0;
    for (double v : f.values()) acc += v;
    return acc * f.domain().cell_volume();
}

}  // namespace

ChemoSolution solve_chemo(const GridField& u, const FracParams& params,
                          const std::shared_ptr<const EigenBasis>& basis) {
    const SpectralField us = to_spectral(u, basis);
    const auto resolvent = make_multiplier(MultiplierKind::chemo_resolvent, *basis, params);
    const auto composite = make_multiplier(MultiplierKind::composite_L, *basis, params);
    SpectralField cs = apply(resolvent, us);
    GridField c = to_grid(cs);
    FaceField v = gradient(apply(composite, us));
    return ChemoSolution{std::move(c), std::move(cs), std::move(v), params, Coupling::fractional};
}

ChemoSolution solve_chemo(const GridField& u, const FracParams& params) {
    return solve_chemo(u, params, build_basis(u.domain()));
}

ChemoSolution solve_reference_chemo(const GridField& u,
                                    const std::shared_ptr<const EigenBasis>& basis) {
    const SpectralField us = to_spectral(u, basis);
    std::vector<double> coeffs(us.size());
    const auto lambda = basis->eigenvalues();
    for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] = us[k] / (1.0 + lambda[k]);
    SpectralField ss(basis, std::move(coeffs));
    GridField s = to_grid(ss);
    FaceField v = gradient(ss);
    return ChemoSolution{std::move(s), std::move(ss), std::move(v), FracParams{}, Coupling::classical};
}

double mass_relation_factor(const FracParams& params) {
    const double lead = params.sigma == 0.0 ? 0.0 : std::pow(params.sigma, 1.0 - params.s);
    return lead + 1.0 - params.sigma;
}

double mass_relation_residual(const GridField& u, const ChemoSolution& sol) {
    const double factor =
        sol.coupling == Coupling::classical ? 1.0 : mass_relation_factor(sol.params);
    return std::abs(factor * integral(sol.c) - integral(u));
}

double velocity_bound_check(const GridField& u, const ChemoSolution& sol) {
    const double u_inf = std::max(std::abs(u.min()), std::abs(u.max()));
    const auto& d = u.domain();
    const double lambda1 = sol.c_spec.basis().first_positive_eigenvalue();
    return inner_product(sol.velocity, sol.velocity) - d.measure() * u_inf * u_inf / lambda1;
}

}  // namespace fhks
