#pragma once

#include <memory>

#include "fhks/domain.hpp"
#include "fhks/fractional.hpp"

namespace fhks {

/// Which elliptic problem couples c to u.
///   fractional: (-Delta_N + sigma)^(1-s) c + (1 - sigma) c = u, velocity grad K_s c
///   classical:  -Delta_N S + S = u, velocity grad S (the s -> 0 reference)
enum class Coupling { fractional, classical };

struct ChemoSolution {
    GridField c;
    SpectralField c_spec;
    FaceField velocity;
    FracParams params;
    Coupling coupling = Coupling::fractional;
};

/// Exact spectral solve of the chemoattractant equation. The velocity comes
/// from the composite symbol applied to u directly.
ChemoSolution solve_chemo(const GridField& u, const FracParams& params,
                          const std::shared_ptr<const EigenBasis>& basis);
ChemoSolution solve_chemo(const GridField& u, const FracParams& params);

/// S = (I - Delta_N)^-1 u with velocity grad S.
ChemoSolution solve_reference_chemo(const GridField& u,
                                    const std::shared_ptr<const EigenBasis>& basis);

/// sigma^(1-s) + 1 - sigma with sigma^(1-s) := 0 at sigma = 0.
double mass_relation_factor(const FracParams& params);

/// |factor * int c - int u|.
double mass_relation_residual(const GridField& u, const ChemoSolution& sol);

/// ||grad L u||^2 - |Omega| ||u||_inf^2 / lambda_1, which is <= 0 when the
/// velocity bound holds.
double velocity_bound_check(const GridField& u, const ChemoSolution& sol);

}  // namespace fhks
