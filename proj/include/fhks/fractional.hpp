#pragma once

#include <vector>

#include "fhks/domain.hpp"

namespace fhks {

/// Fractional order and the operator-variant selector.
///   s     in the open interval (0, 1)
///   sigma in [0, 1]; 0 is the plain system, 1 the shifted-operator variant.
struct FracParams {
    double s = 0.4;
    double sigma = 0.0;

    void validate() const;
    bool operator==(const FracParams&) const = default;
};

enum class MultiplierKind {
    power_s,             // lambda^s, 0^s := 0
    ks,                  // lambda^-s, mode 0 zeroed
    hs,                  // lambda^-s/2, mode 0 zeroed (square root of ks)
    resolvent,           // 1 / (1 + t lambda^s)
    composite_L,         // symbol of grad K_s c as a function of u, mode 0 zeroed
    restricted_inverse,  // lambda^-s on mean-zero fields only
    heat,                // exp(-t eps lambda)
    chemo_resolvent,     // 1 / ((lambda + sigma)^(1-s) + 1 - sigma)
};

const char* to_string(MultiplierKind kind);

/// Kind-specific scalars. `resolvent_scale` is the lambda > 0 of the
/// resolvent (I + lambda A^s)^-1; `time` and `epsilon` parametrise the heat
/// multiplier.
struct MultiplierArgs {
    double resolvent_scale = 1.0;
    double time = 0.0;
    double epsilon = 1.0;
};

/// A diagonal operator in the eigenbasis.
struct SpectralMultiplier {
    MultiplierKind kind;
    std::vector<double> factors;
    FracParams params;
    MultiplierArgs args;
    /// True for restricted_inverse: apply() refuses fields with a mean.
    bool mean_zero_only = false;
};

SpectralMultiplier make_multiplier(MultiplierKind kind, const EigenBasis& basis,
                                   const FracParams& params, const MultiplierArgs& args = {});

/// Coefficientwise product. Throws ValidationError when a mean-zero-only
/// multiplier meets a field whose mode-0 coefficient exceeds 1e-10.
SpectralField apply(const SpectralMultiplier& m, const SpectralField& f);

/// Dense row-major n x n matrix.
struct DenseMatrix {
    std::size_t n = 0;
    std::vector<double> data;

    double operator()(std::size_t r, std::size_t c) const { return data[r * n + c]; }
    std::vector<double> multiply(std::span<const double> x) const;
};

/// The cell-centred Neumann second-difference matrix (positive semidefinite).
DenseMatrix neumann_stencil_matrix(const DomainSpec& domain);

/// Oracle for the spectral power: eigendecompose the Neumann stencil matrix,
/// raise the eigenvalues to `s` (0^s := 0) and recompose. Accepts s in (0, 1];
/// limited to at most 4096 cells.
DenseMatrix dense_oracle_power(const DomainSpec& domain, double s);

/// Quadrature settings for the semigroup representation of the power.
/// Non-positive t_min / t_max select the defaults 1e-8 / lambda_max and
/// 50 / lambda_1.
struct SemigroupQuadrature {
    double t_min = 0.0;
    double t_max = 0.0;
    int nodes = 400;
};

/// (1 / Gamma(-s)) * int_0^inf (e^{t Delta_N} f - f) t^{-1-s} dt, with the
/// substitution t = e^tau and the trapezoid rule in tau. The pieces of the
/// integral below t_min and above t_max are added in closed form from the
/// first-order short-time and the long-time (mean projection) behaviour of
/// the semigroup.
GridField semigroup_fractional_oracle(const GridField& f, double s,
                                      const SemigroupQuadrature& quadrature = {});

}  // namespace fhks
