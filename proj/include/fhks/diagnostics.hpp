#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fhks/evolution.hpp"

namespace fhks {

/// Mass, bounds of u and c, and the viscous increment eps * dt * ||grad u||^2
/// (spectral gradient, face quadrature). `entropy_residuals` is left empty.
DiagnosticsRecord basic_diagnostics(const SimState& state, double epsilon, double dt);

/// Global Kruzhkov entropy production per level k over one step:
///   (int |u1 - k| - int |u0 - k|) / dt - g(k) int (u0 - c0) sgn(u0 - k).
/// The vanishing-viscosity limit makes this <= 0 up to discretisation error.
std::vector<double> level_entropy_production(const SimState& pre, const SimState& post,
                                             double dt, const std::vector<double>& levels);

/// Tensor cos^2 bumps centred on a coarse (t, x) lattice.
struct TestFamily {
    int time_centers = 6;
    int space_centers = 8;  // per axis
    /// Support half-widths as multiples of the lattice spacing.
    double time_halfwidth = 1.5;
    double space_halfwidth = 1.5;
};

enum class KruzhkovForm {
    /// Quadrature of the continuum functional: trapezoid in time over the
    /// snapshots (the phi_t term summed by parts against exact increments of
    /// phi), midpoint rule in space, analytic derivatives of phi, V and
    /// grad u at cell centres. Consistent to first order in (h, dt).
    quadrature,
    /// The same functional assembled from the scheme's own operators: left
    /// snapshot values, Crandall-Majda entropy flux of the numerical flux,
    /// zero-order term -sgn(u - v) g(v) div_h V, exact heat step for eps Delta.
    /// With one snapshot per accepted Lie step this reproduces the discrete
    /// entropy inequality, and the conservative cases (v outside (0, 1)) hold
    /// to roundoff.
    scheme_consistent,
};

/// Value of the weak Kruzhkov inequality for the level v with viscosity eps,
///   int int |u - v| phi_t + sgn(u - v)(g(u) - g(v)) V . grad phi
///           + (u - c) sgn(u - v) g(v) phi - eps sgn(u - v) grad u . grad phi  dx dt
///   + int |u(0) - v| phi(0) dx - int |u(T) - v| phi(T) dx   >= 0,
/// with V = grad K_s c, minimised over the test family. eps = config.epsilon.
/// Needs at least 3 snapshots.
double kruzhkov_residual(const Trajectory& traj, double v, const SimConfig& config,
                         const TestFamily& family = {},
                         KruzhkovForm form = KruzhkovForm::quadrature);

/// A convex entropy with its flux q, q' = eta' g', q(0) = 0.
struct Entropy {
    std::string name;
    std::function<double(double)> eta;
    std::function<double(double)> d_eta;
    std::function<double(double)> dd_eta;
    std::function<double(double)> q;

    static Entropy linear();     // eta = u, q = g
    static Entropy quadratic();  // eta = u^2 / 2, q = u^2 / 2 - 2 u^3 / 3
    /// q by 1024-point Gauss-Legendre quadrature of eta' g' from 0.
    static Entropy from_derivatives(std::string name, std::function<double(double)> eta,
                                    std::function<double(double)> d_eta,
                                    std::function<double(double)> dd_eta);
};

/// Cellwise residual of the entropy balance
///   d_t eta + div(q V) + (u - c)[q - g eta'](u) + eps(-Delta) eta + eps eta'' |grad u|^2
/// for one Lie step from `pre` to `post`: the transport term uses the
/// Godunov entropy flux of the hyperbolic sub-step, the diffusion term the
/// exact heat step applied to eta(u*). Rejects non-convex eta.
GridField entropy_balance_residual(const SimState& pre, const SimState& post, double dt,
                                   const SimConfig& config, const Entropy& eta);

/// Midpoint quadrature of |f|.
double l1_norm(const GridField& f);

}  // namespace fhks
