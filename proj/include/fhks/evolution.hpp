#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "fhks/chemo.hpp"
#include "fhks/domain.hpp"
#include "fhks/fractional.hpp"

namespace fhks {

enum class Splitting { lie, strang };
enum class FluxScheme { godunov, lax_friedrichs };

struct SimConfig {
    FracParams frac;
    double epsilon = 1e-3;
    double t_end = 0.5;
    double cfl = 0.45;
    Splitting splitting = Splitting::lie;
    FluxScheme flux = FluxScheme::godunov;
    std::vector<double> diag_levels{0.25, 0.5, 0.75};
    Coupling coupling = Coupling::fractional;
    /// Store a snapshot after every accepted step, not only at output times.
    bool snapshot_every_step = false;

    void validate() const;
    bool operator==(const SimConfig&) const = default;
};

struct SimState {
    double t = 0.0;
    GridField u;
    ChemoSolution chemo;
};

struct DiagnosticsRecord {
    double t = 0.0;
    double dt = 0.0;
    double mass = 0.0;
    double u_min = 0.0;
    double u_max = 0.0;
    double c_min = 0.0;
    double c_max = 0.0;
    double viscous_energy_increment = 0.0;
    std::vector<double> entropy_residuals;
};

struct Trajectory {
    std::vector<SimState> snapshots;
    std::vector<DiagnosticsRecord> diagnostics;
};

/// g(u) = u (1 - u).
inline double logistic_flux(double u) { return u * (1.0 - u); }

/// Numerical flux for f(w) = v g(w) across one face.
double numerical_flux(double u_left, double u_right, double v_face,
                      FluxScheme scheme = FluxScheme::godunov);

/// Solve the elliptic problem selected by the config for `u`.
ChemoSolution solve_for(const GridField& u, const SimConfig& config,
                        const std::shared_ptr<const EigenBasis>& basis);

SimState make_state(const GridField& u, const SimConfig& config, double t = 0.0);

/// cfl / sum_axes(max|v_axis| / h_axis), limited to the remaining time.
double cfl_dt(const SimState& state, const SimConfig& config);

/// Godunov state w* with numerical_flux(u_left, u_right, v) = v g(w*).
double godunov_state(double u_left, double u_right, double v_face);

/// rule(u_left, u_right, v_face) on every interior face; boundary faces are 0.
FaceField map_interior_faces(const GridField& u, const FaceField& velocity,
                             const std::function<double(double, double, double)>& rule);

FaceField numerical_face_flux(const GridField& u, const FaceField& velocity, FluxScheme scheme);

/// Finite-volume divergence sum_axes (F_{i+1/2} - F_{i-1/2}) / h_axis.
GridField discrete_divergence(const FaceField& flux);

/// Explicit conservative update u - dt div_h F with zero boundary flux.
GridField hyperbolic_update(const GridField& u, const FaceField& velocity, double dt,
                            FluxScheme scheme);

/// One accepted step of length min(cfl_dt, dt_cap). Steps whose result
/// leaves [-1e-6, 1 + 1e-6] are retried with half the step; more than 40
/// halvings raise NumericalFailure.
SimState step(const SimState& state, const SimConfig& config,
              double dt_cap = std::numeric_limits<double>::infinity());

/// Integrates to config.t_end. Snapshots hold t = 0, every requested output
/// time in (0, t_end] and t_end; diagnostics hold one record at t = 0 and one
/// per accepted step.
Trajectory run(const GridField& u0, const SimConfig& config,
               const std::vector<double>& output_times = {});

/// run() with the classical elliptic coupling.
Trajectory daper_run(const GridField& u0, const SimConfig& config,
                     const std::vector<double>& output_times = {});

struct PicardResult {
    GridField u;
    std::vector<double> iterate_diffs;  // L-infinity change per iteration
    int iterations = 0;
};

/// Fixed point of the Duhamel map on [0, t_horizon]. The divergence is moved
/// onto the eigenfunctions (weak form), so each mode evolves as
///   u_k(t) = e^{-t eps lambda_k} u0_k + int_0^t e^{-(t-tau) eps lambda_k} r_k(tau) dtau
/// with r_k = <F(u~), grad phi_k>. r is held constant on 64 equal sub-intervals
/// (midpoint rule) and the heat kernel is integrated exactly on each.
PicardResult duhamel_picard(const GridField& u0, const SimConfig& config, double t_horizon);

}  // namespace fhks
