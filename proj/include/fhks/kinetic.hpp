#pragma once

#include <cstdint>
#include <vector>

#include "fhks/domain.hpp"
#include "fhks/evolution.hpp"

namespace fhks {

/// f(x, k) = sgn+(u(x) - k) on a level grid, stored cell-major
/// (f[cell * levels + j]).
struct KineticField {
    std::vector<double> k_grid;
    std::vector<std::uint8_t> f;
    std::size_t cells = 0;

    std::uint8_t at(std::size_t cell, std::size_t level) const {
        return f[cell * k_grid.size() + level];
    }
};

/// j / n for j = 0..n.
std::vector<double> uniform_levels(int n);

/// sgn+(0) = 0, so k = u gives f = 0. Throws ValidationError on an unsorted grid.
KineticField kinetic_f(const GridField& u, const std::vector<double>& k_grid);

/// max over cells of |trapezoid int_{k_0}^{k_last} f dk - u|. For u in [0, 1]
/// and a grid spanning [0, 1] this is the layer-cake quadrature error.
double layer_cake_residual(const GridField& u, const std::vector<double>& k_grid);

/// max over cells and levels of |u f - (k f + int_k^1 f dv)|, the integral by
/// the trapezoid rule on the grid (plus f(k_last)(1 - k_last) beyond it).
double rho_identity_residual(const GridField& u, const std::vector<double>& k_grid);

struct DefectWindow {
    int cells = 4;  // per axis
    int steps = 4;
};

struct DefectSeries {
    std::vector<double> epsilons;
    std::vector<double> F_integral;
    /// False when some entry exceeds its predecessor (reported, not an error).
    bool monotone = true;
};

/// Coarse-grained defect of one trajectory (snapshots after every step):
/// f is averaged over boxes of window.cells cells per axis and
/// window.steps consecutive snapshots, then
///   sum_boxes sum_levels fbar (1 - fbar) * box volume * box duration * dk
/// with midpoint levels (j + 1/2) / levels.
double coarse_defect(const Trajectory& traj, const DefectWindow& window, int levels = 64);

/// Runs the solver for each epsilon (in parallel on `threads` workers) and
/// collects the coarse-grained defect. Epsilons must be strictly decreasing.
DefectSeries defect_sweep(const GridField& u0, const SimConfig& base,
                          const std::vector<double>& epsilons, const DefectWindow& window = {},
                          int threads = 1);

}  // namespace fhks
