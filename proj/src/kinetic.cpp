#include "fhks/kinetic.hpp"

#include <algorithm>
#include <cmath>

#include "fhks/errors.hpp"
#include "fhks/parallel.hpp"

namespace fhks {

namespace {

void require_sorted(const std::vector<double>& k_grid) {
    if (k_grid.empty()) throw ValidationError("k_grid must not be empty");
    if (!std::is_sorted(k_grid.begin(), k_grid.end())) {
        throw ValidationError("k_grid must be sorted");
    }
}

std::uint8_t indicator(double u, double k) { return u - k > 0.0 ? 1 : 0; }

// Trapezoid integral of the indicator over [k_j, k_last] for every j,
// accumulated from the top.
std::vector<double> upper_integrals(double u, const std::vector<double>& k) {
    std::vector<double> out(k.size(), 0.0);
    for (std::size_t j = k.size() - 1; j-- > 0;) {
        const double fa = indicator(u, k[j]);
        const double fb = indicator(u, k[j + 1]);
        out[j] = out[j + 1] + 0.5 * (fa + fb) * (k[j + 1] - k[j]);
    }
    return out;
}

}  // namespace

std::vector<double> uniform_levels(int n) {
    if (n < 1) throw ValidationError("uniform_levels needs n >= 1");
    std::vector<double> k(std::size_t(n) + 1);
    for (int j = 0; j <= n; ++j) k[std::size_t(j)] = double(j) / n;
    return k;
}

KineticField kinetic_f(const GridField& u, const std::vector<double>& k_grid) {
    require_sorted(k_grid);
    KineticField out{k_grid, std::vector<std::uint8_t>(u.size() * k_grid.size()), u.size()};
    for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::size_t j = 0; j < k_grid.size(); ++j) {
            out.f[i * k_grid.size() + j] = indicator(u[i], k_grid[j]);
        }
    }
    return out;
}

double layer_cake_residual(const GridField& u, const std::vector<double>& k_grid) {
    require_sorted(k_grid);
    double worst = 0.0;
    for (double ui : u.values()) {
        worst = std::max(worst, std::abs(upper_integrals(ui, k_grid).front() - ui));
    }
    return worst;
}

double rho_identity_residual(const GridField& u, const std::vector<double>& k_grid) {
    require_sorted(k_grid);
    const double k_last = k_grid.back();
    double worst = 0.0;
    for (double ui : u.values()) {
        const auto upper = upper_integrals(ui, k_grid);
        const double tail = indicator(ui, k_last) * (1.0 - k_last);
        for (std::size_t j = 0; j < k_grid.size(); ++j) {
            const double f = indicator(ui, k_grid[j]);
            const double rho = k_grid[j] * f + upper[j] + tail;
            worst = std::max(worst, std::abs(ui * f - rho));
        }
    }
    return worst;
}

double coarse_defect(const Trajectory& traj, const DefectWindow& window, int levels) {
    if (window.cells < 1 || window.steps < 1 || levels < 1) {
        throw ValidationError("defect window and level count must be >= 1");
    }
    const auto& snaps = traj.snapshots;
    if (snaps.size() < 2) return 0.0;
    const auto& d = snaps.front().u.domain();
    const std::size_t n0 = std::size_t(d.cells[0]);
    const std::size_t n1 = d.dimension == 2 ? std::size_t(d.cells[1]) : 1;
    const std::size_t w0 = std::size_t(window.cells);
    const std::size_t w1 = d.dimension == 2 ? std::size_t(window.cells) : 1;
    const double dk = 1.0 / levels;
    const double vol = d.cell_volume();

    // Boxes of box_steps consecutive post-step snapshots, weighted by the step lengths.
    double total = 0.0;
    for (std::size_t first = 1; first < snaps.size(); first += std::size_t(window.steps)) {
        const std::size_t last = std::min(snaps.size(), first + std::size_t(window.steps));
        double duration = 0.0;
        for (std::size_t n = first; n < last; ++n) duration += snaps[n].t - snaps[n - 1].t;
        if (duration <= 0.0) continue;
        for (std::size_t b0 = 0; b0 < n0; b0 += w0) {
            for (std::size_t b1 = 0; b1 < n1; b1 += w1) {
                const std::size_t e0 = std::min(n0, b0 + w0);
                const std::size_t e1 = std::min(n1, b1 + w1);
                const double box_cells = double((e0 - b0) * (e1 - b1));
                for (int j = 0; j < levels; ++j) {
                    const double k = (j + 0.5) * dk;
                    double mean = 0.0;
                    for (std::size_t n = first; n < last; ++n) {
                        const double w = snaps[n].t - snaps[n - 1].t;
                        const auto& u = snaps[n].u;
                        double count = 0.0;
                        for (std::size_t i0 = b0; i0 < e0; ++i0)
                            for (std::size_t i1 = b1; i1 < e1; ++i1)
                                count += indicator(u[i0 * n1 + i1], k);
                        mean += w * count;
                    }
                    mean /= duration * box_cells;
                    total += mean * (1.0 - mean) * box_cells * vol * duration * dk;
                }
            }
        }
    }
    return total;
}

DefectSeries defect_sweep(const GridField& u0, const SimConfig& base,
                          const std::vector<double>& epsilons, const DefectWindow& window,
                          int threads) {
    if (epsilons.empty()) throw ValidationError("defect_sweep needs at least one epsilon");
    for (std::size_t i = 1; i < epsilons.size(); ++i) {
        if (!(epsilons[i] < epsilons[i - 1])) {
            throw ValidationError("defect_sweep epsilons must be strictly decreasing");
        }
    }
    DefectSeries series{epsilons, std::vector<double>(epsilons.size(), 0.0), true};
    parallel_for(epsilons.size(), threads, [&](std::size_t i) {
        SimConfig config = base;
        config.epsilon = epsilons[i];
        config.snapshot_every_step = true;
        series.F_integral[i] = coarse_defect(run(u0, config), window);
    });
    for (std::size_t i = 1; i < series.F_integral.size(); ++i) {
        if (series.F_integral[i] > series.F_integral[i - 1]) series.monotone = false;
    }
    return series;
}

}  // namespace fhks
