#include "fhks/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fhks/diagnostics.hpp"
#include "fhks/errors.hpp"

namespace fhks {

namespace {

constexpr double bound_slack = 1e-6;
constexpr int max_halvings = 40;
constexpr int picard_subintervals = 64;
constexpr int picard_max_iterations = 100;
constexpr double picard_tolerance = 1e-10;

double linf_distance(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

bool within_bounds(const GridField& u) {
    return u.min() >= -bound_slack && u.max() <= 1.0 + bound_slack;
}

GridField apply_heat(const GridField& u, const std::shared_ptr<const EigenBasis>& basis,
                     const SimConfig& config, double t) {
    const auto heat = make_multiplier(MultiplierKind::heat, *basis, config.frac,
                                      MultiplierArgs{1.0, t, config.epsilon});
    return to_grid(apply(heat, to_spectral(u, basis)));
}

std::string state_dump(const SimState& s, double dt) {
    std::ostringstream os;
    os.precision(17);
    os << "t=" << s.t << " dt=" << dt << " u_min=" << s.u.min() << " u_max=" << s.u.max()
       << " c_min=" << s.chemo.c.min() << " c_max=" << s.chemo.c.max();
    return os.str();
}

}  // namespace

void SimConfig::validate() const {
    frac.validate();
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw ValidationError("epsilon must be > 0");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end must be > 0");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ValidationError("cfl must lie in (0, 1]");
    for (std::size_t i = 0; i < diag_levels.size(); ++i) {
        const double k = diag_levels[i];
        if (!(k >= 0.0 && k <= 1.0)) throw ValidationError("diag_levels must lie in [0, 1]");
        if (i > 0 && !(diag_levels[i - 1] < k)) {
            throw ValidationError("diag_levels must be strictly increasing");
        }
    }
}

double numerical_flux(double u_left, double u_right, double v_face, FluxScheme scheme) {
    if (v_face == 0.0) return 0.0;
    if (scheme == FluxScheme::lax_friedrichs) {
        // max |v g'| on [0, 1] is |v|.
        return 0.5 * v_face * (logistic_flux(u_left) + logistic_flux(u_right)) -
               0.5 * std::abs(v_face) * (u_right - u_left);
    }
    const double lo = std::min(u_left, u_right);
    const double hi = std::max(u_left, u_right);
    const double f_left = v_face * logistic_flux(u_left);
    const double f_right = v_face * logistic_flux(u_right);
    const bool vertex_inside = lo < 0.5 && 0.5 < hi;
    const double f_vertex = v_face * 0.25;
    if (u_left <= u_right) {
        double m = std::min(f_left, f_right);
        if (vertex_inside) m = std::min(m, f_vertex);
        return m;
    }
    double m = std::max(f_left, f_right);
    if (vertex_inside) m = std::max(m, f_vertex);
    return m;
}

ChemoSolution solve_for(const GridField& u, const SimConfig& config,
                        const std::shared_ptr<const EigenBasis>& basis) {
    if (config.coupling == Coupling::classical) return solve_reference_chemo(u, basis);
    return solve_chemo(u, config.frac, basis);
}

SimState make_state(const GridField& u, const SimConfig& config, double t) {
    auto basis = build_basis(u.domain());
    return SimState{t, u, solve_for(u, config, basis)};
}

double cfl_dt(const SimState& state, const SimConfig& config) {
    const auto& d = state.u.domain();
    const double remaining = config.t_end - state.t;
    double rate = 0.0;
    for (int a = 0; a < d.dimension; ++a) {
        rate += state.chemo.velocity.max_abs(a) / d.cell_width(a);
    }
    if (rate == 0.0) return remaining;
    return std::min(config.cfl / rate, remaining);
}

double godunov_state(double u_left, double u_right, double v_face) {
    const double lo = std::min(u_left, u_right);
    const double hi = std::max(u_left, u_right);
    if (v_face == 0.0) return u_left;
    // Minimise v g over [lo, hi] when u_left <= u_right, maximise otherwise.
    const bool minimise = (u_left <= u_right) == (v_face > 0.0);
    const bool vertex_inside = lo < 0.5 && 0.5 < hi;
    if (vertex_inside && !minimise) return 0.5;
    const double g_lo = logistic_flux(lo);
    const double g_hi = logistic_flux(hi);
    if (minimise) return g_lo <= g_hi ? lo : hi;
    return g_lo >= g_hi ? lo : hi;
}

FaceField map_interior_faces(const GridField& u, const FaceField& velocity,
                             const std::function<double(double, double, double)>& rule) {
    const auto& d = u.domain();
    FaceField out(d);
    if (d.dimension == 1) {
        const std::size_t n = std::size_t(d.cells[0]);
        auto v = velocity.component(0);
        auto o = out.component(0);
        for (std::size_t f = 1; f < n; ++f) o[f] = rule(u[f - 1], u[f], v[f]);
        return out;
    }
    const std::size_t n0 = std::size_t(d.cells[0]);
    const std::size_t n1 = std::size_t(d.cells[1]);
    {
        auto v = velocity.component(0);
        auto o = out.component(0);
        for (std::size_t f = 1; f < n0; ++f)
            for (std::size_t j = 0; j < n1; ++j)
                o[f * n1 + j] = rule(u[(f - 1) * n1 + j], u[f * n1 + j], v[f * n1 + j]);
    }
    {
        auto v = velocity.component(1);
        auto o = out.component(1);
        for (std::size_t i = 0; i < n0; ++i)
            for (std::size_t f = 1; f < n1; ++f)
                o[i * (n1 + 1) + f] = rule(u[i * n1 + f - 1], u[i * n1 + f], v[i * (n1 + 1) + f]);
    }
    return out;
}

FaceField numerical_face_flux(const GridField& u, const FaceField& velocity, FluxScheme scheme) {
    return map_interior_faces(u, velocity, [scheme](double a, double b, double v) {
        return numerical_flux(a, b, v, scheme);
    });
}

GridField discrete_divergence(const FaceField& flux) {
    const auto& d = flux.domain();
    GridField out(d);
    if (d.dimension == 1) {
        const std::size_t n = std::size_t(d.cells[0]);
        const double inv_h = 1.0 / d.cell_width(0);
        auto f = flux.component(0);
        for (std::size_t i = 0; i < n; ++i) out[i] = (f[i + 1] - f[i]) * inv_h;
        return out;
    }
    const std::size_t n0 = std::size_t(d.cells[0]);
    const std::size_t n1 = std::size_t(d.cells[1]);
    const double inv_h0 = 1.0 / d.cell_width(0);
    const double inv_h1 = 1.0 / d.cell_width(1);
    auto f0 = flux.component(0);
    auto f1 = flux.component(1);
    for (std::size_t i = 0; i < n0; ++i) {
        for (std::size_t j = 0; j < n1; ++j) {
            out[i * n1 + j] = (f0[(i + 1) * n1 + j] - f0[i * n1 + j]) * inv_h0 +
                              (f1[i * (n1 + 1) + j + 1] - f1[i * (n1 + 1) + j]) * inv_h1;
        }
    }
    return out;
}

GridField hyperbolic_update(const GridField& u, const FaceField& velocity, double dt,
                            FluxScheme scheme) {
    const GridField div = discrete_divergence(numerical_face_flux(u, velocity, scheme));
    GridField out = u;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= dt * div[i];
    return out;
}

SimState step(const SimState& state, const SimConfig& config, double dt_cap) {
    const auto& basis = state.chemo.c_spec.basis_ptr();
    double dt = std::min(cfl_dt(state, config), dt_cap);
    if (!(dt > 0.0)) throw ValidationError("step: no time left before t_end");
    for (int halving = 0; halving <= max_halvings; ++halving, dt *= 0.5) {
        GridField u = state.u;
        if (config.splitting == Splitting::lie) {
            u = hyperbolic_update(u, state.chemo.velocity, dt, config.flux);
            u = apply_heat(u, basis, config, dt);
        } else {
            u = apply_heat(u, basis, config, 0.5 * dt);
            const ChemoSolution mid = solve_for(u, config, basis);
            u = hyperbolic_update(u, mid.velocity, dt, config.flux);
            u = apply_heat(u, basis, config, 0.5 * dt);
        }
        if (!within_bounds(u)) continue;
        ChemoSolution chemo = solve_for(u, config, basis);
        return SimState{state.t + dt, std::move(u), std::move(chemo)};
    }
    throw NumericalFailure("step rejected after " + std::to_string(max_halvings) +
                           " halvings: " + state_dump(state, dt));
}

Trajectory run(const GridField& u0, const SimConfig& config,
               const std::vector<double>& output_times) {
    config.validate();
    std::vector<double> stops;
    for (double t : output_times) {
        if (t > 0.0 && t < config.t_end) stops.push_back(t);
    }
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
    stops.push_back(config.t_end);

    Trajectory traj;
    SimState state = make_state(u0, config);
    traj.snapshots.push_back(state);
    DiagnosticsRecord first = basic_diagnostics(state, config.epsilon, 0.0);
    first.entropy_residuals.assign(config.diag_levels.size(), 0.0);
    traj.diagnostics.push_back(first);

    for (double stop : stops) {
        while (state.t < stop) {
            SimState next = step(state, config, stop - state.t);
            // Land exactly on the stop time when the cap was the binding limit.
            if (std::abs(next.t - stop) <= 1e-14 * std::max(1.0, stop)) next.t = stop;
            const double dt = next.t - state.t;
            DiagnosticsRecord rec = basic_diagnostics(next, config.epsilon, dt);
            rec.entropy_residuals = level_entropy_production(state, next, dt, config.diag_levels);
            traj.diagnostics.push_back(std::move(rec));
            state = std::move(next);
            if (config.snapshot_every_step && state.t < stop) traj.snapshots.push_back(state);
        }
        traj.snapshots.push_back(state);
    }
    return traj;
}

Trajectory daper_run(const GridField& u0, const SimConfig& config,
                     const std::vector<double>& output_times) {
    SimConfig classical = config;
    classical.coupling = Coupling::classical;
    return run(u0, classical, output_times);
}

PicardResult duhamel_picard(const GridField& u0, const SimConfig& config, double t_horizon) {
    config.validate();
    if (!(t_horizon > 0.0) || !std::isfinite(t_horizon)) {
        throw ValidationError("duhamel_picard: t_horizon must be > 0");
    }
    const auto basis = build_basis(u0.domain());
    const SpectralField u0s = to_spectral(u0, basis);
    const std::size_t modes = u0s.size();
    const double width = t_horizon / picard_subintervals;

    // Per-mode propagators for a full and a half sub-interval, and the exact
    // integrals int_0^w e^{-(w - tau) eps lambda} dtau.
    std::vector<double> decay_full(modes), decay_half(modes), gain_full(modes), gain_half(modes);
    for (std::size_t k = 0; k < modes; ++k) {
        const double rate = config.epsilon * basis->eigenvalue(k);
        decay_full[k] = std::exp(-rate * width);
        decay_half[k] = std::exp(-rate * 0.5 * width);
        gain_full[k] = rate == 0.0 ? width : -std::expm1(-rate * width) / rate;
        gain_half[k] = rate == 0.0 ? 0.5 * width : -std::expm1(-rate * 0.5 * width) / rate;
    }

    // The iterate u~ at the sub-interval midpoints; start from u0 everywhere.
    std::vector<GridField> iterate(picard_subintervals, u0);
    PicardResult result{u0, {}, 0};
    int growth_streak = 0;
    for (int it = 1; it <= picard_max_iterations; ++it) {
        std::vector<GridField> next;
        next.reserve(picard_subintervals);
        std::vector<double> left(u0s.coeffs().begin(), u0s.coeffs().end());
        std::vector<double> mid(modes);
        for (int j = 0; j < picard_subintervals; ++j) {
            const GridField& w = iterate[j];
            const ChemoSolution chemo = solve_for(w, config, basis);
            const SpectralField r =
                weak_divergence(numerical_face_flux(w, chemo.velocity, config.flux), basis);
            for (std::size_t k = 0; k < modes; ++k) {
                mid[k] = decay_half[k] * left[k] + gain_half[k] * r[k];
                left[k] = decay_full[k] * left[k] + gain_full[k] * r[k];
            }
            next.push_back(to_grid(SpectralField(basis, mid)));
        }
        double diff = 0.0;
        for (int j = 0; j < picard_subintervals; ++j) {
            diff = std::max(diff, linf_distance(next[j].values(), iterate[j].values()));
        }
        result.u = to_grid(SpectralField(basis, left));
        result.iterate_diffs.push_back(diff);
        result.iterations = it;
        iterate = std::move(next);

        const auto& diffs = result.iterate_diffs;
        if (diffs.size() >= 2 && diffs.back() > diffs[diffs.size() - 2]) {
            ++growth_streak;
        } else {
            growth_streak = 0;
        }
        if (growth_streak >= 5) {
            std::ostringstream os;
            os << "duhamel_picard: iteration does not contract on horizon " << t_horizon
               << " (difference " << diff << " after " << it << " iterations)";
            throw NumericalFailure(os.str());
        }
        if (diff <= picard_tolerance) break;
    }
    return result;
}

}  // namespace fhks
