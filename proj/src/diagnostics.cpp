#include "fhks/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "fhks/errors.hpp"

namespace fhks {

namespace {

constexpr double pi = std::numbers::pi;

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double integral(const GridField& f) {
    double acc = 0.0;
    for (double v : f.values()) acc += v;
    return acc * f.domain().cell_volume();
}

// cos^2 bump of half-width w centred at c; C^1 with support [c - w, c + w].
double bump(double z, double c, double w) {
    const double r = (z - c) / w;
    if (std::abs(r) >= 1.0) return 0.0;
    const double cs = std::cos(0.5 * pi * r);
    return cs * cs;
}

// cos^2 bump derivative.
double bump_slope(double z, double c, double w) {
    const double r = (z - c) / w;
    if (std::abs(r) >= 1.0) return 0.0;
    return -0.5 * pi / w * std::sin(pi * r);
}

// The test family is separable: phi(t, x) = T_j(t) S_m(x).
struct TestLattice {
    std::vector<double> t_centers;
    double t_half = 0.0;
    // Per spatial bump: centre and half-width per axis.
    std::vector<std::array<double, 2>> x_centers;
    std::array<double, 2> x_half{};
};

TestLattice lattice(const TestFamily& family, double t_span, const DomainSpec& d) {
    if (family.time_centers < 2 || family.space_centers < 2) {
        throw ValidationError("test family needs at least 2 centres per direction");
    }
    TestLattice lat;
    const double dt_c = t_span / (family.time_centers - 1);
    for (int j = 0; j < family.time_centers; ++j) lat.t_centers.push_back(j * dt_c);
    lat.t_half = family.time_halfwidth * dt_c;
    const int per_axis = family.space_centers;
    const int spatial = d.dimension == 1 ? per_axis : per_axis * per_axis;
    for (int a = 0; a < d.dimension; ++a) {
        lat.x_half[a] = family.space_halfwidth * d.lengths[a] / (per_axis - 1);
    }
    for (int m = 0; m < spatial; ++m) {
        const int idx[2] = {m % per_axis, m / per_axis};
        std::array<double, 2> c{};
        for (int a = 0; a < d.dimension; ++a) c[a] = idx[a] * d.lengths[a] / (per_axis - 1);
        lat.x_centers.push_back(c);
    }
    return lat;
}

// S_m and its gradient at the cell midpoints.
struct SpatialProfile {
    std::vector<double> value;
    std::array<std::vector<double>, 2> slope;
};

SpatialProfile spatial_profile(const std::array<double, 2>& centre, const std::array<double, 2>& half,
                               const DomainSpec& d) {
    SpatialProfile p;
    const std::size_t n = d.total_cells();
    p.value.resize(n);
    for (int a = 0; a < d.dimension; ++a) p.slope[a].resize(n);
    const std::size_t n1 = d.dimension == 2 ? std::size_t(d.cells[1]) : 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double x0 = (double(i / n1) + 0.5) * d.cell_width(0);
        const double b0 = bump(x0, centre[0], half[0]);
        const double s0 = bump_slope(x0, centre[0], half[0]);
        if (d.dimension == 1) {
            p.value[i] = b0;
            p.slope[0][i] = s0;
            continue;
        }
        const double x1 = (double(i % n1) + 0.5) * d.cell_width(1);
        const double b1 = bump(x1, centre[1], half[1]);
        const double s1 = bump_slope(x1, centre[1], half[1]);
        p.value[i] = b0 * b1;
        p.slope[0][i] = s0 * b1;
        p.slope[1][i] = b0 * s1;
    }
    return p;
}

// Face velocity averaged to the cell midpoints, per axis.
std::array<std::vector<double>, 2> velocity_at_centers(const FaceField& v) {
    const auto& d = v.domain();
    std::array<std::vector<double>, 2> out;
    const std::size_t n = d.total_cells();
    const std::size_t n1 = d.dimension == 2 ? std::size_t(d.cells[1]) : 1;
    for (int a = 0; a < d.dimension; ++a) {
        out[a].resize(n);
        auto f = v.component(a);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t r = i / n1;
            const std::size_t c = i % n1;
            if (a == 0) {
                out[a][i] = 0.5 * (f[r * n1 + c] + f[(r + 1) * n1 + c]);
            } else {
                out[a][i] = 0.5 * (f[r * (n1 + 1) + c] + f[r * (n1 + 1) + c + 1]);
            }
        }
    }
    return out;
}

GridField apply_heat(const GridField& f, const std::shared_ptr<const EigenBasis>& basis,
                     double time, double epsilon, const FracParams& params) {
    if (time == 0.0 || epsilon == 0.0) return f;
    const auto heat = make_multiplier(MultiplierKind::heat, *basis, params,
                                      MultiplierArgs{1.0, time, epsilon});
    return to_grid(apply(heat, to_spectral(f, basis)));
}

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussLegendre& gauss_legendre_1024() {
    static const GaussLegendre rule = [] {
        constexpr int n = 1024;
        GaussLegendre r;
        r.nodes.resize(n);
        r.weights.resize(n);
        for (int i = 0; i < n / 2; ++i) {
            double x = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0;
                double p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            r.nodes[i] = -x;
            r.nodes[n - 1 - i] = x;
            r.weights[i] = w;
            r.weights[n - 1 - i] = w;
        }
        return r;
    }();
    return rule;
}

void require_convex(const Entropy& eta) {
    for (int i = 0; i <= 100; ++i) {
        const double u = i / 100.0;
        if (eta.dd_eta(u) < -1e-12) {
            throw ValidationError("entropy '" + eta.name + "' is not convex on [0, 1]");
        }
    }
}

}  // namespace

double l1_norm(const GridField& f) {
    double acc = 0.0;
    for (double v : f.values()) acc += std::abs(v);
    return acc * f.domain().cell_volume();
}

DiagnosticsRecord basic_diagnostics(const SimState& state, double epsilon, double dt) {
    DiagnosticsRecord r;
    r.t = state.t;
    r.dt = dt;
    r.mass = integral(state.u);
    r.u_min = state.u.min();
    r.u_max = state.u.max();
    r.c_min = state.chemo.c.min();
    r.c_max = state.chemo.c.max();
    if (dt > 0.0) {
        const FaceField grad = gradient(to_spectral(state.u, state.chemo.c_spec.basis_ptr()));
        r.viscous_energy_increment = epsilon * dt * inner_product(grad, grad);
    }
    return r;
}

std::vector<double> level_entropy_production(const SimState& pre, const SimState& post,
                                             double dt, const std::vector<double>& levels) {
    std::vector<double> out;
    out.reserve(levels.size());
    const double vol = pre.u.domain().cell_volume();
    for (double k : levels) {
        double before = 0.0;
        double after = 0.0;
        double source = 0.0;
        for (std::size_t i = 0; i < pre.u.size(); ++i) {
            before += std::abs(pre.u[i] - k);
            after += std::abs(post.u[i] - k);
            source += (pre.u[i] - pre.chemo.c[i]) * sgn(pre.u[i] - k);
        }
        out.push_back((after - before) * vol / dt - logistic_flux(k) * source * vol);
    }
    return out;
}

double kruzhkov_residual(const Trajectory& traj, double v, const SimConfig& config,
                         const TestFamily& family, KruzhkovForm form) {
    const auto& snaps = traj.snapshots;
    if (snaps.size() < 3) {
        throw ValidationError("kruzhkov_residual needs at least 3 snapshots, got " +
                              std::to_string(snaps.size()));
    }
    const auto& d = snaps.front().u.domain();
    const auto basis = snaps.front().chemo.c_spec.basis_ptr();
    const double t0 = snaps.front().t;
    const auto lat = lattice(family, snaps.back().t - t0, d);
    const double vol = d.cell_volume();
    const double gv = logistic_flux(v);
    const std::size_t n_snap = snaps.size();
    const std::size_t n_space = lat.x_centers.size();

    std::vector<SpatialProfile> profiles;
    profiles.reserve(n_space);
    for (const auto& c : lat.x_centers) profiles.push_back(spatial_profile(c, lat.x_half, d));

    auto entropy = [v](const GridField& u) {
        GridField e(u.domain());
        for (std::size_t i = 0; i < u.size(); ++i) e[i] = std::abs(u[i] - v);
        return e;
    };
    auto pair = [&](std::span<const double> a, const std::vector<double>& b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) acc += a[i] * b[i];
        return acc * vol;
    };

    double worst = std::numeric_limits<double>::infinity();
    if (form == KruzhkovForm::scheme_consistent) {
        // Crandall-Majda entropy flux F(a v v, b v v) - F(a ^ v, b ^ v).
        auto entropy_flux = [v, scheme = config.flux](double a, double b, double vel) {
            return numerical_flux(std::max(a, v), std::max(b, v), vel, scheme) -
                   numerical_flux(std::min(a, v), std::min(b, v), vel, scheme);
        };
        // production[n][m] = <H(eta^n + dt A^n) - eta^{n+1}, S_m> with
        // A = -div_h Q - sgn(u - v) g(v) div_h V.
        std::vector<std::vector<double>> production(n_snap - 1, std::vector<double>(n_space));
        GridField eta_now = entropy(snaps.front().u);
        for (std::size_t n = 0; n + 1 < n_snap; ++n) {
            const SimState& s = snaps[n];
            const double dt = snaps[n + 1].t - s.t;
            const GridField div_q =
                discrete_divergence(map_interior_faces(s.u, s.chemo.velocity, entropy_flux));
            const GridField div_v = discrete_divergence(s.chemo.velocity);
            GridField advanced = eta_now;
            for (std::size_t i = 0; i < advanced.size(); ++i) {
                advanced[i] += dt * (-div_q[i] - sgn(s.u[i] - v) * gv * div_v[i]);
            }
            advanced = apply_heat(advanced, basis, dt, config.epsilon, config.frac);
            GridField eta_next = entropy(snaps[n + 1].u);
            for (std::size_t i = 0; i < advanced.size(); ++i) advanced[i] -= eta_next[i];
            for (std::size_t m = 0; m < n_space; ++m) {
                production[n][m] = pair(advanced.values(), profiles[m].value);
            }
            eta_now = std::move(eta_next);
        }
        for (double tc : lat.t_centers) {
            for (std::size_t m = 0; m < n_space; ++m) {
                double total = 0.0;
                for (std::size_t n = 0; n + 1 < n_snap; ++n) {
                    total += bump(snaps[n].t - t0, tc, lat.t_half) * production[n][m];
                }
                worst = std::min(worst, total);
            }
        }
        return worst;
    }

    // Per snapshot n and spatial bump m: e = <|u - v|, S_m> and
    // f = <q V - eps sgn(u - v) grad u, grad S_m> + <(u - c) sgn(u - v) g(v), S_m>.
    std::vector<std::vector<double>> e(n_snap, std::vector<double>(n_space));
    std::vector<std::vector<double>> f(n_snap, std::vector<double>(n_space));
    for (std::size_t n = 0; n < n_snap; ++n) {
        const SimState& s = snaps[n];
        const GridField eta = entropy(s.u);
        const auto vel = velocity_at_centers(s.chemo.velocity);
        const auto grad_u = gradient_at_centers(to_spectral(s.u, basis));
        std::array<std::vector<double>, 2> flux;
        std::vector<double> zero(s.u.size());
        for (int a = 0; a < d.dimension; ++a) flux[a].resize(s.u.size());
        for (std::size_t i = 0; i < s.u.size(); ++i) {
            const double sg = sgn(s.u[i] - v);
            for (int a = 0; a < d.dimension; ++a) {
                flux[a][i] = sg * (logistic_flux(s.u[i]) - gv) * vel[a][i] -
                             config.epsilon * sg * grad_u[a][i];
            }
            zero[i] = (s.u[i] - s.chemo.c[i]) * sg * gv;
        }
        for (std::size_t m = 0; m < n_space; ++m) {
            e[n][m] = pair(eta.values(), profiles[m].value);
            double acc = pair(zero, profiles[m].value);
            for (int a = 0; a < d.dimension; ++a) acc += pair(flux[a], profiles[m].slope[a]);
            f[n][m] = acc;
        }
    }
    for (double tc : lat.t_centers) {
        std::vector<double> phi(n_snap);
        for (std::size_t n = 0; n < n_snap; ++n) phi[n] = bump(snaps[n].t - t0, tc, lat.t_half);
        for (std::size_t m = 0; m < n_space; ++m) {
            double total = e[0][m] * phi[0] - e[n_snap - 1][m] * phi[n_snap - 1];
            for (std::size_t n = 0; n + 1 < n_snap; ++n) {
                const double dt = snaps[n + 1].t - snaps[n].t;
                total += 0.5 * (e[n][m] + e[n + 1][m]) * (phi[n + 1] - phi[n]);
                total += 0.5 * dt * (phi[n] * f[n][m] + phi[n + 1] * f[n + 1][m]);
            }
            worst = std::min(worst, total);
        }
    }
    return worst;
}

Entropy Entropy::linear() {
    return Entropy{"linear", [](double u) { return u; }, [](double) { return 1.0; },
                   [](double) { return 0.0; }, [](double u) { return logistic_flux(u); }};
}

Entropy Entropy::quadratic() {
    return Entropy{"quadratic", [](double u) { return 0.5 * u * u; }, [](double u) { return u; },
                   [](double) { return 1.0; },
                   [](double u) { return 0.5 * u * u - 2.0 * u * u * u / 3.0; }};
}

Entropy Entropy::from_derivatives(std::string name, std::function<double(double)> eta,
                                  std::function<double(double)> d_eta,
                                  std::function<double(double)> dd_eta) {
    auto q = [d_eta](double u) {
        const auto& rule = gauss_legendre_1024();
        const double half = 0.5 * u;
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double w = half * (rule.nodes[i] + 1.0);
            acc += rule.weights[i] * d_eta(w) * (1.0 - 2.0 * w);
        }
        return half * acc;
    };
    return Entropy{std::move(name), std::move(eta), std::move(d_eta), std::move(dd_eta), q};
}

GridField entropy_balance_residual(const SimState& pre, const SimState& post, double dt,
                                   const SimConfig& config, const Entropy& eta) {
    require_convex(eta);
    if (config.splitting != Splitting::lie || config.flux != FluxScheme::godunov) {
        throw ValidationError("entropy_balance_residual expects Lie splitting with the Godunov flux");
    }
    if (!(dt > 0.0)) throw ValidationError("entropy_balance_residual needs dt > 0");
    const auto& basis = pre.chemo.c_spec.basis_ptr();
    const GridField& u0 = pre.u;
    const GridField star = hyperbolic_update(u0, pre.chemo.velocity, dt, config.flux);

    const FaceField q_faces = map_interior_faces(
        u0, pre.chemo.velocity,
        [&eta](double a, double b, double vel) { return vel * eta.q(godunov_state(a, b, vel)); });
    const GridField div_q = discrete_divergence(q_faces);

    GridField eta_star(u0.domain());
    for (std::size_t i = 0; i < eta_star.size(); ++i) eta_star[i] = eta.eta(star[i]);
    const GridField heat_eta = apply_heat(eta_star, basis, dt, config.epsilon, config.frac);

    // eta'' |grad u*|^2 at cells from the average of the squared neighbouring faces.
    const FaceField grad = gradient(to_spectral(star, basis));
    GridField grad_sq(u0.domain());
    const auto& d = u0.domain();
    if (d.dimension == 1) {
        auto g = grad.component(0);
        for (std::size_t i = 0; i < grad_sq.size(); ++i) {
            grad_sq[i] = 0.5 * (g[i] * g[i] + g[i + 1] * g[i + 1]);
        }
    } else {
        const auto n1 = std::size_t(d.cells[1]);
        auto g0 = grad.component(0);
        auto g1 = grad.component(1);
        for (std::size_t i = 0; i < grad_sq.size(); ++i) {
            const std::size_t r = i / n1;
            const std::size_t c = i % n1;
            const double a0 = g0[r * n1 + c];
            const double b0 = g0[(r + 1) * n1 + c];
            const double a1 = g1[r * (n1 + 1) + c];
            const double b1 = g1[r * (n1 + 1) + c + 1];
            grad_sq[i] = 0.5 * (a0 * a0 + b0 * b0) + 0.5 * (a1 * a1 + b1 * b1);
        }
    }

    GridField out(d);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double u = u0[i];
        const double c = pre.chemo.c[i];
        const double time_term = (eta.eta(post.u[i]) - eta.eta(u)) / dt;
        const double zero_order = (u - c) * (eta.q(u) - logistic_flux(u) * eta.d_eta(u));
        const double viscous = -(heat_eta[i] - eta_star[i]) / dt;
        const double dissipation = config.epsilon * eta.dd_eta(star[i]) * grad_sq[i];
        out[i] = time_term + div_q[i] + zero_order + viscous + dissipation;
    }
    return out;
}

}  // namespace fhks
