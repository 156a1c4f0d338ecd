#include "fhks/fractional.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "fhks/errors.hpp"

namespace fhks {

namespace {

constexpr std::size_t dense_cell_cap = 4096;

double checked_pow(double base, double exponent) {
    // 0^p := 0 for p > 0; the zero mode is handled by the caller otherwise.
    return base == 0.0 ? 0.0 : std::pow(base, exponent);
}

}  // namespace

void FracParams::validate() const {
    if (!(s > 0.0 && s < 1.0)) {
        std::ostringstream os;
        os << "s must lie in the open interval (0, 1), got " << s;
        throw ValidationError(os.str());
    }
    if (!(sigma >= 0.0 && sigma <= 1.0)) {
        std::ostringstream os;
        os << "sigma must lie in [0, 1], got " << sigma;
        throw ValidationError(os.str());
    }
}

const char* to_string(MultiplierKind kind) {
    switch (kind) {
        case MultiplierKind::power_s: return "power_s";
        case MultiplierKind::ks: return "ks";
        case MultiplierKind::hs: return "hs";
        case MultiplierKind::resolvent: return "resolvent";
        case MultiplierKind::composite_L: return "composite_L";
        case MultiplierKind::restricted_inverse: return "restricted_inverse";
        case MultiplierKind::heat: return "heat";
        case MultiplierKind::chemo_resolvent: return "chemo_resolvent";
    }
    return "unknown";
}

SpectralMultiplier make_multiplier(MultiplierKind kind, const EigenBasis& basis,
                                   const FracParams& params, const MultiplierArgs& args) {
    params.validate();
    if (kind == MultiplierKind::heat) {
        if (!(args.time >= 0.0) || !std::isfinite(args.time)) {
            throw ValidationError("heat multiplier needs time >= 0");
        }
        if (!(args.epsilon > 0.0)) throw ValidationError("heat multiplier needs epsilon > 0");
    }
    if (kind == MultiplierKind::resolvent && !(args.resolvent_scale > 0.0)) {
        throw ValidationError("resolvent multiplier needs lambda > 0");
    }

    const double s = params.s;
    const double sigma = params.sigma;
    const auto lambda = basis.eigenvalues();
    SpectralMultiplier m{kind, std::vector<double>(lambda.size(), 0.0), params, args,
                         kind == MultiplierKind::restricted_inverse};
    for (std::size_t k = 0; k < lambda.size(); ++k) {
        const double l = lambda[k];
        const bool zero_mode = k == 0;
        double v = 0.0;
        switch (kind) {
            case MultiplierKind::power_s:
                v = checked_pow(l, s);
                break;
            case MultiplierKind::ks:
            case MultiplierKind::restricted_inverse:
                v = zero_mode ? 0.0 : std::pow(l, -s);
                break;
            case MultiplierKind::hs:
                v = zero_mode ? 0.0 : std::pow(l, -0.5 * s);
                break;
            case MultiplierKind::resolvent:
                v = 1.0 / (1.0 + args.resolvent_scale * checked_pow(l, s));
                break;
            case MultiplierKind::composite_L:
                // (l + sigma)^-s / ((l + sigma)^(1-s) + 1 - sigma); 1 / (l + l^s) at sigma = 0.
                if (!zero_mode) {
                    if (sigma == 0.0) {
                        v = 1.0 / (l + std::pow(l, s));
                    } else {
                        const double shifted = l + sigma;
                        v = std::pow(shifted, -s) / (std::pow(shifted, 1.0 - s) + 1.0 - sigma);
                    }
                }
                break;
            case MultiplierKind::heat:
                v = std::exp(-args.time * args.epsilon * l);
                break;
            case MultiplierKind::chemo_resolvent:
                v = 1.0 / (checked_pow(l + sigma, 1.0 - s) + 1.0 - sigma);
                break;
        }
        m.factors[k] = v;
    }
    return m;
}

SpectralField apply(const SpectralMultiplier& m, const SpectralField& f) {
    if (m.factors.size() != f.size()) {
        throw std::invalid_argument("apply: multiplier and field have different mode counts");
    }
    if (m.mean_zero_only && std::abs(f[0]) > 1e-10) {
        std::ostringstream os;
        os << to_string(m.kind) << " requires a mean-zero field; mode-0 coefficient is " << f[0];
        throw ValidationError(os.str());
    }
    std::vector<double> out(f.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = m.factors[k] * f[k];
    return SpectralField(f.basis_ptr(), std::move(out));
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
    if (x.size() != n) throw std::invalid_argument("DenseMatrix::multiply: size mismatch");
    std::vector<double> y(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < n; ++c) acc += data[r * n + c] * x[c];
        y[r] = acc;
    }
    return y;
}

DenseMatrix neumann_stencil_matrix(const DomainSpec& domain) {
    domain.validate();
    const std::size_t total = domain.total_cells();
    if (total > dense_cell_cap) {
        throw ValidationError("dense Neumann matrix limited to 4096 cells, got " +
                              std::to_string(total));
    }
    DenseMatrix a{total, std::vector<double>(total * total, 0.0)};
    const std::size_t n0 = std::size_t(domain.cells[0]);
    const std::size_t n1 = domain.dimension == 2 ? std::size_t(domain.cells[1]) : 1;
    auto add_axis = [&](int axis, std::size_t i0, std::size_t i1) {
        const std::size_t n = axis == 0 ? n0 : n1;
        const std::size_t i = axis == 0 ? i0 : i1;
        const double w = 1.0 / (domain.cell_width(axis) * domain.cell_width(axis));
        const std::size_t row = i0 * n1 + i1;
        // Reflecting ghost cells: a boundary cell only couples inward.
        if (i > 0) {
            const std::size_t col = axis == 0 ? (i0 - 1) * n1 + i1 : i0 * n1 + i1 - 1;
            a.data[row * total + col] -= w;
            a.data[row * total + row] += w;
        }
        if (i + 1 < n) {
            const std::size_t col = axis == 0 ? (i0 + 1) * n1 + i1 : i0 * n1 + i1 + 1;
            a.data[row * total + col] -= w;
            a.data[row * total + row] += w;
        }
    };
    for (std::size_t i0 = 0; i0 < n0; ++i0) {
        for (std::size_t i1 = 0; i1 < n1; ++i1) {
            add_axis(0, i0, i1);
            if (domain.dimension == 2) add_axis(1, i0, i1);
        }
    }
    return a;
}

DenseMatrix dense_oracle_power(const DomainSpec& domain, double s) {
    if (!(s > 0.0 && s <= 1.0)) {
        throw ValidationError("dense_oracle_power needs s in (0, 1]");
    }
    if (domain.symbol_mode != SymbolMode::discrete) {
        throw ValidationError("dense_oracle_power is defined for the discrete symbol mode");
    }
    const DenseMatrix stencil = neumann_stencil_matrix(domain);
    const auto n = Eigen::Index(stencil.n);
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) a(r, c) = stencil(std::size_t(r), std::size_t(c));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("dense_oracle_power: eigendecomposition failed");
    }
    Eigen::VectorXd values = solver.eigenvalues();
    const double scale = values.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
        // The kernel (constants) is exact in exact arithmetic; 0^s := 0.
        values(i) = values(i) <= 1e-12 * scale ? 0.0 : std::pow(values(i), s);
    }
    const Eigen::MatrixXd& v = solver.eigenvectors();
    const Eigen::MatrixXd p = v * values.asDiagonal() * v.transpose();

    DenseMatrix out{stencil.n, std::vector<double>(stencil.n * stencil.n)};
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) out.data[std::size_t(r * n + c)] = p(r, c);
    return out;
}

GridField semigroup_fractional_oracle(const GridField& f, double s,
                                      const SemigroupQuadrature& quadrature) {
    if (!(s > 0.0 && s < 1.0)) throw ValidationError("semigroup oracle needs s in (0, 1)");
    const auto basis = build_basis(f.domain());
    const double t_min =
        quadrature.t_min > 0.0 ? quadrature.t_min : 1e-8 / basis->largest_eigenvalue();
    const double t_max =
        quadrature.t_max > 0.0 ? quadrature.t_max : 50.0 / basis->first_positive_eigenvalue();
    if (quadrature.nodes < 3 || !(t_max > t_min) || !std::isfinite(t_max)) {
        std::ostringstream os;
        os << "semigroup oracle: divergent quadrature (t_min " << t_min << ", t_max " << t_max
           << ", nodes " << quadrature.nodes << ")";
        throw NumericalFailure(os.str());
    }

    const SpectralField fs = to_spectral(f, basis);
    const auto lambda = basis->eigenvalues();
    const std::size_t modes = fs.size();

    // F(tau) = (e^{t Delta} f - f) t^{-s} with t = e^tau; trapezoid in tau.
    const double a = std::log(t_min);
    const double b = std::log(t_max);
    const double dtau = (b - a) / (quadrature.nodes - 1);
    std::vector<double> acc(modes, 0.0);
    for (int j = 0; j < quadrature.nodes; ++j) {
        const double t = std::exp(a + j * dtau);
        const double w = (j == 0 || j == quadrature.nodes - 1) ? 0.5 * dtau : dtau;
        const auto heat = make_multiplier(MultiplierKind::heat, *basis, FracParams{s, 0.0},
                                          MultiplierArgs{1.0, t, 1.0});
        const SpectralField evolved = apply(heat, fs);
        const double weight = w * std::pow(t, -s);
        for (std::size_t k = 0; k < modes; ++k) acc[k] += weight * (evolved[k] - fs[k]);
    }

    // Euler-Maclaurin endpoint term -dtau^2/12 (F'(b) - F'(a)), with
    // dF/dtau = -t^{1-s} (-Delta) e^{t Delta} f - s (e^{t Delta} f - f) t^{-s}.
    auto derivative = [&](double t, std::size_t k) {
        const double e = std::exp(-t * lambda[k]);
        return -std::pow(t, 1.0 - s) * lambda[k] * e * fs[k] - s * (e - 1.0) * fs[k] * std::pow(t, -s);
    };
    for (std::size_t k = 0; k < modes; ++k) {
        acc[k] -= dtau * dtau / 12.0 * (derivative(t_max, k) - derivative(t_min, k));
        // Below t_min: e^{t Delta} f - f = t Delta f + O(t^2).
        acc[k] += -lambda[k] * fs[k] * std::pow(t_min, 1.0 - s) / (1.0 - s);
        // Above t_max: e^{t Delta} f has relaxed to the mean.
        if (k != 0) acc[k] += -fs[k] * std::pow(t_max, -s) / s;
    }

    const double inv_gamma = 1.0 / std::tgamma(-s);
    for (double& v : acc) v *= inv_gamma;
    return to_grid(SpectralField(basis, std::move(acc)));
}

}  // namespace fhks
