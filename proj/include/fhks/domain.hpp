#pragma once

// Rectangle domains, the Neumann cosine eigenbasis and the exact transforms
// between cell-midpoint values and eigen-coefficients.
//
// Layout: cells and modes are stored row-major with axis 0 slowest. For a
// 2D domain with N0 x N1 cells the cell (i0, i1) lives at i0 * N1 + i1 and
// the mode (k0, k1) at k0 * N1 + k1, so the zero mode is always index 0.

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fhks {

enum class SymbolMode { continuum, discrete };

struct DomainSpec {
    int dimension = 1;
    std::vector<double> lengths{1.0};
    std::vector<int> cells{128};
    SymbolMode symbol_mode = SymbolMode::discrete;

    /// Throws ValidationError unless the spec describes a 1D or 2D rectangle
    /// with at least two cells per axis.
    void validate() const;

    std::size_t total_cells() const;
    double cell_width(int axis) const { return lengths[axis] / cells[axis]; }
    double cell_volume() const;
    double measure() const;  // |Omega|

    /// Number of faces normal to `axis` (N_axis + 1 per transverse line).
    std::size_t face_count(int axis) const;

    bool operator==(const DomainSpec&) const = default;
};

class EigenBasis;

/// Scalar values at cell midpoints.
class GridField {
public:
    GridField(DomainSpec domain, std::vector<double> values);
    explicit GridField(const DomainSpec& domain, double fill = 0.0);

    const DomainSpec& domain() const { return domain_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    double min() const;
    double max() const;

private:
    DomainSpec domain_;
    std::vector<double> values_;
};

/// One component per axis; component `a` lives on the faces normal to axis a
/// (axis a has N_a + 1 entries, transverse axes sit at cell midpoints).
class FaceField {
public:
    explicit FaceField(const DomainSpec& domain);

    const DomainSpec& domain() const { return domain_; }
    int dimension() const { return domain_.dimension; }
    std::span<const double> component(int axis) const { return components_[axis]; }
    std::span<double> component(int axis) { return components_[axis]; }

    /// Largest absolute entry of one component.
    double max_abs(int axis) const;

private:
    DomainSpec domain_;
    std::array<std::vector<double>, 2> components_;
};

/// Coefficients <f, phi_k> of a field in the cosine eigenbasis.
class SpectralField {
public:
    SpectralField(std::shared_ptr<const EigenBasis> basis, std::vector<double> coeffs);
    explicit SpectralField(std::shared_ptr<const EigenBasis> basis);

    const EigenBasis& basis() const { return *basis_; }
    const std::shared_ptr<const EigenBasis>& basis_ptr() const { return basis_; }
    std::span<const double> coeffs() const { return coeffs_; }
    std::span<double> coeffs() { return coeffs_; }
    std::size_t size() const { return coeffs_.size(); }
    double operator[](std::size_t k) const { return coeffs_[k]; }
    double& operator[](std::size_t k) { return coeffs_[k]; }

private:
    std::shared_ptr<const EigenBasis> basis_;
    std::vector<double> coeffs_;
};

/// Neumann eigenpairs of a rectangle with the cell-midpoint tables needed to
/// synthesise and analyse fields. Immutable after construction.
class EigenBasis {
public:
    const DomainSpec& domain() const { return domain_; }
    std::size_t mode_count() const { return eigenvalues_.size(); }

    /// Per-axis wave numbers of a flat mode index.
    std::array<int, 2> multi_index(std::size_t mode) const;

    /// lambda_k in the configured symbol mode.
    std::span<const double> eigenvalues() const { return eigenvalues_; }
    double eigenvalue(std::size_t mode) const { return eigenvalues_[mode]; }
    /// Smallest positive eigenvalue (lambda_1).
    double first_positive_eigenvalue() const { return lambda_first_; }
    double largest_eigenvalue() const { return lambda_max_; }

    /// Continuum |grad phi_k|^2 weight sum_i (k_i pi / L_i)^2, regardless of
    /// the symbol mode. The face quadrature of the spectral gradient is
    /// diagonal with these entries.
    double gradient_weight(std::size_t mode) const { return gradient_weights_[mode]; }

    /// Amplitude of the mode's eigenfunction (product of per-axis factors).
    double norm_constant(std::size_t mode) const;

    /// phi_k at the midpoint of flat cell index `cell`.
    double eigenfunction_at_cell(std::size_t mode, std::size_t cell) const;

    // Per-axis tables (row k, column j), already scaled by the axis amplitude.
    struct AxisTables {
        int cells = 0;
        double length = 0.0;
        std::vector<double> amplitude;       // a_k
        std::vector<double> continuum;       // (k pi / L)^2
        std::vector<double> discrete;        // (4 / h^2) sin^2(k pi / 2N)
        std::vector<double> cos_center;      // a_k cos(k pi x_j / L), N x N
        std::vector<double> dsin_face;       // d/dx phi_k at faces, N x (N+1)
        std::vector<double> dsin_center;     // d/dx phi_k at midpoints, N x N
        // Derived operators, row-major (rows = output length).
        std::vector<double> analysis;        // h * cos_center, N x N
        std::vector<double> synthesis;       // transpose(cos_center), N x N
        std::vector<double> face_synthesis;  // transpose(dsin_face), (N+1) x N
        std::vector<double> center_derivative;  // transpose(dsin_center), N x N
        std::vector<double> face_analysis;   // h * dsin_face, N x (N+1)
    };
    const AxisTables& axis(int a) const { return axes_[a]; }

private:
    friend std::shared_ptr<const EigenBasis> build_basis(const DomainSpec& domain);
    EigenBasis() = default;

    DomainSpec domain_;
    std::array<AxisTables, 2> axes_;
    std::vector<double> eigenvalues_;
    std::vector<double> gradient_weights_;
    double lambda_first_ = 0.0;
    double lambda_max_ = 0.0;
};

std::shared_ptr<const EigenBasis> build_basis(const DomainSpec& domain);

/// Midpoint-quadrature coefficients <f, phi_k> (an orthonormal DCT-II).
SpectralField to_spectral(const GridField& f, const std::shared_ptr<const EigenBasis>& basis);

/// Pointwise synthesis sum_k coeff_k phi_k at the cell midpoints.
GridField to_grid(const SpectralField& field);

/// Exact derivative of the truncated cosine series at the cell faces. The
/// normal component on boundary faces is stored as exactly 0.
FaceField gradient(const SpectralField& field);

/// Exact derivative of the truncated series at the cell midpoints.
std::array<GridField, 2> gradient_at_centers(const SpectralField& field);

/// Coefficients <w, grad phi_k> under face quadrature: the adjoint of
/// `gradient`. For a face field with zero normal boundary values this is the
/// spectral representation of -div w.
SpectralField weak_divergence(const FaceField& w, const std::shared_ptr<const EigenBasis>& basis);

/// Midpoint quadrature of the product fg.
double inner_product(const GridField& f, const GridField& g);

/// Face quadrature of sum_axis a_axis * b_axis.
double inner_product(const FaceField& a, const FaceField& b);

/// Linear combination helpers used by tests and the solvers.
SpectralField combine(double a, const SpectralField& f, double b, const SpectralField& g);

}  // namespace fhks
