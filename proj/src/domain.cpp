#include "fhks/domain.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fhks/errors.hpp"

namespace fhks {

namespace {

constexpr double pi = std::numbers::pi;

// Logical 2D shape of a row-major array; 1D arrays are (n, 1).
struct Shape {
    std::size_t n0 = 1;
    std::size_t n1 = 1;
    std::size_t operator[](int a) const { return a == 0 ? n0 : n1; }
    std::size_t size() const { return n0 * n1; }
};

Shape cell_shape(const DomainSpec& d) {
    return d.dimension == 1 ? Shape{std::size_t(d.cells[0]), 1}
                            : Shape{std::size_t(d.cells[0]), std::size_t(d.cells[1])};
}

// out = M applied along `axis` of `in`. M is row-major with `rows` rows and
// in_shape[axis] columns.
std::vector<double> apply_along(int axis, std::span<const double> in, Shape in_shape,
                                std::span<const double> m, std::size_t rows, Shape& out_shape) {
    const std::size_t cols = in_shape[axis];
    out_shape = in_shape;
    if (axis == 0) {
        out_shape.n0 = rows;
    } else {
        out_shape.n1 = rows;
    }
    std::vector<double> out(out_shape.size(), 0.0);
    if (axis == 0) {
        const std::size_t n1 = in_shape.n1;
        for (std::size_t r = 0; r < rows; ++r) {
            double* dst = out.data() + r * n1;
            for (std::size_t c = 0; c < cols; ++c) {
                const double w = m[r * cols + c];
                if (w == 0.0) continue;
                const double* src = in.data() + c * n1;
                for (std::size_t j = 0; j < n1; ++j) dst[j] += w * src[j];
            }
        }
    } else {
        const std::size_t n0 = in_shape.n0;
        for (std::size_t i = 0; i < n0; ++i) {
            const double* src = in.data() + i * cols;
            double* dst = out.data() + i * rows;
            for (std::size_t r = 0; r < rows; ++r) {
                const double* row = m.data() + r * cols;
                double acc = 0.0;
                for (std::size_t c = 0; c < cols; ++c) acc += row[c] * src[c];
                dst[r] = acc;
            }
        }
    }
    return out;
}

std::vector<double> transpose(std::span<const double> m, std::size_t rows, std::size_t cols) {
    std::vector<double> t(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) t[c * rows + r] = m[r * cols + c];
    return t;
}

std::vector<double> scaled(std::span<const double> m, double factor) {
    std::vector<double> out(m.begin(), m.end());
    for (double& v : out) v *= factor;
    return out;
}

EigenBasis::AxisTables make_axis(int n, double length) {
    EigenBasis::AxisTables t;
    t.cells = n;
    t.length = length;
    const double h = length / n;
    t.amplitude.resize(n);
    t.continuum.resize(n);
    t.discrete.resize(n);
    t.cos_center.resize(std::size_t(n) * n);
    t.dsin_center.resize(std::size_t(n) * n);
    t.dsin_face.resize(std::size_t(n) * (n + 1));
    const long four_n = 4L * n;
    const long two_n = 2L * n;
    for (int k = 0; k < n; ++k) {
        const double a = k == 0 ? std::sqrt(1.0 / length) : std::sqrt(2.0 / length);
        const double wave = k * pi / length;
        t.amplitude[k] = a;
        t.continuum[k] = wave * wave;
        const double half = std::sin(k * pi / (2.0 * n));
        t.discrete[k] = 4.0 / (h * h) * half * half;
        for (int j = 0; j < n; ++j) {
            // Reduce the angle index exactly so equal angles give equal values.
            const long m = (long(k) * (2L * j + 1)) % four_n;
            const double angle = pi * double(m) / double(two_n);
            t.cos_center[std::size_t(k) * n + j] = a * std::cos(angle);
            t.dsin_center[std::size_t(k) * n + j] = -a * wave * std::sin(angle);
        }
        for (int f = 0; f <= n; ++f) {
            double v = 0.0;
            if (f != 0 && f != n) {
                const long m = (long(k) * f) % two_n;
                v = -a * wave * std::sin(pi * double(m) / double(n));
            }
            t.dsin_face[std::size_t(k) * (n + 1) + f] = v;
        }
    }
    const auto un = std::size_t(n);
    t.analysis = scaled(t.cos_center, h);
    t.synthesis = transpose(t.cos_center, un, un);
    t.face_synthesis = transpose(t.dsin_face, un, un + 1);
    t.center_derivative = transpose(t.dsin_center, un, un);
    t.face_analysis = scaled(t.dsin_face, h);
    return t;
}

void require_same_domain(const DomainSpec& a, const DomainSpec& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": domain mismatch");
}

}  // namespace

void DomainSpec::validate() const {
    if (dimension != 1 && dimension != 2) {
        throw ValidationError("domain.dimension must be 1 or 2, got " + std::to_string(dimension));
    }
    if (lengths.size() != std::size_t(dimension) || cells.size() != std::size_t(dimension)) {
        std::ostringstream os;
        os << "domain needs one length and one cell count per axis (dimension " << dimension
           << ", " << lengths.size() << " lengths, " << cells.size() << " cell counts)";
        throw ValidationError(os.str());
    }
    for (int a = 0; a < dimension; ++a) {
        if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a])) {
            throw ValidationError("domain.lengths must be positive and finite");
        }
        if (cells[a] < 2) {
            throw ValidationError("domain.cells must be >= 2 on every axis, got " +
                                  std::to_string(cells[a]));
        }
    }
}

std::size_t DomainSpec::total_cells() const {
    std::size_t n = 1;
    for (int a = 0; a < dimension; ++a) n *= std::size_t(cells[a]);
    return n;
}

double DomainSpec::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dimension; ++a) v *= cell_width(a);
    return v;
}

double DomainSpec::measure() const {
    double v = 1.0;
    for (int a = 0; a < dimension; ++a) v *= lengths[a];
    return v;
}

std::size_t DomainSpec::face_count(int axis) const {
    return total_cells() / std::size_t(cells[axis]) * std::size_t(cells[axis] + 1);
}

GridField::GridField(DomainSpec domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.size() != domain_.total_cells()) {
        throw std::invalid_argument("GridField: value count does not match the domain");
    }
}

GridField::GridField(const DomainSpec& domain, double fill)
    : domain_(domain), values_(domain.total_cells(), fill) {}

double GridField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridField::max() const { return *std::max_element(values_.begin(), values_.end()); }

FaceField::FaceField(const DomainSpec& domain) : domain_(domain) {
    for (int a = 0; a < domain.dimension; ++a) components_[a].assign(domain.face_count(a), 0.0);
}

double FaceField::max_abs(int axis) const {
    double m = 0.0;
    for (double v : components_[axis]) m = std::max(m, std::abs(v));
    return m;
}

SpectralField::SpectralField(std::shared_ptr<const EigenBasis> basis, std::vector<double> coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != basis_->mode_count()) {
        throw std::invalid_argument("SpectralField: coefficient count does not match the basis");
    }
}

SpectralField::SpectralField(std::shared_ptr<const EigenBasis> basis)
    : basis_(std::move(basis)), coeffs_(basis_->mode_count(), 0.0) {}

std::array<int, 2> EigenBasis::multi_index(std::size_t mode) const {
    if (domain_.dimension == 1) return {int(mode), 0};
    const auto n1 = std::size_t(domain_.cells[1]);
    return {int(mode / n1), int(mode % n1)};
}

double EigenBasis::norm_constant(std::size_t mode) const {
    const auto k = multi_index(mode);
    double a = axes_[0].amplitude[k[0]];
    if (domain_.dimension == 2) a *= axes_[1].amplitude[k[1]];
    return a;
}

double EigenBasis::eigenfunction_at_cell(std::size_t mode, std::size_t cell) const {
    const auto k = multi_index(mode);
    if (domain_.dimension == 1) {
        return axes_[0].cos_center[std::size_t(k[0]) * axes_[0].cells + cell];
    }
    const auto n1 = std::size_t(domain_.cells[1]);
    const std::size_t j0 = cell / n1;
    const std::size_t j1 = cell % n1;
    return axes_[0].cos_center[std::size_t(k[0]) * axes_[0].cells + j0] *
           axes_[1].cos_center[std::size_t(k[1]) * axes_[1].cells + j1];
}

std::shared_ptr<const EigenBasis> build_basis(const DomainSpec& domain) {
    domain.validate();
    std::shared_ptr<EigenBasis> basis(new EigenBasis());
    basis->domain_ = domain;
    for (int a = 0; a < domain.dimension; ++a) {
        basis->axes_[a] = make_axis(domain.cells[a], domain.lengths[a]);
    }
    const bool discrete = domain.symbol_mode == SymbolMode::discrete;
    const std::size_t modes = domain.total_cells();
    basis->eigenvalues_.resize(modes);
    basis->gradient_weights_.resize(modes);
    for (std::size_t m = 0; m < modes; ++m) {
        const auto k = basis->multi_index(m);
        double lambda = 0.0;
        double weight = 0.0;
        for (int a = 0; a < domain.dimension; ++a) {
            const auto& ax = basis->axes_[a];
            lambda += discrete ? ax.discrete[k[a]] : ax.continuum[k[a]];
            weight += ax.continuum[k[a]];
        }
        basis->eigenvalues_[m] = lambda;
        basis->gradient_weights_[m] = weight;
    }
    // The zero mode is exactly 0 by construction (sin 0 = 0).
    double first = std::numeric_limits<double>::infinity();
    double largest = 0.0;
    for (int a = 0; a < domain.dimension; ++a) {
        const auto& ax = basis->axes_[a];
        const auto& table = discrete ? ax.discrete : ax.continuum;
        first = std::min(first, table[1]);
        largest += table.back();
    }
    basis->lambda_first_ = first;
    basis->lambda_max_ = largest;
    return basis;
}

SpectralField to_spectral(const GridField& f, const std::shared_ptr<const EigenBasis>& basis) {
    require_same_domain(f.domain(), basis->domain(), "to_spectral");
    const auto& d = basis->domain();
    Shape shape = cell_shape(d);
    std::vector<double> data(f.values().begin(), f.values().end());
    for (int a = 0; a < d.dimension; ++a) {
        const auto& ax = basis->axis(a);
        Shape out;
        data = apply_along(a, data, shape, ax.analysis, std::size_t(ax.cells), out);
        shape = out;
    }
    return SpectralField(basis, std::move(data));
}

GridField to_grid(const SpectralField& field) {
    const auto& basis = field.basis();
    const auto& d = basis.domain();
    Shape shape = cell_shape(d);
    std::vector<double> data(field.coeffs().begin(), field.coeffs().end());
    for (int a = 0; a < d.dimension; ++a) {
        const auto& ax = basis.axis(a);
        Shape out;
        data = apply_along(a, data, shape, ax.synthesis, std::size_t(ax.cells), out);
        shape = out;
    }
    return GridField(d, std::move(data));
}

FaceField gradient(const SpectralField& field) {
    const auto& basis = field.basis();
    const auto& d = basis.domain();
    FaceField out(d);
    for (int g = 0; g < d.dimension; ++g) {
        Shape shape = cell_shape(d);
        std::vector<double> data(field.coeffs().begin(), field.coeffs().end());
        for (int a = 0; a < d.dimension; ++a) {
            const auto& ax = basis.axis(a);
            const auto n = std::size_t(ax.cells);
            Shape next;
            if (a == g) {
                data = apply_along(a, data, shape, ax.face_synthesis, n + 1, next);
            } else {
                data = apply_along(a, data, shape, ax.synthesis, n, next);
            }
            shape = next;
        }
        auto comp = out.component(g);
        std::copy(data.begin(), data.end(), comp.begin());
        // Boundary faces carry exactly zero normal component.
        const auto n = std::size_t(d.cells[g]);
        if (d.dimension == 1) {
            comp[0] = 0.0;
            comp[n] = 0.0;
        } else if (g == 0) {
            const auto n1 = std::size_t(d.cells[1]);
            for (std::size_t j = 0; j < n1; ++j) {
                comp[j] = 0.0;
                comp[n * n1 + j] = 0.0;
            }
        } else {
            const auto n0 = std::size_t(d.cells[0]);
            for (std::size_t i = 0; i < n0; ++i) {
                comp[i * (n + 1)] = 0.0;
                comp[i * (n + 1) + n] = 0.0;
            }
        }
    }
    return out;
}

std::array<GridField, 2> gradient_at_centers(const SpectralField& field) {
    const auto& basis = field.basis();
    const auto& d = basis.domain();
    std::array<GridField, 2> out{GridField(d), GridField(d)};
    for (int g = 0; g < d.dimension; ++g) {
        Shape shape = cell_shape(d);
        std::vector<double> data(field.coeffs().begin(), field.coeffs().end());
        for (int a = 0; a < d.dimension; ++a) {
            const auto& ax = basis.axis(a);
            const auto n = std::size_t(ax.cells);
            Shape next;
            data = apply_along(a, data, shape, a == g ? ax.center_derivative : ax.synthesis, n,
                               next);
            shape = next;
        }
        out[g] = GridField(d, std::move(data));
    }
    return out;
}

SpectralField weak_divergence(const FaceField& w, const std::shared_ptr<const EigenBasis>& basis) {
    require_same_domain(w.domain(), basis->domain(), "weak_divergence");
    const auto& d = basis->domain();
    std::vector<double> total(basis->mode_count(), 0.0);
    for (int g = 0; g < d.dimension; ++g) {
        Shape shape = cell_shape(d);
        if (g == 0) {
            shape.n0 += 1;
        } else {
            shape.n1 += 1;
        }
        const auto comp = w.component(g);
        std::vector<double> data(comp.begin(), comp.end());
        for (int a = 0; a < d.dimension; ++a) {
            const auto& ax = basis->axis(a);
            const auto n = std::size_t(ax.cells);
            Shape next;
            data = apply_along(a, data, shape, a == g ? ax.face_analysis : ax.analysis, n, next);
            shape = next;
        }
        for (std::size_t k = 0; k < total.size(); ++k) total[k] += data[k];
    }
    return SpectralField(basis, std::move(total));
}

double inner_product(const GridField& f, const GridField& g) {
    require_same_domain(f.domain(), g.domain(), "inner_product");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * g[i];
    return acc * f.domain().cell_volume();
}

double inner_product(const FaceField& a, const FaceField& b) {
    require_same_domain(a.domain(), b.domain(), "inner_product");
    double acc = 0.0;
    for (int g = 0; g < a.dimension(); ++g) {
        const auto x = a.component(g);
        const auto y = b.component(g);
        for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    }
    return acc * a.domain().cell_volume();
}

SpectralField combine(double a, const SpectralField& f, double b, const SpectralField& g) {
    if (&f.basis() != &g.basis() && !(f.basis().domain() == g.basis().domain())) {
        throw std::invalid_argument("combine: basis mismatch");
    }
    std::vector<double> out(f.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a * f[k] + b * g[k];
    return SpectralField(f.basis_ptr(), std::move(out));
}

}  // namespace fhks
