#include "fhks/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>

#include "fhks/chemo.hpp"
#include "fhks/diagnostics.hpp"
#include "fhks/errors.hpp"
#include "fhks/parallel.hpp"

namespace fhks {

namespace {

constexpr char magic[4] = {'F', 'H', 'K', 'S'};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    for (int i = 0; i < 2; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}
void put_f64(std::vector<std::uint8_t>& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) out.push_back(std::uint8_t(bits >> (8 * i)));
}

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}
    std::uint64_t take(int n) {
        if (pos_ + std::size_t(n) > bytes_.size()) {
            throw ValidationError("snapshot truncated at byte " + std::to_string(pos_));
        }
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= std::uint64_t(bytes_[pos_ + std::size_t(i)]) << (8 * i);
        pos_ += std::size_t(n);
        return v;
    }
    double f64() {
        const std::uint64_t bits = take(8);
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

double l1_distance(const GridField& a, const GridField& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc * a.domain().cell_volume();
}

double total_mass(const GridField& u) {
    double acc = 0.0;
    for (double v : u.values()) acc += v;
    return acc * u.domain().cell_volume();
}

}  // namespace

GridField make_initial_data(const Preset& preset, const DomainSpec& domain) {
    domain.validate();
    GridField u(domain);
    const std::size_t n1 = domain.dimension == 2 ? std::size_t(domain.cells[1]) : 1;
    auto coord = [&](std::size_t cell, int axis) {
        const std::size_t idx = axis == 0 ? cell / n1 : cell % n1;
        return (double(idx) + 0.5) * domain.cell_width(axis);
    };
    auto gauss = [&](std::size_t cell, double c0, double width0, double c1_frac) {
        double r2 = 0.0;
        const double x0 = (coord(cell, 0) - c0) / width0;
        r2 += x0 * x0;
        if (domain.dimension == 2) {
            const double l1 = domain.lengths[1];
            const double x1 = (coord(cell, 1) - c1_frac * l1) / (width0 / domain.lengths[0] * l1);
            r2 += x1 * x1;
        }
        return std::exp(-r2);
    };
    const double l0 = domain.lengths[0];
    switch (preset.kind) {
        case PresetKind::constant:
            for (std::size_t i = 0; i < u.size(); ++i) u[i] = clip01(preset.value);
            break;
        case PresetKind::bump:
            for (std::size_t i = 0; i < u.size(); ++i) u[i] = clip01(0.9 * gauss(i, 0.5 * l0, l0 / 8, 0.5));
            break;
        case PresetKind::two_bumps:
            for (std::size_t i = 0; i < u.size(); ++i) {
                u[i] = clip01(0.9 * (gauss(i, 0.25 * l0, l0 / 12, 0.5) +
                                     gauss(i, 0.75 * l0, l0 / 12, 0.5)));
            }
            break;
        case PresetKind::riemann_step:
            for (std::size_t i = 0; i < u.size(); ++i) u[i] = coord(i, 0) < 0.5 * l0 ? 0.9 : 0.1;
            break;
        case PresetKind::random_clipped: {
            std::mt19937_64 rng(preset.seed);
            for (std::size_t i = 0; i < u.size(); ++i) {
                u[i] = clip01(double(rng() >> 11) * 0x1.0p-53);
            }
            break;
        }
    }
    return u;
}

std::string series_csv(const Trajectory& traj, const std::vector<double>& levels) {
    std::string out = "t,mass,u_min,u_max,c_min,c_max,viscous_energy_cum";
    for (double k : levels) out += ",entropy_k" + fmt(k);
    out += "\n";
    double cumulative = 0.0;
    for (const auto& r : traj.diagnostics) {
        cumulative += r.viscous_energy_increment;
        out += fmt(r.t) + "," + fmt(r.mass) + "," + fmt(r.u_min) + "," + fmt(r.u_max) + "," +
               fmt(r.c_min) + "," + fmt(r.c_max) + "," + fmt(cumulative);
        for (std::size_t j = 0; j < levels.size(); ++j) {
            out += "," + fmt(j < r.entropy_residuals.size() ? r.entropy_residuals[j] : 0.0);
        }
        out += "\n";
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f.write(text.data(), std::streamsize(text.size()));
    if (!f) throw IoError("write failed for '" + path + "'");
}

void write_series(const Trajectory& traj, const std::vector<double>& levels,
                  const std::string& path) {
    write_text(path, series_csv(traj, levels));
}

std::size_t snapshot_header_size(int dimension) {
    return 4 + 2 + 1 + 1 + std::size_t(dimension) * 12 + 8;
}

std::vector<std::uint8_t> encode_snapshot(const SimState& state) {
    const auto& d = state.u.domain();
    std::vector<std::uint8_t> out(std::begin(magic), std::end(magic));
    put_u16(out, snapshot_version);
    out.push_back(std::uint8_t(d.dimension));
    out.push_back(d.symbol_mode == SymbolMode::discrete ? 1 : 0);
    for (int a = 0; a < d.dimension; ++a) {
        put_f64(out, d.lengths[a]);
        put_u32(out, std::uint32_t(d.cells[a]));
    }
    put_f64(out, state.t);
    for (double v : state.u.values()) put_f64(out, v);
    for (double v : state.chemo.c.values()) put_f64(out, v);
    return out;
}

void write_snapshot(const SimState& state, const std::string& path) {
    const auto bytes = encode_snapshot(state);
    write_text(path, std::string(bytes.begin(), bytes.end()));
}

Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes) {
    Reader r(bytes);
    for (char ch : magic) {
        if (char(r.take(1)) != ch) throw ValidationError("snapshot: bad magic bytes");
    }
    const auto version = std::uint16_t(r.take(2));
    if (version != snapshot_version) {
        throw ValidationError("snapshot: unsupported format version " + std::to_string(version) +
                              " (expected " + std::to_string(snapshot_version) + ")");
    }
    DomainSpec d;
    d.dimension = int(r.take(1));
    if (d.dimension != 1 && d.dimension != 2) throw ValidationError("snapshot: bad dimension");
    d.symbol_mode = r.take(1) == 1 ? SymbolMode::discrete : SymbolMode::continuum;
    d.lengths.clear();
    d.cells.clear();
    for (int a = 0; a < d.dimension; ++a) {
        d.lengths.push_back(r.f64());
        d.cells.push_back(int(r.take(4)));
    }
    d.validate();
    const double t = r.f64();
    const std::size_t n = d.total_cells();
    if (r.remaining() != 2 * n * 8) {
        throw ValidationError("snapshot: payload size does not match the header");
    }
    std::vector<double> u(n), c(n);
    for (auto& v : u) v = r.f64();
    for (auto& v : c) v = r.f64();
    return Snapshot{d, t, GridField(d, std::move(u)), GridField(d, std::move(c))};
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for reading");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    return decode_snapshot(bytes);
}

SweepTable sweep(const RunManifest& manifest, int threads) {
    manifest.validate();
    if (manifest.sweep.axis == SweepAxis::none) throw ValidationError("sweep.axis is not set");
    const auto& values = manifest.sweep.values;
    const GridField u0 = make_initial_data(manifest.preset, manifest.domain);

    SweepTable table;
    table.axis = manifest.sweep.axis;
    table.with_defect = manifest.sweep.defect;

    auto configured = [&](double value) {
        SimConfig c = manifest.sim;
        switch (manifest.sweep.axis) {
            case SweepAxis::s: c.frac.s = value; break;
            case SweepAxis::sigma: c.frac.sigma = value; break;
            case SweepAxis::epsilon: c.epsilon = value; break;
            case SweepAxis::none: break;
        }
        c.snapshot_every_step = manifest.sweep.defect;
        return c;
    };

    // Job 0 is the reference run; jobs 1..n are the rows.
    std::vector<GridField> terminal(values.size() + 1, GridField(manifest.domain));
    std::vector<SweepRow> rows(values.size());
    bool reference_ok = true;
    std::string reference_error;
    if (manifest.sweep.axis == SweepAxis::epsilon) {
        table.reference = "smallest epsilon " + fmt(*std::min_element(values.begin(), values.end()));
    } else {
        table.reference = "classical coupling";
    }

    parallel_for(values.size() + 1, threads, [&](std::size_t job) {
        if (job == 0) {
            try {
                if (manifest.sweep.axis == SweepAxis::epsilon) {
                    SimConfig c = configured(*std::min_element(values.begin(), values.end()));
                    c.snapshot_every_step = false;
                    terminal[0] = run(u0, c).snapshots.back().u;
                } else {
                    terminal[0] = daper_run(u0, manifest.sim).snapshots.back().u;
                }
            } catch (const std::exception& e) {
                reference_ok = false;
                reference_error = e.what();
            }
            return;
        }
        SweepRow& row = rows[job - 1];
        row.value = values[job - 1];
        try {
            const SimConfig c = configured(row.value);
            const Trajectory traj = run(u0, c);
            const SimState& last = traj.snapshots.back();
            terminal[job] = last.u;
            row.terminal_mass = total_mass(last.u);
            row.mass_factor =
                c.coupling == Coupling::classical ? 1.0 : mass_relation_factor(c.frac);
            row.mass_relation_residual = mass_relation_residual(last.u, last.chemo);
            if (manifest.sweep.defect) row.defect = coarse_defect(traj, manifest.sweep.window);
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
    });

    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].ok) continue;
        if (!reference_ok) {
            rows[i].ok = false;
            rows[i].error = "reference run failed: " + reference_error;
            continue;
        }
        rows[i].l1_to_reference = l1_distance(terminal[i + 1], terminal[0]);
    }
    table.rows = std::move(rows);
    return table;
}

std::string sweep_csv(const SweepTable& table) {
    std::string out = std::string(to_string(table.axis)) +
                      ",terminal_mass,l1_to_reference,mass_factor,mass_relation_residual";
    if (table.with_defect) out += ",defect";
    out += ",status\n";
    for (const auto& r : table.rows) {
        out += fmt(r.value) + "," + fmt(r.terminal_mass) + "," + fmt(r.l1_to_reference) + "," +
               fmt(r.mass_factor) + "," + fmt(r.mass_relation_residual);
        if (table.with_defect) out += "," + fmt(r.defect);
        std::string status = r.ok ? "ok" : "error: " + r.error;
        std::replace(status.begin(), status.end(), ',', ';');
        std::replace(status.begin(), status.end(), '\n', ' ');
        out += "," + status + "\n";
    }
    return out;
}

}  // namespace fhks
