#include "fhks/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

#include "fhks/errors.hpp"

namespace fhks {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class LineError {
public:
    explicit LineError(int line) : line_(line) {}
    [[noreturn]] void fail(const std::string& what) const {
        throw ValidationError("line " + std::to_string(line_) + ": " + what);
    }

private:
    int line_;
};

double parse_double(const std::string& text, const std::string& key, const LineError& at) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        at.fail("'" + key + "' expects a real number, got '" + text + "'");
    }
    return v;
}

long long parse_integer(const std::string& text, const std::string& key, const LineError& at) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        at.fail("'" + key + "' expects an integer, got '" + text + "'");
    }
    return v;
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& key, const LineError& at) {
    errno = 0;
    char* end = nullptr;
    if (!text.empty() && text.front() == '-') at.fail("'" + key + "' must be non-negative");
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        at.fail("'" + key + "' expects a non-negative integer, got '" + text + "'");
    }
    return v;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    if (trim(text).empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

std::vector<double> parse_reals(const std::string& text, const std::string& key,
                                const LineError& at) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(parse_double(item, key, at));
    return out;
}

bool parse_bool(const std::string& text, const std::string& key, const LineError& at) {
    if (text == "true") return true;
    if (text == "false") return false;
    at.fail("'" + key + "' expects true or false, got '" + text + "'");
}

template <class Enum>
Enum parse_enum(const std::string& text, const std::string& key, const LineError& at,
                const std::map<std::string, Enum>& names) {
    const auto it = names.find(text);
    if (it == names.end()) {
        std::string allowed;
        for (const auto& [name, value] : names) allowed += (allowed.empty() ? "" : ", ") + name;
        at.fail("'" + key + "' must be one of {" + allowed + "}, got '" + text + "'");
    }
    return it->second;
}

const std::map<std::string, SymbolMode> symbol_names{{"continuum", SymbolMode::continuum},
                                                     {"discrete", SymbolMode::discrete}};
const std::map<std::string, Coupling> coupling_names{{"fractional", Coupling::fractional},
                                                     {"classical", Coupling::classical}};
const std::map<std::string, Splitting> splitting_names{{"lie", Splitting::lie},
                                                       {"strang", Splitting::strang}};
const std::map<std::string, FluxScheme> flux_names{{"godunov", FluxScheme::godunov},
                                                   {"lax_friedrichs", FluxScheme::lax_friedrichs}};
const std::map<std::string, PresetKind> preset_names{
    {"constant", PresetKind::constant},         {"bump", PresetKind::bump},
    {"two_bumps", PresetKind::two_bumps},       {"riemann_step", PresetKind::riemann_step},
    {"random_clipped", PresetKind::random_clipped}};
const std::map<std::string, SweepAxis> axis_names{{"none", SweepAxis::none},
                                                  {"s", SweepAxis::s},
                                                  {"epsilon", SweepAxis::epsilon},
                                                  {"sigma", SweepAxis::sigma}};

template <class Enum>
std::string name_of(Enum value, const std::map<std::string, Enum>& names) {
    for (const auto& [name, v] : names) {
        if (v == value) return name;
    }
    return "?";
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + fmt(values[i]);
    return out;
}

}  // namespace

const char* to_string(PresetKind kind) {
    switch (kind) {
        case PresetKind::constant: return "constant";
        case PresetKind::bump: return "bump";
        case PresetKind::two_bumps: return "two_bumps";
        case PresetKind::riemann_step: return "riemann_step";
        case PresetKind::random_clipped: return "random_clipped";
    }
    return "?";
}

const char* to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::none: return "none";
        case SweepAxis::s: return "s";
        case SweepAxis::epsilon: return "epsilon";
        case SweepAxis::sigma: return "sigma";
    }
    return "?";
}

void RunManifest::validate() const {
    domain.validate();
    sim.validate();
    if (preset.kind == PresetKind::constant && !(preset.value >= 0.0 && preset.value <= 1.0)) {
        throw ValidationError("initial.value must lie in [0, 1]");
    }
    for (std::size_t i = 0; i < output_times.size(); ++i) {
        const double t = output_times[i];
        if (!(t > 0.0 && t <= sim.t_end)) {
            throw ValidationError("time.output_times must lie in (0, t_end]");
        }
        if (i > 0 && !(output_times[i - 1] < t)) {
            throw ValidationError("time.output_times must be strictly increasing");
        }
    }
    if (output_dir.empty()) throw ValidationError("output.dir must not be empty");
    if (sweep.axis == SweepAxis::none) {
        if (!sweep.values.empty()) throw ValidationError("sweep.values given without sweep.axis");
    } else {
        if (sweep.values.size() < 2) {
            throw ValidationError("sweep.values needs at least 2 entries");
        }
        for (double v : sweep.values) {
            SimConfig probe = sim;
            if (sweep.axis == SweepAxis::s) probe.frac.s = v;
            if (sweep.axis == SweepAxis::sigma) probe.frac.sigma = v;
            if (sweep.axis == SweepAxis::epsilon) probe.epsilon = v;
            probe.validate();
        }
    }
    if (sweep.window.cells < 1 || sweep.window.steps < 1) {
        throw ValidationError("sweep.window_cells and sweep.window_steps must be >= 1");
    }
}

RunManifest parse_config(std::string_view text) {
    RunManifest m;
    bool lengths_set = false;
    bool cells_set = false;
    std::string section;
    using Handler = std::function<void(const std::string&, const std::string&, const LineError&)>;
    const std::map<std::string, std::map<std::string, Handler>> handlers{
        {"domain",
         {{"dimension",
           [&](const std::string& k, const std::string& v, const LineError& at) {
               m.domain.dimension = int(parse_integer(v, k, at));
           }},
          {"lengths",
           [&](const std::string& k, const std::string& v, const LineError& at) {
               m.domain.lengths = parse_reals(v, k, at);
               lengths_set = true;
           }},
          {"cells",
           [&](const std::string& k, const std::string& v, const LineError& at) {
               m.domain.cells.clear();
               for (const auto& item : split_list(v)) {
                   m.domain.cells.push_back(int(parse_integer(item, k, at)));
               }
               cells_set = true;
           }},
          {"symbol_mode", [&](const std::string& k, const std::string& v, const LineError& at) {
               m.domain.symbol_mode = parse_enum(v, k, at, symbol_names);
           }}}},
        {"model",
         {{"s", [&](const std::string& k, const std::string& v,
                    const LineError& at) { m.sim.frac.s = parse_double(v, k, at); }},
          {"sigma", [&](const std::string& k, const std::string& v,
                        const LineError& at) { m.sim.frac.sigma = parse_double(v, k, at); }},
          {"epsilon", [&](const std::string& k, const std::string& v,
                          const LineError& at) { m.sim.epsilon = parse_double(v, k, at); }},
          {"coupling", [&](const std::string& k, const std::string& v, const LineError& at) {
               m.sim.coupling = parse_enum(v, k, at, coupling_names);
           }}}},
        {"time",
         {{"t_end", [&](const std::string& k, const std::string& v,
                        const LineError& at) { m.sim.t_end = parse_double(v, k, at); }},
          {"cfl", [&](const std::string& k, const std::string& v,
                      const LineError& at) { m.sim.cfl = parse_double(v, k, at); }},
          {"splitting",
           [&](const std::string& k, const std::string& v, const LineError& at) {
               m.sim.splitting = parse_enum(v, k, at, splitting_names);
           }},
          {"flux", [&](const std::string& k, const std::string& v,
                       const LineError& at) { m.sim.flux = parse_enum(v, k, at, flux_names); }},
          {"output_times", [&](const std::string& k, const std::string& v,
                               const LineError& at) { m.output_times = parse_reals(v, k, at); }},
          {"diag_levels", [&](const std::string& k, const std::string& v, const LineError& at) {
               m.sim.diag_levels = parse_reals(v, k, at);
           }}}},
        {"initial",
         {{"preset", [&](const std::string& k, const std::string& v,
                         const LineError& at) { m.preset.kind = parse_enum(v, k, at, preset_names); }},
          {"value", [&](const std::string& k, const std::string& v,
                        const LineError& at) { m.preset.value = parse_double(v, k, at); }},
          {"seed", [&](const std::string& k, const std::string& v,
                       const LineError& at) { m.preset.seed = parse_unsigned(v, k, at); }}}},
        {"output",
         {{"dir", [&](const std::string&, const std::string& v,
                      const LineError&) { m.output_dir = v; }},
          {"series", [&](const std::string& k, const std::string& v,
                         const LineError& at) { m.write_series = parse_bool(v, k, at); }},
          {"snapshots", [&](const std::string& k, const std::string& v,
                            const LineError& at) { m.write_snapshots = parse_bool(v, k, at); }}}},
        {"sweep",
         {{"axis", [&](const std::string& k, const std::string& v,
                       const LineError& at) { m.sweep.axis = parse_enum(v, k, at, axis_names); }},
          {"values", [&](const std::string& k, const std::string& v,
                         const LineError& at) { m.sweep.values = parse_reals(v, k, at); }},
          {"defect", [&](const std::string& k, const std::string& v,
                         const LineError& at) { m.sweep.defect = parse_bool(v, k, at); }},
          {"window_cells",
           [&](const std::string& k, const std::string& v, const LineError& at) {
               m.sweep.window.cells = int(parse_integer(v, k, at));
           }},
          {"window_steps", [&](const std::string& k, const std::string& v, const LineError& at) {
               m.sweep.window.steps = int(parse_integer(v, k, at));
           }}}},
    };

    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        const LineError at(line_no);
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') at.fail("malformed section header '" + line + "'");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!handlers.count(section)) at.fail("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) at.fail("expected 'key = value', got '" + line + "'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (section.empty()) at.fail("key '" + key + "' appears before any section header");
        const auto& keys = handlers.at(section);
        const auto it = keys.find(key);
        if (it == keys.end()) at.fail("unknown key '" + key + "' in section [" + section + "]");
        it->second(key, value, at);
    }

    const auto dim = std::size_t(std::max(m.domain.dimension, 1));
    if (!lengths_set) m.domain.lengths.assign(dim, 1.0);
    if (!cells_set) m.domain.cells.assign(dim, 128);
    m.validate();
    return m;
}

std::string render(const RunManifest& m) {
    std::ostringstream os;
    os << "[domain]\n";
    os << "dimension = " << m.domain.dimension << "\n";
    os << "lengths = " << join(m.domain.lengths) << "\n";
    os << "cells = ";
    for (std::size_t i = 0; i < m.domain.cells.size(); ++i) os << (i ? ", " : "") << m.domain.cells[i];
    os << "\n";
    os << "symbol_mode = " << name_of(m.domain.symbol_mode, symbol_names) << "\n\n";
    os << "[model]\n";
    os << "s = " << fmt(m.sim.frac.s) << "\n";
    os << "sigma = " << fmt(m.sim.frac.sigma) << "\n";
    os << "epsilon = " << fmt(m.sim.epsilon) << "\n";
    os << "coupling = " << name_of(m.sim.coupling, coupling_names) << "\n\n";
    os << "[time]\n";
    os << "t_end = " << fmt(m.sim.t_end) << "\n";
    os << "cfl = " << fmt(m.sim.cfl) << "\n";
    os << "splitting = " << name_of(m.sim.splitting, splitting_names) << "\n";
    os << "flux = " << name_of(m.sim.flux, flux_names) << "\n";
    os << "output_times = " << join(m.output_times) << "\n";
    os << "diag_levels = " << join(m.sim.diag_levels) << "\n\n";
    os << "[initial]\n";
    os << "preset = " << to_string(m.preset.kind) << "\n";
    os << "value = " << fmt(m.preset.value) << "\n";
    os << "seed = " << m.preset.seed << "\n\n";
    os << "[output]\n";
    os << "dir = " << m.output_dir << "\n";
    os << "series = " << (m.write_series ? "true" : "false") << "\n";
    os << "snapshots = " << (m.write_snapshots ? "true" : "false") << "\n\n";
    os << "[sweep]\n";
    os << "axis = " << to_string(m.sweep.axis) << "\n";
    os << "values = " << join(m.sweep.values) << "\n";
    os << "defect = " << (m.sweep.defect ? "true" : "false") << "\n";
    os << "window_cells = " << m.sweep.window.cells << "\n";
    os << "window_steps = " << m.sweep.window.steps << "\n";
    return os.str();
}

}  // namespace fhks
