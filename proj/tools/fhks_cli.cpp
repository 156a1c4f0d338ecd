// Command-line driver: run, sweep and check subcommands.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fhks/check.hpp"
#include "fhks/config.hpp"
#include "fhks/errors.hpp"
#include "fhks/io.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    int threads = 1;
    long long seed = -1;
};

void add_common(CLI::App* sub, CommonOptions& o) {
    sub->add_option("--config", o.config_path, "Configuration file (defaults apply when omitted)");
    sub->add_option("--out", o.out_dir, "Output directory (overrides output.dir)");
    sub->add_option("--threads", o.threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Seed for the random_clipped preset")->check(CLI::NonNegativeNumber);
}

fhks::RunManifest load(const CommonOptions& o) {
    std::string text;
    if (!o.config_path.empty()) {
        std::ifstream f(o.config_path, std::ios::binary);
        if (!f) throw fhks::IoError("cannot open config '" + o.config_path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    fhks::RunManifest m = fhks::parse_config(text);
    if (o.seed >= 0) m.preset.seed = std::uint64_t(o.seed);
    if (!o.out_dir.empty()) m.output_dir = o.out_dir;
    m.validate();
    return m;
}

std::filesystem::path prepare_dir(const fhks::RunManifest& m) {
    std::filesystem::path dir(m.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw fhks::IoError("cannot create '" + dir.string() + "': " + ec.message());
    fhks::write_text((dir / "manifest.ini").string(), fhks::render(m));
    return dir;
}

int do_run(const CommonOptions& o) {
    const fhks::RunManifest m = load(o);
    const auto dir = prepare_dir(m);
    const fhks::GridField u0 = fhks::make_initial_data(m.preset, m.domain);
    const fhks::Trajectory traj = fhks::run(u0, m.sim, m.output_times);
    if (m.write_series) {
        fhks::write_series(traj, m.sim.diag_levels, (dir / "series.csv").string());
    }
    if (m.write_snapshots) {
        for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "snapshot_%03zu.bin", i);
            fhks::write_snapshot(traj.snapshots[i], (dir / name).string());
        }
    }
    std::cout << "run: " << traj.diagnostics.size() - 1 << " steps to t = " << traj.snapshots.back().t
              << ", output in " << dir.string() << "\n";
    return 0;
}

int do_sweep(const CommonOptions& o) {
    const fhks::RunManifest m = load(o);
    const auto dir = prepare_dir(m);
    const fhks::SweepTable table = fhks::sweep(m, o.threads);
    fhks::write_text((dir / "sweep.csv").string(), fhks::sweep_csv(table));
    std::size_t failed = 0;
    for (const auto& r : table.rows) failed += r.ok ? 0 : 1;
    std::cout << "sweep over " << fhks::to_string(table.axis) << ": " << table.rows.size()
              << " rows, " << failed << " failed, output in " << dir.string() << "\n";
    return failed == 0 ? 0 : 2;
}

int do_check(const CommonOptions& o) {
    const fhks::RunManifest m = load(o);
    bool all = true;
    for (const auto& r : fhks::run_checks(m)) {
        std::printf("[%s] %-28s value %.3e  tolerance %.1e\n", r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.value, r.tolerance);
        all = all && r.passed;
    }
    return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional hyperbolic Keller-Segel laboratory"};
    app.require_subcommand(1);
    CommonOptions run_opts, sweep_opts, check_opts;
    auto* run_cmd = app.add_subcommand("run", "Integrate one configuration");
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep");
    auto* check_cmd = app.add_subcommand("check", "Evaluate the invariant suite");
    add_common(run_cmd, run_opts);
    add_common(sweep_cmd, sweep_opts);
    add_common(check_cmd, check_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run_cmd) return do_run(run_opts);
        if (*sweep_cmd) return do_sweep(sweep_opts);
        return do_check(check_opts);
    } catch (const fhks::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const fhks::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 1;
    } catch (const fhks::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
