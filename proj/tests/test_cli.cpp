#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fhks/config.hpp"
#include "fhks/io.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("fhks_test_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(FHKS_CLI) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
}

}  // namespace

TEST_CASE("run writes the manifest, series and snapshots") {
    const auto dir = scratch("run");
    write(dir / "a.ini", "[domain]\ncells = 64\n[time]\noutput_times = 0.1, 0.2\n");
    REQUIRE(cli("run --config " + (dir / "a.ini").string() + " --out " + (dir / "out").string(), dir / "log") == 0);
    CHECK(fs::exists(dir / "out" / "manifest.ini"));
    CHECK(fs::exists(dir / "out" / "series.csv"));
    for (const char* name : {"snapshot_000.bin", "snapshot_001.bin", "snapshot_002.bin", "snapshot_003.bin"}) {
        CHECK(fs::exists(dir / "out" / name));
    }
    CHECK_FALSE(fs::exists(dir / "out" / "snapshot_004.bin"));
    const fhks::Snapshot last = fhks::read_snapshot((dir / "out" / "snapshot_003.bin").string());
    CHECK(last.t == 0.5);
    const fhks::RunManifest echoed = fhks::parse_config(slurp(dir / "out" / "manifest.ini"));
    CHECK(echoed.domain.cells == std::vector<int>{64});
    CHECK(echoed.output_dir == (dir / "out").string());
}

TEST_CASE("identical manifests give byte-identical files") {
    const auto dir = scratch("determinism");
    write(dir / "a.ini", "[domain]\ncells = 48\n[initial]\npreset = random_clipped\nseed = 4\n");
    REQUIRE(cli("run --config " + (dir / "a.ini").string() + " --out " + (dir / "one").string(), dir / "log") == 0);
    REQUIRE(cli("run --config " + (dir / "a.ini").string() + " --out " + (dir / "two").string(), dir / "log") == 0);
    for (const char* name : {"series.csv", "snapshot_000.bin", "snapshot_001.bin"}) {
        CHECK(slurp(dir / "one" / name) == slurp(dir / "two" / name));
    }
    REQUIRE(cli("run --config " + (dir / "a.ini").string() + " --seed 5 --out " + (dir / "three").string(),
                dir / "log") == 0);
    CHECK(slurp(dir / "one" / "snapshot_000.bin") != slurp(dir / "three" / "snapshot_000.bin"));
}

TEST_CASE("sweep output does not depend on the thread count") {
    const auto dir = scratch("sweep");
    write(dir / "s.ini", "[domain]\ncells = 64\n[sweep]\naxis = s\nvalues = 0.45, 0.2, 0.02\n");
    REQUIRE(cli("sweep --threads 1 --config " + (dir / "s.ini").string() + " --out " + (dir / "t1").string(),
                dir / "log") == 0);
    REQUIRE(cli("sweep --threads 8 --config " + (dir / "s.ini").string() + " --out " + (dir / "t8").string(),
                dir / "log") == 0);
    CHECK(slurp(dir / "t1" / "sweep.csv") == slurp(dir / "t8" / "sweep.csv"));
    CHECK(slurp(dir / "t1" / "sweep.csv").find("0.45") != std::string::npos);
}

TEST_CASE("check prints one line per invariant and passes on defaults") {
    const auto dir = scratch("check");
    write(dir / "c.ini", "[domain]\ncells = 32\n");
    CHECK(cli("check --config " + (dir / "c.ini").string(), dir / "log") == 0);
    const std::string out = slurp(dir / "log");
    CHECK(out.find("[PASS]") != std::string::npos);
    CHECK(out.find("[FAIL]") == std::string::npos);
}

TEST_CASE("validation problems exit with 1") {
    const auto dir = scratch("errors");
    write(dir / "bad.ini", "[model]\ns = 1.0\n");
    CHECK(cli("run --config " + (dir / "bad.ini").string() + " --out " + (dir / "o").string(), dir / "log") == 1);
    CHECK(slurp(dir / "log").find("(0, 1)") != std::string::npos);
    write(dir / "key.ini", "[model]\nfoo = 1\n");
    CHECK(cli("run --config " + (dir / "key.ini").string(), dir / "log") == 1);
    CHECK(slurp(dir / "log").find("foo") != std::string::npos);
    CHECK(cli("run --config " + (dir / "absent.ini").string(), dir / "log") == 1);
    CHECK(cli("run --bogus-flag", dir / "log") == 1);
    CHECK(cli("", dir / "log") == 1);
    write(dir / "one.ini", "[sweep]\naxis = epsilon\nvalues = 0.01\n");
    CHECK(cli("sweep --config " + (dir / "one.ini").string(), dir / "log") == 1);
}
