#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "neel/config.hpp"
#include "neel/runner.hpp"

using namespace neel;

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::filesystem::path data_dir() {
    return std::filesystem::path(NEEL_TEST_DATA_DIR);
}

}  // namespace

TEST_CASE("empty text yields all defaults") {
    const RunConfig cfg = RunConfig::parse("");
    CHECK(cfg.grid.L == 60.0);
    CHECK(cfg.grid.N == 4096);
    CHECK(cfg.physics.nu == 0.5);
    CHECK(cfg.physics.epsilon == 0.01);
    CHECK(cfg.physics.T == 1.0);
    CHECK(cfg.physics.forcing == "cosine");
    CHECK(cfg.solver.tol_static == 1e-8);
    CHECK(cfg.solver.tol_orbit == 1e-9);
    CHECK(cfg.output.directory == "out");
    CHECK(cfg.output.precision == 17);
}

TEST_CASE("constraint violations and unknown keys are hard errors") {
    CHECK_THROWS_AS(RunConfig::parse("grid.N = 4095\n"), ValidationError);
    CHECK_THROWS_AS(RunConfig::parse("grid.bogus = 1\n"), ParseError);
    CHECK_THROWS_AS(RunConfig::parse("solver.tol_static = -1\n"), ValidationError);
    CHECK_THROWS_AS(RunConfig::parse("physics.epsilon = 0.5\n"), ValidationError);
    CHECK_THROWS_AS(RunConfig::parse("grid.L 60\n"), ParseError);

    // The epsilon cap lifts only through the explicit flag.
    RunConfig cfg;
    cfg.physics.epsilon = 0.5;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.allow_large_epsilon = true;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("serialization round-trips bit-exactly") {
    RunConfig cfg;
    cfg.grid.L = 47.312500000000001;
    cfg.physics.epsilon = 1.0e-3 / 3.0;
    cfg.solver.dt = 0.00048828125;
    cfg.output.directory = "artifacts/run1";
    const std::string text = cfg.dump();
    const RunConfig back = RunConfig::parse(text);
    CHECK(back.dump() == text);
    CHECK(back.grid.L == cfg.grid.L);
    CHECK(back.physics.epsilon == cfg.physics.epsilon);
    CHECK(back.solver.dt == cfg.solver.dt);
}

TEST_CASE("golden config parses to the golden dump, byte-identical") {
    const RunConfig cfg = RunConfig::parse(read_file(data_dir() / "golden.cfg"));
    CHECK(cfg.dump() == read_file(data_dir() / "golden_dump.txt"));
}

TEST_CASE("rerunning a command reproduces identical artifacts") {
    const auto tmp = std::filesystem::temp_directory_path() / "neel_cfg_test";
    std::filesystem::remove_all(tmp);

    RunConfig cfg;
    cfg.grid.N = 256;
    cfg.solver.tol_static = 1e-8;

    cfg.output.directory = (tmp / "a").string();
    REQUIRE(run_command("static", cfg) == 0);
    cfg.output.directory = (tmp / "b").string();
    REQUIRE(run_command("static", cfg) == 0);

    CHECK(read_file(tmp / "a" / "profile.csv") == read_file(tmp / "b" / "profile.csv"));

    // Error records carry a machine-readable type and a nonzero exit code.
    cfg.output.directory = (tmp / "c").string();
    cfg.physics.epsilon = 0.2;
    CHECK(run_command("periodic", cfg) == 2);
    CHECK(std::filesystem::exists(tmp / "c" / "error.json"));
    std::filesystem::remove_all(tmp);
}
