#include "doctest.h"
#include "helpers.hpp"

#include "cyclometer/cli.hpp"

#include <cstdlib>
#include <filesystem>

using namespace cyclometer;
using testing::fixture;
using testing::slurp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("cyclometer_test_" + std::to_string(std::rand()) + "_" +
                                            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

cli::RunConfig cfg(const std::string& prog, const std::string& mem, const fs::path& out) {
    cli::RunConfig c;
    c.input = fixture(prog);
    if (!mem.empty()) c.mem = fixture(mem);
    c.out_dir = out.string();
    return c;
}

}  // namespace

TEST_CASE("profile writes every artifact and the summary") {
    TempDir dir;
    std::ostringstream out;
    CHECK(cli::cmd_profile(cfg("switch_par.futil", "mem1.json", dir.path), out) == 0);
    CHECK(out.str().rfind("total=9 user=3 control=6\n", 0) == 0);
    for (const char* ext : {".vcd", ".map.json", ".folded", ".svg", ".perfetto.json", ".stats.csv"})
        CHECK(fs::exists(dir.path / (std::string("switch_par") + ext)));
    // Top-5 list follows the summary line.
    std::istringstream lines(out.str());
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) ++n;
    CHECK(n == 6);
}

TEST_CASE("profile artifacts are byte-deterministic") {
    TempDir a, b;
    std::ostringstream sink;
    cli::cmd_profile(cfg("while_par.futil", "while_mem.json", a.path), sink);
    cli::cmd_profile(cfg("while_par.futil", "while_mem.json", b.path), sink);
    for (const auto& e : fs::directory_iterator(a.path)) {
        CAPTURE(e.path().filename().string());
        CHECK(slurp(e.path().string()) == slurp((b.path / e.path().filename()).string()));
    }
}

TEST_CASE("empty program summary") {
    TempDir dir;
    std::ostringstream out;
    cli::cmd_profile(cfg("empty.futil", "", dir.path), out);
    CHECK(out.str().rfind("total=1 user=0 control=1\n", 0) == 0);
}

TEST_CASE("promoted while loop totals") {
    TempDir dir;
    std::ostringstream out;
    auto c = cfg("while_comb.futil", "while_mem.json", dir.path);
    c.promote = true;
    c.emit = {"summary"};
    cli::cmd_profile(c, out);
    CHECK(out.str().rfind("total=17 ", 0) == 0);
}

TEST_CASE("compare reports the cycle delta") {
    TempDir dir;
    std::ostringstream out;
    cli::cmd_compare(cfg("switch_par.futil", "mem1.json", dir.path), cfg("switch_if.futil", "mem1.json", dir.path), out);
    CHECK(out.str().find("delta=3 (33.3%)") != std::string::npos);
    CHECK(out.str().find("Strategy") != std::string::npos);
    CHECK(out.str().find("Cycles reduced") != std::string::npos);
    CHECK(out.str().find("% Cycles reduced") != std::string::npos);

    std::ostringstream same;
    cli::cmd_compare(cfg("seq5.futil", "", dir.path), cfg("seq5.futil", "", dir.path), same);
    CHECK(same.str().find("delta=0 (0.0%)") != std::string::npos);

    std::ostringstream loops;
    auto orig = cfg("while_comb.futil", "while_mem.json", dir.path);
    auto opt = cfg("while_par.futil", "while_mem.json", dir.path);
    orig.promote = opt.promote = true;
    cli::cmd_compare(orig, opt, loops);
    CHECK(loops.str().find("delta=4 ") != std::string::npos);
}

TEST_CASE("profiling an external trace uses its sidecar") {
    TempDir dir;
    std::ostringstream out;
    cli::cmd_simulate(cfg("switch_par.futil", "mem1.json", dir.path), out);
    CHECK(out.str() == "cycles=9\n");
    cli::RunConfig ext;
    ext.vcd = (dir.path / "switch_par.vcd").string();
    ext.out_dir = (dir.path / "again").string();
    std::ostringstream again;
    CHECK(cli::cmd_profile(ext, again) == 0);
    CHECK(again.str().rfind("total=9 user=3 control=6\n", 0) == 0);

    fs::remove(dir.path / "switch_par.map.json");
    CHECK_THROWS_AS(cli::run(ext), cli::CliError);
}

TEST_CASE("CYCLOMETER_OUT overrides the output directory") {
    TempDir dir;
    const auto env = (dir.path / "env").string();
    setenv("CYCLOMETER_OUT", env.c_str(), 1);
    cli::RunConfig c = cfg("seq5.futil", "", dir.path / "flag");
    CHECK(cli::out_dir(c) == env);
    std::ostringstream out;
    cli::cmd_compile(c, out);
    unsetenv("CYCLOMETER_OUT");
    CHECK(fs::exists(fs::path(env) / "seq5.lowered.futil"));
    CHECK_FALSE(fs::exists(dir.path / "flag"));
    CHECK(cli::out_dir(c) == (dir.path / "flag").string());
}

TEST_CASE("invalid inputs fail with a diagnostic") {
    TempDir dir;
    const auto bad = dir.path / "bad.futil";
    std::ofstream(bad) << testing::program("r = std_reg(8);", "group g { q.in = 8'd1; g[done] = r.done; }", "g;");
    cli::RunConfig c;
    c.input = bad.string();
    c.out_dir = dir.path.string();
    std::ostringstream out;
    CHECK_THROWS_AS(cli::cmd_profile(c, out), cli::CliError);
    c.input = (dir.path / "missing.futil").string();
    CHECK_THROWS_AS(cli::cmd_profile(c, out), cli::CliError);
    CHECK(cli::sidecar_path("out/x.vcd") == "out/x.map.json");
}
