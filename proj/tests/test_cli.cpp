#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "fairmatch/io.hpp"

// End-to-end tests of the installed command-line surface: exit codes,
// output files, and byte determinism of reports.

namespace fs = std::filesystem;

namespace {

const std::string kCli = FAIRMATCH_CLI_PATH;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fairmatch_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
    std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

void write(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

std::string slurp(const fs::path& p) { return fairmatch::io::read_file(p); }

}  // namespace

TEST_CASE("exit code contract") {
    TempDir dir;
    const fs::path d = dir.path;

    write(d / "twins.json",
          R"({"agents":["a","b"],"items":["x","y"],"utilities":[[1,0],[1,0]]})");
    write(d / "uniform.json",
          R"({"allocation":[["1/2","1/2"],["1/2","1/2"]]})");
    write(d / "p20.json", R"({"prices":["2/1","0/1"]})");
    write(d / "p10.json", R"({"prices":["1/1","0/1"]})");
    write(d / "broken.json", "{ nope");

    // 0: verdict holds.
    CHECK(run("check hz " + (d / "twins.json").string() + " " + (d / "uniform.json").string() +
              " " + (d / "p20.json").string() + " --out " + (d / "o1").string()) == 0);
    // 1: verdict fails (wrong prices).
    CHECK(run("check hz " + (d / "twins.json").string() + " " + (d / "uniform.json").string() +
              " " + (d / "p10.json").string() + " --out " + (d / "o2").string()) == 1);
    // 2: parse error.
    CHECK(run("check ef " + (d / "broken.json").string() + " " +
              (d / "uniform.json").string() + " --out " + (d / "o3").string()) == 2);
    // 2: usage error.
    CHECK(run("frobnicate") == 2);
    CHECK(run("check") == 2);
    // 3: solver gives up (clearing price 2 is beyond this cap).
    CHECK(run("solve grid-hz " + (d / "twins.json").string() +
              " --delta 1/4 --cap 1 --out " + (d / "o4").string()) == 3);
}

TEST_CASE("check ef reports the envy pair on the dumped-chore outcome") {
    TempDir dir;
    const fs::path d = dir.path;
    write(d / "fig1.json",
          R"({"agents":["i","i2"],"items":["j","j2"],"utilities":[[-1,-10],[0,-1]]})");
    write(d / "dumped.json", R"({"allocation":[[0,1],[1,0]]})");

    CHECK(run("check ef " + (d / "fig1.json").string() + " " + (d / "dumped.json").string() +
              " --out " + (d / "out").string()) == 1);
    std::string report = slurp(d / "out" / "report.json");
    CHECK(report.find("\"envier\": 0") != std::string::npos);
    CHECK(report.find("\"envied\": 1") != std::string::npos);
    CHECK(report.find("\"multiplicative_ratio\": \"10/1\"") != std::string::npos);
}

TEST_CASE("check po on a one-item market holds") {
    TempDir dir;
    const fs::path d = dir.path;
    write(d / "one.json", R"({"agents":["a"],"items":["x"],"utilities":[[-5]]})");
    write(d / "all.json", R"({"allocation":[[1]]})");
    CHECK(run("check po " + (d / "one.json").string() + " " + (d / "all.json").string() +
              " --out " + (d / "out").string()) == 0);
}

TEST_CASE("solve two-type writes the envy-free allocation with verdicts") {
    TempDir dir;
    const fs::path d = dir.path;
    write(d / "fig2.json",
          R"({"agents":["i","i2"],"items":["j","j2"],"utilities":[[-1,-2],[0,-1]]})");
    CHECK(run("solve two-type " + (d / "fig2.json").string() + " --out " +
              (d / "out").string()) == 0);

    fairmatch::Allocation x =
        fairmatch::io::load_allocation(d / "out" / "allocation.json");
    CHECK(x.x[0][1] == fairmatch::Rational(1, 2));

    std::string report = slurp(d / "out" / "report.json");
    CHECK(report.find("\"kind\": \"ef\",\n      \"holds\": true") != std::string::npos);
    CHECK(report.find("\"kind\": \"po\",\n      \"holds\": true") != std::string::npos);
}

TEST_CASE("solve pcnb on fig2 reports the envy it creates") {
    TempDir dir;
    const fs::path d = dir.path;
    write(d / "fig2.json",
          R"({"agents":["i","i2"],"items":["j","j2"],"utilities":[[-1,-2],[0,-1]]})");
    CHECK(run("solve pcnb " + (d / "fig2.json").string() + " --delta 1/20 --out " +
              (d / "out").string()) == 0);
    std::string report = slurp(d / "out" / "report.json");
    CHECK(report.find("\"envy_free\": false") != std::string::npos);
    CHECK(report.find("\"additive_gap\": \"1/1\"") != std::string::npos);
}

TEST_CASE("transform to-earnings converts the fixture prices") {
    TempDir dir;
    const fs::path d = dir.path;
    write(d / "p.json", R"({"prices":[2,0]})");
    CHECK(run("transform to-earnings " + (d / "p.json").string() + " --out " +
              (d / "out").string()) == 0);
    std::string earnings = slurp(d / "out" / "earnings.json");
    CHECK(earnings.find("\"0/1\"") != std::string::npos);
    CHECK(earnings.find("\"2/1\"") != std::string::npos);
}

TEST_CASE("transform shift moves the dumped-chore market into goods") {
    TempDir dir;
    const fs::path d = dir.path;
    write(d / "fig1.json",
          R"({"agents":["i","i2"],"items":["j","j2"],"utilities":[[-1,-10],[0,-1]]})");
    CHECK(run("transform shift " + (d / "fig1.json").string() + " --c 10,1 --out " +
              (d / "out").string()) == 0);
    auto shifted = fairmatch::io::load_instance(d / "out" / "instance.json");
    for (const auto& row : shifted.instance.utilities)
        for (const auto& u : row) CHECK(u >= 0);
}

TEST_CASE("reports and curves are byte-deterministic") {
    TempDir dir;
    const fs::path d = dir.path;
    // Identical invocations must produce identical bytes.
    const std::string cmd = "demo fig2 --out " + (d / "r1").string();
    CHECK(run(cmd) == 0);
    std::string first_report = slurp(d / "r1" / "report.json");
    std::string first_curve = slurp(d / "r1" / "curve.csv");
    CHECK(run(cmd) == 0);
    CHECK(slurp(d / "r1" / "report.json") == first_report);
    CHECK(slurp(d / "r1" / "curve.csv") == first_curve);

    CHECK(first_curve.substr(0, 23) == "t,objective,envy_gap\n0/");
}

TEST_CASE("demo fig1 pins the optimizer and envy factor exactly") {
    TempDir dir;
    const fs::path d = dir.path;
    CHECK(run("demo fig1 --param 100 --out " + (d / "out").string()) == 0);
    std::string report = slurp(d / "out" / "report.json");
    CHECK(report.find("\"t_star\": \"1/1\"") != std::string::npos);
    CHECK(report.find("\"multiplicative_ratio\": \"100/1\"") != std::string::npos);

    CHECK(run("demo fig1 --param 1 --out " + (d / "bad").string()) == 2);  // needs c > 1
}
