#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rforge/cli.hpp"

using nlohmann::json;
using rforge::run_cli;

namespace {

struct TmpFile {
    std::string path;
    TmpFile() {
        static std::atomic<int> counter{0};
        auto dir = std::filesystem::temp_directory_path();
        path = (dir / ("rforge_cli_test_" + std::to_string(counter.fetch_add(1)) + ".out"))
                   .string();
    }
    ~TmpFile() { std::remove(path.c_str()); }
    TmpFile(const TmpFile&) = delete;
    TmpFile& operator=(const TmpFile&) = delete;

    std::string read() const {
        std::ifstream f(path, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }
    json parse() const { return json::parse(read()); }
    bool exists() const { return std::filesystem::exists(path); }
};

const json* find_check(const json& report, const std::string& name) {
    for (const auto& c : report["summary"]["checks"])
        if (c["name"] == name) return &c;
    return nullptr;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("verify example1 passes with the full check set") {
    TmpFile out;
    int rc = run_cli({"verify", "--model", "example1", "--samples", "50", "--out", out.path});
    CHECK(rc == 0);
    json j = out.parse();
    CHECK(j["tool_version"] == "1.0.0");
    CHECK(j["model"] == "example1");
    CHECK(j["summary"]["pass"] == true);
    for (const char* name : {"ricci_vacuum", "det_negative", "minor_chain",
                             "det_closed_form_grid", "flatness", "det_closed_form_random",
                             "assembly_fidelity"}) {
        const json* c = find_check(j, name);
        REQUIRE_MESSAGE(c != nullptr, name);
        CHECK((*c)["pass"] == true);
    }
    CHECK(j["config"]["command"] == "verify");
    CHECK(j["results"].contains("scan_summary"));
}

TEST_CASE("verify example2 runs the family-specific checks") {
    TmpFile out;
    int rc = run_cli({"verify", "--model", "example2", "--samples", "50", "--out", out.path});
    CHECK(rc == 0);
    json j = out.parse();
    CHECK(j["summary"]["pass"] == true);
    CHECK(find_check(j, "kretschmann_null") != nullptr);
    CHECK(find_check(j, "riemann_pattern") != nullptr);
    CHECK(find_check(j, "flatness") == nullptr);
}

TEST_CASE("usage errors exit 2") {
    TmpFile out;
    CHECK(run_cli({"verify", "--model", "nosuch", "--out", out.path}) == 2);
    CHECK(run_cli({"scan", "--model", "example1", "--grid", "t=0:1:3", "--out", out.path}) ==
          2);
    CHECK(run_cli({"verify", "--model", "example1", "--format", "csv", "--out", out.path}) ==
          2);
    CHECK(run_cli({"derive-check", "--model", "minkowski", "--out", out.path}) == 2);
    CHECK(run_cli({"verify", "--model", "schwarzschild", "--mass", "-1", "--out", out.path}) ==
          2);
    CHECK(run_cli({"scan", "--model", "example1", "--grid", "t=0.4:1", "--out", out.path}) ==
          2);
    CHECK(run_cli({"nosuchcommand"}) == 2);
}

TEST_CASE("derive-check example2 passes and reports all four equations") {
    TmpFile out;
    int rc = run_cli({"derive-check", "--model", "example2", "--samples", "40", "--out",
                      out.path});
    CHECK(rc == 0);
    json j = out.parse();
    CHECK(j["summary"]["pass"] == true);
    REQUIRE(j["summary"]["equations"].size() == 4);
    std::vector<std::string> names;
    for (const auto& e : j["summary"]["equations"]) {
        names.push_back(e["equation"]);
        CHECK(e["pass"] == true);
    }
    CHECK(names == std::vector<std::string>{"ode7", "eq27", "eq29", "eq30"});
}

TEST_CASE("corrupt controls fail loudly but still write the report") {
    TmpFile out;
    int rc = run_cli({"derive-check", "--model", "example2", "--samples", "30", "--corrupt",
                      "v", "--out", out.path});
    CHECK(rc == 1);
    json j = out.parse();
    CHECK(j["summary"]["pass"] == false);
    const auto& eqs = j["summary"]["equations"];
    CHECK(eqs[0]["equation"] == "ode7");
    CHECK(eqs[0]["pass"] == false);
    CHECK(double(eqs[0]["max_ratio"]) > 1e-3);

    TmpFile out2;
    int rc2 = run_cli({"derive-check", "--model", "example2", "--samples", "30", "--corrupt",
                       "V", "--out", out2.path});
    CHECK(rc2 == 1);
    json j2 = out2.parse();
    CHECK(j2["summary"]["pass"] == false);
    bool eq27_failed = false;
    for (const auto& e : j2["summary"]["equations"])
        if (e["equation"] == "eq27" && e["pass"] == false &&
            double(e["max_ratio"]) > 1e-3)
            eq27_failed = true;
    CHECK(eq27_failed);
}

TEST_CASE("null-curve command") {
    TmpFile out;
    CHECK(run_cli({"null-curve", "--model", "example1", "--to", "x=1", "--out", out.path}) ==
          2);  // missing --start
    CHECK(run_cli({"null-curve", "--model", "example1", "--start",
                   "t=1.5707963267948966,x=0", "--to", "x=1", "--out", out.path}) ==
          2);  // start on the horizon margin

    int rc = run_cli({"null-curve", "--model", "example1", "--start",
                      "t=0.7853981633974483,x=0", "--to", "x=1", "--out", out.path});
    CHECK(rc == 0);
    json j = out.parse();
    CHECK(j["summary"]["halt_reason"] == "completed");
    CHECK(double(j["summary"]["final"]["x"]) == doctest::Approx(1.0).epsilon(1e-9));
    const double t_end = j["summary"]["final"]["t"];
    CHECK(std::sin(t_end) ==
          doctest::Approx(std::sin(0.7853981633974483) * std::exp(-1.0)).epsilon(1e-9));
    CHECK(j["results"]["samples"].size() == j["summary"]["samples"]);
    CHECK(j["results"]["samples"][0][0] == 0.0);
}

TEST_CASE("slice command flags degeneracy") {
    TmpFile out;
    int rc = run_cli({"slice", "--model", "example1", "--t", "3.141592653589793", "--out",
                      out.path});
    CHECK(rc == 0);
    json j = out.parse();
    CHECK(j["summary"]["degenerate"] == true);
    CHECK(j["summary"].contains("note"));

    TmpFile out2;
    int rc2 = run_cli({"slice", "--model", "example1", "--t", "1.5707963267948966", "--out",
                       out2.path});
    CHECK(rc2 == 0);
    json j2 = out2.parse();
    CHECK(j2["summary"]["degenerate"] == false);
    CHECK(j2["results"]["t"] == 1.5707963267948966);
    CHECK(j2["results"]["samples"].size() > 0);
    CHECK(j2["results"]["samples"][0].contains("g22"));
}

TEST_CASE("classify command") {
    TmpFile out;
    int rc = run_cli({"classify", "--model", "example3", "--locus", "x->0", "--at",
                      "t=0.7853981633974483,x=1,y=0,z=0", "--out", out.path});
    CHECK(rc == 0);
    json j = out.parse();
    CHECK(j["summary"]["kind"] == "essential");
    CHECK(j["results"]["kind"] == "essential");
    CHECK(j["results"]["locus"] == "x->0");
    CHECK(j["results"]["evidence"]["trace"].size() >= 3);

    CHECK(run_cli({"classify", "--model", "example3", "--out", out.path}) == 2);  // no locus
    CHECK(run_cli({"classify", "--model", "example3", "--locus", "x->0", "--at", "0,1,0,0",
                   "--out", out.path}) == 2);  // --at wants key=value tokens
}

TEST_CASE("scan csv output") {
    TmpFile out;
    int rc = run_cli({"scan", "--model", "example1", "--grid",
                      "t=0.4:1:2,x=0:1:2,y=0:1:2,z=0:0:1", "--format", "csv", "--out",
                      out.path});
    CHECK(rc == 0);
    std::istringstream is(out.read());
    std::string header;
    std::getline(is, header);
    CHECK(header ==
          "t,x,y,z,det,det_closed_rel_err,D1,D2,D3,D4,scale,ricci_ratio,riemann_ratio,"
          "kretschmann,kretschmann_ratio,pattern");
    int rows = 0;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 8);
}

TEST_CASE("seeded runs are byte-reproducible") {
    TmpFile a, b, c;
    const std::vector<std::string> common{"verify", "--model", "example2", "--samples", "40",
                                          "--threads", "2"};
    auto with = [&](const std::string& seed, const std::string& path) {
        std::vector<std::string> args = common;
        args.insert(args.end(), {"--seed", seed, "--out", path});
        return run_cli(args);
    };
    CHECK(with("123", a.path) == 0);
    CHECK(with("123", b.path) == 0);
    CHECK(with("124", c.path) == 0);
    CHECK(a.read() == b.read());
    CHECK(a.read() != c.read());
}

TEST_CASE("config file with flag override") {
    TmpFile cfg, out;
    {
        std::ofstream f(cfg.path);
        f << "model=example3\nseed=99\n";
    }
    int rc = run_cli({"verify", "--config", cfg.path, "--samples", "40", "--out", out.path});
    CHECK(rc == 0);
    json j = out.parse();
    CHECK(j["model"] == "example3");
    CHECK(j["config"]["seed"] == 99);

    TmpFile out2;
    int rc2 = run_cli({"verify", "--config", cfg.path, "--model", "example1", "--samples",
                       "40", "--out", out2.path});
    CHECK(rc2 == 0);
    CHECK(out2.parse()["model"] == "example1");
}

TEST_CASE("tightening a tolerance turns verification red, report still written") {
    TmpFile out;
    int rc = run_cli({"verify", "--model", "example1", "--samples", "30", "--ricci-tol",
                      "1e-20", "--out", out.path});
    CHECK(rc == 1);
    REQUIRE(out.exists());
    json j = out.parse();
    CHECK(j["summary"]["pass"] == false);
    const json* c = find_check(j, "ricci_vacuum");
    REQUIRE(c != nullptr);
    CHECK((*c)["pass"] == false);
}

TEST_CASE("help exits cleanly") {
    CHECK(run_cli({"--help"}) == 0);
}

}  // TEST_SUITE
