#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "slglue/json_io.hpp"

using namespace slglue;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult run_tool(const std::string& args) {
    const std::string cmd = std::string(SLGLUE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string text;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) text.append(buf, n);
    const int status = pclose(pipe);
    CliResult r;
    r.out = text;
    if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
    return r;
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("slglue_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

long count_lines(const std::string& text) {
    long n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("neck run emits the reference invariants deterministically") {
    const fs::path d1 = scratch_dir("neck1");
    const fs::path d2 = scratch_dir("neck2");
    CHECK(run_tool("neck --a 1,1,1 --out " + d1.string()).code == 0);
    CHECK(run_tool("neck --a 1,1,1 --out " + d2.string()).code == 0);

    const std::string t1 = read_text((d1 / "report.json").string());
    const std::string t2 = read_text((d2 / "report.json").string());
    CHECK(t1 == t2);

    const Json rep = read_json((d1 / "report.json").string());
    CHECK(rep["command"] == "neck");
    for (const auto& phi : rep["phi"])
        CHECK(phi["value"].get<double>() ==
              doctest::Approx(M_PI / 3.0).epsilon(1e-8));
    CHECK(rep["A"]["value"].get<double>() ==
          doctest::Approx(4.0 * M_PI).epsilon(1e-12));
    CHECK(rep["scaling"]["phase_invariance"]["value"].get<double>() <= 1e-8);
    CHECK(rep["scaling"]["A_dilation"]["value"].get<double>() <= 1e-8);
    CHECK(rep["scaling"]["c_plus_dilation"]["value"].get<double>() <= 1e-8);
    CHECK(rep["end_decay"]["slope_minus"]["value"].get<double>() ==
          doctest::Approx(-1.0).epsilon(0.1));
    CHECK(rep["end_decay"]["slope_plus"]["value"].get<double>() ==
          doctest::Approx(-1.0).epsilon(0.1));
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("config file parameters with command-line precedence") {
    const fs::path dir = scratch_dir("config");
    write_text((dir / "cfg.json").string(), "{\"a\": [0.7, 1.3, 2.1]}\n");
    CHECK(run_tool("neck --config " + (dir / "cfg.json").string() + " --out " +
                   (dir / "from_file").string())
              .code == 0);
    const Json file_rep = read_json((dir / "from_file" / "report.json").string());
    CHECK(file_rep["A"]["value"].get<double>() ==
          doctest::Approx(9.090327301803496).epsilon(1e-9));

    CHECK(run_tool("neck --config " + (dir / "cfg.json").string() +
                   " --a 1,1,1 --out " + (dir / "overridden").string())
              .code == 0);
    const Json flag_rep = read_json((dir / "overridden" / "report.json").string());
    CHECK(flag_rep["A"]["value"].get<double>() ==
          doctest::Approx(4.0 * M_PI).epsilon(1e-12));
    fs::remove_all(dir);
}

TEST_CASE("graph run solves the two-component matching") {
    const fs::path dir = scratch_dir("graph");
    CHECK(run_tool("graph --v1 2 --v2 3 --c 1.7 --rate -1 --out " + dir.string())
              .code == 0);
    const Json rep = read_json((dir / "report.json").string());
    CHECK(rep["constants"][0]["value"].get<double>() ==
          doctest::Approx(1.02).epsilon(1e-12));
    CHECK(rep["constants"][1]["value"].get<double>() ==
          doctest::Approx(-0.68).epsilon(1e-12));
    CHECK(rep["matching_residual"]["value"].get<double>() <= 1e-12);
    CHECK(std::abs(rep["volume_weighted_mean"]["value"].get<double>()) <= 1e-12);
    CHECK(rep["tree"] == true);
    fs::remove_all(dir);
}

TEST_CASE("ode run matches the closed form and validates growth") {
    const fs::path dir = scratch_dir("ode");
    CHECK(run_tool("ode --m 3 --t1 10 --out " + dir.string()).code == 0);
    const Json rep = read_json((dir / "report.json").string());
    CHECK(rep["max_rel_err"]["value"].get<double>() <= 1e-6);
    CHECK(rep["assumption"]["finite"] == true);
    CHECK(rep["schedule_slope"]["value"].get<double>() ==
          doctest::Approx(-1.0).epsilon(0.02));
    const std::string csv = read_text((dir / "summary.csv").string());
    CHECK(count_lines(csv) == 34);  // header + 33 rows
    fs::remove_all(dir);
}

TEST_CASE("glue run writes the mesh, the summary and the report") {
    const fs::path dir = scratch_dir("glue");
    CHECK(run_tool("glue --level 2 --out " + dir.string()).code == 0);
    const Json rep = read_json((dir / "report.json").string());
    const long samples = rep["samples"].get<long>();
    CHECK(samples == rep["expected_samples"].get<long>());
    CHECK(samples > 0);
    const double measured = rep["volumes"]["measured_total"]["value"].get<double>();
    const double target = rep["volumes"]["target_total"]["value"].get<double>();
    CHECK(measured == doctest::Approx(target).epsilon(1e-6));
    CHECK(rep["angle"]["sup_abs_theta_outside"]["value"].get<double>() <= 1e-12);
    CHECK(rep["angle"]["sup_abs_theta_band"]["value"].get<double>() > 1e-6);

    CHECK(count_lines(read_text((dir / "mesh.jsonl").string())) == samples);
    const std::string csv = read_text((dir / "summary.csv").string());
    CHECK(csv.rfind("region,samples,band_samples,volume", 0) == 0);
    CHECK(csv.find("\ntotal,") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("frozen projection run reports the balancing data") {
    const fs::path dir = scratch_dir("project");
    CHECK(run_tool("project --level 2 --freeze 1 --out " + dir.string()).code == 0);
    const Json rep = read_json((dir / "report.json").string());
    CHECK(rep["frozen"] == true);
    CHECK(rep["dteps2"]["value"].get<double>() == 0.0);
    CHECK(rep["Pi_w"]["value"].get<double>() > 0.0);
    CHECK(rep["band_integral_minus"]["value"].get<double>() < 0.0);
    CHECK(rep["band_integral_plus"]["value"].get<double>() > 0.0);
    CHECK(rep["halved"]["eps"]["value"].get<double>() ==
          doctest::Approx(0.025).epsilon(1e-15));
    CHECK(rep["sweep"]["log_eps"].size() == 2);
    fs::remove_all(dir);
}

TEST_CASE("norms run reports the admissibility checks") {
    const fs::path dir = scratch_dir("norms");
    CHECK(run_tool("norms --m 3 --with_field 0 --out " + dir.string()).code == 0);
    const Json rep = read_json((dir / "report.json").string());
    CHECK(rep["constants"]["ok"] == true);
    CHECK(rep["constants"]["checks"].size() == 5);
    CHECK(!rep.contains("field"));

    const fs::path dir2 = scratch_dir("norms_field");
    CHECK(run_tool("norms --m 3 --level 2 --budget 400 --out " + dir2.string())
              .code == 0);
    const Json rep2 = read_json((dir2 / "report.json").string());
    CHECK(rep2["field"]["sup"]["value"].get<double>() > 0.0);
    CHECK(rep2["field"]["spatial_seminorm"]["value"].get<double>() > 0.0);
    CHECK(rep2["field"]["temporal_seminorm"]["value"].get<double>() > 0.0);
    fs::remove_all(dir);
    fs::remove_all(dir2);
}

TEST_CASE("report verb aggregates runs and emits plot data") {
    const fs::path parent = scratch_dir("aggregate");
    CHECK(run_tool("neck --a 1,1,1 --out " + (parent / "run_neck").string()).code ==
          0);
    CHECK(run_tool("ode --m 3 --t1 10 --out " + (parent / "run_ode").string()).code ==
          0);
    CHECK(run_tool("report --out " + parent.string()).code == 0);
    const Json rep = read_json((parent / "report.json").string());
    CHECK(rep["command"] == "report");
    CHECK(rep["runs"].contains("run_neck"));
    CHECK(rep["runs"].contains("run_ode"));
    CHECK(rep["runs"]["run_neck"]["A"]["value"].get<double>() ==
          doctest::Approx(4.0 * M_PI).epsilon(1e-12));
    CHECK(fs::exists(parent / "plotdata_end_decay.csv"));
    CHECK(fs::exists(parent / "plotdata_schedule.csv"));
    CHECK(count_lines(read_text((parent / "plotdata_end_decay.csv").string())) == 10);
    fs::remove_all(parent);
}

TEST_CASE("failures exit with typed machine-readable errors") {
    const fs::path dir = scratch_dir("errors");
    const CliResult mismatch =
        run_tool("neck --a 1,1 --m 3 --out " + dir.string());
    CHECK(mismatch.code == 2);
    const Json err = Json::parse(mismatch.out);
    CHECK(err["error"]["type"] == "config");
    CHECK(err["error"]["exit_code"] == 2);

    const CliResult missing =
        run_tool("graph --file /nonexistent/graph.json --out " + dir.string());
    CHECK(missing.code == 2);
    CHECK(Json::parse(missing.out)["error"]["type"] == "config");

    const CliResult unknown = run_tool("neck --bogus 1 --out " + dir.string());
    CHECK(unknown.code == 2);

    const CliResult none = run_tool("");
    CHECK(none.code == 2);
    fs::remove_all(dir);
}
