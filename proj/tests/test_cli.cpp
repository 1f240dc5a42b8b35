#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

#include "hql/cli.hpp"
#include "hql/grid.hpp"

// HQL_CLI_PATH and HQL_SOURCE_DIR are injected by the build so the suite
// drives the real installed binary end to end.

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path test_root() {
    static const fs::path root =
        fs::temp_directory_path() / ("hql_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(root);
    return root;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = test_root() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const std::string& name, const std::string& content) {
    const fs::path path = test_root() / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    return path;
}

int run_cli(const std::string& args, const std::string& env_prefix = "") {
    const std::string cmd = env_prefix + std::string(HQL_CLI_PATH) + " " + args;
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -2;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSolveQuadratic = R"({
  "schema": "hql-config/1",
  "solve": {
    "grid": {"n": 2, "m": 9, "L": 1.0},
    "operator": "quotient21",
    "rhs": 1.0,
    "boundary": {"id": "aniso", "kind": "quadratic", "A": [3.0, 1.5]}
  }
})";

} // namespace

TEST_CASE("verify: shipped default config passes every suite") {
    const fs::path out = fresh_dir("verify_default");
    const std::string cfg = std::string(HQL_SOURCE_DIR) + "/configs/verify.json";
    CHECK(run_cli("verify --config " + cfg + " --out " + out.string()) ==
          hql::cli::kExitSuccess);

    const json summary = json::parse(slurp(out / "verify.json"));
    CHECK(summary.at("schema") == "hql-verify/1");
    CHECK(summary.at("pass") == true);
    REQUIRE(summary.at("properties").is_array());
    CHECK(summary.at("properties").size() >= 7);
    for (const json& prop : summary.at("properties")) {
        INFO(prop.at("name").get<std::string>());
        CHECK(prop.at("pass") == true);
        CHECK(prop.at("worst").get<double>() <= prop.at("tolerance").get<double>());
        CHECK(prop.at("samples").get<long>() > 0);
    }
}

TEST_CASE("verify: seed override is recorded and reruns are byte-identical") {
    const fs::path cfg = write_config("verify_small.json", R"({
      "schema": "hql-config/1",
      "seed": 11,
      "verify": {"n_min": 2, "n_max": 4, "samples": 300,
                 "duality_n": [2, 3], "duality_samples": 100,
                 "shift_samples": 30, "grid_samples": 5}
    })");

    const fs::path out1 = fresh_dir("verify_seed1");
    const fs::path out2 = fresh_dir("verify_seed2");
    CHECK(run_cli("verify --config " + cfg.string() + " --out " + out1.string() + " --seed 7") ==
          hql::cli::kExitSuccess);
    CHECK(run_cli("verify --config " + cfg.string() + " --out " + out2.string() + " --seed 7") ==
          hql::cli::kExitSuccess);

    const std::string a = slurp(out1 / "verify.json");
    CHECK(a == slurp(out2 / "verify.json"));
    CHECK(json::parse(a).at("seed") == 7);

    // Without the flag the config seed wins.
    const fs::path out3 = fresh_dir("verify_seed3");
    CHECK(run_cli("verify --config " + cfg.string() + " --out " + out3.string()) ==
          hql::cli::kExitSuccess);
    CHECK(json::parse(slurp(out3 / "verify.json")).at("seed") == 11);
}

TEST_CASE("verify: n=2 duality specialization passes") {
    const fs::path cfg = write_config("verify_n2.json", R"({
      "schema": "hql-config/1",
      "verify": {"n_min": 2, "n_max": 2, "samples": 500,
                 "duality_n": [2], "duality_samples": 300,
                 "shift_samples": 30, "grid_samples": 5}
    })");
    const fs::path out = fresh_dir("verify_n2");
    CHECK(run_cli("verify --config " + cfg.string() + " --out " + out.string()) ==
          hql::cli::kExitSuccess);
}

TEST_CASE("usage errors: malformed config, missing schema, missing section") {
    const fs::path out = fresh_dir("usage");

    const fs::path broken = write_config("broken.json", "{ this is not json");
    CHECK(run_cli("verify --config " + broken.string() + " --out " + out.string()) ==
          hql::cli::kExitUsage);
    CHECK_FALSE(fs::exists(out / "verify.json"));  // no partial output

    const fs::path no_schema = write_config("no_schema.json", R"({"seed": 1})");
    CHECK(run_cli("verify --config " + no_schema.string() + " --out " + out.string()) ==
          hql::cli::kExitUsage);

    const fs::path no_section = write_config("no_section.json", R"({
      "schema": "hql-config/1",
      "verify": {"samples": 10}
    })");
    CHECK(run_cli("solve --config " + no_section.string() + " --out " + out.string()) ==
          hql::cli::kExitUsage);

    CHECK(run_cli("verify --out " + out.string()) == hql::cli::kExitUsage);  // --config missing
    CHECK(run_cli("frobnicate --config x --out y") == hql::cli::kExitUsage);
    CHECK(run_cli("verify --config /nonexistent.json --out " + out.string()) ==
          hql::cli::kExitUsage);
}

TEST_CASE("solve: quadratic fixture writes solution, report, and plot") {
    const fs::path cfg = write_config("solve_quad.json", kSolveQuadratic);
    const fs::path out = fresh_dir("solve_quad");
    CHECK(run_cli("solve --config " + cfg.string() + " --out " + out.string()) ==
          hql::cli::kExitSuccess);

    const hql::grid::GridFunction u = hql::grid::load_grid_function(out / "solution.txt");
    CHECK(u.grid.dim() == 2);
    CHECK(u.grid.nodes_per_axis() == 9);
    double worst = 0.0;
    for (std::int64_t f = 0; f < u.grid.node_count(); ++f) {
        const Eigen::VectorXd x = u.grid.coords(u.grid.multi_index(f));
        const double expect = 0.5 * (3.0 * x(0) * x(0) + 1.5 * x(1) * x(1));
        worst = std::max(worst, std::abs(u.values(f) - expect));
    }
    CHECK(worst <= 1e-8);

    const json report = json::parse(slurp(out / "report.json"));
    CHECK(report.at("schema") == "hql-solve/1");
    CHECK(report.at("converged") == true);
    CHECK(report.at("final_residual").get<double>() <= 2e-10);
    CHECK(report.at("operator") == "quotient21");
    CHECK(report.at("boundary_id") == "aniso");

    const std::string svg = slurp(out / "residual.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("solve: identical config produces byte-identical artifacts") {
    const fs::path cfg = write_config("solve_repro.json", kSolveQuadratic);
    const fs::path out1 = fresh_dir("solve_repro1");
    const fs::path out2 = fresh_dir("solve_repro2");
    REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + out1.string()) == 0);
    REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + out2.string()) == 0);

    for (const char* name : {"solution.txt", "report.json", "residual.svg"}) {
        CHECK(slurp(out1 / name) == slurp(out2 / name));
    }
}

TEST_CASE("solve: invalid rhs is a domain error, hopeless data a solver failure") {
    const fs::path zero_rhs = write_config("solve_rhs0.json", R"({
      "schema": "hql-config/1",
      "solve": {
        "grid": {"n": 2, "m": 9, "L": 1.0},
        "rhs": 0.0,
        "boundary": {"id": "iso", "kind": "quadratic", "A": [2.0, 2.0]}
      }
    })");
    const fs::path out = fresh_dir("solve_fail");
    CHECK(run_cli("solve --config " + zero_rhs.string() + " --out " + out.string()) ==
          hql::cli::kExitDomain);

    // Mildly concave data solve via a boundary layer, so defeating the
    // solver from a config takes an extreme trace.
    const fs::path concave = write_config("solve_stagnate.json", R"({
      "schema": "hql-config/1",
      "solve": {
        "grid": {"n": 2, "m": 9, "L": 1.0},
        "rhs": 1.0,
        "boundary": {"id": "cliff", "kind": "quadratic", "A": [-400.0, -400.0]}
      }
    })");
    CHECK(run_cli("solve --config " + concave.string() + " --out " + out.string()) ==
          hql::cli::kExitSolver);
    CHECK_FALSE(fs::exists(out / "solution.txt"));  // failure leaves no artifacts
}

TEST_CASE("liouville: quadratic boundary data fit back to quadratics") {
    const fs::path cfg = write_config("liouville.json", R"({
      "schema": "hql-config/1",
      "liouville": {
        "grid": {"n": 2, "m": 9, "L": 1.0},
        "rhs": 1.0,
        "families": [
          {"id": "iso", "kind": "quadratic", "A": [2.0, 2.0]},
          {"id": "aniso", "kind": "quadratic", "A": [3.0, 1.5]},
          {"id": "tilted", "kind": "quadratic", "A": [3.0, 1.5], "b": [0.2, -0.1], "c": 0.3}
        ]
      }
    })");
    const fs::path out = fresh_dir("liouville");
    CHECK(run_cli("liouville --config " + cfg.string() + " --out " + out.string()) ==
          hql::cli::kExitSuccess);

    const json summary = json::parse(slurp(out / "liouville.json"));
    CHECK(summary.at("pass") == true);
    REQUIRE(summary.at("runs").size() == 3);
    for (const json& run : summary.at("runs")) {
        CHECK(run.at("pass") == true);
        CHECK(run.at("fit_residual").get<double>() <= 1e-8);
        CHECK(run.at("hessian_spread").get<double>() <= 1e-6);
    }
}

TEST_CASE("liouville: an empty family list is a usage error") {
    const fs::path cfg = write_config("liouville_empty.json", R"({
      "schema": "hql-config/1",
      "liouville": {
        "grid": {"n": 2, "m": 9, "L": 1.0},
        "families": []
      }
    })");
    const fs::path out = fresh_dir("liouville_empty");
    CHECK(run_cli("liouville --config " + cfg.string() + " --out " + out.string()) ==
          hql::cli::kExitUsage);
}

TEST_CASE("interior: a failing family is recorded and the batch survives") {
    const fs::path cfg = write_config("interior_fail.json", R"({
      "schema": "hql-config/1",
      "interior": {
        "n": 2,
        "resolutions": [9],
        "families": [
          {"id": "bad", "kind": "quadratic", "A": [-400.0, -400.0]},
          {"id": "good", "kind": "quadratic", "A": [2.0, 2.0]}
        ]
      }
    })");
    const fs::path out = fresh_dir("interior_fail");
    CHECK(run_cli("interior --config " + cfg.string() + " --out " + out.string()) ==
          hql::cli::kExitSolver);

    const std::string csv = slurp(out / "interior.csv");
    CHECK(csv.find("bad_m9") != std::string::npos);
    CHECK(csv.find("good_m9") != std::string::npos);
    CHECK(csv.find("nan") != std::string::npos);

    const json summary = json::parse(slurp(out / "interior.json"));
    CHECK(summary.at("all_ok") == false);
    REQUIRE(summary.at("runs").size() == 2);
    CHECK(summary.at("runs")[0].at("ok") == false);
    CHECK(summary.at("runs")[0].contains("failure"));
    CHECK(summary.at("runs")[1].at("ok") == true);

    CHECK(fs::exists(out / "interior.svg"));
}

TEST_CASE("interior: byte-identical across reruns and worker counts") {
    const fs::path cfg = write_config("interior_repro.json", R"({
      "schema": "hql-config/1",
      "interior": {
        "batches": [
          {"n": 2, "resolutions": [9, 17],
           "families": [
             {"id": "iso", "kind": "quadratic", "A": [2.0, 2.0]},
             {"id": "cos", "kind": "cosine", "base": 2.0, "eps": 0.1}
           ]},
          {"n": 3, "resolutions": [9],
           "families": [{"id": "iso3", "kind": "quadratic", "A": [1.0, 1.0, 1.0]}]}
        ]
      }
    })");
    const fs::path out1 = fresh_dir("interior_repro1");
    const fs::path out2 = fresh_dir("interior_repro2");
    const fs::path out3 = fresh_dir("interior_repro3");
    REQUIRE(run_cli("interior --config " + cfg.string() + " --out " + out1.string()) == 0);
    REQUIRE(run_cli("interior --config " + cfg.string() + " --out " + out2.string()) == 0);
    REQUIRE(run_cli("interior --config " + cfg.string() + " --out " + out3.string(),
                    "HQL_THREADS=3 ") == 0);

    for (const char* name : {"interior.csv", "interior.json", "interior.svg"}) {
        const std::string base = slurp(out1 / name);
        CHECK(base == slurp(out2 / name));
        CHECK(base == slurp(out3 / name));
    }

    // The combined batch reports runs in config order.
    const std::string csv = slurp(out1 / "interior.csv");
    const auto iso_pos = csv.find("iso_m9");
    const auto cos_pos = csv.find("cos_m9");
    const auto iso3_pos = csv.find("iso3_m9");
    CHECK(iso_pos != std::string::npos);
    CHECK(cos_pos != std::string::npos);
    CHECK(iso3_pos != std::string::npos);
    CHECK(iso_pos < cos_pos);
    CHECK(cos_pos < iso3_pos);
}
