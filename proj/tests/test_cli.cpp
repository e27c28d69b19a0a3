#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string cli_path() {
  const char* p = std::getenv("AUGARCH_CLI");
  REQUIRE(p != nullptr);
  return p;
}

int run_cli(const std::string& args) {
  const int rc = std::system((cli_path() + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("augarch_cli_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("describe subcommand") {
  CHECK(run_cli("describe garch") == 0);
  CHECK(run_cli("describe nosuch") == 1);
}

TEST_CASE("simulate on the iid model yields unit volatility in the CSV") {
  const fs::path dir = fresh_dir("simulate_iid");
  write_file(dir / "cfg.json", R"({
    "model": {"family": "iid"},
    "experiment": {"kind": "simulate", "n": 10},
    "seed": 3,
    "output": ")" + (dir / "out").string() + R"("
  })");
  REQUIRE(run_cli("run --config " + (dir / "cfg.json").string()) == 0);
  std::ifstream csv(dir / "out" / "path.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "k,eps,lambda_sigma2,sigma2,y");
  int rows = 0;
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string field;
    for (int i = 0; i <= 3; ++i) std::getline(ss, field, ',');
    CHECK(field == "1");  // sigma2 column
    ++rows;
  }
  CHECK(rows == 10);
}

TEST_CASE("conditions experiment reports the garch verdicts") {
  const fs::path dir = fresh_dir("conditions_garch");
  write_file(dir / "cfg.json", R"({
    "model": {"family": "garch", "params": {"omega": 0.1, "alpha": 0.1, "beta": 0.8}},
    "experiment": {"kind": "conditions", "nu": 1.0, "mu": 1.0},
    "seed": 5,
    "output": ")" + (dir / "out").string() + R"("
  })");
  REQUIRE(run_cli("conditions --config " + (dir / "cfg.json").string()) == 0);
  const json report = json::parse(slurp(dir / "out" / "report.json"));
  bool eq5_holds = false;
  bool eq10_holds = false;
  for (const auto& r : report.at("reports")) {
    if (r.at("condition") == "EQ5") eq5_holds = r.at("verdict") == "holds";
    if (r.at("condition") == "EQ10") eq10_holds = r.at("verdict") == "holds";
  }
  CHECK(eq5_holds);
  CHECK(eq10_holds);
  CHECK(fs::exists(dir / "out" / "conditions.csv"));
  CHECK(fs::exists(dir / "out" / "manifest.json"));
}

TEST_CASE("clt on igarch with f = id refuses with exit code 2") {
  const fs::path dir = fresh_dir("clt_igarch");
  write_file(dir / "cfg.json", R"({
    "model": {"family": "igarch", "params": {"omega": 0.1, "alpha": 0.2}},
    "transform": {"kind": "signed-power", "nu": 1.0},
    "experiment": {"kind": "clt", "n": 200, "reps": 100},
    "seed": 5,
    "output": ")" + (dir / "out").string() + R"("
  })");
  CHECK(run_cli("clt --config " + (dir / "cfg.json").string()) == 2);
  const json report = json::parse(slurp(dir / "out" / "report.json"));
  CHECK(report.at("refused") == true);
}

TEST_CASE("invalid configs exit 1 with a diagnostic") {
  const fs::path dir = fresh_dir("invalid");
  write_file(dir / "unknown_key.json", R"({
    "model": {"family": "iid"},
    "experiment": {"kind": "simulate", "n": 4},
    "bogus": 1,
    "output": ")" + (dir / "out").string() + R"("
  })");
  CHECK(run_cli("run --config " + (dir / "unknown_key.json").string()) == 1);
  write_file(dir / "no_model.json", R"({
    "experiment": {"kind": "simulate", "n": 4}
  })");
  CHECK(run_cli("run --config " + (dir / "no_model.json").string()) == 1);
  write_file(dir / "kind_conflict.json", R"({
    "model": {"family": "iid"},
    "experiment": {"kind": "simulate", "n": 4}
  })");
  CHECK(run_cli("couple --config " + (dir / "kind_conflict.json").string()) == 1);
  CHECK(run_cli("run --config " + (dir / "missing.json").string()) == 1);
}

TEST_CASE("byte-identical outputs for any worker count") {
  const fs::path dir = fresh_dir("determinism");
  const std::string cfg = R"({
    "model": {"family": "garch", "params": {"omega": 0.1, "alpha": 0.1, "beta": 0.8}},
    "transform": {"kind": "power-abs", "nu": 1.0},
    "experiment": {"kind": "l2decay", "m_list": [1, 2, 4, 6], "reps": 4000, "depth": 64},
    "seed": 99,
    "output": "PLACEHOLDER"
  })";
  write_file(dir / "cfg.json", cfg);
  REQUIRE(run_cli("l2decay --config " + (dir / "cfg.json").string() + " --workers 1 --out " +
                  (dir / "w1").string()) == 0);
  REQUIRE(run_cli("l2decay --config " + (dir / "cfg.json").string() + " --workers 3 --out " +
                  (dir / "w3").string()) == 0);
  CHECK(slurp(dir / "w1" / "l2decay.csv") == slurp(dir / "w3" / "l2decay.csv"));
  const json m1 = json::parse(slurp(dir / "w1" / "manifest.json"));
  const json m3 = json::parse(slurp(dir / "w3" / "manifest.json"));
  CHECK(m1.at("outputs") == m3.at("outputs"));
}

TEST_CASE("effective config echo reproduces the run") {
  const fs::path dir = fresh_dir("echo");
  write_file(dir / "cfg.json", R"({
    "model": {"family": "garch", "params": {"omega": 0.1, "alpha": 0.1, "beta": 0.8}},
    "experiment": {"kind": "simulate", "n": 50},
    "seed": 11,
    "output": ")" + (dir / "out1").string() + R"("
  })");
  REQUIRE(run_cli("run --config " + (dir / "cfg.json").string()) == 0);
  const json manifest = json::parse(slurp(dir / "out1" / "manifest.json"));
  write_file(dir / "echo.json", manifest.at("config").dump());
  REQUIRE(run_cli("run --config " + (dir / "echo.json").string() + " --out " +
                  (dir / "out2").string()) == 0);
  CHECK(slurp(dir / "out1" / "path.csv") == slurp(dir / "out2" / "path.csv"));
}

TEST_CASE("couple experiment emits the coupled columns and a tiny identity gap") {
  const fs::path dir = fresh_dir("couple");
  write_file(dir / "cfg.json", R"({
    "model": {"family": "garch", "params": {"omega": 0.1, "alpha": 0.1, "beta": 0.8}},
    "experiment": {"kind": "couple", "n": 200, "m": 5},
    "seed": 17,
    "output": ")" + (dir / "out").string() + R"("
  })");
  REQUIRE(run_cli("couple --config " + (dir / "cfg.json").string()) == 0);
  std::ifstream csv(dir / "out" / "coupled_path.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "k,eps,lambda_sigma2,sigma2,y,y_m,residual");
  const json report = json::parse(slurp(dir / "out" / "report.json"));
  CHECK(report.at("residual_identity_gap").get<double>() <= 1e-10);
}
