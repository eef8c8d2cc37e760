#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cli.hpp"
#include "confgas/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace confgas;
using cli::json;

namespace {

namespace fs = std::filesystem;

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / ("confgas_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

int run_binary(const std::string& args, const fs::path& err = {}) {
  std::string cmd = std::string(CONFGAS_BIN) + " " + args + " > /dev/null";
  cmd += err.empty() ? " 2> /dev/null" : " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("config layering and validation") {
  const auto cfg = cli::make_config("profile", {{"command", "profile"}, {"c", "1"}}, {{"x", "0:1:0.5"}});
  CHECK(cfg.params["c"] == "1");
  CHECK(cfg.params["x"] == "0:1:0.5");
  const auto o = cli::run(cfg);
  CHECK(o.primary == "c,x,R\n1,0,0.5\n1,0.5,0.158655253931\n1,1,0.0227501319482\n");
  CHECK_THROWS_AS(cli::make_config("profile", {{"bogus", 1}}, nullptr), ValidationError);
  CHECK_THROWS_AS(cli::make_config("profile", {{"command", "ward"}}, nullptr), ValidationError);
  CHECK_THROWS_AS(cli::make_config("nope", nullptr, nullptr), ValidationError);
  CHECK_THROWS_AS(cli::make_config("ward", {{"tolerances", {{"unknown", 1.0}}}}, nullptr), ValidationError);
  CHECK_THROWS_AS(cli::make_config("profile", {{"tail_column", "yes"}}, nullptr), ValidationError);
  CHECK_THROWS_AS(cli::run(cli::make_config("profile", nullptr, {{"x", ""}})), ValidationError);
  CHECK_THROWS_AS(cli::run(cli::make_config("profile", nullptr, {{"x", "3:1:1"}})), ValidationError);
  CHECK_THROWS_AS(cli::run(cli::make_config("profile", nullptr, {{"c", "-2"}})), ValidationError);
  CHECK_THROWS_AS(cli::run(cli::make_config("growth", nullptr, {{"potential", {{"family", "cubic"}}}})), ValidationError);
  CHECK_THROWS_AS(cli::run(cli::make_config("growth", nullptr, {{"potential", {{"family", "ginibre"}, {"p", 2}}}})),
                  ValidationError);
  CHECK_THROWS_AS(cli::run(cli::make_config("kernel", nullptr, {{"path", "other"}})), ValidationError);
}

TEST_CASE("profile heavy tail column") {
  const auto o = cli::run(cli::make_config("profile", nullptr, {{"c", "0"}, {"x", "5:20:1"}, {"tail_column", true}}));
  std::istringstream in(o.primary);
  std::string line;
  std::getline(in, line);
  CHECK(line == "c,x,R,four_x2_R");
  double last = 0.0;
  while (std::getline(in, line)) last = std::stod(line.substr(line.rfind(',') + 1));
  CHECK(std::abs(last - 1.0) < 0.08);
}

TEST_CASE("kernel command") {
  const auto o = cli::run(cli::make_config("kernel", nullptr, {{"n", "256,1024"}, {"c", "1"}, {"x", "-6,0,1"}}));
  CHECK(o.ok());
  CHECK(o.primary.rfind("n,c,x,R_n,R_limit,abs_diff\n", 0) == 0);
  CHECK(o.primary.find("\n1024,1,-6,1,1,") != std::string::npos);
  const auto radial = cli::run(cli::make_config(
      "kernel", nullptr,
      {{"n", "256"}, {"c", "2"}, {"x", "0"}, {"path", "radial"}, {"potential", {{"family", "monomial"}, {"p", 4}}}}));
  CHECK(radial.ok());
}

TEST_CASE("ward command") {
  const auto pass = cli::run(cli::make_config("ward", nullptr, nullptr));
  CHECK(pass.ok());
  CHECK(json::parse(pass.primary)["status"] == "pass");
  const auto perturbed = cli::run(cli::make_config("ward", nullptr, {{"perturb", "scale=1.1"}}));
  CHECK(json::parse(perturbed.primary)["status"] == "violation detected");
  CHECK(perturbed.ok());
  CHECK_THROWS_AS(cli::run(cli::make_config("ward", nullptr, {{"perturb", "wiggle"}})), ValidationError);
}

TEST_CASE("quasipoly and growth commands") {
  const auto w2 = cli::run(cli::make_config("quasipoly", nullptr, {{"n", "500"}, {"c", "1"}, {"j", "480"}, {"points", 11}}));
  CHECK(std::count(w2.primary.begin(), w2.primary.end(), '\n') == 12);
  const auto p1 = cli::run(cli::make_config("quasipoly", nullptr, {{"mode", "p1"}, {"n", "256,1024"}, {"c", "1"}}));
  CHECK(p1.ok());
  const auto g = cli::run(cli::make_config("growth", nullptr, nullptr));
  CHECK(g.ok());
  CHECK(g.primary.rfind("tau,rho_tau,mass_residual,growth_residual,rtau_residual\n0.25,0.5,", 0) == 0);
}

TEST_CASE("binary exit codes and determinism") {
  const fs::path dir = scratch();
  CHECK(run_binary("profile --c 1,10,inf --x -6:2:0.5") == 0);
  CHECK(run_binary("profile --x ''") == 2);
  CHECK(run_binary("profile --bogus 1") == 2);
  std::ofstream(dir / "bad.json") << R"({"command": "ward", "grid": 3})";
  CHECK(run_binary("ward --config " + (dir / "bad.json").string()) == 2);
  std::ofstream(dir / "broken.json") << R"({"command": )";
  CHECK(run_binary("ward --config " + (dir / "broken.json").string()) == 2);
  CHECK(run_binary("ward --perturb scale=1.1") == 0);

  // a tolerance tightened below the achievable value fails and names the check
  const fs::path err = dir / "err.txt";
  CHECK(run_binary("profile --x -6:0:1 --tol-override left_limit=-1", err) == 1);
  CHECK(slurp(err).find("FAIL left_limit") != std::string::npos);

  std::ofstream(dir / "mm.json") << R"({"command": "maxmod", "n": 200, "samples": 500, "seed": 5})";
  const std::string base = "maxmod --config " + (dir / "mm.json").string() + " --tol-override ks=1";
  CHECK(run_binary(base + " --out " + (dir / "a.csv").string()) == 0);
  CHECK(run_binary(base + " --out " + (dir / "b.csv").string()) == 0);
  CHECK(run_binary(base + " --seed 6 --out " + (dir / "c.csv").string()) == 0);
  const std::string a = slurp(dir / "a.csv");
  CHECK(a.rfind("replicate,omega\n0,", 0) == 0);
  CHECK(a == slurp(dir / "b.csv"));
  CHECK(a != slurp(dir / "c.csv"));
  const json summary = json::parse(slurp(dir / "a.csv.json"));
  CHECK(summary["n"] == 200);
  CHECK(summary["seed"] == 5);
  CHECK(summary.contains("ks_distance"));
  CHECK(summary["quantiles"].size() == 5);
  fs::remove_all(dir);
}
