#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "dqlin/models.hpp"

using namespace dqlin;
using namespace dqlin::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("dqlin_cli_" + std::to_string(::getpid()) + "_" + tag);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::string& cmd, const RunConfig& c) {
  std::ostringstream o, e;
  const int code = run_command(cmd, c, {&o, &e});
  return {code, o.str(), e.str()};
}

// (t, re) rows of a t,re,im csv
std::vector<std::pair<double, double>> series(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  REQUIRE(line == "t,re,im");
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    double t, re, im;
    char c1, c2;
    std::istringstream ls(line);
    ls >> t >> c1 >> re >> c2 >> im;
    rows.emplace_back(t, re);
  }
  return rows;
}

}  // namespace

TEST_CASE("config: defaults, overrides and rejection of bad input") {
  const RunConfig d = load_config("", {});
  CHECK(d.model == "damped_oscillator");
  CHECK(d.hbar() == 1.0);
  CHECK(d.time_grid().size() == static_cast<std::size_t>(d.samples));

  const RunConfig o = load_config(R"({"time": {"t_max": 2.0}})", {"time.samples=5", "model.parameters.alpha=0.3"});
  CHECK(o.t_max == 2.0);
  CHECK(o.samples == 5);
  CHECK(o.parameters.at("alpha") == 0.3);
  CHECK(o.time_grid().back() == 2.0);
  CHECK(o.resolved["time"]["samples"] == 5);

  CHECK_THROWS_AS(load_config(R"({"tme": {}})", {}), ConfigError);
  CHECK_THROWS_AS(load_config(R"({"time": {"t_max": "long"}})", {}), ConfigError);
  CHECK_THROWS_AS(load_config("", {"state.bogus=1"}), ConfigError);
  CHECK_THROWS_AS(load_config("{\"time\": ", {}), ConfigError);
  try {
    load_config(R"({"time": {"t_mx": 1}})", {});
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("time.t_mx") != std::string::npos);
  }
}

TEST_CASE("spectrum tables") {
  const fs::path dir = scratch("spec");
  {
    RunConfig c = load_config("", {"output.dir=\"" + dir.string() + "\""});
    const Run r = run("spectrum", c);
    CHECK(r.code == kOk);
    CHECK(slurp(dir / "spectrum.csv") == "n,E\n0,0.5\n1,1.5\n2,2.5\n3,3.5\n");
    CHECK(fs::exists(dir / "manifest_spectrum.json"));
  }
  {
    RunConfig c = load_config(R"({"model": {"name": "magnetic_charge", "parameters": {"A": 0.0, "B": 2.0}},
                                  "spectrum": {"n_max": 1, "l_max": 1}})",
                              {"output.dir=\"" + dir.string() + "\""});
    CHECK(run("spectrum", c).code == kOk);
    // E = hbar B (n + 1/2), M = hbar (l - n)
    CHECK(slurp(dir / "spectrum.csv") == "n,l,E,M\n0,0,1,0\n0,1,1,1\n1,0,3,-1\n1,1,3,0\n");
  }
  fs::remove_all(dir);
}

TEST_CASE("simulate: t_max = 0 gives one row equal to the level energy") {
  const fs::path dir = scratch("t0");
  RunConfig c = load_config("", {"time.t_max=0", "time.samples=1", "state.n=2", "output.dir=\"" + dir.string() + "\""});
  REQUIRE(run("simulate", c).code == kOk);
  const auto rows = series(dir / "H.csv");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].first == 0.0);
  CHECK(rows[0].second == doctest::Approx(2.5).epsilon(1e-12));
  fs::remove_all(dir);
}

TEST_CASE("simulate: energy decays at the model rate and output is deterministic") {
  const fs::path a = scratch("a"), b = scratch("b");
  const std::vector<std::string> common{"time.t_max=6", "time.samples=13", "model.parameters.alpha=0.15"};
  auto with = [&](const fs::path& d) {
    auto o = common;
    o.push_back("output.dir=\"" + d.string() + "\"");
    return load_config("", o);
  };
  REQUIRE(run("simulate", with(a)).code == kOk);
  REQUIRE(run("simulate", with(b)).code == kOk);
  CHECK(slurp(a / "H.csv") == slurp(b / "H.csv"));
  const auto rows = series(a / "H.csv");
  REQUIRE(rows.size() == 13);
  for (const auto& [t, v] : rows) CHECK(std::log(v / rows[0].second) == doctest::Approx(-0.3 * t).epsilon(1e-8).scale(1));
  CHECK(fs::exists(a / "manifest.json"));
  fs::remove_all(a);
  fs::remove_all(b);

  const fs::path m = scratch("mag");
  RunConfig mc = load_config(R"({"model": {"name": "magnetic_charge"}, "state": {"n": 0, "l": 1},
                                 "time": {"t_max": 4.0, "samples": 9}, "observables": ["H"]})",
                             {"output.dir=\"" + m.string() + "\""});
  REQUIRE(run("simulate", mc).code == kOk);
  const double A = build_magnetic_charge(1.0, 1.0, 1.0).parameters.at("A");
  const auto mr = series(m / "H.csv");
  REQUIRE(mr.size() == 9);
  for (const auto& [t, v] : mr) CHECK(std::log(v / mr[0].second) == doctest::Approx(2 * A * t).epsilon(1e-8).scale(1));
  fs::remove_all(m);
}

TEST_CASE("verify: passes on defaults, fault injection trips only the physics checks") {
  const fs::path dir = scratch("verify");
  const std::vector<std::string> small{"time.t_max=4", "time.samples=5", "verify.samples=4",
                                       "output.dir=\"" + dir.string() + "\""};
  {
    const Run r = run("verify", load_config("", small));
    CHECK(r.code == kOk);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(fs::exists(dir / "verify_report.json"));
  }
  {
    auto o = small;
    o.push_back("fault_injection.star_hbar_scale=1.5");
    const Run r = run("verify", load_config("", o));
    CHECK(r.code == kInvariantFailure);
    CHECK(r.out.find("FAIL eigenstate_energy") != std::string::npos);
    CHECK(r.out.find("PASS star_associativity") != std::string::npos);
  }
  {
    auto o = small;
    o.push_back("omega0.scale=2.5");
    CHECK(run("verify", load_config("", o)).code == kOk);
  }
  fs::remove_all(dir);
}

TEST_CASE("run_command exit codes") {
  const fs::path dir = scratch("codes");
  RunConfig c = load_config("", {"output.dir=\"" + dir.string() + "\""});
  CHECK(run("frobnicate", c).code == kConfigError);
  CHECK(run("models", c).code == kOk);
  // range checks happen at model construction and still map to a config error
  CHECK(run("spectrum", load_config("", {"model.parameters.alpha=2.0"})).code == kConfigError);
  RunConfig bad = load_config("", {"observables=[\"nope\"]", "output.dir=\"" + dir.string() + "\""});
  const Run r = run("simulate", bad);
  CHECK(r.code == kConfigError);
  CHECK_FALSE(r.err.empty());
  fs::remove_all(dir);
}
