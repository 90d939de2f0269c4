// Copyright 2026 The qsymm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qsymm/cli.hpp"
#include "qsymm/io.hpp"

namespace fs = std::filesystem;
using qsymm::io::Json;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = qsymm::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qsymm_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

Json read_json(const fs::path& p) { return Json::parse(slurp(p)); }

fs::path write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
  return p;
}

struct PresetEnv {
  PresetEnv() { setenv("QSYMM_PRESETS", QSYMM_TEST_PRESET_DIR, 1); unsetenv("QSYMM_OUT"); }
};
const PresetEnv preset_env;

}  // namespace

TEST_CASE("two-qubit-swap preset converges", "[cli]") {
  const auto out = scratch("swap");
  const auto r = run_cli({"symmetrize", "--preset", "two-qubit-swap", "--out", out.string()});
  REQUIRE(r.code == 0);
  const Json s = read_json(out / "summary.json");
  CHECK(s["converged"] == true);
  CHECK(s["final_V"].get<double>() < 1e-12);
  CHECK(s["generates_full_group"] == true);
  CHECK(fs::exists(out / "trajectory.csv"));
  CHECK(fs::exists(out / "final_state.json"));
}

TEST_CASE("disconnected preset reports the group failure", "[cli]") {
  const auto out = scratch("disc");
  const auto r = run_cli({"symmetrize", "--preset", "disconnected4", "--out", out.string()});
  REQUIRE(r.code == 0);
  const Json s = read_json(out / "summary.json");
  CHECK(s["generates_full_group"] == false);
  CHECK(s["converged"] == false);
  CHECK(s["final_dist_to_symm"].get<double>() > 0.1);
  CHECK(!s["warnings"].empty());
}

TEST_CASE("malformed JSON writes nothing", "[cli]") {
  const auto dir = scratch("bad");
  const auto cfg = write_file(dir / "cfg.json", "{\"generator\": ");
  const auto out = dir / "out";
  const auto r = run_cli({"symmetrize", "--config", cfg.string(), "--out", out.string()});
  CHECK(r.code == 2);
  CHECK(!fs::exists(out));
}

TEST_CASE("unknown keys and bad values are config errors", "[cli]") {
  const auto dir = scratch("unknown");
  const auto out = dir / "out";
  auto cfg = write_file(dir / "a.json", R"({
    "generator": {"layout": {"m": 2, "n": 2, "graph": "path"}, "auto_terms": {"rate": 1.0}},
    "initial_state": "maximally_mixed", "T": 1.0, "dt": 0.01, "colour": "blue"})");
  CHECK(run_cli({"symmetrize", "--config", cfg.string(), "--out", out.string()}).code == 2);
  CHECK(!fs::exists(out));

  cfg = write_file(dir / "b.json", R"({
    "generator": {"layout": {"m": 2, "n": 2, "graph": "path"}, "auto_terms": {"rate": 1.0}},
    "initial_state": "maximally_mixed", "T": 1.0, "dt": 0.5})");
  const auto r = run_cli({"symmetrize", "--config", cfg.string(), "--out", out.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("stability") != std::string::npos);
  CHECK(!fs::exists(out));

  CHECK(run_cli({"symmetrize"}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"symmetrize", "--preset", "no-such-preset"}).code == 2);
}

TEST_CASE("budget exceeded exit code", "[cli]") {
  const auto dir = scratch("budget");
  const auto cfg = write_file(dir / "c.json", R"({"m": 9, "p": 2, "mode": "exact-quantum"})");
  CHECK(run_cli({"estimate", "--config", cfg.string(), "--out", (dir / "o").string()}).code == 4);
  CHECK(!fs::exists(dir / "o"));
}

TEST_CASE("QSYMM_OUT overrides --out", "[cli]") {
  const auto a = scratch("env_a");
  const auto b = scratch("env_b");
  setenv("QSYMM_OUT", b.string().c_str(), 1);
  const auto r = run_cli({"symmetrize", "--preset", "two-qubit-swap", "--out", a.string()});
  unsetenv("QSYMM_OUT");
  REQUIRE(r.code == 0);
  CHECK(!fs::exists(a));
  CHECK(fs::exists(b / "summary.json"));
}

TEST_CASE("reruns are byte identical", "[cli]") {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  for (const auto& dir : {a, b}) {
    REQUIRE(run_cli({"symmetrize", "--preset", "path3-symmetrize", "--out", dir.string()}).code == 0);
  }
  for (const char* f : {"trajectory.csv", "final_state.json", "summary.json"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const auto c = scratch("det_c");
  const auto d = scratch("det_d");
  REQUIRE(run_cli({"estimate", "--preset", "estimate-mc", "--out", c.string(), "--threads", "1"}).code == 0);
  REQUIRE(run_cli({"estimate", "--preset", "estimate-mc", "--out", d.string(), "--threads", "3"}).code == 0);
  CHECK(slurp(c / "report.json") == slurp(d / "report.json"));
  CHECK(slurp(c / "trials.csv") == slurp(d / "trials.csv"));
}

TEST_CASE("estimate reports the closed-form variance", "[cli]") {
  const auto out = scratch("est");
  REQUIRE(run_cli({"estimate", "--preset", "estimate-mc", "--out", out.string()}).code == 0);
  const Json rep = read_json(out / "report.json");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", rep["paper_variance"].get<double>());
  CHECK(std::string(buf) == "0.8182");
  CHECK(rep["m"] == 100);
  CHECK(rep["p"] == 10);

  const auto ex = scratch("est_exact");
  REQUIRE(run_cli({"estimate", "--preset", "estimate-exact", "--out", ex.string()}).code == 0);
  CHECK(read_json(ex / "report.json")["pmf_max_abs_dev"].get<double>() < 1e-10);
}

TEST_CASE("lift output has monotone divergence and validates", "[cli]") {
  const auto out = scratch("lift");
  REQUIRE(run_cli({"lift", "--preset", "path3-lift", "--out", out.string()}).code == 0);
  std::ifstream is(out / "lifted.csv");
  const auto t = qsymm::io::read_csv(is);
  const auto d = t.column("D");
  REQUIRE(t.rows.size() > 2);
  for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i][d] <= t.rows[i - 1][d] + 1e-9);
  const auto r = run_cli({"validate", "--input", (out / "lifted.csv").string()});
  CHECK(r.code == 0);
  const Json s = read_json(out / "summary.json");
  if (s.contains("equivalence_max_error")) {
    CHECK(s["equivalence_max_error"].get<double>() < 1e-6);
  }
}

TEST_CASE("validate round trip", "[cli]") {
  const auto out = scratch("val");
  REQUIRE(run_cli({"symmetrize", "--preset", "path4-symmetrize", "--out", out.string()}).code == 0);
  auto r = run_cli({"validate", "--monotone-V", "--input", (out / "trajectory.csv").string(),
                    "--input", (out / "final_state.json").string()});
  CHECK(r.code == 0);

  const auto prep = scratch("val_prep");
  REQUIRE(run_cli({"prepare", "--preset", "stubborn2", "--out", prep.string()}).code == 0);
  CHECK(run_cli({"validate", "--input", (prep / "trajectory.csv").string(), "--input",
                 (prep / "fidelity.csv").string()})
            .code == 0);

  // Tamper with a trajectory: a negative eigenvalue must be caught.
  const auto bad = write_file(out / "bad.csv",
                              "t,trace_dev,min_eig,V,dVdt,dist_to_symm\n0,0,-0.5,0.1,0,0.1\n");
  r = run_cli({"validate", "--input", bad.string()});
  CHECK(r.code == 3);
  CHECK(r.out.find("FAILED") != std::string::npos);

  const auto bad_state = write_file(
      out / "bad_state.json",
      R"({"dim": 2, "entries": [[1.5, 0], [0, 0], [0, 0], [-0.5, 0]]})");
  CHECK(run_cli({"validate", "--input", bad_state.string()}).code == 3);
}

TEST_CASE("check subcommand", "[cli]") {
  const auto out = scratch("check_alt");
  REQUIRE(run_cli({"check", "--preset", "alternating3", "--out", out.string()}).code == 0);
  Json rep = read_json(out / "check.json");
  CHECK(rep["connectivity"]["pass"] == true);
  CHECK(rep["group"]["generates_full_group"] == true);
  CHECK(rep["evolution"]["final_dist_to_symm"].get<double>() < 1e-6);

  const auto broken = scratch("check_broken");
  REQUIRE(run_cli({"check", "--preset", "broken-connectivity3", "--out", broken.string()}).code == 0);
  rep = read_json(broken / "check.json");
  CHECK(rep["connectivity"]["pass"] == false);
  CHECK(rep["connectivity"]["failing_window"] == 0.0);
  CHECK(rep["connectivity"]["components"] == Json::parse("[[1,2],[3]]"));

  const auto lem = scratch("check_fixed");
  REQUIRE(run_cli({"check", "--preset", "check-path3", "--out", lem.string()}).code == 0);
  rep = read_json(lem / "check.json");
  CHECK(rep["fixed_points"]["all_agree"] == true);
  CHECK(rep["fixed_points"]["symmetrized_pass"] == true);
  for (const auto& e : rep["locality"]) CHECK(e["pass"] == true);
}

TEST_CASE("prepare preset reaches the target", "[cli]") {
  const auto out = scratch("prep3");
  REQUIRE(run_cli({"prepare", "--preset", "stubborn3-plus", "--out", out.string()}).code == 0);
  const Json s = read_json(out / "summary.json");
  CHECK(s["final_fidelity"].get<double>() > 0.999);
}

TEST_CASE("command line overrides", "[cli]") {
  const auto out = scratch("override");
  REQUIRE(run_cli({"symmetrize", "--preset", "two-qubit-swap", "--T", "1", "--dt", "0.05",
                   "--out", out.string()})
              .code == 0);
  std::ifstream is(out / "trajectory.csv");
  const auto t = qsymm::io::read_csv(is);
  CHECK(t.rows.back()[t.column("t")] == Catch::Approx(1.0));
}
