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

#include <sstream>

#include "qsymm/errors.hpp"
#include "qsymm/io.hpp"
#include "qsymm/random.hpp"

using namespace qsymm;
using io::Json;

TEST_CASE("matrix json round trip", "[io]") {
  Rng rng(51);
  const ComplexMatrix a = random_ginibre(3, 3, rng);
  const Json j = io::matrix_to_json(a);
  CHECK(j["dim"] == 3);
  CHECK(io::matrix_from_json(Json::parse(j.dump())) == a);
  CHECK_THROWS_AS(io::matrix_from_json(Json{{"dim", 2}, {"entries", {{{1, 0}}}}}), ConfigError);
}

TEST_CASE("unknown keys are rejected", "[io]") {
  CHECK_THROWS_AS(io::require_keys(Json{{"a", 1}, {"b", 2}}, {"a"}, "ctx"), ConfigError);
  CHECK_NOTHROW(io::require_keys(Json{{"a", 1}}, {"a", "b"}, "ctx"));
}

TEST_CASE("schedule json", "[io]") {
  const auto s = io::schedule_from_json(Json::parse(
      R"({"breakpoints": [1.0], "values": [1.0, 0.0], "period": 2.0})"));
  CHECK(s.value_at(2.5) == 1.0);
  CHECK(io::schedule_from_json(Json(0.5)).value_at(3.0) == 0.5);
  const auto back = io::schedule_from_json(io::schedule_to_json(s));
  CHECK(back.breakpoints() == s.breakpoints());
  CHECK(back.values() == s.values());
  CHECK(back.period() == s.period());
  CHECK_THROWS_AS(io::schedule_from_json(Json::parse(R"({"values": [1], "oops": 1})")),
                  ConfigError);
}

TEST_CASE("generator json", "[io]") {
  const Json j = Json::parse(R"({
    "layout": {"m": 3, "n": 2, "graph": "path"},
    "terms": [{"perm": [2, 1, 3], "schedule": {"breakpoints": [], "values": [1.0]}, "neighborhood": 0}],
    "local": {"j": 2, "target_state": [[1, 0], [0, 0]]}
  })");
  const auto g = io::generator_from_json(j);
  CHECK(g.unitary.terms.size() == 1);
  REQUIRE(g.local.has_value());
  CHECK(g.local->j == 2);
  const auto h = g.build();
  CHECK(h.has_general_part());
  const auto again = io::generator_from_json(io::generator_to_json(g));
  CHECK(again.unitary.terms.size() == 1);
  CHECK(again.local->target == g.local->target);

  const auto autoj = io::generator_from_json(Json::parse(
      R"({"layout": {"m": 4, "n": 2, "graph": "path"}, "auto_terms": {"rate": 0.5}})"));
  CHECK(autoj.unitary.terms.size() == 3);

  CHECK_THROWS_AS(io::generator_from_json(Json::parse(
                      R"({"layout": {"m": 2, "n": 2}, "terms": [], "bogus": 1})")),
                  ConfigError);
  CHECK_THROWS_AS(io::generator_from_json(Json::parse(
                      R"({"layout": {"m": 2, "n": 2, "graph": "path"},
                          "terms": [{"perm": [1, 1], "schedule": 1.0, "neighborhood": 0}]})")),
                  Error);
}

TEST_CASE("initial states from json", "[io]") {
  const auto l = NetworkLayout::path(2, 2);
  CHECK(io::initial_state_from_json(Json("maximally_mixed"), l).matrix() ==
        ComplexMatrix::Identity(4, 4) / 4.0);
  CHECK(io::initial_state_from_json(Json::parse(R"({"basis": [1, 0]})"), l).matrix()(2, 2) ==
        Complex(1.0));
  CHECK_THROWS_AS(io::initial_state_from_json(Json("nonsense"), l), ConfigError);
  CHECK_THROWS_AS(
      io::initial_state_from_json(
          Json{{"matrix", io::matrix_to_json(ComplexMatrix::Identity(4, 4))}}, l),
      ConfigError);
}

TEST_CASE("csv writing and reading", "[io]") {
  Trajectory traj;
  traj.times = {0.0, 0.5};
  traj.diagnostics = {{0.0, 0.1, 0.25, -0.5, 0.7}, {1e-17, 0.2, 0.125, -0.25, 0.35}};
  std::ostringstream os;
  io::write_trajectory_csv(os, traj);
  std::istringstream is(os.str());
  const auto t = io::read_csv(is);
  CHECK(t.header == std::vector<std::string>{"t", "trace_dev", "min_eig", "V", "dVdt",
                                             "dist_to_symm"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][t.column("trace_dev")] == 1e-17);
  CHECK(t.rows[1][t.column("V")] == 0.125);
  CHECK_THROWS_AS(t.column("missing"), ConfigError);
  CHECK(io::format_double(0.1) == "0.10000000000000001");
}
