// Copyright 2026 the lotsplit project
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

#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "lotsplit/lp.hpp"
#include "lotsplit/milp.hpp"
#include "test_support.hpp"

using namespace lotsplit;

namespace {

LpRow row(std::vector<long> coeffs, Sense sense, long rhs) {
  LpRow r;
  for (long c : coeffs) r.coeffs.emplace_back(c);
  r.sense = sense;
  r.rhs = rhs;
  return r;
}

}  // namespace

TEST_CASE("minimize over a single lower bound") {
  LinearProgram lp;
  lp.objective = {Rat(1)};
  lp.bounds = {VarBounds{Rat(3), std::nullopt}};
  LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.point[0] == 3);
  CHECK(sol.value == 3);
  CHECK(verify_certificate(lp, sol));

  // same optimum when the bound is written as a row
  LinearProgram lp2;
  lp2.objective = {Rat(1)};
  lp2.bounds = {VarBounds{Rat(0), std::nullopt}};
  lp2.rows = {row({1}, Sense::kGe, 3)};
  LpSolution sol2 = lp_solve(lp2);
  REQUIRE(sol2.status == LpStatus::kOptimal);
  CHECK(sol2.value == 3);
  CHECK(verify_certificate(lp2, sol2));
}

TEST_CASE("contradictory rows are infeasible with a Farkas certificate") {
  LinearProgram lp;
  lp.objective = {Rat(0)};
  lp.bounds = {VarBounds{Rat(0), std::nullopt}};
  lp.rows = {row({1}, Sense::kLe, 1), row({1}, Sense::kGe, 2)};
  LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::kInfeasible);
  REQUIRE(sol.farkas.size() == 2);
  CHECK(verify_certificate(lp, sol));
}

TEST_CASE("unbounded objective yields a verified ray") {
  LinearProgram lp;
  lp.objective = {Rat(-1)};
  lp.bounds = {VarBounds{Rat(0), std::nullopt}};
  LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::kUnbounded);
  CHECK(verify_certificate(lp, sol));
}

TEST_CASE("root relaxation of the n=2 hard instance") {
  LinearProgram lp = build_milp(hard_instance(2)).lp;
  LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.value == make_rat(9, 2));
  CHECK(sol.value < hard_opt_formula(2));
  CHECK(verify_certificate(lp, sol));

  auto oracle = lotsplit_test::vertex_enum_optimum(lp);
  REQUIRE(oracle);
  CHECK(*oracle == sol.value);
}

TEST_CASE("with_extra_rows") {
  LinearProgram root = build_milp(hard_instance(2)).lp;

  SECTION("adding no rows changes nothing") {
    LinearProgram same = with_extra_rows(root, {});
    CHECK(same.num_rows() == root.num_rows());
    CHECK(lp_solve(same).value == lp_solve(root).value);
  }

  SECTION("forcing y1 to zero on n=1 is infeasible") {
    LinearProgram lp1 = build_milp(hard_instance(1)).lp;
    LinearProgram cut = with_extra_rows(lp1, {row({0, 1}, Sense::kLe, 0)});
    LpSolution sol = lp_solve(cut);
    REQUIRE(sol.status == LpStatus::kInfeasible);
    CHECK(verify_certificate(cut, sol));
    CHECK(lp1.num_rows() == 2);  // original untouched
  }

  SECTION("forcing both setups on n=2 gives the integral cost") {
    LinearProgram forced =
        with_extra_rows(root, {row({0, 0, 1, 1}, Sense::kGe, 2)});
    LpSolution sol = lp_solve(forced);
    REQUIRE(sol.status == LpStatus::kOptimal);
    CHECK(sol.value == 5);
    CHECK(verify_certificate(forced, sol));
  }

  SECTION("dimension mismatch throws") {
    CHECK_THROWS_AS(with_extra_rows(root, {row({1, 0}, Sense::kLe, 0)}),
                    std::invalid_argument);
  }
}

TEST_CASE("lp_solve rejects malformed programs") {
  LinearProgram lp;
  lp.objective = {Rat(1), Rat(2)};
  lp.bounds = {VarBounds{Rat(0), std::nullopt}};
  CHECK_THROWS_AS(lp_solve(lp), std::invalid_argument);

  LinearProgram lp2;
  lp2.objective = {Rat(1)};
  lp2.bounds = {VarBounds{Rat(2), Rat(1)}};
  CHECK_THROWS_AS(lp_solve(lp2), std::invalid_argument);
}

TEST_CASE("tampered certificates are rejected") {
  LinearProgram lp = build_milp(hard_instance(3)).lp;
  LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  REQUIRE(verify_certificate(lp, sol));

  LpSolution bad_point = sol;
  bad_point.point[0] += 1;
  CHECK_FALSE(verify_certificate(lp, bad_point));

  LpSolution bad_value = sol;
  bad_value.value += make_rat(1, 7);
  CHECK_FALSE(verify_certificate(lp, bad_value));

  LpSolution bad_dual = sol;
  bool flipped = false;
  for (Rat& y : bad_dual.duals) {
    if (y != 0) {
      y = -y;
      flipped = true;
      break;
    }
  }
  REQUIRE(flipped);
  CHECK_FALSE(verify_certificate(lp, bad_dual));

  LpSolution wrong_status = sol;
  wrong_status.status = LpStatus::kInfeasible;
  wrong_status.farkas = sol.duals;
  CHECK_FALSE(verify_certificate(lp, wrong_status));
}

TEST_CASE("solver is deterministic") {
  LinearProgram lp = build_milp(hard_instance(4)).lp;
  LpSolution a = lp_solve(lp);
  LpSolution b = lp_solve(lp);
  CHECK(a.point == b.point);
  CHECK(a.duals == b.duals);
  CHECK(a.value == b.value);
}

TEST_CASE("degenerate equalities solve cleanly") {
  // x1 + x2 = 1 twice over, plus a redundant inequality
  LinearProgram lp;
  lp.objective = {Rat(2), Rat(3)};
  lp.bounds = {VarBounds{Rat(0), std::nullopt}, VarBounds{Rat(0), std::nullopt}};
  lp.rows = {row({1, 1}, Sense::kEq, 1), row({1, 1}, Sense::kEq, 1),
             row({1, 1}, Sense::kGe, 1)};
  LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.value == 2);
  CHECK(verify_certificate(lp, sol));
}

TEST_CASE("random tiny LPs agree with vertex enumeration") {
  std::mt19937_64 rng(91);
  int optimal_seen = 0;
  int infeasible_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    LinearProgram lp = lotsplit_test::random_tiny_lp(rng);
    LpSolution sol = lp_solve(lp);
    CHECK(verify_certificate(lp, sol));
    auto oracle = lotsplit_test::vertex_enum_optimum(lp);
    if (sol.status == LpStatus::kOptimal) {
      ++optimal_seen;
      REQUIRE(oracle);
      CHECK(*oracle == sol.value);
    } else {
      REQUIRE(sol.status == LpStatus::kInfeasible);  // boxed: never unbounded
      ++infeasible_seen;
      CHECK_FALSE(oracle);
    }
  }
  CHECK(optimal_seen > 0);
  CHECK(infeasible_seen > 0);
}
