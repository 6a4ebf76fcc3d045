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
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "lotsplit/lotsizing.hpp"
#include "lotsplit/milp.hpp"
#include "test_support.hpp"

using namespace lotsplit;

namespace {

std::vector<Rat> rats(const std::vector<long>& v) {
  std::vector<Rat> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

Solution sol(const std::vector<Rat>& x, const std::vector<Rat>& y) {
  return Solution{x, y};
}

}  // namespace

TEST_CASE("hard_instance matches the closed family") {
  Instance i3 = hard_instance(3);
  CHECK(i3.p == rats({3, 2, 1}));
  CHECK(i3.f == rats({1, 1, 1}));
  CHECK(i3.d == rats({1, 1, 1}));

  Instance i1 = hard_instance(1);
  CHECK(i1.p == rats({1}));
  CHECK(i1.f == rats({1}));
  CHECK(i1.d == rats({1}));

  Instance i5 = hard_instance(5);
  CHECK(i5.p == rats({5, 4, 3, 2, 1}));
  CHECK(i5.f == rats({1, 1, 1, 1, 1}));
  CHECK(i5.d == rats({1, 1, 1, 1, 1}));

  CHECK_THROWS_AS(hard_instance(0), std::invalid_argument);
}

TEST_CASE("instance invariants are enforced") {
  CHECK_THROWS_AS(Instance(0, {}, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(Instance(2, rats({1}), rats({1, 1}), rats({1, 1})),
                  std::invalid_argument);
  CHECK_THROWS_AS(Instance(1, rats({1}), rats({1}), rats({-1})),
                  std::invalid_argument);
}

TEST_CASE("cumulative_demand") {
  Instance h5 = hard_instance(5);
  CHECK(cumulative_demand(h5, 2, 4) == 3);
  CHECK(cumulative_demand(h5, 3, 3) == 1);

  Instance frac(3, rats({1, 1, 1}), rats({0, 0, 0}),
                {Rat(2), make_rat(1, 2), Rat(0)});
  CHECK(cumulative_demand(frac, 1, 3) == make_rat(5, 2));

  CHECK_THROWS_AS(cumulative_demand(h5, 3, 2), std::out_of_range);
  CHECK_THROWS_AS(cumulative_demand(h5, 0, 2), std::out_of_range);
  CHECK_THROWS_AS(cumulative_demand(h5, 1, 6), std::out_of_range);
}

TEST_CASE("hard_opt_formula") {
  CHECK(hard_opt_formula(4) == 14);
  CHECK(hard_opt_formula(1) == 2);
  CHECK(hard_opt_formula(10) == 65);
}

TEST_CASE("evaluate_objective") {
  CHECK(evaluate_objective(hard_instance(3),
                           sol(rats({1, 1, 1}), rats({1, 1, 1}))) == 9);
  CHECK(evaluate_objective(hard_instance(2),
                           sol(rats({0, 0}), rats({0, 0}))) == 0);
  Solution half = sol(rats({1, 1, 1, 1, 1}),
                      {Rat(1), make_rat(1, 2), Rat(1), make_rat(1, 2), Rat(1)});
  CHECK(evaluate_objective(hard_instance(5), half) == 19);
  CHECK_THROWS_AS(evaluate_objective(hard_instance(3), sol(rats({1}), rats({1}))),
                  std::invalid_argument);
}

TEST_CASE("evaluate_objective is linear in the solution") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Instance inst = lotsplit_test::random_instance(rng, 6);
    auto rand_sol = [&]() {
      Solution s;
      for (int i = 0; i < inst.n; ++i) {
        s.x.push_back(lotsplit_test::random_entry(rng));
        s.y.push_back(lotsplit_test::random_entry(rng));
      }
      return s;
    };
    Solution a = rand_sol();
    Solution b = rand_sol();
    Solution mid;
    for (int i = 0; i < inst.n; ++i) {
      mid.x.push_back((a.x[i] + b.x[i]) / 2);
      mid.y.push_back((a.y[i] + b.y[i]) / 2);
    }
    Rat expect =
        (evaluate_objective(inst, a) + evaluate_objective(inst, b)) / 2;
    CHECK(evaluate_objective(inst, mid) == expect);
  }
}

TEST_CASE("check_feasible accepts and reports exactly") {
  CHECK(check_feasible(hard_instance(3), sol(rats({1, 1, 1}), rats({1, 1, 1})))
            .empty());

  auto violations =
      check_feasible(hard_instance(3), sol(rats({0, 2, 1}), rats({0, 1, 1})));
  REQUIRE_FALSE(violations.empty());
  CHECK(violations.front().kind == RowKind::kPrefixCover);
  CHECK(violations.front().period == 1);
  CHECK(violations.front().amount == 1);
  CHECK(violations.front().describe() == "prefix-cover i=1 violated by 1");

  Solution mixed = sol(rats({2, 0, 1, 1, 1}),
                       {Rat(1), Rat(0), Rat(1), make_rat(1, 2), Rat(1)});
  CHECK(check_feasible(hard_instance(5), mixed).empty());
}

TEST_CASE("check_feasible flags bound and link violations") {
  auto v1 = check_feasible(hard_instance(2), sol(rats({2, 0}), rats({1, 0})));
  CHECK(v1.empty());  // producing everything in period 1 is fine

  auto v2 = check_feasible(hard_instance(2), sol(rats({1, 1}), rats({1, 0})));
  REQUIRE(v2.size() == 1);
  CHECK(v2.front().kind == RowKind::kSetupLink);
  CHECK(v2.front().period == 2);

  auto v3 = check_feasible(hard_instance(1), sol(rats({-1}), rats({2})));
  bool saw_x_lower = false;
  bool saw_y_upper = false;
  for (const auto& v : v3) {
    saw_x_lower |= v.kind == RowKind::kXLower;
    saw_y_upper |= v.kind == RowKind::kYUpper;
  }
  CHECK(saw_x_lower);
  CHECK(saw_y_upper);
}

TEST_CASE("dp_solve matches the closed form on the hard family") {
  for (int n = 1; n <= 50; ++n) {
    PlanResult r = dp_solve(hard_instance(n));
    CHECK(r.value == hard_opt_formula(n));
    CHECK(check_feasible(hard_instance(n), r.plan).empty());
    CHECK(evaluate_objective(hard_instance(n), r.plan) == r.value);
  }
}

TEST_CASE("dp_solve picks a shared setup when setups are expensive") {
  Instance inst(2, rats({1, 1}), rats({10, 10}), rats({1, 1}));
  PlanResult r = dp_solve(inst);
  CHECK(r.value == 12);
  CHECK(r.plan.y == rats({1, 0}));
  CHECK(r.plan.x == rats({2, 0}));
}

TEST_CASE("dp_solve with zero demand does nothing") {
  Instance inst(3, rats({1, 2, 3}), rats({4, 5, 6}), rats({0, 0, 0}));
  PlanResult r = dp_solve(inst);
  CHECK(r.value == 0);
  CHECK(r.plan.x == rats({0, 0, 0}));
  CHECK(r.plan.y == rats({0, 0, 0}));
}

TEST_CASE("dp_solve skips zero-demand tail periods even with free setups") {
  Instance inst(3, rats({1, 1, 1}), rats({0, 0, 0}), rats({1, 0, 0}));
  PlanResult r = dp_solve(inst);
  CHECK(r.value == 1);
  CHECK(r.plan.y == rats({1, 0, 0}));
}

TEST_CASE("dp_solve rejects negative setup costs") {
  Instance inst(1, rats({1}), rats({-1}), rats({1}));
  CHECK_THROWS_AS(dp_solve(inst), std::domain_error);
}

TEST_CASE("brute_force_solve basics") {
  CHECK(brute_force_solve(hard_instance(4)).value == 14);
  Instance inst(2, rats({1, 1}), rats({10, 10}), rats({1, 1}));
  CHECK(brute_force_solve(inst).value == 12);
  Instance zero(2, rats({1, 1}), rats({1, 1}), rats({0, 0}));
  CHECK(brute_force_solve(zero).value == 0);
  CHECK_THROWS_AS(brute_force_solve(hard_instance(17)), std::invalid_argument);
}

TEST_CASE("dp agrees with the brute-force oracle on random instances") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    Instance inst = lotsplit_test::random_instance(rng, 10);
    PlanResult dp = dp_solve(inst);
    PlanResult brute = brute_force_solve(inst);
    REQUIRE(dp.value == brute.value);
    CHECK(check_feasible(inst, dp.plan).empty());
    CHECK(check_feasible(inst, brute.plan).empty());
    CHECK(evaluate_objective(inst, dp.plan) == dp.value);
    CHECK(evaluate_objective(inst, brute.plan) == brute.value);
  }
}

TEST_CASE("build_milp shape") {
  MilpModel m2 = build_milp(hard_instance(2));
  REQUIRE(m2.lp.num_rows() == 4);
  REQUIRE(m2.lp.num_vars() == 4);
  // x1 >= 1
  CHECK(m2.lp.rows[0].coeffs == rats({1, 0, 0, 0}));
  CHECK(m2.lp.rows[0].sense == Sense::kGe);
  CHECK(m2.lp.rows[0].rhs == 1);
  // x1 + x2 = 2
  CHECK(m2.lp.rows[1].coeffs == rats({1, 1, 0, 0}));
  CHECK(m2.lp.rows[1].sense == Sense::kEq);
  CHECK(m2.lp.rows[1].rhs == 2);
  // x1 <= 2 y1
  CHECK(m2.lp.rows[2].coeffs == rats({1, 0, -2, 0}));
  CHECK(m2.lp.rows[2].sense == Sense::kLe);
  CHECK(m2.lp.rows[2].rhs == 0);
  // x2 <= 1 y2
  CHECK(m2.lp.rows[3].coeffs == rats({0, 1, 0, -1}));
  CHECK(m2.lp.rows[3].sense == Sense::kLe);
  // bounds and integrality
  for (int j = 0; j < 2; ++j) {
    CHECK(m2.lp.bounds[j].lower == 0);
    CHECK_FALSE(m2.lp.bounds[j].upper);
    CHECK(m2.lp.bounds[2 + j].lower == 0);
    CHECK(*m2.lp.bounds[2 + j].upper == 1);
    CHECK_FALSE(m2.integer_mask[j]);
    CHECK(m2.integer_mask[2 + j]);
  }

  MilpModel m1 = build_milp(hard_instance(1));
  REQUIRE(m1.lp.num_rows() == 2);
  CHECK(m1.lp.rows[0].sense == Sense::kEq);
  CHECK(m1.lp.rows[1].coeffs == rats({1, -1}));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Instance inst = lotsplit_test::random_instance(rng, 9);
    MilpModel m = build_milp(inst);
    CHECK(m.lp.num_rows() == 2 * inst.n);
    int integers = 0;
    for (bool b : m.integer_mask) integers += b ? 1 : 0;
    CHECK(integers == inst.n);
  }
}

TEST_CASE("instance file round trip is bit exact") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Instance inst = lotsplit_test::random_instance(rng, 8);
    std::stringstream ss;
    write_instance(inst, ss);
    Instance back = read_instance(ss);
    CHECK(back.n == inst.n);
    CHECK(back.p == inst.p);
    CHECK(back.f == inst.f);
    CHECK(back.d == inst.d);
  }
}

TEST_CASE("instance reader accepts bare integers and rejects junk") {
  {
    std::stringstream ss(R"({"n":2,"p":[3,"1/2"],"f":[1,1],"d":["2",1]})");
    Instance inst = read_instance(ss);
    CHECK(inst.p[0] == 3);
    CHECK(inst.p[1] == make_rat(1, 2));
    CHECK(inst.d[0] == 2);
  }
  {
    std::stringstream ss(R"({"n":2,"p":[3],"f":[1,1],"d":[1,1]})");
    CHECK_THROWS_AS(read_instance(ss), std::runtime_error);
  }
  {
    std::stringstream ss(R"({"n":1,"p":[0.5],"f":[1],"d":[1]})");
    CHECK_THROWS_AS(read_instance(ss), std::runtime_error);
  }
  {
    std::stringstream ss("not json");
    CHECK_THROWS_AS(read_instance(ss), std::runtime_error);
  }
}
