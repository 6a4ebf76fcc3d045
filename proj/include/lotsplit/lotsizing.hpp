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

#ifndef LOTSPLIT_LOTSIZING_HPP_
#define LOTSPLIT_LOTSIZING_HPP_

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lotsplit/rational.hpp"

namespace lotsplit {

// Uncapacitated single-item production planning data over n periods: unit
// production cost p_i, setup cost f_i and demand d_i per period. Instances
// are immutable after construction.
struct Instance {
  int n = 0;
  std::vector<Rat> p;
  std::vector<Rat> f;
  std::vector<Rat> d;

  Instance(int n_in, std::vector<Rat> p_in, std::vector<Rat> f_in,
           std::vector<Rat> d_in)
      : n(n_in), p(std::move(p_in)), f(std::move(f_in)), d(std::move(d_in)) {
    if (n < 1) throw std::invalid_argument("instance needs n >= 1 periods");
    const auto sz = static_cast<std::size_t>(n);
    if (p.size() != sz || f.size() != sz || d.size() != sz) {
      throw std::invalid_argument("p, f, d must all have length n");
    }
    for (const Rat& di : d) {
      if (di < 0) throw std::invalid_argument("demands must be nonnegative");
    }
  }
};

// Production plan: quantities x and setup indicators y (y may be fractional
// when the plan comes from a relaxation).
struct Solution {
  std::vector<Rat> x;
  std::vector<Rat> y;
};

// Family on which branch-and-bound trees are provably large: every period
// demands one unit, setups cost 1, and producing a unit one period earlier
// always costs exactly one extra, so deferring production never wins more
// than the setup it saves.
inline Instance hard_instance(int n) {
  if (n < 1) throw std::invalid_argument("hard_instance needs n >= 1");
  std::vector<Rat> p, f, d;
  p.reserve(n);
  f.reserve(n);
  d.reserve(n);
  for (int j = 1; j <= n; ++j) {
    p.emplace_back(n - j + 1);
    f.emplace_back(1);
    d.emplace_back(1);
  }
  return Instance(n, std::move(p), std::move(f), std::move(d));
}

// Closed-form optimum of hard_instance(n): n(n+1)/2 + n.
inline Rat hard_opt_formula(int n) {
  if (n < 1) throw std::invalid_argument("hard_opt_formula needs n >= 1");
  Int z(n);
  Rat half = Rat(z * (z + 1)) / 2;
  return half + Rat(z);
}

// Sum of demands d_i..d_j, 1-based and inclusive.
inline Rat cumulative_demand(const Instance& inst, int i, int j) {
  if (i < 1 || j > inst.n || i > j) {
    throw std::out_of_range("cumulative_demand needs 1 <= i <= j <= n");
  }
  Rat total = 0;
  for (int k = i; k <= j; ++k) total += inst.d[k - 1];
  return total;
}

inline Rat evaluate_objective(const Instance& inst, const Solution& sol) {
  const auto sz = static_cast<std::size_t>(inst.n);
  if (sol.x.size() != sz || sol.y.size() != sz) {
    throw std::invalid_argument("solution vectors must have length n");
  }
  Rat total = 0;
  for (int i = 0; i < inst.n; ++i) {
    total += inst.p[i] * sol.x[i];
    total += inst.f[i] * sol.y[i];
  }
  return total;
}

enum class RowKind {
  kPrefixCover,   // x_1 + ... + x_i >= d_1..i
  kTotalBalance,  // x_1 + ... + x_n  = d_1..n
  kSetupLink,     // x_i <= d_i..n * y_i
  kXLower,        // x_i >= 0
  kYLower,        // y_i >= 0
  kYUpper,        // y_i <= 1
};

struct Violation {
  RowKind kind;
  int period;  // 1-based row index
  Rat amount;  // positive violation magnitude

  std::string describe() const {
    std::string name;
    switch (kind) {
      case RowKind::kPrefixCover: name = "prefix-cover"; break;
      case RowKind::kTotalBalance: name = "total-balance"; break;
      case RowKind::kSetupLink: name = "setup-link"; break;
      case RowKind::kXLower: name = "x-lower-bound"; break;
      case RowKind::kYLower: name = "y-lower-bound"; break;
      case RowKind::kYUpper: name = "y-upper-bound"; break;
    }
    return name + " i=" + std::to_string(period) + " violated by " +
           lotsplit::to_string(amount);
  }
};

// Exact feasibility check of (x, y) against the demand-cover rows, the total
// balance, the setup links and the variable bounds. Integrality of y is not
// checked; fractional y is legal input. Empty result means feasible.
inline std::vector<Violation> check_feasible(const Instance& inst,
                                             const Solution& sol) {
  const auto sz = static_cast<std::size_t>(inst.n);
  if (sol.x.size() != sz || sol.y.size() != sz) {
    throw std::invalid_argument("solution vectors must have length n");
  }
  std::vector<Violation> out;
  Rat prefix_x = 0;
  Rat prefix_d = 0;
  for (int i = 1; i <= inst.n - 1; ++i) {
    prefix_x += sol.x[i - 1];
    prefix_d += inst.d[i - 1];
    if (prefix_x < prefix_d) {
      out.push_back({RowKind::kPrefixCover, i, prefix_d - prefix_x});
    }
  }
  Rat total_x = prefix_x;
  Rat total_d = prefix_d;
  if (inst.n >= 1) {
    total_x += sol.x[inst.n - 1];
    total_d += inst.d[inst.n - 1];
  }
  if (total_x != total_d) {
    Rat gap = total_x > total_d ? Rat(total_x - total_d) : Rat(total_d - total_x);
    out.push_back({RowKind::kTotalBalance, inst.n, gap});
  }
  Rat tail = 0;  // d_i..n, built backwards below
  std::vector<Rat> tail_demand(sz);
  for (int i = inst.n; i >= 1; --i) {
    tail += inst.d[i - 1];
    tail_demand[i - 1] = tail;
  }
  for (int i = 1; i <= inst.n; ++i) {
    Rat cap = tail_demand[i - 1] * sol.y[i - 1];
    if (sol.x[i - 1] > cap) {
      out.push_back({RowKind::kSetupLink, i, sol.x[i - 1] - cap});
    }
  }
  for (int i = 1; i <= inst.n; ++i) {
    if (sol.x[i - 1] < 0) out.push_back({RowKind::kXLower, i, -sol.x[i - 1]});
  }
  for (int i = 1; i <= inst.n; ++i) {
    if (sol.y[i - 1] < 0) out.push_back({RowKind::kYLower, i, -sol.y[i - 1]});
    if (sol.y[i - 1] > 1) {
      out.push_back({RowKind::kYUpper, i, sol.y[i - 1] - 1});
    }
  }
  return out;
}

struct PlanResult {
  Rat value;
  Solution plan;
};

// O(n^2) dynamic program over "the last setup at or before period j serves
// every period from its own up to j". Periods with zero demand may be
// skipped entirely. Ties are broken toward fewer setups, then toward the
// earlier block start, so the returned plan is deterministic.
//
// Requires f >= 0: with a negative setup cost, opening a period pays for
// itself without producing anything and the block recursion no longer covers
// the optimum.
inline PlanResult dp_solve(const Instance& inst) {
  for (const Rat& fi : inst.f) {
    if (fi < 0) {
      throw std::domain_error("dp_solve requires nonnegative setup costs");
    }
  }
  const int n = inst.n;
  std::vector<Rat> cum(n + 1);
  cum[0] = 0;
  for (int j = 1; j <= n; ++j) cum[j] = cum[j - 1] + inst.d[j - 1];

  // best[j]: cheapest way to serve periods 1..j; choice[j] = 0 means period j
  // has no demand and is skipped, otherwise the block start i.
  std::vector<Rat> best(n + 1);
  std::vector<int> setups(n + 1, 0);
  std::vector<int> choice(n + 1, 0);
  best[0] = 0;
  for (int j = 1; j <= n; ++j) {
    bool have = false;
    Rat cand_val;
    int cand_setups = 0;
    int cand_choice = 0;
    if (inst.d[j - 1] == 0) {
      cand_val = best[j - 1];
      cand_setups = setups[j - 1];
      cand_choice = 0;
      have = true;
    }
    for (int i = 1; i <= j; ++i) {
      Rat val = best[i - 1] + inst.f[i - 1] + inst.p[i - 1] * (cum[j] - cum[i - 1]);
      int ns = setups[i - 1] + 1;
      bool better;
      if (!have) {
        better = true;
      } else if (val != cand_val) {
        better = val < cand_val;
      } else if (ns != cand_setups) {
        better = ns < cand_setups;
      } else {
        better = cand_choice != 0 && i < cand_choice;
      }
      if (better) {
        cand_val = val;
        cand_setups = ns;
        cand_choice = i;
        have = true;
      }
    }
    best[j] = cand_val;
    setups[j] = cand_setups;
    choice[j] = cand_choice;
  }

  Solution plan;
  plan.x.assign(n, Rat(0));
  plan.y.assign(n, Rat(0));
  for (int j = n; j >= 1;) {
    if (choice[j] == 0) {
      --j;
    } else {
      int i = choice[j];
      plan.y[i - 1] = 1;
      plan.x[i - 1] = cum[j] - cum[i - 1];
      j = i - 1;
    }
  }
  return {best[n], std::move(plan)};
}

// Independent oracle: enumerate every setup vector y in {0,1}^n for which all
// positive demand has an open period at or before it, then serve each demand
// from the cheapest open period no later than it. The inner assignment is
// the exact LP optimum for fixed y because production can only be shifted
// earlier and total production is pinned to total demand.
inline PlanResult brute_force_solve(const Instance& inst, int cap = 16) {
  const int n = inst.n;
  if (n > cap) {
    throw std::invalid_argument("brute_force_solve: n exceeds cap of " +
                                std::to_string(cap));
  }
  bool have = false;
  Rat best_val;
  Solution best_plan;
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    bool open_seen = false;
    bool feasible = true;
    for (int i = 1; i <= n && feasible; ++i) {
      if (mask & (1ul << (i - 1))) open_seen = true;
      if (inst.d[i - 1] > 0 && !open_seen) feasible = false;
    }
    if (!feasible) continue;

    Rat value = 0;
    Solution plan;
    plan.x.assign(n, Rat(0));
    plan.y.assign(n, Rat(0));
    int cheapest = 0;  // 1-based period of the running unit-cost argmin
    for (int i = 1; i <= n; ++i) {
      if (mask & (1ul << (i - 1))) {
        plan.y[i - 1] = 1;
        value += inst.f[i - 1];
        if (cheapest == 0 || inst.p[i - 1] < inst.p[cheapest - 1]) cheapest = i;
      }
      if (inst.d[i - 1] > 0) {
        value += inst.d[i - 1] * inst.p[cheapest - 1];
        plan.x[cheapest - 1] += inst.d[i - 1];
      }
    }
    if (!have || value < best_val) {
      best_val = value;
      best_plan = std::move(plan);
      have = true;
    }
  }
  return {best_val, std::move(best_plan)};
}

// --- instance text format -------------------------------------------------
//
// A flat JSON record {"n": 3, "p": [...], "f": [...], "d": [...]} where the
// array entries are exact rationals written as decimal integers or "a/b"
// strings. Round-trips are bit-exact.

inline void write_instance(const Instance& inst, std::ostream& os) {
  nlohmann::ordered_json j;
  j["n"] = inst.n;
  auto dump = [](const std::vector<Rat>& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Rat& q : v) arr.push_back(lotsplit::to_string(q));
    return arr;
  };
  j["p"] = dump(inst.p);
  j["f"] = dump(inst.f);
  j["d"] = dump(inst.d);
  os << j.dump() << "\n";
}

inline Instance read_instance(std::istream& is) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("instance parse: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("p") ||
      !j.contains("f") || !j.contains("d")) {
    throw std::runtime_error("instance parse: need fields n, p, f, d");
  }
  if (!j["n"].is_number_integer()) {
    throw std::runtime_error("instance parse: n must be an integer");
  }
  int n = j["n"].get<int>();
  auto load = [](const nlohmann::json& arr, const char* name) {
    if (!arr.is_array()) {
      throw std::runtime_error(std::string("instance parse: ") + name +
                               " must be an array");
    }
    std::vector<Rat> v;
    v.reserve(arr.size());
    for (const auto& e : arr) {
      if (e.is_string()) {
        v.push_back(parse_rational(e.get<std::string>()));
      } else if (e.is_number_integer()) {
        v.push_back(Rat(static_cast<long>(e.get<long long>())));
      } else {
        throw std::runtime_error(std::string("instance parse: ") + name +
                                 " entries must be integers or 'a/b' strings");
      }
    }
    return v;
  };
  try {
    return Instance(n, load(j["p"], "p"), load(j["f"], "f"), load(j["d"], "d"));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("instance parse: ") + e.what());
  }
}

}  // namespace lotsplit

#endif  // LOTSPLIT_LOTSIZING_HPP_
