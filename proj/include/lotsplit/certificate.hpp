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

#ifndef LOTSPLIT_CERTIFICATE_HPP_
#define LOTSPLIT_CERTIFICATE_HPP_

#include <algorithm>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lotsplit/bnb.hpp"
#include "lotsplit/lotsizing.hpp"
#include "lotsplit/rational.hpp"

namespace lotsplit {

// Fooling set for hard_instance(n): a family of setup vectors no two of
// which may share a leaf of any tree that solves the instance. Odd n fixes
// y_j = 1 on odd coordinates; even n fixes y_1 = 1 and y_j = 1 on even
// coordinates. The free coordinates range over {0,1}.
struct SetS {
  int n = 0;
  std::vector<std::vector<int>> members;  // lexicographic order
};

// 1-based positions left free by the fooling-set pattern.
inline std::vector<int> fooling_free_positions(int n) {
  std::vector<int> free_pos;
  if (n % 2 == 1) {
    for (int j = 2; j <= n; j += 2) free_pos.push_back(j);
  } else {
    for (int j = 3; j <= n; j += 2) free_pos.push_back(j);
  }
  return free_pos;
}

inline SetS enumerate_S(int n) {
  if (n < 1) throw std::invalid_argument("enumerate_S needs n >= 1");
  SetS s;
  s.n = n;
  const std::vector<int> free_pos = fooling_free_positions(n);
  const int k = static_cast<int>(free_pos.size());
  s.members.reserve(1ull << k);
  for (unsigned long mask = 0; mask < (1ul << k); ++mask) {
    std::vector<int> y(n, 0);
    if (n % 2 == 1) {
      for (int j = 1; j <= n; j += 2) y[j - 1] = 1;
    } else {
      y[0] = 1;
      for (int j = 2; j <= n; j += 2) y[j - 1] = 1;
    }
    // Earliest free position takes the top bit, so the full vectors come out
    // in ascending lexicographic order.
    for (int t = 0; t < k; ++t) {
      y[free_pos[t] - 1] = (mask >> (k - 1 - t)) & 1ul ? 1 : 0;
    }
    s.members.push_back(std::move(y));
  }
  return s;
}

inline bool is_fooling_member(int n, const std::vector<int>& y) {
  if (static_cast<int>(y.size()) != n) return false;
  for (int v : y) {
    if (v != 0 && v != 1) return false;
  }
  if (n % 2 == 1) {
    for (int j = 1; j <= n; j += 2) {
      if (y[j - 1] != 1) return false;
    }
  } else {
    if (y[0] != 1) return false;
    for (int j = 2; j <= n; j += 2) {
      if (y[j - 1] != 1) return false;
    }
  }
  return true;
}

// Number of members: 2^{(n-1)/2} for odd n, 2^{n/2 - 1} for even n.
inline long long strong_leaf_bound(int n) {
  if (n < 1) throw std::invalid_argument("n >= 1 required");
  return 1ll << fooling_free_positions(n).size();
}

// Smallest integer no less than 2^{(n/2) - 1}. For even n this is exact; for
// odd n the exponent is fractional and the value rounds up, which keeps the
// comparison against integer leaf counts faithful.
inline long long stated_leaf_bound(int n) {
  if (n < 1) throw std::invalid_argument("n >= 1 required");
  if (n == 1) return 1;  // 2^{-1/2} < 1
  if (n % 2 == 0) return 1ll << (n / 2 - 1);
  Int pow2 = 1;
  mpz_mul_2exp(pow2.get_mpz_t(), pow2.get_mpz_t(), n - 2);
  Int root, rem;
  mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), pow2.get_mpz_t());
  if (rem != 0) root += 1;
  return to_long(root);
}

// Fractional point built from the midpoint of two fooling-set members. Its
// cost misses the integer optimum by exactly half the number of 1/2 entries,
// so it certifies that a node containing both members cannot be a leaf.
struct Witness {
  std::vector<Rat> xhat;
  std::vector<Rat> yhat;  // entries in {0, 1/2, 1}
  int n_half = 0;
  Rat objective;
};

// Midpoint setup vector plus a production plan paired period by period: the
// fixed-one period of each pair produces for itself, and doubles up exactly
// when its free partner is shut (midpoint 0). Pairs are (odd j, j+1) for odd
// n and (even j, j+1) for even n, with period 1 standing alone in the even
// case and period n standing alone in both.
inline Witness construct_witness(int n, const std::vector<int>& u,
                                 const std::vector<int>& v) {
  if (!is_fooling_member(n, u) || !is_fooling_member(n, v)) {
    throw std::invalid_argument("witness inputs must be fooling-set members");
  }
  if (u == v) throw std::invalid_argument("witness needs two distinct members");

  Witness w;
  w.yhat.resize(n);
  w.xhat.assign(n, Rat(0));
  for (int i = 0; i < n; ++i) {
    w.yhat[i] = Rat(u[i] + v[i], 2);
    w.yhat[i].canonicalize();
    if (w.yhat[i] == Rat(1, 2)) ++w.n_half;
  }

  if (n % 2 == 1) {
    w.xhat[n - 1] = 1;
    for (int j = 1; j < n; j += 2) {
      w.xhat[j - 1] = w.yhat[j] == 0 ? 2 : 1;  // pairs (j, j+1), y_j fixed to 1
    }
    for (int j = 2; j <= n; j += 2) {
      w.xhat[j - 1] = w.yhat[j - 1] == 0 ? 0 : 1;
    }
  } else {
    w.xhat[0] = 1;
    w.xhat[n - 1] = 1;
    for (int j = 2; j + 1 <= n - 1; j += 2) {
      if (w.yhat[j] == 0) {  // pairs (j, j+1), y_j fixed to 1
        w.xhat[j - 1] = 2;
        w.xhat[j] = 0;
      } else {
        w.xhat[j - 1] = 1;
        w.xhat[j] = 1;
      }
    }
  }

  const Instance inst = hard_instance(n);
  w.objective = evaluate_objective(inst, Solution{w.xhat, w.yhat});
  return w;
}

struct CheckResult {
  bool ok = false;
  std::string reason;  // empty when ok
  explicit operator bool() const { return ok; }
};

// A witness certifies a node when it is feasible for the original rows, it
// satisfies every branching constraint of the node, and its cost is strictly
// below the integer optimum.
inline CheckResult verify_witness(const Instance& inst, const Witness& w,
                                  const std::vector<BranchingConstraint>& constraints) {
  const Instance reference = hard_instance(inst.n);
  if (inst.p != reference.p || inst.f != reference.f || inst.d != reference.d) {
    return {false, "instance is not the hard family"};
  }
  if (w.xhat.size() != static_cast<std::size_t>(inst.n) ||
      w.yhat.size() != static_cast<std::size_t>(inst.n)) {
    return {false, "witness vectors must have length n"};
  }
  const std::vector<Violation> violations =
      check_feasible(inst, Solution{w.xhat, w.yhat});
  if (!violations.empty()) {
    return {false, violations.front().describe()};
  }
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    const BranchingConstraint& bc = constraints[k];
    if (bc.disjunction.pi.size() != w.yhat.size()) {
      return {false, "constraint length does not match n"};
    }
    Rat dot = 0;
    for (std::size_t i = 0; i < w.yhat.size(); ++i) {
      if (bc.disjunction.pi[i] != 0 && w.yhat[i] != 0) {
        dot += Rat(static_cast<long>(bc.disjunction.pi[i])) * w.yhat[i];
      }
    }
    const bool sat = bc.side == Side::kLower
                         ? dot <= Rat(static_cast<long>(bc.disjunction.eta))
                         : dot >= Rat(static_cast<long>(bc.disjunction.eta + 1));
    if (!sat) {
      return {false, "constraint " + std::to_string(k) + " violated"};
    }
  }
  const Rat objective = evaluate_objective(inst, Solution{w.xhat, w.yhat});
  if (objective != w.objective) {
    return {false, "stored objective does not match the vectors"};
  }
  if (!(objective < hard_opt_formula(inst.n))) {
    return {false, "objective does not beat the optimum"};
  }
  return {true, ""};
}

// Exact identity: objective = OPT - n_half / 2, with n_half recounted from
// the stored midpoint vector.
inline bool objective_identity(int n, const Witness& w) {
  if (w.yhat.size() != static_cast<std::size_t>(n) ||
      w.xhat.size() != static_cast<std::size_t>(n)) {
    return false;
  }
  int halves = 0;
  for (const Rat& yi : w.yhat) {
    if (yi == Rat(1, 2)) ++halves;
  }
  if (halves != w.n_half) return false;
  const Rat objective =
      evaluate_objective(hard_instance(n), Solution{w.xhat, w.yhat});
  if (objective != w.objective) return false;
  return objective == hard_opt_formula(n) - make_rat(halves, 2);
}

struct LeafAssignment {
  int leaf_id = 0;
  std::vector<int> member_indices;  // indices into SetS::members
};

struct AuditReport {
  int n = 0;
  long long set_size = 0;
  long long leaf_count = 0;
  long long stated_bound = 0;
  long long strong_bound = 0;
  long long max_members_per_leaf = 0;
  bool pass = false;
  std::string reason;  // first failure; empty when pass
  std::optional<int> offending_leaf;
  std::optional<std::pair<std::vector<int>, std::vector<int>>> offending_pair;
  std::optional<Witness> witness;
  std::vector<LeafAssignment> assignment;  // leaves holding at least one member

  void print(std::ostream& os) const {
    os << "n: " << n << "\n";
    os << "set-size: " << set_size << "\n";
    os << "leaf-count: " << leaf_count << "\n";
    os << "stated-bound: " << stated_bound << "\n";
    os << "strong-bound: " << strong_bound << "\n";
    os << "max-members-per-leaf: " << max_members_per_leaf << "\n";
    os << "result: " << (pass ? "PASS" : "FAIL") << "\n";
    if (!pass) {
      os << "reason: " << reason << "\n";
      if (offending_leaf) os << "leaf: " << *offending_leaf << "\n";
      if (offending_pair) {
        auto join = [](const std::vector<int>& v) {
          std::string out;
          for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(v[i]);
          }
          return out;
        };
        os << "member-u: " << join(offending_pair->first) << "\n";
        os << "member-v: " << join(offending_pair->second) << "\n";
      }
      if (witness) {
        os << "witness-x: " << join_rationals(witness->xhat) << "\n";
        os << "witness-y: " << join_rationals(witness->yhat) << "\n";
        os << "witness-objective: " << lotsplit::to_string(witness->objective)
           << "\n";
        os << "opt: " << lotsplit::to_string(hard_opt_formula(n)) << "\n";
      }
    }
  }
};

// Mechanized leaf-count audit of a finished tree over hard_instance(n).
//
// A tree "solves" the instance when it is complete, its incumbent equals the
// DP optimum, and every leaf is pruned or integral. Each fooling-set member
// is assigned to every leaf whose branching constraints it satisfies; a
// member in no leaf means the splits cut off an integer point, and two
// members in one leaf yield a constructed witness that beats the optimum
// inside that leaf's relaxation, refuting the prune. Finally the leaf count
// is compared against ceil(2^{(n/2)-1}) (and optionally the stronger
// fooling-set size, which differs for odd n).
inline AuditReport audit_tree(const BnbTree& tree, int n,
                              bool enforce_strong = false) {
  if (!tree.complete) {
    throw std::invalid_argument("audit_tree: tree is incomplete");
  }
  AuditReport report;
  report.n = n;
  const SetS s = enumerate_S(n);
  report.set_size = static_cast<long long>(s.members.size());
  report.stated_bound = stated_leaf_bound(n);
  report.strong_bound = strong_leaf_bound(n);

  auto fail = [&](std::string why) {
    if (report.pass || report.reason.empty()) {
      report.pass = false;
      report.reason = std::move(why);
    }
  };
  report.pass = true;

  for (const BnbNode& node : tree.nodes) {
    if (node.status == NodeStatus::kOpen) {
      fail("open node in a tree claiming completion");
    }
  }

  const PlanResult dp = dp_solve(hard_instance(n));
  if (!tree.incumbent_value) {
    fail("no incumbent recorded");
  } else if (*tree.incumbent_value != dp.value) {
    fail("incumbent value " + lotsplit::to_string(*tree.incumbent_value) +
         " differs from the optimum " + lotsplit::to_string(dp.value));
  }

  // sat[id][m]: member m satisfies every branching constraint at node id.
  // Children extend parents by one constraint and follow them in id order.
  const std::size_t num_members = s.members.size();
  std::vector<std::vector<char>> sat(tree.nodes.size(),
                                     std::vector<char>(num_members, 1));
  for (const BnbNode& node : tree.nodes) {
    if (!node.parent) continue;
    const auto& parent_sat = sat[*node.parent];
    auto& node_sat = sat[node.id];
    const BranchingConstraint& added = node.constraints.back();
    for (std::size_t m = 0; m < num_members; ++m) {
      node_sat[m] =
          parent_sat[m] && satisfies_constraint(s.members[m], added) ? 1 : 0;
    }
  }

  std::vector<long long> hits(num_members, 0);
  for (const BnbNode& node : tree.nodes) {
    if (node.status == NodeStatus::kBranched || node.status == NodeStatus::kOpen) {
      continue;
    }
    ++report.leaf_count;
    LeafAssignment la;
    la.leaf_id = node.id;
    for (std::size_t m = 0; m < num_members; ++m) {
      if (sat[node.id][m]) {
        la.member_indices.push_back(static_cast<int>(m));
        ++hits[m];
      }
    }
    if (!la.member_indices.empty()) {
      report.max_members_per_leaf = std::max(
          report.max_members_per_leaf,
          static_cast<long long>(la.member_indices.size()));
      report.assignment.push_back(std::move(la));
    }
  }

  for (std::size_t m = 0; m < num_members; ++m) {
    if (hits[m] == 0) {
      fail("fooling-set member " + std::to_string(m) +
           " satisfies no leaf: the splits cut off an integer point");
      break;
    }
  }

  for (const LeafAssignment& la : report.assignment) {
    if (la.member_indices.size() < 2) continue;
    const std::vector<int>& u = s.members[la.member_indices[0]];
    const std::vector<int>& v = s.members[la.member_indices[1]];
    Witness w = construct_witness(n, u, v);
    const CheckResult check =
        verify_witness(hard_instance(n), w, tree.nodes[la.leaf_id].constraints);
    report.offending_leaf = la.leaf_id;
    report.offending_pair = std::make_pair(u, v);
    report.witness = std::move(w);
    if (check.ok) {
      fail("leaf " + std::to_string(la.leaf_id) +
           " holds two fooling-set members; the witness beats the optimum "
           "inside its relaxation");
    } else {
      fail("leaf " + std::to_string(la.leaf_id) +
           " holds two fooling-set members but the witness check broke: " +
           check.reason);
    }
    break;
  }

  if (report.leaf_count < report.stated_bound) {
    fail("leaf count " + std::to_string(report.leaf_count) +
         " is below the bound " + std::to_string(report.stated_bound));
  }
  if (enforce_strong && report.leaf_count < report.strong_bound) {
    fail("leaf count " + std::to_string(report.leaf_count) +
         " is below the fooling-set size " +
         std::to_string(report.strong_bound));
  }
  return report;
}

}  // namespace lotsplit

#endif  // LOTSPLIT_CERTIFICATE_HPP_
