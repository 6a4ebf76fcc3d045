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

#ifndef LOTSPLIT_BNB_HPP_
#define LOTSPLIT_BNB_HPP_

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lotsplit/lotsizing.hpp"
#include "lotsplit/lp.hpp"
#include "lotsplit/milp.hpp"

namespace lotsplit {

// Two-way case split over the setup variables: pi . y <= eta or
// pi . y >= eta + 1. Valid for the mixed-integer set because pi and eta are
// integral and the y block is integer-constrained.
struct SplitDisjunction {
  std::vector<long long> pi;
  long long eta = 0;
};

enum class Side { kLower, kUpper };  // kLower: pi.y <= eta, kUpper: pi.y >= eta+1

struct BranchingConstraint {
  SplitDisjunction disjunction;
  Side side = Side::kLower;
};

// The branching half-space as an LP row over the 2n model variables.
inline LpRow constraint_row(const BranchingConstraint& bc, int n) {
  if (static_cast<int>(bc.disjunction.pi.size()) != n) {
    throw std::invalid_argument("disjunction length does not match n");
  }
  LpRow row;
  row.coeffs.assign(2 * n, Rat(0));
  for (int i = 0; i < n; ++i) {
    if (bc.disjunction.pi[i] != 0) {
      row.coeffs[n + i] = Rat(static_cast<long>(bc.disjunction.pi[i]));
    }
  }
  if (bc.side == Side::kLower) {
    row.sense = Sense::kLe;
    row.rhs = Rat(static_cast<long>(bc.disjunction.eta));
  } else {
    row.sense = Sense::kGe;
    row.rhs = Rat(static_cast<long>(bc.disjunction.eta + 1));
  }
  return row;
}

// Exact test of a binary vector against one accumulated branching constraint.
inline bool satisfies_constraint(const std::vector<int>& y,
                                 const BranchingConstraint& bc) {
  Int dot = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0) dot += static_cast<long>(bc.disjunction.pi[i]);
  }
  return bc.side == Side::kLower
             ? dot <= static_cast<long>(bc.disjunction.eta)
             : dot >= static_cast<long>(bc.disjunction.eta + 1);
}

enum class NodeStatus {
  kOpen,
  kBranched,
  kPrunedByBound,
  kPrunedInfeasible,
  kIntegralLeaf,
};

struct BnbNode {
  int id = 0;
  std::optional<int> parent;
  std::vector<BranchingConstraint> constraints;  // accumulated from the root
  std::optional<Rat> bound;                      // LP value; empty if infeasible
  NodeStatus status = NodeStatus::kOpen;
  bool used_fallback = false;  // random-split gave up and split on a variable
};

struct BnbTree {
  std::vector<BnbNode> nodes;  // indexed by id; children have larger ids
  int root = 0;
  std::optional<Rat> incumbent_value;
  std::optional<Solution> incumbent;
  bool complete = false;
  long long lps_solved = 0;
  long long lps_verified = 0;
};

struct TreeStats {
  long long nodes = 0;
  long long leaves = 0;  // nodes never branched, including still-open ones
  int depth = 0;
  std::optional<Rat> incumbent_value;
};

inline TreeStats tree_stats(const BnbTree& tree) {
  TreeStats s;
  s.nodes = static_cast<long long>(tree.nodes.size());
  for (const BnbNode& node : tree.nodes) {
    if (node.status != NodeStatus::kBranched) ++s.leaves;
    s.depth = std::max(s.depth, static_cast<int>(node.constraints.size()));
  }
  s.incumbent_value = tree.incumbent_value;
  return s;
}

enum class RuleKind { kMostFractional, kFirstFractional, kRandomSplit };

struct BranchingRule {
  RuleKind kind = RuleKind::kMostFractional;
  int coeff_bound = 2;       // random-split coefficients drawn from [-B, B]
  unsigned long long seed = 0;
  int rejection_budget = 50;
};

enum class NodeSelection { kBestBound, kDepthFirst };

struct BnbLimits {
  long long node_cap = 1'000'000;
  bool warm_start = true;           // seed the incumbent with the DP optimum
  bool verify_lp_certificates = true;
};

inline const char* rule_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::kMostFractional: return "most-fractional";
    case RuleKind::kFirstFractional: return "first-fractional";
    case RuleKind::kRandomSplit: return "random-split";
  }
  return "?";
}

inline const char* selection_name(NodeSelection sel) {
  return sel == NodeSelection::kBestBound ? "best-bound" : "depth-first";
}

// Unit split on a fractional coordinate of y. Most-fractional picks the
// coordinate whose value is closest to one half; first-fractional takes the
// lowest fractional index. Ties go to the lowest index.
inline SplitDisjunction choose_disjunction_simple(const std::vector<Rat>& y,
                                                  RuleKind mode) {
  const int n = static_cast<int>(y.size());
  int pick = -1;
  Rat pick_score;
  for (int i = 0; i < n; ++i) {
    if (is_integer(y[i])) continue;
    if (mode == RuleKind::kFirstFractional) {
      pick = i;
      break;
    }
    Rat frac = y[i] - Rat(floor_rat(y[i]));
    Rat score = frac <= Rat(1, 2) ? frac : Rat(1 - frac);
    if (pick < 0 || score > pick_score) {
      pick = i;
      pick_score = score;
    }
  }
  if (pick < 0) {
    throw std::invalid_argument("no fractional coordinate to branch on");
  }
  SplitDisjunction d;
  d.pi.assign(n, 0);
  d.pi[pick] = 1;
  d.eta = to_long(floor_rat(y[pick]));
  return d;
}

// Random integer split: draw pi from [-B, B]^n until pi . y is fractional,
// with eta = floor(pi . y). After rejection_budget failed draws, falls back
// to most-fractional variable branching (reported through fell_back).
inline SplitDisjunction choose_disjunction_general(const std::vector<Rat>& y,
                                                   const BranchingRule& rule,
                                                   std::mt19937_64& rng,
                                                   bool* fell_back = nullptr) {
  const int n = static_cast<int>(y.size());
  const long long b = std::max(1, rule.coeff_bound);
  std::uniform_int_distribution<long long> coeff(-b, b);
  for (int attempt = 0; attempt < rule.rejection_budget; ++attempt) {
    SplitDisjunction d;
    d.pi.resize(n);
    Rat dot = 0;
    for (int i = 0; i < n; ++i) {
      d.pi[i] = coeff(rng);
      if (d.pi[i] != 0 && y[i] != 0) {
        dot += Rat(static_cast<long>(d.pi[i])) * y[i];
      }
    }
    if (!is_integer(dot)) {
      d.eta = to_long(floor_rat(dot));
      if (fell_back) *fell_back = false;
      return d;
    }
  }
  if (fell_back) *fell_back = true;
  return choose_disjunction_simple(y, RuleKind::kMostFractional);
}

// Appends the two children of the split to the tree and marks the node
// branched. The lower side (pi.y <= eta) gets the smaller id.
inline std::pair<int, int> branch(BnbTree& tree, int node_id,
                                  const SplitDisjunction& disjunction) {
  if (node_id < 0 || node_id >= static_cast<int>(tree.nodes.size())) {
    throw std::out_of_range("branch: no such node");
  }
  if (tree.nodes[node_id].status != NodeStatus::kOpen) {
    throw std::logic_error("branch: node is not open");
  }
  if (disjunction.pi.empty() ||
      std::all_of(disjunction.pi.begin(), disjunction.pi.end(),
                  [](long long v) { return v == 0; })) {
    throw std::invalid_argument("branch: zero disjunction");
  }
  int lower_id = static_cast<int>(tree.nodes.size());
  int upper_id = lower_id + 1;
  for (Side side : {Side::kLower, Side::kUpper}) {
    BnbNode child;
    child.id = side == Side::kLower ? lower_id : upper_id;
    child.parent = node_id;
    child.constraints = tree.nodes[node_id].constraints;
    child.constraints.push_back(BranchingConstraint{disjunction, side});
    child.status = NodeStatus::kOpen;
    tree.nodes.push_back(std::move(child));
  }
  tree.nodes[node_id].status = NodeStatus::kBranched;
  return {lower_id, upper_id};
}

struct BnbResult {
  std::optional<Rat> value;
  std::optional<Solution> solution;
  BnbTree tree;
};

namespace detail {

inline const char* status_name(NodeStatus s) {
  switch (s) {
    case NodeStatus::kOpen: return "open";
    case NodeStatus::kBranched: return "branched";
    case NodeStatus::kPrunedByBound: return "pruned-by-bound";
    case NodeStatus::kPrunedInfeasible: return "pruned-infeasible";
    case NodeStatus::kIntegralLeaf: return "integral-leaf";
  }
  return "?";
}

inline NodeStatus status_from_name(const std::string& s) {
  if (s == "open") return NodeStatus::kOpen;
  if (s == "branched") return NodeStatus::kBranched;
  if (s == "pruned-by-bound") return NodeStatus::kPrunedByBound;
  if (s == "pruned-infeasible") return NodeStatus::kPrunedInfeasible;
  if (s == "integral-leaf") return NodeStatus::kIntegralLeaf;
  throw std::runtime_error("tree dump: unknown node status '" + s + "'");
}

inline nlohmann::ordered_json node_record(const BnbNode& node) {
  nlohmann::ordered_json rec;
  rec["id"] = node.id;
  if (node.parent) {
    rec["parent"] = *node.parent;
  } else {
    rec["parent"] = nullptr;
  }
  rec["status"] = status_name(node.status);
  if (node.bound) {
    rec["bound"] = lotsplit::to_string(*node.bound);
  } else {
    rec["bound"] = nullptr;
  }
  nlohmann::ordered_json cons = nlohmann::ordered_json::array();
  for (const BranchingConstraint& bc : node.constraints) {
    nlohmann::ordered_json c;
    c["pi"] = bc.disjunction.pi;
    c["eta"] = bc.disjunction.eta;
    c["side"] = bc.side == Side::kLower ? "le" : "ge";
    cons.push_back(std::move(c));
  }
  rec["constraints"] = std::move(cons);
  return rec;
}

// Streams node records as they are finalized; the trailing "end" record is
// what marks a dump as complete.
class TreeDumpWriter {
 public:
  TreeDumpWriter(std::ostream* os, int n, const std::string& rule,
                 const std::string& selection, unsigned long long seed,
                 long long node_cap)
      : os_(os) {
    if (!os_) return;
    nlohmann::ordered_json meta;
    meta["meta"] = {{"format", "lotsplit-tree-v1"},
                    {"n", n},
                    {"rule", rule},
                    {"selection", selection},
                    {"seed", seed},
                    {"node_cap", node_cap}};
    *os_ << meta.dump() << "\n";
  }

  void node(const BnbNode& n) {
    if (os_) *os_ << node_record(n).dump() << "\n";
  }

  void finish(const BnbTree& tree) {
    if (!os_) return;
    nlohmann::ordered_json end;
    end["end"] = {
        {"complete", tree.complete},
        {"incumbent", tree.incumbent_value
                          ? nlohmann::ordered_json(lotsplit::to_string(*tree.incumbent_value))
                          : nlohmann::ordered_json(nullptr)},
        {"nodes", tree.nodes.size()}};
    *os_ << end.dump() << "\n";
    os_->flush();
  }

 private:
  std::ostream* os_;
};

}  // namespace detail

// Branch and bound over the setup variables with exact node relaxations.
//
// A popped node is pruned when its LP value is >= the incumbent (the tree
// counts leaves of a solve, not of an enumeration), closed as an integral
// leaf when its y block is 0/1, and branched on the rule's split otherwise.
// Warm starts seed the incumbent with the DP optimum, which isolates tree
// size from incumbent luck; every completed run returns the exact optimum
// either way. Node ids are assigned in creation order, so a child id always
// exceeds its parent's.
inline BnbResult solve_bnb(const Instance& inst, const BranchingRule& rule,
                           NodeSelection selection, const BnbLimits& limits = {},
                           std::ostream* dump = nullptr) {
  if (limits.node_cap < 1) throw std::invalid_argument("node cap must be >= 1");
  const int n = inst.n;
  const MilpModel model = build_milp(inst);

  BnbResult res;
  BnbTree& tree = res.tree;
  detail::TreeDumpWriter writer(dump, n, rule_name(rule.kind),
                                selection_name(selection), rule.seed,
                                limits.node_cap);

  if (limits.warm_start) {
    PlanResult dp = dp_solve(inst);
    tree.incumbent_value = dp.value;
    tree.incumbent = std::move(dp.plan);
  }

  BnbNode root;
  root.id = 0;
  tree.nodes.push_back(std::move(root));

  std::mt19937_64 rng(rule.seed);

  // Best-bound priority: the parent's LP value, a valid lower bound for the
  // child before its own relaxation is solved. The root ranks first.
  struct Entry {
    std::optional<Rat> priority;
    int id;
  };
  auto entry_after = [](const Entry& a, const Entry& b) {
    if (a.priority && b.priority && *a.priority != *b.priority) {
      return *a.priority > *b.priority;
    }
    if (!a.priority != !b.priority) return static_cast<bool>(a.priority);
    return a.id > b.id;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(entry_after)> best_bound(
      entry_after);
  std::vector<int> stack;
  auto push = [&](int id, const std::optional<Rat>& prio) {
    if (selection == NodeSelection::kBestBound) {
      best_bound.push(Entry{prio, id});
    } else {
      stack.push_back(id);
    }
  };
  auto pop = [&]() {
    if (selection == NodeSelection::kBestBound) {
      int id = best_bound.top().id;
      best_bound.pop();
      return id;
    }
    int id = stack.back();
    stack.pop_back();
    return id;
  };
  auto frontier_empty = [&]() {
    return selection == NodeSelection::kBestBound ? best_bound.empty()
                                                  : stack.empty();
  };

  push(0, std::nullopt);
  tree.complete = true;
  while (!frontier_empty()) {
    const int id = pop();

    std::vector<LpRow> extra;
    extra.reserve(tree.nodes[id].constraints.size());
    for (const BranchingConstraint& bc : tree.nodes[id].constraints) {
      extra.push_back(constraint_row(bc, n));
    }
    const LinearProgram node_lp = with_extra_rows(model.lp, extra);
    const LpSolution sol = lp_solve(node_lp);
    ++tree.lps_solved;
    if (limits.verify_lp_certificates) {
      if (!verify_certificate(node_lp, sol)) {
        throw std::logic_error("node LP certificate failed verification");
      }
      ++tree.lps_verified;
    }

    if (sol.status == LpStatus::kInfeasible) {
      tree.nodes[id].status = NodeStatus::kPrunedInfeasible;
      writer.node(tree.nodes[id]);
      continue;
    }
    if (sol.status == LpStatus::kUnbounded) {
      throw std::logic_error("node relaxation cannot be unbounded");
    }
    tree.nodes[id].bound = sol.value;
    if (tree.incumbent_value && sol.value >= *tree.incumbent_value) {
      tree.nodes[id].status = NodeStatus::kPrunedByBound;
      writer.node(tree.nodes[id]);
      continue;
    }

    std::vector<Rat> y(sol.point.begin() + n, sol.point.end());
    bool integral = true;
    for (const Rat& yi : y) {
      if (yi != 0 && yi != 1) {
        integral = false;
        break;
      }
    }
    if (integral) {
      tree.nodes[id].status = NodeStatus::kIntegralLeaf;
      tree.incumbent_value = sol.value;
      tree.incumbent = Solution{{sol.point.begin(), sol.point.begin() + n},
                                std::move(y)};
      writer.node(tree.nodes[id]);
      continue;
    }

    if (static_cast<long long>(tree.nodes.size()) + 2 > limits.node_cap) {
      // Branching would exceed the cap; this node and the rest of the
      // frontier stay open and the tree is reported incomplete.
      tree.complete = false;
      writer.node(tree.nodes[id]);
      break;
    }

    SplitDisjunction disj;
    bool fell_back = false;
    if (rule.kind == RuleKind::kRandomSplit) {
      disj = choose_disjunction_general(y, rule, rng, &fell_back);
    } else {
      disj = choose_disjunction_simple(y, rule.kind);
    }
    tree.nodes[id].used_fallback = fell_back;
    {
      // The split must cut off the fractional point: eta < pi.y < eta + 1.
      Rat dot = 0;
      for (int i = 0; i < n; ++i) {
        if (disj.pi[i] != 0) dot += Rat(static_cast<long>(disj.pi[i])) * y[i];
      }
      if (dot <= Rat(static_cast<long>(disj.eta)) ||
          dot >= Rat(static_cast<long>(disj.eta + 1))) {
        throw std::logic_error("branching rule produced a satisfied split");
      }
    }
    auto [lo, hi] = branch(tree, id, disj);
    writer.node(tree.nodes[id]);
    if (selection == NodeSelection::kDepthFirst) {
      push(hi, tree.nodes[id].bound);
      push(lo, tree.nodes[id].bound);  // lower side explored first
    } else {
      push(lo, tree.nodes[id].bound);
      push(hi, tree.nodes[id].bound);
    }
  }

  // Anything left on the frontier was never processed.
  while (!frontier_empty()) {
    int id = pop();
    writer.node(tree.nodes[id]);
  }
  writer.finish(tree);

  res.value = tree.incumbent_value;
  res.solution = tree.incumbent;
  return res;
}

// --- tree dump format -------------------------------------------------------
//
// JSON lines: a {"meta": ...} header, one record per node appended as the
// node is finalized, and a {"end": ...} trailer. A file without the trailer
// (or with open nodes) is an incomplete run.

struct TreeDumpMeta {
  int n = 0;
  std::string rule;
  std::string selection;
  unsigned long long seed = 0;
  long long node_cap = 0;
  bool has_end = false;
};

struct LoadedTreeDump {
  BnbTree tree;
  TreeDumpMeta meta;
};

// Writes a finished tree in node-id order; same format as the streamed dump.
inline void write_tree_dump(const BnbTree& tree, const TreeDumpMeta& meta,
                            std::ostream& os) {
  detail::TreeDumpWriter writer(&os, meta.n, meta.rule, meta.selection,
                                meta.seed, meta.node_cap);
  for (const BnbNode& node : tree.nodes) writer.node(node);
  writer.finish(tree);
}

inline LoadedTreeDump read_tree_dump(std::istream& is) {
  LoadedTreeDump out;
  std::string line;
  bool saw_meta = false;
  std::vector<BnbNode> nodes;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(std::string("tree dump: bad record: ") + e.what());
    }
    if (rec.contains("meta")) {
      const auto& m = rec["meta"];
      out.meta.n = m.at("n").get<int>();
      out.meta.rule = m.value("rule", "");
      out.meta.selection = m.value("selection", "");
      out.meta.seed = m.value("seed", 0ull);
      out.meta.node_cap = m.value("node_cap", 0ll);
      saw_meta = true;
      continue;
    }
    if (rec.contains("end")) {
      const auto& e = rec["end"];
      out.meta.has_end = true;
      out.tree.complete = e.at("complete").get<bool>();
      if (!e.at("incumbent").is_null()) {
        out.tree.incumbent_value =
            parse_rational(e.at("incumbent").get<std::string>());
      }
      continue;
    }
    BnbNode node;
    node.id = rec.at("id").get<int>();
    if (!rec.at("parent").is_null()) node.parent = rec.at("parent").get<int>();
    node.status = detail::status_from_name(rec.at("status").get<std::string>());
    if (!rec.at("bound").is_null()) {
      node.bound = parse_rational(rec.at("bound").get<std::string>());
    }
    for (const auto& c : rec.at("constraints")) {
      BranchingConstraint bc;
      bc.disjunction.pi = c.at("pi").get<std::vector<long long>>();
      bc.disjunction.eta = c.at("eta").get<long long>();
      std::string side = c.at("side").get<std::string>();
      if (side == "le") {
        bc.side = Side::kLower;
      } else if (side == "ge") {
        bc.side = Side::kUpper;
      } else {
        throw std::runtime_error("tree dump: unknown side '" + side + "'");
      }
      if (static_cast<int>(bc.disjunction.pi.size()) != out.meta.n) {
        throw std::runtime_error("tree dump: constraint length != n");
      }
      node.constraints.push_back(std::move(bc));
    }
    nodes.push_back(std::move(node));
  }
  if (!saw_meta) throw std::runtime_error("tree dump: missing meta record");
  if (!out.meta.has_end) {
    throw std::runtime_error("tree dump: truncated (missing end record)");
  }

  std::sort(nodes.begin(), nodes.end(),
            [](const BnbNode& a, const BnbNode& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id != static_cast<int>(i)) {
      throw std::runtime_error("tree dump: node ids must be 0..k-1");
    }
  }
  if (nodes.empty()) throw std::runtime_error("tree dump: no nodes");

  // Structural invariants: one root, children extend the parent's constraint
  // stack by exactly one, and a branched node has exactly the two sides of
  // one disjunction as children.
  std::vector<std::vector<int>> children(nodes.size());
  int roots = 0;
  for (const BnbNode& node : nodes) {
    if (!node.parent) {
      ++roots;
      if (!node.constraints.empty()) {
        throw std::runtime_error("tree dump: root with branching constraints");
      }
      continue;
    }
    if (*node.parent < 0 || *node.parent >= static_cast<int>(nodes.size()) ||
        *node.parent >= node.id) {
      throw std::runtime_error("tree dump: bad parent reference");
    }
    const BnbNode& par = nodes[*node.parent];
    if (node.constraints.size() != par.constraints.size() + 1) {
      throw std::runtime_error(
          "tree dump: child must add exactly one constraint");
    }
    for (std::size_t k = 0; k < par.constraints.size(); ++k) {
      const auto& a = par.constraints[k];
      const auto& b = node.constraints[k];
      if (a.disjunction.pi != b.disjunction.pi ||
          a.disjunction.eta != b.disjunction.eta || a.side != b.side) {
        throw std::runtime_error("tree dump: child does not extend parent");
      }
    }
    children[*node.parent].push_back(node.id);
  }
  if (roots != 1) throw std::runtime_error("tree dump: need exactly one root");
  for (const BnbNode& node : nodes) {
    const auto& kids = children[node.id];
    if (node.status == NodeStatus::kBranched) {
      if (kids.size() != 2) {
        throw std::runtime_error("tree dump: branched node needs two children");
      }
      const auto& a = nodes[kids[0]].constraints.back();
      const auto& b = nodes[kids[1]].constraints.back();
      if (a.disjunction.pi != b.disjunction.pi ||
          a.disjunction.eta != b.disjunction.eta || a.side == b.side) {
        throw std::runtime_error(
            "tree dump: children must take the two sides of one disjunction");
      }
    } else if (!kids.empty()) {
      throw std::runtime_error("tree dump: non-branched node with children");
    }
  }
  if (out.tree.complete) {
    for (const BnbNode& node : nodes) {
      if (node.status == NodeStatus::kOpen) {
        throw std::runtime_error("tree dump: complete run with open nodes");
      }
    }
  }
  out.tree.nodes = std::move(nodes);
  out.tree.root = 0;
  return out;
}

}  // namespace lotsplit

#endif  // LOTSPLIT_BNB_HPP_
