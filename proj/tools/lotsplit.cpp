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

// Command-line front end. Exit codes are a stable contract for scripting:
//   0  success / audit pass
//   1  usage error (bad flags, unreadable or malformed inputs, mismatched n)
//   2  incomplete run or damaged tree dump
//   3  audit failure

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "lotsplit/bnb.hpp"
#include "lotsplit/certificate.hpp"
#include "lotsplit/lotsizing.hpp"

namespace {

using namespace lotsplit;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIncomplete = 2;
constexpr int kExitAuditFail = 3;

std::optional<RuleKind> rule_from_name(const std::string& name) {
  if (name == "most-fractional") return RuleKind::kMostFractional;
  if (name == "first-fractional") return RuleKind::kFirstFractional;
  if (name == "random-split") return RuleKind::kRandomSplit;
  return std::nullopt;
}

std::optional<NodeSelection> selection_from_name(const std::string& name) {
  if (name == "best-bound") return NodeSelection::kBestBound;
  if (name == "depth-first") return NodeSelection::kDepthFirst;
  return std::nullopt;
}

std::optional<Instance> load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read instance file '" << path << "'\n";
    return std::nullopt;
  }
  try {
    return read_instance(in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return std::nullopt;
  }
}

void print_plan(const Rat& value, const Solution& plan) {
  std::cout << "optimal: " << to_string(value) << "\n";
  std::cout << "x: " << join_rationals(plan.x) << "\n";
  std::cout << "y: " << join_rationals(plan.y) << "\n";
}

int cmd_generate(int n, const std::string& out_path) {
  const Instance inst = hard_instance(n);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return kExitUsage;
  }
  write_instance(inst, out);
  if (!out.good()) {
    std::cerr << "error: short write to '" << out_path << "'\n";
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_solve(const std::string& instance_path, const std::string& method,
              const std::string& rule_name, const std::string& selection_name,
              unsigned long long seed, long long node_cap,
              const std::string& tree_out, bool cold) {
  const std::optional<Instance> inst = load_instance(instance_path);
  if (!inst) return kExitUsage;
  std::cout << "method: " << method << "\n";

  if (method == "dp") {
    const PlanResult r = dp_solve(*inst);
    print_plan(r.value, r.plan);
    return kExitOk;
  }
  if (method == "brute") {
    const PlanResult r = brute_force_solve(*inst);
    print_plan(r.value, r.plan);
    return kExitOk;
  }
  if (method != "bnb") {
    std::cerr << "error: unknown method '" << method << "'\n";
    return kExitUsage;
  }

  const auto kind = rule_from_name(rule_name);
  if (!kind) {
    std::cerr << "error: unknown rule '" << rule_name << "'\n";
    return kExitUsage;
  }
  const auto selection = selection_from_name(selection_name);
  if (!selection) {
    std::cerr << "error: unknown selection '" << selection_name << "'\n";
    return kExitUsage;
  }
  BranchingRule rule;
  rule.kind = *kind;
  rule.seed = seed;
  BnbLimits limits;
  limits.node_cap = node_cap;
  limits.warm_start = !cold;

  std::ofstream tree_stream;
  std::ostream* dump = nullptr;
  if (!tree_out.empty()) {
    tree_stream.open(tree_out);
    if (!tree_stream) {
      std::cerr << "error: cannot write tree dump '" << tree_out << "'\n";
      return kExitUsage;
    }
    dump = &tree_stream;
  }

  const BnbResult r = solve_bnb(*inst, rule, *selection, limits, dump);
  const TreeStats stats = tree_stats(r.tree);
  if (r.value && r.solution) print_plan(*r.value, *r.solution);
  std::cout << "nodes: " << stats.nodes << "\n";
  std::cout << "leaves: " << stats.leaves << "\n";
  std::cout << "depth: " << stats.depth << "\n";
  std::cout << "complete: " << (r.tree.complete ? "true" : "false") << "\n";
  if (!tree_out.empty()) std::cout << "tree-out: " << tree_out << "\n";
  if (!r.tree.complete) {
    std::cout << "incomplete: node cap exceeded\n";
    return kExitIncomplete;
  }
  return kExitOk;
}

int cmd_audit(const std::string& instance_path, const std::string& tree_path,
              bool enforce_strong) {
  const std::optional<Instance> inst = load_instance(instance_path);
  if (!inst) return kExitUsage;

  std::ifstream in(tree_path);
  if (!in) {
    std::cerr << "error: cannot read tree dump '" << tree_path << "'\n";
    return kExitUsage;
  }
  LoadedTreeDump dump;
  try {
    dump = read_tree_dump(in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "incomplete\n";
    return kExitIncomplete;
  }
  if (dump.meta.n != inst->n) {
    std::cerr << "error: tree dump is for n=" << dump.meta.n
              << " but the instance has n=" << inst->n << "\n";
    return kExitUsage;
  }
  if (!dump.tree.complete) {
    std::cerr << "incomplete\n";
    return kExitIncomplete;
  }
  const AuditReport report = audit_tree(dump.tree, inst->n, enforce_strong);
  report.print(std::cout);
  return report.pass ? kExitOk : kExitAuditFail;
}

struct SweepRow {
  int n;
  std::string rule;
  std::string selection;
  unsigned long long seed;
  long long nodes = 0;
  long long leaves = 0;
  int depth = 0;
  std::string opt_value;  // empty when the run failed
  long long theorem_bound = 0;
  bool bound_satisfied = false;
  long long wall_time_ms = 0;
};

int cmd_sweep(const std::string& range, std::vector<std::string> rules,
              std::vector<unsigned long long> seeds,
              const std::string& selection_name, long long node_cap,
              const std::string& out_path, bool no_wall_time) {
  int n_lo = 0;
  int n_hi = 0;
  const auto dots = range.find("..");
  try {
    if (dots == std::string::npos) {
      n_lo = n_hi = std::stoi(range);
    } else {
      n_lo = std::stoi(range.substr(0, dots));
      n_hi = std::stoi(range.substr(dots + 2));
    }
  } catch (const std::exception&) {
    std::cerr << "error: bad range '" << range << "' (want A..B)\n";
    return kExitUsage;
  }
  if (n_lo < 1 || n_hi < n_lo) {
    std::cerr << "error: bad range '" << range << "'\n";
    return kExitUsage;
  }
  const auto selection = selection_from_name(selection_name);
  if (!selection) {
    std::cerr << "error: unknown selection '" << selection_name << "'\n";
    return kExitUsage;
  }
  if (rules.empty()) rules = {"most-fractional"};
  if (seeds.empty()) seeds = {0};
  std::sort(rules.begin(), rules.end());
  rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  for (const std::string& r : rules) {
    if (!rule_from_name(r)) {
      std::cerr << "error: unknown rule '" << r << "'\n";
      return kExitUsage;
    }
  }

  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return kExitUsage;
  }

  std::vector<SweepRow> table;
  for (int n = n_lo; n <= n_hi; ++n) {
    for (const std::string& rname : rules) {
      for (unsigned long long seed : seeds) {
        SweepRow row;
        row.n = n;
        row.rule = rname;
        row.selection = selection_name;
        row.seed = seed;
        row.theorem_bound = stated_leaf_bound(n);
        const auto start = std::chrono::steady_clock::now();
        try {
          BranchingRule rule;
          rule.kind = *rule_from_name(rname);
          rule.seed = seed;
          BnbLimits limits;
          limits.node_cap = node_cap;
          const BnbResult r = solve_bnb(hard_instance(n), rule, *selection, limits);
          const TreeStats stats = tree_stats(r.tree);
          row.nodes = stats.nodes;
          row.leaves = stats.leaves;
          row.depth = stats.depth;
          if (r.value) row.opt_value = to_string(*r.value);
          if (r.tree.complete) {
            const AuditReport report = audit_tree(r.tree, n);
            row.bound_satisfied = report.pass;
          }
        } catch (const std::exception& e) {
          std::cerr << "sweep: n=" << n << " rule=" << rname << " seed=" << seed
                    << " failed: " << e.what() << "\n";
        }
        const auto stop = std::chrono::steady_clock::now();
        row.wall_time_ms =
            no_wall_time
                ? 0
                : std::chrono::duration_cast<std::chrono::milliseconds>(stop - start)
                      .count();
        table.push_back(std::move(row));
      }
    }
  }

  out << "n,rule,selection,seed,nodes,leaves,depth,opt_value,theorem_bound,"
         "bound_satisfied,wall_time_ms\n";
  for (const SweepRow& row : table) {
    out << row.n << ',' << row.rule << ',' << row.selection << ',' << row.seed
        << ',' << row.nodes << ',' << row.leaves << ',' << row.depth << ','
        << row.opt_value << ',' << row.theorem_bound << ','
        << (row.bound_satisfied ? 1 : 0) << ',' << row.wall_time_ms << "\n";
  }
  if (!out.good()) {
    std::cerr << "error: short write to '" << out_path << "'\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-arithmetic lot-sizing branch-and-bound laboratory"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "write a hard-family instance file");
  int gen_n = 0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "number of periods (>= 1)")->required();
  gen->add_option("--out", gen_out, "output path")->required();

  auto* solve = app.add_subcommand("solve", "solve an instance file");
  std::string solve_instance, solve_method = "dp";
  std::string solve_rule = "most-fractional", solve_selection = "best-bound";
  unsigned long long solve_seed = 0;
  long long solve_cap = 1'000'000;
  std::string solve_tree_out;
  bool solve_cold = false;
  solve->add_option("instance", solve_instance, "instance file")->required();
  solve->add_option("--method", solve_method, "dp | bnb | brute");
  solve->add_option("--rule", solve_rule,
                    "most-fractional | first-fractional | random-split");
  solve->add_option("--selection", solve_selection, "best-bound | depth-first");
  solve->add_option("--seed", solve_seed, "random-split seed");
  solve->add_option("--node-cap", solve_cap, "maximum tree size");
  solve->add_option("--tree-out", solve_tree_out, "tree dump path (bnb only)");
  solve->add_flag("--cold", solve_cold, "start without the DP incumbent");

  auto* audit = app.add_subcommand("audit", "leaf-count audit of a tree dump");
  std::string audit_instance, audit_tree_path;
  bool audit_strong = false;
  audit->add_option("instance", audit_instance, "instance file")->required();
  audit->add_option("tree", audit_tree_path, "tree dump file")->required();
  audit->add_flag("--enforce-strong-bound", audit_strong,
                  "also require leaves >= fooling-set size");

  auto* sweep = app.add_subcommand("sweep", "tree-size sweep over the hard family");
  std::string sweep_range;
  std::vector<std::string> sweep_rules;
  std::vector<unsigned long long> sweep_seeds;
  std::string sweep_selection = "best-bound";
  long long sweep_cap = 1'000'000;
  std::string sweep_out;
  bool sweep_no_time = false;
  sweep->add_option("--n", sweep_range, "range A..B (or a single n)")->required();
  sweep->add_option("--rule", sweep_rules, "branching rules (repeatable)");
  sweep->add_option("--seed", sweep_seeds, "seeds (repeatable)");
  sweep->add_option("--selection", sweep_selection, "best-bound | depth-first");
  sweep->add_option("--node-cap", sweep_cap, "maximum tree size per run");
  sweep->add_option("--out", sweep_out, "output CSV path")->required();
  sweep->add_flag("--no-wall-time", sweep_no_time,
                  "write 0 in the wall-time column for reproducible output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(gen_n, gen_out);
    if (*solve) {
      return cmd_solve(solve_instance, solve_method, solve_rule,
                       solve_selection, solve_seed, solve_cap, solve_tree_out,
                       solve_cold);
    }
    if (*audit) return cmd_audit(audit_instance, audit_tree_path, audit_strong);
    if (*sweep) {
      return cmd_sweep(sweep_range, sweep_rules, sweep_seeds, sweep_selection,
                       sweep_cap, sweep_out, sweep_no_time);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
