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

#ifndef LOTSPLIT_LP_HPP_
#define LOTSPLIT_LP_HPP_

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lotsplit/rational.hpp"

namespace lotsplit {

enum class Sense { kLe, kEq, kGe };

struct LpRow {
  std::vector<Rat> coeffs;
  Sense sense = Sense::kLe;
  Rat rhs;
};

struct VarBounds {
  Rat lower;                 // always finite
  std::optional<Rat> upper;  // nullopt = +infinity
};

// min objective . x subject to rows and box bounds, all rational.
struct LinearProgram {
  std::vector<Rat> objective;
  std::vector<LpRow> rows;
  std::vector<VarBounds> bounds;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  void validate() const {
    if (bounds.size() != objective.size()) {
      throw std::invalid_argument("bounds/objective dimension mismatch");
    }
    for (const LpRow& r : rows) {
      if (r.coeffs.size() != objective.size()) {
        throw std::invalid_argument("row dimension mismatch");
      }
    }
    for (const VarBounds& b : bounds) {
      if (b.upper && *b.upper < b.lower) {
        throw std::invalid_argument("variable with lower > upper");
      }
    }
  }
};

// Value copy with rows appended; the input is untouched.
inline LinearProgram with_extra_rows(const LinearProgram& lp,
                                     const std::vector<LpRow>& extra) {
  for (const LpRow& r : extra) {
    if (r.coeffs.size() != lp.objective.size()) {
      throw std::invalid_argument("row dimension mismatch");
    }
  }
  LinearProgram out = lp;
  out.rows.insert(out.rows.end(), extra.begin(), extra.end());
  return out;
}

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

// Solver output plus enough certificate data for verify_certificate() to
// re-check the claim against the LinearProgram alone:
//   optimal    — point, value and one dual multiplier per row,
//   infeasible — Farkas row multipliers,
//   unbounded  — a feasible point and an improving ray.
// Dual sign convention for minimization: duals[r] <= 0 for <= rows and
// duals[r] >= 0 for >= rows; reduced costs c - A^T y price the bounds.
struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  std::vector<Rat> point;
  Rat value;
  std::vector<Rat> duals;
  std::vector<Rat> farkas;
  std::vector<Rat> ray;
};

namespace detail {

// Bounded-variable primal simplex on the full tableau, two phases, Bland's
// smallest-index entering and leaving rule throughout. Every pivot is exact,
// so termination follows from Bland's rule alone.
//
// Internal form: structural columns keep their box bounds; every <= / >= row
// gets a slack column in [0, inf); rows whose slack cannot absorb the initial
// residual (and every equality row) get an artificial column. The tableau
// rows are scaled so the initial basis matrix is the identity, and the
// column of each row's slack or artificial keeps an identity image, which is
// where the dual multipliers are read off.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LinearProgram& lp) : lp_(lp) { build(); }

  LpSolution solve() {
    if (need_phase1_) {
      run_phase(true);
      Rat infeas = 0;
      for (int r = 0; r < m_; ++r) {
        if (is_artificial_[basis_[r]]) infeas += val_[r];
      }
      if (infeas > 0) {
        LpSolution sol;
        sol.status = LpStatus::kInfeasible;
        sol.farkas = extract_duals();
        return sol;
      }
      // Freeze artificials at zero and continue with the real objective.
      for (int j = 0; j < ncols_; ++j) {
        if (is_artificial_[j]) upper_[j] = Rat(0);
      }
    }
    for (int j = 0; j < ncols_; ++j) {
      cost_[j] = j < nstruct_ ? lp_.objective[j] : Rat(0);
    }
    int unbounded_col = -1;
    if (!run_phase(false, &unbounded_col)) {
      LpSolution sol;
      sol.status = LpStatus::kUnbounded;
      sol.point = structural_point();
      sol.ray = structural_ray(unbounded_col);
      return sol;
    }
    LpSolution sol;
    sol.status = LpStatus::kOptimal;
    sol.point = structural_point();
    sol.value = 0;
    for (int j = 0; j < nstruct_; ++j) sol.value += lp_.objective[j] * sol.point[j];
    sol.duals = extract_duals();
    return sol;
  }

 private:
  enum class State : unsigned char { kBasic, kAtLower, kAtUpper };

  void build() {
    m_ = lp_.num_rows();
    nstruct_ = lp_.num_vars();

    for (int j = 0; j < nstruct_; ++j) {
      lower_.push_back(lp_.bounds[j].lower);
      upper_.push_back(lp_.bounds[j].upper);
      state_.push_back(State::kAtLower);
    }

    // Residual of each row with all structurals at their lower bound.
    std::vector<Rat> residual(m_);
    for (int r = 0; r < m_; ++r) {
      Rat lhs = 0;
      for (int j = 0; j < nstruct_; ++j) {
        if (lp_.rows[r].coeffs[j] != 0) lhs += lp_.rows[r].coeffs[j] * lower_[j];
      }
      residual[r] = lp_.rows[r].rhs - lhs;
    }

    std::vector<int> slack_col(m_, -1);
    std::vector<int> slack_sign(m_, 0);
    std::vector<bool> slack_basic(m_, false);
    int col = nstruct_;
    for (int r = 0; r < m_; ++r) {
      if (lp_.rows[r].sense == Sense::kEq) continue;
      slack_col[r] = col++;
      slack_sign[r] = lp_.rows[r].sense == Sense::kLe ? 1 : -1;
      Rat sval = Rat(slack_sign[r]) * residual[r];
      slack_basic[r] = sval >= 0;
      lower_.push_back(Rat(0));
      upper_.push_back(std::nullopt);
      state_.push_back(slack_basic[r] ? State::kBasic : State::kAtLower);
    }
    std::vector<int> art_col(m_, -1);
    std::vector<int> art_sign(m_, 0);
    for (int r = 0; r < m_; ++r) {
      if (slack_basic[r]) continue;
      art_col[r] = col++;
      art_sign[r] = residual[r] >= 0 ? 1 : -1;
      lower_.push_back(Rat(0));
      upper_.push_back(std::nullopt);
      state_.push_back(State::kBasic);
      need_phase1_ = true;
    }
    ncols_ = col;

    is_artificial_.assign(ncols_, false);
    cost_.assign(ncols_, Rat(0));
    for (int r = 0; r < m_; ++r) {
      if (art_col[r] >= 0) {
        is_artificial_[art_col[r]] = true;
        cost_[art_col[r]] = 1;  // phase-1 objective
      }
    }

    tab_.assign(m_, std::vector<Rat>(ncols_, Rat(0)));
    val_.assign(m_, Rat(0));
    basis_.assign(m_, -1);
    idcol_.assign(m_, -1);
    idsign_.assign(m_, 1);
    for (int r = 0; r < m_; ++r) {
      // Scale the row so the initial basic column has coefficient +1.
      int scale = slack_basic[r] ? slack_sign[r] : art_sign[r];
      for (int j = 0; j < nstruct_; ++j) {
        if (lp_.rows[r].coeffs[j] != 0) {
          tab_[r][j] = Rat(scale) * lp_.rows[r].coeffs[j];
        }
      }
      if (slack_col[r] >= 0) tab_[r][slack_col[r]] = scale * slack_sign[r];
      if (art_col[r] >= 0) tab_[r][art_col[r]] = scale * art_sign[r];
      if (slack_basic[r]) {
        basis_[r] = slack_col[r];
        val_[r] = Rat(slack_sign[r]) * residual[r];
      } else {
        basis_[r] = art_col[r];
        val_[r] = Rat(art_sign[r]) * residual[r];
      }
      // Dual multipliers are read from the artificial column when there is
      // one (its pre-scaling system column is art_sign * e_r forever),
      // otherwise from the slack column.
      idcol_[r] = art_col[r] >= 0 ? art_col[r] : slack_col[r];
      idsign_[r] = art_col[r] >= 0 ? art_sign[r] : slack_sign[r];
    }
  }

  Rat nonbasic_value(int j) const {
    return state_[j] == State::kAtUpper ? *upper_[j] : lower_[j];
  }

  bool is_fixed(int j) const { return upper_[j] && *upper_[j] == lower_[j]; }

  // One simplex phase. Returns false only when phase 2 detects an
  // unbounded entering direction (reported through unbounded_col).
  bool run_phase(bool phase1, int* unbounded_col = nullptr) {
    while (true) {
      // Simplex multiplier pass: cb[r] = cost of the basic variable of row r.
      std::vector<std::pair<int, Rat>> priced_rows;
      for (int r = 0; r < m_; ++r) {
        if (cost_[basis_[r]] != 0) priced_rows.emplace_back(r, cost_[basis_[r]]);
      }
      int enter = -1;
      int dir = 0;
      for (int j = 0; j < ncols_ && enter < 0; ++j) {
        if (state_[j] == State::kBasic || is_fixed(j)) continue;
        Rat rc = cost_[j];
        for (const auto& [r, cb] : priced_rows) {
          if (tab_[r][j] != 0) rc -= cb * tab_[r][j];
        }
        if (state_[j] == State::kAtLower && rc < 0) {
          enter = j;
          dir = 1;
        } else if (state_[j] == State::kAtUpper && rc > 0) {
          enter = j;
          dir = -1;
        }
      }
      if (enter < 0) return true;  // phase optimal

      // Ratio test: smallest step that drives a basic variable to a bound,
      // against the entering variable's own bound span.
      bool have_row = false;
      Rat best_t;
      int leave_row = -1;
      bool leave_to_lower = true;
      for (int r = 0; r < m_; ++r) {
        const Rat& a = tab_[r][enter];
        if (a == 0) continue;
        Rat delta = Rat(-dir) * a;  // movement of basic r per unit step
        Rat limit;
        bool to_lower;
        if (delta < 0) {
          limit = (val_[r] - lower_[basis_[r]]) / -delta;
          to_lower = true;
        } else {
          if (!upper_[basis_[r]]) continue;
          limit = (*upper_[basis_[r]] - val_[r]) / delta;
          to_lower = false;
        }
        if (!have_row || limit < best_t ||
            (limit == best_t && basis_[r] < basis_[leave_row])) {
          have_row = true;
          best_t = limit;
          leave_row = r;
          leave_to_lower = to_lower;
        }
      }
      std::optional<Rat> span;
      if (upper_[enter]) span = *upper_[enter] - lower_[enter];

      if (!have_row && !span) {
        if (phase1) throw std::logic_error("phase-1 objective cannot be unbounded");
        if (unbounded_col) *unbounded_col = enter;
        return false;
      }

      if (span && (!have_row || *span <= best_t)) {
        // Bound flip: the entering variable crosses to its other bound
        // without a basis change. The step is strictly positive, so the
        // objective strictly improves and flips cannot cycle.
        Rat step = Rat(dir) * *span;
        for (int r = 0; r < m_; ++r) {
          if (tab_[r][enter] != 0) val_[r] -= step * tab_[r][enter];
        }
        state_[enter] = dir > 0 ? State::kAtUpper : State::kAtLower;
        continue;
      }

      Rat step = Rat(dir) * best_t;
      Rat enter_val = nonbasic_value(enter) + step;
      for (int r = 0; r < m_; ++r) {
        if (r != leave_row && tab_[r][enter] != 0) {
          val_[r] -= step * tab_[r][enter];
        }
      }
      int out = basis_[leave_row];
      state_[out] = leave_to_lower ? State::kAtLower : State::kAtUpper;

      std::vector<Rat>& prow = tab_[leave_row];
      Rat piv = prow[enter];
      if (piv != 1) {
        for (int j = 0; j < ncols_; ++j) {
          if (prow[j] != 0) prow[j] /= piv;
        }
      }
      for (int r = 0; r < m_; ++r) {
        if (r == leave_row) continue;
        const Rat factor = tab_[r][enter];
        if (factor == 0) continue;
        std::vector<Rat>& row = tab_[r];
        for (int j = 0; j < ncols_; ++j) {
          if (prow[j] != 0) row[j] -= factor * prow[j];
        }
      }
      basis_[leave_row] = enter;
      state_[enter] = State::kBasic;
      val_[leave_row] = enter_val;
    }
  }

  std::vector<Rat> structural_point() const {
    std::vector<Rat> x(nstruct_);
    for (int j = 0; j < nstruct_; ++j) {
      if (state_[j] != State::kBasic) x[j] = nonbasic_value(j);
    }
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < nstruct_) x[basis_[r]] = val_[r];
    }
    return x;
  }

  // Direction along which the entering column improves forever; only
  // reachable for a variable leaving a finite lower bound upward.
  std::vector<Rat> structural_ray(int enter) const {
    std::vector<Rat> ray(nstruct_, Rat(0));
    if (enter < nstruct_) ray[enter] = 1;
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < nstruct_ && tab_[r][enter] != 0) {
        ray[basis_[r]] = -tab_[r][enter];
      }
    }
    return ray;
  }

  // y = c_B B^{-1}, read through each row's identity-image column.
  std::vector<Rat> extract_duals() const {
    std::vector<std::pair<int, Rat>> priced_rows;
    for (int r = 0; r < m_; ++r) {
      if (cost_[basis_[r]] != 0) priced_rows.emplace_back(r, cost_[basis_[r]]);
    }
    std::vector<Rat> y(m_, Rat(0));
    for (int r = 0; r < m_; ++r) {
      Rat acc = 0;
      for (const auto& [i, cb] : priced_rows) {
        if (tab_[i][idcol_[r]] != 0) acc += cb * tab_[i][idcol_[r]];
      }
      y[r] = Rat(idsign_[r]) * acc;
    }
    return y;
  }

  const LinearProgram& lp_;
  int m_ = 0;
  int nstruct_ = 0;
  int ncols_ = 0;
  bool need_phase1_ = false;

  std::vector<std::vector<Rat>> tab_;  // B^{-1} * A, maintained by pivoting
  std::vector<Rat> val_;               // value of the basic variable per row
  std::vector<int> basis_;
  std::vector<State> state_;
  std::vector<Rat> lower_;
  std::vector<std::optional<Rat>> upper_;
  std::vector<Rat> cost_;
  std::vector<bool> is_artificial_;
  std::vector<int> idcol_;
  std::vector<int> idsign_;
};

}  // namespace detail

inline LpSolution lp_solve(const LinearProgram& lp) {
  lp.validate();
  detail::SimplexSolver solver(lp);
  return solver.solve();
}

// Re-checks an LpSolution from the LinearProgram alone, exactly:
//   optimal    — primal feasibility, dual sign feasibility, complementary
//                slackness on rows and bounds, and equal primal/dual values,
//   infeasible — the Farkas combination caps every box point strictly below
//                the aggregated right-hand side,
//   unbounded  — feasible start point, recession direction, improving cost.
// Any defect, including malformed data, yields false.
inline bool verify_certificate(const LinearProgram& lp, const LpSolution& sol) {
  try {
    lp.validate();
    const int n = lp.num_vars();
    const int m = lp.num_rows();
    const auto un = static_cast<std::size_t>(n);
    const auto um = static_cast<std::size_t>(m);

    auto feasible = [&](const std::vector<Rat>& x) {
      if (x.size() != un) return false;
      for (int j = 0; j < n; ++j) {
        if (x[j] < lp.bounds[j].lower) return false;
        if (lp.bounds[j].upper && x[j] > *lp.bounds[j].upper) return false;
      }
      for (const LpRow& row : lp.rows) {
        Rat lhs = 0;
        for (int j = 0; j < n; ++j) {
          if (row.coeffs[j] != 0) lhs += row.coeffs[j] * x[j];
        }
        switch (row.sense) {
          case Sense::kLe: if (lhs > row.rhs) return false; break;
          case Sense::kEq: if (lhs != row.rhs) return false; break;
          case Sense::kGe: if (lhs < row.rhs) return false; break;
        }
      }
      return true;
    };
    auto sign_ok = [&](const std::vector<Rat>& y) {
      for (int r = 0; r < m; ++r) {
        if (lp.rows[r].sense == Sense::kLe && y[r] > 0) return false;
        if (lp.rows[r].sense == Sense::kGe && y[r] < 0) return false;
      }
      return true;
    };

    switch (sol.status) {
      case LpStatus::kOptimal: {
        if (sol.duals.size() != um) return false;
        if (!feasible(sol.point)) return false;
        Rat primal = 0;
        for (int j = 0; j < n; ++j) primal += lp.objective[j] * sol.point[j];
        if (primal != sol.value) return false;
        if (!sign_ok(sol.duals)) return false;
        Rat dual_obj = 0;
        for (int r = 0; r < m; ++r) {
          if (sol.duals[r] == 0) continue;
          Rat lhs = 0;
          for (int j = 0; j < n; ++j) {
            if (lp.rows[r].coeffs[j] != 0) lhs += lp.rows[r].coeffs[j] * sol.point[j];
          }
          if (lhs != lp.rows[r].rhs) return false;  // complementary slackness
          dual_obj += sol.duals[r] * lp.rows[r].rhs;
        }
        for (int j = 0; j < n; ++j) {
          Rat rc = lp.objective[j];
          for (int r = 0; r < m; ++r) {
            if (sol.duals[r] != 0 && lp.rows[r].coeffs[j] != 0) {
              rc -= sol.duals[r] * lp.rows[r].coeffs[j];
            }
          }
          if (rc > 0) {
            if (sol.point[j] != lp.bounds[j].lower) return false;
            dual_obj += rc * lp.bounds[j].lower;
          } else if (rc < 0) {
            if (!lp.bounds[j].upper || sol.point[j] != *lp.bounds[j].upper) {
              return false;
            }
            dual_obj += rc * *lp.bounds[j].upper;
          }
        }
        return dual_obj == sol.value;
      }
      case LpStatus::kInfeasible: {
        if (sol.farkas.size() != um) return false;
        if (!sign_ok(sol.farkas)) return false;
        // Every feasible x satisfies (A^T y) . x >= y . b; the certificate is
        // valid when even the box supremum of the left side falls short.
        Rat sup = 0;
        for (int j = 0; j < n; ++j) {
          Rat g = 0;
          for (int r = 0; r < m; ++r) {
            if (sol.farkas[r] != 0 && lp.rows[r].coeffs[j] != 0) {
              g += sol.farkas[r] * lp.rows[r].coeffs[j];
            }
          }
          if (g > 0) {
            if (!lp.bounds[j].upper) return false;
            sup += g * *lp.bounds[j].upper;
          } else if (g < 0) {
            sup += g * lp.bounds[j].lower;
          }
        }
        Rat agg_rhs = 0;
        for (int r = 0; r < m; ++r) agg_rhs += sol.farkas[r] * lp.rows[r].rhs;
        return sup < agg_rhs;
      }
      case LpStatus::kUnbounded: {
        if (sol.ray.size() != un) return false;
        if (!feasible(sol.point)) return false;
        bool nonzero = false;
        Rat drop = 0;
        for (int j = 0; j < n; ++j) {
          if (sol.ray[j] < 0) return false;  // finite lower bounds block descent
          if (sol.ray[j] > 0) {
            if (lp.bounds[j].upper) return false;
            nonzero = true;
          }
          drop += lp.objective[j] * sol.ray[j];
        }
        if (!nonzero || drop >= 0) return false;
        for (const LpRow& row : lp.rows) {
          Rat push = 0;
          for (int j = 0; j < n; ++j) {
            if (row.coeffs[j] != 0) push += row.coeffs[j] * sol.ray[j];
          }
          switch (row.sense) {
            case Sense::kLe: if (push > 0) return false; break;
            case Sense::kEq: if (push != 0) return false; break;
            case Sense::kGe: if (push < 0) return false; break;
          }
        }
        return true;
      }
    }
    return false;
  } catch (...) {
    return false;
  }
}

}  // namespace lotsplit

#endif  // LOTSPLIT_LP_HPP_
