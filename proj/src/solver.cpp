#include "revcheck/solver.hpp"

#include <algorithm>
#include <cmath>

namespace revcheck {

CdclSolver::CdclSolver(int num_vars) {
  for (int i = 0; i < num_vars; ++i) add_var();
}

int CdclSolver::add_var() {
  assign_.push_back(-1);
  saved_phase_.push_back(0);
  reason_.push_back(-1);
  level_.push_back(0);
  activity_.push_back(0.0);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  return num_vars();
}

bool CdclSolver::add_clause(std::vector<int> ext) {
  if (unsat_) return false;
  std::vector<Lit> lits;
  lits.reserve(ext.size());
  for (int e : ext) {
    while (std::abs(e) > num_vars()) add_var();
    lits.push_back(import_lit(e));
  }
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (size_t i = 0; i + 1 < lits.size(); ++i)
    if (lits[i] == neg(lits[i + 1])) return true;  // tautology
  // Top-level simplification (solver is used pre-solve only).
  std::vector<Lit> kept;
  for (Lit l : lits) {
    if (value_true(l)) return true;
    if (!value_false(l)) kept.push_back(l);
  }
  if (kept.empty()) {
    unsat_ = true;
    return false;
  }
  if (kept.size() == 1) {
    enqueue(kept[0], -1);
    if (propagate() >= 0) {
      unsat_ = true;
      return false;
    }
    return true;
  }
  clauses_.push_back({std::move(kept), false});
  attach(static_cast<int32_t>(clauses_.size() - 1));
  return true;
}

void CdclSolver::attach(int32_t ci) {
  const Clause& c = clauses_[ci];
  watches_[neg(c.lits[0])].push_back(ci);
  watches_[neg(c.lits[1])].push_back(ci);
}

void CdclSolver::enqueue(Lit l, int32_t reason) {
  uint32_t v = var_of(l);
  assign_[v] = (l & 1) ? 0 : 1;
  saved_phase_[v] = assign_[v];
  reason_[v] = reason;
  level_[v] = static_cast<int32_t>(trail_lim_.size());
  trail_.push_back(l);
}

int32_t CdclSolver::propagate() {
  while (prop_head_ < trail_.size()) {
    Lit p = trail_[prop_head_++];  // p became true; visit clauses watching ~p
    std::vector<int32_t>& ws = watches_[p];
    size_t keep = 0;
    for (size_t wi = 0; wi < ws.size(); ++wi) {
      int32_t ci = ws[wi];
      Clause& c = clauses_[ci];
      // Ensure the false literal is at position 1.
      if (c.lits[0] == neg(p)) std::swap(c.lits[0], c.lits[1]);
      if (value_true(c.lits[0])) {
        ws[keep++] = ci;
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.lits.size(); ++k) {
        if (!value_false(c.lits[k])) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[neg(c.lits[1])].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[keep++] = ci;
      if (value_false(c.lits[0])) {
        // Conflict: keep remaining watches intact.
        for (size_t rest = wi + 1; rest < ws.size(); ++rest) ws[keep++] = ws[rest];
        ws.resize(keep);
        return ci;
      }
      enqueue(c.lits[0], ci);
    }
    ws.resize(keep);
  }
  return -1;
}

void CdclSolver::bump(uint32_t v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
}

void CdclSolver::decay() { var_inc_ /= 0.95; }

void CdclSolver::analyze(int32_t confl, std::vector<Lit>& learnt, int& bt_level) {
  learnt.clear();
  learnt.push_back(0);  // slot for the asserting literal
  int counter = 0;
  Lit p = UINT32_MAX;
  size_t trail_idx = trail_.size();
  const int cur_level = static_cast<int>(trail_lim_.size());

  for (;;) {
    const Clause& c = clauses_[confl];
    for (size_t i = (p == UINT32_MAX ? 0 : 1); i < c.lits.size(); ++i) {
      Lit q = c.lits[i];
      uint32_t v = var_of(q);
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = 1;
      bump(v);
      if (level_[v] == cur_level) {
        counter++;
      } else {
        learnt.push_back(q);
      }
    }
    // Pick the next seen literal on the trail.
    do {
      --trail_idx;
    } while (!seen_[var_of(trail_[trail_idx])]);
    p = trail_[trail_idx];
    uint32_t pv = var_of(p);
    seen_[pv] = 0;
    if (--counter == 0) {
      learnt[0] = neg(p);
      break;
    }
    confl = reason_[pv];
  }
  for (size_t i = 1; i < learnt.size(); ++i) seen_[var_of(learnt[i])] = 0;

  bt_level = 0;
  if (learnt.size() > 1) {
    size_t max_i = 1;
    for (size_t i = 2; i < learnt.size(); ++i)
      if (level_[var_of(learnt[i])] > level_[var_of(learnt[max_i])]) max_i = i;
    std::swap(learnt[1], learnt[max_i]);
    bt_level = level_[var_of(learnt[1])];
  }
}

void CdclSolver::backtrack(int target) {
  if (static_cast<int>(trail_lim_.size()) <= target) return;
  size_t until = trail_lim_[target];
  while (trail_.size() > until) {
    uint32_t v = var_of(trail_.back());
    assign_[v] = -1;
    reason_[v] = -1;
    trail_.pop_back();
  }
  trail_lim_.resize(target);
  prop_head_ = trail_.size();
}

CdclSolver::Lit CdclSolver::pick_branch() {
  uint32_t best = UINT32_MAX;
  double best_act = -1;
  for (uint32_t v = 0; v < assign_.size(); ++v) {
    if (assign_[v] < 0 && activity_[v] > best_act) {
      best = v;
      best_act = activity_[v];
    }
  }
  if (best == UINT32_MAX) return UINT32_MAX;
  return (best << 1) | (saved_phase_[best] ? 0u : 1u);
}

SolveStatus CdclSolver::solve(const SolveLimits& limits) {
  if (unsat_) return SolveStatus::Unsat;
  int64_t conflicts_here = 0;
  int64_t restart_limit = 128;
  int64_t restart_count = 0;

  for (;;) {
    int32_t confl = propagate();
    if (confl >= 0) {
      stats_conflicts_++;
      conflicts_here++;
      if (trail_lim_.empty()) return SolveStatus::Unsat;
      std::vector<Lit> learnt;
      int bt = 0;
      analyze(confl, learnt, bt);
      backtrack(bt);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        clauses_.push_back({learnt, true});
        attach(static_cast<int32_t>(clauses_.size() - 1));
        enqueue(learnt[0], static_cast<int32_t>(clauses_.size() - 1));
      }
      decay();
      if (limits.max_conflicts >= 0 && stats_conflicts_ > limits.max_conflicts)
        return SolveStatus::Unknown;
      if ((conflicts_here & 255) == 0) {
        if (limits.cancel && *limits.cancel) return SolveStatus::Unknown;
        if (limits.deadline && std::chrono::steady_clock::now() > *limits.deadline)
          return SolveStatus::Unknown;
      }
      if (conflicts_here >= restart_limit * (restart_count + 1)) {
        restart_count++;
        restart_limit = static_cast<int64_t>(restart_limit * 1.3);
        backtrack(0);
      }
      continue;
    }
    Lit next = pick_branch();
    if (next == UINT32_MAX) {
      model_.assign(num_vars(), 0);
      for (int v = 0; v < num_vars(); ++v) model_[v] = assign_[v] == 1;
      backtrack(0);
      return SolveStatus::Sat;
    }
    stats_decisions_++;
    trail_lim_.push_back(trail_.size());
    enqueue(next, -1);
  }
}

}  // namespace revcheck
