#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

namespace revcheck {

struct SolveLimits {
  int64_t max_conflicts = -1;  // negative = unlimited
  std::optional<std::chrono::steady_clock::time_point> deadline;
  const std::atomic<bool>* cancel = nullptr;  // polled; true aborts the solve
};

enum class SolveStatus : uint8_t { Sat, Unsat, Unknown };

/// Conflict-driven clause-learning solver with two-watched-literal
/// propagation, first-UIP learning, VSIDS branching and phase saving.
class CdclSolver {
 public:
  explicit CdclSolver(int num_vars = 0);

  int add_var();
  int num_vars() const { return static_cast<int>(assign_.size()); }

  /// Literals are DIMACS-style: +v / -v with v in [1, num_vars].
  /// Returns false if the formula became trivially unsatisfiable.
  bool add_clause(std::vector<int> lits);

  SolveStatus solve(const SolveLimits& limits = {});

  /// Valid after Sat; model[v-1] is the value of variable v.
  const std::vector<uint8_t>& model() const { return model_; }

  int64_t conflicts() const { return stats_conflicts_; }
  int64_t decisions() const { return stats_decisions_; }

 private:
  // Internal literal encoding: var index v (0-based), lit = 2v | sign.
  using Lit = uint32_t;
  static Lit neg(Lit l) { return l ^ 1; }
  static uint32_t var_of(Lit l) { return l >> 1; }

  struct Clause {
    std::vector<Lit> lits;
    bool learned = false;
  };

  Lit import_lit(int ext) const {
    uint32_t v = static_cast<uint32_t>(ext < 0 ? -ext : ext) - 1;
    return (v << 1) | (ext < 0 ? 1u : 0u);
  }

  bool value_true(Lit l) const {
    int8_t a = assign_[var_of(l)];
    return a >= 0 && (a == 1) == !(l & 1);
  }
  bool value_false(Lit l) const {
    int8_t a = assign_[var_of(l)];
    return a >= 0 && (a == 1) == bool(l & 1);
  }
  bool unassigned(Lit l) const { return assign_[var_of(l)] < 0; }

  void enqueue(Lit l, int32_t reason);
  int32_t propagate();  // returns conflicting clause index or -1
  void analyze(int32_t confl, std::vector<Lit>& learnt, int& bt_level);
  void backtrack(int level);
  void bump(uint32_t v);
  void decay();
  Lit pick_branch();
  void attach(int32_t ci);

  std::vector<Clause> clauses_;
  std::vector<std::vector<int32_t>> watches_;  // per lit
  std::vector<int8_t> assign_;                 // -1 unknown, 0 false, 1 true
  std::vector<int8_t> saved_phase_;
  std::vector<int32_t> reason_;
  std::vector<int32_t> level_;
  std::vector<Lit> trail_;
  std::vector<size_t> trail_lim_;
  size_t prop_head_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<uint8_t> seen_;
  bool unsat_ = false;

  std::vector<uint8_t> model_;
  int64_t stats_conflicts_ = 0;
  int64_t stats_decisions_ = 0;
};

}  // namespace revcheck
