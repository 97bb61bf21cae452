#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "revcheck/circuit.hpp"
#include "revcheck/options.hpp"
#include "revcheck/rewrite.hpp"
#include "revcheck/verdict.hpp"

namespace revcheck {

struct BddBudgetExceeded : CircuitError {
  BddBudgetExceeded() : CircuitError("BDD node budget exceeded") {}
};

enum class BddOp : uint8_t { And, Xor, Or };

/// Reduced ordered BDD package: hash-consed (var, low, high) nodes without
/// complement edges, fixed variable order, memoized apply, mark-and-compact
/// garbage collection over caller-registered roots.
class BddManager {
 public:
  using Ref = uint32_t;
  static constexpr Ref kFalse = 0;
  static constexpr Ref kTrue = 1;

  explicit BddManager(uint32_t num_vars, size_t node_budget = 1ull << 22);

  uint32_t num_vars() const { return num_vars_; }
  Ref var(uint32_t i);
  Ref apply(BddOp op, Ref a, Ref b);

  size_t node_count() const { return nodes_.size(); }
  /// Nodes reachable from the given roots.
  size_t live_count(const std::vector<Ref>& roots) const;
  /// Compacts the store to the live set; remaps the roots in place and
  /// clears the operation cache.
  void collect(std::vector<Ref>& roots);

  /// Evaluates under a concrete assignment (bit per variable).
  bool eval(Ref r, const std::vector<uint8_t>& values) const;
  /// Some satisfying assignment; untouched variables default to 0.
  std::vector<uint8_t> any_sat(Ref r) const;

  uint32_t node_var(Ref r) const { return nodes_[r].var; }
  Ref node_low(Ref r) const { return nodes_[r].low; }
  Ref node_high(Ref r) const { return nodes_[r].high; }

 private:
  struct Node {
    uint32_t var;
    Ref low, high;
  };

  Ref make(uint32_t var, Ref low, Ref high);

  uint32_t num_vars_;
  size_t budget_;
  std::vector<Node> nodes_;
  std::unordered_map<uint64_t, Ref> unique_;
  std::unordered_map<uint64_t, Ref> cache_;
};

struct BddCheckInfo {
  SimplifyReport simplify;
  size_t peak_live = 0;
  std::vector<size_t> live_trace;  // per consumed gate, when enabled
};

/// One BDD per line, variable order = line index. Mct updates the target
/// by XOR with the AND of its controls.
std::vector<BddManager::Ref> build_wire_bdds(BddManager& m, const Circuit& c);

Verdict check_bdd(const Circuit& c1, const Circuit& c2, const CheckOptions& opts = {},
                  BddCheckInfo* info = nullptr);

}  // namespace revcheck
