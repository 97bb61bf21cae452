#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "revcheck/miter.hpp"

namespace revcheck {

/// Shared knobs for every checking engine.
struct CheckOptions {
  /// nullopt = auto: try all four simplified variants, keep the shortest.
  std::optional<MiterVariant> variant = MiterVariant::C1_C2inv;

  bool simplify = true;
  int simplify_rounds = 0;  // 0 = auto

  uint64_t seed = 0xda7a5eedull;
  std::optional<double> timeout_sec;

  /// Cooperative cancellation (used by portfolio mode).
  const std::atomic<bool>* cancel = nullptr;

  // Engine budgets.
  int64_t sat_conflict_budget = -1;     // unlimited
  size_t bdd_node_budget = 1ull << 22;
  int sim_words = 64;                   // 64-bit words of random patterns

  double amplitude_tol = 1e-9;

  /// External SAT command template with a "{file}" placeholder; empty =
  /// embedded solver.
  std::string external_solver_cmd;

  /// Race sat/bdd/cec on conventional residues inside adaptive_check.
  bool portfolio = false;

  std::optional<std::chrono::steady_clock::time_point> deadline() const {
    if (!timeout_sec) return std::nullopt;
    return std::chrono::steady_clock::now() +
           std::chrono::duration_cast<std::chrono::steady_clock::duration>(
               std::chrono::duration<double>(*timeout_sec));
  }
};

}  // namespace revcheck
