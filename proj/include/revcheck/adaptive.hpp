#pragma once

#include <string>
#include <utility>
#include <vector>

#include "revcheck/circuit.hpp"
#include "revcheck/options.hpp"
#include "revcheck/verdict.hpp"

namespace revcheck {

struct SplitResult {
  Circuit prefix;  // conventional gates only
  Circuit suffix;  // residue, possibly properly-quantum
  size_t rotation_applied = 0;
  size_t moves_applied = 0;
};

/// Rotates the miter so its longest contiguous run of conventional gates
/// (circular wrap included, ties to the earliest start) becomes the prefix,
/// then greedily commutes conventional suffix gates into the prefix using
/// exactly-commuting swaps only.
SplitResult split_conventional_quantum(const Circuit& m);

struct AdaptiveStep {
  int step = 0;  // 1..7
  size_t gates_before = 0;
  size_t gates_after = 0;
  std::string engine;
  std::string outcome;
};

struct AdaptiveTrace {
  std::vector<AdaptiveStep> steps;
  int deciding_step() const { return steps.empty() ? 0 : steps.back().step; }
};

std::pair<Verdict, AdaptiveTrace> adaptive_check(const Circuit& c1, const Circuit& c2,
                                                 const CheckOptions& opts = {});

/// Races sat, bdd and cec on a conventional pair; first verdict wins and the
/// losers are cancelled. The verdict (not the winner) is deterministic.
Verdict portfolio_check(const Circuit& c1, const Circuit& c2, const CheckOptions& opts,
                        std::string* winner = nullptr);

}  // namespace revcheck
