#pragma once

#include <optional>
#include <string>
#include <vector>

#include "revcheck/circuit.hpp"
#include "revcheck/options.hpp"
#include "revcheck/rewrite.hpp"
#include "revcheck/solver.hpp"
#include "revcheck/verdict.hpp"

namespace revcheck {

struct VarOrigin {
  enum class Kind : uint8_t { Input, GateTarget, Mismatch };
  Kind kind;
  uint32_t index;  // line for Input/Mismatch, gate position for GateTarget
};

struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;  // DIMACS-style signed literals
  std::vector<VarOrigin> origins;         // origins[v-1] describes variable v
};

struct SatResult {
  bool satisfiable = false;
  std::vector<uint8_t> assignment;  // assignment[v-1] for variable v
};

/// Per-gate encoding state: current CNF variable of every line plus the
/// running variable counter. Inputs occupy variables 1..n.
struct EncodeState {
  std::vector<int> line_var;
  int next_var = 1;

  static EncodeState for_width(uint32_t n);
};

/// Encodes one Mct gate: a fresh variable y for the target line and 2c+2
/// clauses for c controls. Updates the state in place, returns the clauses.
std::vector<std::vector<int>> encode_gate(const Gate& g, EncodeState& st);

/// Full miter encoding: gate clauses, per-targeted-line mismatch variables
/// z_i with four clauses each, and the final disjunction of all z.
/// Returns nullopt when no line is ever targeted (trivially the identity).
std::optional<CnfFormula> encode_miter(const Circuit& m);

std::string export_dimacs(const CnfFormula& f);
CnfFormula parse_dimacs(std::istream& in);

/// Embedded complete solver. nullopt on resource exhaustion. Satisfying
/// assignments are re-verified against every clause before returning.
std::optional<SatResult> solve(const CnfFormula& f, const SolveLimits& limits = {});

/// Runs `cmd` with "{file}" replaced by a DIMACS path; expects the
/// conventional "s SATISFIABLE/UNSATISFIABLE" plus "v" lines output.
/// nullopt when the command fails or its output cannot be parsed.
std::optional<SatResult> solve_external(const CnfFormula& f, const std::string& cmd_template);

struct SatCheckInfo {
  SimplifyReport simplify;
  int num_vars = 0;
  size_t num_clauses = 0;
  int64_t conflicts = 0;
  bool used_external = false;
};

Verdict check_sat(const Circuit& c1, const Circuit& c2, const CheckOptions& opts = {},
                  SatCheckInfo* info = nullptr);

}  // namespace revcheck
