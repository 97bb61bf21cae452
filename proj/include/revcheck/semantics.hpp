#pragma once

#include <complex>
#include <vector>

#include "revcheck/circuit.hpp"
#include "revcheck/verdict.hpp"

namespace revcheck {

// Basis-state convention: line 0 is the most significant bit of the index,
// so a width-n circuit maps index bit (n-1-i) to line i.
inline uint64_t line_bit(uint32_t width, LineId line) { return 1ull << (width - 1 - line); }

inline constexpr uint32_t kDenseSimMaxLines = 14;
inline constexpr uint32_t kTruthTableMaxLines = 20;
inline constexpr double kDefaultAmplitudeTol = 1e-9;

struct PermutationTable {
  uint32_t width = 0;
  std::vector<uint64_t> map;  // map[i] = output basis index for input i

  bool is_identity() const;
  bool operator==(const PermutationTable&) const = default;
};

struct StateVector {
  uint32_t width = 0;
  std::vector<std::complex<double>> amps;

  explicit StateVector(uint32_t w, uint64_t basis = 0);
  double norm_sq() const;
};

struct Classification {
  bool classical = false;
  PermutationTable perm;         // over `support` lines when classical
  std::vector<LineId> support;   // lines the permutation acts on (may be empty)
  uint64_t witness = 0;          // basis index over support lines when properly-quantum
};

/// Per-line output truth table, packed 64 inputs per word. Table bit j of
/// line i gives line i's output for basis input j.
std::vector<std::vector<uint64_t>> wire_functions(const Circuit& c);

PermutationTable permutation_of(const Circuit& c);

/// Applies g to the state in place; checks norm drift stays under tol.
void apply_gate(StateVector& sv, const Gate& g, double tol = kDefaultAmplitudeTol);

StateVector simulate_basis(const Circuit& c, uint64_t basis, double tol = kDefaultAmplitudeTol);

enum class PhaseMode : uint8_t { Exact, GlobalPhase };

Verdict unitary_equiv_identity(const Circuit& c, double tol = kDefaultAmplitudeTol,
                               PhaseMode mode = PhaseMode::Exact);

Classification classify_functionality(const Circuit& c, double tol = kDefaultAmplitudeTol);

/// Column j holds simulate_basis(c, j). Width capped at kDenseSimMaxLines.
std::vector<std::vector<std::complex<double>>> circuit_unitary(const Circuit& c,
                                                               double tol = kDefaultAmplitudeTol);

/// Restriction of c to the given lines (re-indexed in order); every gate
/// must act entirely within them.
Circuit restrict_to_lines(const Circuit& c, const std::vector<LineId>& lines);

}  // namespace revcheck
