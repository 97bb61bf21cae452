#pragma once

#include <complex>
#include <vector>

#include "revcheck/circuit.hpp"
#include "revcheck/rng.hpp"
#include "revcheck/semantics.hpp"

namespace revcheck::testing {

inline const Mat2 kMatX{{{0, 0}, {1, 0}, {1, 0}, {0, 0}}};
inline const Mat2 kMatZ{{{1, 0}, {0, 0}, {0, 0}, {-1, 0}}};
inline const Mat2 kMatS{{{1, 0}, {0, 0}, {0, 0}, {0, 1}}};
inline const Mat2 kMatH{{{0.7071067811865476, 0},
                         {0.7071067811865476, 0},
                         {0.7071067811865476, 0},
                         {-0.7071067811865476, 0}}};

inline Gate random_conventional_gate(Rng& rng, uint32_t width) {
  switch (rng.below(width >= 3 ? 4 : (width >= 2 ? 3 : 1))) {
    case 0:
      return Gate::nott(static_cast<LineId>(rng.below(width)));
    case 1: {
      LineId c = static_cast<LineId>(rng.below(width)), t;
      do t = static_cast<LineId>(rng.below(width));
      while (t == c);
      return Gate::cnot(c, t);
    }
    case 2: {
      LineId a = static_cast<LineId>(rng.below(width)), b;
      do b = static_cast<LineId>(rng.below(width));
      while (b == a);
      return Gate::swap(a, b);
    }
    default: {
      LineId c1 = static_cast<LineId>(rng.below(width)), c2, t;
      do c2 = static_cast<LineId>(rng.below(width));
      while (c2 == c1);
      do t = static_cast<LineId>(rng.below(width));
      while (t == c1 || t == c2);
      return Gate::toffoli(c1, c2, t);
    }
  }
}

inline Gate random_quantum_gate(Rng& rng, uint32_t width) {
  LineId t = static_cast<LineId>(rng.below(width));
  switch (rng.below(3)) {
    case 0:
      return Gate::h(t);
    case 1: {
      std::vector<LineId> ctl;
      if (width >= 2 && rng.coin()) {
        LineId c;
        do c = static_cast<LineId>(rng.below(width));
        while (c == t);
        ctl.push_back(c);
      }
      int64_t den = int64_t(1) << (1 + rng.below(4));
      int64_t num = 1 + static_cast<int64_t>(rng.below(static_cast<uint64_t>(den)));
      return Gate::cphase(PhaseFraction(num, den), std::move(ctl), t);
    }
    default: {
      const Mat2* mats[] = {&kMatX, &kMatZ, &kMatS, &kMatH};
      std::vector<LineId> ctl;
      if (width >= 2 && rng.coin()) {
        LineId c;
        do c = static_cast<LineId>(rng.below(width));
        while (c == t);
        ctl.push_back(c);
      }
      return Gate::cu(*mats[rng.below(4)], std::move(ctl), t);
    }
  }
}

inline Circuit random_conventional_circuit(Rng& rng, uint32_t width, size_t len) {
  Circuit c(width);
  for (size_t i = 0; i < len; ++i) c.push(random_conventional_gate(rng, width));
  return c;
}

inline Circuit random_mixed_circuit(Rng& rng, uint32_t width, size_t len) {
  Circuit c(width);
  for (size_t i = 0; i < len; ++i) {
    if (rng.below(3) == 0)
      c.push(random_quantum_gate(rng, width));
    else
      c.push(random_conventional_gate(rng, width));
  }
  return c;
}

inline bool unitaries_close(const Circuit& a, const Circuit& b, double tol = 1e-10) {
  if (a.width != b.width) return false;
  auto ua = circuit_unitary(a);
  auto ub = circuit_unitary(b);
  for (size_t col = 0; col < ua.size(); ++col)
    for (size_t row = 0; row < ua[col].size(); ++row)
      if (std::abs(ua[col][row] - ub[col][row]) > tol) return false;
  return true;
}

/// Sound structural edits that keep the function: inverse-pair insertion,
/// commuting adjacent swaps, swap <-> 3 CNOT replacements.
Circuit equivalent_variant(const Circuit& c, Rng& rng, int edits);

inline uint64_t bits_to_index(const std::vector<uint8_t>& bits) {
  uint64_t idx = 0;
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) idx |= 1ull << (bits.size() - 1 - i);
  return idx;
}

}  // namespace revcheck::testing
