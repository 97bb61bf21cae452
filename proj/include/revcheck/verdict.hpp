#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace revcheck {

/// Uniform result of every equivalence check.
struct Verdict {
  enum class Kind : uint8_t { Equivalent, NotEquivalent, Inconclusive };

  Kind kind = Kind::Inconclusive;
  /// Input bits per line (index = line) on which the compared circuits
  /// produce different outputs. Present for NotEquivalent when a classical
  /// counterexample could be reconstructed.
  std::optional<std::vector<uint8_t>> counterexample;
  /// Basis-state witness for quantum checks (index over the miter input
  /// space, or over the classified suffix support, as documented per engine).
  std::optional<uint64_t> witness_basis;
  std::string reason;

  bool equivalent() const { return kind == Kind::Equivalent; }
  bool not_equivalent() const { return kind == Kind::NotEquivalent; }
  bool inconclusive() const { return kind == Kind::Inconclusive; }

  static Verdict eq() { return {Kind::Equivalent, std::nullopt, std::nullopt, {}}; }
  static Verdict neq(std::vector<uint8_t> cex) {
    return {Kind::NotEquivalent, std::move(cex), std::nullopt, {}};
  }
  static Verdict neq_witness(uint64_t basis, std::string why = {}) {
    return {Kind::NotEquivalent, std::nullopt, basis, std::move(why)};
  }
  static Verdict undecided(std::string why) {
    return {Kind::Inconclusive, std::nullopt, std::nullopt, std::move(why)};
  }
};

inline const char* to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Equivalent: return "Equivalent";
    case Verdict::Kind::NotEquivalent: return "NotEquivalent";
    case Verdict::Kind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

}  // namespace revcheck
