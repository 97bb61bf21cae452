#pragma once

#include <optional>
#include <vector>

#include "revcheck/circuit.hpp"
#include "revcheck/options.hpp"
#include "revcheck/rewrite.hpp"

namespace revcheck {

/// Evaluates a conventional circuit on concrete line bits.
std::vector<uint8_t> eval_conventional(const Circuit& c, std::vector<uint8_t> bits);

struct PreparedMiter {
  Circuit miter;
  Circuit rotation_prefix;  // gates rotated off the front during simplify
  SimplifyReport simplify;
  MiterVariant variant = MiterVariant::C1_C2inv;
  size_t gates_before = 0;
};

/// build_miter + optional simplification; variant "auto" (nullopt) tries all
/// four simplifications and keeps the shortest result.
PreparedMiter prepare_miter(const Circuit& c1, const Circuit& c2, const CheckOptions& opts,
                            bool miter_mode = true);

/// Maps a satisfying input of the (rotated, simplified) miter back to an
/// input on which c1 and c2 produce different outputs. nullopt when the
/// rotated-away gates are not conventional, in which case no classical
/// counterexample can be reconstructed.
std::optional<std::vector<uint8_t>> decode_counterexample(const Circuit& c1, const Circuit& c2,
                                                          const PreparedMiter& pm,
                                                          std::vector<uint8_t> miter_input);

}  // namespace revcheck
