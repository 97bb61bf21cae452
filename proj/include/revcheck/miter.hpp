#pragma once

#include "revcheck/circuit.hpp"

namespace revcheck {

/// The four reversible-miter forms. C1 and C2 are equivalent iff any (hence
/// every) variant implements the identity transformation.
enum class MiterVariant : uint8_t { C1_C2inv, C2inv_C1, C2_C1inv, C1inv_C2 };

inline constexpr MiterVariant kAllMiterVariants[4] = {
    MiterVariant::C1_C2inv, MiterVariant::C2inv_C1, MiterVariant::C2_C1inv,
    MiterVariant::C1inv_C2};

const char* to_string(MiterVariant v);

Circuit build_miter(const Circuit& c1, const Circuit& c2, MiterVariant v = MiterVariant::C1_C2inv);

/// Moves the first k gates to the end, in order. Sound only for circuits
/// checked against the identity (the miter is treated as circular).
Circuit rotate(const Circuit& c, size_t k);

}  // namespace revcheck
