#pragma once

#include "revcheck/circuit.hpp"

namespace revcheck::bench {

/// CNOT(0 -> k) realized with adjacent-line CNOTs only (swap-chain
/// conjugation of the nearest-neighbour CNOT).
Circuit gen_lnn_cnot(uint32_t n, uint32_t k);

/// Ripple-carry adder on 2n+2 lines with the interleaved register layout
/// of the cited construction: carry-in on line 0, then (b_i, a_i) pairs on
/// lines 1+2i and 2+2i, carry-out accumulator z on line 2n+1. Maps
/// (a, b, c0, z) to (a, a+b+c0 mod 2^n, c0, z xor carry). MAJ blocks use
/// 3 gates, UMA blocks the 6-gate variant.
Circuit gen_adder(uint32_t n);

/// Multiplier on 5n lines: a on [0,n), b on [n,2n), result on [2n,4n),
/// ancillas on [4n,5n). With result and ancilla lines zero, the result
/// register receives a*b and the ancillas return to zero. Shift-and-add:
/// partial products via Toffolis plus the ripple adder per row; the last
/// row uses a b-controlled adder directly on the a register.
Circuit gen_multiplier(uint32_t n);

/// Brick-wall lattice of adjacent-line CNOTs, n layers on n lines.
Circuit gen_mesh(uint32_t n);

/// Standard QFT: per line an H followed by controlled phases from the later
/// lines, then the swap reversal. n(n+1)/2 + n/2 gates.
Circuit gen_qft(uint32_t n);

/// One Grover iteration oracle*W*C0*W over all lines of the oracle circuit;
/// W is an H layer, C0 the phase flip on the all-zero state.
Circuit gen_grover_iteration(const Circuit& oracle);

/// Chain of adjacent-pair swaps across all lines.
Circuit gen_wire_permutation(uint32_t n);

struct Mutation {
  enum class Mode : uint8_t { Diff1, Diff2, MidAdd, MidDelete };
  Mode mode = Mode::Diff1;
  uint64_t seed = 1;
  uint32_t count = 10;
};

/// Deterministic in (mode, seed, count). Diff1 appends random Toffolis,
/// Diff2 prepends them; MidAdd inserts at the midpoint, MidDelete removes
/// there.
Circuit mutate(const Circuit& c, const Mutation& m);

struct VerifiedMutant {
  Circuit circuit;
  uint64_t seed_used = 0;
  int rerolls = 0;
  bool verified = false;  // oracle confirmed inequivalence (desk scale only)
};

/// Re-rolls the seed until the mutant is oracle-confirmed inequivalent;
/// verification is skipped above desk scale.
VerifiedMutant mutate_verified(const Circuit& c, Mutation m);

}  // namespace revcheck::bench
