#include "revcheck/check_util.hpp"

namespace revcheck {

std::vector<uint8_t> eval_conventional(const Circuit& c, std::vector<uint8_t> bits) {
  Circuit lowered = lower_to_mct(c);
  for (const Gate& g : lowered.gates) {
    bool all = true;
    for (LineId ctl : g.controls) all = all && bits[ctl];
    if (all) bits[g.target()] ^= 1;
  }
  return bits;
}

PreparedMiter prepare_miter(const Circuit& c1, const Circuit& c2, const CheckOptions& opts,
                            bool miter_mode) {
  if (c1.width != c2.width) throw CircuitError("width mismatch between compared circuits");

  auto build_one = [&](MiterVariant v) {
    PreparedMiter pm;
    pm.variant = v;
    Circuit m = build_miter(c1, c2, v);
    pm.gates_before = m.size();
    if (opts.simplify) {
      SimplifyOptions so;
      so.miter_mode = miter_mode;
      so.max_rounds = opts.simplify_rounds;
      SimplifyResult sr = simplify(m, so);
      pm.miter = std::move(sr.circuit);
      pm.rotation_prefix = std::move(sr.rotation_prefix);
      pm.simplify = sr.report;
    } else {
      pm.simplify.gates_before = pm.simplify.gates_after = m.size();
      pm.miter = std::move(m);
      pm.rotation_prefix = Circuit(c1.width);
    }
    return pm;
  };

  if (opts.variant) return build_one(*opts.variant);

  // Auto: keep the variant whose simplified miter is shortest.
  std::optional<PreparedMiter> best;
  for (MiterVariant v : kAllMiterVariants) {
    PreparedMiter pm = build_one(v);
    if (!best || pm.miter.size() < best->miter.size()) best = std::move(pm);
  }
  return std::move(*best);
}

std::optional<std::vector<uint8_t>> decode_counterexample(const Circuit& c1, const Circuit& c2,
                                                          const PreparedMiter& pm,
                                                          std::vector<uint8_t> miter_input) {
  // Undo the circular rotations: x = A^-1(y) for rotated-away prefix A.
  if (!pm.rotation_prefix.empty()) {
    if (!is_conventional_circuit(pm.rotation_prefix)) return std::nullopt;
    miter_input = eval_conventional(circuit_inverse(pm.rotation_prefix), std::move(miter_input));
  }
  // An input y of the miter with M(y) != y yields a distinguishing input for
  // the original pair; the inverse-first variants need one extra mapping.
  switch (pm.variant) {
    case MiterVariant::C1_C2inv:
    case MiterVariant::C2_C1inv:
      return miter_input;
    case MiterVariant::C2inv_C1:
      if (!is_conventional_circuit(c2)) return std::nullopt;
      return eval_conventional(circuit_inverse(c2), std::move(miter_input));
    case MiterVariant::C1inv_C2:
      if (!is_conventional_circuit(c1)) return std::nullopt;
      return eval_conventional(circuit_inverse(c1), std::move(miter_input));
  }
  return std::nullopt;
}

}  // namespace revcheck
