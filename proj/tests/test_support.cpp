#include "test_support.hpp"

#include "revcheck/rewrite.hpp"

namespace revcheck::testing {

Circuit equivalent_variant(const Circuit& c, Rng& rng, int edits) {
  Circuit r = c;
  for (int e = 0; e < edits; ++e) {
    switch (rng.below(3)) {
      case 0: {  // insert a gate and its inverse somewhere
        Gate g = random_conventional_gate(rng, r.width);
        size_t pos = rng.below(r.size() + 1);
        r.gates.insert(r.gates.begin() + static_cast<ptrdiff_t>(pos), gate_inverse(g));
        r.gates.insert(r.gates.begin() + static_cast<ptrdiff_t>(pos), g);
        break;
      }
      case 1: {  // swap a commuting adjacent pair
        if (r.size() < 2) break;
        size_t pos = rng.below(r.size() - 1);
        if (can_swap_simple(r.gates[pos], r.gates[pos + 1]))
          std::swap(r.gates[pos], r.gates[pos + 1]);
        break;
      }
      default: {  // expand a swap into three CNOTs
        for (size_t i = 0; i < r.size(); ++i) {
          if (r.gates[i].kind != GateKind::Swap) continue;
          LineId a = r.gates[i].targets[0], b = r.gates[i].targets[1];
          r.gates[i] = Gate::cnot(a, b);
          r.gates.insert(r.gates.begin() + static_cast<ptrdiff_t>(i + 1), Gate::cnot(a, b));
          r.gates.insert(r.gates.begin() + static_cast<ptrdiff_t>(i + 1), Gate::cnot(b, a));
          break;
        }
        break;
      }
    }
  }
  return r;
}

}  // namespace revcheck::testing
