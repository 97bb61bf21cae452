#include "revcheck/miter.hpp"

namespace revcheck {

const char* to_string(MiterVariant v) {
  switch (v) {
    case MiterVariant::C1_C2inv: return "c1-c2inv";
    case MiterVariant::C2inv_C1: return "c2inv-c1";
    case MiterVariant::C2_C1inv: return "c2-c1inv";
    case MiterVariant::C1inv_C2: return "c1inv-c2";
  }
  return "?";
}

Circuit build_miter(const Circuit& c1, const Circuit& c2, MiterVariant v) {
  if (c1.width != c2.width) throw CircuitError("width mismatch in miter");
  switch (v) {
    case MiterVariant::C1_C2inv: return concat(c1, circuit_inverse(c2));
    case MiterVariant::C2inv_C1: return concat(circuit_inverse(c2), c1);
    case MiterVariant::C2_C1inv: return concat(c2, circuit_inverse(c1));
    case MiterVariant::C1inv_C2: return concat(circuit_inverse(c1), c2);
  }
  throw CircuitError("unknown miter variant");
}

Circuit rotate(const Circuit& c, size_t k) {
  if (k > c.size()) throw CircuitError("rotation count exceeds gate count");
  Circuit r(c.width);
  r.gates.reserve(c.size());
  r.gates.insert(r.gates.end(), c.gates.begin() + static_cast<ptrdiff_t>(k), c.gates.end());
  r.gates.insert(r.gates.end(), c.gates.begin(), c.gates.begin() + static_cast<ptrdiff_t>(k));
  return r;
}

}  // namespace revcheck
