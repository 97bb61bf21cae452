#include "revcheck/bench.hpp"

#include <optional>

#include "revcheck/miter.hpp"
#include "revcheck/rng.hpp"
#include "revcheck/semantics.hpp"

namespace revcheck::bench {

Circuit gen_lnn_cnot(uint32_t n, uint32_t k) {
  if (k == 0 || k >= n) throw CircuitError("separation k must satisfy 0 < k < n");
  Circuit c(n);
  c.name = "lnn-cnot-" + std::to_string(n) + "-" + std::to_string(k);
  auto swap3 = [&](LineId a, LineId b) {
    c.push(Gate::cnot(a, b));
    c.push(Gate::cnot(b, a));
    c.push(Gate::cnot(a, b));
  };
  for (uint32_t i = 0; i + 1 < k; ++i) swap3(i, i + 1);  // move line 0 next to line k
  c.push(Gate::cnot(k - 1, k));
  for (uint32_t i = k - 1; i-- > 0;) swap3(i, i + 1);
  return c;
}

namespace {

// Cuccaro blocks over mapped lines. `ctl` makes the addition conditional:
// only the gates that write into the sum register (and the carry-out copy)
// take the extra control; the carry chain self-reverses when the control
// is off.
struct AdderEmitter {
  Circuit& c;
  std::optional<LineId> ctl;

  void write1(LineId t) {  // X on a sum line
    if (ctl)
      c.push(Gate::cnot(*ctl, t));
    else
      c.push(Gate::nott(t));
  }
  void write2(LineId a, LineId t) {  // CNOT into a sum line
    if (ctl)
      c.push(Gate::toffoli(*ctl, a, t));
    else
      c.push(Gate::cnot(a, t));
  }

  void maj(LineId carry, LineId b, LineId a) {
    write2(a, b);
    c.push(Gate::cnot(a, carry));
    c.push(Gate::toffoli(carry, b, a));
  }
  void uma(LineId carry, LineId b, LineId a) {
    write1(b);
    write2(carry, b);
    c.push(Gate::toffoli(carry, b, a));
    write1(b);
    c.push(Gate::cnot(a, carry));
    write2(a, b);
  }

  void emit(const std::vector<LineId>& a_lines, const std::vector<LineId>& b_lines, LineId c0,
            LineId z) {
    const size_t n = a_lines.size();
    maj(c0, b_lines[0], a_lines[0]);
    for (size_t i = 1; i < n; ++i) maj(a_lines[i - 1], b_lines[i], a_lines[i]);
    write2(a_lines[n - 1], z);
    for (size_t i = n; i-- > 1;) uma(a_lines[i - 1], b_lines[i], a_lines[i]);
    uma(c0, b_lines[0], a_lines[0]);
  }
};

}  // namespace

Circuit gen_adder(uint32_t n) {
  if (n < 1) throw CircuitError("adder needs n >= 1");
  Circuit c(2 * n + 2);
  c.name = "adder-" + std::to_string(n);
  // Interleaved register layout (c, b0, a0, b1, a1, ..., z) as in the cited
  // construction; it also keeps the wire BDDs linear under the fixed
  // line-index variable order.
  std::vector<LineId> a(n), b(n);
  for (uint32_t i = 0; i < n; ++i) {
    b[i] = 1 + 2 * i;
    a[i] = 2 + 2 * i;
  }
  AdderEmitter em{c, std::nullopt};
  em.emit(a, b, 0, 2 * n + 1);
  return c;
}

Circuit gen_multiplier(uint32_t n) {
  if (n < 2) throw CircuitError("multiplier needs n >= 2");
  Circuit c(5 * n);
  c.name = "multiplier-" + std::to_string(n);
  auto a = [&](uint32_t j) { return LineId(j); };
  auto b = [&](uint32_t j) { return LineId(n + j); };
  auto r = [&](uint32_t j) { return LineId(2 * n + j); };
  auto anc = [&](uint32_t j) { return LineId(4 * n + j); };

  // Rows in ascending order keep the result bits above n+i-1 at zero, which
  // provides the carry-out line and a spare zero carry-in per row.
  for (uint32_t i = 0; i + 1 < n; ++i) {
    for (uint32_t j = 0; j < n; ++j) c.push(Gate::toffoli(a(j), b(i), anc(j)));
    std::vector<LineId> addend(n), slice(n);
    for (uint32_t j = 0; j < n; ++j) {
      addend[j] = anc(j);
      slice[j] = r(i + j);
    }
    AdderEmitter em{c, std::nullopt};
    em.emit(addend, slice, r(i + n + 1), r(i + n));
    for (uint32_t j = 0; j < n; ++j) c.push(Gate::toffoli(a(j), b(i), anc(j)));
  }
  // Last row: no free zero result line remains for the carry-in, so add the
  // a register directly under control of b[n-1], with an ancilla as carry-in.
  {
    std::vector<LineId> addend(n), slice(n);
    for (uint32_t j = 0; j < n; ++j) {
      addend[j] = a(j);
      slice[j] = r(n - 1 + j);
    }
    AdderEmitter em{c, b(n - 1)};
    em.emit(addend, slice, anc(0), r(2 * n - 1));
  }
  return c;
}

Circuit gen_mesh(uint32_t n) {
  if (n < 2) throw CircuitError("mesh needs n >= 2");
  Circuit c(n);
  c.name = "mesh-" + std::to_string(n);
  for (uint32_t layer = 0; layer < n; ++layer)
    for (uint32_t i = layer % 2; i + 1 < n; i += 2) c.push(Gate::cnot(i, i + 1));
  return c;
}

Circuit gen_qft(uint32_t n) {
  if (n < 1) throw CircuitError("qft needs n >= 1");
  Circuit c(n);
  c.name = "qft-" + std::to_string(n);
  for (uint32_t i = 0; i < n; ++i) {
    c.push(Gate::h(i));
    for (uint32_t j = i + 1; j < n; ++j)
      c.push(Gate::cphase(PhaseFraction(1, PhaseFraction::Int(1) << (j - i + 1)), {j}, i));
  }
  for (uint32_t i = 0; i < n / 2; ++i) c.push(Gate::swap(i, n - 1 - i));
  return c;
}

Circuit gen_grover_iteration(const Circuit& oracle) {
  if (!is_conventional_circuit(oracle))
    throw CircuitError("Grover oracle circuit must be conventional");
  const uint32_t n = oracle.width;
  Circuit c = oracle;
  c.name = "grover-iteration";
  auto w_layer = [&]() {
    for (uint32_t i = 0; i < n; ++i) c.push(Gate::h(i));
  };
  auto zero_phase_flip = [&]() {
    for (uint32_t i = 0; i < n; ++i) c.push(Gate::nott(i));
    c.push(Gate::h(n - 1));
    std::vector<LineId> ctl;
    for (uint32_t i = 0; i + 1 < n; ++i) ctl.push_back(i);
    c.push(Gate::mct(ctl, n - 1));
    c.push(Gate::h(n - 1));
    for (uint32_t i = 0; i < n; ++i) c.push(Gate::nott(i));
  };
  w_layer();
  zero_phase_flip();
  w_layer();
  return c;
}

Circuit gen_wire_permutation(uint32_t n) {
  Circuit c(n);
  c.name = "wire-permutation-" + std::to_string(n);
  for (uint32_t i = 0; i + 1 < n; ++i) c.push(Gate::swap(i, i + 1));
  return c;
}

namespace {

Gate random_gate(Rng& rng, uint32_t width) {
  if (width >= 3) {
    LineId c1 = static_cast<LineId>(rng.below(width));
    LineId c2, t;
    do {
      c2 = static_cast<LineId>(rng.below(width));
    } while (c2 == c1);
    do {
      t = static_cast<LineId>(rng.below(width));
    } while (t == c1 || t == c2);
    return Gate::toffoli(c1, c2, t);
  }
  if (width == 2) {
    LineId c1 = static_cast<LineId>(rng.below(2));
    return Gate::cnot(c1, 1 - c1);
  }
  return Gate::nott(0);
}

}  // namespace

Circuit mutate(const Circuit& c, const Mutation& m) {
  Rng rng(m.seed);
  Circuit r = c;
  switch (m.mode) {
    case Mutation::Mode::Diff1:
      for (uint32_t i = 0; i < m.count; ++i) r.push(random_gate(rng, c.width));
      break;
    case Mutation::Mode::Diff2: {
      std::vector<Gate> head;
      for (uint32_t i = 0; i < m.count; ++i) head.push_back(random_gate(rng, c.width));
      r.gates.insert(r.gates.begin(), head.begin(), head.end());
      break;
    }
    case Mutation::Mode::MidAdd: {
      size_t mid = c.size() / 2;
      std::vector<Gate> ins;
      for (uint32_t i = 0; i < m.count; ++i) ins.push_back(random_gate(rng, c.width));
      r.gates.insert(r.gates.begin() + static_cast<ptrdiff_t>(mid), ins.begin(), ins.end());
      break;
    }
    case Mutation::Mode::MidDelete: {
      if (c.size() < m.count) throw CircuitError("circuit too small for deletion");
      size_t mid = std::min(c.size() / 2, c.size() - m.count);
      r.gates.erase(r.gates.begin() + static_cast<ptrdiff_t>(mid),
                    r.gates.begin() + static_cast<ptrdiff_t>(mid + m.count));
      break;
    }
  }
  return r;
}

VerifiedMutant mutate_verified(const Circuit& c, Mutation m) {
  const bool conv = is_conventional_circuit(c);
  const bool can_verify =
      (conv && c.width <= kTruthTableMaxLines) || (!conv && c.width <= 12);

  VerifiedMutant out;
  for (int attempt = 0; attempt < 64; ++attempt) {
    Circuit mut = mutate(c, m);
    if (!can_verify) {
      out.circuit = std::move(mut);
      out.seed_used = m.seed;
      out.verified = false;
      return out;
    }
    bool equivalent;
    if (conv && is_conventional_circuit(mut)) {
      equivalent = permutation_of(c) == permutation_of(mut);
    } else {
      equivalent = unitary_equiv_identity(build_miter(c, mut)).equivalent();
    }
    if (!equivalent) {
      out.circuit = std::move(mut);
      out.seed_used = m.seed;
      out.rerolls = attempt;
      out.verified = true;
      return out;
    }
    m.seed = Rng(m.seed).next();  // re-roll
    out.rerolls = attempt + 1;
  }
  throw CircuitError("could not find an inequivalent mutant after 64 re-rolls");
}

}  // namespace revcheck::bench
