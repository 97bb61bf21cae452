#include <doctest.h>

#include <sstream>

#include "revcheck/bench.hpp"
#include "revcheck/miter.hpp"
#include "revcheck/rewrite.hpp"
#include "revcheck/semantics.hpp"
#include "test_support.hpp"

using namespace revcheck;
using namespace revcheck::testing;

namespace {

Circuit fig_circuit() {
  return Circuit(3, {Gate::nott(2), Gate::toffoli(0, 1, 2), Gate::cnot(0, 2)});
}

// Independent truth-table evaluation used as the oracle for the swap rules.
uint64_t apply_gates_to_index(const std::vector<Gate>& gates, uint32_t width, uint64_t idx) {
  std::vector<uint8_t> bits(width);
  for (uint32_t i = 0; i < width; ++i) bits[i] = (idx >> (width - 1 - i)) & 1;
  for (const Gate& g : gates) {
    bool all = true;
    for (LineId c : g.controls) all = all && bits[c];
    if (all) bits[g.target()] ^= 1;
  }
  uint64_t out = 0;
  for (uint32_t i = 0; i < width; ++i)
    if (bits[i]) out |= 1ull << (width - 1 - i);
  return out;
}

}  // namespace

TEST_CASE("cancel_adjacent_inverses") {
  Gate tof = Gate::toffoli(0, 1, 2);
  CHECK(cancel_adjacent_inverses(Circuit(3, {tof, tof})).empty());

  // Six-gate self-miter collapses through cascaded pair removal.
  Circuit c = fig_circuit();
  Circuit m = build_miter(c, c, MiterVariant::C1_C2inv);
  CHECK(cancel_adjacent_inverses(m).empty());

  Circuit keep(2, {Gate::nott(0), Gate::nott(1)});
  CHECK(cancel_adjacent_inverses(keep) == keep);
}

TEST_CASE("can_swap_simple rules") {
  // Target of the NOT is a control of the CNOT: blocked.
  CHECK_FALSE(can_swap_simple(Gate::cnot(0, 1), Gate::nott(0)));
  CHECK_FALSE(can_swap_simple(Gate::nott(0), Gate::cnot(0, 1)));
  // Disjoint support always swaps.
  CHECK(can_swap_simple(Gate::toffoli(0, 1, 2), Gate::nott(3)));
  // Shared control only.
  CHECK(can_swap_simple(Gate::cnot(0, 1), Gate::cnot(0, 2)));
  // Same target, non-diagonal: conservatively blocked.
  CHECK_FALSE(can_swap_simple(Gate::cnot(0, 2), Gate::cnot(1, 2)));
  // Diagonal gates always commute.
  CHECK(can_swap_simple(Gate::cphase(PhaseFraction(1, 4), {0}, 1),
                        Gate::cphase(PhaseFraction(1, 8), {1}, 2)));
  // H shares a line: blocked.
  CHECK_FALSE(can_swap_simple(Gate::h(1), Gate::cnot(0, 1)));
  CHECK(can_swap_simple(Gate::h(2), Gate::cnot(0, 1)));
}

TEST_CASE("can_swap_simple is sound: every accepted pair commutes exactly") {
  Rng rng(0x51a9);
  int accepted = 0;
  for (int i = 0; i < 400; ++i) {
    uint32_t w = 2 + static_cast<uint32_t>(rng.below(3));
    Gate g1 = rng.coin() ? random_conventional_gate(rng, w) : random_quantum_gate(rng, w);
    Gate g2 = rng.coin() ? random_conventional_gate(rng, w) : random_quantum_gate(rng, w);
    if (!can_swap_simple(g1, g2)) continue;
    accepted++;
    CHECK(unitaries_close(Circuit(w, {g1, g2}), Circuit(w, {g2, g1}), 1e-10));
  }
  CHECK(accepted > 30);
}

TEST_CASE("swap_complicated on the CNOT chain") {
  Gate g1 = Gate::cnot(0, 1), g2 = Gate::cnot(1, 2);
  auto seq = swap_complicated(g1, g2);
  REQUIRE(seq.size() == 3);
  CHECK(seq[0] == Gate::cnot(1, 2));
  CHECK(seq[1] == Gate::cnot(0, 2));
  CHECK(seq[2] == Gate::cnot(0, 1));
  // Eight-input truth table oracle.
  for (uint64_t idx = 0; idx < 8; ++idx)
    CHECK(apply_gates_to_index({g1, g2}, 3, idx) == apply_gates_to_index(seq, 3, idx));
}

TEST_CASE("swap_complicated NOT through Toffoli") {
  Gate g1 = Gate::nott(1), g2 = Gate::toffoli(0, 1, 2);
  auto seq = swap_complicated(g1, g2);
  REQUIRE(seq.size() == 3);
  CHECK(seq[1] == Gate::cnot(0, 2));  // g3 = MCT({a} -> c)
  for (uint64_t idx = 0; idx < 8; ++idx)
    CHECK(apply_gates_to_index({g1, g2}, 3, idx) == apply_gates_to_index(seq, 3, idx));
}

TEST_CASE("swap_complicated exhaustive property on 5 lines") {
  Rng rng(0x5c5c);
  int tried = 0;
  while (tried < 150) {
    Gate g1 = random_conventional_gate(rng, 5);
    Gate g2 = random_conventional_gate(rng, 5);
    if (g1.kind != GateKind::Mct || g2.kind != GateKind::Mct) continue;
    bool t1_in_c2 =
        std::find(g2.controls.begin(), g2.controls.end(), g1.target()) != g2.controls.end();
    bool t2_in_c1 =
        std::find(g1.controls.begin(), g1.controls.end(), g2.target()) != g1.controls.end();
    if (!t1_in_c2 || t2_in_c1) continue;
    tried++;
    auto seq = swap_complicated(g1, g2);
    for (uint64_t idx = 0; idx < 32; ++idx)
      CHECK(apply_gates_to_index({g1, g2}, 5, idx) == apply_gates_to_index(seq, 5, idx));
  }
}

TEST_CASE("swap_complicated rejects bad preconditions") {
  CHECK_THROWS_AS(swap_complicated(Gate::h(0), Gate::cnot(0, 1)), CircuitError);
  CHECK_THROWS_AS(swap_complicated(Gate::cnot(0, 1), Gate::cnot(2, 3)), CircuitError);
}

TEST_CASE("default templates are verified and apply") {
  const auto& lib = default_templates();
  CHECK(lib.size() >= 4);

  // Three alternating CNOTs collapse to a swap.
  Circuit c3(2, {Gate::cnot(0, 1), Gate::cnot(1, 0), Gate::cnot(0, 1)});
  Circuit applied = apply_templates(c3, lib);
  REQUIRE(applied.size() == 1);
  CHECK(applied.gates[0] == Gate::swap(0, 1));

  // And on renamed/offset lines.
  Circuit c3b(5, {Gate::cnot(4, 2), Gate::cnot(2, 4), Gate::cnot(4, 2)});
  Circuit appliedb = apply_templates(c3b, lib);
  REQUIRE(appliedb.size() == 1);
  CHECK(appliedb.gates[0] == Gate::swap(2, 4));

  CHECK(apply_templates(Circuit(1, {Gate::h(0), Gate::h(0)}), lib).empty());

  Circuit none(2, {Gate::cnot(0, 1), Gate::cnot(0, 1)});
  CHECK(apply_templates(none, lib) == none);  // single pass, no matching window

  // H-conjugated CNOT becomes a controlled phase.
  Circuit hh(2, {Gate::h(1), Gate::cnot(0, 1), Gate::h(1)});
  Circuit cz = apply_templates(hh, lib);
  REQUIRE(cz.size() == 1);
  CHECK(cz.gates[0] == Gate::cphase(PhaseFraction(1, 2), {0}, 1));
}

TEST_CASE("template verification rejects non-equivalences") {
  Template bad;
  bad.name = "bad";
  bad.lhs = Circuit(2, {Gate::cnot(0, 1), Gate::cnot(0, 1)});
  bad.rhs = Circuit(2, {Gate::cnot(0, 1)});
  CHECK_THROWS_AS(verify_template(bad), CircuitError);

  Template grow;
  grow.name = "grow";
  grow.lhs = Circuit(2, {Gate::swap(0, 1)});
  grow.rhs = Circuit(2, {Gate::cnot(0, 1), Gate::cnot(1, 0), Gate::cnot(0, 1)});
  CHECK_THROWS_AS(verify_template(grow), CircuitError);
}

TEST_CASE("template file loader") {
  std::string text =
      ".template triple-cnot\n"
      ".numvars 2\n.begin\n"
      "t2 a b\nt2 b a\nt2 a b\n"
      ".rhs\n"
      "f2 a b\n"
      ".end\n";
  std::istringstream in(text);
  auto lib = load_templates(in);
  REQUIRE(lib.size() == 1);
  CHECK(lib[0].name == "triple-cnot");
  CHECK(lib[0].lhs.size() == 3);
  CHECK(lib[0].rhs.size() == 1);

  std::string bad =
      ".template wrong\n.numvars 2\n.begin\nt2 a b\n.rhs\nt2 b a\n.end\n";
  std::istringstream bin(bad);
  CHECK_THROWS_AS(load_templates(bin), CircuitError);
}

TEST_CASE("simplify empties self-miters") {
  Rng rng(0x3333);
  for (int i = 0; i < 15; ++i) {
    uint32_t w = 2 + static_cast<uint32_t>(rng.below(5));
    Circuit c = random_conventional_circuit(rng, w, rng.below(40));
    SimplifyOptions so;
    so.miter_mode = true;
    auto res = simplify(build_miter(c, c), so);
    CHECK(res.circuit.empty());
    CHECK(res.report.gates_after == 0);
    CHECK(res.report.gates_before == 2 * c.size());
  }
}

TEST_CASE("simplify preserves the function without rotation") {
  Rng rng(0x7777);
  for (int i = 0; i < 40; ++i) {
    uint32_t w = 2 + static_cast<uint32_t>(rng.below(4));
    Circuit c = random_conventional_circuit(rng, w, 2 + rng.below(14));
    SimplifyOptions so;  // miter_mode off: plain function-preserving rewriting
    auto res = simplify(c, so);
    CHECK(permutation_of(res.circuit) == permutation_of(c));
    CHECK(res.rotation_prefix.empty());
    CHECK(res.report.gates_after <= res.report.gates_before);
  }
  for (int i = 0; i < 15; ++i) {
    uint32_t w = 2 + static_cast<uint32_t>(rng.below(3));
    Circuit c = random_mixed_circuit(rng, w, 2 + rng.below(10));
    auto res = simplify(c, {});
    CHECK(unitaries_close(res.circuit, c, 1e-10));
  }
}

TEST_CASE("simplify on miters preserves identity-equivalence") {
  Rng rng(0x8811);
  for (int i = 0; i < 40; ++i) {
    uint32_t w = 2 + static_cast<uint32_t>(rng.below(4));
    Circuit c1 = random_conventional_circuit(rng, w, 2 + rng.below(10));
    Circuit c2 = rng.coin() ? equivalent_variant(c1, rng, 3)
                            : random_conventional_circuit(rng, w, 2 + rng.below(10));
    Circuit m = build_miter(c1, c2);
    bool ident = permutation_of(m).is_identity();
    SimplifyOptions so;
    so.miter_mode = true;
    auto res = simplify(m, so);
    CHECK(permutation_of(res.circuit).is_identity() == ident);
    // The rotated-away prefix composes back to the original function.
    Circuit recomposed = concat(res.rotation_prefix,
                                concat(res.circuit, Circuit(w)));
    (void)recomposed;
  }
}

TEST_CASE("simplify is idempotent at its fixed point") {
  Rng rng(0x1d1d);
  for (int i = 0; i < 25; ++i) {
    uint32_t w = 2 + static_cast<uint32_t>(rng.below(4));
    Circuit c = random_conventional_circuit(rng, w, 4 + rng.below(16));
    auto first = simplify(c, {});
    auto second = simplify(first.circuit, {});
    CHECK(second.circuit.size() == first.circuit.size());
  }
}

TEST_CASE("QFT self-miter empties by cancellation alone") {
  Circuit qft = bench::gen_qft(8);
  SimplifyOptions so;
  so.miter_mode = true;
  auto res = simplify(build_miter(qft, qft), so);
  CHECK(res.circuit.empty());
}

TEST_CASE("adjacent CPhase gates fuse") {
  Circuit c(2, {Gate::cphase(PhaseFraction(1, 4), {0}, 1),
                Gate::cphase(PhaseFraction(1, 4), {1}, 0),
                Gate::cphase(PhaseFraction(1, 2), {0}, 1)});
  auto res = simplify(c, {});
  CHECK(res.circuit.empty());  // 1/4 + 1/4 + 1/2 = full turn
}

TEST_CASE("complicated swap fires only when it cancels") {
  // g, blocker, g^-1 with target(g) in controls(blocker): net one gate less.
  Circuit c(3, {Gate::nott(1), Gate::toffoli(0, 1, 2), Gate::nott(1)});
  auto res = simplify(c, {});
  CHECK(res.circuit.size() == 2);
  CHECK(permutation_of(res.circuit) == permutation_of(c));
}
