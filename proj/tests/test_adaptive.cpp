#include <doctest.h>

#include "revcheck/adaptive.hpp"
#include "revcheck/bench.hpp"
#include "revcheck/check_util.hpp"
#include "revcheck/miter.hpp"
#include "revcheck/semantics.hpp"
#include "test_support.hpp"

using namespace revcheck;
using namespace revcheck::testing;

TEST_CASE("split on an all-conventional circuit") {
  Circuit c = bench::gen_mesh(4);
  SplitResult s = split_conventional_quantum(c);
  CHECK(s.prefix == c);
  CHECK(s.suffix.empty());
  CHECK(s.rotation_applied == 0);
}

TEST_CASE("split rotates the longest conventional run to the front") {
  // [H, T, T, T, H]: rotate by one, prefix three conventional gates,
  // suffix the two H gates.
  Circuit m(4, {Gate::h(3), Gate::toffoli(0, 1, 2), Gate::cnot(0, 1), Gate::nott(2), Gate::h(3)});
  SplitResult s = split_conventional_quantum(m);
  CHECK(s.rotation_applied == 1);
  REQUIRE(s.prefix.size() == 3);
  CHECK(s.prefix.gates[0] == Gate::toffoli(0, 1, 2));
  REQUIRE(s.suffix.size() == 2);
  CHECK(s.suffix.gates[0] == Gate::h(3));
  CHECK(s.suffix.gates[1] == Gate::h(3));
}

TEST_CASE("split pulls commuting conventional gates out of the suffix") {
  // Quantum gates on both wrap ends leave a single-gate prefix run; the
  // NOT on line 2 must then commute past H(0) into the prefix.
  Circuit m(3, {Gate::cnot(0, 1), Gate::h(0), Gate::nott(2), Gate::h(1)});
  SplitResult s = split_conventional_quantum(m);
  CHECK(s.rotation_applied == 0);
  REQUIRE(s.prefix.size() == 2);
  CHECK(s.prefix.gates[0] == Gate::cnot(0, 1));
  CHECK(s.prefix.gates[1] == Gate::nott(2));
  REQUIRE(s.suffix.size() == 2);
  CHECK(s.moves_applied >= 1);
}

TEST_CASE("split uses the circular wrap run") {
  // conv at the back wraps onto conv at the front.
  Circuit m(3, {Gate::cnot(0, 1), Gate::h(0), Gate::nott(2)});
  SplitResult s = split_conventional_quantum(m);
  CHECK(s.rotation_applied == 2);
  CHECK(s.prefix.size() == 2);
  REQUIRE(s.suffix.size() == 1);
  CHECK(s.suffix.gates[0] == Gate::h(0));
}

TEST_CASE("split moves preserve identity-equivalence") {
  Rng rng(0x5711);
  for (int i = 0; i < 40; ++i) {
    uint32_t w = 2 + static_cast<uint32_t>(rng.below(4));
    Circuit m = random_mixed_circuit(rng, w, 3 + rng.below(10));
    SplitResult s = split_conventional_quantum(m);
    CHECK(is_conventional_circuit(s.prefix));
    bool before = unitary_equiv_identity(m, 1e-9).equivalent();
    bool after = unitary_equiv_identity(concat(s.prefix, s.suffix), 1e-9).equivalent();
    CHECK(before == after);
  }
}

TEST_CASE("equal QFT circuits decide at step 2 with no engine") {
  Circuit qft = bench::gen_qft(8);
  auto [v, trace] = adaptive_check(qft, qft);
  CHECK(v.equivalent());
  CHECK(trace.deciding_step() == 2);
  REQUIRE(trace.steps.size() == 2);
  CHECK(trace.steps[1].gates_after == 0);
}

TEST_CASE("H vs NOT is properly quantum at step 6") {
  Circuit h(1, {Gate::h(0)});
  Circuit x(1, {Gate::nott(0)});
  auto [v, trace] = adaptive_check(h, x);
  CHECK(v.not_equivalent());
  CHECK(trace.deciding_step() == 6);
}

TEST_CASE("conventional pairs route to cec at step 3") {
  Circuit adder = bench::gen_adder(4);
  auto mut = bench::mutate_verified(adder, {bench::Mutation::Mode::Diff1, 13, 10});
  auto [v, trace] = adaptive_check(adder, mut.circuit);
  CHECK(v.not_equivalent());
  CHECK(trace.deciding_step() == 3);
  REQUIRE(v.counterexample.has_value());
  CHECK(eval_conventional(adder, *v.counterexample) !=
        eval_conventional(mut.circuit, *v.counterexample));
}

TEST_CASE("adaptive verdicts agree with the dense oracle on mixed pairs") {
  Rng rng(0xadad);
  int decided = 0;
  for (int i = 0; i < 50; ++i) {
    uint32_t w = 2 + static_cast<uint32_t>(rng.below(3));
    Circuit c1 = random_mixed_circuit(rng, w, 2 + rng.below(8));
    Circuit c2 = rng.coin() ? c1 : random_mixed_circuit(rng, w, 2 + rng.below(8));
    bool oracle = unitary_equiv_identity(build_miter(c1, c2), 1e-9).equivalent();
    auto [v, trace] = adaptive_check(c1, c2);
    REQUIRE_FALSE(v.inconclusive());
    CHECK(v.equivalent() == oracle);
    CHECK(trace.deciding_step() >= 2);
    decided++;
  }
  CHECK(decided == 50);
}

TEST_CASE("step 6 witnesses embed into valid miter counterexamples") {
  // A conventional prefix followed by a properly-quantum tail; the reported
  // witness (when classical) must distinguish the circuits under the oracle.
  Circuit c1(2, {Gate::cnot(0, 1), Gate::h(0)});
  Circuit c2(2, {Gate::cnot(0, 1), Gate::nott(0)});
  auto [v, trace] = adaptive_check(c1, c2);
  REQUIRE(v.not_equivalent());
  if (v.counterexample) {
    uint64_t basis = bits_to_index(*v.counterexample);
    StateVector s1 = simulate_basis(c1, basis);
    StateVector s2 = simulate_basis(c2, basis);
    double diff = 0;
    for (size_t j = 0; j < s1.amps.size(); ++j) diff += std::abs(s1.amps[j] - s2.amps[j]);
    CHECK(diff > 1e-6);
  }
}

TEST_CASE("step 7 decides permuted conventional-in-quantum sandwiches") {
  // c1 = A; c2 = H-conjugated CNOT chain equal to A, forcing steps 4-7.
  Circuit c1(3, {Gate::cnot(1, 0), Gate::cnot(0, 1)});
  Circuit c2(3, {Gate::h(0), Gate::h(1), Gate::cnot(0, 1), Gate::cnot(1, 0), Gate::h(0), Gate::h(1)});
  bool oracle = unitary_equiv_identity(build_miter(c1, c2), 1e-9).equivalent();
  REQUIRE(oracle);  // H-conjugation reverses each CNOT
  auto [v, trace] = adaptive_check(c1, c2);
  CHECK(v.equivalent());
  CHECK(trace.deciding_step() == 7);
}

TEST_CASE("inconclusive when the quantum suffix is too wide") {
  const uint32_t n = 16;  // above the dense-simulation cap
  Circuit c1(n), c2(n);
  for (uint32_t i = 0; i < n; ++i) c1.push(Gate::h(i));
  auto [v, trace] = adaptive_check(c1, c2);
  CHECK(v.inconclusive());
  CHECK(v.reason.find("support") != std::string::npos);
}

TEST_CASE("portfolio agrees with the single engines") {
  Circuit adder = bench::gen_adder(4);
  std::string winner;
  CheckOptions opts;
  Verdict v = portfolio_check(adder, adder, opts, &winner);
  CHECK(v.equivalent());
  CHECK_FALSE(winner.empty());

  auto mut = bench::mutate_verified(adder, {bench::Mutation::Mode::Diff2, 77, 10});
  Verdict v2 = portfolio_check(adder, mut.circuit, opts, &winner);
  CHECK(v2.not_equivalent());
}

TEST_CASE("trace names a deciding step for every verdict") {
  Rng rng(0x7ace);
  for (int i = 0; i < 20; ++i) {
    uint32_t w = 2 + static_cast<uint32_t>(rng.below(3));
    Circuit c1 = random_mixed_circuit(rng, w, 1 + rng.below(6));
    Circuit c2 = random_mixed_circuit(rng, w, 1 + rng.below(6));
    auto [v, trace] = adaptive_check(c1, c2);
    REQUIRE_FALSE(trace.steps.empty());
    int last = trace.deciding_step();
    CHECK((last == 2 || last == 3 || last == 6 || last == 7));
    // steps appear in order
    for (size_t s = 1; s < trace.steps.size(); ++s)
      CHECK(trace.steps[s].step >= trace.steps[s - 1].step);
  }
}

TEST_CASE("step-6 classical-mismatch consistency") {
  // When the suffix classifies classical but is not the inverse of the
  // prefix, step 7 must conclude NotEquivalent.
  Circuit c1(2, {Gate::cnot(0, 1), Gate::h(0), Gate::h(0)});  // H pair cancels
  Circuit c2(2, {Gate::nott(1)});
  auto [v, trace] = adaptive_check(c1, c2);
  CHECK(v.not_equivalent());
}

TEST_CASE("portfolio mode inside adaptive step 3") {
  Circuit adder = bench::gen_adder(4);
  auto mut = bench::mutate_verified(adder, {bench::Mutation::Mode::Diff1, 55, 10});
  CheckOptions opts;
  opts.portfolio = true;
  auto [v, trace] = adaptive_check(adder, mut.circuit, opts);
  CHECK(v.not_equivalent());
  CHECK(trace.deciding_step() == 3);
  bool saw_portfolio = false;
  for (const AdaptiveStep& s : trace.steps)
    if (s.step == 3) saw_portfolio = s.engine.rfind("portfolio:", 0) == 0;
  CHECK(saw_portfolio);
}

TEST_CASE("step-6 classical result inconsistent with the prefix forces NotEquivalent") {
  // Build a pair whose miter splits into a conventional prefix and a
  // classical-but-wrong suffix, then check the engines agree end to end.
  Circuit c1(2, {Gate::nott(0), Gate::h(1), Gate::nott(1), Gate::h(1)});  // HXH = Z-like
  Circuit c2(2, {Gate::nott(1)});
  Circuit m = build_miter(c1, c2);
  SimplifyOptions so;
  so.miter_mode = true;
  Circuit simplified = simplify(m, so).circuit;
  if (!is_conventional_circuit(simplified) && !simplified.empty()) {
    SplitResult split = split_conventional_quantum(simplified);
    Classification cls = classify_functionality(split.suffix);
    if (cls.classical && !cls.support.empty()) {
      // The suffix permutation differs from the inverse of the prefix
      // restricted to the same lines, so step 7 must refute.
      PermutationTable prefix_perm =
          permutation_of(restrict_to_lines(split.prefix, cls.support));
      bool inverse_match = true;
      for (uint64_t i = 0; i < prefix_perm.map.size(); ++i)
        inverse_match = inverse_match && cls.perm.map[prefix_perm.map[i]] == i;
      CHECK_FALSE(inverse_match);
    }
  }
  auto [v, trace] = adaptive_check(c1, c2);
  CHECK(v.not_equivalent());
}
