#include <doctest.h>

#include <functional>

#include "revcheck/bdd.hpp"
#include "revcheck/bench.hpp"
#include "revcheck/check_util.hpp"
#include "revcheck/miter.hpp"
#include "revcheck/semantics.hpp"
#include "test_support.hpp"

using namespace revcheck;
using namespace revcheck::testing;

TEST_CASE("variable nodes are hash-consed") {
  BddManager m(3);
  CHECK(m.var(0) == m.var(0));
  CHECK(m.var(0) != m.var(1));
  CHECK(m.node_low(m.var(0)) == BddManager::kFalse);
  CHECK(m.node_high(m.var(0)) == BddManager::kTrue);
  CHECK_THROWS_AS(m.var(3), CircuitError);
}

TEST_CASE("apply basics") {
  BddManager m(2);
  CHECK(m.apply(BddOp::Xor, m.var(0), m.var(0)) == BddManager::kFalse);
  CHECK(m.apply(BddOp::And, m.var(0), BddManager::kTrue) == m.var(0));
  CHECK(m.apply(BddOp::Or, m.var(0), BddManager::kFalse) == m.var(0));
}

TEST_CASE("apply matches pointwise truth tables on 4 variables") {
  BddManager m(4);
  Rng rng(0xbdd0);
  // Random function = random expression tree over vars.
  std::function<BddManager::Ref(int)> rand_fn = [&](int depth) -> BddManager::Ref {
    if (depth == 0 || rng.below(3) == 0) return m.var(static_cast<uint32_t>(rng.below(4)));
    BddManager::Ref a = rand_fn(depth - 1), b = rand_fn(depth - 1);
    return m.apply(static_cast<BddOp>(rng.below(3)), a, b);
  };
  auto table_of = [&](BddManager::Ref r) {
    uint16_t t = 0;
    for (uint32_t i = 0; i < 16; ++i) {
      std::vector<uint8_t> v{static_cast<uint8_t>((i >> 3) & 1), static_cast<uint8_t>((i >> 2) & 1),
                             static_cast<uint8_t>((i >> 1) & 1), static_cast<uint8_t>(i & 1)};
      if (m.eval(r, v)) t |= uint16_t(1) << i;
    }
    return t;
  };
  for (int iter = 0; iter < 60; ++iter) {
    BddManager::Ref a = rand_fn(3), b = rand_fn(3);
    uint16_t ta = table_of(a), tb = table_of(b);
    CHECK(table_of(m.apply(BddOp::And, a, b)) == (ta & tb));
    CHECK(table_of(m.apply(BddOp::Or, a, b)) == (ta | tb));
    CHECK(table_of(m.apply(BddOp::Xor, a, b)) == (ta ^ tb));
    // Canonicity: semantically equal functions share the node.
    if (ta == tb) CHECK(a == b);
  }
}

TEST_CASE("canonicity across different construction routes") {
  BddManager m(3);
  // x0 xor x1 built two ways.
  BddManager::Ref direct = m.apply(BddOp::Xor, m.var(0), m.var(1));
  BddManager::Ref viaOr = m.apply(
      BddOp::Or, m.apply(BddOp::And, m.var(0), m.apply(BddOp::Xor, m.var(1), BddManager::kTrue)),
      m.apply(BddOp::And, m.apply(BddOp::Xor, m.var(0), BddManager::kTrue), m.var(1)));
  CHECK(direct == viaOr);
}

TEST_CASE("wire BDDs") {
  BddManager m(3);
  auto id_wires = build_wire_bdds(m, Circuit(3));
  for (uint32_t i = 0; i < 3; ++i) CHECK(id_wires[i] == m.var(i));

  // Third wire of the three-gate circuit is x3 ^ x1x2 ^ x1 ^ 1.
  Circuit fig(3, {Gate::nott(2), Gate::toffoli(0, 1, 2), Gate::cnot(0, 2)});
  BddManager m2(3);
  auto wires = build_wire_bdds(m2, fig);
  for (uint64_t idx = 0; idx < 8; ++idx) {
    std::vector<uint8_t> v{static_cast<uint8_t>((idx >> 2) & 1),
                           static_cast<uint8_t>((idx >> 1) & 1),
                           static_cast<uint8_t>(idx & 1)};
    bool want = bool(v[2]) ^ (v[0] && v[1]) ^ bool(v[0]) ^ 1;
    CHECK(m2.eval(wires[2], v) == want);
  }

  // Self-miter wires reduce to projections.
  BddManager m3(3);
  auto mw = build_wire_bdds(m3, build_miter(fig, fig));
  for (uint32_t i = 0; i < 3; ++i) CHECK(mw[i] == m3.var(i));
}

TEST_CASE("check_bdd verdicts") {
  CHECK(check_bdd(Circuit(3), Circuit(3)).equivalent());

  Circuit adder = bench::gen_adder(8);
  CHECK(check_bdd(adder, adder).equivalent());

  auto mut = bench::mutate_verified(adder, {bench::Mutation::Mode::Diff2, 21, 10});
  REQUIRE(mut.verified);
  Verdict v = check_bdd(adder, mut.circuit);
  REQUIRE(v.not_equivalent());
  REQUIRE(v.counterexample.has_value());
  CHECK(eval_conventional(adder, *v.counterexample) !=
        eval_conventional(mut.circuit, *v.counterexample));
}

TEST_CASE("check_bdd agrees with check_sat and the oracle") {
  Rng rng(0xabcd);
  for (int i = 0; i < 60; ++i) {
    uint32_t w = 2 + static_cast<uint32_t>(rng.below(4));
    Circuit c1 = random_conventional_circuit(rng, w, 2 + rng.below(14));
    Circuit c2 = rng.coin() ? equivalent_variant(c1, rng, 3)
                            : random_conventional_circuit(rng, w, 2 + rng.below(14));
    bool expect = permutation_of(c1) == permutation_of(c2);
    CHECK(check_bdd(c1, c2).equivalent() == expect);
  }
}

TEST_CASE("node budget exhaustion is inconclusive") {
  Circuit adder = bench::gen_adder(6);
  CheckOptions opts;
  opts.simplify = false;
  opts.bdd_node_budget = 64;  // absurdly small
  Verdict v = check_bdd(adder, adder, opts);
  CHECK(v.inconclusive());
}

TEST_CASE("intermediate decision diagrams shrink after an inverse suffix") {
  // A1 * B1 * B2^-1 with B1 and B2 functionally equal but structurally
  // different: live nodes after consuming B2^-1 cannot exceed the peak
  // reached inside B1.
  Rng rng(0x2b2b);
  Circuit a1 = random_conventional_circuit(rng, 6, 10);
  Circuit b1 = bench::gen_lnn_cnot(6, 5);
  Circuit b2(6, {Gate::cnot(0, 5)});
  Circuit chain = concat(a1, concat(b1, circuit_inverse(b2)));

  CheckOptions opts;
  opts.simplify = false;
  BddCheckInfo info;
  // Compare against itself so the full chain is consumed while tracing.
  Verdict v = check_bdd(chain, chain, opts, &info);
  CHECK(v.equivalent());
  REQUIRE(info.live_trace.size() >= chain.size());
  size_t end_of_b1 = a1.size() + b1.size();
  size_t peak_in_b1 = 0;
  for (size_t g = a1.size(); g < end_of_b1; ++g)
    peak_in_b1 = std::max(peak_in_b1, info.live_trace[g]);
  size_t after_b2inv = info.live_trace[end_of_b1 + b2.size() - 1];
  CHECK(after_b2inv <= peak_in_b1);
}
