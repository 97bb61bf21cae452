#include <doctest.h>

#include "revcheck/bdd.hpp"
#include "revcheck/bench.hpp"
#include "revcheck/cec.hpp"
#include "revcheck/satenc.hpp"
#include "revcheck/semantics.hpp"
#include "test_support.hpp"

using namespace revcheck;
using namespace revcheck::testing;

TEST_CASE("sat conflict budget surfaces as inconclusive") {
  Circuit adder = bench::gen_adder(8);
  CheckOptions opts;
  opts.simplify = false;
  opts.sat_conflict_budget = 1;
  Verdict v = check_sat(adder, adder, opts);
  CHECK(v.inconclusive());
}

TEST_CASE("timeout maps to inconclusive, never a partial answer") {
  Circuit mul = bench::gen_multiplier(6);
  CheckOptions opts;
  opts.simplify = false;
  opts.timeout_sec = 1e-9;  // expires immediately
  Verdict v = check_bdd(mul, mul, opts);
  CHECK(v.inconclusive());
}

TEST_CASE("broken external solver command is inconclusive") {
  Circuit adder = bench::gen_adder(4);
  CheckOptions opts;
  opts.simplify = false;
  opts.external_solver_cmd = "/nonexistent/solver {file}";
  Verdict v = check_sat(adder, adder, opts);
  CHECK(v.inconclusive());
  // A command without the placeholder is also rejected.
  opts.external_solver_cmd = "true";
  CHECK(check_sat(adder, adder, opts).inconclusive());
}

TEST_CASE("bdd garbage collection preserves semantics") {
  BddManager m(4);
  std::vector<BddManager::Ref> roots;
  // Build a pile of functions, keep only two as roots.
  BddManager::Ref keep1 = m.apply(BddOp::Xor, m.var(0), m.var(1));
  BddManager::Ref keep2 =
      m.apply(BddOp::Or, m.apply(BddOp::And, m.var(2), m.var(3)), m.var(0));
  for (int i = 0; i < 50; ++i)
    m.apply(BddOp::Xor, m.var(static_cast<uint32_t>(i) % 4), m.apply(BddOp::And, m.var(1), m.var(2)));
  size_t before = m.node_count();
  roots = {keep1, keep2};

  auto table = [&](BddManager::Ref r) {
    uint16_t t = 0;
    for (uint32_t i = 0; i < 16; ++i) {
      std::vector<uint8_t> v{static_cast<uint8_t>((i >> 3) & 1), static_cast<uint8_t>((i >> 2) & 1),
                             static_cast<uint8_t>((i >> 1) & 1), static_cast<uint8_t>(i & 1)};
      if (m.eval(r, v)) t |= uint16_t(1) << i;
    }
    return t;
  };
  uint16_t t1 = table(keep1), t2 = table(keep2);

  m.collect(roots);
  CHECK(m.node_count() <= before);
  CHECK(table(roots[0]) == t1);
  CHECK(table(roots[1]) == t2);

  // The manager stays usable after a sweep.
  BddManager::Ref again = m.apply(BddOp::Xor, m.var(0), m.var(1));
  CHECK(table(again) == t1);
  CHECK(again == roots[0]);  // canonicity survives the rebuild
}

TEST_CASE("cec conflict budget propagates as inconclusive") {
  // Disable simplification and throttle SAT hard enough that the sweep
  // cannot finish proving outputs.
  Circuit mul = bench::gen_multiplier(4);
  CheckOptions opts;
  opts.simplify = false;
  opts.sat_conflict_budget = 0;
  Verdict v = check_cec(mul, mul, opts);
  CHECK(v.inconclusive());
}

TEST_CASE("raw engines handle benchmark-scale inputs") {
  // No simplification: the backends themselves must carry these.
  CheckOptions raw;
  raw.simplify = false;

  Circuit a32 = bench::gen_adder(32);
  CHECK(check_sat(a32, a32, raw).equivalent());

  Circuit a128 = bench::gen_adder(128);
  CHECK(check_bdd(a128, a128, raw).equivalent());

  Circuit m6 = bench::gen_multiplier(6);
  CHECK(check_cec(m6, m6, raw).equivalent());
  Circuit m6d = bench::mutate(m6, {bench::Mutation::Mode::Diff1, 2, 10});
  CHECK(check_cec(m6, m6d, raw).not_equivalent());
}
