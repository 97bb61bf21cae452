#include "revcheck/adaptive.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include "revcheck/bdd.hpp"
#include "revcheck/cec.hpp"
#include "revcheck/check_util.hpp"
#include "revcheck/satenc.hpp"
#include "revcheck/semantics.hpp"

namespace revcheck {

SplitResult split_conventional_quantum(const Circuit& m) {
  SplitResult r;
  const size_t n = m.size();
  if (n == 0) {
    r.prefix = Circuit(m.width);
    r.suffix = Circuit(m.width);
    return r;
  }

  std::vector<uint8_t> conv(n);
  size_t first_quantum = n;
  for (size_t i = 0; i < n; ++i) {
    conv[i] = is_conventional(m.gates[i]);
    if (!conv[i] && first_quantum == n) first_quantum = i;
  }
  if (first_quantum == n) {
    r.prefix = m;
    r.suffix = Circuit(m.width);
    return r;
  }

  // Longest circular run of conventional gates; ties go to the earliest
  // start position.
  size_t best_start = 0, best_len = 0;
  size_t cur_start = 0, cur_len = 0;
  for (size_t step = 1; step <= n; ++step) {
    size_t p = (first_quantum + step) % n;
    if (conv[p]) {
      if (cur_len == 0) cur_start = p;
      cur_len++;
    } else {
      if (cur_len > best_len || (cur_len == best_len && cur_start < best_start)) {
        best_start = cur_start;
        best_len = cur_len;
      }
      cur_len = 0;
    }
  }

  Circuit rotated = rotate(m, best_start);
  r.rotation_applied = best_start == 0 ? 0 : best_start;
  size_t prefix_end = best_len;

  // Greedy closure: pull conventional suffix gates to the front when they
  // commute (exactly) with everything in between.
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t pos = prefix_end; pos < n; ++pos) {
      if (!is_conventional(rotated.gates[pos])) continue;
      bool movable = true;
      for (size_t k = prefix_end; k < pos && movable; ++k)
        movable = can_swap_simple(rotated.gates[k], rotated.gates[pos]);
      if (!movable) continue;
      Gate g = rotated.gates[pos];
      rotated.gates.erase(rotated.gates.begin() + static_cast<ptrdiff_t>(pos));
      rotated.gates.insert(rotated.gates.begin() + static_cast<ptrdiff_t>(prefix_end),
                           std::move(g));
      r.moves_applied += pos - prefix_end;
      prefix_end++;
      changed = true;
    }
  }

  r.prefix = Circuit(m.width, {rotated.gates.begin(),
                               rotated.gates.begin() + static_cast<ptrdiff_t>(prefix_end)});
  r.suffix = Circuit(m.width, {rotated.gates.begin() + static_cast<ptrdiff_t>(prefix_end),
                               rotated.gates.end()});
  return r;
}

namespace {

struct EngineResult {
  Verdict verdict;
  std::string name;
};

}  // namespace

Verdict portfolio_check(const Circuit& c1, const Circuit& c2, const CheckOptions& opts,
                        std::string* winner) {
  std::atomic<bool> cancel{false};
  std::mutex mu;
  std::optional<EngineResult> result;

  auto run = [&](const char* name, auto&& engine) {
    CheckOptions local = opts;
    local.cancel = &cancel;
    Verdict v;
    try {
      v = engine(local);
    } catch (const std::exception& e) {
      v = Verdict::undecided(std::string(name) + " failed: " + e.what());
    }
    std::lock_guard<std::mutex> lock(mu);
    if (!result && !v.inconclusive()) {
      result = EngineResult{std::move(v), name};
      cancel.store(true);
    }
  };

  std::thread ts([&] { run("sat", [&](const CheckOptions& o) { return check_sat(c1, c2, o); }); });
  std::thread tb([&] { run("bdd", [&](const CheckOptions& o) { return check_bdd(c1, c2, o); }); });
  std::thread tc([&] { run("cec", [&](const CheckOptions& o) { return check_cec(c1, c2, o); }); });
  ts.join();
  tb.join();
  tc.join();

  if (!result) return Verdict::undecided("all portfolio engines inconclusive");
  if (winner) *winner = result->name;
  return std::move(result->verdict);
}

namespace {

// Counterexample mapping back through the Step-4 rotation and the Step-2
// simplification rotations. Returns a witness-only verdict when a rotated
// block is properly-quantum.
Verdict map_back(const Circuit& c1, const Circuit& c2, const PreparedMiter& pm,
                 const Circuit& step4_rotated, std::vector<uint8_t> bits) {
  uint64_t basis = 0;
  for (uint32_t i = 0; i < pm.miter.width; ++i)
    if (bits[i]) basis |= line_bit(pm.miter.width, i);
  if (!step4_rotated.empty()) {
    if (!is_conventional_circuit(step4_rotated))
      return Verdict::neq_witness(basis, "witness input of the transformed miter");
    bits = eval_conventional(circuit_inverse(step4_rotated), std::move(bits));
  }
  auto cex = decode_counterexample(c1, c2, pm, std::move(bits));
  if (cex) return Verdict::neq(std::move(*cex));
  return Verdict::neq_witness(basis, "witness input of the transformed miter");
}

}  // namespace

std::pair<Verdict, AdaptiveTrace> adaptive_check(const Circuit& c1, const Circuit& c2,
                                                 const CheckOptions& opts) {
  if (c1.width != c2.width) throw CircuitError("width mismatch between compared circuits");
  AdaptiveTrace trace;
  auto record = [&](int step, size_t before, size_t after, std::string engine,
                    std::string outcome) {
    trace.steps.push_back({step, before, after, std::move(engine), std::move(outcome)});
  };

  // Step 1: reversible miter.
  CheckOptions prep_opts = opts;
  prep_opts.simplify = true;  // Step 2 is part of the procedure
  PreparedMiter pm = prepare_miter(c1, c2, prep_opts);
  record(1, pm.gates_before, pm.gates_before, "", "miter " + std::string(to_string(pm.variant)));

  // Step 2: local simplification.
  record(2, pm.simplify.gates_before, pm.simplify.gates_after, "rewrite",
         pm.miter.empty() ? "equivalent" : "continue");
  if (pm.miter.empty()) return {Verdict::eq(), trace};

  // Step 3: fully conventional residue goes straight to cec.
  if (is_conventional_circuit(pm.miter)) {
    Verdict v;
    std::string engine = "cec";
    if (opts.portfolio) {
      v = portfolio_check(pm.miter, Circuit(pm.miter.width), opts, &engine);
      engine = "portfolio:" + engine;
    } else {
      CecInfo info;
      v = prove_outputs_zero(to_aig(pm.miter), opts, &info);
    }
    if (v.not_equivalent() && v.counterexample)
      v = map_back(c1, c2, pm, Circuit(pm.miter.width), std::move(*v.counterexample));
    record(3, pm.miter.size(), pm.miter.size(), engine, to_string(v.kind));
    return {v, trace};
  }

  // Steps 4 and 5: isolate the conventional prefix.
  SplitResult split = split_conventional_quantum(pm.miter);
  Circuit step4_rotated(pm.miter.width,
                        {pm.miter.gates.begin(),
                         pm.miter.gates.begin() + static_cast<ptrdiff_t>(split.rotation_applied)});
  record(4, pm.miter.size(), pm.miter.size(), "",
         "rotated by " + std::to_string(split.rotation_applied));
  record(5, pm.miter.size(), pm.miter.size(), "",
         "prefix " + std::to_string(split.prefix.size()) + ", suffix " +
             std::to_string(split.suffix.size()) + ", moves " +
             std::to_string(split.moves_applied));

  // Step 6: classify the suffix by iterated simulation over its support.
  Classification cls;
  try {
    cls = classify_functionality(split.suffix, opts.amplitude_tol);
  } catch (const CircuitError& e) {
    record(6, split.suffix.size(), split.suffix.size(), "simulate", "inconclusive");
    return {Verdict::undecided(e.what()), trace};
  }
  if (!cls.classical) {
    record(6, split.suffix.size(), split.suffix.size(), "simulate",
           "properly-quantum: NotEquivalent");
    // Witness input for the transformed miter: prefix^-1 of the embedded
    // suffix witness (untouched lines zero).
    std::vector<uint8_t> bits(pm.miter.width, 0);
    for (size_t j = 0; j < cls.support.size(); ++j)
      bits[cls.support[j]] =
          (cls.witness >> (cls.support.size() - 1 - j)) & 1 ? 1 : 0;
    bits = eval_conventional(circuit_inverse(split.prefix), std::move(bits));
    Verdict v = map_back(c1, c2, pm, step4_rotated, std::move(bits));
    return {v, trace};
  }
  record(6, split.suffix.size(), split.suffix.size(), "simulate", "classical: continue");

  // Step 7: the suffix acts as a permutation; check prefix * permutation
  // against the identity with cec.
  std::vector<Aig::Lit> lits;
  Aig a = to_aig_lines(split.prefix, lits);
  apply_tt_permutation(a, lits, cls.support, cls.perm);
  for (uint32_t i = 0; i < pm.miter.width; ++i) {
    Aig::Lit out = a.xor_(lits[i], a.input(i));
    if (out != Aig::kFalse) a.add_output(out);
  }
  CecInfo info;
  Verdict v = prove_outputs_zero(a, opts, &info);
  if (v.not_equivalent() && v.counterexample)
    v = map_back(c1, c2, pm, step4_rotated, std::move(*v.counterexample));
  record(7, split.prefix.size() + split.suffix.size(), split.prefix.size(), "cec",
         to_string(v.kind));
  return {v, trace};
}

}  // namespace revcheck
