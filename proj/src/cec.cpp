#include "revcheck/cec.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "revcheck/check_util.hpp"
#include "revcheck/rng.hpp"

namespace revcheck {

Aig::Aig(uint32_t num_inputs) : num_inputs_(num_inputs) {
  fan0_.resize(num_inputs + 1, 0);
  fan1_.resize(num_inputs + 1, 0);
}

Aig::Lit Aig::and_(Lit a, Lit b) {
  if (a == kFalse || b == kFalse) return kFalse;
  if (a == kTrue) return b;
  if (b == kTrue) return a;
  if (a == b) return a;
  if (a == not_(b)) return kFalse;
  if (a > b) std::swap(a, b);
  uint64_t key = (static_cast<uint64_t>(a) << 32) | b;
  auto [it, inserted] = strash_.try_emplace(key, 0);
  if (!inserted) return make_lit(it->second, false);
  fan0_.push_back(a);
  fan1_.push_back(b);
  uint32_t node = num_nodes() - 1;
  it->second = node;
  return make_lit(node, false);
}

Aig::Lit Aig::xor_(Lit a, Lit b) {
  if (a == kFalse) return b;
  if (b == kFalse) return a;
  if (a == kTrue) return not_(b);
  if (b == kTrue) return not_(a);
  if (a == b) return kFalse;
  if (a == not_(b)) return kTrue;
  Lit n1 = and_(a, not_(b));
  Lit n2 = and_(not_(a), b);
  return not_(and_(not_(n1), not_(n2)));
}

Aig::Lit Aig::and_all(const std::vector<Lit>& lits) {
  Lit acc = kTrue;
  for (Lit l : lits) acc = and_(acc, l);
  return acc;
}

Aig::Lit Aig::ite(Lit c, Lit t, Lit e) {
  if (c == kTrue) return t;
  if (c == kFalse) return e;
  if (t == e) return t;
  if (t == kTrue && e == kFalse) return c;
  if (t == kFalse && e == kTrue) return not_(c);
  return not_(and_(not_(and_(c, t)), not_(and_(not_(c), e))));
}

std::string Aig::to_aag() const {
  std::ostringstream out;
  out << "aag " << (num_nodes() - 1) << ' ' << num_inputs_ << " 0 " << outputs_.size() << ' '
      << num_ands() << "\n";
  for (uint32_t i = 0; i < num_inputs_; ++i) out << input(i) << "\n";
  for (Lit o : outputs_) out << o << "\n";
  for (uint32_t n = num_inputs_ + 1; n < num_nodes(); ++n)
    out << make_lit(n, false) << ' ' << fan1_[n] << ' ' << fan0_[n] << "\n";
  return out.str();
}

namespace {

// Per-gate core of the AIG lowering; Swap is a wire exchange, no nodes.
void append_gate(Aig& a, const Gate& g, std::vector<Aig::Lit>& lits,
                 std::vector<uint8_t>* targeted) {
  switch (g.kind) {
    case GateKind::Swap:
      std::swap(lits[g.targets[0]], lits[g.targets[1]]);
      if (targeted) (*targeted)[g.targets[0]] = (*targeted)[g.targets[1]] = 1;
      return;
    case GateKind::CPhase:
      if (is_identity_gate(g)) return;
      break;
    case GateKind::CU:
      if (is_identity_gate(g)) return;
      if (!is_conventional(g)) break;
      // fall through to the Mct update for the X-matrix case
      [[fallthrough]];
    case GateKind::Mct: {
      std::vector<Aig::Lit> ctl;
      ctl.reserve(g.controls.size());
      for (LineId c : g.controls) ctl.push_back(lits[c]);
      lits[g.target()] = a.xor_(lits[g.target()], a.and_all(ctl));
      if (targeted) (*targeted)[g.target()] = 1;
      return;
    }
    default:
      break;
  }
  throw CircuitError("properly-quantum gate in AIG lowering");
}

}  // namespace

Aig to_aig(const Circuit& m) {
  Aig a(m.width);
  std::vector<Aig::Lit> lits(m.width);
  std::vector<uint8_t> targeted(m.width, 0);
  for (uint32_t i = 0; i < m.width; ++i) lits[i] = a.input(i);
  for (const Gate& g : m.gates) append_gate(a, g, lits, &targeted);
  for (uint32_t i = 0; i < m.width; ++i)
    if (targeted[i]) a.add_output(a.xor_(lits[i], a.input(i)));
  return a;
}

Aig to_aig_lines(const Circuit& c, std::vector<Aig::Lit>& line_lits) {
  Aig a(c.width);
  line_lits.assign(c.width, 0);
  for (uint32_t i = 0; i < c.width; ++i) line_lits[i] = a.input(i);
  for (const Gate& g : c.gates) append_gate(a, g, line_lits, nullptr);
  return a;
}

void apply_tt_permutation(Aig& a, std::vector<Aig::Lit>& line_lits,
                          const std::vector<LineId>& support, const PermutationTable& p) {
  const uint32_t k = static_cast<uint32_t>(support.size());
  if (p.width != k) throw CircuitError("permutation width does not match support");
  std::vector<Aig::Lit> in(k);
  for (uint32_t j = 0; j < k; ++j) in[j] = line_lits[support[j]];

  std::vector<Aig::Lit> result(k);
  for (uint32_t r = 0; r < k; ++r) {
    std::function<Aig::Lit(uint32_t, uint64_t)> build = [&](uint32_t level, uint64_t base) {
      if (level == k)
        return ((p.map[base] >> (k - 1 - r)) & 1) ? Aig::kTrue : Aig::kFalse;
      Aig::Lit hi = build(level + 1, base | (1ull << (k - 1 - level)));
      Aig::Lit lo = build(level + 1, base);
      return a.ite(in[level], hi, lo);
    };
    result[r] = build(0, 0);
  }
  for (uint32_t r = 0; r < k; ++r) line_lits[support[r]] = result[r];
}

// ---------------------------------------------------------------------------
// Random simulation

SimSignature random_simulate(const Aig& a, int num_words, uint64_t seed) {
  SimSignature sig;
  sig.seed = seed;
  const size_t w = static_cast<size_t>(num_words);
  sig.words.assign(a.num_nodes(), std::vector<uint64_t>(w, 0));
  for (uint32_t i = 0; i < a.num_inputs(); ++i) {
    Rng rng(seed ^ (0x1234567ull + i * 0x9e3779b97f4a7c15ull));
    for (size_t j = 0; j < w; ++j) sig.words[i + 1][j] = rng.next();
  }
  for (uint32_t n = a.num_inputs() + 1; n < a.num_nodes(); ++n) {
    Aig::Lit f0 = a.fan0(n), f1 = a.fan1(n);
    const auto& w0 = sig.words[Aig::node_of(f0)];
    const auto& w1 = sig.words[Aig::node_of(f1)];
    const uint64_t m0 = Aig::sign_of(f0) ? ~0ull : 0ull;
    const uint64_t m1 = Aig::sign_of(f1) ? ~0ull : 0ull;
    auto& dst = sig.words[n];
    for (size_t j = 0; j < w; ++j) dst[j] = (w0[j] ^ m0) & (w1[j] ^ m1);
  }
  return sig;
}

// ---------------------------------------------------------------------------
// Cone SAT

namespace {

struct ConeSat {
  const Aig& g;
  CdclSolver solver;
  std::vector<int> var_of_node;  // 0 = absent

  explicit ConeSat(const Aig& aig) : g(aig), var_of_node(aig.num_nodes(), 0) {}

  int node_var(uint32_t node) {
    if (var_of_node[node]) return var_of_node[node];
    int v = solver.add_var();
    var_of_node[node] = v;
    if (g.is_and(node)) {
      int a = lit_var(g.fan0(node));
      int b = lit_var(g.fan1(node));
      solver.add_clause({-v, a});
      solver.add_clause({-v, b});
      solver.add_clause({v, -a, -b});
    }
    return v;
  }

  // Signed solver literal for an AIG literal; constants are not allowed here.
  int lit_var(Aig::Lit l) {
    int v = node_var(Aig::node_of(l));
    return Aig::sign_of(l) ? -v : v;
  }

  std::vector<uint8_t> input_pattern() {
    std::vector<uint8_t> bits(g.num_inputs(), 0);
    const auto& m = solver.model();
    for (uint32_t i = 0; i < g.num_inputs(); ++i) {
      int v = var_of_node[i + 1];
      if (v) bits[i] = m[static_cast<size_t>(v) - 1];
    }
    return bits;
  }
};

}  // namespace

PairOutcome prove_pair(const Aig& g, Aig::Lit a, Aig::Lit b, const SolveLimits& limits) {
  if (a == b) return {PairStatus::Equal, {}};
  if (a == Aig::not_(b)) return {PairStatus::NotEqual, std::vector<uint8_t>(g.num_inputs(), 0)};

  ConeSat cs(g);
  // Assert a != b. With one side constant this is a unit constraint.
  if (a == Aig::kTrue || a == Aig::kFalse) std::swap(a, b);
  if (b == Aig::kTrue) {
    cs.solver.add_clause({-cs.lit_var(a)});
  } else if (b == Aig::kFalse) {
    cs.solver.add_clause({cs.lit_var(a)});
  } else {
    int la = cs.lit_var(a), lb = cs.lit_var(b);
    cs.solver.add_clause({la, lb});
    cs.solver.add_clause({-la, -lb});
  }
  switch (cs.solver.solve(limits)) {
    case SolveStatus::Unsat:
      return {PairStatus::Equal, {}};
    case SolveStatus::Sat:
      return {PairStatus::NotEqual, cs.input_pattern()};
    case SolveStatus::Unknown:
      return {PairStatus::Undecided, {}};
  }
  return {PairStatus::Undecided, {}};
}

// ---------------------------------------------------------------------------
// Fraig sweep

namespace {

uint64_t hash_words(const std::vector<uint64_t>& w, bool flip) {
  uint64_t h = 0x9e3779b97f4a7c15ull;
  const uint64_t m = flip ? ~0ull : 0ull;
  for (uint64_t x : w) {
    h ^= (x ^ m) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return h;
}

struct Sweep {
  const CheckOptions& opts;
  CecInfo* info;
  Aig f;
  std::vector<std::vector<uint64_t>> sim;  // per f node
  std::vector<Aig::Lit> f_link;            // node -> equal literal (union-find style)
  std::vector<uint32_t> reps;              // nodes registered in the class table
  std::unordered_map<uint64_t, std::vector<uint32_t>> classes;
  SolveLimits limits;

  Sweep(uint32_t num_inputs, const CheckOptions& o, CecInfo* i) : opts(o), info(i), f(num_inputs) {
    limits.max_conflicts = opts.sat_conflict_budget;
    limits.deadline = opts.deadline();
    limits.cancel = opts.cancel;
    const size_t w = static_cast<size_t>(opts.sim_words);
    sim.assign(num_inputs + 1, std::vector<uint64_t>(w, 0));
    for (uint32_t i2 = 0; i2 < num_inputs; ++i2) {
      Rng rng(opts.seed ^ (0x1234567ull + i2 * 0x9e3779b97f4a7c15ull));
      for (size_t j = 0; j < w; ++j) sim[i2 + 1][j] = rng.next();
    }
    f_link.resize(num_inputs + 1);
    for (uint32_t n = 0; n <= num_inputs; ++n) f_link[n] = Aig::make_lit(n, false);
    register_rep(0);
    for (uint32_t i2 = 0; i2 < num_inputs; ++i2) register_rep(i2 + 1);
  }

  Aig::Lit find(Aig::Lit l) {
    for (;;) {
      uint32_t n = Aig::node_of(l);
      Aig::Lit link = f_link[n];
      if (link == Aig::make_lit(n, false)) return l;
      l = link ^ (Aig::sign_of(l) ? 1u : 0u);
    }
  }

  void sync_node(uint32_t node) {
    // Fresh structural node: extend link and simulation arrays.
    while (f_link.size() < f.num_nodes()) {
      uint32_t n = static_cast<uint32_t>(f_link.size());
      f_link.push_back(Aig::make_lit(n, false));
      sim.emplace_back(compute_words(n));
    }
    (void)node;
  }

  std::vector<uint64_t> compute_words(uint32_t n) {
    Aig::Lit f0 = f.fan0(n), f1 = f.fan1(n);
    const auto& w0 = sim[Aig::node_of(f0)];
    const auto& w1 = sim[Aig::node_of(f1)];
    const uint64_t m0 = Aig::sign_of(f0) ? ~0ull : 0ull;
    const uint64_t m1 = Aig::sign_of(f1) ? ~0ull : 0ull;
    std::vector<uint64_t> out(w0.size());
    for (size_t j = 0; j < out.size(); ++j) out[j] = (w0[j] ^ m0) & (w1[j] ^ m1);
    return out;
  }

  bool polarity(uint32_t node) const { return sim[node][0] & 1; }

  void register_rep(uint32_t node) {
    reps.push_back(node);
    classes[hash_words(sim[node], polarity(node))].push_back(node);
  }

  void rebuild_classes() {
    classes.clear();
    for (uint32_t n : reps) classes[hash_words(sim[n], polarity(n))].push_back(n);
  }

  // Extends every node's signature by one word whose lowest bit carries the
  // distinguishing pattern; then rebuilds the class table.
  void add_pattern(const std::vector<uint8_t>& bits) {
    for (uint32_t i = 0; i < f.num_inputs(); ++i)
      sim[i + 1].push_back(bits[i] ? 1ull : 0ull);
    sim[0].push_back(0);
    for (uint32_t n = f.num_inputs() + 1; n < f.num_nodes(); ++n) {
      Aig::Lit f0 = f.fan0(n), f1 = f.fan1(n);
      uint64_t w0 = sim[Aig::node_of(f0)].back() ^ (Aig::sign_of(f0) ? ~0ull : 0ull);
      uint64_t w1 = sim[Aig::node_of(f1)].back() ^ (Aig::sign_of(f1) ? ~0ull : 0ull);
      sim[n].push_back(w0 & w1);
    }
    if (info) info->refinement_patterns++;
    rebuild_classes();
  }

  // Maps a literal of the source AIG into the fraiged AIG, merging with a
  // proven-equivalent representative when one exists.
  Aig::Lit import_and(Aig::Lit fa, Aig::Lit fb, bool* undecided) {
    Aig::Lit raw = f.and_(fa, fb);
    sync_node(Aig::node_of(raw));
    Aig::Lit fl = find(raw);
    uint32_t v = Aig::node_of(fl);
    if (v == 0 || !f.is_and(v)) return fl;
    if (f_link[v] != Aig::make_lit(v, false)) return find(fl);

    for (;;) {
      bool retry = false;
      uint64_t h = hash_words(sim[v], polarity(v));
      auto it = classes.find(h);
      if (it != classes.end()) {
        for (uint32_t w : it->second) {
          if (w == v) continue;
          // Exact signature comparison; relative polarity from the parity bit.
          bool rel = polarity(v) != polarity(w);
          const auto& sv = sim[v];
          const auto& sw = sim[w];
          bool same = true;
          const uint64_t m = rel ? ~0ull : 0ull;
          for (size_t j = 0; j < sv.size() && same; ++j) same = sv[j] == (sw[j] ^ m);
          if (!same) continue;

          if (info) info->sat_calls++;
          PairOutcome po =
              prove_pair(f, Aig::make_lit(v, false), Aig::make_lit(w, rel), limits);
          if (po.status == PairStatus::Equal) {
            f_link[v] = Aig::make_lit(w, rel);
            if (info) info->merges++;
            return find(fl);
          }
          if (po.status == PairStatus::NotEqual) {
            add_pattern(po.pattern);
            retry = true;  // signatures changed; rescan candidates
            break;
          }
          if (po.status == PairStatus::Undecided) *undecided = true;
        }
      }
      if (!retry) break;
    }
    register_rep(v);
    return fl;
  }
};

}  // namespace

Verdict prove_outputs_zero(const Aig& a, const CheckOptions& opts, CecInfo* info) {
  if (info) info->aig_nodes = a.num_nodes();
  // Structural short-circuit: nothing to prove.
  bool all_const0 = true;
  for (Aig::Lit o : a.outputs()) {
    if (o == Aig::kTrue) return Verdict::neq(std::vector<uint8_t>(a.num_inputs(), 0));
    if (o != Aig::kFalse) all_const0 = false;
  }
  if (all_const0) return Verdict::eq();

  Sweep sweep(a.num_inputs(), opts, info);
  std::vector<Aig::Lit> repr(a.num_nodes());
  repr[0] = Aig::kFalse;
  for (uint32_t i = 0; i < a.num_inputs(); ++i) repr[i + 1] = a.input(i);

  bool undecided = false;
  for (uint32_t u = a.num_inputs() + 1; u < a.num_nodes(); ++u) {
    Aig::Lit fa = sweep.find(repr[Aig::node_of(a.fan0(u))] ^ (Aig::sign_of(a.fan0(u)) ? 1u : 0u));
    Aig::Lit fb = sweep.find(repr[Aig::node_of(a.fan1(u))] ^ (Aig::sign_of(a.fan1(u)) ? 1u : 0u));
    repr[u] = sweep.import_and(fa, fb, &undecided);
    if (opts.cancel && *opts.cancel) return Verdict::undecided("cancelled");
  }

  for (Aig::Lit o : a.outputs()) {
    Aig::Lit fo = sweep.find(repr[Aig::node_of(o)] ^ (Aig::sign_of(o) ? 1u : 0u));
    if (fo == Aig::kFalse) continue;
    if (fo == Aig::kTrue) return Verdict::neq(std::vector<uint8_t>(a.num_inputs(), 0));
    if (info) info->sat_calls++;
    PairOutcome po = prove_pair(sweep.f, fo, Aig::kFalse, sweep.limits);
    if (po.status == PairStatus::NotEqual) return Verdict::neq(std::move(po.pattern));
    if (po.status == PairStatus::Undecided) {
      undecided = true;
      continue;
    }
    // Proven constant zero: remember it for the remaining outputs.
    uint32_t n = Aig::node_of(fo);
    sweep.f_link[n] = Aig::make_lit(0, Aig::sign_of(fo));
  }
  if (undecided) return Verdict::undecided("SAT resource budget exhausted in fraig sweep");
  return Verdict::eq();
}

Verdict check_cec(const Circuit& c1, const Circuit& c2, const CheckOptions& opts, CecInfo* info) {
  if (!is_conventional_circuit(c1) || !is_conventional_circuit(c2))
    throw CircuitError("check_cec requires conventional circuits");

  PreparedMiter pm = prepare_miter(c1, c2, opts);
  if (info) info->simplify = pm.simplify;

  Aig a = to_aig(pm.miter);
  Verdict v = prove_outputs_zero(a, opts, info);
  if (v.not_equivalent() && v.counterexample) {
    auto cex = decode_counterexample(c1, c2, pm, std::move(*v.counterexample));
    if (cex) return Verdict::neq(std::move(*cex));
    return Verdict::neq_witness(0, "counterexample lost through non-conventional rotation");
  }
  return v;
}

}  // namespace revcheck
