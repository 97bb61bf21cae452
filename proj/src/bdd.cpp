#include "revcheck/bdd.hpp"

#include <algorithm>

#include "revcheck/check_util.hpp"

namespace revcheck {

namespace {

constexpr uint32_t kTerminalVar = UINT32_MAX;

// Exact packing keeps table keys collision-free: refs use 26 bits (node
// budget is capped accordingly), variables 12 bits.
constexpr size_t kMaxNodes = 1ull << 26;

uint64_t unique_key(uint32_t var, uint32_t low, uint32_t high) {
  return static_cast<uint64_t>(high) | (static_cast<uint64_t>(low) << 26) |
         (static_cast<uint64_t>(var + 1) << 52);
}

uint64_t cache_key(BddOp op, uint32_t a, uint32_t b) {
  return static_cast<uint64_t>(a) | (static_cast<uint64_t>(b) << 26) |
         (static_cast<uint64_t>(op) << 52);
}

}  // namespace

BddManager::BddManager(uint32_t num_vars, size_t node_budget)
    : num_vars_(num_vars), budget_(std::min(node_budget, kMaxNodes)) {
  if (num_vars >= (1u << 11)) throw CircuitError("too many BDD variables");
  nodes_.push_back({kTerminalVar, kFalse, kFalse});  // 0
  nodes_.push_back({kTerminalVar, kTrue, kTrue});    // 1
}

BddManager::Ref BddManager::make(uint32_t var, Ref low, Ref high) {
  if (low == high) return low;
  uint64_t key = unique_key(var, low, high);
  auto [it, inserted] = unique_.try_emplace(key, 0);
  if (!inserted) return it->second;
  if (nodes_.size() >= budget_) throw BddBudgetExceeded();
  nodes_.push_back({var, low, high});
  it->second = static_cast<Ref>(nodes_.size() - 1);
  return it->second;
}

BddManager::Ref BddManager::var(uint32_t i) {
  if (i >= num_vars_) throw CircuitError("BDD variable index out of range");
  return make(i, kFalse, kTrue);
}

BddManager::Ref BddManager::apply(BddOp op, Ref a, Ref b) {
  switch (op) {
    case BddOp::And:
      if (a == kFalse || b == kFalse) return kFalse;
      if (a == kTrue) return b;
      if (b == kTrue) return a;
      if (a == b) return a;
      break;
    case BddOp::Or:
      if (a == kTrue || b == kTrue) return kTrue;
      if (a == kFalse) return b;
      if (b == kFalse) return a;
      if (a == b) return a;
      break;
    case BddOp::Xor:
      if (a == kFalse) return b;
      if (b == kFalse) return a;
      if (a == b) return kFalse;
      break;
  }
  if (a > b) std::swap(a, b);  // all supported ops are commutative

  uint64_t key = cache_key(op, a, b);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  uint32_t va = nodes_[a].var, vb = nodes_[b].var;
  uint32_t v = std::min(va, vb);
  Ref a_lo = va == v ? nodes_[a].low : a;
  Ref a_hi = va == v ? nodes_[a].high : a;
  Ref b_lo = vb == v ? nodes_[b].low : b;
  Ref b_hi = vb == v ? nodes_[b].high : b;

  Ref lo = apply(op, a_lo, b_lo);
  Ref hi = apply(op, a_hi, b_hi);
  Ref r = make(v, lo, hi);
  cache_[key] = r;
  return r;
}

size_t BddManager::live_count(const std::vector<Ref>& roots) const {
  std::vector<uint8_t> mark(nodes_.size(), 0);
  std::vector<Ref> stack;
  for (Ref r : roots)
    if (!mark[r]) {
      mark[r] = 1;
      stack.push_back(r);
    }
  size_t count = 0;
  while (!stack.empty()) {
    Ref r = stack.back();
    stack.pop_back();
    count++;
    if (nodes_[r].var == kTerminalVar) continue;
    for (Ref child : {nodes_[r].low, nodes_[r].high}) {
      if (!mark[child]) {
        mark[child] = 1;
        stack.push_back(child);
      }
    }
  }
  return count;
}

void BddManager::collect(std::vector<Ref>& roots) {
  std::vector<Ref> remap(nodes_.size(), UINT32_MAX);
  remap[kFalse] = kFalse;
  remap[kTrue] = kTrue;
  std::vector<Node> next;
  next.push_back(nodes_[0]);
  next.push_back(nodes_[1]);

  // Nodes are created children-first, so index order is topological.
  std::vector<uint8_t> mark(nodes_.size(), 0);
  mark[0] = mark[1] = 1;
  std::vector<Ref> stack(roots.begin(), roots.end());
  for (Ref r : stack) mark[r] = 1;
  while (!stack.empty()) {
    Ref r = stack.back();
    stack.pop_back();
    if (nodes_[r].var == kTerminalVar) continue;
    for (Ref child : {nodes_[r].low, nodes_[r].high}) {
      if (!mark[child]) {
        mark[child] = 1;
        stack.push_back(child);
      }
    }
  }
  for (Ref r = 2; r < nodes_.size(); ++r) {
    if (!mark[r]) continue;
    remap[r] = static_cast<Ref>(next.size());
    next.push_back({nodes_[r].var, remap[nodes_[r].low], remap[nodes_[r].high]});
  }
  nodes_ = std::move(next);
  unique_.clear();
  for (Ref r = 2; r < nodes_.size(); ++r)
    unique_[unique_key(nodes_[r].var, nodes_[r].low, nodes_[r].high)] = r;
  cache_.clear();
  for (Ref& r : roots) r = remap[r];
}

bool BddManager::eval(Ref r, const std::vector<uint8_t>& values) const {
  while (nodes_[r].var != kTerminalVar) r = values[nodes_[r].var] ? nodes_[r].high : nodes_[r].low;
  return r == kTrue;
}

std::vector<uint8_t> BddManager::any_sat(Ref r) const {
  std::vector<uint8_t> values(num_vars_, 0);
  if (r == kFalse) throw CircuitError("any_sat on the constant-0 BDD");
  while (nodes_[r].var != kTerminalVar) {
    // Every non-0 node has a path to 1.
    if (nodes_[r].high != kFalse) {
      values[nodes_[r].var] = 1;
      r = nodes_[r].high;
    } else {
      r = nodes_[r].low;
    }
  }
  return values;
}

std::vector<BddManager::Ref> build_wire_bdds(BddManager& m, const Circuit& c) {
  Circuit lowered = lower_to_mct(c);
  std::vector<BddManager::Ref> wires(c.width);
  for (uint32_t i = 0; i < c.width; ++i) wires[i] = m.var(i);
  for (const Gate& g : lowered.gates) {
    BddManager::Ref acc = BddManager::kTrue;
    for (LineId ctl : g.controls) acc = m.apply(BddOp::And, acc, wires[ctl]);
    wires[g.target()] = m.apply(BddOp::Xor, wires[g.target()], acc);
  }
  return wires;
}

Verdict check_bdd(const Circuit& c1, const Circuit& c2, const CheckOptions& opts,
                  BddCheckInfo* info) {
  if (!is_conventional_circuit(c1) || !is_conventional_circuit(c2))
    throw CircuitError("check_bdd requires conventional circuits");

  PreparedMiter pm = prepare_miter(c1, c2, opts);
  if (info) info->simplify = pm.simplify;
  const Circuit lowered = lower_to_mct(pm.miter);
  const uint32_t n = lowered.width;

  try {
    BddManager m(n, opts.bdd_node_budget);
    std::vector<BddManager::Ref> wires(n);
    for (uint32_t i = 0; i < n; ++i) wires[i] = m.var(i);

    const auto deadline = opts.deadline();
    for (const Gate& g : lowered.gates) {
      BddManager::Ref acc = BddManager::kTrue;
      for (LineId ctl : g.controls) acc = m.apply(BddOp::And, acc, wires[ctl]);
      wires[g.target()] = m.apply(BddOp::Xor, wires[g.target()], acc);

      if (info) {
        size_t live = m.live_count(wires);
        info->live_trace.push_back(live);
        info->peak_live = std::max(info->peak_live, live);
      }
      if (m.node_count() > opts.bdd_node_budget / 2) m.collect(wires);
      if (deadline && std::chrono::steady_clock::now() > *deadline)
        return Verdict::undecided("timeout while building wire BDDs");
      if (opts.cancel && *opts.cancel) return Verdict::undecided("cancelled");
    }

    for (uint32_t i = 0; i < n; ++i) {
      BddManager::Ref diff = m.apply(BddOp::Xor, wires[i], m.var(i));
      if (diff == BddManager::kFalse) continue;
      std::vector<uint8_t> y = m.any_sat(diff);
      auto cex = decode_counterexample(c1, c2, pm, std::move(y));
      if (cex) return Verdict::neq(std::move(*cex));
      return Verdict::neq_witness(0, "counterexample lost through non-conventional rotation");
    }
    return Verdict::eq();
  } catch (const BddBudgetExceeded&) {
    return Verdict::undecided("BDD node budget exhausted");
  }
}

}  // namespace revcheck
