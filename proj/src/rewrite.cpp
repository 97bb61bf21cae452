#include "revcheck/rewrite.hpp"

#include <algorithm>
#include <functional>
#include <fstream>
#include <optional>
#include <sstream>

namespace revcheck {

namespace {

bool supports_disjoint(const Gate& a, const Gate& b) {
  std::vector<LineId> sa = support(a), sb = support(b);
  for (LineId l : sa)
    if (std::find(sb.begin(), sb.end(), l) != sb.end()) return false;
  return true;
}

bool in_controls(const Gate& g, LineId l) {
  return std::find(g.controls.begin(), g.controls.end(), l) != g.controls.end();
}

bool is_controlled_family(const Gate& g) {
  return g.kind == GateKind::Mct || g.kind == GateKind::CPhase || g.kind == GateKind::CU;
}

bool same_support_set(const Gate& a, const Gate& b) {
  return support(a) == support(b);  // support() returns sorted
}

}  // namespace

bool can_swap_simple(const Gate& g1, const Gate& g2) {
  if (supports_disjoint(g1, g2)) return true;
  // Diagonal gates commute regardless of how their lines overlap.
  if (g1.kind == GateKind::CPhase && g2.kind == GateKind::CPhase) return true;
  if (!is_controlled_family(g1) || !is_controlled_family(g2)) return false;
  if (in_controls(g2, g1.target())) return false;
  if (in_controls(g1, g2.target())) return false;
  if (g1.target() == g2.target()) return false;
  return true;
}

std::vector<Gate> swap_complicated(const Gate& g1, const Gate& g2) {
  if (g1.kind != GateKind::Mct || g2.kind != GateKind::Mct)
    throw CircuitError("swap_complicated requires Mct gates");
  if (!in_controls(g2, g1.target()) || in_controls(g1, g2.target()))
    throw CircuitError("swap_complicated precondition violated");
  std::vector<LineId> merged = g1.controls;
  for (LineId l : g2.controls)
    if (l != g1.target() && !in_controls(g1, l)) merged.push_back(l);
  Gate g3 = Gate::mct(std::move(merged), g2.target());
  return {g2, g3, g1};
}

Circuit cancel_adjacent_inverses(const Circuit& c) {
  Circuit r(c.width);
  for (const Gate& g : c.gates) {
    if (!r.gates.empty() && is_inverse_pair(r.gates.back(), g)) {
      r.gates.pop_back();
    } else {
      r.push(g);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Template matching

namespace {

struct LineMap {
  // tmpl line -> circuit line, and the reverse for injectivity.
  std::vector<int64_t> fwd;
  std::vector<int64_t> rev_used;  // circuit lines already taken

  LineMap(uint32_t tmpl_width, uint32_t circ_width)
      : fwd(tmpl_width, -1), rev_used(circ_width, 0) {}

  bool bind(LineId t, LineId c) {
    if (fwd[t] >= 0) return fwd[t] == static_cast<int64_t>(c);
    if (rev_used[c]) return false;
    fwd[t] = c;
    rev_used[c] = 1;
    return true;
  }
  void unbind(LineId t, LineId c) {
    if (fwd[t] == static_cast<int64_t>(c)) {
      fwd[t] = -1;
      rev_used[c] = 0;
    }
  }
};

// Assign each template control to a distinct circuit control, backtracking.
bool match_controls(const std::vector<LineId>& tc, const std::vector<LineId>& cc, size_t i,
                    std::vector<uint8_t>& taken, LineMap& map,
                    const std::function<bool()>& next) {
  if (i == tc.size()) return next();
  for (size_t j = 0; j < cc.size(); ++j) {
    if (taken[j]) continue;
    if (!map.bind(tc[i], cc[j])) continue;
    taken[j] = 1;
    if (match_controls(tc, cc, i + 1, taken, map, next)) return true;
    taken[j] = 0;
    map.unbind(tc[i], cc[j]);
  }
  return false;
}

bool match_gates(const Circuit& tmpl, const std::vector<Gate>& window, size_t gi, LineMap& map) {
  if (gi == tmpl.size()) return true;
  const Gate& tg = tmpl.gates[gi];
  const Gate& cg = window[gi];
  if (tg.kind != cg.kind) return false;
  if (tg.controls.size() != cg.controls.size()) return false;
  if (tg.kind == GateKind::CPhase && !(tg.phase == cg.phase)) return false;
  if (tg.kind == GateKind::CU && !(tg.matrix == cg.matrix)) return false;

  auto continue_match = [&]() { return match_gates(tmpl, window, gi + 1, map); };

  if (tg.kind == GateKind::Swap) {
    // Two unordered lines: try both pairings.
    for (int order = 0; order < 2; ++order) {
      LineId t0 = tg.targets[order], t1 = tg.targets[1 - order];
      if (!map.bind(t0, cg.targets[0])) continue;
      if (map.bind(t1, cg.targets[1])) {
        if (continue_match()) return true;
        map.unbind(t1, cg.targets[1]);
      }
      map.unbind(t0, cg.targets[0]);
    }
    return false;
  }

  if (!map.bind(tg.target(), cg.target())) return false;
  std::vector<uint8_t> taken(cg.controls.size(), 0);
  if (match_controls(tg.controls, cg.controls, 0, taken, map, continue_match)) return true;
  map.unbind(tg.target(), cg.target());
  return false;
}

std::optional<std::vector<Gate>> try_apply_at(const std::vector<Gate>& gates, size_t pos,
                                              const Template& t, uint32_t circ_width) {
  if (pos + t.lhs.size() > gates.size()) return std::nullopt;
  std::vector<Gate> window(gates.begin() + static_cast<ptrdiff_t>(pos),
                           gates.begin() + static_cast<ptrdiff_t>(pos + t.lhs.size()));
  LineMap map(t.lhs.width, circ_width);
  if (!match_gates(t.lhs, window, 0, map)) return std::nullopt;

  std::vector<Gate> out;
  out.reserve(t.rhs.size());
  for (const Gate& rg : t.rhs.gates) {
    Gate ng = rg;
    for (LineId& l : ng.controls) l = static_cast<LineId>(map.fwd[l]);
    for (LineId& l : ng.targets) l = static_cast<LineId>(map.fwd[l]);
    std::sort(ng.controls.begin(), ng.controls.end());
    if (ng.kind == GateKind::Swap && ng.targets[0] > ng.targets[1])
      std::swap(ng.targets[0], ng.targets[1]);
    out.push_back(std::move(ng));
  }
  return out;
}

}  // namespace

Circuit apply_templates(const Circuit& c, const std::vector<Template>& lib) {
  Circuit r = c;
  size_t i = 0;
  while (i < r.gates.size()) {
    bool applied = false;
    for (const Template& t : lib) {
      auto repl = try_apply_at(r.gates, i, t, r.width);
      if (!repl) continue;
      r.gates.erase(r.gates.begin() + static_cast<ptrdiff_t>(i),
                    r.gates.begin() + static_cast<ptrdiff_t>(i + t.lhs.size()));
      r.gates.insert(r.gates.begin() + static_cast<ptrdiff_t>(i), repl->begin(), repl->end());
      i += repl->size();  // single pass: move past the replacement
      applied = true;
      break;
    }
    if (!applied) ++i;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Simplification

namespace {

struct Work {
  std::vector<Gate> gates;
  SimplifyReport rep;
  Circuit rotation_prefix;

  explicit Work(const Circuit& c) : rotation_prefix(c.width) {
    gates.assign(c.gates.begin(), c.gates.end());
    rep.gates_before = c.size();
  }
};

// Pair cancellation plus two builtin shrinking rules: identity gates are
// dropped and adjacent same-support CPhase gates fuse their phases.
void pass_cancel(Work& w) {
  std::vector<Gate> out;
  out.reserve(w.gates.size());
  for (Gate& g : w.gates) {
    if (is_identity_gate(g)) {
      w.rep.cancellations++;
      continue;
    }
    if (!out.empty() && is_inverse_pair(out.back(), g)) {
      out.pop_back();
      w.rep.cancellations += 2;
      continue;
    }
    if (!out.empty() && out.back().kind == GateKind::CPhase && g.kind == GateKind::CPhase &&
        same_support_set(out.back(), g)) {
      PhaseFraction sum = out.back().phase + g.phase;
      if (sum.is_integer()) {
        out.pop_back();
        w.rep.cancellations += 2;
      } else {
        out.back().phase = sum;
        w.rep.cancellations += 1;
      }
      continue;
    }
    out.push_back(std::move(g));
  }
  w.gates = std::move(out);
}

// Circular view of the miter: a mutually-inverse (last, first) pair is one
// rotation followed by an adjacent cancellation.
void pass_wrap_cancel(Work& w) {
  while (w.gates.size() >= 2 && is_inverse_pair(w.gates.back(), w.gates.front())) {
    w.rotation_prefix.push(w.gates.front());
    w.gates.erase(w.gates.begin());
    w.gates.pop_back();
    w.rep.rotations_used++;
    w.rep.cancellations += 2;
  }
}

// For each gate, scan forward for a matching inverse, commuting over
// intermediate gates; optionally use the complicated swap when it enables
// an immediate cancellation (net one gate fewer).
void pass_move_together(Work& w, bool use_complicated) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < w.gates.size() && !changed; ++i) {
      const Gate& g = w.gates[i];
      for (size_t j = i + 1; j < w.gates.size(); ++j) {
        if (is_inverse_pair(g, w.gates[j])) {
          w.gates.erase(w.gates.begin() + static_cast<ptrdiff_t>(j));
          w.gates.erase(w.gates.begin() + static_cast<ptrdiff_t>(i));
          w.rep.cancellations += 2;
          changed = true;
          break;
        }
        if (can_swap_simple(g, w.gates[j])) continue;
        if (use_complicated && g.kind == GateKind::Mct && w.gates[j].kind == GateKind::Mct &&
            in_controls(w.gates[j], g.target()) && !in_controls(g, w.gates[j].target()) &&
            j + 1 < w.gates.size() && is_inverse_pair(g, w.gates[j + 1])) {
          // [g, I.., g2, g^-1] == [I.., g2, g3, g, g^-1] == [I.., g2, g3]
          std::vector<Gate> seq = swap_complicated(g, w.gates[j]);
          w.gates[j + 1] = seq[1];  // g3 replaces the cancelling inverse
          w.gates.erase(w.gates.begin() + static_cast<ptrdiff_t>(i));
          w.rep.cancellations += 2;
          changed = true;
          break;
        }
        break;  // blocked
      }
    }
  }
}

void pass_templates(Work& w, const std::vector<Template>& lib, uint32_t width) {
  size_t i = 0;
  while (i < w.gates.size()) {
    bool applied = false;
    for (const Template& t : lib) {
      if (t.rhs.size() >= t.lhs.size()) continue;  // only shrinking rewrites here
      if (i + t.lhs.size() > w.gates.size()) continue;
      auto repl = try_apply_at(w.gates, i, t, width);
      if (!repl) continue;
      w.gates.erase(w.gates.begin() + static_cast<ptrdiff_t>(i),
                    w.gates.begin() + static_cast<ptrdiff_t>(i + t.lhs.size()));
      w.gates.insert(w.gates.begin() + static_cast<ptrdiff_t>(i), repl->begin(), repl->end());
      w.rep.template_hits++;
      applied = true;
      break;
    }
    if (!applied) ++i;
  }
}

}  // namespace

SimplifyResult simplify(const Circuit& c, const SimplifyOptions& opts) {
  Work w(c);
  const std::vector<Template>& lib = opts.templates ? *opts.templates : default_templates();
  const int max_rounds =
      opts.max_rounds > 0 ? opts.max_rounds : static_cast<int>(2 * c.size() + 32);
  size_t rotations_since_progress = 0;

  while (w.rep.rounds < max_rounds) {
    w.rep.rounds++;
    const size_t before = w.gates.size();

    pass_cancel(w);
    if (opts.miter_mode) pass_wrap_cancel(w);
    pass_move_together(w, opts.use_complicated_swap);
    pass_templates(w, lib, c.width);

    if (w.gates.size() < before) {
      rotations_since_progress = 0;
      continue;
    }
    if (opts.miter_mode && !w.gates.empty() && rotations_since_progress < w.gates.size()) {
      w.rotation_prefix.push(w.gates.front());
      w.gates.push_back(w.gates.front());
      w.gates.erase(w.gates.begin());
      w.rep.rotations_used++;
      rotations_since_progress++;
      continue;
    }
    break;
  }

  SimplifyResult res;
  res.circuit = Circuit(c.width, {w.gates.begin(), w.gates.end()});
  res.circuit.name = c.name;
  res.circuit.line_names = c.line_names;
  w.rep.gates_after = res.circuit.size();
  res.report = w.rep;
  res.rotation_prefix = std::move(w.rotation_prefix);
  return res;
}

// ---------------------------------------------------------------------------
// Template library

void verify_template(const Template& t, PhaseMode mode) {
  if (t.lhs.width != t.rhs.width) throw CircuitError("template sides differ in width");
  if (t.lhs.width > 6) throw CircuitError("template wider than 6 lines");
  if (t.rhs.size() > t.lhs.size()) throw CircuitError("template rhs larger than lhs");
  validate_circuit(t.lhs);
  if (t.rhs.width == 0) throw CircuitError("template rhs missing");
  validate_circuit(t.rhs);

  std::vector<LineId> ls = circuit_support(t.lhs);
  for (LineId l : circuit_support(t.rhs))
    if (std::find(ls.begin(), ls.end(), l) == ls.end())
      throw CircuitError("template rhs uses a line absent from lhs");

  // Functional equivalence: U_lhs^-1 * U_rhs must be the identity.
  Circuit diff = concat(t.lhs, circuit_inverse(t.rhs));
  Verdict v = unitary_equiv_identity(diff, kDefaultAmplitudeTol, mode);
  if (!v.equivalent()) throw CircuitError("template '" + t.name + "' is not an equivalence");
}

const std::vector<Template>& default_templates() {
  static const std::vector<Template> lib = [] {
    std::vector<Template> ts;
    auto add = [&](std::string name, Circuit lhs, Circuit rhs) {
      Template t{std::move(lhs), std::move(rhs), std::move(name)};
      verify_template(t);
      ts.push_back(std::move(t));
    };
    add("cnot3-to-swap",
        Circuit(2, {Gate::cnot(0, 1), Gate::cnot(1, 0), Gate::cnot(0, 1)}),
        Circuit(2, {Gate::swap(0, 1)}));
    add("cnot3-to-swap-mirrored",
        Circuit(2, {Gate::cnot(1, 0), Gate::cnot(0, 1), Gate::cnot(1, 0)}),
        Circuit(2, {Gate::swap(0, 1)}));
    add("hh-cancel", Circuit(1, {Gate::h(0), Gate::h(0)}), Circuit(1));
    add("h-cnot-h-to-cz",
        Circuit(2, {Gate::h(1), Gate::cnot(0, 1), Gate::h(1)}),
        Circuit(2, {Gate::cphase(PhaseFraction(1, 2), {0}, 1)}));
    return ts;
  }();
  return lib;
}

std::vector<Template> load_templates(std::istream& in) {
  std::vector<Template> out;
  std::string raw, name;
  std::vector<std::string> header, lhs_lines, rhs_lines;
  int mode = 0;  // 0 header, 1 lhs, 2 rhs
  bool open = false;

  auto flush = [&]() {
    if (!open) return;
    auto join = [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
      std::string s;
      for (const auto& l : a) s += l + "\n";
      for (const auto& l : b) s += l + "\n";
      return s;
    };
    Template t;
    t.name = name;
    t.lhs = parse_circuit(join(header, lhs_lines) + ".end\n");
    t.rhs = parse_circuit(join(header, rhs_lines) + ".end\n");
    verify_template(t);
    out.push_back(std::move(t));
    header.clear();
    lhs_lines.clear();
    rhs_lines.clear();
    mode = 0;
    open = false;
  };

  while (std::getline(in, raw)) {
    std::string stripped = raw.substr(0, raw.find('#'));
    std::istringstream ss(stripped);
    std::string head;
    ss >> head;
    if (head == ".template") {
      flush();
      std::string n;
      ss >> n;
      name = n;
      open = true;
      continue;
    }
    if (!open) {
      if (head.empty()) continue;
      throw CircuitError("template file must start with .template");
    }
    if (head == ".rhs") {
      mode = 2;
      continue;
    }
    if (head == ".end") {
      flush();
      continue;
    }
    if (head.empty()) continue;
    if (head == ".numvars" || head == ".variables") {
      header.push_back(stripped);
      continue;
    }
    if (head == ".begin") {
      header.push_back(stripped);
      mode = 1;
      continue;
    }
    (mode == 2 ? rhs_lines : lhs_lines).push_back(stripped);
  }
  flush();
  return out;
}

std::vector<Template> load_templates_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CircuitError("cannot open '" + path + "'");
  return load_templates(in);
}

}  // namespace revcheck
