#include "revcheck/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace revcheck {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::complex<double> phase_factor(const PhaseFraction& p) {
  PhaseFraction::Int r = p.num % p.den;
  if (r < 0) r += p.den;
  // Exact values for the axes so conventional circuits stay error-free.
  if (r == 0) return {1, 0};
  if (p.den == 2 * r) return {-1, 0};           // half turn
  if (p.den == 4 * r) return {0, 1};            // quarter turn
  if (p.den * 3 == 4 * r) return {0, -1};       // three quarters
  double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(p.den);
  return std::polar(1.0, angle);
}

uint64_t controls_mask(uint32_t width, const Gate& g) {
  uint64_t m = 0;
  for (LineId l : g.controls) m |= line_bit(width, l);
  return m;
}

}  // namespace

bool PermutationTable::is_identity() const {
  for (uint64_t i = 0; i < map.size(); ++i)
    if (map[i] != i) return false;
  return true;
}

StateVector::StateVector(uint32_t w, uint64_t basis) : width(w), amps(1ull << w) {
  amps[basis] = 1.0;
}

double StateVector::norm_sq() const {
  double s = 0;
  for (const auto& a : amps) s += std::norm(a);
  return s;
}

std::vector<std::vector<uint64_t>> wire_functions(const Circuit& c) {
  if (!is_conventional_circuit(c)) throw CircuitError("wire_functions requires a conventional circuit");
  if (c.width > kTruthTableMaxLines) throw CircuitError("circuit too wide for truth tables");
  const uint32_t n = c.width;
  const uint64_t inputs = 1ull << n;
  const size_t words = inputs <= 64 ? 1 : (inputs >> 6);

  // Projection table per line: bit j holds line i's value in input j.
  std::vector<std::vector<uint64_t>> tab(n, std::vector<uint64_t>(words, 0));
  for (uint32_t i = 0; i < n; ++i) {
    for (uint64_t j = 0; j < inputs; ++j)
      if (j & line_bit(n, i)) tab[i][j >> 6] |= 1ull << (j & 63);
  }

  std::vector<uint64_t> acc(words);
  Circuit lowered = lower_to_mct(c);
  for (const Gate& g : lowered.gates) {
    acc.assign(words, ~0ull);
    for (LineId ctl : g.controls)
      for (size_t w = 0; w < words; ++w) acc[w] &= tab[ctl][w];
    auto& t = tab[g.target()];
    for (size_t w = 0; w < words; ++w) t[w] ^= acc[w];
  }
  return tab;
}

PermutationTable permutation_of(const Circuit& c) {
  if (!is_conventional_circuit(c)) throw CircuitError("permutation_of requires a conventional circuit");
  if (c.width > kTruthTableMaxLines) throw CircuitError("circuit too wide for permutation table");
  const uint32_t n = c.width;
  PermutationTable p;
  p.width = n;
  p.map.resize(1ull << n);

  Circuit lowered = lower_to_mct(c);
  struct MaskGate {
    uint64_t cmask, tmask;
  };
  std::vector<MaskGate> mg;
  mg.reserve(lowered.size());
  for (const Gate& g : lowered.gates)
    mg.push_back({controls_mask(n, g), line_bit(n, g.target())});

  for (uint64_t in = 0; in < p.map.size(); ++in) {
    uint64_t v = in;
    for (const MaskGate& g : mg)
      if ((v & g.cmask) == g.cmask) v ^= g.tmask;
    p.map[in] = v;
  }
  return p;
}

void apply_gate(StateVector& sv, const Gate& g, double tol) {
  const uint32_t n = sv.width;
  const uint64_t dim = 1ull << n;
  const uint64_t cmask = controls_mask(n, g);

  switch (g.kind) {
    case GateKind::Mct: {
      const uint64_t t = line_bit(n, g.target());
      for (uint64_t i = 0; i < dim; ++i)
        if ((i & cmask) == cmask && !(i & t)) std::swap(sv.amps[i], sv.amps[i | t]);
      break;
    }
    case GateKind::Swap: {
      const uint64_t a = line_bit(n, g.targets[0]);
      const uint64_t b = line_bit(n, g.targets[1]);
      for (uint64_t i = 0; i < dim; ++i)
        if ((i & a) && !(i & b)) std::swap(sv.amps[i], sv.amps[(i ^ a) | b]);
      break;
    }
    case GateKind::H: {
      const uint64_t t = line_bit(n, g.target());
      for (uint64_t i = 0; i < dim; ++i) {
        if (i & t) continue;
        auto lo = sv.amps[i], hi = sv.amps[i | t];
        sv.amps[i] = (lo + hi) * kInvSqrt2;
        sv.amps[i | t] = (lo - hi) * kInvSqrt2;
      }
      break;
    }
    case GateKind::CPhase: {
      const uint64_t mask = cmask | line_bit(n, g.target());
      const std::complex<double> w = phase_factor(g.phase);
      if (w != std::complex<double>(1, 0))
        for (uint64_t i = 0; i < dim; ++i)
          if ((i & mask) == mask) sv.amps[i] *= w;
      break;
    }
    case GateKind::CU: {
      const uint64_t t = line_bit(n, g.target());
      const Mat2& m = g.matrix;
      for (uint64_t i = 0; i < dim; ++i) {
        if ((i & cmask) != cmask || (i & t)) continue;
        auto lo = sv.amps[i], hi = sv.amps[i | t];
        sv.amps[i] = m[0] * lo + m[1] * hi;
        sv.amps[i | t] = m[2] * lo + m[3] * hi;
      }
      break;
    }
  }

  double drift = std::abs(sv.norm_sq() - 1.0);
  if (drift > tol) throw CircuitError("state norm drifted by " + std::to_string(drift));
}

StateVector simulate_basis(const Circuit& c, uint64_t basis, double tol) {
  if (c.width > kDenseSimMaxLines) throw CircuitError("circuit too wide for dense simulation");
  StateVector sv(c.width, basis);
  for (const Gate& g : c.gates) apply_gate(sv, g, tol);
  return sv;
}

Verdict unitary_equiv_identity(const Circuit& c, double tol, PhaseMode mode) {
  if (c.width > kDenseSimMaxLines) throw CircuitError("circuit too wide for dense simulation");
  const uint64_t dim = 1ull << c.width;
  std::complex<double> global(1, 0);
  bool have_global = false;
  for (uint64_t b = 0; b < dim; ++b) {
    StateVector sv = simulate_basis(c, b, tol);
    std::complex<double> diag = sv.amps[b];
    if (mode == PhaseMode::GlobalPhase) {
      if (!have_global) {
        if (std::abs(std::abs(diag) - 1.0) > tol) {
          std::vector<uint8_t> bits(c.width);
          for (uint32_t i = 0; i < c.width; ++i) bits[i] = (b & line_bit(c.width, i)) ? 1 : 0;
          return Verdict::neq(bits);
        }
        global = diag;
        have_global = true;
      }
      diag /= global;
    }
    if (std::abs(diag - std::complex<double>(1, 0)) > tol) {
      std::vector<uint8_t> bits(c.width);
      for (uint32_t i = 0; i < c.width; ++i) bits[i] = (b & line_bit(c.width, i)) ? 1 : 0;
      Verdict v = Verdict::neq(bits);
      v.witness_basis = b;
      return v;
    }
  }
  return Verdict::eq();
}

Circuit restrict_to_lines(const Circuit& c, const std::vector<LineId>& lines) {
  std::unordered_map<LineId, LineId> remap;
  for (size_t i = 0; i < lines.size(); ++i) remap[lines[i]] = static_cast<LineId>(i);
  Circuit r(static_cast<uint32_t>(lines.size()));
  for (const Gate& g : c.gates) {
    Gate ng = g;
    for (LineId& l : ng.controls) {
      auto it = remap.find(l);
      if (it == remap.end()) throw CircuitError("gate outside restricted line set");
      l = it->second;
    }
    for (LineId& l : ng.targets) {
      auto it = remap.find(l);
      if (it == remap.end()) throw CircuitError("gate outside restricted line set");
      l = it->second;
    }
    if (ng.kind == GateKind::Swap && ng.targets[0] > ng.targets[1])
      std::swap(ng.targets[0], ng.targets[1]);
    std::sort(ng.controls.begin(), ng.controls.end());
    r.push(std::move(ng));
  }
  return r;
}

Classification classify_functionality(const Circuit& c, double tol) {
  Classification cls;
  cls.support = circuit_support(c);
  if (cls.support.size() > kDenseSimMaxLines)
    throw CircuitError("support too wide for classification (" +
                       std::to_string(cls.support.size()) + " lines)");
  if (cls.support.empty()) {
    cls.classical = true;
    cls.perm = {0, {0}};
    return cls;
  }

  const Circuit sub = restrict_to_lines(c, cls.support);
  const uint64_t dim = 1ull << sub.width;

  PermutationTable p;
  p.width = sub.width;
  p.map.assign(dim, 0);
  std::vector<bool> hit(dim, false);

  for (uint64_t b = 0; b < dim; ++b) {
    StateVector sv = simulate_basis(sub, b, tol);
    uint64_t out = dim;  // sentinel
    for (uint64_t j = 0; j < dim; ++j) {
      if (std::abs(sv.amps[j] - std::complex<double>(1, 0)) <= tol) {
        out = j;
        break;
      }
    }
    if (out == dim) {
      cls.classical = false;
      cls.witness = b;
      return cls;
    }
    p.map[b] = out;
    hit[out] = true;
  }
  for (uint64_t j = 0; j < dim; ++j)
    if (!hit[j]) throw CircuitError("classified map is not a bijection");
  cls.classical = true;
  cls.perm = std::move(p);
  return cls;
}

std::vector<std::vector<std::complex<double>>> circuit_unitary(const Circuit& c, double tol) {
  const uint64_t dim = 1ull << c.width;
  std::vector<std::vector<std::complex<double>>> u(dim);
  for (uint64_t b = 0; b < dim; ++b) u[b] = simulate_basis(c, b, tol).amps;
  return u;  // u[column][row]
}

}  // namespace revcheck
