#include "revcheck/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>

namespace revcheck {

ParseError::ParseError(int line, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_no(line) {}

namespace {

PhaseFraction::Int gcd128(PhaseFraction::Int a, PhaseFraction::Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    PhaseFraction::Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

std::string to_string(PhaseFraction::Int v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                            : static_cast<unsigned __int128>(v);
  std::string s;
  while (u) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

PhaseFraction::Int parse_phase_int(const std::string& s) {
  if (s.empty()) throw CircuitError("empty integer");
  size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw CircuitError("bad integer '" + s + "'");
  unsigned __int128 u = 0;
  constexpr unsigned __int128 limit = ~static_cast<unsigned __int128>(0) >> 1;  // 2^127-1
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw CircuitError("bad integer '" + s + "'");
    u = u * 10 + static_cast<unsigned>(s[i] - '0');
    if (u > limit) throw CircuitError("integer out of range '" + s + "'");
  }
  PhaseFraction::Int v = static_cast<PhaseFraction::Int>(u);
  return neg ? -v : v;
}

PhaseFraction::PhaseFraction(Int n, Int d) {
  if (d == 0) throw CircuitError("phase denominator must be nonzero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  Int g = gcd128(n, d);
  if (g == 0) g = 1;
  num = n / g;
  den = d / g;
}

PhaseFraction PhaseFraction::operator+(const PhaseFraction& o) const {
  // Sum over the lcm so equal denominators never widen.
  Int g = gcd128(den, o.den);
  return PhaseFraction(num * (o.den / g) + o.num * (den / g), den / g * o.den);
}

PhaseFraction PhaseFraction::operator-() const { return PhaseFraction(-num, den); }

namespace {

void check_operands(const std::vector<LineId>& controls, const std::vector<LineId>& targets) {
  std::set<LineId> seen;
  for (LineId l : controls)
    if (!seen.insert(l).second) throw CircuitError("duplicate line in gate");
  for (LineId l : targets)
    if (!seen.insert(l).second) throw CircuitError("duplicate line in gate");
}

bool mat_approx(const Mat2& a, const Mat2& b, double tol) {
  for (int i = 0; i < 4; ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 mat_dagger(const Mat2& m) {
  return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

const Mat2 kIdentity2{{{1, 0}, {0, 0}, {0, 0}, {1, 0}}};
const Mat2 kPauliX{{{0, 0}, {1, 0}, {1, 0}, {0, 0}}};

bool is_unitary(const Mat2& m) { return mat_approx(mat_mul(m, mat_dagger(m)), kIdentity2, kUnitaryTol); }

}  // namespace

Gate Gate::mct(std::vector<LineId> controls, LineId target) {
  std::sort(controls.begin(), controls.end());
  Gate g;
  g.kind = GateKind::Mct;
  g.controls = std::move(controls);
  g.targets = {target};
  check_operands(g.controls, g.targets);
  return g;
}

Gate Gate::swap(LineId a, LineId b) {
  if (a == b) throw CircuitError("duplicate line in gate");
  Gate g;
  g.kind = GateKind::Swap;
  g.targets = {std::min(a, b), std::max(a, b)};
  return g;
}

Gate Gate::h(LineId target) {
  Gate g;
  g.kind = GateKind::H;
  g.targets = {target};
  return g;
}

Gate Gate::cphase(PhaseFraction phase, std::vector<LineId> controls, LineId target) {
  std::sort(controls.begin(), controls.end());
  Gate g;
  g.kind = GateKind::CPhase;
  g.controls = std::move(controls);
  g.targets = {target};
  g.phase = phase;
  check_operands(g.controls, g.targets);
  return g;
}

Gate Gate::cu(const Mat2& m, std::vector<LineId> controls, LineId target) {
  if (!is_unitary(m)) throw CircuitError("CU matrix is not unitary");
  std::sort(controls.begin(), controls.end());
  Gate g;
  g.kind = GateKind::CU;
  g.controls = std::move(controls);
  g.targets = {target};
  g.matrix = m;
  check_operands(g.controls, g.targets);
  return g;
}

bool Gate::operator==(const Gate& o) const {
  if (kind != o.kind || controls != o.controls || targets != o.targets) return false;
  if (kind == GateKind::CPhase) return phase == o.phase;
  if (kind == GateKind::CU) return matrix == o.matrix;
  return true;
}

Gate gate_inverse(const Gate& g) {
  switch (g.kind) {
    case GateKind::Mct:
    case GateKind::Swap:
    case GateKind::H:
      return g;  // self-inverse
    case GateKind::CPhase: {
      Gate r = g;
      r.phase = -g.phase;
      return r;
    }
    case GateKind::CU: {
      Gate r = g;
      r.matrix = mat_dagger(g.matrix);
      return r;
    }
  }
  throw CircuitError("unknown gate kind");
}

Circuit circuit_inverse(const Circuit& c) {
  Circuit r(c.width);
  r.gates.reserve(c.size());
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) r.push(gate_inverse(*it));
  return r;
}

Circuit concat(const Circuit& c1, const Circuit& c2) {
  if (c1.width != c2.width) throw CircuitError("width mismatch in concat");
  Circuit r(c1.width);
  r.gates.reserve(c1.size() + c2.size());
  r.gates = c1.gates;
  r.gates.insert(r.gates.end(), c2.gates.begin(), c2.gates.end());
  return r;
}

bool is_conventional(const Gate& g) {
  switch (g.kind) {
    case GateKind::Mct:
    case GateKind::Swap:
      return true;
    case GateKind::H:
      return false;
    case GateKind::CPhase:
      return g.phase.is_integer();
    case GateKind::CU:
      // 0-1 permutation matrices only.
      return mat_approx(g.matrix, kIdentity2, kUnitaryTol) || mat_approx(g.matrix, kPauliX, kUnitaryTol);
  }
  return false;
}

bool is_conventional_circuit(const Circuit& c) {
  return std::all_of(c.gates.begin(), c.gates.end(), [](const Gate& g) { return is_conventional(g); });
}

bool is_identity_gate(const Gate& g) {
  if (g.kind == GateKind::CPhase) return g.phase.num == 0 || g.phase.is_integer();
  if (g.kind == GateKind::CU) return mat_approx(g.matrix, kIdentity2, kUnitaryTol);
  return false;
}

namespace {

bool same_lines_as_set(const Gate& a, const Gate& b) {
  std::vector<LineId> sa = support(a), sb = support(b);
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return sa == sb;
}

}  // namespace

bool is_inverse_pair(const Gate& g1, const Gate& g2) {
  if (g1.kind != g2.kind) return false;
  switch (g1.kind) {
    case GateKind::Mct:
    case GateKind::Swap:
    case GateKind::H:
      return g1 == g2;
    case GateKind::CPhase:
      // A controlled phase is symmetric across its lines.
      return same_lines_as_set(g1, g2) && (g1.phase + g2.phase).is_integer();
    case GateKind::CU:
      return g1.controls == g2.controls && g1.targets == g2.targets &&
             mat_approx(mat_mul(g2.matrix, g1.matrix), kIdentity2, kUnitaryTol);
  }
  return false;
}

std::vector<LineId> support(const Gate& g) {
  std::vector<LineId> s = g.controls;
  s.insert(s.end(), g.targets.begin(), g.targets.end());
  std::sort(s.begin(), s.end());
  return s;
}

std::vector<LineId> circuit_support(const Circuit& c) {
  std::set<LineId> s;
  for (const Gate& g : c.gates)
    for (LineId l : support(g)) s.insert(l);
  return {s.begin(), s.end()};
}

void validate_circuit(const Circuit& c) {
  if (c.width == 0) throw CircuitError("circuit width must be positive");
  for (const Gate& g : c.gates)
    for (LineId l : support(g))
      if (l >= c.width) throw CircuitError("gate line out of range");
}

std::string default_line_name(uint32_t i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "x" + std::to_string(i + 1);
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::string cur;
  for (char ch : line) {
    if (ch == '#') break;
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) toks.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) toks.push_back(std::move(cur));
  return toks;
}

int64_t parse_int(const std::string& tok, int line_no) {
  try {
    size_t pos = 0;
    int64_t v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line_no, "expected integer, got '" + tok + "'");
  }
}

double parse_real(const std::string& tok, int line_no) {
  try {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line_no, "expected real number, got '" + tok + "'");
  }
}

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct LineResolver {
  const std::vector<std::string>& names;
  LineId resolve(const std::string& tok, int line_no) const {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == tok) return static_cast<LineId>(i);
    throw ParseError(line_no, "unknown line '" + tok + "'");
  }
};

}  // namespace

Circuit parse_circuit(std::istream& in) {
  Circuit c;
  bool have_numvars = false, in_body = false, ended = false;
  std::vector<std::string> names;
  std::string raw;
  int line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::vector<std::string> toks = tokenize(raw);
    if (toks.empty()) continue;
    if (ended) throw ParseError(line_no, "content after .end");
    const std::string& head = toks[0];

    if (head == ".numvars") {
      if (have_numvars) throw ParseError(line_no, "duplicate .numvars");
      if (toks.size() != 2) throw ParseError(line_no, ".numvars takes one argument");
      int64_t n = parse_int(toks[1], line_no);
      if (n <= 0) throw ParseError(line_no, "width must be positive");
      c.width = static_cast<uint32_t>(n);
      names.resize(c.width);
      for (uint32_t i = 0; i < c.width; ++i) names[i] = default_line_name(i);
      have_numvars = true;
      continue;
    }
    if (!have_numvars) throw ParseError(line_no, ".numvars must come first");

    if (head == ".variables") {
      if (toks.size() != c.width + 1)
        throw ParseError(line_no, ".variables expects " + std::to_string(c.width) + " names");
      for (uint32_t i = 0; i < c.width; ++i) names[i] = toks[i + 1];
      continue;
    }
    if (head == ".begin") {
      in_body = true;
      continue;
    }
    if (head == ".end") {
      ended = true;
      continue;
    }
    if (!in_body) throw ParseError(line_no, "gate before .begin");

    LineResolver res{names};
    try {
      if (head == "h") {
        if (toks.size() != 2) throw ParseError(line_no, "h takes one line");
        c.push(Gate::h(res.resolve(toks[1], line_no)));
      } else if (head == "f2") {
        if (toks.size() != 3) throw ParseError(line_no, "f2 takes two lines");
        c.push(Gate::swap(res.resolve(toks[1], line_no), res.resolve(toks[2], line_no)));
      } else if (head.size() > 1 && head[0] == 't') {
        int64_t k = parse_int(head.substr(1), line_no);
        if (k < 1) throw ParseError(line_no, "t<k> requires k >= 1");
        if (static_cast<int64_t>(toks.size()) != k + 1)
          throw ParseError(line_no, "t" + std::to_string(k) + " expects " + std::to_string(k) + " lines");
        std::vector<LineId> ctrl;
        for (int64_t i = 1; i < k; ++i) ctrl.push_back(res.resolve(toks[i], line_no));
        c.push(Gate::mct(std::move(ctrl), res.resolve(toks[k], line_no)));
      } else if (head == "cp") {
        if (toks.size() < 4) throw ParseError(line_no, "cp NUM DEN L1 ... Lk");
        PhaseFraction::Int num, den;
        try {
          num = parse_phase_int(toks[1]);
          den = parse_phase_int(toks[2]);
        } catch (const CircuitError& e) {
          throw ParseError(line_no, e.what());
        }
        if (den <= 0) throw ParseError(line_no, "phase denominator must be positive");
        std::vector<LineId> ctrl;
        for (size_t i = 3; i + 1 < toks.size(); ++i) ctrl.push_back(res.resolve(toks[i], line_no));
        c.push(Gate::cphase(PhaseFraction(num, den), std::move(ctrl), res.resolve(toks.back(), line_no)));
      } else if (head == "u") {
        if (toks.size() < 10) throw ParseError(line_no, "u takes 8 matrix entries plus lines");
        Mat2 m;
        for (int i = 0; i < 4; ++i)
          m[i] = {parse_real(toks[1 + 2 * i], line_no), parse_real(toks[2 + 2 * i], line_no)};
        std::vector<LineId> ctrl;
        for (size_t i = 9; i + 1 < toks.size(); ++i) ctrl.push_back(res.resolve(toks[i], line_no));
        c.push(Gate::cu(m, std::move(ctrl), res.resolve(toks.back(), line_no)));
      } else {
        throw ParseError(line_no, "unknown gate '" + head + "'");
      }
    } catch (const CircuitError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!have_numvars) throw ParseError(line_no, "missing .numvars");
  c.line_names = names;
  validate_circuit(c);
  return c;
}

Circuit parse_circuit(const std::string& text) {
  std::istringstream in(text);
  return parse_circuit(in);
}

std::string write_circuit(const Circuit& c) {
  std::ostringstream out;
  if (!c.name.empty()) out << "# " << c.name << "\n";
  out << ".numvars " << c.width << "\n";
  out << ".variables";
  for (uint32_t i = 0; i < c.width; ++i) {
    out << ' ' << (i < c.line_names.size() && !c.line_names[i].empty() ? c.line_names[i]
                                                                       : default_line_name(i));
  }
  out << "\n.begin\n";
  auto name = [&](LineId l) {
    return l < c.line_names.size() && !c.line_names[l].empty() ? c.line_names[l]
                                                               : default_line_name(l);
  };
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::Mct:
        out << 't' << (g.controls.size() + 1);
        for (LineId l : g.controls) out << ' ' << name(l);
        out << ' ' << name(g.target()) << "\n";
        break;
      case GateKind::Swap:
        out << "f2 " << name(g.targets[0]) << ' ' << name(g.targets[1]) << "\n";
        break;
      case GateKind::H:
        out << "h " << name(g.target()) << "\n";
        break;
      case GateKind::CPhase:
        out << "cp " << to_string(g.phase.num) << ' ' << to_string(g.phase.den);
        for (LineId l : g.controls) out << ' ' << name(l);
        out << ' ' << name(g.target()) << "\n";
        break;
      case GateKind::CU:
        out << 'u';
        for (int i = 0; i < 4; ++i)
          out << ' ' << fmt_real(g.matrix[i].real()) << ' ' << fmt_real(g.matrix[i].imag());
        for (LineId l : g.controls) out << ' ' << name(l);
        out << ' ' << name(g.target()) << "\n";
        break;
    }
  }
  out << ".end\n";
  return out.str();
}

Circuit read_circuit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CircuitError("cannot open '" + path + "'");
  return parse_circuit(in);
}

void write_circuit_file(const Circuit& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CircuitError("cannot write '" + path + "'");
  out << write_circuit(c);
}

Circuit lower_swaps(const Circuit& c) {
  Circuit r(c.width);
  r.name = c.name;
  r.line_names = c.line_names;
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::Swap) {
      LineId a = g.targets[0], b = g.targets[1];
      r.push(Gate::cnot(a, b));
      r.push(Gate::cnot(b, a));
      r.push(Gate::cnot(a, b));
    } else {
      r.push(g);
    }
  }
  return r;
}

Circuit lower_to_mct(const Circuit& c) {
  Circuit r(c.width);
  for (const Gate& g : c.gates) {
    if (!is_conventional(g)) throw CircuitError("properly-quantum gate in boolean lowering");
    switch (g.kind) {
      case GateKind::Mct:
        r.push(g);
        break;
      case GateKind::Swap: {
        LineId a = g.targets[0], b = g.targets[1];
        r.push(Gate::cnot(a, b));
        r.push(Gate::cnot(b, a));
        r.push(Gate::cnot(a, b));
        break;
      }
      case GateKind::CPhase:
        break;  // integer phase: identity
      case GateKind::CU:
        if (!is_identity_gate(g)) r.push(Gate::mct(g.controls, g.target()));  // X matrix
        break;
      case GateKind::H:
        throw CircuitError("properly-quantum gate in boolean lowering");
    }
  }
  return r;
}

}  // namespace revcheck
