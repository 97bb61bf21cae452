#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace revcheck {

using LineId = uint32_t;

struct ParseError : std::runtime_error {
  int line_no;
  ParseError(int line, const std::string& msg);
};

struct CircuitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rational multiple of a full turn: the angle is 2*pi*num/den.
/// Always stored in lowest terms with den > 0. 128-bit components so the
/// 1/2^k rotations of wide QFT circuits stay exact.
struct PhaseFraction {
  using Int = __int128;

  Int num = 0;
  Int den = 1;

  PhaseFraction() = default;
  PhaseFraction(Int n, Int d);

  PhaseFraction operator+(const PhaseFraction& o) const;
  PhaseFraction operator-() const;
  bool operator==(const PhaseFraction&) const = default;

  // Integer multiples of 2*pi act as the identity phase.
  bool is_integer() const { return den == 1; }
  double turns() const { return static_cast<double>(num) / static_cast<double>(den); }
};

std::string to_string(PhaseFraction::Int v);
PhaseFraction::Int parse_phase_int(const std::string& s);  // throws CircuitError

enum class GateKind : uint8_t { Mct, Swap, H, CPhase, CU };

using Mat2 = std::array<std::complex<double>, 4>;  // row-major 2x2

inline constexpr double kUnitaryTol = 1e-12;

struct Gate {
  GateKind kind = GateKind::Mct;
  std::vector<LineId> controls;  // sorted, unique; empty for Swap/H
  std::vector<LineId> targets;   // one line; two (sorted) for Swap
  PhaseFraction phase;           // CPhase only
  Mat2 matrix{};                 // CU only

  static Gate mct(std::vector<LineId> controls, LineId target);
  static Gate nott(LineId target) { return mct({}, target); }
  static Gate cnot(LineId control, LineId target) { return mct({control}, target); }
  static Gate toffoli(LineId c1, LineId c2, LineId target) { return mct({c1, c2}, target); }
  static Gate swap(LineId a, LineId b);
  static Gate h(LineId target);
  static Gate cphase(PhaseFraction phase, std::vector<LineId> controls, LineId target);
  static Gate cu(const Mat2& m, std::vector<LineId> controls, LineId target);

  LineId target() const { return targets.front(); }
  bool operator==(const Gate& o) const;
};

struct Circuit {
  uint32_t width = 0;
  std::vector<Gate> gates;
  std::string name;                     // optional label, ignored by equality
  std::vector<std::string> line_names;  // optional, ignored by equality

  Circuit() = default;
  explicit Circuit(uint32_t w) : width(w) {}
  Circuit(uint32_t w, std::vector<Gate> gs) : width(w), gates(std::move(gs)) {}

  size_t size() const { return gates.size(); }
  bool empty() const { return gates.empty(); }
  void push(Gate g) { gates.push_back(std::move(g)); }

  bool operator==(const Circuit& o) const { return width == o.width && gates == o.gates; }
};

Gate gate_inverse(const Gate& g);
Circuit circuit_inverse(const Circuit& c);
Circuit concat(const Circuit& c1, const Circuit& c2);

bool is_conventional(const Gate& g);
bool is_conventional_circuit(const Circuit& c);

/// True when the gate acts as the identity (integer CPhase, CU with unit matrix).
bool is_identity_gate(const Gate& g);

/// True when applying g1 then g2 is the identity transformation.
bool is_inverse_pair(const Gate& g1, const Gate& g2);

std::vector<LineId> support(const Gate& g);
std::vector<LineId> circuit_support(const Circuit& c);

/// Throws CircuitError if a gate references a line >= width.
void validate_circuit(const Circuit& c);

Circuit parse_circuit(std::istream& in);
Circuit parse_circuit(const std::string& text);
std::string write_circuit(const Circuit& c);

Circuit read_circuit_file(const std::string& path);
void write_circuit_file(const Circuit& c, const std::string& path);

/// Rewrites every Swap into three CNOTs; other gates pass through.
Circuit lower_swaps(const Circuit& c);

/// Boolean lowering used by the SAT/BDD/AIG backends: Swap becomes three
/// CNOTs, identity gates are dropped, permutation-matrix CU becomes Mct.
/// Throws CircuitError on properly-quantum gates.
Circuit lower_to_mct(const Circuit& c);

std::string default_line_name(uint32_t i);

}  // namespace revcheck
