#pragma once

#include <iosfwd>
#include <vector>

#include "revcheck/circuit.hpp"
#include "revcheck/semantics.hpp"

namespace revcheck {

/// Oracle-verified equivalent circuit pair; rewriting replaces lhs windows
/// by rhs. rhs never has more gates than lhs.
struct Template {
  Circuit lhs;
  Circuit rhs;
  std::string name;
};

struct SimplifyReport {
  size_t gates_before = 0;
  size_t gates_after = 0;
  int rounds = 0;
  size_t rotations_used = 0;
  size_t cancellations = 0;
  size_t template_hits = 0;
};

struct SimplifyOptions {
  /// 0 = automatic (2*|c| + 32 rounds).
  int max_rounds = 0;
  /// Circular rotation is sound only when checking against the identity.
  bool miter_mode = false;
  bool use_complicated_swap = true;
  /// nullptr = built-in library.
  const std::vector<Template>* templates = nullptr;
};

struct SimplifyResult {
  Circuit circuit;
  SimplifyReport report;
  /// Gates rotated off the front, in rotation order. Maps counterexamples of
  /// the simplified miter back to the original: x = rotation_prefix^-1(y).
  Circuit rotation_prefix;
};

/// Removes mutually-inverse adjacent gate pairs until none remain.
Circuit cancel_adjacent_inverses(const Circuit& c);

/// True only when g1 and g2 commute exactly.
bool can_swap_simple(const Gate& g1, const Gate& g2);

/// Fig-style complicated swap for Mct gates with target(g1) a control of g2
/// and target(g2) not a control of g1: [g1, g2] == [g2, g3, g1].
std::vector<Gate> swap_complicated(const Gate& g1, const Gate& g2);

/// Greedy leftmost one-pass application of every template.
Circuit apply_templates(const Circuit& c, const std::vector<Template>& lib);

SimplifyResult simplify(const Circuit& c, const SimplifyOptions& opts = {});

const std::vector<Template>& default_templates();

/// Throws CircuitError when the template is malformed or not equivalent.
void verify_template(const Template& t, PhaseMode mode = PhaseMode::Exact);

/// Template library file: ".template NAME", then the circuit format with a
/// ".rhs" separator between the two sides. Every entry is verified.
std::vector<Template> load_templates(std::istream& in);
std::vector<Template> load_templates_file(const std::string& path);

}  // namespace revcheck
