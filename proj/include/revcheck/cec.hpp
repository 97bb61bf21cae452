#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "revcheck/circuit.hpp"
#include "revcheck/options.hpp"
#include "revcheck/rewrite.hpp"
#include "revcheck/semantics.hpp"
#include "revcheck/solver.hpp"
#include "revcheck/verdict.hpp"

namespace revcheck {

/// And-inverter graph with structural hashing. Node 0 is constant false,
/// nodes 1..n are the inputs, AND nodes follow in topological order.
/// A literal is node*2 + negation.
class Aig {
 public:
  using Lit = uint32_t;
  static constexpr Lit kFalse = 0;
  static constexpr Lit kTrue = 1;
  static Lit not_(Lit l) { return l ^ 1; }
  static uint32_t node_of(Lit l) { return l >> 1; }
  static bool sign_of(Lit l) { return l & 1; }
  static Lit make_lit(uint32_t node, bool neg) { return node * 2 + neg; }

  explicit Aig(uint32_t num_inputs);

  uint32_t num_inputs() const { return num_inputs_; }
  uint32_t num_nodes() const { return static_cast<uint32_t>(fan0_.size()); }
  uint32_t num_ands() const { return num_nodes() - num_inputs_ - 1; }
  bool is_and(uint32_t node) const { return node > num_inputs_; }

  Lit input(uint32_t i) const { return make_lit(i + 1, false); }
  Lit and_(Lit a, Lit b);
  Lit xor_(Lit a, Lit b);  // three AND nodes
  Lit and_all(const std::vector<Lit>& lits);
  Lit ite(Lit c, Lit t, Lit e);

  Lit fan0(uint32_t node) const { return fan0_[node]; }
  Lit fan1(uint32_t node) const { return fan1_[node]; }

  void add_output(Lit l) { outputs_.push_back(l); }
  const std::vector<Lit>& outputs() const { return outputs_; }

  /// ASCII "aag" interchange dump for debugging.
  std::string to_aag() const;

 private:
  uint32_t num_inputs_;
  std::vector<Lit> fan0_, fan1_;  // zero for const/input nodes
  std::vector<Lit> outputs_;
  std::unordered_map<uint64_t, uint32_t> strash_;
};

/// Mismatch-output lowering of a conventional circuit (its own miter form):
/// each Mct becomes t' = XOR(t, AND(controls)); every line that was ever
/// targeted contributes the output XOR(final, input).
Aig to_aig(const Circuit& m);

/// Lowering that leaves output creation to the caller: line_lits receives
/// the final literal per line. Used to splice extra logic behind a prefix.
Aig to_aig_lines(const Circuit& c, std::vector<Aig::Lit>& line_lits);

/// Appends a permutation over `support` lines as mux trees (Shannon
/// decomposition of each output bit over the current line literals).
void apply_tt_permutation(Aig& a, std::vector<Aig::Lit>& line_lits,
                          const std::vector<LineId>& support, const PermutationTable& p);

struct SimSignature {
  std::vector<std::vector<uint64_t>> words;  // per node
  uint64_t seed = 0;
};

SimSignature random_simulate(const Aig& a, int num_words, uint64_t seed);

enum class PairStatus : uint8_t { Equal, NotEqual, Undecided };

struct PairOutcome {
  PairStatus status = PairStatus::Undecided;
  std::vector<uint8_t> pattern;  // input bits when NotEqual
};

/// SAT query on XOR(a, b) over the cones; counterexamples feed signature
/// refinement in the sweep.
PairOutcome prove_pair(const Aig& g, Aig::Lit a, Aig::Lit b, const SolveLimits& limits = {});

struct CecInfo {
  SimplifyReport simplify;
  size_t merges = 0;
  size_t sat_calls = 0;
  size_t refinement_patterns = 0;
  size_t aig_nodes = 0;
};

/// Fraig-style sweep proving every AIG output constant 0. On success the
/// verdict is Equivalent; a satisfiable output yields the input pattern.
Verdict prove_outputs_zero(const Aig& a, const CheckOptions& opts, CecInfo* info = nullptr);

Verdict check_cec(const Circuit& c1, const Circuit& c2, const CheckOptions& opts = {},
                  CecInfo* info = nullptr);

}  // namespace revcheck
