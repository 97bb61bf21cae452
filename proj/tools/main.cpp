#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "revcheck/adaptive.hpp"
#include "revcheck/bdd.hpp"
#include "revcheck/bench.hpp"
#include "revcheck/cec.hpp"
#include "revcheck/check_util.hpp"
#include "revcheck/miter.hpp"
#include "revcheck/rewrite.hpp"
#include "revcheck/satenc.hpp"
#include "revcheck/semantics.hpp"

using namespace revcheck;
using nlohmann::json;

namespace {

constexpr int kExitEquivalent = 0;
constexpr int kExitNotEquivalent = 1;
constexpr int kExitInconclusive = 2;

struct CheckReport {
  std::string verdict;
  std::optional<std::string> counterexample;  // line bits, line 0 first
  std::optional<uint64_t> witness;
  std::string method;
  std::string variant;
  size_t gates_before = 0;
  size_t gates_after = 0;
  std::optional<AdaptiveTrace> trace;
  double wall_time_s = 0;
  uint64_t seed = 0;
  std::string reason;
};

std::string bits_to_string(const std::vector<uint8_t>& bits) {
  std::string s;
  for (uint8_t b : bits) s.push_back(b ? '1' : '0');
  return s;
}

void print_report(const CheckReport& r, const std::string& format) {
  if (format == "json-lines") {
    json j;
    j["verdict"] = r.verdict;
    if (r.counterexample) j["counterexample"] = *r.counterexample;
    if (r.witness) j["witness"] = *r.witness;
    j["method"] = r.method;
    j["variant"] = r.variant;
    j["gates_before"] = r.gates_before;
    j["gates_after"] = r.gates_after;
    if (r.trace) {
      json steps = json::array();
      for (const AdaptiveStep& s : r.trace->steps) {
        steps.push_back({{"step", s.step},
                         {"gates_before", s.gates_before},
                         {"gates_after", s.gates_after},
                         {"engine", s.engine},
                         {"outcome", s.outcome}});
      }
      j["trace"] = steps;
    }
    j["wall_time_s"] = r.wall_time_s;
    j["seed"] = r.seed;
    if (!r.reason.empty()) j["reason"] = r.reason;
    std::cout << j.dump() << "\n";
    return;
  }
  std::cout << "verdict: " << r.verdict << "\n";
  if (r.counterexample) std::cout << "counterexample: " << *r.counterexample << "\n";
  if (r.witness) std::cout << "witness: " << *r.witness << "\n";
  std::cout << "method: " << r.method << "\n";
  std::cout << "variant: " << r.variant << "\n";
  std::cout << "gates-before: " << r.gates_before << "\n";
  std::cout << "gates-after: " << r.gates_after << "\n";
  if (r.trace) {
    for (const AdaptiveStep& s : r.trace->steps)
      std::cout << "trace: step " << s.step << " gates " << s.gates_before << " -> "
                << s.gates_after << (s.engine.empty() ? "" : " engine " + s.engine) << " ["
                << s.outcome << "]\n";
  }
  if (!r.reason.empty()) std::cout << "reason: " << r.reason << "\n";
  std::cout << "wall-time-s: " << r.wall_time_s << "\n";
  std::cout << "seed: " << r.seed << "\n";
}

MiterVariant parse_variant(const std::string& s, bool& auto_mode) {
  auto_mode = false;
  if (s == "auto") {
    auto_mode = true;
    return MiterVariant::C1_C2inv;
  }
  if (s == "c1-c2inv") return MiterVariant::C1_C2inv;
  if (s == "c2inv-c1") return MiterVariant::C2inv_C1;
  if (s == "c2-c1inv") return MiterVariant::C2_C1inv;
  if (s == "c1inv-c2") return MiterVariant::C1inv_C2;
  throw CircuitError("unknown variant '" + s + "'");
}

struct CheckArgs {
  std::string file_a, file_b;
  std::string method = "auto";
  std::string variant = "c1-c2inv";
  std::string format = "text";
  bool no_simplify = false;
  int rounds = 0;
  double timeout_sec = 0;
  uint64_t seed = 0xda7a5eedull;
  bool portfolio = false;
  std::string sat_cmd;
};

int run_check(const CheckArgs& a) {
  Circuit c1 = read_circuit_file(a.file_a);
  Circuit c2 = read_circuit_file(a.file_b);
  if (c1.width != c2.width) throw CircuitError("width mismatch between input circuits");

  CheckOptions opts;
  bool variant_auto = false;
  MiterVariant v = parse_variant(a.variant, variant_auto);
  if (variant_auto)
    opts.variant = std::nullopt;
  else
    opts.variant = v;
  opts.simplify = !a.no_simplify;
  opts.simplify_rounds = a.rounds;
  opts.seed = a.seed;
  opts.portfolio = a.portfolio;
  if (a.timeout_sec > 0) opts.timeout_sec = a.timeout_sec;
  if (!a.sat_cmd.empty()) {
    opts.external_solver_cmd = a.sat_cmd;
  } else if (const char* env = std::getenv("REVCHECK_SAT_CMD")) {
    opts.external_solver_cmd = env;
  }

  std::string method = a.method;
  if (method == "auto")
    method = (is_conventional_circuit(c1) && is_conventional_circuit(c2)) ? "cec" : "adaptive";

  CheckReport rep;
  rep.method = method;
  rep.seed = a.seed;
  rep.variant = a.variant;
  rep.gates_before = c1.size() + c2.size();
  rep.gates_after = rep.gates_before;

  auto t0 = std::chrono::steady_clock::now();
  Verdict verdict;
  if (method == "sat") {
    SatCheckInfo info;
    verdict = check_sat(c1, c2, opts, &info);
    rep.gates_after = info.simplify.gates_after;
  } else if (method == "bdd") {
    BddCheckInfo info;
    verdict = check_bdd(c1, c2, opts, &info);
    rep.gates_after = info.simplify.gates_after;
  } else if (method == "cec") {
    CecInfo info;
    verdict = check_cec(c1, c2, opts, &info);
    rep.gates_after = info.simplify.gates_after;
  } else if (method == "quantum") {
    PreparedMiter pm = prepare_miter(c1, c2, opts);
    rep.gates_after = pm.miter.size();
    rep.variant = to_string(pm.variant);
    if (pm.miter.width > kDenseSimMaxLines) {
      verdict = Verdict::undecided("width above the dense-simulation cap");
    } else {
      verdict = unitary_equiv_identity(pm.miter, opts.amplitude_tol);
      if (verdict.not_equivalent() && verdict.counterexample) {
        auto cex = decode_counterexample(c1, c2, pm, std::move(*verdict.counterexample));
        if (cex)
          verdict.counterexample = std::move(*cex);
        else
          verdict.counterexample.reset();
      }
    }
  } else if (method == "adaptive") {
    auto [vd, trace] = adaptive_check(c1, c2, opts);
    verdict = std::move(vd);
    if (trace.steps.size() >= 2) rep.gates_after = trace.steps[1].gates_after;
    rep.trace = std::move(trace);
  } else {
    throw CircuitError("unknown method '" + method + "'");
  }
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  rep.verdict = to_string(verdict.kind);
  if (verdict.counterexample) rep.counterexample = bits_to_string(*verdict.counterexample);
  if (verdict.witness_basis) rep.witness = *verdict.witness_basis;
  rep.reason = verdict.reason;
  print_report(rep, a.format);

  switch (verdict.kind) {
    case Verdict::Kind::Equivalent: return kExitEquivalent;
    case Verdict::Kind::NotEquivalent: return kExitNotEquivalent;
    case Verdict::Kind::Inconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

void write_output(const Circuit& c, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << write_circuit(c);
  else
    write_circuit_file(c, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equivalence checking for reversible and quantum circuits"};
  app.require_subcommand(1);

  CheckArgs ca;
  CLI::App* check = app.add_subcommand("check", "decide whether two circuits are equivalent");
  check->add_option("fileA", ca.file_a, "first circuit")->required();
  check->add_option("fileB", ca.file_b, "second circuit")->required();
  check->add_option("--method", ca.method, "sat|bdd|cec|quantum|adaptive|auto")
      ->check(CLI::IsMember({"sat", "bdd", "cec", "quantum", "adaptive", "auto"}));
  check->add_option("--variant", ca.variant, "miter variant or 'auto'");
  check->add_option("--format", ca.format, "text|json-lines")
      ->check(CLI::IsMember({"text", "json-lines"}));
  check->add_flag("--no-simplify", ca.no_simplify, "skip miter simplification");
  check->add_option("--rounds", ca.rounds, "simplification round budget (0 = auto)");
  check->add_option("--timeout", ca.timeout_sec, "seconds before Inconclusive");
  check->add_option("--seed", ca.seed, "random-pattern seed (echoed in the report)");
  check->add_flag("--portfolio", ca.portfolio, "race sat/bdd/cec on conventional residues");
  check->add_option("--sat-cmd", ca.sat_cmd,
                    "external SAT command with {file} placeholder (or REVCHECK_SAT_CMD)");

  std::string sf_file, sf_out, sf_templates;
  int sf_rounds = 0;
  bool sf_miter = false;
  CLI::App* simp = app.add_subcommand("simplify", "locally simplify a circuit");
  simp->add_option("file", sf_file, "circuit file")->required();
  simp->add_option("-o,--output", sf_out, "output file (default stdout)");
  simp->add_option("--rounds", sf_rounds, "round budget")->check(CLI::PositiveNumber);
  simp->add_flag("--miter", sf_miter, "treat as a miter (enables circular rotation)");
  simp->add_option("--templates", sf_templates, "extra template library file");

  std::string mt_a, mt_b, mt_out, mt_variant = "c1-c2inv";
  CLI::App* mit = app.add_subcommand("miter", "build a reversible miter");
  mit->add_option("fileA", mt_a)->required();
  mit->add_option("fileB", mt_b)->required();
  mit->add_option("--variant", mt_variant, "c1-c2inv|c2inv-c1|c2-c1inv|c1inv-c2");
  mit->add_option("-o,--output", mt_out, "output file (default stdout)");

  std::string gen_kind, gen_out, gen_oracle;
  uint32_t gen_n = 0, gen_k = 1;
  CLI::App* gen = app.add_subcommand("gen", "generate a benchmark circuit");
  gen->add_option("kind", gen_kind, "lnn|adder|multiplier|mesh|qft|grover|wireperm")
      ->required()
      ->check(CLI::IsMember({"lnn", "adder", "multiplier", "mesh", "qft", "grover", "wireperm"}));
  gen->add_option("--n", gen_n, "size parameter")->required();
  gen->add_option("--k", gen_k, "separation (lnn only)");
  gen->add_option("--oracle", gen_oracle, "oracle circuit file (grover only)");
  gen->add_option("-o,--output", gen_out, "output file (default stdout)");

  std::string mu_file, mu_out, mu_mode = "diff1";
  uint64_t mu_seed = 1;
  uint32_t mu_count = 10;
  bool mu_verify = false;
  CLI::App* mut = app.add_subcommand("mutate", "apply a seeded mutation");
  mut->add_option("file", mu_file)->required();
  mut->add_option("--mode", mu_mode, "diff1|diff2|midadd|middelete")
      ->check(CLI::IsMember({"diff1", "diff2", "midadd", "middelete"}));
  mut->add_option("--seed", mu_seed, "mutation seed");
  mut->add_option("--count", mu_count, "gates to add or delete");
  mut->add_flag("--verify", mu_verify, "re-roll until oracle-confirmed inequivalent");
  mut->add_option("-o,--output", mu_out, "output file (default stdout)");

  std::string st_file;
  CLI::App* stats = app.add_subcommand("stats", "print circuit statistics");
  stats->add_option("file", st_file)->required();

  // DIMACS utility; also serves as a self-hosted external solver command.
  std::string ss_file;
  CLI::App* satsolve = app.add_subcommand("sat-solve", "solve a DIMACS CNF file");
  satsolve->add_option("file", ss_file)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return run_check(ca);

    if (*simp) {
      Circuit c = read_circuit_file(sf_file);
      SimplifyOptions so;
      so.max_rounds = sf_rounds;
      so.miter_mode = sf_miter;
      std::vector<Template> lib;
      if (!sf_templates.empty()) {
        lib = default_templates();
        for (Template& t : load_templates_file(sf_templates)) lib.push_back(std::move(t));
        so.templates = &lib;
      }
      SimplifyResult res = simplify(c, so);
      write_output(res.circuit, sf_out);
      std::cerr << "gates-before: " << res.report.gates_before << "\n"
                << "gates-after: " << res.report.gates_after << "\n"
                << "rounds: " << res.report.rounds << "\n"
                << "cancellations: " << res.report.cancellations << "\n"
                << "rotations: " << res.report.rotations_used << "\n"
                << "template-hits: " << res.report.template_hits << "\n";
      return 0;
    }

    if (*mit) {
      bool auto_mode = false;
      MiterVariant v = parse_variant(mt_variant, auto_mode);
      if (auto_mode) throw CircuitError("miter subcommand needs a concrete variant");
      Circuit m = build_miter(read_circuit_file(mt_a), read_circuit_file(mt_b), v);
      write_output(m, mt_out);
      return 0;
    }

    if (*gen) {
      Circuit c;
      if (gen_kind == "lnn")
        c = bench::gen_lnn_cnot(gen_n, gen_k);
      else if (gen_kind == "adder")
        c = bench::gen_adder(gen_n);
      else if (gen_kind == "multiplier")
        c = bench::gen_multiplier(gen_n);
      else if (gen_kind == "mesh")
        c = bench::gen_mesh(gen_n);
      else if (gen_kind == "qft")
        c = bench::gen_qft(gen_n);
      else if (gen_kind == "wireperm")
        c = bench::gen_wire_permutation(gen_n);
      else if (gen_kind == "grover") {
        if (gen_oracle.empty()) throw CircuitError("grover generation needs --oracle FILE");
        c = bench::gen_grover_iteration(read_circuit_file(gen_oracle));
      }
      write_output(c, gen_out);
      return 0;
    }

    if (*mut) {
      Circuit c = read_circuit_file(mu_file);
      bench::Mutation m;
      m.seed = mu_seed;
      m.count = mu_count;
      if (mu_mode == "diff1") m.mode = bench::Mutation::Mode::Diff1;
      if (mu_mode == "diff2") m.mode = bench::Mutation::Mode::Diff2;
      if (mu_mode == "midadd") m.mode = bench::Mutation::Mode::MidAdd;
      if (mu_mode == "middelete") m.mode = bench::Mutation::Mode::MidDelete;
      Circuit out;
      if (mu_verify) {
        bench::VerifiedMutant vm = bench::mutate_verified(c, m);
        out = std::move(vm.circuit);
        std::cerr << "seed-used: " << vm.seed_used << "\nrerolls: " << vm.rerolls
                  << "\nverified: " << (vm.verified ? "yes" : "no") << "\n";
      } else {
        out = bench::mutate(c, m);
        std::cerr << "seed-used: " << mu_seed << "\n";
      }
      write_output(out, mu_out);
      return 0;
    }

    if (*stats) {
      Circuit c = read_circuit_file(st_file);
      size_t counts[5] = {0, 0, 0, 0, 0};
      for (const Gate& g : c.gates) counts[static_cast<size_t>(g.kind)]++;
      std::cout << "width: " << c.width << "\n"
                << "gates: " << c.size() << "\n"
                << "mct: " << counts[0] << "\n"
                << "swap: " << counts[1] << "\n"
                << "h: " << counts[2] << "\n"
                << "cphase: " << counts[3] << "\n"
                << "cu: " << counts[4] << "\n"
                << "properly-quantum: " << (is_conventional_circuit(c) ? "no" : "yes") << "\n";
      return 0;
    }

    if (*satsolve) {
      std::ifstream in(ss_file);
      if (!in) throw CircuitError("cannot open '" + ss_file + "'");
      CnfFormula f = parse_dimacs(in);
      auto res = solve(f);
      if (!res) {
        std::cout << "s UNKNOWN\n";
        return kExitInconclusive;
      }
      if (!res->satisfiable) {
        std::cout << "s UNSATISFIABLE\n";
        return 20;
      }
      std::cout << "s SATISFIABLE\nv";
      for (int var = 1; var <= f.num_vars; ++var)
        std::cout << ' ' << (res->assignment[static_cast<size_t>(var) - 1] ? var : -var);
      std::cout << " 0\n";
      return 10;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInconclusive;
  }
  return kExitInconclusive;
}
