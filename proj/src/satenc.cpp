#include "revcheck/satenc.hpp"

#include <array>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "revcheck/check_util.hpp"
#include "revcheck/solver.hpp"

namespace revcheck {

EncodeState EncodeState::for_width(uint32_t n) {
  EncodeState st;
  st.line_var.resize(n);
  for (uint32_t i = 0; i < n; ++i) st.line_var[i] = static_cast<int>(i) + 1;
  st.next_var = static_cast<int>(n) + 1;
  return st;
}

std::vector<std::vector<int>> encode_gate(const Gate& g, EncodeState& st) {
  if (g.kind != GateKind::Mct) throw CircuitError("encode_gate expects an Mct gate");
  const int xt = st.line_var[g.target()];
  const int y = st.next_var++;

  std::vector<std::vector<int>> clauses;
  clauses.reserve(2 * g.controls.size() + 2);
  // Some control is 0: the target passes through, y = xt.
  for (LineId c : g.controls) {
    const int xc = st.line_var[c];
    clauses.push_back({xc, -xt, y});
    clauses.push_back({xc, xt, -y});
  }
  // All controls are 1: the target flips, y = !xt.
  std::vector<int> base;
  for (LineId c : g.controls) base.push_back(-st.line_var[c]);
  std::vector<int> c1 = base, c2 = base;
  c1.push_back(xt);
  c1.push_back(y);
  c2.push_back(-xt);
  c2.push_back(-y);
  clauses.push_back(std::move(c1));
  clauses.push_back(std::move(c2));

  st.line_var[g.target()] = y;
  return clauses;
}

std::optional<CnfFormula> encode_miter(const Circuit& m) {
  Circuit lowered = lower_to_mct(m);
  const uint32_t n = lowered.width;

  CnfFormula f;
  EncodeState st = EncodeState::for_width(n);
  for (uint32_t i = 0; i < n; ++i) f.origins.push_back({VarOrigin::Kind::Input, i});

  for (size_t gi = 0; gi < lowered.gates.size(); ++gi) {
    auto clauses = encode_gate(lowered.gates[gi], st);
    f.origins.push_back({VarOrigin::Kind::GateTarget, static_cast<uint32_t>(gi)});
    for (auto& c : clauses) f.clauses.push_back(std::move(c));
  }

  // Mismatch variables for every line whose output variable moved.
  std::vector<int> big;
  for (uint32_t i = 0; i < n; ++i) {
    const int xi = static_cast<int>(i) + 1;
    const int yo = st.line_var[i];
    if (yo == xi) continue;  // line never targeted: output trivially equals input
    const int z = st.next_var++;
    f.origins.push_back({VarOrigin::Kind::Mismatch, i});
    f.clauses.push_back({z, xi, -yo});
    f.clauses.push_back({z, -xi, yo});
    f.clauses.push_back({-z, xi, yo});
    f.clauses.push_back({-z, -xi, -yo});
    big.push_back(z);
  }
  if (big.empty()) return std::nullopt;
  f.clauses.push_back(std::move(big));
  f.num_vars = st.next_var - 1;
  return f;
}

std::string export_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << "\n";
  for (const auto& c : f.clauses) {
    for (int lit : c) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

CnfFormula parse_dimacs(std::istream& in) {
  CnfFormula f;
  std::string tok;
  bool have_header = false;
  std::vector<int> cur;
  while (in >> tok) {
    if (tok == "c") {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (tok == "p") {
      std::string kind;
      size_t nc;
      in >> kind >> f.num_vars >> nc;
      have_header = true;
      continue;
    }
    int lit = std::stoi(tok);
    if (lit == 0) {
      f.clauses.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(lit);
    }
  }
  if (!have_header) throw CircuitError("missing DIMACS header");
  return f;
}

namespace {

bool assignment_satisfies(const CnfFormula& f, const std::vector<uint8_t>& a) {
  for (const auto& c : f.clauses) {
    bool sat = false;
    for (int lit : c) {
      int v = lit > 0 ? lit : -lit;
      bool val = a[static_cast<size_t>(v) - 1];
      if ((lit > 0) == val) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

}  // namespace

std::optional<SatResult> solve(const CnfFormula& f, const SolveLimits& limits) {
  CdclSolver solver(f.num_vars);
  for (const auto& c : f.clauses) {
    if (!solver.add_clause(c)) return SatResult{false, {}};
  }
  switch (solver.solve(limits)) {
    case SolveStatus::Unsat:
      return SatResult{false, {}};
    case SolveStatus::Sat: {
      SatResult r{true, solver.model()};
      r.assignment.resize(static_cast<size_t>(f.num_vars), 0);
      if (!assignment_satisfies(f, r.assignment))
        throw CircuitError("solver returned a bogus model");
      return r;
    }
    case SolveStatus::Unknown:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<SatResult> solve_external(const CnfFormula& f, const std::string& cmd_template) {
  char path[] = "/tmp/revcheck-cnf-XXXXXX";
  int fd = mkstemp(path);
  if (fd < 0) return std::nullopt;
  {
    std::string text = export_dimacs(f);
    FILE* fp = fdopen(fd, "w");
    if (!fp) {
      close(fd);
      std::remove(path);
      return std::nullopt;
    }
    fwrite(text.data(), 1, text.size(), fp);
    fclose(fp);
  }
  std::string cmd = cmd_template;
  size_t pos = cmd.find("{file}");
  if (pos == std::string::npos) {
    std::remove(path);
    return std::nullopt;
  }
  cmd.replace(pos, 6, path);
  cmd += " 2>/dev/null";

  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    std::remove(path);
    return std::nullopt;
  }
  std::string output;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, got);
  pclose(pipe);
  std::remove(path);

  std::istringstream lines(output);
  std::string line;
  std::optional<bool> sat;
  std::vector<uint8_t> assignment(static_cast<size_t>(f.num_vars), 0);
  while (std::getline(lines, line)) {
    if (line.rfind("s ", 0) == 0) {
      if (line.find("UNSATISFIABLE") != std::string::npos)
        sat = false;
      else if (line.find("SATISFIABLE") != std::string::npos)
        sat = true;
    } else if (line.rfind("v ", 0) == 0) {
      std::istringstream vs(line.substr(2));
      int lit;
      while (vs >> lit) {
        if (lit == 0) continue;
        size_t v = static_cast<size_t>(lit > 0 ? lit : -lit);
        if (v >= 1 && v <= static_cast<size_t>(f.num_vars)) assignment[v - 1] = lit > 0;
      }
    }
  }
  if (!sat) return std::nullopt;
  if (!*sat) return SatResult{false, {}};
  if (!assignment_satisfies(f, assignment)) return std::nullopt;
  return SatResult{true, std::move(assignment)};
}

Verdict check_sat(const Circuit& c1, const Circuit& c2, const CheckOptions& opts,
                  SatCheckInfo* info) {
  if (!is_conventional_circuit(c1) || !is_conventional_circuit(c2))
    throw CircuitError("check_sat requires conventional circuits");

  PreparedMiter pm = prepare_miter(c1, c2, opts);
  if (info) info->simplify = pm.simplify;

  std::optional<CnfFormula> f = encode_miter(pm.miter);
  if (!f) return Verdict::eq();
  if (info) {
    info->num_vars = f->num_vars;
    info->num_clauses = f->clauses.size();
  }

  std::optional<SatResult> res;
  if (!opts.external_solver_cmd.empty()) {
    if (info) info->used_external = true;
    res = solve_external(*f, opts.external_solver_cmd);
    if (!res) return Verdict::undecided("external solver failed or produced no parseable answer");
  } else {
    SolveLimits limits;
    limits.max_conflicts = opts.sat_conflict_budget;
    limits.deadline = opts.deadline();
    limits.cancel = opts.cancel;
    res = solve(*f, limits);
    if (!res) return Verdict::undecided("solver resource budget exhausted");
  }

  if (!res->satisfiable) return Verdict::eq();

  std::vector<uint8_t> miter_input(pm.miter.width);
  for (uint32_t i = 0; i < pm.miter.width; ++i) miter_input[i] = res->assignment[i];
  auto cex = decode_counterexample(c1, c2, pm, std::move(miter_input));
  if (cex) return Verdict::neq(std::move(*cex));
  return Verdict::neq_witness(0, "counterexample lost through non-conventional rotation");
}

}  // namespace revcheck
