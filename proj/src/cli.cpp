// Copyright 2026 The dipsat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dipsat/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "dipsat/formula.hpp"
#include "dipsat/gen.hpp"
#include "dipsat/proof.hpp"

namespace dipsat {

namespace {

struct SolveOptions {
  std::string input;
  std::string preset;
  std::string dip = "on";
  std::string choice = "middle";
  uint32_t min_occ = 20;
  int clauses = 2;
  std::string filter = "occ";
  uint64_t del_interval = 1000;
  uint32_t del_frac = 50;
  uint64_t disable_window = 100000;
  uint32_t disable_threshold = 3;
  uint64_t seed = 0;
  uint64_t conflict_limit = 0;
  double time_limit = 0;
  std::string proof;
  bool stats = false;
  std::string stats_json;
  bool no_model = false;
};

struct GenOptions {
  std::string output;
  uint32_t rows = 3, cols = 3, charge = 0;
  uint32_t n = 0, d = 4, k = 3, m = 2, clauses = 0;
  uint64_t seed = 0;
  bool even = false;
  bool random_charges = false;
};

void print_model(std::ostream& out, const std::vector<bool>& model) {
  std::string line = "v";
  for (uint32_t v = 0; v < model.size(); ++v) {
    std::string lit = " " + std::string(model[v] ? "" : "-") + std::to_string(v + 1);
    if (line.size() + lit.size() > 78) {
      out << line << '\n';
      line = "v";
    }
    line += lit;
  }
  out << line << " 0\n";
}

void print_stats(std::ostream& out, const SolverStats& s) {
  out << "c conflicts            " << s.conflicts << '\n'
      << "c decisions            " << s.decisions << '\n'
      << "c propagations         " << s.propagations << '\n'
      << "c restarts             " << s.restarts << '\n'
      << "c conflicts_with_dip   " << s.conflicts_with_dip << " / " << s.dip_analyzed_conflicts << '\n'
      << "c dip_learning         " << s.dip_learning_conflicts << '\n'
      << "c dips_introduced      " << s.dips_introduced << '\n'
      << "c ext_vars_live        " << s.ext_vars_live << '\n'
      << "c ext_vars_deleted     " << s.ext_vars_deleted << '\n'
      << "c ext_decisions        " << s.ext_decisions << '\n'
      << "c deletion_rounds      " << s.deletion_rounds << '\n'
      << "c dip_disabled         " << (s.dip_disabled ? "yes" : "no") << '\n'
      << "c dip_time_fraction    " << s.dip_time_fraction << '\n'
      << "c proof_adds           " << s.proof_adds << '\n'
      << "c seconds              " << s.solve_seconds << '\n';
}

SolverConfig make_config(const SolveOptions& o, const CLI::App& sub) {
  SolverConfig cfg;
  if (o.preset == "baseline") cfg.dip = DipConfig::baseline();
  DipConfig& d = cfg.dip;
  auto given = [&](const char* flag) { return sub.count(flag) > 0; };
  if (given("--dip")) d.enabled = o.dip == "on";
  if (given("--dip-choice")) d.choice = *parse_dip_choice(o.choice);
  if (given("--dip-min-occ")) d.min_occ = o.min_occ;
  if (given("--dip-clauses")) d.clauses = o.clauses == 1 ? DipClauses::OneClause : DipClauses::TwoClause;
  if (given("--dip-filter")) d.filter = *parse_dip_filter(o.filter);
  if (given("--ext-del-interval")) d.ext_delete_interval = o.del_interval;
  if (given("--ext-del-frac")) d.ext_delete_fraction = o.del_frac;
  if (given("--disable-window")) d.disable_window = o.disable_window;
  if (given("--disable-threshold")) d.disable_threshold = o.disable_threshold;
  d.seed = o.seed;
  cfg.conflict_limit = o.conflict_limit;
  cfg.time_limit = o.time_limit;
  cfg.validate();
  return cfg;
}

int cmd_solve(const SolveOptions& o, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  ParseReport report;
  CnfFormula f = read_dimacs_file(o.input, &report);
  for (const auto& w : report.warnings) err << "c warning: " << w << '\n';
  SolverConfig cfg = make_config(o, sub);

  std::ofstream proof_file;
  std::unique_ptr<ProofWriter> proof;
  if (!o.proof.empty()) {
    proof_file.open(o.proof);
    if (!proof_file) throw std::runtime_error("cannot open proof file " + o.proof);
    proof = std::make_unique<ProofWriter>(&proof_file, f.num_vars);
  } else {
    proof = std::make_unique<ProofWriter>(nullptr, f.num_vars);
  }
  SolveResult r = solve(f, cfg, proof.get());

  out << "s " << to_string(r.status) << '\n';
  if (r.status == Status::Sat && !o.no_model) print_model(out, r.model);
  if (o.stats) print_stats(out, r.stats);
  if (!o.stats_json.empty()) {
    std::string js = stats_json(r.stats, r.status);
    if (o.stats_json == "-") {
      out << js << '\n';
    } else {
      std::ofstream js_out(o.stats_json);
      if (!js_out) throw std::runtime_error("cannot open " + o.stats_json);
      js_out << js << '\n';
    }
  }
  switch (r.status) {
    case Status::Sat: return 10;
    case Status::Unsat: return 20;
    default: return 0;
  }
}

void emit(const CnfFormula& f, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    write_dimacs(out, f);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open " + path);
  write_dimacs(file, f);
}

int cmd_check(const std::string& cnf, const std::string& drat, std::ostream& out) {
  CnfFormula f = read_dimacs_file(cnf);
  std::ifstream in(drat);
  if (!in) throw std::runtime_error("cannot open " + drat);
  std::stringstream buf;
  buf << in.rdbuf();
  CheckResult r = check_proof(f, buf.str(), true);
  if (r.accepted) {
    out << "s VERIFIED\n"
        << "c adds " << r.adds << " trimmed " << r.trimmed_adds << '\n';
    return 0;
  }
  out << "s NOT VERIFIED\n"
      << "c line " << r.line << ": " << r.error << '\n';
  return 1;
}

int cmd_self_check(std::ostream& out) {
  int failures = 0;
  auto run = [&](const std::string& name, const CnfFormula& f, const SolverConfig& cfg, std::optional<Status> expect) {
    std::ostringstream proof_text;
    ProofWriter pw(&proof_text, f.num_vars);
    SolveResult r = solve(f, cfg, &pw);
    bool ok = expect ? r.status == *expect : r.status != Status::Unknown;
    if (ok && r.status == Status::Unsat) ok = check_proof(f, proof_text.str()).accepted;
    if (ok && r.status == Status::Sat) {
      for (const Clause& c : f.clauses) {
        bool sat = false;
        for (Lit l : c) sat = sat || (r.model[l.var().id] != l.negative());
        ok = ok && sat;
      }
    }
    out << "c " << (ok ? "ok   " : "FAIL ") << name << '\n';
    failures += !ok;
  };
  SolverConfig eager;
  eager.dip.min_occ = 1;
  SolverConfig off;
  off.dip = DipConfig::off();
  for (uint32_t n = 3; n <= 5; ++n) {
    run("grid " + std::to_string(n) + "x" + std::to_string(n) + " dip", gen_tseitin_grid(n, n), eager, Status::Unsat);
    run("grid " + std::to_string(n) + "x" + std::to_string(n) + " off", gen_tseitin_grid(n, n), off, Status::Unsat);
  }
  run("regular 10x4 even", gen_tseitin_regular(10, 4, 1, false), eager, Status::Sat);
  run("kxor 12", gen_xorified_kxor(12, 12, 3, 2, 3), eager, std::nullopt);
  out << (failures == 0 ? "s SELF-CHECK PASSED\n" : "s SELF-CHECK FAILED\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

std::string stats_json(const SolverStats& s, Status status) {
  nlohmann::json j = {
      {"status", to_string(status)},
      {"conflicts", s.conflicts},
      {"decisions", s.decisions},
      {"propagations", s.propagations},
      {"restarts", s.restarts},
      {"reductions", s.reductions},
      {"dip_analyzed_conflicts", s.dip_analyzed_conflicts},
      {"conflicts_with_dip", s.conflicts_with_dip},
      {"dip_fraction", s.dip_fraction()},
      {"dip_learning_conflicts", s.dip_learning_conflicts},
      {"dips_introduced", s.dips_introduced},
      {"lemmas_replaced", s.lemmas_replaced},
      {"ext_vars_live", s.ext_vars_live},
      {"ext_vars_deleted", s.ext_vars_deleted},
      {"ext_decisions", s.ext_decisions},
      {"deletion_rounds", s.deletion_rounds},
      {"dip_disabled", s.dip_disabled},
      {"disabled_at", s.disabled_at},
      {"dip_time_fraction", s.dip_time_fraction},
      {"proof_adds", s.proof_adds},
      {"solve_seconds", s.solve_seconds},
  };
  return j.dump();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"CDCL SAT solver with dual implication point learning", "dipsat"};
  app.require_subcommand(1);

  SolveOptions so;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a DIMACS CNF file");
  solve_cmd->add_option("input", so.input, "DIMACS file")->required();
  solve_cmd->add_option("--preset", so.preset, "Configuration preset")->check(CLI::IsMember({"baseline"}));
  solve_cmd->add_option("--dip", so.dip, "DIP learning")->check(CLI::IsMember({"on", "off"}));
  solve_cmd->add_option("--dip-choice", so.choice, "DIP choice")
      ->check(CLI::IsMember({"closest", "middle", "random", "heuristic"}));
  solve_cmd->add_option("--dip-min-occ", so.min_occ, "Minimum sightings before a DIP is used")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--dip-clauses", so.clauses, "Learn 1 (post) or 2 (pre and post) clauses")
      ->check(CLI::IsMember({1, 2}));
  solve_cmd->add_option("--dip-filter", so.filter, "DIP filter")->check(CLI::IsMember({"occ", "glue", "act"}));
  solve_cmd->add_option("--ext-del-interval", so.del_interval, "Conflicts between extension deletions")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--ext-del-frac", so.del_frac, "Percent of extension variables deleted")
      ->check(CLI::Range(1, 100));
  solve_cmd->add_option("--disable-window", so.disable_window, "Conflicts before the disabling check")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--disable-threshold", so.disable_threshold, "Percent of extension decisions")
      ->check(CLI::Range(1, 100));
  solve_cmd->add_option("--seed", so.seed, "Random seed");
  solve_cmd->add_option("--conflict-limit", so.conflict_limit, "Stop after this many conflicts");
  solve_cmd->add_option("--time-limit", so.time_limit, "Stop after this many seconds");
  solve_cmd->add_option("--proof", so.proof, "Write a DRAT proof");
  solve_cmd->add_flag("--stats", so.stats, "Print statistics as comment lines");
  solve_cmd->add_option("--stats-json", so.stats_json, "Write statistics as JSON ('-' for stdout)");
  solve_cmd->add_flag("--no-model", so.no_model, "Omit the model lines");

  GenOptions go;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a benchmark formula");
  gen_cmd->alias("generate");
  gen_cmd->require_subcommand(1);
  gen_cmd->add_option("-o,--output", go.output, "Output file (default stdout)");
  auto* grid = gen_cmd->add_subcommand("tseitin-grid", "Tseitin formula on a grid");
  grid->add_option("--rows", go.rows)->check(CLI::Range(2u, 100000u));
  grid->add_option("--cols", go.cols)->check(CLI::Range(2u, 100000u));
  grid->add_option("--charge", go.charge, "Charged vertex, row-major");
  grid->add_option("-o,--output", go.output, "Output file (default stdout)");
  auto* reg = gen_cmd->add_subcommand("tseitin-regular", "Tseitin formula on a random regular graph");
  reg->add_option("--n", go.n)->required();
  reg->add_option("--d", go.d);
  reg->add_option("--seed", go.seed);
  reg->add_flag("--even", go.even, "Even total charge (satisfiable)");
  reg->add_flag("--random-charges", go.random_charges, "Random charges with the requested total parity");
  reg->add_option("-o,--output", go.output, "Output file (default stdout)");
  auto* kx = gen_cmd->add_subcommand("kxor", "Xorified random k-XOR formula");
  kx->add_option("--n", go.n)->required();
  kx->add_option("--clauses", go.clauses, "Number of constraints (default n)");
  kx->add_option("--k", go.k);
  kx->add_option("--xorify", go.m, "Fresh variables per original variable");
  kx->add_option("--seed", go.seed);
  kx->add_option("-o,--output", go.output, "Output file (default stdout)");

  std::string check_cnf, check_drat;
  auto* check_cmd = app.add_subcommand("check", "Check a DRAT proof");
  check_cmd->add_option("cnf", check_cnf)->required();
  check_cmd->add_option("proof", check_drat)->required();

  auto* self_cmd = app.add_subcommand("self-check", "Run built-in end-to-end checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve_cmd) return cmd_solve(so, *solve_cmd, out, err);
    if (*check_cmd) return cmd_check(check_cnf, check_drat, out);
    if (*self_cmd) return cmd_self_check(out);
    if (*gen_cmd) {
      CnfFormula f;
      if (*grid) {
        f = gen_tseitin_grid(go.rows, go.cols, go.charge);
      } else if (*reg) {
        f = gen_tseitin_regular(go.n, go.d, go.seed, !go.even, go.random_charges);
      } else {
        f = gen_xorified_kxor(go.n, go.clauses ? go.clauses : go.n, go.k, go.m, go.seed);
      }
      emit(f, go.output, out);
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace dipsat
