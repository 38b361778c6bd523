#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "dipsat/dag.hpp"
#include "dipsat/solver.hpp"
#include "instances.hpp"
#include "oracles.hpp"

using namespace dipsat;
using namespace dipsat::testing;

namespace {

SolverConfig quiet() {
  SolverConfig c;
  c.dip = DipConfig::off();
  return c;
}

// Runs the decisions in order; returns the conflict of the last one.
ClauseRef drive(Solver& s, const std::vector<Lit>& script) {
  for (std::size_t i = 0; i < script.size(); ++i) {
    s.assume_decision(script[i]);
    ClauseRef c = s.propagate();
    if (c != kNoRef) {
      REQUIRE(i + 1 == script.size());
      return c;
    }
  }
  FAIL("no conflict");
  return kNoRef;
}

std::string name_of(Lit l) {
  if (l == kNoLit) return "bot";
  int d = l.to_dimacs();
  std::string base = std::abs(d) <= 13 ? "x" + std::to_string(std::abs(d)) : "y" + std::to_string(std::abs(d) - 13);
  return d < 0 ? "-" + base : base;
}

std::set<std::pair<std::string, std::string>> named_edges(const TvdProblem& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [u, v] : g.edges) out.emplace(name_of(g.nodes[u]), name_of(g.nodes[v]));
  return out;
}

std::set<std::pair<std::string, std::string>> named_edges(const NamedDag& nd) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [u, v] : nd.dag.edges()) out.emplace(nd.names[u], nd.names[v]);
  return out;
}

// Resolves the conflict clause with the reasons of the graph nodes, last
// assigned first, as long as the node is still in the resolvent.
std::set<int> replay_resolution(const ConflictReport& r) {
  std::set<int> c;
  for (Lit l : r.conflict_clause) c.insert(l.to_dimacs());
  for (NodeId i = r.graph.t(); i-- > 1;) {
    Lit n = r.graph.nodes[i];
    if (!c.count(-n.to_dimacs())) continue;
    c.erase(-n.to_dimacs());
    for (Lit q : r.node_reasons[i])
      if (q != n) c.insert(q.to_dimacs());
  }
  return c;
}

}  // namespace

TEST_CASE("first UIP of the thirteen-clause conflict") {
  Solver s(quiet());
  s.add_formula(thirteen_clause_formula());
  ClauseRef confl = drive(s, thirteen_clause_script());
  LearnedClause lc = s.analyze_1uip(confl);
  CHECK(lc.asserting_literal == Lit::from_dimacs(-X(5)));
  CHECK(lc.literals[0] == lc.asserting_literal);
  CHECK(sorted_dimacs(lc.literals) == sorted_ints({Y(1), -Y(3), -Y(4), -Y(5), Y(6), -X(5)}));
  CHECK(lc.lbd == 3);
  CHECK(lc.backjump_level == 4);
  CHECK(s.level(lc.literals[1].var()) == 4);
}

TEST_CASE("graph of the thirteen-clause conflict") {
  Solver s(quiet());
  s.add_formula(thirteen_clause_formula());
  ClauseRef confl = drive(s, thirteen_clause_script());
  TvdProblem g;
  s.analyze_1uip(confl, &g);
  REQUIRE(g.nodes.size() == 10);
  CHECK(g.nodes[0] == Lit::from_dimacs(X(5)));
  CHECK(g.nodes[g.t()] == kNoLit);
  CHECK(g.level == 5);
  NamedDag expected = parse_edge_list_string(read_fixture("fig1_segment.edges"));
  CHECK(named_edges(g) == named_edges(expected));

  NodeId n9 = g.find(Lit::from_dimacs(-X(9)));
  std::vector<int> side9;
  for (const SideInput& si : g.side_inputs[n9]) side9.push_back(si.lit.to_dimacs());
  CHECK(sorted_ints(side9) == sorted_ints({Y(3), Y(4)}));
  for (const SideInput& si : g.side_inputs[n9]) CHECK(si.level == 2);
  CHECK_THROWS_AS(g.find(Lit::from_dimacs(X(1))), std::out_of_range);
}

TEST_CASE("diamond conflict learns the negated decision") {
  Solver s(quiet());
  s.add_formula(diamond_formula());
  ClauseRef confl = drive(s, lits({1}));
  TvdProblem g;
  LearnedClause lc = s.analyze_1uip(confl, &g);
  CHECK(sorted_dimacs(lc.literals) == std::vector<int>{-1});
  CHECK(lc.backjump_level == 0);
  CHECK(lc.lbd == 1);
  CHECK(g.nodes.size() == 8);
  CHECK(g.edges.size() == 10);
  for (const auto& si : g.side_inputs) CHECK(si.empty());
}

TEST_CASE("decision that falsifies a clause directly") {
  CnfFormula f;
  f.add({-1, -2});
  f.num_vars = 3;
  Solver s(quiet());
  s.add_formula(f);
  s.assume_decision(Lit::from_dimacs(2));
  REQUIRE(s.propagate() == kNoRef);
  REQUIRE(s.value(Lit::from_dimacs(-1)) == Value::True);
  s.backtrack(0);
  s.assume_decision(Lit::from_dimacs(3));
  REQUIRE(s.propagate() == kNoRef);
  s.assume_decision(Lit::from_dimacs(2));
  s.assume_decision(Lit::from_dimacs(1));
  // Not propagated yet: the clause is falsified by the second decision.
  ClauseRef confl = s.propagate();
  REQUIRE(confl != kNoRef);
  TvdProblem g;
  LearnedClause lc = s.analyze_1uip(confl, &g);
  CHECK(sorted_dimacs(lc.literals) == sorted_ints({-1, -2}));
  CHECK(lc.backjump_level == 2);
  CHECK(g.nodes.size() == 2);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0] == Edge{0, 1});
  REQUIRE(g.side_inputs[1].size() == 1);
  CHECK(g.side_inputs[1][0].lit == Lit::from_dimacs(2));
}

TEST_CASE("unit lemma backjumps to level 0") {
  CnfFormula f;
  f.add({-1, 2});
  f.add({-1, -2});
  Solver s(quiet());
  s.add_formula(f);
  ClauseRef confl = drive(s, lits({1}));
  LearnedClause lc = s.analyze_1uip(confl);
  CHECK(sorted_dimacs(lc.literals) == std::vector<int>{-1});
  CHECK(lc.backjump_level == 0);
}

TEST_CASE("literal block distance counts distinct levels") {
  Solver s(quiet());
  s.add_formula(thirteen_clause_formula());
  drive(s, thirteen_clause_script());
  CHECK(s.compute_lbd(lits({Y(3), Y(4)})) == 1);
  CHECK(s.compute_lbd(lits({Y(3), Y(5), X(1)})) == 3);
  CHECK(s.compute_lbd(lits({-Y(2), Y(3), kFree, -Y(1), X(1)})) == 5);
}

TEST_CASE("conflict graphs and lemmas on random formulas") {
  std::mt19937_64 rng(23);
  uint64_t graphs = 0;
  for (int round = 0; round < 60; ++round) {
    CnfFormula f = random_kcnf(rng, 30, 128);
    SolverConfig c;
    Solver* sp = nullptr;
    c.dip.min_occ = 1u << 30;  // analyze every conflict, never learn a DIP
    c.on_conflict = [&](const ConflictReport& r) {
      const TvdProblem& g = r.graph;
      REQUIRE(!g.empty());
      ++graphs;
      Dag d = g.dag();
      CHECK_NOTHROW(d.topological_order());
      for (auto [u, v] : g.edges) CHECK(g.trail_pos[u] < g.trail_pos[v]);
      CHECK(std::is_sorted(g.trail_pos.begin(), g.trail_pos.end()));

      // Every node lies on a path from the first UIP to the conflict.
      std::vector<bool> none(g.nodes.size(), false);
      std::vector<bool> fwd = reach_without(d, none);
      for (bool b : fwd) CHECK(b);
      // The first UIP dominates the conflict.
      CHECK(g.nodes[0] == ~r.uip.asserting_literal);
      for (NodeId v = 1; v < g.t(); ++v) {
        std::vector<bool> rm(g.nodes.size(), false);
        rm[v] = true;
        CHECK(reach_without(d, rm)[g.t()]);
      }

      // Lemma = negated UIP plus the negated side inputs of the other nodes.
      std::set<int> from_inputs{r.uip.asserting_literal.to_dimacs()};
      for (NodeId v = 1; v < g.nodes.size(); ++v)
        for (const SideInput& si : g.side_inputs[v]) {
          CHECK(si.level < g.level);
          CHECK(si.level > 0);
          from_inputs.insert((~si.lit).to_dimacs());
        }
      std::set<int> lemma;
      for (Lit l : r.uip.literals) lemma.insert(l.to_dimacs());
      CHECK(lemma == from_inputs);
      // The raw resolvent differs only by literals false at level 0.
      std::set<int> resolvent = replay_resolution(r);
      for (int l : lemma) CHECK(resolvent.count(l));
      for (int l : resolvent) {
        if (lemma.count(l)) continue;
        Lit x = Lit::from_dimacs(l);
        CHECK(sp->value(x) == Value::False);
        CHECK(sp->level(x.var()) == 0);
      }

      // Asserting: only the first literal is at the conflict level.
      CHECK(r.uip.backjump_level < r.level);
      std::set<uint32_t> levels;
      for (NodeId v = 1; v < g.nodes.size(); ++v)
        for (const SideInput& si : g.side_inputs[v]) levels.insert(si.level);
      CHECK(r.uip.lbd == levels.size() + 1);
      if (levels.empty()) CHECK(r.uip.backjump_level == 0);
      else CHECK(r.uip.backjump_level == *levels.rbegin());
    };
    Solver s(c);
    sp = &s;
    s.add_formula(f);
    s.solve();
  }
  CHECK(graphs > 500);
}
