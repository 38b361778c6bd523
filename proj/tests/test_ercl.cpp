#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "dipsat/solver.hpp"
#include "dipsat/tvd.hpp"
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

// The conflict graph of the thirteen-clause instance, first UIP x5.
TvdProblem thirteen_clause_graph() {
  Solver s(quiet());
  s.add_formula(thirteen_clause_formula());
  ClauseRef confl = kNoRef;
  for (Lit l : thirteen_clause_script()) {
    s.assume_decision(l);
    confl = s.propagate();
  }
  REQUIRE(confl != kNoRef);
  TvdProblem g;
  s.analyze_1uip(confl, &g);
  return g;
}

std::pair<int, int> dimacs_pair(const TvdProblem& g, NodePair p) {
  return {g.nodes[p.first].to_dimacs(), g.nodes[p.second].to_dimacs()};
}

// True if unit propagation refutes `base` plus the negation of `clause`.
bool up_implied(const CnfFormula& base, const std::vector<Lit>& clause) {
  CnfFormula f = base;
  for (Lit l : clause) {
    f.num_vars = std::max(f.num_vars, l.var().id + 1);
    f.add({(~l).to_dimacs()});
  }
  Solver s(quiet());
  if (!s.add_formula(f)) return true;
  return s.propagate() != kNoRef;
}

void add_definition(CnfFormula& f, int z, int l1, int l2) {
  f.num_vars = std::max<uint32_t>(f.num_vars, static_cast<uint32_t>(z));
  f.add({-z, l1});
  f.add({-z, l2});
  f.add({z, -l1, -l2});
}

struct Row {
  std::pair<int, int> dip;
  std::vector<int> post;  // without the leading not z
  std::vector<int> pre;   // without the trailing z
};

}  // namespace

TEST_CASE("parsing choice and filter names") {
  CHECK(parse_dip_choice("middle") == DipChoice::Middle);
  CHECK(parse_dip_choice("heuristic") == DipChoice::Heuristic);
  CHECK_FALSE(parse_dip_choice("nearest").has_value());
  CHECK(parse_dip_filter("glue") == DipFilter::Glue);
  CHECK_FALSE(parse_dip_filter("lbd").has_value());
  CHECK(std::string(to_string(DipChoice::Closest)) == "closest");
  CHECK(std::string(to_string(DipFilter::Act)) == "act");
}

TEST_CASE("pre and post clauses for every pair of the thirteen-clause graph") {
  TvdProblem g = thirteen_clause_graph();
  Dag d = g.dag();
  auto paths = find_two_disjoint_paths(d);
  REQUIRE(paths);
  TvdResult r = find_all_tvds(d, *paths);
  auto pairs = enumerate_pairs(r);
  REQUIRE(pairs.size() == 5);

  const int z = 21;
  const std::vector<int> pre_full{-X(5), Y(1), -Y(3), -Y(4), -Y(5), Y(6)};
  const std::vector<Row> rows = {
      {{-X(12), X(13)}, {}, pre_full},
      {{X(11), X(13)}, {}, pre_full},
      {{-X(10), X(11)}, {}, pre_full},
      {{-X(9), X(11)}, {-Y(4)}, pre_full},
      {{X(8), -X(9)}, {-Y(4), -Y(5), Y(6)}, {-X(5), Y(1), -Y(3), -Y(4)}},
  };
  CnfFormula base = thirteen_clause_formula();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& row = rows[i];
    INFO("row " << i);
    auto [u, v] = pairs[i];
    auto got = dimacs_pair(g, pairs[i]);
    CHECK(sorted_ints({got.first, got.second}) == sorted_ints({row.dip.first, row.dip.second}));

    DipAnalysis a = analyze_dip(g, u, v);
    a.z = Var(z - 1);
    std::vector<int> post{-z};
    post.insert(post.end(), row.post.begin(), row.post.end());
    std::vector<int> pre = row.pre;
    pre.push_back(z);
    CHECK(sorted_dimacs(build_post_dip_clause(a)) == sorted_ints(post));
    CHECK(sorted_dimacs(build_pre_dip_clause(a)) == sorted_ints(pre));
    CHECK(build_pre_dip_clause(a).front() == Lit::from_dimacs(-X(5)));
    CHECK(build_post_dip_clause(a).front() == Lit::from_dimacs(-z));
    // y4 and y6 are at level 2, y5 at level 4.
    CHECK(a.post_lbd == (row.post.empty() ? 1u : row.post.size() == 1 ? 2u : 3u));

    // Both clauses follow from the formula and the definition by unit propagation.
    CnfFormula with_def = base;
    add_definition(with_def, z, row.dip.first, row.dip.second);
    CHECK(up_implied(with_def, build_pre_dip_clause(a)));
    CHECK(up_implied(with_def, build_post_dip_clause(a)));
  }
}

TEST_CASE("levels of the C and D sets") {
  TvdProblem g = thirteen_clause_graph();
  NodeId n8 = g.find(Lit::from_dimacs(X(8))), n9 = g.find(Lit::from_dimacs(-X(9)));
  DipAnalysis a = analyze_dip(g, n8, n9);
  CHECK(a.level_c == 4);
  CHECK(a.level_d == 4);
  CHECK(a.post_lbd == 3);
  NodeId n12 = g.find(Lit::from_dimacs(-X(12))), n13 = g.find(Lit::from_dimacs(X(13)));
  DipAnalysis b = analyze_dip(g, n12, n13);
  CHECK(b.D.empty());
  CHECK(b.level_d == 0);
  CHECK(b.post_lbd == 1);
}

TEST_CASE("pair selection") {
  TvdProblem g = thirteen_clause_graph();
  Dag d = g.dag();
  TvdResult r = find_all_tvds(d, *find_two_disjoint_paths(d));
  std::vector<double> score(g.nodes.size(), 0.0);
  DipSelectionInput in{g.trail_pos, score, g.trail_pos[g.s()], g.trail_pos[g.t()]};
  std::mt19937_64 rng(1);

  auto pick = [&](DipChoice c) {
    auto p = select_dip(r, c, in, rng);
    REQUIRE(p);
    auto [x, y] = dimacs_pair(g, *p);
    return sorted_ints({x, y});
  };
  CHECK(pick(DipChoice::Closest) == sorted_ints({-X(12), X(13)}));
  // Trail positions: x5 11, -x9 14, x11 17, bot 20; 14 + 17 = 11 + 20.
  CHECK(pick(DipChoice::Middle) == sorted_ints({-X(9), X(11)}));
  // All activities equal: the heuristic breaks the tie toward the closest pair.
  CHECK(pick(DipChoice::Heuristic) == sorted_ints({-X(12), X(13)}));
  score[g.find(Lit::from_dimacs(X(8)))] = 5.0;
  CHECK(pick(DipChoice::Heuristic) == sorted_ints({X(8), -X(9)}));

  std::set<std::vector<int>> seen;
  for (int i = 0; i < 400; ++i) seen.insert(pick(DipChoice::Random));
  CHECK(seen.size() == 5);
}

TEST_CASE("selection always returns an enumerated pair") {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 300; ++round) {
    Dag d = random_two_connected_dag(rng, 30, 90);
    auto paths = find_two_disjoint_paths(d);
    REQUIRE(paths);
    TvdResult r = find_all_tvds(d, *paths);
    if (r.empty()) {
      std::vector<uint32_t> pos(d.size(), 0);
      std::vector<double> sc(d.size(), 0.0);
      CHECK_FALSE(select_dip(r, DipChoice::Middle, {pos, sc, 0, 0}, rng).has_value());
      continue;
    }
    auto order = d.topological_order();
    std::vector<uint32_t> pos(d.size());
    for (uint32_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    std::vector<double> sc(d.size());
    for (auto& x : sc) x = static_cast<double>(rng() % 7);
    DipSelectionInput in{pos, sc, pos[d.s()], pos[d.t()]};
    auto all = enumerate_pairs(r);
    auto key = [&](NodePair p) { return std::pair{std::min(p.first, p.second), std::max(p.first, p.second)}; };
    std::set<std::pair<NodeId, NodeId>> allowed;
    for (NodePair p : all) allowed.insert(key(p));

    // Reference values by brute force over the enumerated pairs.
    long best_sum = -1;
    double best_score = -1;
    long target = static_cast<long>(pos[d.s()]) + pos[d.t()];
    long best_gap = 1L << 40;
    for (NodePair p : all) {
      long sum = static_cast<long>(pos[p.first]) + pos[p.second];
      best_sum = std::max(best_sum, sum);
      best_score = std::max(best_score, sc[p.first] + sc[p.second]);
      best_gap = std::min(best_gap, std::labs(sum - target));
    }
    for (DipChoice c : {DipChoice::Closest, DipChoice::Middle, DipChoice::Random, DipChoice::Heuristic}) {
      auto p = select_dip(r, c, in, rng);
      REQUIRE(p);
      CHECK(allowed.count(key(*p)));
      long sum = static_cast<long>(pos[p->first]) + pos[p->second];
      if (c == DipChoice::Closest) CHECK(sum == best_sum);
      if (c == DipChoice::Middle) CHECK(std::labs(sum - target) == best_gap);
      if (c == DipChoice::Heuristic) CHECK(sc[p->first] + sc[p->second] == best_score);
    }
  }
}

TEST_CASE("activity window") {
  ActivityWindow w(3);
  CHECK_FALSE(w.accept_and_push(5.0));  // empty window
  CHECK_FALSE(w.accept_and_push(5.0));  // equal to the mean
  CHECK(w.accept_and_push(6.0));
  CHECK_FALSE(w.accept_and_push(1.0));
  CHECK(w.size() == 3);
  CHECK(w.accept_and_push(4.1));  // mean of 5, 6, 1 is 4
}

TEST_CASE("occurrence table") {
  DipOccurrenceTable t;
  Lit a = Lit::from_dimacs(3), b = Lit::from_dimacs(-7);
  for (int i = 1; i < 20; ++i) CHECK(t.bump(a, b) == static_cast<uint32_t>(i));
  CHECK(t.bump(b, a) == 20);
  CHECK(t.count(a, b) == 20);
  CHECK(t.count(a, ~b) == 0);
}

TEST_CASE("solver filters") {
  auto run = [](DipConfig d) {
    SolverConfig c;
    c.dip = d;
    c.decision_script = thirteen_clause_script();
    c.conflict_limit = 1;
    bool used = false;
    c.on_conflict = [&](const ConflictReport& r) { used = r.dip_used; };
    Solver s(c);
    s.add_formula(thirteen_clause_formula());
    s.solve();
    return used;
  };
  DipConfig d;
  CHECK_FALSE(run(d));  // first sighting, needs 20
  d.min_occ = 1;
  CHECK(run(d));
  d.filter = DipFilter::Act;
  CHECK_FALSE(run(d));  // empty window
  d.filter = DipFilter::Glue;
  d.choice = DipChoice::Closest;
  CHECK_FALSE(run(d));  // post clause is the unit not z
  d.choice = DipChoice::Middle;
  CHECK(run(d));  // not z | not y4
}

TEST_CASE("occurrence filter accepts on the twentieth sighting") {
  DipOccurrenceTable t;
  Lit a = Lit::from_dimacs(1), b = Lit::from_dimacs(2);
  uint32_t min_occ = 20;
  int first = 0;
  for (int i = 1; i <= 25 && !first; ++i)
    if (t.bump(a, b) >= min_occ) first = i;
  CHECK(first == 20);
}

TEST_CASE("extension store") {
  ExtDefStore st;
  CHECK(st.empty());
  Lit a = Lit::from_dimacs(1), b = Lit::from_dimacs(-2), c = Lit::from_dimacs(3);
  st.add({Var(9), a, b, {}});
  st.add({Var(10), b, c, {}});
  CHECK(st.find(b, a) == Var(9));
  CHECK(st.find(a, c) == std::nullopt);
  CHECK(st.participation(Var(1)) == 2);
  CHECK(st.participation(Var(0)) == 1);
  CHECK(st.participation(Var(9)) == 0);
  CHECK(st.check_consistency().empty());
  st.remove(Var(9));
  CHECK(st.find(a, b) == std::nullopt);
  CHECK(st.participation(Var(1)) == 1);
  CHECK(st.participation(Var(0)) == 0);
  CHECK(st.size() == 1);
  CHECK(st.check_consistency().empty());
}

TEST_CASE("extension variables are shared by pair") {
  CnfFormula f;
  f.num_vars = 4;
  f.add({1, 2, 3});
  Solver s(quiet());
  s.add_formula(f);
  auto [z1, fresh1] = s.get_or_create_extvar(Lit::from_dimacs(1), Lit::from_dimacs(-2));
  auto [z2, fresh2] = s.get_or_create_extvar(Lit::from_dimacs(-2), Lit::from_dimacs(1));
  auto [z3, fresh3] = s.get_or_create_extvar(Lit::from_dimacs(1), Lit::from_dimacs(2));
  CHECK(fresh1);
  CHECK_FALSE(fresh2);
  CHECK(fresh3);
  CHECK(z1 == z2);
  CHECK(z1 != z3);
  CHECK(z1.id == 4);
  CHECK(s.is_extension(z1));
  CHECK_FALSE(s.is_extension(Var(0)));
  CHECK(s.num_vars() == 6);
  const ExtDef* d = s.ext_store().def(z1);
  REQUIRE(d);
  std::set<std::vector<int>> defs;
  for (ClauseRef cr : d->def_clauses) defs.insert(sorted_dimacs(s.clause_literals(cr)));
  CHECK(defs == std::set<std::vector<int>>{{-5, 1}, {-5, -2}, {-1, 2, 5}});
  CHECK(s.audit().empty());
}

TEST_CASE("already defined extension variable") {
  CHECK(handle_predefined_z(Value::Undef, 0, 5) == PredefinedZ::Proceed);
  CHECK(handle_predefined_z(Value::True, 5, 5) == PredefinedZ::Proceed);
  CHECK(handle_predefined_z(Value::False, 5, 5) == PredefinedZ::Proceed);
  CHECK(handle_predefined_z(Value::False, 2, 5) == PredefinedZ::Fallback1UIP);
  CHECK_THROWS_AS(handle_predefined_z(Value::True, 2, 5), std::logic_error);
}

TEST_CASE("replacing pairs in a lemma") {
  ExtDefStore st;
  auto L = [](int d) { return Lit::from_dimacs(d); };
  st.add({Var(9), L(1), L(2), {}});   // z10 = x1 & x2
  st.add({Var(10), L(3), L(-4), {}});  // z11 = x3 & -x4
  ReplaceLimits lim;

  CHECK(sorted_dimacs(try_replace_in_lemma(lits({-1, -2, 5}), 2, st, lim)) == sorted_ints({-10, 5}));
  CHECK(sorted_dimacs(try_replace_in_lemma(lits({-1, -2, -3, 4}), 2, st, lim)) == sorted_ints({-10, -11}));
  CHECK(sorted_dimacs(try_replace_in_lemma(lits({-1, -2, -10}), 2, st, lim)) == sorted_ints({-10}));
  CHECK(sorted_dimacs(try_replace_in_lemma(lits({-1, -2, 10}), 2, st, lim)) == sorted_ints({-1, -2, 10}));
  CHECK(sorted_dimacs(try_replace_in_lemma(lits({-1, 2, 5}), 2, st, lim)) == sorted_ints({-1, 2, 5}));

  std::vector<Lit> longer = lits({-1, -2});
  for (int v = 20; longer.size() < 40; ++v) longer.push_back(Lit::from_dimacs(v));
  CHECK(try_replace_in_lemma(longer, 2, st, lim) == longer);
  CHECK(try_replace_in_lemma(lits({-1, -2, 5}), 7, st, lim) == lits({-1, -2, 5}));
  CHECK(try_replace_in_lemma(lits({-1, -2}), 1, ExtDefStore{}, lim) == lits({-1, -2}));

  // Nested: z12 = z10 & x5.
  st.add({Var(11), L(10), L(5), {}});
  CHECK(sorted_dimacs(try_replace_in_lemma(lits({-1, -2, -5, 6}), 2, st, lim)) == sorted_ints({-12, 6}));
}

TEST_CASE("deleting extension variables") {
  CnfFormula f;
  f.num_vars = 8;
  f.add({1, 2, 3});
  SolverConfig c;
  c.dip.min_occ = 1;
  SUBCASE("half of the unused variables, least active first") {
    Solver s(c);
    s.add_formula(f);
    std::vector<Var> zs;
    for (int i = 0; i < 4; ++i) zs.push_back(s.get_or_create_extvar(Lit::from_dimacs(i + 1), Lit::from_dimacs(i + 5)).first);
    s.set_activity(zs[0], 3.0);
    s.set_activity(zs[1], 1.0);
    s.set_activity(zs[2], 4.0);
    s.set_activity(zs[3], 2.0);
    s.delete_ext_vars();
    CHECK(s.is_deleted(zs[1]));
    CHECK(s.is_deleted(zs[3]));
    CHECK_FALSE(s.is_deleted(zs[0]));
    CHECK_FALSE(s.is_deleted(zs[2]));
    CHECK(s.ext_store().size() == 2);
    CHECK(s.stats().ext_vars_deleted == 2);
    CHECK(s.stats().deletion_rounds == 1);
    CHECK(s.audit().empty());
  }
  SUBCASE("variables used in other definitions stay") {
    Solver s(c);
    s.add_formula(f);
    Var z1 = s.get_or_create_extvar(Lit::from_dimacs(1), Lit::from_dimacs(2)).first;
    Var z2 = s.get_or_create_extvar(pos(z1), Lit::from_dimacs(3)).first;
    CHECK(s.ext_store().participation(z1) == 1);
    s.set_activity(z1, 0.0);
    s.set_activity(z2, 5.0);
    // One candidate (z2); floor(1 * 50 / 100) = 0 deleted.
    s.delete_ext_vars();
    CHECK(s.ext_store().size() == 2);
    SolverConfig all = c;
    all.dip.ext_delete_fraction = 100;
    Solver t(all);
    t.add_formula(f);
    Var y1 = t.get_or_create_extvar(Lit::from_dimacs(1), Lit::from_dimacs(2)).first;
    Var y2 = t.get_or_create_extvar(pos(y1), Lit::from_dimacs(3)).first;
    t.delete_ext_vars();
    CHECK(t.is_deleted(y2));
    CHECK_FALSE(t.is_deleted(y1));
    CHECK(t.audit().empty());
  }
  SUBCASE("nothing to delete") {
    Solver s(c);
    s.add_formula(f);
    s.delete_ext_vars();
    CHECK(s.stats().ext_vars_deleted == 0);
    CHECK(s.stats().deletion_rounds == 1);
  }
  SUBCASE("learnts over deleted variables go too") {
    SolverConfig all = c;
    all.dip.ext_delete_fraction = 100;
    Solver s(all);
    s.add_formula(f);
    Var z = s.get_or_create_extvar(Lit::from_dimacs(1), Lit::from_dimacs(2)).first;
    s.add_learnt(std::vector<Lit>{neg(z), Lit::from_dimacs(4), Lit::from_dimacs(5)}, 2);
    s.add_learnt(lits({4, 5, 6}), 2);
    s.delete_ext_vars();
    CHECK(s.is_deleted(z));
    CHECK(s.num_learnts() == 1);
    CHECK(s.audit().empty());
  }
  SUBCASE("only at level 0") {
    Solver s(c);
    s.add_formula(f);
    s.assume_decision(Lit::from_dimacs(1));
    CHECK_THROWS_AS(s.delete_ext_vars(), std::logic_error);
  }
}

TEST_CASE("disable monitor") {
  std::mt19937_64 rng(4);
  CnfFormula f = random_kcnf(rng, 60, 260);
  SolverConfig c;
  c.dip.disable_window = 50;
  c.conflict_limit = 200;
  Solver s(c);
  s.add_formula(f);
  SolveResult r = s.solve();
  if (r.stats.conflicts >= 50) {
    CHECK(r.stats.dip_disabled);
    CHECK(r.stats.disabled_at == 50);
    CHECK(r.stats.ext_decisions == 0);
    CHECK_FALSE(s.dip_active());
  }
  CHECK(r.stats.conflicts >= 50);

  SolverConfig off = c;
  off.dip = DipConfig::off();
  off.dip.disable_window = 50;
  SolveResult o = solve(f, off);
  CHECK_FALSE(o.stats.dip_disabled);
}

TEST_CASE("configuration validation") {
  DipConfig d;
  CHECK_NOTHROW(d.validate());
  d.disable_threshold = 0;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  DipConfig e;
  e.ext_delete_fraction = 101;
  CHECK_THROWS_AS(e.validate(), std::invalid_argument);
  DipConfig g;
  g.ext_delete_interval = 0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  CHECK(DipConfig::baseline().choice == DipChoice::Middle);
  CHECK(DipConfig::baseline().min_occ == 20);
  CHECK(DipConfig::baseline().clauses == DipClauses::TwoClause);
  CHECK_FALSE(DipConfig::off().enabled);
}
