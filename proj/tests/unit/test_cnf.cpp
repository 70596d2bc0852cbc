#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "reference.hpp"
#include "safari/circuits.hpp"
#include "safari/cnf.hpp"
#include "safari/error.hpp"
#include "safari/model_io.hpp"
#include "safari/sat.hpp"

using namespace safari;

namespace {

std::set<std::vector<int>> clause_set(const CnfFormula& f) {
  return {f.clauses.begin(), f.clauses.end()};
}

bool well_formed(const CnfFormula& f) {
  std::set<std::vector<int>> seen;
  for (const auto& c : f.clauses) {
    if (c.empty()) return false;
    for (std::size_t k = 1; k < c.size(); ++k)
      if (std::abs(c[k - 1]) >= std::abs(c[k])) return false;  // sorted, no repeated variable
    if (!seen.insert(c).second) return false;
  }
  return true;
}

// Random formula over `nv` variables with the given depth.
Formula random_formula(std::mt19937_64& rng, VarId nv, int depth) {
  if (depth == 0 || rng() % 5 == 0) {
    const Formula v = Formula::var(static_cast<VarId>(rng() % nv));
    return rng() & 1 ? v : Formula::negation(v);
  }
  switch (rng() % 5) {
    case 0:
      return Formula::conj({random_formula(rng, nv, depth - 1), random_formula(rng, nv, depth - 1)});
    case 1:
      return Formula::disj({random_formula(rng, nv, depth - 1), random_formula(rng, nv, depth - 1),
                            random_formula(rng, nv, depth - 1)});
    case 2:
      return Formula::implies(random_formula(rng, nv, depth - 1), random_formula(rng, nv, depth - 1));
    case 3:
      return Formula::iff(random_formula(rng, nv, depth - 1), random_formula(rng, nv, depth - 1));
    default:
      return Formula::negation(random_formula(rng, nv, depth - 1));
  }
}

}  // namespace

TEST_CASE("inverter implication converts to two clauses") {
  SymbolTable st;
  const Formula f = parse_formula("h => (o <=> !i)", st);
  const CnfFormula cnf = to_cnf(f, st);
  CHECK(cnf.num_vars == 3);
  CHECK(cnf.num_original == 3);
  CHECK(clause_set(cnf) == std::set<std::vector<int>>{{-1, -2, -3}, {-1, 2, 3}});
}

TEST_CASE("a single literal converts to a unit clause") {
  SymbolTable st;
  const CnfFormula cnf = to_cnf(parse_formula("x", st), st);
  CHECK(cnf.clauses == std::vector<std::vector<int>>{{1}});
}

TEST_CASE("DIMACS output is bit-exact") {
  SymbolTable st;
  std::ostringstream a;
  export_dimacs(to_cnf(parse_formula("x", st), st), a);
  CHECK(a.str() == "p cnf 1 1\n1 0\n");

  SymbolTable st2;
  st2.intern("a");
  st2.intern("b");
  std::ostringstream b;
  export_dimacs(to_cnf(parse_formula("!a | b", st2), st2), b);
  CHECK(b.str() == "p cnf 2 1\n-1 2 0\n");

  std::ostringstream named;
  export_dimacs(to_cnf(parse_formula("!a | b", st2), st2), named, true);
  CHECK(named.str() == "c 1 a\nc 2 b\np cnf 2 1\n-1 2 0\n");
}

TEST_CASE("DIMACS round-trips the subtractor CNF") {
  for (const auto v : {Variant::Weak, Variant::Strong, Variant::StuckAt1}) {
    const CnfFormula cnf = to_cnf(builtin_system("subtractor", v));
    for (const bool names : {false, true}) {
      std::stringstream s;
      export_dimacs(cnf, s, names);
      const CnfFormula back = parse_dimacs(s);
      CHECK(back.num_vars == cnf.num_vars);
      CHECK(back.clauses == cnf.clauses);
      if (names) {
        for (int id = 1; id <= cnf.num_original; ++id)
          CHECK(back.names[static_cast<std::size_t>(id)] == cnf.names[static_cast<std::size_t>(id)]);
      }
    }
  }
}

TEST_CASE("malformed DIMACS is rejected") {
  auto parse = [](const char* text) {
    std::istringstream in(text);
    return parse_dimacs(in);
  };
  CHECK_THROWS_AS(parse("1 0\n"), ParseError);
  CHECK_THROWS_AS(parse("p cnf 1 2\n1 0\n"), ParseError);
  CHECK_THROWS_AS(parse("p cnf 1 1\n2 0\n"), ParseError);
  CHECK_THROWS_AS(parse("p cnf 1 1\n1\n"), ParseError);
  CHECK_THROWS_AS(parse("p cnf 1 1\n0\n"), ParseError);
  CHECK(parse("c hello\np cnf 2 1\n-1 2 0\n").clauses.size() == 1);
}

TEST_CASE("CNF clauses are normalized") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    SymbolTable st;
    for (int v = 0; v < 12; ++v) st.intern("v" + std::to_string(v));
    const CnfFormula cnf = to_cnf(random_formula(rng, 12, 5), st);
    CHECK(well_formed(cnf));
  }
  for (const auto v : {Variant::Weak, Variant::Strong, Variant::StuckAt0, Variant::StuckAt1})
    CHECK(well_formed(to_cnf(builtin_system("subtractor", v))));
}

TEST_CASE("CNF is equisatisfiable under every assignment of the original variables") {
  std::mt19937_64 rng(17);
  // Random formulas: some large enough to need auxiliary variables.
  for (int t = 0; t < 60; ++t) {
    const VarId nv = 10;
    SymbolTable st;
    for (VarId v = 0; v < nv; ++v) st.intern("v" + std::to_string(v));
    const Formula f = Formula::conj({random_formula(rng, nv, 6), random_formula(rng, nv, 4)});
    const CnfFormula cnf = to_cnf(f, st);
    Solver solver(cnf);
    for (int k = 0; k < 40; ++k) {
      std::vector<std::uint8_t> values(nv);
      std::vector<int> assumptions;
      for (VarId v = 0; v < nv; ++v) {
        values[v] = rng() & 1;
        assumptions.push_back(values[v] ? cnf.var_of(v) : -cnf.var_of(v));
      }
      CHECK(f.evaluate(values) == solver.solve(assumptions).has_value());
    }
  }
  // Desk-scale models: 1000 random full assignments.
  const DiagnosticSystem systems[] = {builtin_system("subtractor", Variant::Weak),
                                      builtin_system("subtractor", Variant::Strong),
                                      builtin_system("subtractor", Variant::StuckAt1),
                                      builtin_system("two_inverters_series")};
  for (const auto& ds : systems) {
    const CnfFormula cnf = to_cnf(ds);
    Solver solver(cnf);
    int agree = 0;
    for (int k = 0; k < 1000; ++k) {
      std::vector<std::uint8_t> values(ds.num_vars());
      std::vector<int> assumptions;
      for (VarId v = 0; v < ds.num_vars(); ++v) {
        values[v] = rng() & 1;
        assumptions.push_back(values[v] ? cnf.var_of(v) : -cnf.var_of(v));
      }
      agree += ds.sd().evaluate(values) == solver.solve(assumptions).has_value();
    }
    CHECK(agree == 1000);
  }
}

TEST_CASE("large conjuncts get definitional variables, small ones do not") {
  SymbolTable st;
  const Formula small = parse_formula("a => (b <=> c & d)", st);
  CHECK(to_cnf(small, st).num_vars == to_cnf(small, st).num_original);
  const Formula wide = parse_formula("(a1 <=> a2) | (a3 <=> a4) | (a5 <=> a6) | (a7 <=> a8) | (a9 <=> a10)", st);
  const CnfFormula cnf = to_cnf(wide, st);
  CHECK(cnf.num_vars > cnf.num_original);
  for (int v = cnf.num_original + 1; v <= cnf.num_vars; ++v) CHECK(cnf.is_aux(v));
}

TEST_CASE("unsatisfiable conjunct keeps every clause non-empty") {
  SymbolTable st;
  const CnfFormula cnf = to_cnf(parse_formula("a & false", st), st);
  CHECK(well_formed(cnf));
  Solver solver(cnf);
  CHECK_FALSE(solver.solve({}).has_value());
}

TEST_CASE("subtractor CNF yields the same diagnoses as the formula") {
  const auto ds = builtin_system("subtractor");
  const auto alpha = builtin_observation(ds, "alpha1");
  const auto table = ref::diagnosis_table(ds, alpha);
  const CnfFormula cnf = to_cnf(ds);
  Solver solver(cnf);
  std::size_t count = 0;
  for (std::uint64_t m = 0; m < 128; ++m) {
    auto lits = encode(cnf, alpha);
    for (const int l : encode(cnf, ds, ref::from_mask(7, m))) lits.push_back(l);
    const bool sat = solver.solve(lits).has_value();
    CHECK(sat == (table[m] != 0));
    count += sat;
  }
  CHECK(count == 96);
}

TEST_CASE("clause count grows linearly with circuit size") {
  std::vector<double> ratio;
  for (const std::size_t gates : {10u, 100u, 1000u}) {
    // Inverter/and chain: wire k feeds gate k + 1.
    std::string text = "INPUT(w0)\nINPUT(e)\n";
    for (std::size_t g = 1; g <= gates; ++g)
      text += "w" + std::to_string(g) + " = " + (g % 2 ? "NOT(w" + std::to_string(g - 1) + ")"
                                                         : "AND(w" + std::to_string(g - 1) + ", e)") + "\n";
    text += "OUTPUT(w" + std::to_string(gates) + ")\n";
    const CnfFormula cnf = to_cnf(compile(parse_netlist(text), FaultMode::Weak));
    ratio.push_back(static_cast<double>(cnf.clauses.size()) / static_cast<double>(gates));
  }
  CHECK(ratio[2] == doctest::Approx(ratio[1]).epsilon(0.02));
  CHECK(ratio[1] == doctest::Approx(ratio[0]).epsilon(0.1));
  for (const std::size_t gates : {10u, 100u, 1000u}) {
    const CnfFormula cnf = to_cnf(compile(random_circuit(gates, 8, 1), FaultMode::StuckAt1));
    CHECK(cnf.clauses.size() <= 12 * gates);
  }
}
