#include <doctest.h>

#include <random>

#include "safari/circuits.hpp"
#include "safari/error.hpp"
#include "safari/model.hpp"
#include "safari/model_io.hpp"

using namespace safari;

namespace {

HealthAssignment faults(std::size_t n, std::initializer_list<std::size_t> f) {
  const std::vector<std::size_t> v(f);
  return HealthAssignment::from_faults(n, v);
}

}  // namespace

TEST_CASE("cardinality counts negative literals") {
  const auto ds = builtin_system("subtractor");
  // and-gates h4 and h7 broken
  CHECK(cardinality(parse_health(ds, "h1 h2 h3 !h4 h5 h6 !h7")) == 2);
  CHECK(cardinality(HealthAssignment(7, true)) == 0);
  CHECK(cardinality(HealthAssignment(7, false)) == 7);

  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    HealthAssignment w(7);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < 7; ++i) {
      w.set_healthy(i, rng() & 1);
      pos += w.healthy(i);
    }
    CHECK(cardinality(w) + pos == 7);
  }
}

TEST_CASE("subsumes compares fault sets") {
  CHECK(subsumes(faults(7, {0, 4}), faults(7, {0, 1, 4})));
  CHECK_FALSE(subsumes(faults(7, {0, 1, 4}), faults(7, {0, 4})));
  CHECK(subsumes(faults(7, {2}), faults(7, {2})));
  CHECK_FALSE(subsumes(faults(7, {2}), faults(7, {3})));
  CHECK_THROWS_AS(subsumes(faults(7, {2}), faults(6, {2})), std::invalid_argument);
}

TEST_CASE("subsumes is a partial order") {
  std::mt19937_64 rng(11);
  auto random_w = [&] {
    HealthAssignment w(6);
    for (std::size_t i = 0; i < 6; ++i) w.set_healthy(i, rng() % 3 != 0);
    return w;
  };
  for (int t = 0; t < 300; ++t) {
    const auto a = random_w(), b = random_w(), c = random_w();
    CHECK(subsumes(a, a));
    if (subsumes(a, b) && subsumes(b, a)) CHECK(a == b);
    if (subsumes(a, b) && subsumes(b, c)) CHECK(subsumes(a, c));
  }
}

TEST_CASE("classify recognizes the subtractor variants") {
  CHECK(classify(builtin_system("subtractor", Variant::Weak)).kind == FaultModelKind::Weak);
  CHECK(classify(builtin_system("subtractor", Variant::Strong)).kind == FaultModelKind::Strong);
  const auto sa1 = classify(builtin_system("subtractor", Variant::StuckAt1));
  REQUIRE(sa1.kind == FaultModelKind::StuckAt);
  for (const auto& l : sa1.stuck_at) {
    REQUIRE(l.has_value());
    CHECK(l->positive);
  }
  const auto sa0 = classify(builtin_system("subtractor", Variant::StuckAt0));
  REQUIRE(sa0.kind == FaultModelKind::StuckAt);
  for (const auto& l : sa0.stuck_at) CHECK_FALSE(l->positive);
}

TEST_CASE("two-inverter system with direct input/output coupling is strong, not stuck-at") {
  CHECK(classify(builtin_system("two_inverters_sd_d")).kind == FaultModelKind::Strong);
}

TEST_CASE("a health variable inside a nominal formula is unclassified") {
  const auto ds = parse_model("comps h1 h2\nobs x\nsd h1 => (x <=> h2)\n");
  CHECK(classify(ds).kind == FaultModelKind::Unclassified);
}

TEST_CASE("formula printing round-trips") {
  const char* texts[] = {
      "a & b | c",          "a => b => c",         "(a => b) => c",   "a <=> b <=> c",
      "!(a & b) | !c",      "h1 => (i <=> !(y <=> p))", "true & !false", "a & (b | c) & d",
      "(a <=> b) => c | d",
  };
  for (const char* t : texts) {
    SymbolTable st;
    const Formula f = parse_formula(t, st);
    const std::string printed = print_formula(f, st);
    SymbolTable st2;
    const Formula g = parse_formula(printed, st2);
    CHECK_MESSAGE(print_formula(g, st2) == printed, t);
    CHECK(f == parse_formula(printed, st));
  }
}

TEST_CASE("implication is right-associative, iff left-associative") {
  SymbolTable st;
  const Formula f = parse_formula("a => b => c", st);
  REQUIRE(f.kind() == Formula::Kind::Implies);
  CHECK(f.children()[1].kind() == Formula::Kind::Implies);
  const Formula g = parse_formula("a <=> b <=> c", st);
  REQUIRE(g.kind() == Formula::Kind::Iff);
  CHECK(g.children()[0].kind() == Formula::Kind::Iff);
}

TEST_CASE("model text round-trips through the printer") {
  for (const auto v : {Variant::Weak, Variant::Strong, Variant::StuckAt0, Variant::StuckAt1}) {
    const auto ds = builtin_system("subtractor", v);
    const auto again = parse_model(print_model(ds));
    CHECK(again.sd() == ds.sd());
    CHECK(print_model(again) == print_model(ds));
    REQUIRE(again.num_vars() == ds.num_vars());
    for (VarId id = 0; id < ds.num_vars(); ++id) CHECK(again.symbols().name(id) == ds.symbols().name(id));
  }
}

TEST_CASE("subtractor system has seven components and five observables") {
  const auto ds = builtin_system("subtractor");
  CHECK(ds.num_comps() == 7);
  CHECK(ds.obs().size() == 5);
  CHECK(ds.symbols().name(ds.comps()[0]) == "h1");
  CHECK(ds.symbols().name(ds.comps()[6]) == "h7");
}

TEST_CASE("component order follows the comps line") {
  const auto ds = parse_model("sd b => x\nsd a => !x\ncomps b a\nobs x\n");
  CHECK(ds.symbols().name(ds.comps()[0]) == "b");
  CHECK(ds.symbols().name(ds.comps()[1]) == "a");
}

TEST_CASE("model parse errors carry line numbers") {
  try {
    parse_model("comps h1\nobs x\nsd h1 => (x <=>\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_model("comps h1\nobs x\nbogus line\n"), ParseError);
  CHECK_THROWS_AS(parse_model("obs x\nsd x\n"), ParseError);
}

TEST_CASE("structurally invalid models are rejected") {
  CHECK_THROWS_AS(parse_model("comps h1\nobs h1\nsd h1\n"), InvalidModel);
  CHECK_THROWS_AS(parse_model("comps h1\nobs x\nsd x & !x\n"), InvalidModel);
  CHECK_THROWS_AS(parse_model("comps h1 h1\nobs x\nsd h1 => x\n"), InvalidModel);
}

TEST_CASE("observations only assign observables, each once") {
  const auto ds = builtin_system("subtractor");
  CHECK(parse_observation(ds, "x !y p").size() == 3);
  CHECK(parse_observation(ds, "").empty());
  CHECK_THROWS_AS(parse_observation(ds, "x !x"), ParseError);
  CHECK_THROWS_AS(parse_observation(ds, "h1"), ParseError);
  CHECK_THROWS_AS(parse_observation(ds, "i"), ParseError);
  CHECK_THROWS_AS(parse_observation(ds, "nonexistent"), ParseError);
  const auto a = parse_observation(ds, "x !b");
  CHECK(print_observation(ds, a) == "x !b");
}

TEST_CASE("health text round-trips") {
  const auto ds = builtin_system("subtractor");
  const auto w = parse_health(ds, "!h1 h2 h3 h4 !h5 h6 h7");
  CHECK(w.faults() == std::vector<std::size_t>{0, 4});
  CHECK(print_faults(ds, w) == "{h1, h5}");
  CHECK(parse_health(ds, print_health(ds, w)) == w);
}

TEST_CASE("formula evaluation follows the connectives") {
  SymbolTable st;
  const Formula f = parse_formula("(a => b) <=> !c", st);
  for (int m = 0; m < 8; ++m) {
    const std::vector<std::uint8_t> v{static_cast<std::uint8_t>(m & 1), static_cast<std::uint8_t>(m >> 1 & 1),
                                      static_cast<std::uint8_t>(m >> 2 & 1)};
    const bool expected = ((!v[0]) || v[1]) == !v[2];
    CHECK(f.evaluate(v) == expected);
  }
  CHECK(f.variables() == std::vector<VarId>{0, 1, 2});
}
