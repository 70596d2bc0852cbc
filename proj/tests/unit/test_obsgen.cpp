#include <doctest.h>

#include <bit>
#include <set>
#include <sstream>

#include <json.hpp>

#include "reference.hpp"
#include "safari/circuits.hpp"
#include "safari/error.hpp"
#include "safari/model_io.hpp"
#include "safari/obsgen.hpp"

using namespace safari;

TEST_CASE("generated observations flip exactly one nominal output") {
  const auto ds = builtin_system("subtractor");
  const Circuit c = builtin_circuit("subtractor");
  const auto suite = make_alphas(ds, 10, 30, 5);
  REQUIRE_FALSE(suite.entries.empty());
  CHECK(suite.rounds == 30);
  CHECK(suite.tries == 10);
  for (const auto& e : suite.entries) {
    std::vector<bool> in;
    for (const VarId v : ds.inputs())
      for (const auto& l : e.alpha.literals())
        if (l.var == v) in.push_back(l.positive);
    REQUIRE(in.size() == 3);
    const auto nominal = simulate(c, in);
    int flipped = 0;
    for (std::size_t k = 0; k < 2; ++k)
      for (const auto& l : e.alpha.literals())
        if (l.var == ds.outputs()[k]) flipped += l.positive != nominal[k];
    CHECK(flipped == 1);
    CHECK(e.alpha.size() == 5);
  }
}

TEST_CASE("recorded cardinality is that of a minimal diagnosis, bounded below by MinCard") {
  const auto ds = builtin_system("subtractor", Variant::StuckAt0);
  const auto suite = make_alphas(ds, 8, 40, 11);
  for (const auto& e : suite.entries) {
    const auto table = ref::diagnosis_table(ds, e.alpha);
    const auto minimal = ref::minimal_masks(table);
    REQUIRE_FALSE(minimal.empty());
    std::size_t min_card = 64;
    bool seen = false;
    for (const auto m : minimal) {
      const auto c = static_cast<std::size_t>(std::popcount(m));
      min_card = std::min(min_card, c);
      seen = seen || c == e.cardinality;
    }
    CHECK(seen);
    CHECK(e.cardinality >= min_card);
  }
}

TEST_CASE("cardinalities grow within a round and observations are unique") {
  const auto ds = builtin_system("subtractor", Variant::Strong);
  const auto suite = make_alphas(ds, 6, 40, 3);
  std::set<std::string> texts;
  for (std::size_t k = 0; k < suite.entries.size(); ++k) {
    CHECK(texts.insert(print_observation(ds, suite.entries[k].alpha)).second);
    CHECK(suite.entries[k].cardinality >= 1);
    if (k > 0 && suite.entries[k].round == suite.entries[k - 1].round)
      CHECK(suite.entries[k].cardinality > suite.entries[k - 1].cardinality);
    if (k > 0) CHECK(suite.entries[k].round >= suite.entries[k - 1].round);
  }
}

TEST_CASE("suite depends on the seed only") {
  const auto ds = compile(load_netlist(SAFARI_DATA_DIR "/c17.bench"), FaultMode::Weak);
  const auto a = make_alphas(ds, 4, 12, 21, 1);
  const auto b = make_alphas(ds, 4, 12, 21, 4);
  CHECK(suite_jsonl(ds, a) == suite_jsonl(ds, b));
  CHECK_FALSE(a.entries.empty());
}

TEST_CASE("JSON lines carry inputs, outputs and the estimate") {
  const auto ds = builtin_system("subtractor");
  const auto suite = make_alphas(ds, 4, 5, 2);
  std::istringstream in(suite_jsonl(ds, suite));
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line); ++lines) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["inputs"].size() == 3);
    CHECK(j["outputs"].size() == 2);
    CHECK(j["inputs"].contains("x"));
    CHECK(j["outputs"].contains("b"));
    CHECK(j["estimated_cardinality"].get<std::size_t>() == suite.entries[lines].cardinality);
    CHECK(j["seed"].get<std::uint64_t>() == 2);
  }
  CHECK(lines == suite.entries.size());
}

TEST_CASE("systems without inputs and outputs are rejected") {
  const auto ds = parse_model("comps h\nobs x y\nsd h => (y <=> !x)\n");
  CHECK_THROWS_AS(make_alphas(ds, 2, 2, 1), InvalidModel);
  const auto sub = builtin_system("subtractor");
  CHECK_THROWS_AS(make_alphas(sub, 0, 2, 1), std::invalid_argument);
}
