#include <doctest.h>

#include <bit>
#include <set>

#include <json.hpp>

#include "reference.hpp"
#include "safari/circuits.hpp"
#include "safari/error.hpp"
#include "safari/model_io.hpp"
#include "safari/oracle.hpp"

using namespace safari;

TEST_CASE("census of the subtractor observations") {
  const auto weak = builtin_system("subtractor");
  const auto c1 = census(weak, builtin_observation(weak, "alpha1"));
  CHECK(c1.all_count == 96);

  const auto c2 = census(weak, builtin_observation(weak, "alpha2"));
  CHECK(c2.all_count == 69);
  CHECK(c2.minimal.size() == 8);
  CHECK(c2.non_minimal_count() == 61);
  CHECK(c2.min_cardinality.size() == 2);

  const auto c4 = census(weak, builtin_observation(weak, "alpha4"));
  CHECK(c4.minimal.size() == 4);
  CHECK(c4.min_cardinality.size() == 4);
  CHECK(c4.min_card == 2);

  const auto strong = builtin_system("subtractor", Variant::Strong);
  const auto c3 = census(strong, builtin_observation(strong, "alpha3"));
  CHECK(c3.minimal.size() == 2);
  CHECK(c3.min_cardinality.size() == 2);
}

TEST_CASE("census agrees with the reference table") {
  for (const auto v : {Variant::Weak, Variant::Strong, Variant::StuckAt0, Variant::StuckAt1})
    for (const char* name : {"alpha1", "alpha2", "alpha3", "alpha4"}) {
      const auto ds = builtin_system("subtractor", v);
      const auto alpha = builtin_observation(ds, name);
      const auto table = ref::diagnosis_table(ds, alpha);
      const auto c = census(ds, alpha);
      CHECK(c.is_diagnosis == table);
      std::uint64_t count = 0;
      for (const auto t : table) count += t;
      CHECK(c.all_count == count);
      std::set<std::uint64_t> minimal;
      for (const auto& w : c.minimal) minimal.insert(ref::mask_of(w));
      CHECK(minimal == ref::minimal_masks(table));
      if (count == 0) {
        CHECK_FALSE(c.min_card.has_value());
        continue;
      }
      std::size_t best = 64;
      for (const auto m : minimal) best = std::min<std::size_t>(best, std::popcount(m));
      CHECK(c.min_card == best);
      for (const auto& w : c.min_cardinality) CHECK(cardinality(w) == best);
      for (std::uint64_t m = 0; m < 128; ++m) {
        CHECK(c.diagnosis(ref::from_mask(7, m)) == (table[m] != 0));
        CHECK(c.minimal_diagnosis(ref::from_mask(7, m)) == (minimal.count(m) == 1));
      }
      CHECK(c.all().size() == count);
    }
}

TEST_CASE("census is independent of the worker count") {
  const auto ds = compile(random_circuit(18, 5, 2), FaultMode::StuckAt0);
  std::vector<Literal> lits;
  for (const VarId v : ds.inputs()) lits.push_back({v, true});
  for (const VarId v : ds.outputs()) lits.push_back({v, false});
  const Observation alpha(ds, lits);
  const auto a = census(ds, alpha, kCensusLimit, 1);
  const auto b = census(ds, alpha, kCensusLimit, 4);
  CHECK(a.is_diagnosis == b.is_diagnosis);
  CHECK(a.minimal == b.minimal);

  const auto small = compile(random_circuit(10, 4, 2), FaultMode::StuckAt1);
  lits.clear();
  for (const VarId v : small.inputs()) lits.push_back({v, false});
  for (const VarId v : small.outputs()) lits.push_back({v, true});
  const Observation beta(small, lits);
  CHECK(census(small, beta, kCensusLimit, 3).is_diagnosis == ref::diagnosis_table(small, beta));
}

TEST_CASE("census refuses systems above the limit") {
  const auto ds = compile(random_circuit(30, 4, 1), FaultMode::Weak);
  CHECK_THROWS_AS(census(ds, Observation()), LimitExceeded);
  const auto sub = builtin_system("subtractor");
  CHECK_THROWS_AS(census(sub, Observation(), 6), LimitExceeded);
}

TEST_CASE("two-inverter systems") {
  const auto sd_d = builtin_system("two_inverters_sd_d");
  const auto c = census(sd_d, builtin_observation(sd_d, "alpha_d"));
  REQUIRE(c.all_count == 1);
  CHECK(print_faults(sd_d, c.minimal[0]) == "{}");

  const auto series = builtin_system("two_inverters_series");
  const auto s = census(series, builtin_observation(series, "alpha_s"));
  CHECK(s.all_count == 2);
  CHECK(s.minimal.size() == 1);
  CHECK(s.min_card == 0);
}

TEST_CASE("census JSON") {
  const auto ds = builtin_system("subtractor");
  const auto c = census(ds, builtin_observation(ds, "alpha4"));
  const auto j = nlohmann::json::parse(census_json(ds, c, true));
  CHECK(j["comps"] == 7);
  CHECK(j["diagnoses"] == c.all_count);
  CHECK(j["minimal"] == 4);
  CHECK(j["non_minimal"] == c.all_count - 4);
  CHECK(j["min_cardinality"] == 4);
  CHECK(j["min_card"] == 2);
  REQUIRE(j["minimal_diagnoses"].size() == 4);
  CHECK(j["minimal_diagnoses"][0] == nlohmann::json::array({"h1", "h5"}));
  CHECK_FALSE(nlohmann::json::parse(census_json(ds, c)).contains("minimal_diagnoses"));
}

TEST_CASE("brute-force consistency agrees with the reference table") {
  const auto ds = builtin_system("subtractor", Variant::StuckAt1);
  for (const char* name : {"alpha1", "alpha3"}) {
    const auto alpha = builtin_observation(ds, name);
    const auto table = ref::diagnosis_table(ds, alpha);
    for (std::uint64_t m = 0; m < 128; ++m)
      CHECK(brute_force_consistent(ds, alpha, ref::from_mask(7, m)) == (table[m] != 0));
  }
  CHECK_THROWS_AS(brute_force_consistent(ds, Observation(), HealthAssignment(7), 3), LimitExceeded);
}
