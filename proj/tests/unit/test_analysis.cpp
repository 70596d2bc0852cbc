#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "reference.hpp"
#include "safari/analysis.hpp"
#include "safari/error.hpp"

using namespace safari;

namespace {

// Survivor of an optimal climb over disjoint groups: shuffle all faulty
// components; each group dies at its first appearance; the last to die stays.
std::vector<double> permutation_survivors(const std::vector<std::uint64_t>& hist, std::size_t runs,
                                          std::uint64_t seed) {
  std::vector<std::size_t> owner_card;  // per component: cardinality of its group
  std::vector<std::size_t> owner;
  std::size_t group = 0;
  for (std::size_t c = 1; c < hist.size(); ++c)
    for (std::uint64_t g = 0; g < hist[c]; ++g, ++group)
      for (std::size_t k = 0; k < c; ++k) {
        owner.push_back(group);
        owner_card.push_back(c);
      }
  std::vector<std::size_t> perm(owner.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::vector<double> out(hist.size(), 0.0);
  for (std::size_t r = 0; r < runs; ++r) {
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<bool> dead(group, false);
    std::size_t last = 0;
    for (const auto i : perm)
      if (!dead[owner[i]]) {
        dead[owner[i]] = true;
        last = i;
      }
    out[owner_card[last]] += 1;
  }
  return out;
}

}  // namespace

TEST_CASE("step success probability") {
  CHECK(step_success_prob({10, 2, 1, 0}, 0) == doctest::Approx(0.8));
  CHECK(step_success_prob({10, 2, 2, 0}, 0) == doctest::Approx(1.0 - 1.0 / 45));
  CHECK(step_success_prob({10, 2, 2, 0}, 8) == doctest::Approx(0.0));
  // M larger than the remaining faulty components.
  CHECK(step_success_prob({10, 2, 50, 0}, 7) == doctest::Approx(1.0));
  CHECK(step_success_prob({10, 2, 1, 0.1}, 0) == doctest::Approx(0.7));
  CHECK(step_success_prob({10, 2, 1, 0.9}, 0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(step_success_prob({10, 2, 1, 0}, 9), std::invalid_argument);
  CHECK_THROWS_AS(step_success_prob({10, 2, 0, 0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(step_success_prob({10, 11, 1, 0}, 0), std::invalid_argument);
}

TEST_CASE("single fault with M = 1 stops uniformly") {
  const auto d = climb_pdf({50, 1, 1, 0});
  REQUIRE(d.mass.size() == 50);
  for (const double f : d.mass) CHECK(f == doctest::Approx(1.0 / 50));
  CHECK(d.total() == doctest::Approx(1.0));
}

TEST_CASE("climb pdf matches a direct simulation of the chain") {
  const ClimbModel models[] = {{20, 3, 1, 0}, {20, 3, 2, 0}, {30, 4, 4, 0}, {12, 1, 3, 0}, {15, 5, 8, 0}};
  for (const auto& m : models) {
    const auto d = climb_pdf(m);
    CHECK(d.total() == doctest::Approx(1.0));
    const std::size_t runs = 20000;
    const auto h = ref::simulate_climb_chain(m.n_comps, m.fault_card, m.retries, runs, 1234);
    REQUIRE(h.size() == d.mass.size());
    for (std::size_t k = 0; k < h.size(); ++k) CHECK(ref::within_sigma(static_cast<double>(h[k]), d.mass[k], runs, 4));
  }
}

TEST_CASE("more retries shift the stopping step right") {
  double prev = -1;
  for (const std::size_t M : {1u, 2u, 4u, 8u}) {
    const double mean = climb_pdf({100, 4, M, 0}).mean();
    CHECK(mean > prev);
    prev = mean;
  }
}

TEST_CASE("survival probability") {
  CHECK(survival_prob(7, 2) == doctest::Approx(1.0 / 21));
  CHECK(survival_prob(7, 0) == doctest::Approx(1.0));
  CHECK(survival_prob(5, 5) == doctest::Approx(1.0));
  CHECK(survival_prob_asymptotic(7, 2) == doctest::Approx(2.0 / 49));
  CHECK(survival_prob(10000, 3) / survival_prob_asymptotic(10000, 3) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("literal-weighted simulation: a single beats a double two to one") {
  const std::size_t runs = 30000;
  const auto d = safari_simulate(std::vector<std::uint64_t>{0, 1, 1}, runs, 7);
  CHECK(d.total() == doctest::Approx(runs));
  CHECK(ref::within_sigma(d.mass[1], 2.0 / 3, runs, 4));
}

TEST_CASE("literal-weighted simulation agrees with the permutation picture") {
  const std::vector<std::vector<std::uint64_t>> shapes = {
      {0, 2, 2, 2, 2, 2, 2}, {0, 1, 2, 4, 5, 4, 2, 1}, {0, 1, 2, 4, 8}, {0, 16, 2}};
  for (const auto& hist : shapes) {
    const std::size_t runs = 20000;
    const auto a = safari_simulate(hist, runs, 3);
    const auto b = permutation_survivors(hist, runs, 4);
    for (std::size_t c = 1; c < hist.size(); ++c) {
      const double p = b[c] / static_cast<double>(runs);
      // Two independent samples: allow the sum of both variances.
      const double sigma = std::sqrt(2.0 * static_cast<double>(runs) * p * (1 - p));
      CHECK(std::abs(a.mass[c] - b[c]) <= 4 * sigma + 1);
    }
  }
}

TEST_CASE("simulation is reproducible and validates its input") {
  const std::vector<std::uint64_t> hist{0, 2, 2, 2};
  CHECK(safari_simulate(hist, 500, 9).mass == safari_simulate(hist, 500, 9).mass);
  CHECK(safari_simulate(std::vector<std::uint64_t>{1}, 10, 1).mass == std::vector<double>{10});
  CHECK(safari_simulate(std::vector<std::uint64_t>{}, 10, 1).total() == 0);
  CHECK_THROWS_AS(safari_simulate(std::vector<std::uint64_t>{1, 1}, 10, 1), std::invalid_argument);

  const auto w = [](std::initializer_list<std::size_t> f) {
    const std::vector<std::size_t> v(f);
    return HealthAssignment::from_faults(6, v);
  };
  CHECK_THROWS_AS(safari_simulate(std::vector<HealthAssignment>{w({0, 1}), w({0})}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(safari_simulate(std::vector<HealthAssignment>{w({0, 1}), w({1, 2})}, 10, 1), std::invalid_argument);
  const auto d = safari_simulate(std::vector<HealthAssignment>{w({0}), w({1, 2}), w({3, 4})}, 100, 1);
  CHECK(d.total() == doctest::Approx(100));
}

TEST_CASE("histograms and total variation") {
  const auto w = [](std::initializer_list<std::size_t> f) {
    const std::vector<std::size_t> v(f);
    return HealthAssignment::from_faults(6, v);
  };
  CHECK(cardinality_histogram({w({0}), w({1, 2}), w({3, 4}), w({5})}) == std::vector<std::uint64_t>{0, 2, 2});
  const CardinalityDistribution a{{1, 1, 0}}, b{{0, 0, 5}}, c{{2, 2}};
  CHECK(total_variation(a, b) == doctest::Approx(1.0));
  CHECK(total_variation(a, c) == doctest::Approx(0.0));
  CHECK(a.cdf() == std::vector<double>{1, 2, 2});
}

TEST_CASE("CSV output and histogram input") {
  std::ostringstream out;
  write_csv(out, CardinalityDistribution{{0.5, 0.25, 0.25}}, "k", "p");
  CHECK(out.str() == "k,p\n0,0.5\n1,0.25\n2,0.25\n");

  std::istringstream in("cardinality,count\n# comment\n1,2\n3, 4\n\n1,1\n");
  CHECK(parse_histogram(in) == std::vector<std::uint64_t>{0, 3, 0, 4});
  auto bad = [](const char* text) {
    std::istringstream s(text);
    return parse_histogram(s);
  };
  CHECK_THROWS_AS(bad("1,2\nx,y\n"), ParseError);
  CHECK_THROWS_AS(bad("1,-2\n"), ParseError);
  CHECK_THROWS_AS(bad("1,2,3\n"), ParseError);
  std::ifstream file(SAFARI_DATA_DIR "/uniform_hist.csv");
  CHECK(parse_histogram(file) == std::vector<std::uint64_t>{0, 2, 2, 2, 2, 2, 2, 2, 2});
}
