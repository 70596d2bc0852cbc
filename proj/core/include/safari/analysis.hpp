#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "safari/model.hpp"

namespace safari {

/// Parameters of the climb as a Markov chain over steps k = 0 .. n - |w|,
/// starting from the all-faulty assignment with one minimal diagnosis w.
struct ClimbModel {
  std::size_t n_comps = 0;
  std::size_t fault_card = 0;
  /// M, consecutive failures that end a climb.
  std::size_t retries = 1;
  /// Probability that a flip is invalid because of fault constraints.
  double density = 0.0;

  std::size_t max_steps() const { return n_comps - fault_card; }
};

/// Non-negative masses indexed by climb step or by cardinality.
struct CardinalityDistribution {
  std::vector<double> mass;

  double total() const;
  CardinalityDistribution normalized() const;
  /// Running sums of `mass`.
  std::vector<double> cdf() const;
  double mean() const;
};

/// Probability of advancing from step k: one minus the chance that M distinct
/// flips, drawn from the n - k faulty components, all hit one of the |w|
/// components that must stay faulty, i.e. 1 - C(|w|, M') / C(n - k, M') with
/// M' = min(M, n - k). A positive density is subtracted and the result
/// clamped to [0, 1]. Throws std::invalid_argument for k > n - |w|.
double step_success_prob(const ClimbModel& m, std::size_t k);

/// f(k) = (1 - p(k)) * prod_{i<k} p(i), the probability that the climb stops
/// after exactly k successful flips. The last step n - |w| takes all the
/// remaining mass, so the result sums to one.
CardinalityDistribution climb_pdf(const ClimbModel& m);

/// Probability that a given minimal diagnosis of cardinality c survives an
/// optimal climb from the all-faulty start: c! (n - c)! / n!.
double survival_prob(std::size_t n_comps, std::size_t fault_card);
/// c! n^-c, the large-n form of survival_prob.
double survival_prob_asymptotic(std::size_t n_comps, std::size_t fault_card);

/// Monte Carlo model of N optimal climbs over literal-disjoint minimal
/// diagnoses, given as a cardinality histogram (`histogram[c]` diagnoses of
/// cardinality c). Each try removes diagnoses one at a time, choosing
/// cardinality c with probability proportional to the number of literals left
/// in diagnoses of that cardinality; the last one removed is counted.
CardinalityDistribution safari_simulate(const std::vector<std::uint64_t>& histogram, std::size_t tries,
                                        std::uint64_t seed);
/// Same, from the diagnoses themselves. Throws std::invalid_argument when the
/// set is not an antichain or two diagnoses share a fault.
CardinalityDistribution safari_simulate(const std::vector<HealthAssignment>& minimal, std::size_t tries,
                                        std::uint64_t seed);

/// `histogram[c]`: number of diagnoses of cardinality c.
std::vector<std::uint64_t> cardinality_histogram(const std::vector<HealthAssignment>& ws);

/// Half the L1 distance between the normalized distributions.
double total_variation(const CardinalityDistribution& a, const CardinalityDistribution& b);

/// Two-column CSV with a header line, one row per index.
void write_csv(std::ostream& out, const CardinalityDistribution& d, const std::string& index_name,
               const std::string& value_name);

/// Reads a cardinality histogram: one `cardinality,count` row per line, an
/// optional non-numeric header and `#` comments. Throws ParseError.
std::vector<std::uint64_t> parse_histogram(std::istream& in);

}  // namespace safari
