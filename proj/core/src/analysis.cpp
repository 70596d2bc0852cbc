#include "safari/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "safari/error.hpp"
#include "safari/rng.hpp"

namespace safari {

namespace {

// C(a, b) / C(c, b) for b <= a <= c, as a product of ratios.
double binomial_ratio(std::size_t a, std::size_t c, std::size_t b) {
  if (b > a) return 0.0;
  double r = 1.0;
  for (std::size_t t = 0; t < b; ++t) r *= static_cast<double>(a - t) / static_cast<double>(c - t);
  return r;
}

void validate(const ClimbModel& m) {
  if (m.fault_card > m.n_comps) throw std::invalid_argument("fault cardinality exceeds the number of components");
  if (m.retries == 0) throw std::invalid_argument("a climb model needs M >= 1");
  if (!(m.density >= 0.0 && m.density < 1.0)) throw std::invalid_argument("density must lie in [0, 1)");
}

}  // namespace

double CardinalityDistribution::total() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

CardinalityDistribution CardinalityDistribution::normalized() const {
  CardinalityDistribution d = *this;
  const double t = total();
  if (t > 0)
    for (auto& v : d.mass) v /= t;
  return d;
}

std::vector<double> CardinalityDistribution::cdf() const {
  std::vector<double> out(mass.size());
  std::partial_sum(mass.begin(), mass.end(), out.begin());
  return out;
}

double CardinalityDistribution::mean() const {
  double s = 0;
  for (std::size_t i = 0; i < mass.size(); ++i) s += static_cast<double>(i) * mass[i];
  const double t = total();
  return t > 0 ? s / t : 0.0;
}

double step_success_prob(const ClimbModel& m, std::size_t k) {
  validate(m);
  if (k > m.max_steps()) throw std::invalid_argument("step index out of range");
  const std::size_t faulty = m.n_comps - k;
  const std::size_t draws = std::min(m.retries, faulty);
  const double p = 1.0 - binomial_ratio(m.fault_card, faulty, draws) - m.density;
  return std::clamp(p, 0.0, 1.0);
}

CardinalityDistribution climb_pdf(const ClimbModel& m) {
  validate(m);
  const std::size_t last = m.max_steps();
  CardinalityDistribution d;
  d.mass.assign(last + 1, 0.0);
  double reach = 1.0;  // probability of reaching step k
  for (std::size_t k = 0; k < last; ++k) {
    const double p = step_success_prob(m, k);
    d.mass[k] = reach * (1.0 - p);
    reach *= p;
  }
  d.mass[last] = reach;
  return d;
}

double survival_prob(std::size_t n_comps, std::size_t fault_card) {
  if (fault_card > n_comps) throw std::invalid_argument("fault cardinality exceeds the number of components");
  // c! (n - c)! / n! = 1 / C(n, c)
  double r = 1.0;
  for (std::size_t t = 0; t < fault_card; ++t)
    r *= static_cast<double>(fault_card - t) / static_cast<double>(n_comps - t);
  return r;
}

double survival_prob_asymptotic(std::size_t n_comps, std::size_t fault_card) {
  double r = 1.0;
  for (std::size_t t = 1; t <= fault_card; ++t) r *= static_cast<double>(t) / static_cast<double>(n_comps);
  return r;
}

CardinalityDistribution safari_simulate(const std::vector<std::uint64_t>& histogram, std::size_t tries,
                                        std::uint64_t seed) {
  CardinalityDistribution h;
  h.mass.assign(histogram.size(), 0.0);
  const std::uint64_t diagnoses = std::accumulate(histogram.begin(), histogram.end(), std::uint64_t{0});
  if (diagnoses == 0 || (histogram.size() > 0 && histogram[0] > 0 && diagnoses == histogram[0])) {
    // Only the empty diagnosis (or nothing) can be returned.
    if (diagnoses > 0) h.mass[0] = static_cast<double>(tries);
    return h;
  }
  if (histogram[0] > 0) throw std::invalid_argument("the empty diagnosis cannot coexist with other minimal ones");

  Rng rng(seed);
  std::vector<double> b(histogram.size());
  for (std::size_t n = 0; n < tries; ++n) {
    for (std::size_t c = 0; c < histogram.size(); ++c) b[c] = static_cast<double>(c * histogram[c]);
    std::size_t c = 0;
    for (std::uint64_t i = 0; i < diagnoses; ++i) {
      const double sum = std::accumulate(b.begin(), b.end(), 0.0);
      double u = rng.uniform01() * sum;
      c = 0;
      for (std::size_t j = 1; j < b.size(); ++j) {
        if (b[j] <= 0) continue;
        c = j;
        if (u < b[j]) break;
        u -= b[j];
      }
      b[c] -= static_cast<double>(c);
    }
    h.mass[c] += 1.0;
  }
  return h;
}

std::vector<std::uint64_t> cardinality_histogram(const std::vector<HealthAssignment>& ws) {
  std::vector<std::uint64_t> h;
  for (const auto& w : ws) {
    const std::size_t c = cardinality(w);
    if (h.size() <= c) h.resize(c + 1, 0);
    ++h[c];
  }
  return h;
}

CardinalityDistribution safari_simulate(const std::vector<HealthAssignment>& minimal, std::size_t tries,
                                        std::uint64_t seed) {
  for (std::size_t a = 0; a < minimal.size(); ++a)
    for (std::size_t b = a + 1; b < minimal.size(); ++b) {
      if (subsumes(minimal[a], minimal[b]) || subsumes(minimal[b], minimal[a]))
        throw std::invalid_argument("input diagnoses are not an antichain");
      for (std::size_t i = 0; i < minimal[a].size(); ++i)
        if (!minimal[a].healthy(i) && !minimal[b].healthy(i))
          throw std::invalid_argument("input diagnoses share a faulty component");
    }
  return safari_simulate(cardinality_histogram(minimal), tries, seed);
}

double total_variation(const CardinalityDistribution& a, const CardinalityDistribution& b) {
  const auto na = a.normalized(), nb = b.normalized();
  const std::size_t n = std::max(na.mass.size(), nb.mass.size());
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i < na.mass.size() ? na.mass[i] : 0.0;
    const double y = i < nb.mass.size() ? nb.mass[i] : 0.0;
    s += std::abs(x - y);
  }
  return s / 2;
}

void write_csv(std::ostream& out, const CardinalityDistribution& d, const std::string& index_name,
               const std::string& value_name) {
  out << index_name << ',' << value_name << '\n';
  std::ostringstream row;
  row.precision(15);
  for (std::size_t i = 0; i < d.mass.size(); ++i) {
    row.str("");
    row << i << ',' << d.mass[i] << '\n';
    out << row.str();
  }
}

std::vector<std::uint64_t> parse_histogram(std::istream& in) {
  std::vector<std::uint64_t> h;
  std::string line;
  std::size_t line_no = 0;
  bool any_row = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    long long c = -1, count = -1;
    if (!(row >> c >> count)) {
      if (!any_row && line.find_first_of("0123456789") == std::string::npos) continue;  // header
      throw ParseError("expected 'cardinality,count'", line_no);
    }
    std::string rest;
    if (row >> rest) throw ParseError("trailing text after the count", line_no);
    if (c < 0 || count < 0) throw ParseError("negative cardinality or count", line_no);
    any_row = true;
    if (h.size() <= static_cast<std::size_t>(c)) h.resize(static_cast<std::size_t>(c) + 1, 0);
    h[static_cast<std::size_t>(c)] += static_cast<std::uint64_t>(count);
  }
  return h;
}

}  // namespace safari
