#include "safari/oracle.hpp"

#include <algorithm>
#include <bit>
#include <thread>

#include <json.hpp>

#include "safari/bcp.hpp"
#include "safari/cnf.hpp"
#include "safari/engine.hpp"
#include "safari/error.hpp"
#include "safari/model_io.hpp"
#include "safari/sat.hpp"

namespace safari {

namespace {

std::uint64_t mask_of(const HealthAssignment& w) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!w.healthy(i)) m |= std::uint64_t{1} << i;
  return m;
}

HealthAssignment from_mask(std::size_t n, std::uint64_t m) {
  HealthAssignment w(n, true);
  for (std::size_t i = 0; i < n; ++i)
    if (m >> i & 1) w.set_healthy(i, false);
  return w;
}

// Checks codes gray(t) for t in [lo, hi). Health literals are assumed from
// the highest component down, so changing bit b only re-assumes bits b..0.
void scan(const DiagnosticSystem& ds, const CnfFormula& cnf, const std::vector<int>& alpha, std::uint64_t lo,
          std::uint64_t hi, std::vector<std::uint8_t>& out) {
  const std::size_t n = ds.num_comps();
  Ltms ltms(cnf);
  Solver solver(cnf);
  for (const int l : alpha) ltms.assume(l);
  std::vector<int> var(n);
  for (std::size_t i = 0; i < n; ++i) var[i] = cnf.var_of(ds.comps()[i]);
  std::vector<Ltms::Mark> before(n);
  std::vector<int> assumptions;

  std::uint64_t code = lo ^ (lo >> 1);
  auto assume_from = [&](std::size_t top) {
    for (std::size_t b = top + 1; b-- > 0;) {
      before[b] = ltms.mark();
      ltms.assume(code >> b & 1 ? -var[b] : var[b]);
    }
  };
  if (n > 0) assume_from(n - 1);
  for (std::uint64_t t = lo; t < hi; ++t) {
    if (t != lo) {
      code = t ^ (t >> 1);
      const auto b = static_cast<std::size_t>(std::countr_zero(t));
      ltms.retract_to(before[b]);
      assume_from(b);
    }
    if (ltms.contradiction()) continue;
    assumptions = alpha;
    for (std::size_t i = 0; i < n; ++i) assumptions.push_back(code >> i & 1 ? -var[i] : var[i]);
    if (solver.solve(assumptions)) out[code] = 1;
  }
}

}  // namespace

bool DiagnosisCensus::diagnosis(const HealthAssignment& w) const {
  if (w.size() != num_comps) throw std::invalid_argument("health assignment size mismatch");
  return is_diagnosis[mask_of(w)] != 0;
}

bool DiagnosisCensus::minimal_diagnosis(const HealthAssignment& w) const {
  return std::find(minimal.begin(), minimal.end(), w) != minimal.end();
}

std::vector<HealthAssignment> DiagnosisCensus::all() const {
  std::vector<HealthAssignment> out;
  for (std::uint64_t m = 0; m < is_diagnosis.size(); ++m)
    if (is_diagnosis[m]) out.push_back(from_mask(num_comps, m));
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

DiagnosisCensus census(const DiagnosticSystem& ds, const Observation& alpha, std::size_t limit, unsigned jobs) {
  const std::size_t n = ds.num_comps();
  if (n > limit || n >= 63)
    throw LimitExceeded("census needs 2^" + std::to_string(n) + " consistency checks; the limit is 2^" +
                        std::to_string(limit));
  const CnfFormula cnf = to_cnf(ds);
  const std::vector<int> lits = encode(cnf, alpha);
  const std::uint64_t total = std::uint64_t{1} << n;

  DiagnosisCensus c;
  c.num_comps = n;
  c.is_diagnosis.assign(total, 0);
  // Each worker writes distinct codes, and gray() is a bijection on [0, total).
  const std::uint64_t workers = std::clamp<std::uint64_t>(jobs, 1, std::max<std::uint64_t>(1, total / 256));
  if (workers == 1) {
    scan(ds, cnf, lits, 0, total, c.is_diagnosis);
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t j = 0; j < workers; ++j)
      pool.emplace_back(scan, std::cref(ds), std::cref(cnf), std::cref(lits), total * j / workers,
                        total * (j + 1) / workers, std::ref(c.is_diagnosis));
    for (auto& th : pool) th.join();
  }

  // below[m]: some diagnosis has a fault set contained in m.
  std::vector<std::uint8_t> below = c.is_diagnosis;
  for (std::size_t i = 0; i < n; ++i)
    for (std::uint64_t m = 0; m < total; ++m)
      if (m >> i & 1) below[m] |= below[m ^ (std::uint64_t{1} << i)];

  for (std::uint64_t m = 0; m < total; ++m) {
    if (!c.is_diagnosis[m]) continue;
    ++c.all_count;
    bool minimal = true;
    for (std::size_t i = 0; i < n && minimal; ++i)
      if (m >> i & 1 && below[m ^ (std::uint64_t{1} << i)]) minimal = false;
    if (minimal) c.minimal.push_back(from_mask(n, m));
  }
  std::sort(c.minimal.begin(), c.minimal.end(), canonical_less);
  if (!c.minimal.empty()) {
    c.min_card = cardinality(c.minimal.front());
    for (const auto& w : c.minimal)
      if (cardinality(w) == *c.min_card) c.min_cardinality.push_back(w);
  }
  return c;
}

std::string census_json(const DiagnosticSystem& ds, const DiagnosisCensus& c, bool listing) {
  nlohmann::ordered_json j;
  j["comps"] = c.num_comps;
  j["diagnoses"] = c.all_count;
  j["minimal"] = c.minimal.size();
  j["non_minimal"] = c.non_minimal_count();
  j["min_cardinality"] = c.min_cardinality.size();
  j["min_card"] = c.min_card ? nlohmann::ordered_json(*c.min_card) : nlohmann::ordered_json(nullptr);
  if (listing) {
    auto names = [&](const std::vector<HealthAssignment>& ws) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& w : ws) {
        auto faults = nlohmann::ordered_json::array();
        for (const auto i : w.faults()) faults.push_back(ds.symbols().name(ds.comps()[i]));
        arr.push_back(std::move(faults));
      }
      return arr;
    };
    j["minimal_diagnoses"] = names(c.minimal);
    j["min_cardinality_diagnoses"] = names(c.min_cardinality);
  }
  return j.dump(2);
}

bool brute_force_consistent(const DiagnosticSystem& ds, const Observation& alpha, const HealthAssignment& w,
                            std::size_t limit) {
  if (w.size() != ds.num_comps()) throw std::invalid_argument("health assignment size mismatch");
  std::vector<std::uint8_t> values(ds.num_vars(), 0);
  std::vector<bool> fixed(ds.num_vars(), false);
  for (std::size_t i = 0; i < w.size(); ++i) {
    values[ds.comps()[i]] = w.healthy(i);
    fixed[ds.comps()[i]] = true;
  }
  for (const auto& l : alpha.literals()) {
    values[l.var] = l.positive;
    fixed[l.var] = true;
  }
  std::vector<VarId> free;
  for (const VarId v : ds.sd().variables())
    if (!fixed[v]) free.push_back(v);
  if (free.size() > limit)
    throw LimitExceeded(std::to_string(free.size()) + " free variables exceed the brute-force limit");
  const std::uint64_t total = std::uint64_t{1} << free.size();
  for (std::uint64_t m = 0; m < total; ++m) {
    for (std::size_t k = 0; k < free.size(); ++k) values[free[k]] = m >> k & 1;
    if (ds.sd().evaluate(values)) return true;
  }
  return false;
}

}  // namespace safari
