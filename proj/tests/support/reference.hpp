#pragma once

// Reference computations used as test oracles. They deliberately avoid the
// CNF, SAT and BCP code paths: everything here works on the original formula
// by exhaustive evaluation, or on a direct simulation of a random process.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "safari/cnf.hpp"
#include "safari/model.hpp"

namespace ref {

using safari::DiagnosticSystem;
using safari::HealthAssignment;
using safari::Observation;

// `result[mask]` for every health mask (bit i set = component i faulty):
// whether SD & alpha & w is satisfiable, by evaluating SD on every assignment
// of the non-observed variables.
inline std::vector<std::uint8_t> diagnosis_table(const DiagnosticSystem& ds, const Observation& alpha) {
  const std::size_t nv = ds.num_vars();
  std::vector<bool> fixed(nv, false);
  std::vector<std::uint8_t> values(nv, 0);
  for (const auto& l : alpha.literals()) {
    fixed[l.var] = true;
    values[l.var] = l.positive;
  }
  std::vector<safari::VarId> free;
  for (safari::VarId v = 0; v < nv; ++v)
    if (!fixed[v]) free.push_back(v);
  if (free.size() > 24) throw std::invalid_argument("too many free variables for the reference table");
  std::vector<std::uint8_t> result(std::size_t{1} << ds.num_comps(), 0);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << free.size()); ++m) {
    for (std::size_t k = 0; k < free.size(); ++k) values[free[k]] = m >> k & 1;
    if (!ds.sd().evaluate(values)) continue;
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < ds.num_comps(); ++i)
      if (!values[ds.comps()[i]]) mask |= std::uint64_t{1} << i;
    result[mask] = 1;
  }
  return result;
}

// Whether SD & alpha & w is satisfiable, by evaluating SD on every assignment
// of the variables that are neither observed nor health variables.
inline bool consistent(const DiagnosticSystem& ds, const Observation& alpha, const HealthAssignment& w) {
  const std::size_t nv = ds.num_vars();
  std::vector<bool> fixed(nv, false);
  std::vector<std::uint8_t> values(nv, 0);
  for (const auto& l : alpha.literals()) {
    fixed[l.var] = true;
    values[l.var] = l.positive;
  }
  for (std::size_t i = 0; i < ds.num_comps(); ++i) {
    fixed[ds.comps()[i]] = true;
    values[ds.comps()[i]] = w.healthy(i);
  }
  std::vector<safari::VarId> free;
  for (safari::VarId v = 0; v < nv; ++v)
    if (!fixed[v]) free.push_back(v);
  if (free.size() > 24) throw std::invalid_argument("too many free variables for the reference check");
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << free.size()); ++m) {
    for (std::size_t k = 0; k < free.size(); ++k) values[free[k]] = m >> k & 1;
    if (ds.sd().evaluate(values)) return true;
  }
  return false;
}

inline std::uint64_t mask_of(const HealthAssignment& w) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!w.healthy(i)) m |= std::uint64_t{1} << i;
  return m;
}

inline HealthAssignment from_mask(std::size_t n, std::uint64_t m) {
  HealthAssignment w(n);
  for (std::size_t i = 0; i < n; ++i) w.set_healthy(i, !(m >> i & 1));
  return w;
}

// Minimal masks of a diagnosis table, by direct pairwise comparison.
inline std::set<std::uint64_t> minimal_masks(const std::vector<std::uint8_t>& table) {
  std::vector<std::uint64_t> diag;
  for (std::uint64_t m = 0; m < table.size(); ++m)
    if (table[m]) diag.push_back(m);
  std::set<std::uint64_t> out;
  for (const auto m : diag) {
    bool minimal = true;
    for (const auto o : diag)
      if (o != m && (o & m) == o) minimal = false;
    if (minimal) out.insert(m);
  }
  return out;
}

// Satisfiability of a CNF under assumptions by enumerating all assignments.
inline bool cnf_satisfiable(const safari::CnfFormula& f, const std::vector<int>& assumptions) {
  const int n = f.num_vars;
  if (n > 22) throw std::invalid_argument("CNF too large for enumeration");
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    auto val = [&](int lit) {
      const int v = lit > 0 ? lit : -lit;
      const bool b = m >> (v - 1) & 1;
      return lit > 0 ? b : !b;
    };
    bool ok = true;
    for (const int a : assumptions) ok = ok && val(a);
    for (std::size_t c = 0; ok && c < f.clauses.size(); ++c) {
      bool sat = false;
      for (const int l : f.clauses[c]) sat = sat || val(l);
      ok = sat;
    }
    if (ok) return true;
  }
  return false;
}

// Direct simulation of one climb as drawing without replacement: at step k
// there are n - k faulty components, `card` of which cannot be flipped. The
// climb stops after `retries` consecutive bad draws or when only bad ones are
// left. Returns the histogram of k.
inline std::vector<std::uint64_t> simulate_climb_chain(std::size_t n, std::size_t card, std::size_t retries,
                                                       std::size_t runs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> hist(n - card + 1, 0);
  for (std::size_t r = 0; r < runs; ++r) {
    std::size_t k = 0;
    for (;;) {
      const std::size_t faulty = n - k;
      if (faulty == card) break;
      // Draw without replacement until a good one or `retries` bad ones.
      std::size_t bad_left = card, total_left = faulty, misses = 0;
      bool advanced = false;
      while (misses < retries && total_left > 0) {
        std::uniform_int_distribution<std::size_t> d(0, total_left - 1);
        if (d(rng) < bad_left) {
          --bad_left;
          --total_left;
          ++misses;
        } else {
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
      ++k;
    }
    ++hist[k];
  }
  return hist;
}

// Bound for a multinomial bin: |observed - expected| <= z * sqrt(N p (1 - p)).
inline bool within_sigma(double observed, double p, double runs, double z) {
  const double sigma = std::sqrt(runs * p * (1 - p));
  return std::abs(observed - runs * p) <= z * sigma;
}

}  // namespace ref
