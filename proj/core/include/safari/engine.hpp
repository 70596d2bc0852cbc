#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "safari/bcp.hpp"
#include "safari/cnf.hpp"
#include "safari/model.hpp"
#include "safari/rng.hpp"
#include "safari/sat.hpp"

namespace safari {

/// Where each climb starts.
enum class StartPoint {
  /// A random model of SD and the observation, projected onto COMPS.
  RandomDiagnosis,
  /// Every component faulty. Always a diagnosis of a weak model.
  AllFaulty,
};

struct SafariConfig {
  /// M: consecutive failed flips that end a climb.
  std::size_t max_retries = 8;
  /// N: number of independent climbs.
  std::size_t tries = 4;
  std::uint64_t seed = 0;
  /// Uses M = |COMPS|, so a climb only stops when no single flip succeeds.
  bool optimal_mode = false;
  StartPoint start = StartPoint::RandomDiagnosis;
  /// Worker threads for the tries; output does not depend on it.
  unsigned jobs = 1;
  /// Keep the per-attempt flip log in each trace.
  bool record_flips = true;
};

/// Antichain of fault sets under inclusion, stored as a trie over ascending
/// component indices.
class DiagnosisTrie {
 public:
  explicit DiagnosisTrie(std::size_t num_comps = 0);
  ~DiagnosisTrie();
  DiagnosisTrie(DiagnosisTrie&&) noexcept;
  DiagnosisTrie& operator=(DiagnosisTrie&&) noexcept;

  /// Inserts `w` unless a stored fault set is contained in its fault set;
  /// stored supersets of `w` are dropped. Returns whether `w` was inserted.
  bool insert(const HealthAssignment& w);
  /// True iff some stored fault set is a subset of the fault set of `w`.
  bool is_subsumed(const HealthAssignment& w) const;

  std::size_t size() const { return size_; }
  std::size_t num_comps() const { return num_comps_; }
  /// Stored elements in lexicographic order of their ascending fault lists.
  std::vector<HealthAssignment> elements() const;

 private:
  struct Node;
  std::size_t num_comps_;
  std::size_t size_ = 0;
  std::unique_ptr<Node> root_;
};

/// Faults that already failed to flip since the last successful flip.
struct ClimbState {
  std::vector<bool> failed;

  explicit ClimbState(std::size_t num_comps = 0) : failed(num_comps, false) {}
  void reset() { std::fill(failed.begin(), failed.end(), false); }
};

/// Uniform choice among the faults of `w` not marked failed in `state`;
/// nullopt when there is none.
std::optional<std::size_t> pick_flip(const HealthAssignment& w, const ClimbState& state, Rng& rng);

/// `w` with one untried fault, chosen uniformly, made healthy. Returns `w`
/// unchanged when no such fault exists.
HealthAssignment improve_diagnosis(const HealthAssignment& w, const ClimbState& state, Rng& rng);

/// Two-stage test of SD & alpha & w: BCP refutation first, complete DPLL
/// second. Owns one LTMS and one solver, so one instance per thread.
class ConsistencyChecker {
 public:
  ConsistencyChecker(const DiagnosticSystem& ds, const CnfFormula& cnf, const Observation& alpha);

  bool consistent(const HealthAssignment& w);

  /// Incremental interface used by a climb: the healthy literals of the
  /// current diagnosis stay assumed between flips.
  void begin_climb(const HealthAssignment& w);
  /// Whether the current diagnosis with fault `i` made healthy is consistent.
  /// On success the flip is committed.
  bool try_flip(std::size_t i);
  const HealthAssignment& current() const { return current_; }

  const std::vector<int>& observation_literals() const { return alpha_; }
  Solver& solver() { return solver_; }

  std::uint64_t checks() const { return checks_; }
  std::uint64_t bcp_refutations() const { return bcp_refutations_; }
  std::uint64_t solver_calls() const { return solver_calls_; }

 private:
  int health_lit(std::size_t i, bool healthy) const;
  bool decide(const HealthAssignment& w);

  const DiagnosticSystem& ds_;
  const CnfFormula& cnf_;
  std::vector<int> alpha_;
  Ltms ltms_;
  Solver solver_;
  Ltms::Mark base_;
  Ltms::Mark healthy_mark_;
  HealthAssignment current_;
  std::vector<int> scratch_;
  std::uint64_t checks_ = 0;
  std::uint64_t bcp_refutations_ = 0;
  std::uint64_t solver_calls_ = 0;
};

/// Stand-alone two-stage check of SD & alpha & w.
bool consistent(const DiagnosticSystem& ds, const Observation& alpha, const HealthAssignment& w);

struct FlipAttempt {
  std::size_t comp;
  bool accepted;
};

/// Record of one climb.
struct ClimbTrace {
  std::size_t start_cardinality = 0;
  std::vector<FlipAttempt> attempts;
  HealthAssignment final_diagnosis;
  std::uint64_t checks = 0;
  /// Successful flips; start minus final cardinality.
  std::size_t steps = 0;
};

struct SafariResult {
  DiagnosisTrie trie;
  /// Trie contents ordered by cardinality, then lexicographically by faults.
  std::vector<HealthAssignment> diagnoses;
  std::vector<ClimbTrace> traces;
  std::uint64_t checks = 0;
};

/// Diagnoses by N greedy stochastic climbs. Throws ObservationInconsistent
/// when SD & alpha is unsatisfiable.
SafariResult safari(const DiagnosticSystem& ds, const Observation& alpha, const SafariConfig& cfg);
SafariResult safari(const DiagnosticSystem& ds, const CnfFormula& cnf, const Observation& alpha,
                    const SafariConfig& cfg);

/// One climb from `start`, which must be a diagnosis. `retries` is M.
ClimbTrace climb(ConsistencyChecker& checker, const HealthAssignment& start, std::size_t retries, Rng& rng,
                 bool record_flips = true);

/// Orders by cardinality, then lexicographically by ascending fault lists.
bool canonical_less(const HealthAssignment& a, const HealthAssignment& b);

}  // namespace safari
