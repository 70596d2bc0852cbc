#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "safari/cnf.hpp"

namespace safari {

/// Incremental unit propagation with retractable assumptions.
///
/// Counting scheme: for every clause, `open` is the number of its literals
/// that are not false and `sat` the number that are true. A clause with
/// open == 0 is a contradiction; open == 1 and sat == 0 makes its remaining
/// literal a forced unit. Assigning a variable touches only the clauses that
/// contain it.
///
/// Unit clauses of the formula are propagated at construction and never
/// retracted. BCP is incomplete: a contradiction proves unsatisfiability, its
/// absence proves nothing.
class Ltms {
 public:
  enum class Verdict { Consistent, Contradiction };

  /// Position on the assumption stack, for retract_to.
  struct Mark {
    std::size_t depth = 0;
    std::uint64_t serial = 0;
  };

  /// Values and counters, for comparing states.
  struct Snapshot {
    std::vector<std::int8_t> values;
    std::vector<std::uint32_t> open;
    std::vector<std::uint32_t> sat;
    bool contradiction = false;
    friend bool operator==(const Snapshot&, const Snapshot&) = default;
  };

  explicit Ltms(const CnfFormula& f);

  /// Pushes one assumption and propagates to fixpoint. A level is pushed even
  /// when the state is already contradictory, so marks stay balanced.
  Verdict assume(int lit);

  Mark mark() const;
  /// Undoes every assumption made after `m`. Throws std::logic_error when
  /// `m` no longer names a live level.
  void retract_to(Mark m);

  /// Retracts everything, assumes `lits` and reports whether BCP alone
  /// refutes them.
  Verdict check(std::span<const int> lits);

  bool contradiction() const { return conflict_depth_ != kNoConflict; }
  std::size_t depth() const { return levels_.size(); }
  /// Current value of a CNF variable, if assigned or forced.
  std::optional<bool> value(int var) const;

  /// Total clause-counter updates since construction.
  std::uint64_t touches() const { return touches_; }
  Snapshot snapshot() const;

 private:
  static constexpr std::size_t kNoConflict = static_cast<std::size_t>(-1);

  static std::size_t code(int lit) { return lit > 0 ? 2 * static_cast<std::size_t>(lit) : 2 * static_cast<std::size_t>(-lit) + 1; }

  void assign(int lit);
  void unassign(int lit);
  bool propagate();
  void note_conflict();

  struct Level {
    std::size_t trail_size;
    std::uint64_t serial;
  };

  const CnfFormula& f_;
  std::vector<std::vector<std::uint32_t>> occurs_;
  std::vector<std::uint32_t> open_;
  std::vector<std::uint32_t> sat_;
  std::vector<std::int8_t> value_;  // -1 unassigned, 0 false, 1 true
  std::vector<int> trail_;
  std::vector<int> pending_;
  std::vector<Level> levels_;
  std::uint64_t next_serial_ = 1;
  std::size_t conflict_depth_ = kNoConflict;
  bool clash_ = false;
  std::uint64_t touches_ = 0;
};

}  // namespace safari
