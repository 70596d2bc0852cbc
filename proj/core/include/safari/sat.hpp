#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "safari/cnf.hpp"
#include "safari/rng.hpp"

namespace safari {

/// Full assignment over CNF variables: `values[v]` for v in [1, num_vars],
/// index 0 unused.
struct Assignment {
  std::vector<std::uint8_t> values;

  bool value(int var) const { return values[static_cast<std::size_t>(var)] != 0; }
  bool satisfies(int lit) const { return value(lit > 0 ? lit : -lit) == (lit > 0); }
};

/// True iff `a` satisfies every clause of `f`.
bool satisfies(const CnfFormula& f, const Assignment& a);

/// DPLL with two watched literals. Conflicts are analysed to the first unique
/// implication point and the search jumps back to the level the learnt clause
/// asserts at; learnt clauses are dropped when the call returns, so every call
/// depends only on the formula, its arguments and the random generator. One
/// instance per thread; the formula must outlive the solver.
class Solver {
 public:
  explicit Solver(const CnfFormula& f);

  /// Complete search. Branches on the lowest unassigned variable, true first,
  /// so the answer is a pure function of the inputs. Contradictory
  /// assumptions give nullopt.
  std::optional<Assignment> solve(std::span<const int> assumptions);

  /// Branches on a uniformly chosen unassigned variable with a uniformly
  /// chosen sign, propagating after every decision, until every variable is
  /// assigned. Not exactly uniform over models.
  std::optional<Assignment> random_solution(std::span<const int> assumptions, Rng& rng);

  std::uint64_t decisions() const { return decisions_; }
  std::uint64_t conflicts() const { return conflicts_; }

 private:
  static constexpr std::uint8_t kFalse = 0, kTrue = 1, kUnset = 2;

  static std::size_t code(int lit) { return lit > 0 ? 2 * static_cast<std::size_t>(lit) : 2 * static_cast<std::size_t>(-lit) + 1; }

  std::uint8_t lit_value(int lit) const {
    const std::uint8_t v = value_[static_cast<std::size_t>(lit > 0 ? lit : -lit)];
    return v == kUnset ? kUnset : static_cast<std::uint8_t>((v == kTrue) == (lit > 0));
  }

  static constexpr std::size_t kNoReason = static_cast<std::size_t>(-1);

  void assign(int lit, std::size_t reason);
  // Index of a falsified clause, or kNoReason.
  std::size_t propagate();
  void undo_to(std::size_t trail_size);
  void backjump(std::size_t level);
  int analyze(std::size_t conflict, std::vector<int>& learnt);
  void drop_learnt();
  void mark_free(int var, int delta);
  int kth_free(int k) const;
  template <typename Pick>
  std::optional<Assignment> search(std::span<const int> assumptions, Pick pick);

  const CnfFormula& f_;
  std::vector<std::vector<int>> clauses_;
  // Clauses past this index were learnt during the current call.
  std::size_t num_base_ = 0;
  std::vector<std::vector<std::size_t>> watches_;
  std::vector<int> units_;
  std::vector<std::uint8_t> value_;
  std::vector<std::size_t> level_;
  std::vector<std::size_t> reason_;
  std::vector<std::uint8_t> seen_;
  std::vector<int> trail_;
  // Trail size at the start of each decision level.
  std::vector<std::size_t> trail_lim_;
  std::size_t head_ = 0;
  // Fenwick tree over unassigned variables: the random branch picks the k-th
  // unassigned variable in id order, independent of propagation order.
  std::vector<int> free_tree_;
  int num_free_ = 0;
  int tree_top_ = 1;
  int cursor_ = 1;
  bool trivially_unsat_ = false;
  std::uint64_t decisions_ = 0;
  std::uint64_t conflicts_ = 0;
};

/// Whether SD has a model at all.
bool sd_satisfiable(const DiagnosticSystem& ds);

}  // namespace safari
