#include "safari/bcp.hpp"

#include <stdexcept>

namespace safari {

Ltms::Ltms(const CnfFormula& f)
    : f_(f),
      occurs_(2 * (static_cast<std::size_t>(f.num_vars) + 1)),
      open_(f.clauses.size(), 0),
      sat_(f.clauses.size(), 0),
      value_(static_cast<std::size_t>(f.num_vars) + 1, -1) {
  for (std::size_t c = 0; c < f.clauses.size(); ++c) {
    const auto& clause = f.clauses[c];
    open_[c] = static_cast<std::uint32_t>(clause.size());
    for (const int l : clause) occurs_[code(l)].push_back(static_cast<std::uint32_t>(c));
    if (clause.empty()) clash_ = true;
    if (clause.size() == 1) pending_.push_back(clause[0]);
  }
  if (!propagate()) note_conflict();
}

void Ltms::assign(int lit) {
  value_[static_cast<std::size_t>(lit > 0 ? lit : -lit)] = lit > 0 ? 1 : 0;
  trail_.push_back(lit);
  for (const auto c : occurs_[code(lit)]) {
    ++sat_[c];
    ++touches_;
  }
  for (const auto c : occurs_[code(-lit)]) {
    ++touches_;
    if (--open_[c] != 0 || sat_[c] != 0) {
      if (open_[c] == 1 && sat_[c] == 0) {
        for (const int l : f_.clauses[c]) {
          if (value_[static_cast<std::size_t>(l > 0 ? l : -l)] < 0) {
            pending_.push_back(l);
            break;
          }
        }
      }
      continue;
    }
    clash_ = true;
  }
}

void Ltms::unassign(int lit) {
  value_[static_cast<std::size_t>(lit > 0 ? lit : -lit)] = -1;
  for (const auto c : occurs_[code(lit)]) {
    --sat_[c];
    ++touches_;
  }
  for (const auto c : occurs_[code(-lit)]) {
    ++open_[c];
    ++touches_;
  }
}

bool Ltms::propagate() {
  while (!clash_ && !pending_.empty()) {
    const int l = pending_.back();
    pending_.pop_back();
    const auto v = value_[static_cast<std::size_t>(l > 0 ? l : -l)];
    if (v < 0) {
      assign(l);
    } else if ((v == 1) != (l > 0)) {
      clash_ = true;
    }
  }
  pending_.clear();
  return !clash_;
}

void Ltms::note_conflict() {
  conflict_depth_ = levels_.size();
  clash_ = false;
  pending_.clear();
}

Ltms::Verdict Ltms::assume(int lit) {
  if (lit == 0 || lit > f_.num_vars || -lit > f_.num_vars) throw std::invalid_argument("literal out of range");
  levels_.push_back({trail_.size(), next_serial_++});
  if (contradiction()) return Verdict::Contradiction;
  const auto v = value_[static_cast<std::size_t>(lit > 0 ? lit : -lit)];
  if (v < 0) {
    assign(lit);
    if (!propagate()) note_conflict();
  } else if ((v == 1) != (lit > 0)) {
    note_conflict();
  }
  return contradiction() ? Verdict::Contradiction : Verdict::Consistent;
}

Ltms::Mark Ltms::mark() const {
  return {levels_.size(), levels_.empty() ? 0 : levels_.back().serial};
}

void Ltms::retract_to(Mark m) {
  if (m.depth > levels_.size() || (m.depth > 0 && levels_[m.depth - 1].serial != m.serial))
    throw std::logic_error("stale LTMS mark");
  while (levels_.size() > m.depth) {
    const std::size_t keep = levels_.back().trail_size;
    levels_.pop_back();
    while (trail_.size() > keep) {
      unassign(trail_.back());
      trail_.pop_back();
    }
  }
  if (conflict_depth_ != kNoConflict && conflict_depth_ > levels_.size()) conflict_depth_ = kNoConflict;
}

Ltms::Verdict Ltms::check(std::span<const int> lits) {
  retract_to({});
  for (const int l : lits)
    if (assume(l) == Verdict::Contradiction) return Verdict::Contradiction;
  return Verdict::Consistent;
}

std::optional<bool> Ltms::value(int var) const {
  const auto v = value_.at(static_cast<std::size_t>(var));
  if (v < 0) return std::nullopt;
  return v == 1;
}

Ltms::Snapshot Ltms::snapshot() const { return {value_, open_, sat_, contradiction()}; }

}  // namespace safari
