#include "safari/sat.hpp"

#include <cassert>
#include <stdexcept>

namespace safari {

bool satisfies(const CnfFormula& f, const Assignment& a) {
  if (a.values.size() != static_cast<std::size_t>(f.num_vars) + 1) return false;
  for (const auto& c : f.clauses) {
    bool sat = false;
    for (const int l : c) {
      if (a.satisfies(l)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

Solver::Solver(const CnfFormula& f)
    : f_(f),
      watches_(2 * (static_cast<std::size_t>(f.num_vars) + 1)),
      value_(static_cast<std::size_t>(f.num_vars) + 1, kUnset),
      level_(static_cast<std::size_t>(f.num_vars) + 1, 0),
      reason_(static_cast<std::size_t>(f.num_vars) + 1, kNoReason),
      seen_(static_cast<std::size_t>(f.num_vars) + 1, 0),
      free_tree_(static_cast<std::size_t>(f.num_vars) + 1, 0) {
  for (const auto& c : f.clauses) {
    if (c.empty()) {
      trivially_unsat_ = true;
    } else if (c.size() == 1) {
      units_.push_back(c[0]);
    } else {
      const std::size_t idx = clauses_.size();
      clauses_.push_back(c);
      watches_[code(c[0])].push_back(idx);
      watches_[code(c[1])].push_back(idx);
    }
  }
  num_base_ = clauses_.size();
  for (int v = 1; v <= f.num_vars; ++v) mark_free(v, 1);
  while (tree_top_ * 2 <= f.num_vars) tree_top_ *= 2;
  trail_.reserve(static_cast<std::size_t>(f.num_vars));
}

void Solver::assign(int lit, std::size_t reason) {
  const auto v = static_cast<std::size_t>(lit > 0 ? lit : -lit);
  value_[v] = lit > 0 ? kTrue : kFalse;
  level_[v] = trail_lim_.size();
  reason_[v] = reason;
  trail_.push_back(lit);
  mark_free(static_cast<int>(v), -1);
}

void Solver::mark_free(int var, int delta) {
  num_free_ += delta;
  for (int i = var; i <= f_.num_vars; i += i & -i) free_tree_[static_cast<std::size_t>(i)] += delta;
}

// Smallest variable with k + 1 unassigned variables at or below it.
int Solver::kth_free(int k) const {
  int pos = 0;
  for (int step = tree_top_; step > 0; step /= 2) {
    const int next = pos + step;
    if (next <= f_.num_vars && free_tree_[static_cast<std::size_t>(next)] <= k) {
      pos = next;
      k -= free_tree_[static_cast<std::size_t>(next)];
    }
  }
  return pos + 1;
}

void Solver::undo_to(std::size_t trail_size) {
  while (trail_.size() > trail_size) {
    const int lit = trail_.back();
    trail_.pop_back();
    const auto v = static_cast<std::size_t>(lit > 0 ? lit : -lit);
    value_[v] = kUnset;
    reason_[v] = kNoReason;
    mark_free(static_cast<int>(v), 1);
    if (static_cast<int>(v) < cursor_) cursor_ = static_cast<int>(v);
  }
  head_ = std::min(head_, trail_size);
}

void Solver::backjump(std::size_t level) {
  if (level >= trail_lim_.size()) return;
  undo_to(trail_lim_[level]);
  trail_lim_.resize(level);
}

void Solver::drop_learnt() {
  if (clauses_.size() == num_base_) return;
  clauses_.resize(num_base_);
  for (auto& ws : watches_) std::erase_if(ws, [this](std::size_t ci) { return ci >= num_base_; });
}

std::size_t Solver::propagate() {
  while (head_ < trail_.size()) {
    const int falsified = -trail_[head_++];
    auto& ws = watches_[code(falsified)];
    std::size_t j = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const std::size_t ci = ws[i];
      auto& cl = clauses_[ci];
      if (cl[0] == falsified) std::swap(cl[0], cl[1]);
      if (lit_value(cl[0]) == kTrue) {
        ws[j++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < cl.size(); ++k) {
        if (lit_value(cl[k]) != kFalse) {
          std::swap(cl[1], cl[k]);
          watches_[code(cl[1])].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = ci;
      if (lit_value(cl[0]) == kFalse) {
        for (++i; i < ws.size(); ++i) ws[j++] = ws[i];
        ws.resize(j);
        return ci;
      }
      assign(cl[0], ci);
    }
    ws.resize(j);
  }
  return kNoReason;
}

// First-UIP learning. `learnt[0]` becomes the asserting literal and
// `learnt[1]` one of the highest-level others; returns the backjump level.
int Solver::analyze(std::size_t conflict, std::vector<int>& learnt) {
  learnt.assign(1, 0);
  const std::size_t current = trail_lim_.size();
  std::size_t open = 0;
  std::size_t index = trail_.size();
  int p = 0;
  std::size_t ci = conflict;
  for (;;) {
    for (const int q : clauses_[ci]) {
      const auto v = static_cast<std::size_t>(q > 0 ? q : -q);
      if (p != 0 && static_cast<int>(v) == (p > 0 ? p : -p)) continue;
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = 1;
      if (level_[v] == current) ++open;
      else learnt.push_back(q);
    }
    do {
      p = trail_[--index];
    } while (!seen_[static_cast<std::size_t>(p > 0 ? p : -p)]);
    const auto pv = static_cast<std::size_t>(p > 0 ? p : -p);
    seen_[pv] = 0;
    if (--open == 0) break;
    ci = reason_[pv];
  }
  learnt[0] = -p;
  std::size_t back = 0;
  for (std::size_t k = 1; k < learnt.size(); ++k) {
    const auto v = static_cast<std::size_t>(learnt[k] > 0 ? learnt[k] : -learnt[k]);
    seen_[v] = 0;
    if (level_[v] > back) {
      back = level_[v];
      std::swap(learnt[1], learnt[k]);
    }
  }
  return static_cast<int>(back);
}

template <typename Pick>
std::optional<Assignment> Solver::search(std::span<const int> assumptions, Pick pick) {
  trail_lim_.clear();
  undo_to(0);
  drop_learnt();
  cursor_ = 1;
  if (trivially_unsat_) return std::nullopt;

  auto root = [&](int lit) {
    if (lit == 0 || lit > f_.num_vars || -lit > f_.num_vars) throw std::invalid_argument("assumption literal out of range");
    const auto v = lit_value(lit);
    if (v == kFalse) return false;
    if (v == kUnset) assign(lit, kNoReason);
    return true;
  };
  for (const int u : units_)
    if (!root(u)) return std::nullopt;
  for (const int a : assumptions)
    if (!root(a)) return std::nullopt;
  if (propagate() != kNoReason) return std::nullopt;

  std::vector<int> learnt;
  for (;;) {
    const int lit = pick();
    if (lit == 0) break;
    ++decisions_;
    trail_lim_.push_back(trail_.size());
    assign(lit, kNoReason);
    for (std::size_t conflict = propagate(); conflict != kNoReason; conflict = propagate()) {
      ++conflicts_;
      if (trail_lim_.empty()) return std::nullopt;
      const int level = analyze(conflict, learnt);
      backjump(static_cast<std::size_t>(level));
      if (learnt.size() == 1) {
        assign(learnt[0], kNoReason);
      } else {
        const std::size_t idx = clauses_.size();
        clauses_.push_back(learnt);
        watches_[code(learnt[0])].push_back(idx);
        watches_[code(learnt[1])].push_back(idx);
        assign(learnt[0], idx);
      }
    }
  }

  Assignment out;
  out.values.resize(value_.size(), 0);
  for (std::size_t v = 1; v < value_.size(); ++v) out.values[v] = value_[v] == kTrue ? 1 : 0;
  assert(satisfies(f_, out));
  return out;
}

std::optional<Assignment> Solver::solve(std::span<const int> assumptions) {
  return search(assumptions, [this]() {
    while (cursor_ <= f_.num_vars && value_[static_cast<std::size_t>(cursor_)] != kUnset) ++cursor_;
    return cursor_ <= f_.num_vars ? cursor_ : 0;
  });
}

std::optional<Assignment> Solver::random_solution(std::span<const int> assumptions, Rng& rng) {
  return search(assumptions, [this, &rng]() {
    if (num_free_ == 0) return 0;
    const int v = kth_free(static_cast<int>(rng.below(static_cast<std::uint64_t>(num_free_))));
    return rng.coin() ? v : -v;
  });
}

bool sd_satisfiable(const DiagnosticSystem& ds) {
  const CnfFormula f = to_cnf(ds);
  Solver solver(f);
  return solver.solve({}).has_value();
}

}  // namespace safari
