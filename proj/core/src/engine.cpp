#include "safari/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <stdexcept>
#include <thread>

#include "safari/error.hpp"

namespace safari {

// ---------------------------------------------------------------------------
// DiagnosisTrie

struct DiagnosisTrie::Node {
  bool terminal = false;
  // Sorted by key; keys grow along every root-to-leaf path.
  std::vector<std::pair<std::size_t, std::unique_ptr<Node>>> children;

  bool empty() const { return !terminal && children.empty(); }
};

namespace {

using Key = std::vector<std::size_t>;

template <typename NodeT>
bool has_subset(const NodeT& node, const Key& w, std::size_t pos) {
  if (node.terminal) return true;
  for (const auto& [k, child] : node.children) {
    const auto it = std::lower_bound(w.begin() + static_cast<std::ptrdiff_t>(pos), w.end(), k);
    if (it == w.end()) break;
    if (*it == k && has_subset(*child, w, static_cast<std::size_t>(it - w.begin()) + 1)) return true;
  }
  return false;
}

template <typename NodeT>
std::size_t count_terminals(const NodeT& node) {
  std::size_t n = node.terminal ? 1 : 0;
  for (const auto& [k, child] : node.children) n += count_terminals(*child);
  return n;
}

// Removes every stored set containing w[pos..]; returns how many.
template <typename NodeT>
std::size_t remove_supersets(NodeT& node, const Key& w, std::size_t pos) {
  if (pos == w.size()) {
    const std::size_t n = count_terminals(node);
    node.terminal = false;
    node.children.clear();
    return n;
  }
  std::size_t removed = 0;
  for (auto& [k, child] : node.children) {
    if (k < w[pos]) {
      removed += remove_supersets(*child, w, pos);
    } else if (k == w[pos]) {
      removed += remove_supersets(*child, w, pos + 1);
    } else {
      break;
    }
  }
  std::erase_if(node.children, [](const auto& c) { return c.second->empty(); });
  return removed;
}

template <typename NodeT>
void collect(const NodeT& node, Key& path, std::size_t n, std::vector<HealthAssignment>& out) {
  if (node.terminal) out.push_back(HealthAssignment::from_faults(n, path));
  for (const auto& [k, child] : node.children) {
    path.push_back(k);
    collect(*child, path, n, out);
    path.pop_back();
  }
}

}  // namespace

DiagnosisTrie::DiagnosisTrie(std::size_t num_comps) : num_comps_(num_comps), root_(std::make_unique<Node>()) {}
DiagnosisTrie::~DiagnosisTrie() = default;
DiagnosisTrie::DiagnosisTrie(DiagnosisTrie&&) noexcept = default;
DiagnosisTrie& DiagnosisTrie::operator=(DiagnosisTrie&&) noexcept = default;

bool DiagnosisTrie::is_subsumed(const HealthAssignment& w) const {
  if (w.size() != num_comps_) throw std::invalid_argument("health assignment size mismatch");
  return has_subset(*root_, w.faults(), 0);
}

bool DiagnosisTrie::insert(const HealthAssignment& w) {
  if (is_subsumed(w)) return false;
  const Key key = w.faults();
  size_ -= remove_supersets(*root_, key, 0);
  Node* node = root_.get();
  for (const std::size_t k : key) {
    auto& ch = node->children;
    auto it = std::lower_bound(ch.begin(), ch.end(), k, [](const auto& c, std::size_t v) { return c.first < v; });
    if (it == ch.end() || it->first != k) it = ch.emplace(it, k, std::make_unique<Node>());
    node = it->second.get();
  }
  node->terminal = true;
  ++size_;
  return true;
}

std::vector<HealthAssignment> DiagnosisTrie::elements() const {
  std::vector<HealthAssignment> out;
  Key path;
  collect(*root_, path, num_comps_, out);
  return out;
}

// ---------------------------------------------------------------------------
// Climbing

std::optional<std::size_t> pick_flip(const HealthAssignment& w, const ClimbState& state, Rng& rng) {
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!w.healthy(i) && !state.failed[i]) open.push_back(i);
  if (open.empty()) return std::nullopt;
  return open[rng.below(open.size())];
}

HealthAssignment improve_diagnosis(const HealthAssignment& w, const ClimbState& state, Rng& rng) {
  HealthAssignment out = w;
  if (const auto i = pick_flip(w, state, rng)) out.set_healthy(*i, true);
  return out;
}

ConsistencyChecker::ConsistencyChecker(const DiagnosticSystem& ds, const CnfFormula& cnf, const Observation& alpha)
    : ds_(ds), cnf_(cnf), alpha_(encode(cnf, alpha)), ltms_(cnf), solver_(cnf) {
  for (const int l : alpha_) ltms_.assume(l);
  base_ = ltms_.mark();
  healthy_mark_ = base_;
}

int ConsistencyChecker::health_lit(std::size_t i, bool healthy) const {
  const int v = cnf_.var_of(ds_.comps()[i]);
  return healthy ? v : -v;
}

bool ConsistencyChecker::decide(const HealthAssignment& w) {
  ++solver_calls_;
  scratch_ = alpha_;
  for (std::size_t i = 0; i < w.size(); ++i) scratch_.push_back(health_lit(i, w.healthy(i)));
  return solver_.solve(scratch_).has_value();
}

bool ConsistencyChecker::consistent(const HealthAssignment& w) {
  if (w.size() != ds_.num_comps()) throw std::invalid_argument("health assignment size mismatch");
  ++checks_;
  ltms_.retract_to(base_);
  healthy_mark_ = base_;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (ltms_.assume(health_lit(i, w.healthy(i))) == Ltms::Verdict::Contradiction) {
      ++bcp_refutations_;
      return false;
    }
  }
  return decide(w);
}

void ConsistencyChecker::begin_climb(const HealthAssignment& w) {
  if (w.size() != ds_.num_comps()) throw std::invalid_argument("health assignment size mismatch");
  current_ = w;
  ltms_.retract_to(base_);
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w.healthy(i)) ltms_.assume(health_lit(i, true));
  healthy_mark_ = ltms_.mark();
}

bool ConsistencyChecker::try_flip(std::size_t i) {
  if (i >= current_.size() || current_.healthy(i)) throw std::invalid_argument("try_flip needs a faulty component");
  ++checks_;
  ltms_.retract_to(healthy_mark_);
  ltms_.assume(health_lit(i, true));
  const Ltms::Mark flipped = ltms_.mark();
  for (std::size_t j = 0; j < current_.size() && !ltms_.contradiction(); ++j)
    if (j != i && !current_.healthy(j)) ltms_.assume(health_lit(j, false));
  if (ltms_.contradiction()) {
    ++bcp_refutations_;
    ltms_.retract_to(healthy_mark_);
    return false;
  }
  HealthAssignment candidate = current_;
  candidate.set_healthy(i, true);
  if (!decide(candidate)) {
    ltms_.retract_to(healthy_mark_);
    return false;
  }
  current_ = std::move(candidate);
  ltms_.retract_to(flipped);
  healthy_mark_ = flipped;
  return true;
}

bool consistent(const DiagnosticSystem& ds, const Observation& alpha, const HealthAssignment& w) {
  const CnfFormula cnf = to_cnf(ds);
  ConsistencyChecker checker(ds, cnf, alpha);
  return checker.consistent(w);
}

ClimbTrace climb(ConsistencyChecker& checker, const HealthAssignment& start, std::size_t retries, Rng& rng,
                 bool record_flips) {
  ClimbTrace trace;
  trace.start_cardinality = cardinality(start);
  const std::uint64_t checks_before = checker.checks();
  checker.begin_climb(start);

  HealthAssignment w = start;
  ClimbState state(w.size());
  std::size_t m = 0;
  while (m < retries) {
    const auto i = pick_flip(w, state, rng);
    if (!i) break;
    const bool ok = checker.try_flip(*i);
    if (record_flips) trace.attempts.push_back({*i, ok});
    if (ok) {
      w.set_healthy(*i, true);
      ++trace.steps;
      m = 0;
      state.reset();
    } else {
      state.failed[*i] = true;
      ++m;
    }
  }
  trace.final_diagnosis = std::move(w);
  trace.checks = checker.checks() - checks_before;
  return trace;
}

bool canonical_less(const HealthAssignment& a, const HealthAssignment& b) {
  const auto ca = cardinality(a), cb = cardinality(b);
  if (ca != cb) return ca < cb;
  const auto fa = a.faults(), fb = b.faults();
  return std::lexicographical_compare(fa.begin(), fa.end(), fb.begin(), fb.end());
}

// ---------------------------------------------------------------------------
// Driver

namespace {

ClimbTrace run_try(const DiagnosticSystem& ds, const CnfFormula& cnf, const Observation& alpha,
                   const SafariConfig& cfg, std::size_t retries, std::size_t index) {
  Rng rng = Rng::stream(cfg.seed, index);
  ConsistencyChecker checker(ds, cnf, alpha);
  const std::size_t n = ds.num_comps();

  HealthAssignment start(n, false);
  if (cfg.start == StartPoint::RandomDiagnosis) {
    const auto model = checker.solver().random_solution(checker.observation_literals(), rng);
    if (!model) throw ObservationInconsistent("observation is inconsistent with the system description");
    for (std::size_t i = 0; i < n; ++i) start.set_healthy(i, model->value(cnf.var_of(ds.comps()[i])));
  } else if (!checker.consistent(start)) {
    throw Error("the all-faulty assignment is not a diagnosis of this observation");
  }
  return climb(checker, start, retries, rng, cfg.record_flips);
}

}  // namespace

SafariResult safari(const DiagnosticSystem& ds, const Observation& alpha, const SafariConfig& cfg) {
  const CnfFormula cnf = to_cnf(ds);
  return safari(ds, cnf, alpha, cfg);
}

SafariResult safari(const DiagnosticSystem& ds, const CnfFormula& cnf, const Observation& alpha,
                    const SafariConfig& cfg) {
  if (cfg.tries == 0) throw std::invalid_argument("number of tries must be at least 1");
  {
    Solver solver(cnf);
    const auto lits = encode(cnf, alpha);
    if (!solver.solve(lits)) throw ObservationInconsistent("observation is inconsistent with the system description");
  }
  const std::size_t retries = cfg.optimal_mode ? ds.num_comps() : cfg.max_retries;

  std::vector<ClimbTrace> traces(cfg.tries);
  std::vector<std::exception_ptr> errors(cfg.tries);
  auto work = [&](std::size_t t) {
    try {
      traces[t] = run_try(ds, cnf, alpha, cfg, retries, t);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };

  const std::size_t jobs = std::min<std::size_t>(std::max(1u, cfg.jobs), cfg.tries);
  if (jobs == 1) {
    for (std::size_t t = 0; t < cfg.tries; ++t) work(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < cfg.tries; t = next++) work(t);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  SafariResult result{DiagnosisTrie(ds.num_comps()), {}, {}, 0};
  for (const auto& tr : traces) {
    result.trie.insert(tr.final_diagnosis);
    result.checks += tr.checks;
  }
  result.diagnoses = result.trie.elements();
  std::sort(result.diagnoses.begin(), result.diagnoses.end(), canonical_less);
  result.traces = std::move(traces);
  return result;
}

}  // namespace safari
