#include "safari/model.hpp"

#include <algorithm>
#include <stdexcept>

#include "safari/error.hpp"

namespace safari {

VarId SymbolTable::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<VarId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<VarId> SymbolTable::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------

Formula Formula::make(Kind kind, std::vector<Formula> children) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->children = std::move(children);
  return Formula(std::move(node));
}

Formula Formula::constant(bool value) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Const;
  node->value = value;
  return Formula(std::move(node));
}

Formula Formula::var(VarId id) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Var;
  node->var = id;
  return Formula(std::move(node));
}

Formula Formula::literal(Literal lit) {
  return lit.positive ? var(lit.var) : negation(var(lit.var));
}

Formula Formula::negation(Formula operand) { return make(Kind::Not, {std::move(operand)}); }

Formula Formula::conj(std::vector<Formula> operands) {
  if (operands.empty()) throw std::invalid_argument("conjunction needs at least one operand");
  return make(Kind::And, std::move(operands));
}

Formula Formula::disj(std::vector<Formula> operands) {
  if (operands.empty()) throw std::invalid_argument("disjunction needs at least one operand");
  return make(Kind::Or, std::move(operands));
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  return make(Kind::Implies, {std::move(lhs), std::move(rhs)});
}

Formula Formula::iff(Formula lhs, Formula rhs) { return make(Kind::Iff, {std::move(lhs), std::move(rhs)}); }

namespace {

void collect(const Formula& f, std::vector<VarId>& out) {
  if (f.kind() == Formula::Kind::Var) {
    out.push_back(f.var());
    return;
  }
  for (const auto& c : f.children()) collect(c, out);
}

}  // namespace

std::vector<VarId> Formula::variables() const {
  std::vector<VarId> out;
  collect(*this, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Formula::mentions(VarId id) const {
  if (kind() == Kind::Var) return var() == id;
  return std::any_of(children().begin(), children().end(), [id](const Formula& c) { return c.mentions(id); });
}

bool Formula::evaluate(std::span<const std::uint8_t> values) const {
  switch (kind()) {
    case Kind::Const:
      return value();
    case Kind::Var:
      return values[var()] != 0;
    case Kind::Not:
      return !children()[0].evaluate(values);
    case Kind::And:
      for (const auto& c : children())
        if (!c.evaluate(values)) return false;
      return true;
    case Kind::Or:
      for (const auto& c : children())
        if (c.evaluate(values)) return true;
      return false;
    case Kind::Implies:
      return !children()[0].evaluate(values) || children()[1].evaluate(values);
    case Kind::Iff:
      return children()[0].evaluate(values) == children()[1].evaluate(values);
  }
  return false;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == Formula::Kind::Const) return a.value() == b.value();
  if (a.kind() == Formula::Kind::Var) return a.var() == b.var();
  return std::equal(a.children().begin(), a.children().end(), b.children().begin(), b.children().end());
}

// ---------------------------------------------------------------------------

DiagnosticSystem::DiagnosticSystem(SymbolTable symbols, Formula sd, std::vector<VarId> comps,
                                   std::vector<VarId> obs, std::vector<VarId> inputs,
                                   std::vector<VarId> outputs)
    : symbols_(std::move(symbols)),
      sd_(std::move(sd)),
      comps_(std::move(comps)),
      obs_(std::move(obs)),
      inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      comp_index_(symbols_.size(), kNone),
      is_obs_(symbols_.size(), false) {
  const auto n = symbols_.size();
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    const VarId v = comps_[i];
    if (v >= n) throw InvalidModel("component variable id out of range");
    if (comp_index_[v] != kNone) throw InvalidModel("component '" + symbols_.name(v) + "' listed twice");
    comp_index_[v] = i;
  }
  for (const VarId v : obs_) {
    if (v >= n) throw InvalidModel("observable variable id out of range");
    if (is_obs_[v]) throw InvalidModel("observable '" + symbols_.name(v) + "' listed twice");
    if (comp_index_[v] != kNone)
      throw InvalidModel("variable '" + symbols_.name(v) + "' is both a component and an observable");
    is_obs_[v] = true;
  }
  std::vector<bool> seen(n, false);
  for (const auto* part : {&inputs_, &outputs_}) {
    for (const VarId v : *part) {
      if (v >= n || !is_obs_[v]) throw InvalidModel("circuit inputs and outputs must be observables");
      if (seen[v]) throw InvalidModel("variable '" + symbols_.name(v) + "' is both an input and an output");
      seen[v] = true;
    }
  }
  for (const VarId v : sd_.variables())
    if (v >= n) throw InvalidModel("SD mentions an unknown variable id");
}

std::optional<std::size_t> DiagnosticSystem::comp_index(VarId v) const {
  if (!is_comp(v)) return std::nullopt;
  return comp_index_[v];
}

// ---------------------------------------------------------------------------

HealthAssignment HealthAssignment::from_faults(std::size_t num_comps, std::span<const std::size_t> faults) {
  HealthAssignment w(num_comps, true);
  for (const auto i : faults) {
    if (i >= num_comps) throw std::out_of_range("fault index out of range");
    w.set_healthy(i, false);
  }
  return w;
}

std::vector<std::size_t> HealthAssignment::faults() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < healthy_.size(); ++i)
    if (!healthy_[i]) out.push_back(i);
  return out;
}

std::size_t cardinality(const HealthAssignment& w) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < w.size(); ++i) n += w.healthy(i) ? 0 : 1;
  return n;
}

bool subsumes(const HealthAssignment& a, const HealthAssignment& b) {
  if (a.size() != b.size()) throw std::invalid_argument("health assignments over different component sets");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a.healthy(i) && b.healthy(i)) return false;
  return true;
}

Observation::Observation(const DiagnosticSystem& ds, std::vector<Literal> literals)
    : literals_(std::move(literals)) {
  std::vector<bool> seen(ds.num_vars(), false);
  for (const auto& lit : literals_) {
    if (!ds.is_obs(lit.var)) {
      const std::string name = lit.var < ds.num_vars() ? ds.symbols().name(lit.var) : "?";
      throw InvalidModel("observation assigns non-observable variable '" + name + "'");
    }
    if (seen[lit.var]) throw InvalidModel("observation assigns '" + ds.symbols().name(lit.var) + "' twice");
    seen[lit.var] = true;
  }
}

std::vector<Literal> health_literals(const DiagnosticSystem& ds, const HealthAssignment& w) {
  if (w.size() != ds.num_comps()) throw std::invalid_argument("health assignment size mismatch");
  std::vector<Literal> out;
  out.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out.push_back({ds.comps()[i], w.healthy(i)});
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(FaultModelKind kind) {
  switch (kind) {
    case FaultModelKind::Weak:
      return "weak";
    case FaultModelKind::StuckAt:
      return "stuck-at";
    case FaultModelKind::Strong:
      return "strong";
    case FaultModelKind::Unclassified:
      return "unclassified";
  }
  return "unclassified";
}

namespace {

void flatten_conjuncts(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == Formula::Kind::And) {
    for (const auto& c : f.children()) flatten_conjuncts(c, out);
  } else {
    out.push_back(f);
  }
}

bool free_of_health(const DiagnosticSystem& ds, const Formula& f) {
  for (const VarId v : f.variables())
    if (ds.is_comp(v)) return false;
  return true;
}

// (h => F) gives {index, positive guard}; (!h => G) gives {index, negative guard}.
struct Guard {
  std::size_t comp;
  bool healthy;
};

std::optional<Guard> guard_of(const DiagnosticSystem& ds, const Formula& f) {
  if (f.kind() != Formula::Kind::Implies) return std::nullopt;
  const Formula& lhs = f.children()[0];
  bool healthy = true;
  const Formula* atom = &lhs;
  if (lhs.kind() == Formula::Kind::Not) {
    healthy = false;
    atom = &lhs.children()[0];
  }
  if (atom->kind() != Formula::Kind::Var) return std::nullopt;
  const auto idx = ds.comp_index(atom->var());
  if (!idx) return std::nullopt;
  return Guard{*idx, healthy};
}

std::optional<Literal> as_literal(const Formula& f) {
  if (f.kind() == Formula::Kind::Var) return Literal{f.var(), true};
  if (f.kind() == Formula::Kind::Not && f.children()[0].kind() == Formula::Kind::Var)
    return Literal{f.children()[0].var(), false};
  return std::nullopt;
}

}  // namespace

FaultModelClass classify(const DiagnosticSystem& ds) {
  const std::size_t n = ds.num_comps();
  std::vector<Formula> conjuncts;
  flatten_conjuncts(ds.sd(), conjuncts);

  std::vector<std::vector<Formula>> nominal(n);
  std::vector<std::vector<Formula>> faulty(n);
  for (const auto& c : conjuncts) {
    if (c.kind() == Formula::Kind::Const && c.value()) continue;
    const auto guard = guard_of(ds, c);
    if (!guard || !free_of_health(ds, c.children()[1])) return {};
    (guard->healthy ? nominal : faulty)[guard->comp].push_back(c.children()[1]);
  }

  FaultModelClass result;
  const bool any_fault = std::any_of(faulty.begin(), faulty.end(), [](const auto& v) { return !v.empty(); });
  if (!any_fault) {
    result.kind = FaultModelKind::Weak;
    return result;
  }

  result.fault_behavior.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (faulty[i].empty()) continue;
    result.fault_behavior[i] = faulty[i].size() == 1 ? faulty[i][0] : Formula::conj(faulty[i]);
  }

  bool stuck_at = true;
  result.stuck_at.resize(n);
  for (std::size_t i = 0; i < n && stuck_at; ++i) {
    if (faulty[i].size() != 1) {
      stuck_at = false;
      break;
    }
    const auto lit = as_literal(faulty[i][0]);
    const bool in_nominal = lit && std::any_of(nominal[i].begin(), nominal[i].end(),
                                               [&](const Formula& f) { return f.mentions(lit->var); });
    if (!in_nominal) {
      stuck_at = false;
      break;
    }
    result.stuck_at[i] = lit;
  }
  if (stuck_at) {
    result.kind = FaultModelKind::StuckAt;
  } else {
    result.kind = FaultModelKind::Strong;
    result.stuck_at.clear();
  }
  return result;
}

}  // namespace safari
