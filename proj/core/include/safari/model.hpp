#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace safari {

using VarId = std::uint32_t;

struct Literal {
  VarId var = 0;
  bool positive = true;

  Literal negated() const { return {var, !positive}; }
  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Interns variable names to dense ids in order of first appearance.
class SymbolTable {
 public:
  VarId intern(std::string_view name);
  std::optional<VarId> find(std::string_view name) const;
  const std::string& name(VarId id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, VarId> ids_;
};

/// Immutable propositional formula. Copies share structure; equality is
/// structural. And/Or are n-ary with at least one child, Implies/Iff binary.
class Formula {
 public:
  enum class Kind : std::uint8_t { Const, Var, Not, And, Or, Implies, Iff };

  static Formula constant(bool value);
  static Formula var(VarId id);
  static Formula negation(Formula operand);
  static Formula conj(std::vector<Formula> operands);
  static Formula disj(std::vector<Formula> operands);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula iff(Formula lhs, Formula rhs);
  static Formula literal(Literal lit);

  Kind kind() const { return node_->kind; }
  bool value() const { return node_->value; }
  VarId var() const { return node_->var; }
  std::span<const Formula> children() const { return node_->children; }

  /// Sorted, duplicate-free variables occurring in the formula.
  std::vector<VarId> variables() const;
  bool mentions(VarId id) const;

  /// `values[v]` is the truth value of variable v.
  bool evaluate(std::span<const std::uint8_t> values) const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node {
    Kind kind = Kind::Const;
    bool value = false;
    VarId var = 0;
    std::vector<Formula> children;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Kind kind, std::vector<Formula> children);

  std::shared_ptr<const Node> node_;
};

/// The triple <SD, COMPS, OBS>, optionally with OBS split into circuit inputs
/// and outputs. Component order is the canonical order used by every health
/// vector, trie key and listing.
class DiagnosticSystem {
 public:
  DiagnosticSystem(SymbolTable symbols, Formula sd, std::vector<VarId> comps, std::vector<VarId> obs,
                   std::vector<VarId> inputs = {}, std::vector<VarId> outputs = {});

  const SymbolTable& symbols() const { return symbols_; }
  const Formula& sd() const { return sd_; }
  std::span<const VarId> comps() const { return comps_; }
  std::span<const VarId> obs() const { return obs_; }
  std::span<const VarId> inputs() const { return inputs_; }
  std::span<const VarId> outputs() const { return outputs_; }
  std::size_t num_comps() const { return comps_.size(); }
  std::size_t num_vars() const { return symbols_.size(); }

  bool is_comp(VarId v) const { return v < comp_index_.size() && comp_index_[v] != kNone; }
  bool is_obs(VarId v) const { return v < is_obs_.size() && is_obs_[v]; }
  /// Position of a health variable in the canonical component order.
  std::optional<std::size_t> comp_index(VarId v) const;
  bool has_io_partition() const { return !inputs_.empty() || !outputs_.empty(); }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  SymbolTable symbols_;
  Formula sd_;
  std::vector<VarId> comps_;
  std::vector<VarId> obs_;
  std::vector<VarId> inputs_;
  std::vector<VarId> outputs_;
  std::vector<std::size_t> comp_index_;
  std::vector<bool> is_obs_;
};

/// Full sign vector over COMPS in canonical order; true is the healthy literal.
class HealthAssignment {
 public:
  HealthAssignment() = default;
  explicit HealthAssignment(std::size_t num_comps, bool healthy = true) : healthy_(num_comps, healthy) {}
  static HealthAssignment from_faults(std::size_t num_comps, std::span<const std::size_t> faults);

  std::size_t size() const { return healthy_.size(); }
  bool healthy(std::size_t i) const { return healthy_[i]; }
  void set_healthy(std::size_t i, bool value) { healthy_[i] = value; }

  /// Component indices of the negative literals, ascending.
  std::vector<std::size_t> faults() const;

  friend bool operator==(const HealthAssignment&, const HealthAssignment&) = default;

 private:
  std::vector<bool> healthy_;
};

/// Number of negative literals.
std::size_t cardinality(const HealthAssignment& w);

/// True iff the fault set of `a` is contained in the fault set of `b`.
/// Throws std::invalid_argument when the component counts differ.
bool subsumes(const HealthAssignment& a, const HealthAssignment& b);

/// Conjunction of literals over OBS; each variable at most once.
class Observation {
 public:
  Observation() = default;
  Observation(const DiagnosticSystem& ds, std::vector<Literal> literals);

  std::span<const Literal> literals() const { return literals_; }
  bool empty() const { return literals_.empty(); }
  std::size_t size() const { return literals_.size(); }

  friend bool operator==(const Observation&, const Observation&) = default;

 private:
  std::vector<Literal> literals_;
};

/// Health literals of `w` as model literals, in component order.
std::vector<Literal> health_literals(const DiagnosticSystem& ds, const HealthAssignment& w);

enum class FaultModelKind { Weak, StuckAt, Strong, Unclassified };

std::string_view to_string(FaultModelKind kind);

/// Syntactic fault-model class. For StuckAt systems `stuck_at[i]` is the
/// literal pinned by component i when faulty; for Strong and StuckAt systems
/// `fault_behavior[i]` is the conjunction of its fault formulas, if any.
struct FaultModelClass {
  FaultModelKind kind = FaultModelKind::Unclassified;
  std::vector<std::optional<Literal>> stuck_at;
  std::vector<std::optional<Formula>> fault_behavior;
};

/// Recognizes SD as a conjunction of (h => F) and (!h => G) parts with no
/// health variable inside F or G. Weak when there are no fault parts, StuckAt
/// when every component has exactly one fault part that is a literal of its
/// nominal formula, Strong otherwise; anything else is Unclassified.
FaultModelClass classify(const DiagnosticSystem& ds);

}  // namespace safari
