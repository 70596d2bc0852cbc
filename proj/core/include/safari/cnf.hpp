#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "safari/model.hpp"

namespace safari {

/// Clausal form of a system description. Literals are DIMACS-signed: variable
/// v is written v or -v with v in [1, num_vars].
///
/// Original variable id `x` maps to CNF variable x + 1; auxiliary (definitional)
/// variables follow the originals. Clauses are non-empty, free of
/// complementary pairs, sorted by variable and pairwise distinct.
struct CnfFormula {
  using Clause = std::vector<int>;

  std::vector<Clause> clauses;
  int num_vars = 0;
  int num_original = 0;
  /// Variable names indexed by CNF id (index 0 unused); empty for auxiliaries.
  std::vector<std::string> names;

  int var_of(VarId id) const { return static_cast<int>(id) + 1; }
  bool is_aux(int var) const { return var > num_original; }
  int literal(Literal lit) const { return lit.positive ? var_of(lit.var) : -var_of(lit.var); }
};

/// Subformulas over at most this many variables are converted by distribution;
/// larger ones get definitional auxiliaries.
inline constexpr std::size_t kDistributionVarLimit = 8;

/// Converts each top-level conjunct of `sd` independently and concatenates the
/// results. For every assignment to the original variables, `sd` is satisfied
/// iff the CNF is satisfiable under it.
CnfFormula to_cnf(const Formula& sd, const SymbolTable& symbols);
CnfFormula to_cnf(const DiagnosticSystem& ds);

std::vector<int> encode(const CnfFormula& f, std::span<const Literal> lits);
std::vector<int> encode(const CnfFormula& f, const Observation& alpha);
std::vector<int> encode(const CnfFormula& f, const DiagnosticSystem& ds, const HealthAssignment& w);

/// Writes `p cnf V C` and one zero-terminated clause per line. With
/// `with_names`, `c <id> <name>` comment lines for the original variables
/// precede the header.
void export_dimacs(const CnfFormula& f, std::ostream& out, bool with_names = false);

/// Reads DIMACS CNF. Name comments written by export_dimacs are picked up;
/// every variable of a plain file counts as original. Throws ParseError.
CnfFormula parse_dimacs(std::istream& in);

}  // namespace safari
