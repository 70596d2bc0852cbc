#include "safari/cnf.hpp"

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "safari/error.hpp"

namespace safari {

namespace {

using Clause = CnfFormula::Clause;
using Clauses = std::vector<Clause>;

bool lit_less(int a, int b) {
  const int va = std::abs(a), vb = std::abs(b);
  return va != vb ? va < vb : a < b;
}

// Sorts and dedupes in place; false when the clause is a tautology.
bool normalize(Clause& c) {
  std::sort(c.begin(), c.end(), lit_less);
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i] == -c[i - 1]) return false;
  return true;
}

bool subset_of(const Clause& a, const Clause& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end(), lit_less);
}

// Drops duplicates and clauses subsumed by another clause of the same set.
Clauses simplify(Clauses in) {
  std::sort(in.begin(), in.end(), [](const Clause& a, const Clause& b) {
    return a.size() != b.size() ? a.size() < b.size() : std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), lit_less);
  });
  in.erase(std::unique(in.begin(), in.end()), in.end());
  Clauses out;
  for (auto& c : in) {
    const bool subsumed = std::any_of(out.begin(), out.end(), [&](const Clause& k) { return subset_of(k, c); });
    if (!subsumed) out.push_back(std::move(c));
  }
  return out;
}

Clauses concat(Clauses a, const Clauses& b) {
  a.insert(a.end(), b.begin(), b.end());
  return simplify(std::move(a));
}

// Clauses of (A | B) from clauses of A and of B.
Clauses cross(const Clauses& a, const Clauses& b) {
  Clauses out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      Clause c = x;
      c.insert(c.end(), y.begin(), y.end());
      if (normalize(c)) out.push_back(std::move(c));
    }
  }
  return simplify(std::move(out));
}

// Clauses equivalent to f (positive) or to !f. An empty Clauses is "true";
// a set holding the empty clause is "false".
Clauses distribute(const Formula& f, bool positive, const CnfFormula& cnf) {
  using Kind = Formula::Kind;
  switch (f.kind()) {
    case Kind::Const:
      return f.value() == positive ? Clauses{} : Clauses{Clause{}};
    case Kind::Var:
      return {Clause{positive ? cnf.var_of(f.var()) : -cnf.var_of(f.var())}};
    case Kind::Not:
      return distribute(f.children()[0], !positive, cnf);
    case Kind::And:
    case Kind::Or: {
      const bool conjunctive = (f.kind() == Kind::And) == positive;
      Clauses acc = conjunctive ? Clauses{} : Clauses{Clause{}};
      for (const auto& c : f.children()) {
        const Clauses part = distribute(c, positive, cnf);
        acc = conjunctive ? concat(std::move(acc), part) : cross(acc, part);
      }
      return acc;
    }
    case Kind::Implies: {
      const auto& a = f.children()[0];
      const auto& b = f.children()[1];
      if (positive) return cross(distribute(a, false, cnf), distribute(b, true, cnf));
      return concat(distribute(a, true, cnf), distribute(b, false, cnf));
    }
    case Kind::Iff: {
      const auto& a = f.children()[0];
      const auto& b = f.children()[1];
      const Clauses a_pos = distribute(a, true, cnf), a_neg = distribute(a, false, cnf);
      const Clauses b_pos = distribute(b, true, cnf), b_neg = distribute(b, false, cnf);
      if (positive) return concat(cross(a_neg, b_pos), cross(a_pos, b_neg));
      return concat(cross(a_pos, b_pos), cross(a_neg, b_neg));
    }
  }
  return {};
}

class Builder {
 public:
  explicit Builder(CnfFormula& cnf) : cnf_(cnf) {}

  void add(Clause c) {
    if (!normalize(c)) return;
    if (c.empty()) {
      // Keep the no-empty-clause invariant: a fresh x with (x) and (!x).
      const int x = fresh();
      add({x});
      add({-x});
      return;
    }
    if (seen_.insert(c).second) cnf_.clauses.push_back(std::move(c));
  }

  void add_distributed(const Formula& f) {
    for (auto& c : distribute(f, true, cnf_)) add(std::move(c));
  }

  // Asserts f with definitional auxiliaries for inner connectives.
  void add_tseitin(const Formula& f) {
    using Kind = Formula::Kind;
    switch (f.kind()) {
      case Kind::And:
        for (const auto& c : f.children()) add_tseitin(c);
        return;
      case Kind::Or: {
        Clause c;
        for (const auto& x : f.children()) c.push_back(define(x));
        add(std::move(c));
        return;
      }
      case Kind::Implies:
        add({-define(f.children()[0]), define(f.children()[1])});
        return;
      default:
        add({define(f)});
        return;
    }
  }

 private:
  int fresh() {
    ++cnf_.num_vars;
    cnf_.names.emplace_back();
    return cnf_.num_vars;
  }

  // Literal equivalent to f.
  int define(const Formula& f) {
    using Kind = Formula::Kind;
    switch (f.kind()) {
      case Kind::Const: {
        if (true_lit_ == 0) {
          true_lit_ = fresh();
          add({true_lit_});
        }
        return f.value() ? true_lit_ : -true_lit_;
      }
      case Kind::Var:
        return cnf_.var_of(f.var());
      case Kind::Not:
        return -define(f.children()[0]);
      case Kind::And:
      case Kind::Or: {
        std::vector<int> lits;
        for (const auto& c : f.children()) lits.push_back(define(c));
        if (lits.size() == 1) return lits[0];
        const int a = fresh();
        // And: a => l_i, (l_1 & ... & l_n) => a. Or is the dual.
        const int s = f.kind() == Kind::And ? 1 : -1;
        Clause big{s * a};
        for (const int l : lits) {
          add({-s * a, s * l});
          big.push_back(-s * l);
        }
        add(std::move(big));
        return a;
      }
      case Kind::Implies: {
        const int x = define(f.children()[0]);
        const int y = define(f.children()[1]);
        const int a = fresh();
        add({-a, -x, y});
        add({a, x});
        add({a, -y});
        return a;
      }
      case Kind::Iff: {
        const int x = define(f.children()[0]);
        const int y = define(f.children()[1]);
        const int a = fresh();
        add({-a, -x, y});
        add({-a, x, -y});
        add({a, x, y});
        add({a, -x, -y});
        return a;
      }
    }
    return 0;
  }

  CnfFormula& cnf_;
  std::set<Clause> seen_;
  int true_lit_ = 0;
};

void flatten(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == Formula::Kind::And) {
    for (const auto& c : f.children()) flatten(c, out);
  } else {
    out.push_back(f);
  }
}

}  // namespace

CnfFormula to_cnf(const Formula& sd, const SymbolTable& symbols) {
  CnfFormula cnf;
  cnf.num_original = static_cast<int>(symbols.size());
  cnf.num_vars = cnf.num_original;
  cnf.names.reserve(symbols.size() + 1);
  cnf.names.emplace_back();
  for (VarId v = 0; v < symbols.size(); ++v) cnf.names.push_back(symbols.name(v));

  std::vector<Formula> parts;
  flatten(sd, parts);
  Builder builder(cnf);
  for (const auto& part : parts) {
    if (part.variables().size() <= kDistributionVarLimit) {
      builder.add_distributed(part);
    } else {
      builder.add_tseitin(part);
    }
  }
  return cnf;
}

CnfFormula to_cnf(const DiagnosticSystem& ds) { return to_cnf(ds.sd(), ds.symbols()); }

std::vector<int> encode(const CnfFormula& f, std::span<const Literal> lits) {
  std::vector<int> out;
  out.reserve(lits.size());
  for (const auto& lit : lits) out.push_back(f.literal(lit));
  return out;
}

std::vector<int> encode(const CnfFormula& f, const Observation& alpha) { return encode(f, alpha.literals()); }

std::vector<int> encode(const CnfFormula& f, const DiagnosticSystem& ds, const HealthAssignment& w) {
  return encode(f, health_literals(ds, w));
}

void export_dimacs(const CnfFormula& f, std::ostream& out, bool with_names) {
  if (with_names) {
    for (int v = 1; v <= f.num_original; ++v) out << "c " << v << ' ' << f.names[v] << '\n';
  }
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const auto& c : f.clauses) {
    for (const int l : c) out << l << ' ';
    out << "0\n";
  }
  if (!out) throw Error("failed to write DIMACS output");
}

CnfFormula parse_dimacs(std::istream& in) {
  CnfFormula f;
  std::vector<std::pair<int, std::string>> named;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t declared_clauses = 0;
  Clause current;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c") {
      int id = 0;
      std::string name;
      if (ls >> id >> name) named.emplace_back(id, name);
      continue;
    }
    if (tok == "p") {
      std::string fmt;
      long vars = -1, clauses = -1;
      if (have_header || !(ls >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 0 || clauses < 0)
        throw ParseError("bad problem line", line_no);
      have_header = true;
      f.num_vars = static_cast<int>(vars);
      declared_clauses = static_cast<std::size_t>(clauses);
      continue;
    }
    if (!have_header) throw ParseError("clause before problem line", line_no);
    std::istringstream cs(line);
    long lit = 0;
    while (cs >> lit) {
      if (lit == 0) {
        if (current.empty()) throw ParseError("empty clause", line_no);
        if (!normalize(current)) throw ParseError("clause contains complementary literals", line_no);
        f.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (std::labs(lit) > f.num_vars) throw ParseError("literal out of range", line_no);
      current.push_back(static_cast<int>(lit));
    }
    if (!cs.eof()) throw ParseError("bad literal", line_no);
  }
  if (!have_header) throw ParseError("missing problem line");
  if (!current.empty()) throw ParseError("unterminated clause");
  if (f.clauses.size() != declared_clauses) throw ParseError("clause count does not match header");

  f.names.assign(static_cast<std::size_t>(f.num_vars) + 1, std::string());
  if (named.empty()) {
    f.num_original = f.num_vars;
  } else {
    for (const auto& [id, name] : named) {
      if (id < 1 || id > f.num_vars) throw ParseError("name comment for unknown variable");
      f.names[id] = name;
      f.num_original = std::max(f.num_original, id);
    }
  }
  return f;
}

}  // namespace safari
