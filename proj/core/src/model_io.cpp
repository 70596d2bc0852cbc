#include "safari/model_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "safari/error.hpp"
#include "safari/sat.hpp"

namespace safari {

namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' || c == ']' || c == '$';
}

class FormulaParser {
 public:
  FormulaParser(std::string_view text, SymbolTable& symbols, std::size_t line)
      : text_(text), symbols_(symbols), line_(line) {}

  Formula parse() {
    Formula f = parse_iff();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at column " + std::to_string(pos_ + 1), line_);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  Formula parse_iff() {
    Formula lhs = parse_implies();
    while (accept("<=>")) lhs = Formula::iff(lhs, parse_implies());
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (accept("=>")) return Formula::implies(lhs, parse_implies());
    return lhs;
  }

  Formula parse_or() {
    std::vector<Formula> parts{parse_and()};
    while (accept("|")) parts.push_back(parse_and());
    return parts.size() == 1 ? parts[0] : Formula::disj(std::move(parts));
  }

  Formula parse_and() {
    std::vector<Formula> parts{parse_unary()};
    while (accept("&")) parts.push_back(parse_unary());
    return parts.size() == 1 ? parts[0] : Formula::conj(std::move(parts));
  }

  Formula parse_unary() {
    skip_space();
    if (accept("!")) return Formula::negation(parse_unary());
    if (accept("(")) {
      Formula inner = parse_iff();
      if (!accept(")")) fail("expected ')'");
      return inner;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    if (start == pos_) fail(pos_ < text_.size() ? "unexpected '" + std::string(1, text_[pos_]) + "'"
                                                : std::string("unexpected end of formula"));
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "true") return Formula::constant(true);
    if (name == "false") return Formula::constant(false);
    return Formula::var(symbols_.intern(name));
  }

  std::string_view text_;
  SymbolTable& symbols_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

int precedence(Formula::Kind kind) {
  switch (kind) {
    case Formula::Kind::Iff:
      return 0;
    case Formula::Kind::Implies:
      return 1;
    case Formula::Kind::Or:
      return 2;
    case Formula::Kind::And:
      return 3;
    default:
      return 4;
  }
}

void print(const Formula& f, const SymbolTable& symbols, std::string& out);

// A child needs parentheses unless it binds strictly tighter than its parent.
// Same-kind n-ary children are parenthesized too, so nesting survives a
// round trip.
void print_child(const Formula& child, Formula::Kind parent, const SymbolTable& symbols, std::string& out) {
  const bool wrap = precedence(child.kind()) <= precedence(parent);
  if (wrap) out += '(';
  print(child, symbols, out);
  if (wrap) out += ')';
}

void print(const Formula& f, const SymbolTable& symbols, std::string& out) {
  using Kind = Formula::Kind;
  switch (f.kind()) {
    case Kind::Const:
      out += f.value() ? "true" : "false";
      return;
    case Kind::Var:
      out += symbols.name(f.var());
      return;
    case Kind::Not:
      out += '!';
      print_child(f.children()[0], Kind::Not, symbols, out);
      return;
    case Kind::And:
    case Kind::Or: {
      // A single-operand conjunction has no textual form of its own.
      if (f.children().size() == 1) {
        print(f.children()[0], symbols, out);
        return;
      }
      const char* sep = f.kind() == Kind::And ? " & " : " | ";
      bool first = true;
      for (const auto& c : f.children()) {
        if (!first) out += sep;
        first = false;
        print_child(c, f.kind(), symbols, out);
      }
      return;
    }
    case Kind::Implies:
    case Kind::Iff:
      print_child(f.children()[0], f.kind(), symbols, out);
      out += f.kind() == Kind::Implies ? " => " : " <=> ";
      print_child(f.children()[1], f.kind(), symbols, out);
      return;
  }
}

std::vector<std::string_view> split_words(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) words.push_back(text.substr(start, i - start));
  }
  return words;
}

std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Formula parse_formula(std::string_view text, SymbolTable& symbols, std::size_t line) {
  return FormulaParser(text, symbols, line).parse();
}

std::string print_formula(const Formula& f, const SymbolTable& symbols) {
  std::string out;
  print(f, symbols, out);
  return out;
}

DiagnosticSystem parse_model(std::string_view text) {
  SymbolTable symbols;
  std::vector<VarId> comps, obs, inputs, outputs;
  std::vector<std::pair<std::size_t, std::string_view>> sd_lines;
  bool saw_comps = false, saw_obs = false;

  // Header lines are interned before any formula so that component and
  // observable ids do not depend on where the sd lines sit in the file.
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::string_view line = strip_comment(raw);
    const auto words = split_words(line);
    if (words.empty()) continue;
    const std::string_view keyword = words[0];

    if (keyword == "sd") {
      sd_lines.emplace_back(line_no, line.substr(line.find("sd") + 2));
      continue;
    }

    std::vector<VarId>* target = nullptr;
    if (keyword == "comps") {
      if (saw_comps) throw ParseError("duplicate 'comps' line", line_no);
      saw_comps = true;
      target = &comps;
    } else if (keyword == "obs") {
      if (saw_obs) throw ParseError("duplicate 'obs' line", line_no);
      saw_obs = true;
      target = &obs;
    } else if (keyword == "inputs") {
      target = &inputs;
    } else if (keyword == "outputs") {
      target = &outputs;
    } else {
      throw ParseError("unknown keyword '" + std::string(keyword) + "'", line_no);
    }
    for (std::size_t i = 1; i < words.size(); ++i) {
      for (const char c : words[i])
        if (!is_name_char(c)) throw ParseError("invalid variable name '" + std::string(words[i]) + "'", line_no);
      if (words[i] == "true" || words[i] == "false")
        throw ParseError("'" + std::string(words[i]) + "' is reserved", line_no);
      target->push_back(symbols.intern(words[i]));
    }
  }

  if (!saw_comps) throw ParseError("missing 'comps' line");
  if (!saw_obs) throw ParseError("missing 'obs' line");
  if (sd_lines.empty()) throw ParseError("missing 'sd' line");

  std::vector<Formula> parts;
  for (const auto& [no, body] : sd_lines) parts.push_back(parse_formula(body, symbols, no));
  Formula sd = parts.size() == 1 ? parts[0] : Formula::conj(std::move(parts));
  DiagnosticSystem ds(std::move(symbols), std::move(sd), std::move(comps), std::move(obs), std::move(inputs),
                      std::move(outputs));
  if (!sd_satisfiable(ds)) throw InvalidModel("SD is unsatisfiable");
  return ds;
}

DiagnosticSystem load_model(const std::string& path) { return parse_model(read_file(path)); }

std::string print_model(const DiagnosticSystem& ds) {
  const auto& sym = ds.symbols();
  std::string out;
  auto list = [&](const char* keyword, std::span<const VarId> vars) {
    out += keyword;
    for (const VarId v : vars) {
      out += ' ';
      out += sym.name(v);
    }
    out += '\n';
  };
  list("comps", ds.comps());
  list("obs", ds.obs());
  if (!ds.inputs().empty()) list("inputs", ds.inputs());
  if (!ds.outputs().empty()) list("outputs", ds.outputs());

  // One conjunct per line; parse_model conjoins them back in order.
  const Formula& sd = ds.sd();
  if (sd.kind() == Formula::Kind::And) {
    for (const auto& c : sd.children()) out += "sd " + print_formula(c, sym) + "\n";
  } else {
    out += "sd " + print_formula(sd, sym) + "\n";
  }
  return out;
}

Observation parse_observation(const DiagnosticSystem& ds, std::string_view text) {
  std::vector<Literal> lits;
  for (auto word : split_words(text)) {
    bool positive = true;
    while (!word.empty() && word.front() == '!') {
      positive = !positive;
      word.remove_prefix(1);
    }
    const auto id = ds.symbols().find(word);
    if (!id) throw ParseError("unknown variable '" + std::string(word) + "' in observation");
    if (!ds.is_obs(*id)) throw ParseError("'" + std::string(word) + "' is not observable");
    lits.push_back({*id, positive});
  }
  try {
    return Observation(ds, std::move(lits));
  } catch (const InvalidModel& e) {
    throw ParseError(e.what());
  }
}

std::string print_observation(const DiagnosticSystem& ds, const Observation& alpha) {
  std::string out;
  for (const auto& lit : alpha.literals()) {
    if (!out.empty()) out += ' ';
    if (!lit.positive) out += '!';
    out += ds.symbols().name(lit.var);
  }
  return out;
}

std::string print_faults(const DiagnosticSystem& ds, const HealthAssignment& w) {
  std::string out = "{";
  bool first = true;
  for (const auto i : w.faults()) {
    if (!first) out += ", ";
    first = false;
    out += ds.symbols().name(ds.comps()[i]);
  }
  return out + "}";
}

std::string print_health(const DiagnosticSystem& ds, const HealthAssignment& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    if (!w.healthy(i)) out += '!';
    out += ds.symbols().name(ds.comps()[i]);
  }
  return out;
}

HealthAssignment parse_health(const DiagnosticSystem& ds, std::string_view text) {
  HealthAssignment w(ds.num_comps(), true);
  for (auto word : split_words(text)) {
    bool positive = true;
    if (!word.empty() && word.front() == '!') {
      positive = false;
      word.remove_prefix(1);
    }
    const auto id = ds.symbols().find(word);
    const auto idx = id ? ds.comp_index(*id) : std::nullopt;
    if (!idx) throw ParseError("'" + std::string(word) + "' is not a component");
    w.set_healthy(*idx, positive);
  }
  return w;
}

}  // namespace safari
