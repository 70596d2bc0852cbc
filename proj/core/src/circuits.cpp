#include "safari/circuits.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "safari/bcp.hpp"
#include "safari/cnf.hpp"
#include "safari/error.hpp"
#include "safari/model_io.hpp"
#include "safari/rng.hpp"
#include "safari/sat.hpp"

namespace safari {

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::And:
      return "AND";
    case GateKind::Or:
      return "OR";
    case GateKind::Nand:
      return "NAND";
    case GateKind::Nor:
      return "NOR";
    case GateKind::Xor:
      return "XOR";
    case GateKind::Xnor:
      return "XNOR";
    case GateKind::Not:
      return "NOT";
    case GateKind::Buf:
      return "BUF";
  }
  return "BUF";
}

std::optional<GateKind> parse_gate_kind(std::string_view name) {
  std::string up(name);
  for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "AND") return GateKind::And;
  if (up == "OR") return GateKind::Or;
  if (up == "NAND") return GateKind::Nand;
  if (up == "NOR") return GateKind::Nor;
  if (up == "XOR") return GateKind::Xor;
  if (up == "XNOR") return GateKind::Xnor;
  if (up == "NOT" || up == "INV") return GateKind::Not;
  if (up == "BUF" || up == "BUFF") return GateKind::Buf;
  return std::nullopt;
}

std::string_view to_string(FaultMode mode) {
  switch (mode) {
    case FaultMode::Weak:
      return "weak";
    case FaultMode::StuckAt0:
      return "sa0";
    case FaultMode::StuckAt1:
      return "sa1";
  }
  return "weak";
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Weak:
      return "weak";
    case Variant::Strong:
      return "strong";
    case Variant::StuckAt0:
      return "sa0";
    case Variant::StuckAt1:
      return "sa1";
  }
  return "weak";
}

std::optional<Variant> parse_variant(std::string_view name) {
  if (name == "weak") return Variant::Weak;
  if (name == "strong") return Variant::Strong;
  if (name == "sa0") return Variant::StuckAt0;
  if (name == "sa1") return Variant::StuckAt1;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Circuit

namespace {

bool single_input(GateKind k) { return k == GateKind::Not || k == GateKind::Buf; }

// Topological order of the gates, or the index of a wire on a cycle.
struct TopoResult {
  std::vector<std::size_t> order;
  std::optional<std::size_t> cycle_wire;
};

TopoResult topo_sort(std::size_t num_wires, const std::vector<Gate>& gates) {
  std::vector<std::size_t> driver(num_wires, static_cast<std::size_t>(-1));
  for (std::size_t g = 0; g < gates.size(); ++g) driver[gates[g].output] = g;
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<std::uint8_t> state(gates.size(), 0);
  TopoResult r;
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t root = 0; root < gates.size(); ++root) {
    if (state[root]) continue;
    stack.emplace_back(root, 0);
    state[root] = 1;
    while (!stack.empty()) {
      auto& [g, next] = stack.back();
      if (next < gates[g].inputs.size()) {
        const std::size_t w = gates[g].inputs[next++];
        const std::size_t d = driver[w];
        if (d == static_cast<std::size_t>(-1) || state[d] == 2) continue;
        if (state[d] == 1) {
          r.cycle_wire = w;
          return r;
        }
        state[d] = 1;
        stack.emplace_back(d, 0);
      } else {
        state[g] = 2;
        r.order.push_back(g);
        stack.pop_back();
      }
    }
  }
  return r;
}

}  // namespace

Circuit::Circuit(std::vector<std::string> wires, std::vector<Gate> gates, std::vector<std::size_t> inputs,
                 std::vector<std::size_t> outputs)
    : wires_(std::move(wires)), gates_(std::move(gates)), inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
  const std::size_t n = wires_.size();
  std::vector<int> drivers(n, 0);
  for (const auto w : inputs_) {
    if (w >= n) throw InvalidModel("primary input out of range");
    ++drivers[w];
  }
  std::unordered_set<std::string> healths;
  std::unordered_set<std::string> wire_names(wires_.begin(), wires_.end());
  if (wire_names.size() != n) throw InvalidModel("duplicate wire name");
  for (const auto& g : gates_) {
    if (g.output >= n) throw InvalidModel("gate output out of range");
    ++drivers[g.output];
    if (g.inputs.empty() || (single_input(g.kind) && g.inputs.size() != 1))
      throw InvalidModel("gate '" + wires_[g.output] + "' has the wrong number of inputs");
    for (const auto w : g.inputs)
      if (w >= n) throw InvalidModel("gate input out of range");
    if (g.health.empty() || !healths.insert(g.health).second || wire_names.count(g.health))
      throw InvalidModel("health variable '" + g.health + "' is empty, repeated or a wire name");
  }
  for (std::size_t w = 0; w < n; ++w) {
    if (drivers[w] == 0) throw InvalidModel("wire '" + wires_[w] + "' has no driver");
    if (drivers[w] > 1) throw InvalidModel("wire '" + wires_[w] + "' has more than one driver");
  }
  for (const auto w : outputs_)
    if (w >= n) throw InvalidModel("primary output out of range");
  auto topo = topo_sort(n, gates_);
  if (topo.cycle_wire) throw InvalidModel("combinational cycle through wire '" + wires_[*topo.cycle_wire] + "'");
  topo_ = std::move(topo.order);
}

std::optional<std::size_t> Circuit::find_wire(std::string_view name) const {
  const auto it = std::find(wires_.begin(), wires_.end(), name);
  if (it == wires_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - wires_.begin());
}

// ---------------------------------------------------------------------------
// Netlist text

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' || c == ']' || c == '$';
  });
}

// "KEYWORD(args)" -> args, or nullopt when the shape does not match.
std::optional<std::string_view> call_args(std::string_view s, std::string_view& head) {
  const auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')') return std::nullopt;
  head = trim(s.substr(0, open));
  return s.substr(open + 1, s.size() - open - 2);
}

}  // namespace

Circuit parse_netlist(std::string_view text) {
  std::vector<std::string> wires;
  std::unordered_map<std::string, std::size_t> ids;
  std::vector<std::size_t> first_use;
  std::vector<std::size_t> driver_line;
  std::vector<Gate> gates;
  std::vector<std::size_t> gate_line;
  std::vector<std::size_t> inputs, outputs;

  std::size_t line_no = 0;
  auto wire = [&](std::string_view name) {
    if (!valid_name(name)) throw ParseError("invalid wire name '" + std::string(name) + "'", line_no);
    const auto [it, fresh] = ids.emplace(std::string(name), wires.size());
    if (fresh) {
      wires.emplace_back(name);
      first_use.push_back(line_no);
      driver_line.push_back(0);
    }
    return it->second;
  };
  auto drive = [&](std::size_t w) {
    if (driver_line[w] != 0) throw ParseError("wire '" + wires[w] + "' is driven more than once", line_no);
    driver_line[w] = line_no;
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      std::string_view head;
      const auto arg = call_args(line, head);
      if (!arg) throw ParseError("expected INPUT(...), OUTPUT(...) or a gate", line_no);
      std::string up(head);
      for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      const std::size_t w = wire(trim(*arg));
      if (up == "INPUT") {
        drive(w);
        inputs.push_back(w);
      } else if (up == "OUTPUT") {
        if (std::find(outputs.begin(), outputs.end(), w) != outputs.end())
          throw ParseError("output '" + wires[w] + "' declared twice", line_no);
        outputs.push_back(w);
      } else {
        throw ParseError("unknown declaration '" + std::string(head) + "'", line_no);
      }
      continue;
    }

    std::string_view lhs = trim(line.substr(0, eq));
    const std::string_view rhs = trim(line.substr(eq + 1));
    std::string label;
    if (const auto colon = lhs.find(':'); colon != std::string_view::npos) {
      label = std::string(trim(lhs.substr(0, colon)));
      lhs = trim(lhs.substr(colon + 1));
      if (!valid_name(label)) throw ParseError("invalid gate label '" + label + "'", line_no);
    }
    std::string_view head;
    const auto args = call_args(rhs, head);
    if (!args) throw ParseError("expected GATE(inputs) after '='", line_no);
    const auto kind = parse_gate_kind(head);
    if (!kind) throw ParseError("unknown gate kind '" + std::string(head) + "'", line_no);

    Gate g;
    g.kind = *kind;
    g.output = wire(lhs);
    drive(g.output);
    std::string_view rest = *args;
    while (true) {
      const auto comma = rest.find(',');
      g.inputs.push_back(wire(trim(rest.substr(0, comma))));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (single_input(g.kind) && g.inputs.size() != 1)
      throw ParseError(std::string(to_string(g.kind)) + " takes exactly one input", line_no);
    g.health = label.empty() ? "h_" + wires[g.output] : label;
    gates.push_back(std::move(g));
    gate_line.push_back(line_no);
  }

  for (std::size_t w = 0; w < wires.size(); ++w)
    if (driver_line[w] == 0) throw ParseError("wire '" + wires[w] + "' is never driven", first_use[w]);
  const auto topo = topo_sort(wires.size(), gates);
  if (topo.cycle_wire) {
    const std::size_t w = *topo.cycle_wire;
    throw ParseError("combinational cycle through wire '" + wires[w] + "'", driver_line[w]);
  }
  try {
    return Circuit(std::move(wires), std::move(gates), std::move(inputs), std::move(outputs));
  } catch (const InvalidModel& e) {
    throw ParseError(e.what());
  }
}

Circuit load_netlist(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_netlist(buf.str());
}

std::string print_netlist(const Circuit& c) {
  std::string out;
  for (const auto w : c.inputs()) out += "INPUT(" + c.wires()[w] + ")\n";
  for (const auto w : c.outputs()) out += "OUTPUT(" + c.wires()[w] + ")\n";
  for (const auto& g : c.gates()) {
    out += g.health + ": " + c.wires()[g.output] + " = " + std::string(to_string(g.kind)) + "(";
    for (std::size_t k = 0; k < g.inputs.size(); ++k) {
      if (k) out += ", ";
      out += c.wires()[g.inputs[k]];
    }
    out += ")\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Compilation and simulation

namespace {

Formula gate_function(GateKind kind, std::vector<Formula> ins) {
  auto fold_xor = [](const std::vector<Formula>& v) {
    Formula acc = v[0];
    for (std::size_t k = 1; k < v.size(); ++k) acc = Formula::negation(Formula::iff(acc, v[k]));
    return acc;
  };
  auto nary = [](Formula (*make)(std::vector<Formula>), std::vector<Formula> v) {
    return v.size() == 1 ? v[0] : make(std::move(v));
  };
  switch (kind) {
    case GateKind::And:
      return nary(&Formula::conj, std::move(ins));
    case GateKind::Or:
      return nary(&Formula::disj, std::move(ins));
    case GateKind::Nand:
      return Formula::negation(nary(&Formula::conj, std::move(ins)));
    case GateKind::Nor:
      return Formula::negation(nary(&Formula::disj, std::move(ins)));
    case GateKind::Xor:
      return fold_xor(ins);
    case GateKind::Xnor:
      if (ins.size() == 2) return Formula::iff(ins[0], ins[1]);
      return Formula::negation(fold_xor(ins));
    case GateKind::Not:
      return Formula::negation(ins[0]);
    case GateKind::Buf:
      return ins[0];
  }
  return ins[0];
}

bool eval_gate(GateKind kind, const std::vector<bool>& values, const std::vector<std::size_t>& ins) {
  switch (kind) {
    case GateKind::And:
    case GateKind::Nand: {
      bool v = true;
      for (const auto w : ins) v = v && values[w];
      return kind == GateKind::And ? v : !v;
    }
    case GateKind::Or:
    case GateKind::Nor: {
      bool v = false;
      for (const auto w : ins) v = v || values[w];
      return kind == GateKind::Or ? v : !v;
    }
    case GateKind::Xor:
    case GateKind::Xnor: {
      bool v = false;
      for (const auto w : ins) v = v != values[w];
      return kind == GateKind::Xor ? v : !v;
    }
    case GateKind::Not:
      return !values[ins[0]];
    case GateKind::Buf:
      return values[ins[0]];
  }
  return false;
}

}  // namespace

DiagnosticSystem compile(const Circuit& c, FaultMode mode) {
  SymbolTable symbols;
  std::vector<VarId> comps, obs, inputs, outputs;
  for (const auto& g : c.gates()) comps.push_back(symbols.intern(g.health));
  for (const auto w : c.inputs()) inputs.push_back(symbols.intern(c.wires()[w]));
  for (const auto w : c.outputs()) {
    const VarId v = symbols.intern(c.wires()[w]);
    // A primary input listed as an output stays an input.
    if (std::find(inputs.begin(), inputs.end(), v) == inputs.end()) outputs.push_back(v);
  }
  obs = inputs;
  obs.insert(obs.end(), outputs.begin(), outputs.end());
  std::vector<VarId> wire_var(c.wires().size());
  for (std::size_t w = 0; w < c.wires().size(); ++w) wire_var[w] = symbols.intern(c.wires()[w]);

  std::vector<Formula> parts;
  for (std::size_t gi = 0; gi < c.gates().size(); ++gi) {
    const auto& g = c.gates()[gi];
    std::vector<Formula> ins;
    for (const auto w : g.inputs) ins.push_back(Formula::var(wire_var[w]));
    const Formula out = Formula::var(wire_var[g.output]);
    parts.push_back(Formula::implies(Formula::var(comps[gi]), Formula::iff(out, gate_function(g.kind, std::move(ins)))));
  }
  if (mode != FaultMode::Weak) {
    for (std::size_t gi = 0; gi < c.gates().size(); ++gi) {
      const Formula out = Formula::var(wire_var[c.gates()[gi].output]);
      parts.push_back(Formula::implies(Formula::negation(Formula::var(comps[gi])),
                                       mode == FaultMode::StuckAt1 ? out : Formula::negation(out)));
    }
  }
  Formula sd = parts.empty() ? Formula::constant(true) : parts.size() == 1 ? parts[0] : Formula::conj(std::move(parts));
  return DiagnosticSystem(std::move(symbols), std::move(sd), std::move(comps), std::move(obs), std::move(inputs),
                          std::move(outputs));
}

std::vector<bool> simulate_wires(const Circuit& c, const std::vector<bool>& inputs) {
  if (inputs.size() != c.inputs().size()) throw std::invalid_argument("simulate needs one value per primary input");
  std::vector<bool> values(c.wires().size(), false);
  for (std::size_t k = 0; k < inputs.size(); ++k) values[c.inputs()[k]] = inputs[k];
  for (const auto gi : c.topo_order()) {
    const auto& g = c.gates()[gi];
    values[g.output] = eval_gate(g.kind, values, g.inputs);
  }
  return values;
}

std::vector<bool> simulate(const Circuit& c, const std::vector<bool>& inputs) {
  const auto values = simulate_wires(c, inputs);
  std::vector<bool> out;
  out.reserve(c.outputs().size());
  for (const auto w : c.outputs()) out.push_back(values[w]);
  return out;
}

// ---------------------------------------------------------------------------
// Built-ins

namespace {

constexpr std::string_view kSubtractorNetlist = R"(# Full subtractor: d = x - y - p, borrow b
INPUT(x)
INPUT(y)
INPUT(p)
OUTPUT(d)
OUTPUT(b)
h1: i = XOR(y, p)
h2: d = XOR(x, i)
h3: j = OR(y, p)
h4: m = AND(l, j)
h5: b = OR(m, k)
h6: l = NOT(x)
h7: k = AND(y, p)
)";

constexpr std::string_view kTwoInvertersNetlist = R"(INPUT(x)
OUTPUT(y)
h1: z = NOT(x)
h2: y = NOT(z)
)";

constexpr std::string_view kSubtractorHeader = R"(comps h1 h2 h3 h4 h5 h6 h7
obs x y p d b
inputs x y p
outputs d b
)";

constexpr std::string_view kSubtractorWeak = R"(sd h1 => (i <=> !(y <=> p))
sd h2 => (d <=> !(x <=> i))
sd h3 => (j <=> y | p)
sd h4 => (m <=> l & j)
sd h5 => (b <=> m | k)
sd h6 => (x <=> !l)
sd h7 => (k <=> y & p)
)";

// Faulty xors pass one input through, a faulty inverter buffers, the rest
// stick at a constant.
constexpr std::string_view kSubtractorStrongFaults = R"(sd !h1 => (i <=> y)
sd !h2 => (d <=> x)
sd !h3 => j
sd !h4 => !m
sd !h5 => b
sd !h6 => (x <=> l)
sd !h7 => !k
)";

constexpr std::string_view kSubtractorStuckAt1 = R"(sd !h1 => i
sd !h2 => d
sd !h3 => j
sd !h4 => m
sd !h5 => b
sd !h6 => l
sd !h7 => k
)";

constexpr std::string_view kTwoInvertersSdD = R"(comps h1 h2
obs x y
inputs x
outputs y
sd h1 => (y <=> !x)
sd !h1 => (y <=> x)
sd h2 => (y <=> !x)
sd !h2 => (y <=> x)
)";

constexpr std::string_view kTwoInvertersSeries = R"(comps h1 h2
obs x y
inputs x
outputs y
sd h1 => (z <=> !x)
sd !h1 => (z <=> x)
sd h2 => (y <=> !z)
sd !h2 => (y <=> z)
)";

}  // namespace

std::string builtin_netlist(std::string_view name) {
  if (name == "subtractor") return std::string(kSubtractorNetlist);
  if (name == "two_inverters") return std::string(kTwoInvertersNetlist);
  throw std::invalid_argument("unknown built-in circuit '" + std::string(name) + "'");
}

Circuit builtin_circuit(std::string_view name) { return parse_netlist(builtin_netlist(name)); }

std::string builtin_model_text(std::string_view name, Variant variant) {
  if (name == "subtractor") {
    std::string text(kSubtractorHeader);
    switch (variant) {
      case Variant::Weak:
        return text + std::string(kSubtractorWeak);
      case Variant::Strong:
        return text + std::string(kSubtractorWeak) + std::string(kSubtractorStrongFaults);
      case Variant::StuckAt1:
        return text + std::string(kSubtractorWeak) + std::string(kSubtractorStuckAt1);
      case Variant::StuckAt0:
        return print_model(compile(builtin_circuit("subtractor"), FaultMode::StuckAt0));
    }
  }
  if (name == "two_inverters_sd_d" || name == "two_inverters_series") {
    if (variant != Variant::Weak && variant != Variant::Strong)
      throw std::invalid_argument("'" + std::string(name) + "' has fixed fault behaviour");
    return std::string(name == "two_inverters_sd_d" ? kTwoInvertersSdD : kTwoInvertersSeries);
  }
  throw std::invalid_argument("unknown built-in system '" + std::string(name) + "'");
}

DiagnosticSystem builtin_system(std::string_view name, Variant variant) {
  return parse_model(builtin_model_text(name, variant));
}

std::vector<std::string> builtin_system_names() { return {"subtractor", "two_inverters_sd_d", "two_inverters_series"}; }

Observation builtin_observation(const DiagnosticSystem& ds, std::string_view name) {
  static const std::vector<std::pair<std::string_view, std::string_view>> table = {
      {"alpha1", "x y p b !d"},  {"alpha2", "!x y p !b d"}, {"alpha3", "!x !y !p b !d"},
      {"alpha4", "x y p !b !d"}, {"alpha_d", "x !y"},       {"alpha_s", "x y"},
  };
  for (const auto& [key, text] : table)
    if (key == name) return parse_observation(ds, text);
  throw std::invalid_argument("unknown built-in observation '" + std::string(name) + "'");
}

std::vector<std::string> builtin_observation_names() {
  return {"alpha1", "alpha2", "alpha3", "alpha4", "alpha_d", "alpha_s"};
}

// ---------------------------------------------------------------------------
// Ambiguity groups

std::vector<std::size_t> ambiguity_group(const DiagnosticSystem& ds, const Observation& alpha,
                                         const HealthAssignment& w) {
  const FaultModelClass cls = classify(ds);
  if (cls.kind != FaultModelKind::StuckAt) throw InvalidModel("ambiguity groups need a stuck-at system");
  if (w.size() != ds.num_comps()) throw std::invalid_argument("health assignment size mismatch");

  CnfFormula cnf = to_cnf(ds);
  std::vector<int> assumptions = encode(cnf, alpha);
  for (const int l : encode(cnf, ds, w)) assumptions.push_back(l);

  std::optional<Assignment> model;
  {
    Solver solver(cnf);
    model = solver.solve(assumptions);
  }
  if (!model) throw std::invalid_argument("health assignment is not a diagnosis");

  // Component output i is the variable of its stuck-at literal.
  CnfFormula::Clause blocking;
  std::vector<bool> forced(ds.num_comps());
  for (std::size_t i = 0; i < ds.num_comps(); ++i) {
    const int v = cnf.var_of(cls.stuck_at[i]->var);
    forced[i] = model->value(v);
    blocking.push_back(forced[i] ? -v : v);
  }
  std::sort(blocking.begin(), blocking.end(), [](int a, int b) { return std::abs(a) < std::abs(b); });
  blocking.erase(std::unique(blocking.begin(), blocking.end()), blocking.end());
  cnf.clauses.push_back(blocking);
  {
    Solver solver(cnf);
    if (solver.solve(assumptions)) throw WfdsViolation("component outputs are not uniquely determined");
  }

  std::vector<std::size_t> group;
  for (std::size_t i = 0; i < ds.num_comps(); ++i)
    if (forced[i] == cls.stuck_at[i]->positive) group.push_back(i);
  return group;
}

// ---------------------------------------------------------------------------
// Synthetic systems

Circuit random_circuit(std::size_t num_gates, std::size_t num_inputs, std::uint64_t seed) {
  if (num_inputs == 0) throw std::invalid_argument("a circuit needs at least one input");
  Rng rng(seed);
  std::vector<std::string> wires;
  std::vector<std::size_t> inputs;
  for (std::size_t k = 0; k < num_inputs; ++k) {
    inputs.push_back(wires.size());
    wires.push_back("i" + std::to_string(k));
  }
  static constexpr GateKind kinds[] = {GateKind::And, GateKind::Or,   GateKind::Nand, GateKind::Nor,
                                       GateKind::Xor, GateKind::Xnor, GateKind::Not,  GateKind::Buf};
  std::vector<Gate> gates;
  std::vector<std::size_t> fanout(num_inputs + num_gates, 0);
  // Draw from a window of recent wires so the circuit gains depth.
  const std::size_t window = std::max<std::size_t>(2 * num_inputs, 16);
  for (std::size_t g = 0; g < num_gates; ++g) {
    Gate gate;
    gate.kind = kinds[rng.below(std::size(kinds))];
    const std::size_t arity = single_input(gate.kind) ? 1 : 2 + rng.below(4) / 3;
    const std::size_t avail = wires.size();
    const std::size_t lo = avail > window ? avail - window : 0;
    while (gate.inputs.size() < std::min(arity, avail)) {
      // Inputs not yet used are preferred so that every input feeds the logic.
      std::size_t w = lo + rng.below(avail - lo);
      for (std::size_t k = 0; k < num_inputs; ++k)
        if (fanout[k] == 0 && rng.below(4) == 0) {
          w = k;
          break;
        }
      if (std::find(gate.inputs.begin(), gate.inputs.end(), w) == gate.inputs.end()) gate.inputs.push_back(w);
    }
    for (const auto w : gate.inputs) ++fanout[w];
    gate.output = wires.size();
    wires.push_back("n" + std::to_string(g));
    gate.health = "h" + std::to_string(g);
    gates.push_back(std::move(gate));
  }
  std::vector<std::size_t> outputs;
  for (std::size_t w = num_inputs; w < wires.size(); ++w)
    if (fanout[w] == 0) outputs.push_back(w);
  return Circuit(std::move(wires), std::move(gates), std::move(inputs), std::move(outputs));
}

PlantedSystem planted_system(const std::vector<std::size_t>& group_sizes, std::size_t free_components) {
  if (group_sizes.empty()) throw std::invalid_argument("planted system needs at least one group");
  SymbolTable symbols;
  std::vector<VarId> comps;
  std::vector<std::vector<VarId>> group_vars(group_sizes.size());
  for (std::size_t j = 0; j < group_sizes.size(); ++j) {
    if (group_sizes[j] == 0) throw std::invalid_argument("planted groups must be non-empty");
    for (std::size_t t = 0; t < group_sizes[j]; ++t) {
      const VarId v = symbols.intern("g" + std::to_string(j) + "_" + std::to_string(t));
      group_vars[j].push_back(v);
      comps.push_back(v);
    }
  }
  std::vector<VarId> free_vars;
  for (std::size_t k = 0; k < free_components; ++k) {
    free_vars.push_back(symbols.intern("f" + std::to_string(k)));
    comps.push_back(free_vars.back());
  }

  const std::size_t r = group_sizes.size();
  const VarId first = symbols.intern("y0");
  const VarId last = symbols.intern("y" + std::to_string(r));
  std::vector<VarId> obs{first, last};
  std::vector<VarId> free_out;
  for (std::size_t k = 0; k < free_components; ++k) {
    free_out.push_back(symbols.intern("o" + std::to_string(k)));
    obs.push_back(free_out.back());
  }
  std::vector<VarId> chain{first};
  for (std::size_t j = 1; j < r; ++j) chain.push_back(symbols.intern("y" + std::to_string(j)));
  chain.push_back(last);

  std::vector<Formula> parts;
  for (std::size_t j = 0; j < r; ++j)
    for (const VarId h : group_vars[j])
      parts.push_back(Formula::implies(Formula::var(h),
                                       Formula::implies(Formula::var(chain[j]), Formula::var(chain[j + 1]))));
  for (std::size_t k = 0; k < free_components; ++k)
    parts.push_back(Formula::implies(Formula::var(free_vars[k]), Formula::var(free_out[k])));
  Formula sd = parts.size() == 1 ? parts[0] : Formula::conj(std::move(parts));

  DiagnosticSystem ds(std::move(symbols), std::move(sd), comps, obs);
  std::vector<Literal> lits{{first, true}, {last, false}};
  for (const VarId o : free_out) lits.push_back({o, true});
  Observation alpha(ds, std::move(lits));

  std::vector<HealthAssignment> minimal;
  std::size_t offset = 0;
  for (const auto size : group_sizes) {
    HealthAssignment w(comps.size(), true);
    for (std::size_t t = 0; t < size; ++t) w.set_healthy(offset + t, false);
    offset += size;
    minimal.push_back(std::move(w));
  }
  return {std::move(ds), std::move(alpha), std::move(minimal)};
}

}  // namespace safari
