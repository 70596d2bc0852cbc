#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "safari/model.hpp"

namespace safari {

enum class GateKind { And, Or, Nand, Nor, Xor, Xnor, Not, Buf };

std::string_view to_string(GateKind kind);
std::optional<GateKind> parse_gate_kind(std::string_view name);

struct Gate {
  GateKind kind = GateKind::Buf;
  std::vector<std::size_t> inputs;
  std::size_t output = 0;
  /// Name of the health variable for this gate.
  std::string health;
};

/// Combinational single-output-gate circuit over named wires.
class Circuit {
 public:
  /// Validates that every wire has exactly one driver (a primary input or a
  /// gate), that gate arities fit their kind, and that there is no cycle.
  /// Throws InvalidModel.
  Circuit(std::vector<std::string> wires, std::vector<Gate> gates, std::vector<std::size_t> inputs,
          std::vector<std::size_t> outputs);

  const std::vector<std::string>& wires() const { return wires_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<std::size_t>& inputs() const { return inputs_; }
  const std::vector<std::size_t>& outputs() const { return outputs_; }
  /// Gate indices, each after the drivers of its inputs.
  const std::vector<std::size_t>& topo_order() const { return topo_; }
  std::optional<std::size_t> find_wire(std::string_view name) const;

 private:
  std::vector<std::string> wires_;
  std::vector<Gate> gates_;
  std::vector<std::size_t> inputs_;
  std::vector<std::size_t> outputs_;
  std::vector<std::size_t> topo_;
};

/// Netlist dialect (a superset of ISCAS85 .bench lines):
///
///     # comment
///     INPUT(x)
///     OUTPUT(d)
///     [label:] out = GATE(in1, in2, ...)
///
/// GATE is one of AND OR NAND NOR XOR XNOR NOT BUF (BUFF accepted), in any
/// case. The optional label names the gate's health variable; the default is
/// `h_<out>`. Throws ParseError with the offending line.
Circuit parse_netlist(std::string_view text);
Circuit load_netlist(const std::string& path);
std::string print_netlist(const Circuit& c);

enum class FaultMode { Weak, StuckAt0, StuckAt1 };

std::string_view to_string(FaultMode mode);

/// One health variable per gate with h => (out <=> f(inputs)); stuck-at modes
/// add !h => !out or !h => out, after all nominal parts. COMPS are the health
/// variables in gate order, OBS the primary inputs then outputs.
DiagnosticSystem compile(const Circuit& c, FaultMode mode);

/// Nominal values of every wire for `inputs` given in primary-input order.
std::vector<bool> simulate_wires(const Circuit& c, const std::vector<bool>& inputs);
/// Nominal primary-output values, in output order.
std::vector<bool> simulate(const Circuit& c, const std::vector<bool>& inputs);

/// Variants of a built-in system.
enum class Variant { Weak, Strong, StuckAt0, StuckAt1 };

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

/// Built-in circuits: "subtractor" (7 gates, inputs x y p, outputs d b) and
/// "two_inverters" (x -> NOT -> z -> NOT -> y).
Circuit builtin_circuit(std::string_view name);
std::string builtin_netlist(std::string_view name);

/// Built-in systems:
///   subtractor           Weak, Strong, StuckAt0 or StuckAt1 behaviour
///   two_inverters_sd_d   both inverters relate x and y directly; healthy
///                        inverts, faulty buffers
///   two_inverters_series the series circuit with faulty inverters buffering
/// Throws std::invalid_argument for unknown names or unsupported variants.
DiagnosticSystem builtin_system(std::string_view name, Variant variant = Variant::Weak);
std::string builtin_model_text(std::string_view name, Variant variant = Variant::Weak);
std::vector<std::string> builtin_system_names();

/// Named observations: alpha1..alpha4 for the subtractor, alpha_d (x & !y)
/// for both two-inverter systems and alpha_s (x & y).
Observation builtin_observation(const DiagnosticSystem& ds, std::string_view name);
std::vector<std::string> builtin_observation_names();

/// Components whose forced output value equals their stuck-at value, in
/// component order. `w` must be a diagnosis of a StuckAt system, and the
/// component outputs must be forced to a unique assignment (checked with a
/// second solve that blocks the first one). Throws InvalidModel for non
/// stuck-at systems, std::invalid_argument when `w` is not a diagnosis and
/// WfdsViolation when the outputs are not unique.
std::vector<std::size_t> ambiguity_group(const DiagnosticSystem& ds, const Observation& alpha,
                                         const HealthAssignment& w);

/// Random combinational circuit: `num_inputs` primary inputs, `num_gates`
/// gates of mixed kinds with fan-in up to 3 drawn mostly from recent wires;
/// every wire without fan-out is a primary output.
Circuit random_circuit(std::size_t num_gates, std::size_t num_inputs, std::uint64_t seed);

/// Weak model whose minimal diagnoses are known: one disjoint fault set per
/// entry of `group_sizes` plus `free_components` components that never
/// appear in a minimal diagnosis. Group j's components each implement the
/// link y(j-1) => y(j) of a chain observed as y0 & !yr, so a health
/// assignment is a diagnosis iff some group is entirely faulty.
struct PlantedSystem {
  DiagnosticSystem ds;
  Observation alpha;
  /// Group fault sets, in group order.
  std::vector<HealthAssignment> minimal;
};

PlantedSystem planted_system(const std::vector<std::size_t>& group_sizes, std::size_t free_components);

}  // namespace safari
