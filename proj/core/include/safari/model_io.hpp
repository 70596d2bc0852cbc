#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "safari/model.hpp"

namespace safari {

/// Parses a formula over `symbols`, interning unseen names.
///
/// Grammar, loosest binding first:
///
///     iff     := implies ( "<=>" implies )*        left-associative
///     implies := or ( "=>" implies )?              right-associative
///     or      := and ( "|" and )*
///     and     := unary ( "&" unary )*
///     unary   := "!" unary | "(" iff ")" | "true" | "false" | name
///
/// Names are runs of letters, digits and `_ . [ ] $`.
Formula parse_formula(std::string_view text, SymbolTable& symbols, std::size_t line = 0);

/// Prints with the minimum parentheses needed for parse_formula to rebuild
/// the same tree.
std::string print_formula(const Formula& f, const SymbolTable& symbols);

/// Parses the line-oriented model format:
///
///     # comment
///     comps h1 h2 ...        health variables, canonical order
///     obs x y ...            observables
///     inputs x ...           optional: circuit inputs (subset of obs)
///     outputs d ...          optional: circuit outputs (subset of obs)
///     sd <formula>           one or more; conjoined in order
///
/// Header variables are interned first (comps, obs, inputs, outputs), then
/// variables that only occur in SD, by first appearance. Checks that SD is
/// satisfiable; throws ParseError or InvalidModel.
DiagnosticSystem parse_model(std::string_view text);
DiagnosticSystem load_model(const std::string& path);

/// Inverse of parse_model: for a system produced by parse_model,
/// parse_model(print_model(ds)) rebuilds the same ids and formula tree.
std::string print_model(const DiagnosticSystem& ds);

/// Whitespace-separated observable names, `!` prefix for negative.
Observation parse_observation(const DiagnosticSystem& ds, std::string_view text);
std::string print_observation(const DiagnosticSystem& ds, const Observation& alpha);

/// Fault set as component names, e.g. "{h1, h5}".
std::string print_faults(const DiagnosticSystem& ds, const HealthAssignment& w);
/// Full conjunction, e.g. "!h1 h2 h3".
std::string print_health(const DiagnosticSystem& ds, const HealthAssignment& w);
HealthAssignment parse_health(const DiagnosticSystem& ds, std::string_view text);

}  // namespace safari
