#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "locsim/linalg.hpp"

namespace locsim {

/// One circuit element from a netlist: a two-mode directional coupler or a
/// single-mode phase shifter. The value is either a literal (reflectivity
/// or radians) or the name of a phase parameter bound at elaboration.
struct Element {
  enum class Kind { Coupler, Phase };
  Kind kind = Kind::Coupler;
  int mode_a = 0;
  int mode_b = -1;  // unused for phase shifters
  bool has_param = false;
  double literal = 0.0;
  std::string param;
};

/// Parsed netlist: element order is preserved from the source text.
/// phase_params lists parameter names uniquely, in first-appearance order.
struct CircuitSpec {
  int mode_count = 0;
  std::string name;
  std::vector<Element> elements;
  std::vector<std::string> phase_params;
};

using ParamBinding = std::map<std::string, double>;

/// Parse netlist text. Line-oriented grammar ('#' starts a comment anywhere
/// on a line):
///
///   MODES <n>              exactly once, before any element
///   DC <m1> <m2> <eta>     directional coupler; eta decimal or "p/q"
///   PS <m> <value|$name>   phase shifter; $name binds at elaboration
///   NAME <label>           optional circuit label
///
/// Mode indices are zero-based. Any malformed input raises ParseError with
/// the offending line number; parsing never crashes on arbitrary bytes.
CircuitSpec parse_netlist(std::string_view text);

/// Canonical textual form; parse(pretty_print(s)) is structurally identical
/// to s (literals round-trip bit-exactly).
std::string pretty_print(const CircuitSpec& spec);

/// Multiply out the element matrices in source order. The binding must
/// cover the spec's parameters exactly; otherwise BindingError.
TransitionMatrix elaborate(const CircuitSpec& spec, const ParamBinding& binding);

}  // namespace locsim
