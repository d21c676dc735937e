#include "locsim/netlist.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace locsim {

namespace {

constexpr int kMaxModes = 1024;  // keeps elaboration memory sane

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
      ++i;
    if (i > start) toks.emplace_back(line.substr(start, i - start));
  }
  return toks;
}

bool parse_double(const std::string& tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && std::isfinite(out);
}

// Decimal or simple fraction "p/q" (q > 0). Fractions let design values
// like 1/3 be stated exactly.
bool parse_number(const std::string& tok, double& out) {
  const auto slash = tok.find('/');
  if (slash == std::string::npos) return parse_double(tok, out);
  double num = 0.0, den = 0.0;
  if (!parse_double(tok.substr(0, slash), num)) return false;
  if (!parse_double(tok.substr(slash + 1), den)) return false;
  if (den == 0.0) return false;
  out = num / den;
  return std::isfinite(out);
}

bool parse_int(const std::string& tok, int& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

bool valid_param_name(std::string_view name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
    return false;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

int require_mode(const std::string& tok, int mode_count, int line) {
  int m = 0;
  if (!parse_int(tok, m))
    throw ParseError(line, "expected a mode index, got '" + tok + "'");
  if (m < 0 || m >= mode_count)
    throw ParseError(line, "mode index " + tok + " out of range (MODES " +
                               std::to_string(mode_count) + ")");
  return m;
}

std::string format_literal(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

CircuitSpec parse_netlist(std::string_view text) {
  CircuitSpec spec;
  bool have_modes = false;
  bool have_name = false;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    const auto toks = tokenize(line);
    if (toks.empty()) continue;

    const std::string& dir = toks[0];
    if (dir == "MODES") {
      if (have_modes) throw ParseError(line_no, "duplicate MODES directive");
      if (toks.size() != 2) throw ParseError(line_no, "MODES takes one argument");
      int n = 0;
      if (!parse_int(toks[1], n) || n <= 0)
        throw ParseError(line_no, "MODES argument must be a positive integer");
      if (n > kMaxModes)
        throw ParseError(line_no, "MODES argument exceeds the supported maximum " +
                                      std::to_string(kMaxModes));
      spec.mode_count = n;
      have_modes = true;
    } else if (dir == "NAME") {
      if (have_name) throw ParseError(line_no, "duplicate NAME directive");
      if (toks.size() != 2) throw ParseError(line_no, "NAME takes one label");
      spec.name = toks[1];
      have_name = true;
    } else if (dir == "DC") {
      if (!have_modes)
        throw ParseError(line_no, "MODES must appear before any element");
      if (toks.size() != 4)
        throw ParseError(line_no, "DC takes <mode> <mode> <eta>");
      Element e;
      e.kind = Element::Kind::Coupler;
      e.mode_a = require_mode(toks[1], spec.mode_count, line_no);
      e.mode_b = require_mode(toks[2], spec.mode_count, line_no);
      if (e.mode_a == e.mode_b)
        throw ParseError(line_no, "coupler modes must be distinct");
      if (!parse_number(toks[3], e.literal))
        throw ParseError(line_no, "expected a reflectivity, got '" + toks[3] + "'");
      if (e.literal < 0.0 || e.literal > 1.0)
        throw ParseError(line_no, "reflectivity " + toks[3] + " outside [0, 1]");
      spec.elements.push_back(std::move(e));
    } else if (dir == "PS") {
      if (!have_modes)
        throw ParseError(line_no, "MODES must appear before any element");
      if (toks.size() != 3)
        throw ParseError(line_no, "PS takes <mode> <value-or-$name>");
      Element e;
      e.kind = Element::Kind::Phase;
      e.mode_a = require_mode(toks[1], spec.mode_count, line_no);
      const std::string& val = toks[2];
      if (!val.empty() && val[0] == '$') {
        const std::string name = val.substr(1);
        if (!valid_param_name(name))
          throw ParseError(line_no, "invalid parameter name '" + val + "'");
        e.has_param = true;
        e.param = name;
        bool known = false;
        for (const auto& p : spec.phase_params) known = known || (p == name);
        if (!known) spec.phase_params.push_back(name);
      } else if (parse_number(val, e.literal)) {
        // literal phase in radians
      } else {
        throw ParseError(line_no, "undeclared parameter reference '" + val +
                                      "' (parameters are written as $name)");
      }
      spec.elements.push_back(std::move(e));
    } else {
      throw ParseError(line_no, "unknown directive '" + dir + "'");
    }
  }

  if (!have_modes) throw ParseError(line_no, "missing MODES directive");
  return spec;
}

std::string pretty_print(const CircuitSpec& spec) {
  std::ostringstream out;
  if (!spec.name.empty()) out << "NAME " << spec.name << "\n";
  out << "MODES " << spec.mode_count << "\n";
  for (const auto& e : spec.elements) {
    if (e.kind == Element::Kind::Coupler) {
      out << "DC " << e.mode_a << " " << e.mode_b << " " << format_literal(e.literal)
          << "\n";
    } else if (e.has_param) {
      out << "PS " << e.mode_a << " $" << e.param << "\n";
    } else {
      out << "PS " << e.mode_a << " " << format_literal(e.literal) << "\n";
    }
  }
  return out.str();
}

TransitionMatrix elaborate(const CircuitSpec& spec, const ParamBinding& binding) {
  for (const auto& p : spec.phase_params)
    if (binding.find(p) == binding.end())
      throw BindingError("missing value for phase parameter '" + p + "'");
  for (const auto& [name, value] : binding) {
    bool known = false;
    for (const auto& p : spec.phase_params) known = known || (p == name);
    if (!known)
      throw BindingError("binding names unknown parameter '" + name + "'");
    if (!std::isfinite(value))
      throw BindingError("non-finite value bound to '" + name + "'");
  }

  TransitionMatrix acc = TransitionMatrix::identity(spec.mode_count);
  for (const auto& e : spec.elements) {
    TransitionMatrix lifted(1);
    if (e.kind == Element::Kind::Coupler) {
      lifted = embed(coupler_matrix({e.literal}), {e.mode_a, e.mode_b},
                     spec.mode_count);
    } else {
      const double phi = e.has_param ? binding.at(e.param) : e.literal;
      lifted = embed(phase_matrix({phi}), {e.mode_a}, spec.mode_count);
    }
    acc = lifted * acc;
  }
  return acc;
}

}  // namespace locsim
