#include "asymint/problem.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "asymint/errors.hpp"
#include "asymint/exprlang.hpp"

namespace asymint {
namespace {

const std::map<std::string, std::string>& key_sections() {
  static const std::map<std::string, std::string> keys = {
      {"a3", "equation"},       {"a2", "equation"},        {"a1", "equation"},     {"a0", "equation"},
      {"r0", "equation"},       {"r1", "equation"},        {"r2", "equation"},     {"r3", "equation"},
      {"t0", "domain"},         {"t_max", "domain"},       {"nodes", "domain"},    {"eta", "solver"},
      {"fp_tol", "solver"},     {"quad_tol", "solver"},    {"root_tol", "solver"}, {"gap_tol", "solver"},
      {"imag_tol", "solver"},   {"h2_tol", "solver"},      {"ratio_tol", "solver"}, {"residual_tol", "solver"},
      {"max_iter", "solver"},   {"oracle_span", "solver"}, {"orientation", "solver"},
  };
  return keys;
}

std::string trim(std::string s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  s = s.substr(b, s.find_last_not_of(ws) - b + 1);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) s = s.substr(1, s.size() - 2);
  return s;
}

double to_double(const std::string& field, const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ValidationError(field, field + " must be a finite number, got '" + s + "'");
  return v;
}

int to_int(const std::string& field, const std::string& text) {
  const std::string s = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ValidationError(field, field + " must be an integer, got '" + s + "'");
  return v;
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ValidationError(field, message);
}

// shortest text that reads back to the same double
std::string format(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void set_field(ProblemSpec& spec, const std::string& key, const std::string& value) {
  if (key == "a3") spec.a.a3 = to_double(key, value);
  else if (key == "a2") spec.a.a2 = to_double(key, value);
  else if (key == "a1") spec.a.a1 = to_double(key, value);
  else if (key == "a0") spec.a.a0 = to_double(key, value);
  else if (key.size() == 2 && key[0] == 'r' && key[1] >= '0' && key[1] <= '3')
    spec.r[static_cast<std::size_t>(key[1] - '0')] = trim(value);
  else if (key == "t0") spec.t0 = to_double(key, value);
  else if (key == "t_max") spec.t_max = to_double(key, value);
  else if (key == "nodes") spec.nodes = to_int(key, value);
  else if (key == "eta") spec.eta = to_double(key, value);
  else if (key == "fp_tol") spec.fp_tol = to_double(key, value);
  else if (key == "quad_tol") spec.quad_tol = to_double(key, value);
  else if (key == "root_tol") spec.root_tol = to_double(key, value);
  else if (key == "gap_tol") spec.gap_tol = to_double(key, value);
  else if (key == "imag_tol") spec.imag_tol = to_double(key, value);
  else if (key == "h2_tol") spec.h2_tol = to_double(key, value);
  else if (key == "ratio_tol") spec.ratio_tol = to_double(key, value);
  else if (key == "residual_tol") spec.residual_tol = to_double(key, value);
  else if (key == "max_iter") spec.max_iter = to_int(key, value);
  else if (key == "oracle_span") spec.oracle_span = to_double(key, value);
  else if (key == "orientation") {
    const std::string v = trim(value);
    if (v == "auto") spec.orientation = OrientationPolicy::Auto;
    else if (v == "printed") spec.orientation = OrientationPolicy::Printed;
    else if (v == "reflected") spec.orientation = OrientationPolicy::Reflected;
    else throw ValidationError(key, "orientation must be one of auto, printed, reflected");
  } else {
    throw ValidationError(key, "unknown key '" + key + "'");
  }
}

void validate(const ProblemSpec& spec) {
  require(std::isfinite(spec.t0), "t0", "t0 must be finite");
  if (spec.t_max) require(*spec.t_max > spec.t0, "t_max", "t_max must exceed t0");
  require(spec.nodes >= 64, "nodes", "nodes must be at least 64");
  require(spec.eta > 0.0 && spec.eta < 0.5, "eta", "eta must lie in (0,0.5)");
  for (const auto& [name, v] : {std::pair{"fp_tol", spec.fp_tol}, {"quad_tol", spec.quad_tol}, {"root_tol", spec.root_tol},
                                {"gap_tol", spec.gap_tol}, {"imag_tol", spec.imag_tol}, {"h2_tol", spec.h2_tol},
                                {"ratio_tol", spec.ratio_tol}, {"residual_tol", spec.residual_tol}})
    require(v > 0.0, name, std::string(name) + " must be positive");
  require(spec.max_iter >= 1, "max_iter", "max_iter must be at least 1");
  require(spec.oracle_span > 0.0, "oracle_span", "oracle_span must be positive");
}

ProblemSpec parse_problem_spec(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.line(), e.message());
  }
  ProblemSpec spec;
  for (const auto& [section, body] : tree) {
    if (section != "equation" && section != "domain" && section != "solver") {
      if (body.empty()) throw ValidationError(section, "key '" + section + "' must appear inside a section");
      throw ValidationError(section, "unknown section [" + section + "]");
    }
    for (const auto& [key, node] : body) {
      const auto it = key_sections().find(key);
      if (it == key_sections().end()) throw ValidationError(key, "unknown key '" + key + "' in [" + section + "]");
      if (it->second != section)
        throw ValidationError(key, "key '" + key + "' belongs in [" + it->second + "], not [" + section + "]");
      set_field(spec, key, node.data());
    }
  }
  validate(spec);
  return spec;
}

ProblemSpec load_problem_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_spec(buf.str());
}

Perturbations parse_perturbations(const ProblemSpec& spec) {
  Perturbations r;
  for (std::size_t j = 0; j < 4; ++j) {
    try {
      r[j] = FunctionExpr::parse(spec.r[j]);
    } catch (const SyntaxError& e) {
      throw SyntaxError(e.position(), "r" + std::to_string(j) + ": " + spec.r[j]);
    } catch (const Error& e) {
      throw Error(e.code(), "r" + std::to_string(j) + ": " + e.what());
    }
  }
  return r;
}

std::string to_config_text(const ProblemSpec& spec) {
  std::ostringstream os;
  os << "[equation]\n"
     << "a3 = " << format(spec.a.a3) << "\n"
     << "a2 = " << format(spec.a.a2) << "\n"
     << "a1 = " << format(spec.a.a1) << "\n"
     << "a0 = " << format(spec.a.a0) << "\n";
  for (std::size_t j = 0; j < 4; ++j) os << "r" << j << " = " << spec.r[j] << "\n";
  os << "\n[domain]\n"
     << "t0 = " << format(spec.t0) << "\n";
  if (spec.t_max) os << "t_max = " << format(*spec.t_max) << "\n";
  os << "nodes = " << spec.nodes << "\n"
     << "\n[solver]\n"
     << "eta = " << format(spec.eta) << "\n"
     << "fp_tol = " << format(spec.fp_tol) << "\n"
     << "quad_tol = " << format(spec.quad_tol) << "\n"
     << "max_iter = " << spec.max_iter << "\n";
  return os.str();
}

BiharmonicPreset biharmonic_preset(double n, double p) {
  if (!(n >= 5.0)) throw ValidationError("n", "dimension n must be at least 5");
  if (!(p > (n + 4.0) / (n - 4.0))) throw ValidationError("p", "exponent p must exceed (n+4)/(n-4)");
  const double q = p - 1.0;
  const double m = n * n - 10.0 * n + 20.0;
  const double c1 = (n - 2.0) * (n - 4.0) * q * q * q + 4.0 * m * q * q - 48.0 * (n - 4.0) * q + 128.0;
  BiharmonicPreset out;
  auto& a = out.spec.a;
  a.a3 = 2.0 / q * ((n - 4.0) * q - 8.0);
  a.a2 = (m * q * q - 24.0 * (n - 4.0) * q + 96.0) / (q * q);
  a.a1 = -2.0 / (q * q * q) * c1;
  a.a0 = 8.0 / (q * q * q * q) * ((n - 2.0) * (n - 4.0) * q * q * q + 2.0 * m * q * q - 16.0 * (n - 4.0) * q + 32.0);
  out.k1_printed = -8.0 / (q * q * q) * c1;
  out.expected_roots << 2.0 * (p + 1.0) / q, 4.0 / q, 4.0 * p / q - n, 2.0 * (p + 1.0) / q - n;
  return out;
}

}  // namespace asymint
