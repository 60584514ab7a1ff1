#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>

#include "asymint/riccati.hpp"
#include "asymint/spectra.hpp"

namespace asymint {

/// y'''' + sum_k (a_k + r_k(t)) y^(k) = 0 on [t0, inf) together with solver settings.
struct ProblemSpec {
  Quartic a;
  std::array<std::string, 4> r{"0", "0", "0", "0"};
  double t0 = 0.0;
  std::optional<double> t_max;  // default: t0 + ln(1e12) / min_gap
  int nodes = 2048;
  double eta = 0.25;
  double fp_tol = 1e-10;
  double quad_tol = 1e-12;
  double root_tol = 1e-12;
  double gap_tol = 1e-8;
  double imag_tol = 1e-9;
  double h2_tol = 1e-6;
  double ratio_tol = 1e-4;
  double residual_tol = 1e-6;
  int max_iter = 50;
  double oracle_span = 5.0;
  OrientationPolicy orientation = OrientationPolicy::Auto;

  [[nodiscard]] SpectraOptions spectra_options() const { return {gap_tol, imag_tol, root_tol}; }
};

/// Throws ValidationError naming the offending field.
void validate(const ProblemSpec& spec);

/// INI-style text with sections [equation], [domain], [solver]; unknown keys are rejected.
[[nodiscard]] ProblemSpec parse_problem_spec(const std::string& text);
[[nodiscard]] ProblemSpec load_problem_spec(const std::filesystem::path& path);

/// Sets one key (e.g. "fp_tol", "eta", "a3", "r0") from text, as in the config file.
void set_field(ProblemSpec& spec, const std::string& key, const std::string& value);

/// Parses r0..r3; syntax errors name the field.
[[nodiscard]] Perturbations parse_perturbations(const ProblemSpec& spec);

[[nodiscard]] std::string to_config_text(const ProblemSpec& spec);

/// Radial biharmonic equation in dimension n with exponent p after v(t) = exp(-4t/(p-1)) phi(exp t).
struct BiharmonicPreset {
  ProblemSpec spec;
  Eigen::Vector4d expected_roots;  // 2(p+1)/(p-1), 4/(p-1), 4p/(p-1) - n, 2(p+1)/(p-1) - n
  double k1_printed = 0.0;         // K1 with the 8/(p-1)^3 prefactor as typeset
};

[[nodiscard]] BiharmonicPreset biharmonic_preset(double n, double p);

}  // namespace asymint
