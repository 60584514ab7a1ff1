#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "asymint/greens.hpp"
#include "asymint/quadrature.hpp"
#include "asymint/riccati.hpp"
#include "asymint/spectra.hpp"

namespace asymint {

/// Exponential weights of the two-sided transform
///   F(E)(t) = int_{t0}^t exp(-head_rate (t-s)) |E| ds + int_t^inf exp(-tail_rate (s-t)) |E| ds,
/// with either side possibly absent.
struct SideRates {
  bool head = false;
  bool tail = false;
  double head_rate = 0.0;
  double tail_rate = 0.0;
};

/// Layout for root i: Printed follows the classical display (i=1 tail, i=4 head, mixed otherwise);
/// Reflected swaps head and tail to match the causal structure of the reflected kernel.
[[nodiscard]] SideRates f_operator_layout(const CharacteristicData& cd, int i, Orientation o);
/// Same layout read off the kernel terms (slowest rate per side).
[[nodiscard]] SideRates kernel_layout(const GreenKernel& k);

[[nodiscard]] double side_transform(const SideRates& layout, const ScalarFunction& E, double t, double t0,
                                    const QuadratureOptions& opts = {});

[[nodiscard]] double F_operator_eval(const CharacteristicData& cd, int i, const ScalarFunction& E, double t, double t0,
                                     Orientation o = Orientation::Reflected, const QuadratureOptions& opts = {});

struct RhoBound {
  double rho = 0.0;
  double argmax_t = 0.0;
  int argmax_j = 0;
  bool tail_monotone = true;
  double horizon = 0.0;
};

/// Largest sampled value of F_i(r_j) over j and t in [t0, horizon]; horizon defaults to t0 + 40/min_gap.
[[nodiscard]] RhoBound rho_bound(const CharacteristicData& cd, int i, const Perturbations& r, double t0,
                                 Orientation o = Orientation::Reflected, std::optional<double> horizon = std::nullopt,
                                 const QuadratureOptions& opts = {});

struct ContractionConstants {
  double delta_w = 0.0;
  Eigen::Vector3d alpha;          // alpha_{j,i}, j = 0, 1, 2, from the closed-form display
  Eigen::Vector3d alpha_printed;  // as typeset; differs from alpha only for i = 3
  double A = 0.0;                 // sum(alpha) / |delta_w|
  double A_printed = 0.0;
  double A_kernel = 0.0;          // sum_d kernel_bound(d).raw_coefficient / |delta_gamma|
  double varsigma = 0.0;
  double eta = 0.25;
};

[[nodiscard]] ContractionConstants contraction_constants(const CharacteristicData& cd, int i, double eta);

struct H2Report {
  std::vector<std::pair<double, double>> samples;  // (t, max_j L(r_j)(t))
  double fitted_rate = 0.0;  // slope of log L over the second half of samples, NaN if undefined
  bool pass = false;
  double tolerance = 1e-6;
};

[[nodiscard]] H2Report check_h2(const GreenKernel& k, const Perturbations& r, const std::vector<double>& sample_ts,
                                double t0, double h2_tol = 1e-6, const QuadratureOptions& opts = {});
[[nodiscard]] std::vector<double> default_h2_samples(double t0, double min_gap, int count = 24);

struct Smallness {
  double product = 0.0;  // rho * A * varsigma
  bool ok = false;
  std::optional<double> Phi;
};

[[nodiscard]] Smallness smallness_check(double A, double varsigma, double rho);

}  // namespace asymint
