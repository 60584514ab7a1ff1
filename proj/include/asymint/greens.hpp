#pragma once

#include <array>
#include <string_view>

#include <Eigen/Core>

#include "asymint/quadrature.hpp"

namespace asymint {

/// Sign pattern of the decreasing triple gamma.
enum class SignPattern { AllNeg, OnePos, TwoPos, AllPos };

/// Exponent convention for the kernel terms.
///  Printed:   terms exp(-gamma_k (t-s)), side layout as in the classical display.
///  Reflected: terms exp(+gamma_k (t-s)), causal for gamma_k < 0, anticausal for gamma_k > 0;
///             this is the Green function of mu^3 + b2 mu^2 + b1 mu + b0 with roots gamma.
enum class Orientation { Printed, Reflected };

/// Head: active for s <= t.  Tail: active for s >= t.
enum class Side { Head, Tail };

[[nodiscard]] std::string_view to_string(SignPattern p) noexcept;
[[nodiscard]] std::string_view to_string(Orientation o) noexcept;

[[nodiscard]] SignPattern classify_sign_pattern(const Eigen::Vector3d& gamma, double gap_tol = 1e-8);

/// One exponential piece: coefficient * exp(rate * (t - s)) on its side (coefficient includes 1/delta_gamma).
struct KernelTerm {
  double rate = 0.0;
  double coefficient = 0.0;
  double raw = 0.0;  // |gamma_m - gamma_l| numerator before division by delta_gamma
  Side side = Side::Head;
};

/// Pointwise bound |d^d g/dt^d (t,s)| <= side_coefficient * exp(-side_decay * |t-s|) on each side.
struct KernelBound {
  double raw_coefficient = 0.0;  // sum_k |N_k| |gamma_k|^d over all terms
  double head_coefficient = 0.0;  // sum over head terms of |coefficient| |rate|^d
  double tail_coefficient = 0.0;
  double head_decay = 0.0;  // slowest |rate| among head terms, 0 if none
  double tail_decay = 0.0;
  double alpha_head = 0.0;  // signed gamma of the slowest head term, NaN if no head terms
  double alpha_tail = 0.0;
  [[nodiscard]] double coefficient(Side side) const noexcept { return side == Side::Head ? head_coefficient : tail_coefficient; }
  [[nodiscard]] double decay(Side side) const noexcept { return side == Side::Head ? head_decay : tail_decay; }
};

class GreenKernel {
 public:
  explicit GreenKernel(const Eigen::Vector3d& gamma, Orientation orientation = Orientation::Reflected,
                       double gap_tol = 1e-8);

  [[nodiscard]] const Eigen::Vector3d& gamma() const noexcept { return gamma_; }
  [[nodiscard]] double delta_gamma() const noexcept { return delta_gamma_; }
  [[nodiscard]] SignPattern pattern() const noexcept { return pattern_; }
  [[nodiscard]] Orientation orientation() const noexcept { return orientation_; }
  [[nodiscard]] const std::array<KernelTerm, 3>& terms() const noexcept { return terms_; }
  [[nodiscard]] bool has_side(Side side) const noexcept;

  /// d^d g / dt^d at (t, s); at t == s the mean of the two one-sided limits.
  [[nodiscard]] double operator()(double t, double s, int d = 0) const;
  /// Limit of d^d g/dt^d as t -> s from the given side (Head: t > s).
  [[nodiscard]] double one_sided_limit(Side side, int d) const;
  /// Head limit minus tail limit of the d-th derivative at t = s.
  [[nodiscard]] double jump(int d) const { return one_sided_limit(Side::Head, d) - one_sided_limit(Side::Tail, d); }

 private:
  Eigen::Vector3d gamma_;
  double delta_gamma_;
  SignPattern pattern_;
  Orientation orientation_;
  std::array<KernelTerm, 3> terms_{};
};

[[nodiscard]] inline double green_eval(const GreenKernel& k, double t, double s, int d) { return k(t, s, d); }

[[nodiscard]] KernelBound kernel_bound(const GreenKernel& k, int d);

/// L(E)(t) = int_{t0}^inf (|g| + |g_t| + |g_tt|)(t,s) |E(s)| ds, split at s = t.
[[nodiscard]] double L_functional(const GreenKernel& k, const ScalarFunction& E, double t, double t0,
                                  const QuadratureOptions& opts = {});

/// Residual of P(D) u - f for u = integral of the kernel against f(s) = exp(-kappa s) on [t0, inf),
/// evaluated in closed form from the kernel terms.
[[nodiscard]] double exponential_forcing_residual(const GreenKernel& k, const Eigen::Vector3d& b, double kappa,
                                                  double t, double t0);

struct OrientationChoice {
  Orientation orientation = Orientation::Reflected;
  double residual_printed = 0.0;
  double residual_reflected = 0.0;
  double tolerance = 1e-8;
};

/// Applies the zero-nonlinearity operator of each orientation to test forcings and keeps the
/// one whose output satisfies the cubic operator equation.  Prefers Reflected if both pass.
[[nodiscard]] OrientationChoice select_orientation(const Eigen::Vector3d& gamma, const Eigen::Vector3d& b,
                                                   double t0 = 0.0, double tolerance = 1e-8);

}  // namespace asymint
