#pragma once

#include <array>

#include <Eigen/Core>

#include "asymint/exprlang.hpp"
#include "asymint/greens.hpp"
#include "asymint/spectra.hpp"

namespace asymint {

/// r0, r1, r2, r3: coefficient perturbations of y, y', y'', y'''.
using Perturbations = std::array<FunctionExpr, 4>;

/// Time-dependent coefficients of the reduced equation at one instant.
struct PointCoefficients {
  double forcing = 0.0;          // -(l^3 r3 + l^2 r2 + l r1 + r0)
  Eigen::Vector3d linear;        // weights of (z, z', z''):   (-(3l^2 r3 + 2l r2 + r1), -(3l r3 + r2), -r3)
  Eigen::Vector3d polynomial;    // weights of (z z', z^2, z^3): (-3 r3, -(3l r3 + r2), -r3)
};

/// Constant weights of (z'^2, z z', z z'', z^2, z^2 z', z^3, z^4).
using QuarticWeights = std::array<double, 7>;

/// Third-order equation  z''' + b2 z'' + b1 z' + b0 z = forcing(t) + F(t, z, z', z'')
/// obtained from y = exp(int (lambda_i + z)).
struct RiccatiSystem {
  int root = 1;
  double lambda = 0.0;
  Quartic a;
  Eigen::Vector3d b;  // (b2, b1, b0)
  QuarticWeights weights{};
  Perturbations r;
  GreenKernel kernel;
  OrientationChoice orientation_choice;

  [[nodiscard]] PointCoefficients coefficients(double t) const;
  [[nodiscard]] double forcing(double t) const { return coefficients(t).forcing; }
  [[nodiscard]] Eigen::Vector3d linear_part(double t) const { return coefficients(t).linear; }
  [[nodiscard]] Eigen::Vector3d polynomial_part(double t) const { return coefficients(t).polynomial; }
  /// mu^3 r3(t) + mu^2 r2(t) + mu r1(t) + r0(t); equals -forcing(t) at mu = lambda.
  [[nodiscard]] double p(double mu, double t) const;
};

/// Kernel orientation policy: Auto runs the residual test and keeps the passing convention.
enum class OrientationPolicy { Auto, Printed, Reflected };

[[nodiscard]] RiccatiSystem build_system(const CharacteristicData& cd, const Perturbations& r, int i,
                                         OrientationPolicy policy = OrientationPolicy::Auto, double gap_tol = 1e-8);

[[nodiscard]] QuarticWeights quartic_weights(double lambda, const Quartic& a);

[[nodiscard]] double eval_F(const PointCoefficients& c, const QuarticWeights& w, const Eigen::Vector3d& x);
[[nodiscard]] inline double eval_F(const RiccatiSystem& sys, double t, const Eigen::Vector3d& x) {
  return eval_F(sys.coefficients(t), sys.weights, x);
}

/// z''' + b2 z'' + b1 z' + b0 z - forcing - F at t; jet = (z, z', z'', z''').
[[nodiscard]] double riccati_residual(const RiccatiSystem& sys, double t, const Eigen::Vector4d& jet);

/// (y'/y, y''/y, y'''/y, y''''/y) for y'/y = lambda + z; jet = (z, z', z'', z''').
[[nodiscard]] Eigen::Vector4d derivative_ratios(double lambda, const Eigen::Vector4d& jet);

struct LiftResidual {
  double fourth_order = 0.0;  // residual of the linear fourth-order equation at y
  double lifted = 0.0;        // y times the reduced residual
  double y = 0.0;
};

/// y = exp(lambda (t - t0) + integral_z); both residuals should agree.
[[nodiscard]] LiftResidual lift_residual_equivalence(const RiccatiSystem& sys, double t, double t0, double integral_z,
                                                     const Eigen::Vector4d& jet);

}  // namespace asymint
