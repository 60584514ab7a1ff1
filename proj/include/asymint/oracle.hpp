#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "asymint/riccati.hpp"
#include "asymint/synthesis.hpp"

namespace asymint {

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  double tol = 1e-10;
  long steps = 0;
  long rejected = 0;
};

using OdeRhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

/// Dormand-Prince 5(4) with adaptive steps; relative tolerance tol, absolute tol*1e-3.
/// The state is reported at each requested output time (increasing, starting at or after t0).
[[nodiscard]] Trajectory integrate_adaptive(const OdeRhs& f, double t0, const Eigen::VectorXd& x0,
                                            const std::vector<double>& outputs, double tol = 1e-10);

/// y'''' + sum_k (a_k + r_k(t)) y^(k) = 0 with state (y, y', y'', y''').
[[nodiscard]] Trajectory integrate_linear4(const Quartic& a, const Perturbations& r, double t0,
                                           const Eigen::Vector4d& y0, const std::vector<double>& outputs,
                                           double tol = 1e-10);

/// Reduced third-order equation with state (z, z', z'').
[[nodiscard]] Trajectory integrate_riccati(const RiccatiSystem& sys, double t0, const Eigen::Vector3d& z0,
                                           const std::vector<double>& outputs, double tol = 1e-10);

struct CrossValidation {
  std::string method;           // "direct" (relative error in y) or "log_derivative" (error in y'/y)
  double span = 0.0;
  double max_error = 0.0;
  std::string riccati_method;   // "forward" when the reduced equation was integrated
  double riccati_span = 0.0;
  double riccati_max_error = 0.0;  // sup of |z| + |z'| + |z''| differences
  double tolerance = 0.0;
  bool pass = false;
};

/// Dominant root: relative error of y over [t0, t0+span].  Other roots: error of y'/y over
/// [t0, t0+min(span,3)], since forward integration drifts toward the dominant mode.
/// The oracle runs at tol, kept well below the accuracy being checked.
[[nodiscard]] CrossValidation cross_validate(const FundamentalSolution& fs, const Quartic& a, const Perturbations& r,
                                             double span = 5.0, double tol = 1e-12);

}  // namespace asymint
