#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "asymint/grid.hpp"
#include "asymint/quadrature.hpp"
#include "asymint/riccati.hpp"

namespace asymint {

/// y_i(t) = exp(int_{t0}^t (lambda_i + z)) built from a converged reduced solution z.
class FundamentalSolution {
 public:
  FundamentalSolution(RiccatiSystem sys, GridFunction z, double pi);

  [[nodiscard]] int root() const noexcept { return sys_.root; }
  [[nodiscard]] double lambda() const noexcept { return sys_.lambda; }
  /// Product over k != i of (lambda_k - lambda_i).
  [[nodiscard]] double pi() const noexcept { return pi_; }
  [[nodiscard]] const GridFunction& z() const noexcept { return z_; }
  [[nodiscard]] const RiccatiSystem& system() const noexcept { return sys_; }
  [[nodiscard]] double t0() const { return z_.t0(); }

  [[nodiscard]] double integral_z(double t) const;
  [[nodiscard]] double log_y(double t) const { return sys_.lambda * (t - t0()) + integral_z(t); }
  [[nodiscard]] double y(double t) const;
  /// (z, z', z'', z''') with z''' taken from the reduced equation itself.
  [[nodiscard]] Eigen::Vector4d jet(double t) const;
  /// y^(l) / y for l = 1..4.
  [[nodiscard]] Eigen::Vector4d ratios(double t) const;
  /// (y, y', y'', y''', y'''').
  [[nodiscard]] Eigen::Matrix<double, 5, 1> derivatives(double t) const;

 private:
  RiccatiSystem sys_;
  GridFunction z_;
  Eigen::ArrayXd cumulative_;
  double pi_;
};

[[nodiscard]] FundamentalSolution fundamental_solution(const RiccatiSystem& sys, const CharacteristicData& cd,
                                                       const GridFunction& z);

struct RatioErrors {
  std::vector<double> t;
  Eigen::ArrayXXd error;  // row per time, column l-1 holds |y^(l)/y - lambda^l|
  bool pass = false;
  double tolerance = 1e-4;
};

[[nodiscard]] RatioErrors derivative_ratio_limits(const FundamentalSolution& fs, const std::vector<double>& ts,
                                                  double ratio_tol = 1e-4);

/// det [y_i^(l) / y_i], rows i = 1..4, columns l = 0..3.
[[nodiscard]] double wronskian_normalized(const std::array<const FundamentalSolution*, 4>& fss, double t);
/// log |W| = log |normalized determinant| + sum_i log y_i.
[[nodiscard]] double log_abs_wronskian(const std::array<const FundamentalSolution*, 4>& fss, double t);
/// Entrywise relative deviation of [y_i^(l)/y_i] from [lambda_i^l].
[[nodiscard]] double vandermonde_deviation(const std::array<const FundamentalSolution*, 4>& fss, double t);

struct AsymptoticFormula {
  double log_y_direct = 0.0;
  double log_y_formula = 0.0;  // lambda (t-t0) + pi^{-1} int (p - F)
  double log_y_printed = 0.0;  // lambda (t-t0) + pi^{-1} int (p + F)
  double relative_gap = 0.0;   // |y_formula / y - 1|
  double relative_gap_printed = 0.0;
  Eigen::Vector4d prefactor;   // (y^(l)/y) / lambda^l
};

[[nodiscard]] AsymptoticFormula asymptotic_integral_formula(const FundamentalSolution& fs, double t);

struct ExchangeIdentity {
  double lhs = 0.0;          // int_{t0}^t int_tau^inf exp(-a (tau - s)) H(s) ds dtau
  double rhs = 0.0;          // -(1/a)[G(t) - G(t0)] - (1/a) int_{t0}^t H
  double rhs_plus_sign = 0.0;  // same with +(1/a) int H
};

/// Exchange-of-integration identity behind the asymptotic formula; H must decay faster than exp(a s).
[[nodiscard]] ExchangeIdentity exchange_identity(double a, const ScalarFunction& H, double decay, double t0, double t,
                                                 const QuadratureOptions& opts = {});

}  // namespace asymint
