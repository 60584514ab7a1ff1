#pragma once

#include <array>

#include <Eigen/Core>

namespace asymint {

/// Monic quartic x^4 + a3 x^3 + a2 x^2 + a1 x + a0.
struct Quartic {
  double a3 = 0.0;
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;

  [[nodiscard]] double operator()(double x) const noexcept {
    return (((x + a3) * x + a2) * x + a1) * x + a0;
  }
  [[nodiscard]] double derivative(double x) const noexcept {
    return ((4.0 * x + 3.0 * a3) * x + 2.0 * a2) * x + a1;
  }
  /// Magnitude used to make residual tolerances relative.
  [[nodiscard]] double scale(double x) const noexcept;
};

/// Monic quartic with the given roots.
[[nodiscard]] Quartic quartic_from_roots(const Eigen::Vector4d& roots);

struct SpectraOptions {
  double gap_tol = 1e-8;
  double imag_tol = 1e-9;
  double root_tol = 1e-12;
};

/// Ordered real roots and the per-root shifted differences.
struct CharacteristicData {
  Quartic a;
  Eigen::Vector4d lambda;               // strictly decreasing
  std::array<Eigen::Vector3d, 4> gamma;  // gamma[i-1] = {lambda_j - lambda_i : j != i}, decreasing
  double min_gap = 0.0;

  [[nodiscard]] double root(int i) const { return lambda(i - 1); }
  [[nodiscard]] const Eigen::Vector3d& shifted(int i) const { return gamma[static_cast<std::size_t>(i - 1)]; }
};

/// Throws Error(InvalidArgument) unless 1 <= i <= 4.
void check_root_index(int i);

/// All four roots of a quartic with real spectrum, polished by Newton steps.
[[nodiscard]] Eigen::Vector4d solve_quartic_real(const Quartic& a, const SpectraOptions& opts = {});

[[nodiscard]] CharacteristicData order_and_check_h1(const Quartic& a, const Eigen::Vector4d& roots,
                                                    const SpectraOptions& opts = {});

[[nodiscard]] CharacteristicData characteristic_data(const Quartic& a, const SpectraOptions& opts = {});

/// (b2, b1, b0) of mu^3 + b2 mu^2 + b1 mu + b0, whose roots are lambda_j - lambda_i.
[[nodiscard]] Eigen::Vector3d shifted_cubic_coeffs(const CharacteristicData& cd, int i);

[[nodiscard]] inline double eval_cubic(const Eigen::Vector3d& b, double mu) noexcept {
  return ((mu + b(0)) * mu + b(1)) * mu + b(2);
}

/// Product over k != i of (lambda_k - lambda_i).
[[nodiscard]] double root_product(const CharacteristicData& cd, int i);

/// Vandermonde product over i<j of (lambda_j - lambda_i).
[[nodiscard]] double vandermonde(const Eigen::Vector4d& lambda);

}  // namespace asymint
