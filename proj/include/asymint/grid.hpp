#pragma once

#include <array>

#include <Eigen/Core>

namespace asymint {

/// Samples of z, z', z'' on increasing nodes; quintic Hermite interpolation between nodes.
struct GridFunction {
  Eigen::ArrayXd t;
  Eigen::ArrayXd value;
  Eigen::ArrayXd d1;
  Eigen::ArrayXd d2;

  GridFunction() = default;
  /// Zero function on the given nodes.
  explicit GridFunction(const Eigen::ArrayXd& nodes);

  [[nodiscard]] Eigen::Index size() const noexcept { return t.size(); }
  [[nodiscard]] double t0() const { return t(0); }
  [[nodiscard]] double t_max() const { return t(t.size() - 1); }

  /// Channel d (0, 1, 2) of the interpolant at time s inside [t0, t_max].
  [[nodiscard]] Eigen::Vector3d operator()(double s) const;
  /// Node index n with t(n) <= s < t(n+1), clamped to a valid panel.
  [[nodiscard]] Eigen::Index panel(double s) const;
  [[nodiscard]] bool all_finite() const;
};

/// Nodes t0 + (t_max - t0) u^2 with u uniform on [0, 1]: spacing grows like sqrt away from t0.
[[nodiscard]] Eigen::ArrayXd graded_nodes(double t0, double t_max, Eigen::Index count);

/// sup over nodes of |z| + |z'| + |z''|.
[[nodiscard]] double c0_norm(const GridFunction& z);
/// c0_norm of the difference of two functions on the same nodes.
[[nodiscard]] double c0_distance(const GridFunction& a, const GridFunction& b);
/// |z| + |z'| + |z''| at each node.
[[nodiscard]] Eigen::ArrayXd channel_sum(const GridFunction& z);

/// Quintic Hermite basis on [0, 1] for value, first and second derivative data at both ends.
/// Row r is the r-th x-derivative; columns are (f_a, h f'_a, h^2 f''_a, f_b, h f'_b, h^2 f''_b).
[[nodiscard]] Eigen::Matrix<double, 3, 6> hermite5_basis(double x);

/// Integral over each panel of the Hermite interpolant, cumulative from t0.
[[nodiscard]] Eigen::ArrayXd cumulative_integral(const GridFunction& z);
/// Integral of the interpolant from t0 to s.
[[nodiscard]] double integral_to(const GridFunction& z, const Eigen::ArrayXd& cumulative, double s);

}  // namespace asymint
