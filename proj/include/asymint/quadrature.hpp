#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace asymint {

/// 16-point Gauss-Legendre rule on [0, 1].
struct GaussLegendre16 {
  static constexpr int size = 16;
  std::array<double, size> x;
  std::array<double, size> w;
};

[[nodiscard]] const GaussLegendre16& gauss_legendre16();

template <class F>
[[nodiscard]] double gauss_panel(F&& f, double a, double b) {
  const auto& gl = gauss_legendre16();
  const double h = b - a;
  double sum = 0.0;
  for (int q = 0; q < GaussLegendre16::size; ++q) sum += gl.w[static_cast<std::size_t>(q)] * f(a + h * gl.x[static_cast<std::size_t>(q)]);
  return sum * h;
}

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_depth = 40;
};

using ScalarFunction = std::function<double(double)>;

/// Adaptive bisection on 16-point panels; error target max(abs_tol, rel_tol*|I|).
[[nodiscard]] double integrate(const ScalarFunction& f, double a, double b, const QuadratureOptions& opts = {});

/// Integral over [a, inf) for an integrand decaying at least like exp(-decay*(s-a)).
/// Panels of width ~1/decay are added until their contribution falls below tolerance;
/// throws TailNotConvergent when the cap is reached first, or when panels keep growing.
[[nodiscard]] double integrate_to_infinity(const ScalarFunction& f, double a, double decay,
                                           const QuadratureOptions& opts = {});

}  // namespace asymint
