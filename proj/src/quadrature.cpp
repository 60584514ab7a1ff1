#include "asymint/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "asymint/errors.hpp"

namespace asymint {
namespace {

GaussLegendre16 build_rule() {
  GaussLegendre16 rule{};
  constexpr int n = GaussLegendre16::size;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const auto idx = static_cast<std::size_t>(n - 1 - i);
    rule.x[idx] = 0.5 * (x + 1.0);
    rule.w[idx] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double adapt(const ScalarFunction& f, double a, double b, double whole, double tol, int depth, int max_depth) {
  const double m = 0.5 * (a + b);
  const double left = gauss_panel(f, a, m);
  const double right = gauss_panel(f, m, b);
  const double refined = left + right;
  if (!std::isfinite(refined)) return refined;
  if (std::abs(refined - whole) <= tol || depth >= max_depth || m <= a || m >= b) return refined;
  return adapt(f, a, m, left, 0.5 * tol, depth + 1, max_depth) + adapt(f, m, b, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

const GaussLegendre16& gauss_legendre16() {
  static const GaussLegendre16 rule = build_rule();
  return rule;
}

double integrate(const ScalarFunction& f, double a, double b, const QuadratureOptions& opts) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, opts);
  const double whole = gauss_panel(f, a, b);
  const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(whole));
  return adapt(f, a, b, whole, tol, 0, opts.max_depth);
}

double integrate_to_infinity(const ScalarFunction& f, double a, double decay, const QuadratureOptions& opts) {
  if (!(decay > 0.0)) throw Error(Errc::InvalidArgument, "tail decay rate must be positive");
  const double width = 1.0 / decay;
  const int max_panels = 4000;
  double total = 0.0;
  int quiet = 0;
  int growing = 0;
  double previous = 0.0;
  int k = 0;
  for (; k < max_panels; ++k) {
    const double lo = a + k * width;
    // later panels only need to be accurate relative to what has already been summed
    const double panel_tol = 0.25 * std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    const double piece = integrate(f, lo, lo + width, QuadratureOptions{panel_tol, opts.rel_tol, opts.max_depth});
    total += piece;
    if (!std::isfinite(total)) break;
    // a tail that keeps growing panel after panel is divergent, whatever underflow does to it later
    growing = std::abs(piece) > std::abs(previous) && piece != 0.0 ? growing + 1 : 0;
    previous = piece;
    if (growing >= 20) break;
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    quiet = std::abs(piece) <= 0.01 * tol ? quiet + 1 : 0;
    if (quiet >= 3) return total;
  }
  std::ostringstream msg;
  msg << "integral over [" << a << ", inf) still contributing after " << k + 1 << " panels";
  throw Error(Errc::TailNotConvergent, msg.str());
}

}  // namespace asymint
