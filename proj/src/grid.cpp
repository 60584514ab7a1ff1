#include "asymint/grid.hpp"

#include <algorithm>
#include <cmath>

#include "asymint/errors.hpp"

namespace asymint {

GridFunction::GridFunction(const Eigen::ArrayXd& nodes)
    : t(nodes),
      value(Eigen::ArrayXd::Zero(nodes.size())),
      d1(Eigen::ArrayXd::Zero(nodes.size())),
      d2(Eigen::ArrayXd::Zero(nodes.size())) {}

Eigen::Index GridFunction::panel(double s) const {
  const auto* begin = t.data();
  const auto* end = t.data() + t.size();
  Eigen::Index n = std::upper_bound(begin, end, s) - begin - 1;
  return std::clamp<Eigen::Index>(n, 0, t.size() - 2);
}

Eigen::Vector3d GridFunction::operator()(double s) const {
  const Eigen::Index n = panel(s);
  const double h = t(n + 1) - t(n);
  const double x = (s - t(n)) / h;
  Eigen::Matrix<double, 6, 1> data;
  data << value(n), h * d1(n), h * h * d2(n), value(n + 1), h * d1(n + 1), h * h * d2(n + 1);
  const Eigen::Vector3d raw = hermite5_basis(x) * data;
  return {raw(0), raw(1) / h, raw(2) / (h * h)};
}

bool GridFunction::all_finite() const {
  return value.isFinite().all() && d1.isFinite().all() && d2.isFinite().all();
}

Eigen::ArrayXd graded_nodes(double t0, double t_max, Eigen::Index count) {
  if (count < 2 || !(t_max > t0)) throw Error(Errc::InvalidArgument, "grid needs at least two nodes and t_max > t0");
  Eigen::ArrayXd u = Eigen::ArrayXd::LinSpaced(count, 0.0, 1.0);
  Eigen::ArrayXd nodes = t0 + (t_max - t0) * u.square();
  nodes(count - 1) = t_max;
  return nodes;
}

Eigen::ArrayXd channel_sum(const GridFunction& z) { return z.value.abs() + z.d1.abs() + z.d2.abs(); }

double c0_norm(const GridFunction& z) { return z.size() == 0 ? 0.0 : channel_sum(z).maxCoeff(); }

double c0_distance(const GridFunction& a, const GridFunction& b) {
  return ((a.value - b.value).abs() + (a.d1 - b.d1).abs() + (a.d2 - b.d2).abs()).maxCoeff();
}

Eigen::Matrix<double, 3, 6> hermite5_basis(double x) {
  const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x;
  Eigen::Matrix<double, 3, 6> m;
  m.row(0) << 1 - 10 * x3 + 15 * x4 - 6 * x5, x - 6 * x3 + 8 * x4 - 3 * x5, 0.5 * (x2 - 3 * x3 + 3 * x4 - x5),
      10 * x3 - 15 * x4 + 6 * x5, -4 * x3 + 7 * x4 - 3 * x5, 0.5 * (x3 - 2 * x4 + x5);
  m.row(1) << -30 * x2 + 60 * x3 - 30 * x4, 1 - 18 * x2 + 32 * x3 - 15 * x4, 0.5 * (2 * x - 9 * x2 + 12 * x3 - 5 * x4),
      30 * x2 - 60 * x3 + 30 * x4, -12 * x2 + 28 * x3 - 15 * x4, 0.5 * (3 * x2 - 8 * x3 + 5 * x4);
  m.row(2) << -60 * x + 180 * x2 - 120 * x3, -36 * x + 96 * x2 - 60 * x3, 0.5 * (2 - 18 * x + 36 * x2 - 20 * x3),
      60 * x - 180 * x2 + 120 * x3, -24 * x + 84 * x2 - 60 * x3, 0.5 * (6 * x - 24 * x2 + 20 * x3);
  return m;
}

namespace {

// Exact integral of the quintic Hermite interpolant over [t(n), t(n) + x h].
double partial_panel(const GridFunction& z, Eigen::Index n, double x) {
  const double h = z.t(n + 1) - z.t(n);
  const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x, x6 = x5 * x;
  const double i0a = x - 2.5 * x4 + 3 * x5 - x6;
  const double i1a = 0.5 * x2 - 1.5 * x4 + 1.6 * x5 - 0.5 * x6;
  const double i2a = 0.5 * (x3 / 3 - 0.75 * x4 + 0.6 * x5 - x6 / 6);
  const double i0b = 2.5 * x4 - 3 * x5 + x6;
  const double i1b = -x4 + 1.4 * x5 - 0.5 * x6;
  const double i2b = 0.5 * (0.25 * x4 - 0.4 * x5 + x6 / 6);
  return h * (i0a * z.value(n) + i1a * h * z.d1(n) + i2a * h * h * z.d2(n) + i0b * z.value(n + 1) +
              i1b * h * z.d1(n + 1) + i2b * h * h * z.d2(n + 1));
}

}  // namespace

Eigen::ArrayXd cumulative_integral(const GridFunction& z) {
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(z.size());
  for (Eigen::Index n = 0; n + 1 < z.size(); ++n) out(n + 1) = out(n) + partial_panel(z, n, 1.0);
  return out;
}

double integral_to(const GridFunction& z, const Eigen::ArrayXd& cumulative, double s) {
  const Eigen::Index n = z.panel(s);
  const double x = (s - z.t(n)) / (z.t(n + 1) - z.t(n));
  return cumulative(n) + partial_panel(z, n, x);
}

}  // namespace asymint
