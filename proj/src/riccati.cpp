#include "asymint/riccati.hpp"

#include <cmath>

namespace asymint {

PointCoefficients RiccatiSystem::coefficients(double t) const {
  const double r0 = r[0](t), r1 = r[1](t), r2 = r[2](t), r3 = r[3](t);
  const double l = lambda;
  PointCoefficients c;
  c.forcing = -(((l * r3 + r2) * l + r1) * l + r0);
  const double f = -(3.0 * l * r3 + r2);
  c.linear << -(3.0 * l * l * r3 + 2.0 * l * r2 + r1), f, -r3;
  c.polynomial << -3.0 * r3, f, -r3;
  return c;
}

double RiccatiSystem::p(double mu, double t) const {
  return ((mu * r[3](t) + r[2](t)) * mu + r[1](t)) * mu + r[0](t);
}

QuarticWeights quartic_weights(double l, const Quartic& a) {
  return {-3.0, -(12.0 * l + 3.0 * a.a3), -4.0, -(6.0 * l * l + 3.0 * l * a.a3 + a.a2), -6.0, -(4.0 * l + a.a3), -1.0};
}

RiccatiSystem build_system(const CharacteristicData& cd, const Perturbations& r, int i, OrientationPolicy policy,
                           double gap_tol) {
  check_root_index(i);
  const Eigen::Vector3d b = shifted_cubic_coeffs(cd, i);
  OrientationChoice choice = select_orientation(cd.shifted(i), b);
  if (policy == OrientationPolicy::Printed) choice.orientation = Orientation::Printed;
  if (policy == OrientationPolicy::Reflected) choice.orientation = Orientation::Reflected;
  return RiccatiSystem{i,
                       cd.root(i),
                       cd.a,
                       b,
                       quartic_weights(cd.root(i), cd.a),
                       r,
                       GreenKernel(cd.shifted(i), choice.orientation, gap_tol),
                       choice};
}

double eval_F(const PointCoefficients& c, const QuarticWeights& w, const Eigen::Vector3d& x) {
  const double x1 = x(0), x2 = x(1), x3 = x(2);
  const double x11 = x1 * x1;
  const double lin = c.linear.dot(x);
  const double poly = c.polynomial(0) * x1 * x2 + c.polynomial(1) * x11 + c.polynomial(2) * x11 * x1;
  const double quart = w[0] * x2 * x2 + w[1] * x1 * x2 + w[2] * x1 * x3 + w[3] * x11 + w[4] * x11 * x2 +
                       w[5] * x11 * x1 + w[6] * x11 * x11;
  return lin + poly + quart;
}

double riccati_residual(const RiccatiSystem& sys, double t, const Eigen::Vector4d& jet) {
  const PointCoefficients c = sys.coefficients(t);
  const double lhs = jet(3) + sys.b(0) * jet(2) + sys.b(1) * jet(1) + sys.b(2) * jet(0);
  return lhs - c.forcing - eval_F(c, sys.weights, jet.head<3>());
}

Eigen::Vector4d derivative_ratios(double lambda, const Eigen::Vector4d& jet) {
  const double w = lambda + jet(0), w1 = jet(1), w2 = jet(2), w3 = jet(3);
  const double ww = w * w;
  return {w, ww + w1, ww * w + 3.0 * w * w1 + w2, ww * ww + 6.0 * ww * w1 + 3.0 * w1 * w1 + 4.0 * w * w2 + w3};
}

LiftResidual lift_residual_equivalence(const RiccatiSystem& sys, double t, double t0, double integral_z,
                                       const Eigen::Vector4d& jet) {
  const Eigen::Vector4d q = derivative_ratios(sys.lambda, jet);
  const double r0 = sys.r[0](t), r1 = sys.r[1](t), r2 = sys.r[2](t), r3 = sys.r[3](t);
  const auto& a = sys.a;
  LiftResidual out;
  out.y = std::exp(sys.lambda * (t - t0) + integral_z);
  const double ratio_residual = q(3) + (a.a3 + r3) * q(2) + (a.a2 + r2) * q(1) + (a.a1 + r1) * q(0) + a.a0 + r0;
  out.fourth_order = out.y * ratio_residual;
  out.lifted = out.y * riccati_residual(sys, t, jet);
  return out;
}

}  // namespace asymint
