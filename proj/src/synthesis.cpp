#include "asymint/synthesis.hpp"

#include <cmath>

#include <Eigen/LU>

#include "asymint/errors.hpp"

namespace asymint {

FundamentalSolution::FundamentalSolution(RiccatiSystem sys, GridFunction z, double pi)
    : sys_(std::move(sys)), z_(std::move(z)), pi_(pi) {
  cumulative_ = cumulative_integral(z_);
}

FundamentalSolution fundamental_solution(const RiccatiSystem& sys, const CharacteristicData& cd, const GridFunction& z) {
  return FundamentalSolution(sys, z, root_product(cd, sys.root));
}

double FundamentalSolution::integral_z(double t) const { return integral_to(z_, cumulative_, t); }

double FundamentalSolution::y(double t) const { return std::exp(log_y(t)); }

Eigen::Vector4d FundamentalSolution::jet(double t) const {
  const Eigen::Vector3d x = z_(t);
  const PointCoefficients c = sys_.coefficients(t);
  const double z3 = -(sys_.b(0) * x(2) + sys_.b(1) * x(1) + sys_.b(2) * x(0)) + c.forcing + eval_F(c, sys_.weights, x);
  return {x(0), x(1), x(2), z3};
}

Eigen::Vector4d FundamentalSolution::ratios(double t) const { return derivative_ratios(sys_.lambda, jet(t)); }

Eigen::Matrix<double, 5, 1> FundamentalSolution::derivatives(double t) const {
  const double yt = y(t);
  Eigen::Matrix<double, 5, 1> out;
  out(0) = yt;
  out.tail<4>() = yt * ratios(t);
  return out;
}

RatioErrors derivative_ratio_limits(const FundamentalSolution& fs, const std::vector<double>& ts, double ratio_tol) {
  RatioErrors out;
  out.t = ts;
  out.tolerance = ratio_tol;
  out.error.resize(static_cast<Eigen::Index>(ts.size()), 4);
  const double l = fs.lambda();
  for (std::size_t n = 0; n < ts.size(); ++n) {
    const Eigen::Vector4d q = fs.ratios(ts[n]);
    for (int m = 0; m < 4; ++m) out.error(static_cast<Eigen::Index>(n), m) = std::abs(q(m) - std::pow(l, m + 1));
  }
  out.pass = !ts.empty() && (out.error.row(out.error.rows() - 1) <= ratio_tol).all();
  return out;
}

namespace {

Eigen::Matrix4d ratio_matrix(const std::array<const FundamentalSolution*, 4>& fss, double t) {
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector4d q = fss[static_cast<std::size_t>(i)]->ratios(t);
    m.row(i) << 1.0, q(0), q(1), q(2);
  }
  return m;
}

}  // namespace

double wronskian_normalized(const std::array<const FundamentalSolution*, 4>& fss, double t) {
  return ratio_matrix(fss, t).determinant();
}

double log_abs_wronskian(const std::array<const FundamentalSolution*, 4>& fss, double t) {
  double s = std::log(std::abs(wronskian_normalized(fss, t)));
  for (const auto* fs : fss) s += fs->log_y(t);
  return s;
}

double vandermonde_deviation(const std::array<const FundamentalSolution*, 4>& fss, double t) {
  const Eigen::Matrix4d m = ratio_matrix(fss, t);
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double l = fss[static_cast<std::size_t>(i)]->lambda();
    for (int c = 1; c < 4; ++c) {
      const double ref = std::pow(l, c);
      worst = std::max(worst, std::abs(m(i, c) - ref) / std::max(std::abs(ref), 1e-300));
    }
  }
  return worst;
}

AsymptoticFormula asymptotic_integral_formula(const FundamentalSolution& fs, double t) {
  const RiccatiSystem& sys = fs.system();
  const GridFunction& z = fs.z();
  double int_p = 0.0, int_F = 0.0;
  const double t0 = fs.t0();
  const Eigen::Index last = z.panel(t);
  for (Eigen::Index n = 0; n <= last; ++n) {
    const double lo = z.t(n);
    const double hi = n == last ? t : z.t(n + 1);
    if (hi <= lo) continue;
    int_p += gauss_panel([&](double s) { return sys.p(sys.lambda, s); }, lo, hi);
    int_F += gauss_panel([&](double s) { return eval_F(sys, s, z(s)); }, lo, hi);
  }
  AsymptoticFormula out;
  out.log_y_direct = fs.log_y(t);
  out.log_y_formula = sys.lambda * (t - t0) + (int_p - int_F) / fs.pi();
  out.log_y_printed = sys.lambda * (t - t0) + (int_p + int_F) / fs.pi();
  out.relative_gap = std::abs(std::expm1(out.log_y_formula - out.log_y_direct));
  out.relative_gap_printed = std::abs(std::expm1(out.log_y_printed - out.log_y_direct));
  const Eigen::Vector4d q = fs.ratios(t);
  for (int m = 0; m < 4; ++m) out.prefactor(m) = q(m) / std::pow(sys.lambda, m + 1);
  return out;
}

ExchangeIdentity exchange_identity(double a, const ScalarFunction& H, double decay, double t0, double t,
                                   const QuadratureOptions& opts) {
  if (a == 0.0) throw Error(Errc::InvalidArgument, "exchange identity needs a nonzero exponent");
  const double tail_decay = decay - std::max(a, 0.0);
  if (!(tail_decay > 0.0)) throw Error(Errc::InvalidArgument, "H must decay faster than exp(a s)");
  auto G = [&](double tau) {
    return integrate_to_infinity([&](double s) { return std::exp(-a * (tau - s)) * H(s); }, tau, tail_decay, opts);
  };
  ExchangeIdentity out;
  out.lhs = integrate(G, t0, t, opts);
  const double boundary = -(G(t) - G(t0)) / a;
  const double intH = integrate(H, t0, t, opts);
  out.rhs = boundary - intH / a;
  out.rhs_plus_sign = boundary + intH / a;
  return out;
}

}  // namespace asymint
