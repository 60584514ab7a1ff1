#include "asymint/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "asymint/errors.hpp"

namespace asymint {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 - -92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

}  // namespace

Trajectory integrate_adaptive(const OdeRhs& f, double t0, const Eigen::VectorXd& x0, const std::vector<double>& outputs,
                              double tol) {
  Trajectory traj;
  traj.tol = tol;
  const double rtol = tol, atol = tol * 1e-3;
  double t = t0;
  Eigen::VectorXd x = x0;
  Eigen::VectorXd k1 = f(t, x);
  double h = 1e-3;
  for (double target : outputs) {
    if (target < t) throw Error(Errc::InvalidArgument, "output times must be increasing and not before t0");
    while (t < target) {
      const bool last = t + h >= target;
      const double step = last ? target - t : h;
      if (step < 1e-14 * std::max(1.0, std::abs(t))) {
        std::ostringstream msg;
        msg << "step size underflow at t=" << t;
        throw Error(Errc::StepUnderflow, msg.str());
      }
      const Eigen::VectorXd k2 = f(t + c2 * step, x + step * (a21 * k1));
      const Eigen::VectorXd k3 = f(t + c3 * step, x + step * (a31 * k1 + a32 * k2));
      const Eigen::VectorXd k4 = f(t + c4 * step, x + step * (a41 * k1 + a42 * k2 + a43 * k3));
      const Eigen::VectorXd k5 = f(t + c5 * step, x + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const Eigen::VectorXd k6 = f(t + step, x + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const Eigen::VectorXd xn = x + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const Eigen::VectorXd k7 = f(t + step, xn);
      const Eigen::VectorXd err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const Eigen::ArrayXd scale = atol + rtol * x.cwiseAbs().cwiseMax(xn.cwiseAbs()).array();
      const double en = std::sqrt((err.array() / scale).square().mean());
      if (!std::isfinite(en) || !xn.allFinite()) {
        if (step < 1e-10) throw Error(Errc::NonFinite, "oracle state became non-finite");
        h = 0.25 * step;
        ++traj.rejected;
        continue;
      }
      if (en <= 1.0) {
        t = last ? target : t + step;
        x = xn;
        k1 = k7;
        ++traj.steps;
        const double grow = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        if (!last || grow < 1.0) h = step * grow;
      } else {
        h = step * std::max(0.2, 0.9 * std::pow(en, -0.2));
        ++traj.rejected;
      }
    }
    traj.times.push_back(t);
    traj.states.push_back(x);
  }
  return traj;
}

Trajectory integrate_linear4(const Quartic& a, const Perturbations& r, double t0, const Eigen::Vector4d& y0,
                             const std::vector<double>& outputs, double tol) {
  const OdeRhs rhs = [&a, &r](double t, const Eigen::VectorXd& y) {
    Eigen::VectorXd d(4);
    d << y(1), y(2), y(3),
        -((a.a3 + r[3](t)) * y(3) + (a.a2 + r[2](t)) * y(2) + (a.a1 + r[1](t)) * y(1) + (a.a0 + r[0](t)) * y(0));
    return d;
  };
  return integrate_adaptive(rhs, t0, y0, outputs, tol);
}

Trajectory integrate_riccati(const RiccatiSystem& sys, double t0, const Eigen::Vector3d& z0,
                             const std::vector<double>& outputs, double tol) {
  const OdeRhs rhs = [&sys](double t, const Eigen::VectorXd& z) {
    const Eigen::Vector3d x = z;
    const PointCoefficients c = sys.coefficients(t);
    Eigen::VectorXd d(3);
    d << z(1), z(2), -(sys.b(0) * z(2) + sys.b(1) * z(1) + sys.b(2) * z(0)) + c.forcing + eval_F(c, sys.weights, x);
    return d;
  };
  return integrate_adaptive(rhs, t0, z0, outputs, tol);
}

CrossValidation cross_validate(const FundamentalSolution& fs, const Quartic& a, const Perturbations& r, double span,
                               double tol) {
  CrossValidation cv;
  const double t0 = fs.t0();
  const bool dominant = fs.root() == 1;
  cv.method = dominant ? "direct" : "log_derivative";
  cv.span = dominant ? span : std::min(span, 3.0);
  cv.span = std::min(cv.span, fs.z().t_max() - t0);
  cv.tolerance = dominant ? 1e-4 : 1e-3;

  constexpr int samples = 101;
  std::vector<double> ts(samples);
  for (int n = 0; n < samples; ++n) ts[static_cast<std::size_t>(n)] = t0 + cv.span * n / (samples - 1);

  const Eigen::Matrix<double, 5, 1> d0 = fs.derivatives(t0);
  const Trajectory traj = integrate_linear4(a, r, t0, d0.head<4>(), ts, tol);
  for (std::size_t n = 0; n < ts.size(); ++n) {
    const Eigen::VectorXd& y = traj.states[n];
    double err;
    if (dominant) {
      const double ref = fs.y(ts[n]);
      err = std::abs(y(0) - ref) / std::abs(ref);
    } else {
      err = std::abs(y(1) / y(0) - (fs.lambda() + fs.z()(ts[n])(0)));
    }
    cv.max_error = std::max(cv.max_error, err);
  }

  cv.riccati_method = "forward";
  cv.riccati_span = dominant ? cv.span : std::min(cv.span, 1.0);
  std::vector<double> zs(samples);
  for (int n = 0; n < samples; ++n) zs[static_cast<std::size_t>(n)] = t0 + cv.riccati_span * n / (samples - 1);
  const Trajectory zt = integrate_riccati(fs.system(), t0, fs.z()(t0), zs, tol);
  for (std::size_t n = 0; n < zs.size(); ++n) {
    const Eigen::Vector3d ref = fs.z()(zs[n]);
    cv.riccati_max_error = std::max(cv.riccati_max_error, (zt.states[n] - Eigen::VectorXd(ref)).cwiseAbs().sum());
  }
  cv.pass = cv.max_error <= cv.tolerance;
  return cv;
}

}  // namespace asymint
