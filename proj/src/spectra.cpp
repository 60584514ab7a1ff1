#include "asymint/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "asymint/errors.hpp"

namespace asymint {

double Quartic::scale(double x) const noexcept {
  const double ax = std::abs(x);
  return std::max(1.0, ax * ax * ax * ax + std::abs(a3) * ax * ax * ax + std::abs(a2) * ax * ax +
                           std::abs(a1) * ax + std::abs(a0));
}

Quartic quartic_from_roots(const Eigen::Vector4d& r) {
  const double e1 = r.sum();
  double e2 = 0.0, e3 = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      e2 += r(i) * r(j);
      for (int k = j + 1; k < 4; ++k) e3 += r(i) * r(j) * r(k);
    }
  const double e4 = r.prod();
  return Quartic{-e1, e2, -e3, e4};
}

void check_root_index(int i) {
  if (i < 1 || i > 4) throw Error(Errc::InvalidArgument, "root index must be in 1..4, got " + std::to_string(i));
}

Eigen::Vector4d solve_quartic_real(const Quartic& a, const SpectraOptions& opts) {
  for (double c : {a.a3, a.a2, a.a1, a.a0})
    if (!std::isfinite(c)) throw Error(Errc::NonFinite, "quartic coefficients must be finite");

  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  companion.row(0) << -a.a3, -a.a2, -a.a1, -a.a0;
  companion(1, 0) = companion(2, 1) = companion(3, 2) = 1.0;
  Eigen::EigenSolver<Eigen::Matrix4d> solver(companion, false);
  if (solver.info() != Eigen::Success) throw Error(Errc::IllConditioned, "companion eigenvalue iteration failed");

  Eigen::Vector4d roots;
  for (int k = 0; k < 4; ++k) {
    const std::complex<double> z = solver.eigenvalues()(k);
    if (std::abs(z.imag()) > opts.imag_tol * std::max(1.0, std::abs(z))) {
      std::ostringstream msg;
      msg << "root " << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i is not real";
      throw Error(Errc::ComplexRoots, msg.str());
    }
    double x = z.real();
    for (int step = 0; step < 8; ++step) {
      const double fx = a(x);
      if (std::abs(fx) <= opts.root_tol * a.scale(x)) break;
      const double dfx = a.derivative(x);
      if (dfx == 0.0) break;
      const double next = x - fx / dfx;
      if (std::abs(a(next)) >= std::abs(fx)) break;
      x = next;
    }
    if (std::abs(a(x)) > opts.root_tol * a.scale(x)) {
      std::ostringstream msg;
      msg << "polishing stalled at " << x << " with residual " << a(x);
      throw Error(Errc::IllConditioned, msg.str());
    }
    roots(k) = x;
  }
  std::sort(roots.data(), roots.data() + 4, std::greater<>());
  return roots;
}

CharacteristicData order_and_check_h1(const Quartic& a, const Eigen::Vector4d& roots, const SpectraOptions& opts) {
  CharacteristicData cd;
  cd.a = a;
  cd.lambda = roots;
  std::sort(cd.lambda.data(), cd.lambda.data() + 4, std::greater<>());
  cd.min_gap = (cd.lambda.head<3>() - cd.lambda.tail<3>()).minCoeff();
  if (!(cd.min_gap >= opts.gap_tol)) {
    std::ostringstream msg;
    msg << "characteristic roots are not separated: minimal gap " << cd.min_gap << " < " << opts.gap_tol;
    throw Error(Errc::RepeatedRealParts, msg.str());
  }
  for (int i = 0; i < 4; ++i) {
    int m = 0;
    for (int j = 0; j < 4; ++j)
      if (j != i) cd.gamma[static_cast<std::size_t>(i)](m++) = cd.lambda(j) - cd.lambda(i);
  }
  return cd;
}

CharacteristicData characteristic_data(const Quartic& a, const SpectraOptions& opts) {
  return order_and_check_h1(a, solve_quartic_real(a, opts), opts);
}

Eigen::Vector3d shifted_cubic_coeffs(const CharacteristicData& cd, int i) {
  check_root_index(i);
  const double l = cd.root(i);
  const auto& a = cd.a;
  return {4.0 * l + a.a3, 6.0 * l * l + 3.0 * l * a.a3 + a.a2,
          4.0 * l * l * l + 3.0 * l * l * a.a3 + 2.0 * l * a.a2 + a.a1};
}

double root_product(const CharacteristicData& cd, int i) {
  check_root_index(i);
  return cd.shifted(i).prod();
}

double vandermonde(const Eigen::Vector4d& lambda) {
  double v = 1.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) v *= lambda(j) - lambda(i);
  return v;
}

}  // namespace asymint
