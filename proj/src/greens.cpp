#include "asymint/greens.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "asymint/errors.hpp"
#include "asymint/spectra.hpp"

namespace asymint {

std::string_view to_string(SignPattern p) noexcept {
  switch (p) {
    case SignPattern::AllNeg: return "AllNeg";
    case SignPattern::OnePos: return "OnePos";
    case SignPattern::TwoPos: return "TwoPos";
    case SignPattern::AllPos: return "AllPos";
  }
  return "";
}

std::string_view to_string(Orientation o) noexcept {
  return o == Orientation::Printed ? "printed" : "reflected";
}

SignPattern classify_sign_pattern(const Eigen::Vector3d& gamma, double gap_tol) {
  for (int k = 0; k < 3; ++k)
    if (!(std::abs(gamma(k)) >= gap_tol)) {
      std::ostringstream msg;
      msg << "shifted root " << gamma(k) << " is within " << gap_tol << " of zero";
      throw Error(Errc::ZeroRoot, msg.str());
    }
  if (!(gamma(0) > gamma(1) && gamma(1) > gamma(2)))
    throw Error(Errc::InvalidArgument, "shifted roots must be distinct and sorted decreasing");
  const int positives = static_cast<int>((gamma.array() > 0.0).count());
  switch (positives) {
    case 0: return SignPattern::AllNeg;
    case 1: return SignPattern::OnePos;
    case 2: return SignPattern::TwoPos;
    default: return SignPattern::AllPos;
  }
}

GreenKernel::GreenKernel(const Eigen::Vector3d& gamma, Orientation orientation, double gap_tol)
    : gamma_(gamma), orientation_(orientation) {
  pattern_ = classify_sign_pattern(gamma, gap_tol);
  const double g1 = gamma(0), g2 = gamma(1), g3 = gamma(2);
  delta_gamma_ = (g2 - g1) * (g3 - g2) * (g3 - g1);
  const std::array<double, 3> numer{g3 - g2, g1 - g3, g2 - g1};
  for (std::size_t k = 0; k < 3; ++k) {
    KernelTerm& term = terms_[k];
    const double gk = gamma(static_cast<Eigen::Index>(k));
    const double unit = numer[k] / delta_gamma_;  // equals 1 / P'(gamma_k)
    term.raw = std::abs(numer[k]);
    if (orientation == Orientation::Reflected) {
      term.rate = gk;
      term.side = gk < 0.0 ? Side::Head : Side::Tail;
      term.coefficient = term.side == Side::Head ? unit : -unit;
    } else {
      term.rate = -gk;
      switch (pattern_) {
        case SignPattern::AllNeg:
          term.side = Side::Tail;
          term.coefficient = unit;
          break;
        case SignPattern::OnePos:
          term.side = k == 0 ? Side::Head : Side::Tail;
          term.coefficient = -unit;
          break;
        case SignPattern::TwoPos:
          term.side = k < 2 ? Side::Head : Side::Tail;
          term.coefficient = unit;
          break;
        case SignPattern::AllPos:
          term.side = Side::Head;
          term.coefficient = unit;
          break;
      }
    }
  }
}

bool GreenKernel::has_side(Side side) const noexcept {
  return std::any_of(terms_.begin(), terms_.end(), [side](const KernelTerm& t) { return t.side == side; });
}

double GreenKernel::one_sided_limit(Side side, int d) const {
  double sum = 0.0;
  for (const auto& term : terms_)
    if (term.side == side) sum += term.coefficient * std::pow(term.rate, d);
  return sum;
}

double GreenKernel::operator()(double t, double s, int d) const {
  if (t == s) return 0.5 * (one_sided_limit(Side::Head, d) + one_sided_limit(Side::Tail, d));
  const Side side = t > s ? Side::Head : Side::Tail;
  double sum = 0.0;
  for (const auto& term : terms_)
    if (term.side == side) sum += term.coefficient * std::pow(term.rate, d) * std::exp(term.rate * (t - s));
  return sum;
}

KernelBound kernel_bound(const GreenKernel& k, int d) {
  KernelBound out;
  double head_slowest = std::numeric_limits<double>::infinity();
  double tail_slowest = std::numeric_limits<double>::infinity();
  out.alpha_head = out.alpha_tail = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t m = 0; m < 3; ++m) {
    const auto& term = k.terms()[m];
    const double gm = k.gamma()(static_cast<Eigen::Index>(m));
    out.raw_coefficient += term.raw * std::pow(std::abs(gm), d);
    const double c = std::abs(term.coefficient) * std::pow(std::abs(term.rate), d);
    if (term.side == Side::Head) {
      out.head_coefficient += c;
      if (std::abs(term.rate) < head_slowest) {
        head_slowest = std::abs(term.rate);
        out.alpha_head = gm;
      }
    } else {
      out.tail_coefficient += c;
      if (std::abs(term.rate) < tail_slowest) {
        tail_slowest = std::abs(term.rate);
        out.alpha_tail = gm;
      }
    }
  }
  out.head_decay = std::isfinite(head_slowest) ? head_slowest : 0.0;
  out.tail_decay = std::isfinite(tail_slowest) ? tail_slowest : 0.0;
  return out;
}

double L_functional(const GreenKernel& k, const ScalarFunction& E, double t, double t0, const QuadratureOptions& opts) {
  auto weight = [&k](double tt, double s) {
    return std::abs(k(tt, s, 0)) + std::abs(k(tt, s, 1)) + std::abs(k(tt, s, 2));
  };
  double total = 0.0;
  if (t > t0 && k.has_side(Side::Head)) {
    // The weight has kinks where kernel derivatives change sign; split into unit panels.
    const double step = 1.0;
    for (double lo = t0; lo < t; lo += step) {
      const double hi = std::min(t, lo + step);
      total += integrate([&](double s) { return weight(t, s) * std::abs(E(s)); }, lo, hi, opts);
    }
  }
  if (k.has_side(Side::Tail)) {
    const double start = std::max(t, t0);
    const double decay = kernel_bound(k, 0).tail_decay;
    total += integrate_to_infinity([&](double s) { return weight(t, s) * std::abs(E(s)); }, start, decay, opts);
  }
  return total;
}

double exponential_forcing_residual(const GreenKernel& k, const Eigen::Vector3d& b, double kappa, double t,
                                    double t0) {
  // u(t) = sum of amplitude * exp(mu * t); apply P(D) termwise.
  double pu = 0.0;
  for (const auto& term : k.terms()) {
    const double rho = term.rate;
    const double denom = rho + kappa;
    if (term.side == Side::Head) {
      if (t <= t0) continue;
      pu += term.coefficient / denom * (eval_cubic(b, rho) * std::exp(rho * (t - t0) - kappa * t0) -
                                        eval_cubic(b, -kappa) * std::exp(-kappa * t));
    } else {
      pu += term.coefficient / denom * eval_cubic(b, -kappa) * std::exp(-kappa * std::max(t, t0));
    }
  }
  return (pu - std::exp(-kappa * t)) / std::exp(-kappa * t);
}

OrientationChoice select_orientation(const Eigen::Vector3d& gamma, const Eigen::Vector3d& b, double t0,
                                     double tolerance) {
  auto worst = [&](Orientation o) {
    const GreenKernel k(gamma, o);
    double r = 0.0;
    double kmin = gamma.cwiseAbs().maxCoeff() + 1.0;
    for (double kappa : {0.37, 1.31, 2.71, 0.5 * kmin + 0.13})
      for (double dt : {0.5, 1.7, 3.1}) {
        bool resonant = false;
        for (const auto& term : k.terms()) resonant = resonant || std::abs(term.rate + kappa) < 1e-3;
        if (!resonant) r = std::max(r, std::abs(exponential_forcing_residual(k, b, kappa, t0 + dt, t0)));
      }
    return r;
  };
  OrientationChoice choice;
  choice.tolerance = tolerance;
  choice.residual_printed = worst(Orientation::Printed);
  choice.residual_reflected = worst(Orientation::Reflected);
  if (choice.residual_reflected <= tolerance || choice.residual_reflected <= choice.residual_printed)
    choice.orientation = Orientation::Reflected;
  else
    choice.orientation = Orientation::Printed;
  return choice;
}

}  // namespace asymint
