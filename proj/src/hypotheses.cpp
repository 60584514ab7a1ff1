#include "asymint/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "asymint/errors.hpp"

namespace asymint {

SideRates f_operator_layout(const CharacteristicData& cd, int i, Orientation o) {
  check_root_index(i);
  const auto& l = cd.lambda;
  SideRates s;
  switch (i) {
    case 1:
      s.tail = true;
      s.tail_rate = l(0) - l(1);
      break;
    case 2:
      s.head = s.tail = true;
      s.head_rate = l(0) - l(1);
      s.tail_rate = l(1) - l(2);
      break;
    case 3:
      s.head = s.tail = true;
      s.head_rate = l(1) - l(2);
      s.tail_rate = l(2) - l(3);
      break;
    default:
      s.head = true;
      s.head_rate = l(2) - l(3);
  }
  if (o == Orientation::Reflected) {
    std::swap(s.head, s.tail);
    std::swap(s.head_rate, s.tail_rate);
  }
  return s;
}

SideRates kernel_layout(const GreenKernel& k) {
  const KernelBound b = kernel_bound(k, 0);
  return SideRates{k.has_side(Side::Head), k.has_side(Side::Tail), b.head_decay, b.tail_decay};
}

double side_transform(const SideRates& layout, const ScalarFunction& E, double t, double t0,
                      const QuadratureOptions& opts) {
  double total = 0.0;
  if (layout.head && t > t0) {
    const double k = layout.head_rate;
    const double width = std::max(1.0 / k, 0.25);
    for (double hi = t; hi > t0; hi -= width) {
      const double lo = std::max(t0, hi - width);
      total += integrate([&](double s) { return std::exp(-k * (t - s)) * std::abs(E(s)); }, lo, hi, opts);
      if (k * (t - lo) > 40.0) break;
    }
  }
  if (layout.tail) {
    const double k = layout.tail_rate;
    const double start = std::max(t, t0);
    total += integrate_to_infinity([&](double s) { return std::exp(-k * (s - start)) * std::abs(E(s)); }, start, k, opts);
  }
  return total;
}

double F_operator_eval(const CharacteristicData& cd, int i, const ScalarFunction& E, double t, double t0, Orientation o,
                       const QuadratureOptions& opts) {
  return side_transform(f_operator_layout(cd, i, o), E, t, t0, opts);
}

RhoBound rho_bound(const CharacteristicData& cd, int i, const Perturbations& r, double t0, Orientation o,
                   std::optional<double> horizon, const QuadratureOptions& opts) {
  const SideRates layout = f_operator_layout(cd, i, o);
  RhoBound out;
  out.horizon = horizon.value_or(t0 + 40.0 / cd.min_gap);
  const double span = out.horizon - t0;
  constexpr int count = 256;
  for (int j = 0; j < 4; ++j) {
    const FunctionExpr& e = r[static_cast<std::size_t>(j)];
    if (e.is_zero()) continue;
    auto value = [&](double t) { return side_transform(layout, [&e](double s) { return e(s); }, t, t0, opts); };
    std::vector<double> ts(count), vs(count);
    for (int n = 0; n < count; ++n) {
      ts[static_cast<std::size_t>(n)] = t0 + span * (std::pow(10.0, 3.0 * n / (count - 1)) - 1.0) / 999.0;
      vs[static_cast<std::size_t>(n)] = value(ts[static_cast<std::size_t>(n)]);
    }
    auto best = static_cast<std::size_t>(std::max_element(vs.begin(), vs.end()) - vs.begin());
    double best_t = ts[best], best_v = vs[best];
    // Golden-section refinement between the neighbouring samples.
    double lo = ts[best > 0 ? best - 1 : 0], hi = ts[std::min<std::size_t>(best + 1, count - 1)];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = value(x1), f2 = value(x2);
    for (int it = 0; it < 40 && hi - lo > 1e-10 * std::max(1.0, std::abs(hi)); ++it) {
      if (f1 > f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = value(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = value(x2);
      }
    }
    if (f1 > best_v) best_v = f1, best_t = x1;
    if (f2 > best_v) best_v = f2, best_t = x2;
    for (std::size_t n = count * 9 / 10; n + 1 < count; ++n)
      if (vs[n + 1] > vs[n] * (1.0 + 1e-9) + 1e-300) out.tail_monotone = false;
    if (best_v > out.rho) {
      out.rho = best_v;
      out.argmax_t = best_t;
      out.argmax_j = j;
    }
  }
  return out;
}

ContractionConstants contraction_constants(const CharacteristicData& cd, int i, double eta) {
  check_root_index(i);
  if (!(eta > 0.0 && eta < 0.5)) throw ValidationError("eta", "eta must lie in (0,0.5)");
  const auto L = [&cd](int k) { return cd.lambda(k - 1); };
  const auto d = [&L](int m, int k) { return std::abs(L(m) - L(k)); };
  ContractionConstants c;
  c.eta = eta;
  for (int j = 0; j < 3; ++j) {
    const auto pw = [j](double x) { return std::pow(x, j); };
    double a = 0.0, printed = 0.0;
    switch (i) {
      case 1:
        a = printed = d(4, 3) * pw(d(2, 1)) + d(4, 2) * pw(d(3, 1)) + d(3, 2) * pw(d(4, 1));
        break;
      case 2:
        a = printed = d(3, 4) * pw(d(1, 2)) + d(1, 3) * pw(d(4, 2)) + d(1, 4) * pw(d(3, 2));
        break;
      case 3:
        a = d(2, 1) * pw(d(4, 3)) + d(4, 2) * pw(d(1, 3)) + d(1, 4) * pw(d(2, 3));
        printed = d(2, 1) * pw(d(4, 3)) + std::abs(L(2) + L(4) - 2 * L(3)) * pw(d(1, 3)) +
                  std::abs(L(1) + L(4) - 2 * L(3)) * pw(d(2, 3));
        break;
      default:
        a = printed = d(3, 2) * pw(d(1, 4)) + d(3, 1) * pw(d(2, 4)) + d(2, 1) * pw(d(3, 4));
    }
    c.alpha(j) = a;
    c.alpha_printed(j) = printed;
  }
  switch (i) {
    case 1: c.delta_w = (L(3) - L(2)) * (L(4) - L(3)) * (L(4) - L(2)); break;
    case 2: c.delta_w = (L(3) - L(1)) * (L(4) - L(3)) * (L(4) - L(1)); break;
    case 3: c.delta_w = (L(2) - L(1)) * (L(4) - L(2)) * (L(4) - L(1)); break;
    default: c.delta_w = (L(2) - L(1)) * (L(3) - L(2)) * (L(3) - L(1));
  }
  c.A = c.alpha.sum() / std::abs(c.delta_w);
  c.A_printed = c.alpha_printed.sum() / std::abs(c.delta_w);

  const GreenKernel k(cd.shifted(i), Orientation::Reflected);
  double raw = 0.0;
  for (int deriv = 0; deriv < 3; ++deriv) raw += kernel_bound(k, deriv).raw_coefficient;
  c.A_kernel = raw / std::abs(k.delta_gamma());

  const double l = L(i), al = std::abs(l);
  const auto& a = cd.a;
  c.varsigma = 3 * al * al + 5 * al + 3 +
               (19 + 7 * al + std::abs(12 * l + 3 * a.a3) + std::abs(6 * l * l + 3 * l * a.a3 + a.a2)) * eta;
  return c;
}

std::vector<double> default_h2_samples(double t0, double min_gap, int count) {
  std::vector<double> ts(static_cast<std::size_t>(count));
  const double span = 40.0 / min_gap;
  for (int n = 0; n < count; ++n) ts[static_cast<std::size_t>(n)] = t0 + span * (n + 1) / count;
  return ts;
}

H2Report check_h2(const GreenKernel& k, const Perturbations& r, const std::vector<double>& sample_ts, double t0,
                  double h2_tol, const QuadratureOptions& opts) {
  H2Report rep;
  rep.tolerance = h2_tol;
  for (double t : sample_ts) {
    double worst = 0.0;
    for (const auto& e : r) {
      if (e.is_zero()) continue;
      worst = std::max(worst, L_functional(k, [&e](double s) { return e(s); }, t, t0, opts));
    }
    rep.samples.emplace_back(t, worst);
  }
  if (rep.samples.empty()) {
    rep.pass = true;
    rep.fitted_rate = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  // Least-squares slope of log L over the second half of positive samples.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t n = rep.samples.size() / 2; n < rep.samples.size(); ++n) {
    const auto [t, v] = rep.samples[n];
    if (!(v > 0.0)) continue;
    const double y = std::log(v);
    sx += t, sy += y, sxx += t * t, sxy += t * y;
    ++m;
  }
  rep.fitted_rate = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : std::numeric_limits<double>::quiet_NaN();
  bool decreasing = true;
  for (std::size_t n = rep.samples.size() / 2; n + 1 < rep.samples.size(); ++n)
    if (rep.samples[n + 1].second > rep.samples[n].second * (1.0 + 1e-9)) decreasing = false;
  const double last = rep.samples.back().second;
  rep.pass = last <= h2_tol && (last == 0.0 || decreasing);
  return rep;
}

Smallness smallness_check(double A, double varsigma, double rho) {
  Smallness s;
  s.product = rho * A * varsigma;
  s.ok = s.product < 1.0;
  if (s.ok) s.Phi = A / (1.0 - s.product);
  return s;
}

}  // namespace asymint
