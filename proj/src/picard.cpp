#include "asymint/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "asymint/errors.hpp"
#include "asymint/hypotheses.hpp"

namespace asymint {

double default_t_max(double t0, double min_gap) { return t0 + 12.0 * std::log(10.0) / min_gap; }

IntegralOperator::IntegralOperator(RiccatiSystem sys, const Eigen::ArrayXd& nodes)
    : sys_(std::move(sys)), nodes_(nodes) {
  const Eigen::Index N = nodes_.size();
  if (N < 2) throw Error(Errc::InvalidArgument, "integral operator needs at least two nodes");
  const auto& gl = gauss_legendre16();
  constexpr int Q = GaussLegendre16::size;
  for (int q = 0; q < Q; ++q) basis_[static_cast<std::size_t>(q)] = hermite5_basis(gl.x[static_cast<std::size_t>(q)]);

  envelope_rate_ = sys_.kernel.gamma().cwiseAbs().minCoeff();

  gauss_coeffs_.reserve(static_cast<std::size_t>((N - 1) * Q));
  for (Eigen::Index n = 0; n + 1 < N; ++n) {
    const double h = nodes_(n + 1) - nodes_(n);
    for (int q = 0; q < Q; ++q) gauss_coeffs_.push_back(sys_.coefficients(nodes_(n) + h * gl.x[static_cast<std::size_t>(q)]));
  }
  node_coeffs_.reserve(static_cast<std::size_t>(N));
  for (Eigen::Index n = 0; n < N; ++n) node_coeffs_.push_back(sys_.coefficients(nodes_(n)));

  for (std::size_t k = 0; k < 3; ++k) {
    const KernelTerm& term = sys_.kernel.terms()[k];
    TermTables& tab = tables_[k];
    tab.step.resize(N - 1);
    tab.weight.resize(N - 1, Q);
    for (Eigen::Index n = 0; n + 1 < N; ++n) {
      const double h = nodes_(n + 1) - nodes_(n);
      const double rh = term.rate * h;
      tab.step(n) = term.side == Side::Head ? std::exp(rh) : std::exp(-rh);
      for (int q = 0; q < Q; ++q) {
        const double x = gl.x[static_cast<std::size_t>(q)];
        const double w = gl.w[static_cast<std::size_t>(q)] * h;
        tab.weight(n, q) = term.side == Side::Head ? w * std::exp(rh * (1.0 - x)) : w * std::exp(-rh * x);
      }
    }
  }

  if (sys_.kernel.has_side(Side::Tail)) {
    const KernelBound kb = kernel_bound(sys_.kernel, 0);
    const double fastest = sys_.kernel.gamma().cwiseAbs().maxCoeff();
    const double length = 40.0 / kb.tail_decay;
    const double width = std::min(0.25, 1.0 / fastest);
    const auto panels = static_cast<Eigen::Index>(std::ceil(length / width));
    ext_s_.resize(panels * Q);
    ext_w_.resize(panels * Q);
    const double T = nodes_(N - 1);
    for (Eigen::Index m = 0; m < panels; ++m)
      for (int q = 0; q < Q; ++q) {
        const double s = T + width * (static_cast<double>(m) + gl.x[static_cast<std::size_t>(q)]);
        ext_s_(m * Q + q) = s;
        ext_w_(m * Q + q) = width * gl.w[static_cast<std::size_t>(q)];
        ext_coeffs_.push_back(sys_.coefficients(s));
      }
  }
}

Eigen::ArrayXXd IntegralOperator::source_at_gauss(const GridFunction& z) const {
  const Eigen::Index N = nodes_.size();
  constexpr int Q = GaussLegendre16::size;
  Eigen::ArrayXXd f(N - 1, Q);
  for (Eigen::Index n = 0; n + 1 < N; ++n) {
    const double h = nodes_(n + 1) - nodes_(n);
    Eigen::Matrix<double, 6, 1> data;
    data << z.value(n), h * z.d1(n), h * h * z.d2(n), z.value(n + 1), h * z.d1(n + 1), h * h * z.d2(n + 1);
    for (int q = 0; q < Q; ++q) {
      const Eigen::Vector3d raw = basis_[static_cast<std::size_t>(q)] * data;
      const Eigen::Vector3d x(raw(0), raw(1) / h, raw(2) / (h * h));
      const PointCoefficients& c = gauss_coeffs_[static_cast<std::size_t>(n * Q + q)];
      f(n, q) = c.forcing + eval_F(c, sys_.weights, x);
    }
  }
  return f;
}

Eigen::ArrayXd IntegralOperator::source_on_extension(const GridFunction& z) const {
  const Eigen::Index N = nodes_.size();
  const double T = nodes_(N - 1);
  const Eigen::Vector3d end(z.value(N - 1), z.d1(N - 1), z.d2(N - 1));
  Eigen::ArrayXd f(ext_s_.size());
  for (Eigen::Index m = 0; m < ext_s_.size(); ++m) {
    const Eigen::Vector3d x = end * std::exp(-envelope_rate_ * (ext_s_(m) - T));
    const PointCoefficients& c = ext_coeffs_[static_cast<std::size_t>(m)];
    f(m) = c.forcing + eval_F(c, sys_.weights, x);
  }
  return f;
}

Eigen::ArrayXd IntegralOperator::source_at_nodes(const GridFunction& z) const {
  Eigen::ArrayXd f(nodes_.size());
  for (Eigen::Index n = 0; n < nodes_.size(); ++n) {
    const PointCoefficients& c = node_coeffs_[static_cast<std::size_t>(n)];
    f(n) = c.forcing + eval_F(c, sys_.weights, Eigen::Vector3d(z.value(n), z.d1(n), z.d2(n)));
  }
  return f;
}

std::array<Eigen::ArrayXd, 3> IntegralOperator::term_integrals(const GridFunction& z) const {
  if (z.size() != nodes_.size()) throw Error(Errc::InvalidArgument, "grid function does not match operator nodes");
  if (!z.all_finite()) throw Error(Errc::NonFinite, "argument of the integral operator is not finite");
  const Eigen::Index N = nodes_.size();
  const Eigen::ArrayXXd f = source_at_gauss(z);
  const Eigen::ArrayXd fext = ext_s_.size() > 0 ? source_on_extension(z) : Eigen::ArrayXd();
  std::array<Eigen::ArrayXd, 3> X;
  for (std::size_t k = 0; k < 3; ++k) {
    const KernelTerm& term = sys_.kernel.terms()[k];
    const TermTables& tab = tables_[k];
    Eigen::ArrayXd& x = X[k];
    x.resize(N);
    if (term.side == Side::Head) {
      x(0) = 0.0;
      for (Eigen::Index n = 0; n + 1 < N; ++n) x(n + 1) = tab.step(n) * x(n) + (tab.weight.row(n) * f.row(n)).sum();
    } else {
      const double T = nodes_(N - 1);
      x(N - 1) = (ext_w_ * (term.rate * (T - ext_s_)).exp() * fext).sum();
      for (Eigen::Index n = N - 2; n >= 0; --n) x(n) = tab.step(n) * x(n + 1) + (tab.weight.row(n) * f.row(n)).sum();
    }
  }
  return X;
}

GridFunction IntegralOperator::apply(const GridFunction& z) const {
  const auto X = term_integrals(z);
  GridFunction out(nodes_);
  for (std::size_t k = 0; k < 3; ++k) {
    const double c = sys_.kernel.terms()[k].coefficient;
    const double r = sys_.kernel.terms()[k].rate;
    out.value += c * X[k];
    out.d1 += c * r * X[k];
    out.d2 += c * r * r * X[k];
  }
  if (!out.all_finite()) throw Error(Errc::NonFinite, "integral operator produced non-finite values");
  return out;
}

Eigen::ArrayXd IntegralOperator::third_derivative(const GridFunction& z) const {
  // (T z)''' = sum_k c_k r_k^3 X_k + jump(g_tt) f(t)
  const auto X = term_integrals(z);
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(nodes_.size());
  for (std::size_t k = 0; k < 3; ++k) {
    const double r = sys_.kernel.terms()[k].rate;
    out += sys_.kernel.terms()[k].coefficient * r * r * r * X[k];
  }
  return out + sys_.kernel.jump(2) * source_at_nodes(z);
}

GridFunction apply_T(const RiccatiSystem& sys, const GridFunction& z) { return IntegralOperator(sys, z.t).apply(z); }

std::string_view to_string(IterationStatus s) noexcept {
  switch (s) {
    case IterationStatus::Converged: return "converged";
    case IterationStatus::Diverged: return "diverged";
    case IterationStatus::MaxIter: return "max_iter";
  }
  return "";
}

FixedPoint iterate_to_fixed_point(const IntegralOperator& T, const PicardOptions& opts) {
  FixedPoint fp{GridFunction(T.nodes()), {}};
  IterationTrace& tr = fp.trace;
  GridFunction omega(T.nodes());
  int growth = 0;
  for (int n = 1; n <= opts.max_iter; ++n) {
    GridFunction next;
    try {
      next = T.apply(omega);
    } catch (const Error& e) {
      if (e.code() != Errc::NonFinite) throw;
      tr.status = IterationStatus::Diverged;
      tr.warning = "iterate became non-finite";
      tr.n_iter = n;
      return fp;
    }
    const double delta = c0_distance(next, omega);
    const double norm = c0_norm(next);
    tr.iterates.push_back(norm);
    if (!tr.deltas.empty() && tr.deltas.back() > 0.0) tr.contraction.push_back(delta / tr.deltas.back());
    if (!tr.deltas.empty()) growth = delta > tr.deltas.back() ? growth + 1 : 0;
    tr.deltas.push_back(delta);
    tr.n_iter = n;
    if (opts.keep_iterates) tr.snapshots.push_back(next);
    omega = std::move(next);
    fp.z = omega;
    if (delta <= opts.fp_tol) {
      tr.converged = true;
      tr.status = IterationStatus::Converged;
      if (norm > opts.eta) {
        std::ostringstream msg;
        msg << "fixed point norm " << norm << " exceeds eta " << opts.eta;
        tr.warning = msg.str();
      }
      return fp;
    }
    if (norm > 10.0 * opts.eta) {
      std::ostringstream msg;
      msg << "iterate norm " << norm << " left the ball of radius 10*eta";
      tr.status = IterationStatus::Diverged;
      tr.warning = msg.str();
      return fp;
    }
    if (growth >= 3) {
      tr.status = IterationStatus::Diverged;
      tr.warning = "successive differences grew for 3 consecutive steps";
      return fp;
    }
  }
  tr.status = IterationStatus::MaxIter;
  tr.warning = "iteration limit reached before the tolerance";
  return fp;
}

double empirical_contraction(const IterationTrace& trace, double floor) {
  double worst = 0.0;
  for (std::size_t n = 1; n < trace.deltas.size(); ++n)
    if (trace.deltas[n - 1] > floor) worst = std::max(worst, trace.deltas[n] / trace.deltas[n - 1]);
  return worst;
}

Eigen::ArrayXd riccati_residuals(const IntegralOperator& T, const GridFunction& z) {
  const Eigen::ArrayXd z3 = T.third_derivative(z);
  Eigen::ArrayXd out(z.size());
  for (Eigen::Index n = 0; n < z.size(); ++n)
    out(n) = riccati_residual(T.system(), z.t(n), Eigen::Vector4d(z.value(n), z.d1(n), z.d2(n), z3(n)));
  return out;
}

PhiSequence phi_sequence(double A, double rho, double varsigma, int n) {
  PhiSequence seq;
  double phi = A;
  for (int m = 1; m <= n; ++m) {
    if (m > 1) phi = A * (1.0 + phi * rho * varsigma);
    seq.values.push_back(phi);
  }
  if (rho * A * varsigma < 1.0) seq.limit = A / (1.0 - rho * A * varsigma);
  return seq;
}

double phi_limit(double A, double rho, double varsigma) {
  const double q = rho * A * varsigma;
  if (!(q < 1.0)) {
    std::ostringstream msg;
    msg << "rho*A*varsigma = " << q << " >= 1, the geometric recursion has no limit";
    throw Error(Errc::NoLimit, msg.str());
  }
  return A / (1.0 - q);
}

BetaInterval admissible_beta(const CharacteristicData& cd, int i, Orientation o) {
  check_root_index(i);
  const auto& l = cd.lambda;
  BetaInterval b;
  if (o == Orientation::Printed) {
    if (i < 4) b = {l(i) - l(i - 1), 0.0, true, false};
    else b = {0.0, l(2) - l(3), false, true};
  } else {
    if (i < 4) b = {0.0, l(i - 1) - l(i), false, true};
    else b = {l(3) - l(2), 0.0, true, false};
  }
  return b;
}

Eigen::ArrayXd exponential_envelope(const Eigen::ArrayXd& nodes, const ScalarFunction& g,
                                    std::optional<double> head_rate, std::optional<double> tail_rate,
                                    const QuadratureOptions& options) {
  // the envelope decays exponentially, so the absolute target follows the size of each panel;
  // a fixed floor either loses the far tail or chases rounding noise near underflow
  auto panel = [&](const ScalarFunction& f, double lo, double hi) {
    const double scale = (hi - lo) * std::max({std::abs(f(lo)), std::abs(f(0.5 * (lo + hi))), std::abs(f(hi))});
    QuadratureOptions opts = options;
    opts.abs_tol = std::max(options.rel_tol * scale, std::numeric_limits<double>::min());
    return integrate(f, lo, hi, opts);
  };
  QuadratureOptions opts = options;
  opts.abs_tol = std::numeric_limits<double>::min();
  const Eigen::Index N = nodes.size();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(N);
  if (head_rate) {
    const double a = *head_rate;
    double acc = 0.0;
    for (Eigen::Index n = 0; n + 1 < N; ++n) {
      const double lo = nodes(n), hi = nodes(n + 1);
      acc = std::exp(-a * (hi - lo)) * acc + panel([&](double s) { return std::exp(-a * (hi - s)) * g(s); }, lo, hi);
      out(n + 1) += acc;
    }
  }
  if (tail_rate) {
    const double b = *tail_rate;
    const double T = nodes(N - 1);
    double acc = 0.0;
    try {
      acc = integrate_to_infinity([&](double s) { return std::exp(-b * (s - T)) * g(s); }, T, b > 0.0 ? b : 1.0, opts);
    } catch (const Error& e) {
      if (e.code() != Errc::TailNotConvergent) throw;
      acc = std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(acc)) return Eigen::ArrayXd::Constant(N, std::numeric_limits<double>::infinity());
    out(N - 1) += acc;
    for (Eigen::Index n = N - 2; n >= 0; --n) {
      const double lo = nodes(n), hi = nodes(n + 1);
      acc = std::exp(-b * (hi - lo)) * acc + panel([&](double s) { return std::exp(-b * (s - lo)) * g(s); }, lo, hi);
      out(n) += acc;
    }
  }
  return out;
}

namespace {

double max_ratio(const Eigen::ArrayXd& lhs, const Eigen::ArrayXd& rhs) {
  double worst = 0.0;
  for (Eigen::Index n = 0; n < lhs.size(); ++n) {
    if (lhs(n) == 0.0) continue;
    worst = std::max(worst, rhs(n) > 0.0 ? lhs(n) / rhs(n) : std::numeric_limits<double>::infinity());
  }
  return worst;
}

}  // namespace

EnvelopeCheck envelope_check(const RiccatiSystem& sys, const CharacteristicData& cd, const GridFunction& z, double beta,
                             double Phi, const QuadratureOptions& opts) {
  const Orientation o = sys.kernel.orientation();
  const BetaInterval range = admissible_beta(cd, sys.root, o);
  if (!range.contains(beta)) {
    std::ostringstream msg;
    msg << "beta " << beta << " outside the admissible interval for root " << sys.root;
    throw Error(Errc::InvalidArgument, msg.str());
  }
  EnvelopeCheck out;
  out.beta = beta;
  out.Phi = Phi;
  const bool printed = o == Orientation::Printed;
  if (sys.root == 1) out.domain = printed ? "tail" : "head";
  else if (sys.root == 4) out.domain = printed ? "head" : "tail";
  else out.domain = "full";

  const ScalarFunction abs_p = [&sys](double s) { return std::abs(sys.p(sys.lambda, s)); };
  std::optional<double> head, tail;
  if (out.domain != "tail") head = beta;
  if (out.domain != "head") tail = -beta;
  out.envelope = exponential_envelope(z.t, abs_p, head, tail, opts);
  out.merged_finite = out.envelope.isFinite().all();

  const SideRates layout = kernel_layout(sys.kernel);
  out.envelope_split = exponential_envelope(z.t, abs_p, layout.head ? std::optional<double>(layout.head_rate) : std::nullopt,
                                            layout.tail ? std::optional<double>(layout.tail_rate) : std::nullopt, opts);

  const Eigen::ArrayXd lhs = channel_sum(z);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.max_ratio = out.merged_finite ? max_ratio(lhs, Phi * out.envelope) : nan;
  out.max_ratio_value = out.merged_finite ? max_ratio(z.value.abs(), Phi * out.envelope) : nan;
  out.max_ratio_split = max_ratio(lhs, Phi * out.envelope_split);
  // a single rate cannot bound both sides for mixed signs; fall back to the kernel's own rates
  out.pass = out.merged_finite ? out.max_ratio <= 1.0 : out.max_ratio_split <= 1.0;
  return out;
}

}  // namespace asymint
