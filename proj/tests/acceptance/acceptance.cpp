// Runs the ten acceptance criteria and prints one PASS/FAIL line per criterion.
// Indented lines are diagnostics; they never change a verdict.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "asymint/errors.hpp"
#include "asymint/hypotheses.hpp"
#include "asymint/oracle.hpp"
#include "asymint/picard.hpp"
#include "asymint/report.hpp"
#include "asymint/synthesis.hpp"

using namespace asymint;

namespace {

int failures = 0;

void verdict(int n, bool pass, const std::string& what) {
  std::printf("criterion %2d %s  %s\n", n, pass ? "PASS" : "FAIL", what.c_str());
  if (!pass) ++failures;
}

void note(const std::string& what) { std::printf("               %s\n", what.c_str()); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Eigen::Vector4d random_roots(std::mt19937_64& rng, double lo, double hi, double gap) {
  for (;;) {
    Eigen::Vector4d v;
    for (int k = 0; k < 4; ++k) v(k) = uniform(rng, lo, hi);
    std::sort(v.data(), v.data() + 4, std::greater<>());
    if (v(0) - v(1) >= gap && v(1) - v(2) >= gap && v(2) - v(3) >= gap) return v;
  }
}

Perturbations perturbations(const std::string& r0) { return {parse(r0), parse("0"), parse("0"), parse("0")}; }

const Quartic test_quartic{0.0, -5.0, 0.0, 4.0};
constexpr double eps = 1e-3;

struct Solved {
  RiccatiSystem sys;
  FixedPoint fp;
  std::unique_ptr<FundamentalSolution> fs;
};

std::vector<Solved> solve_all(const CharacteristicData& cd, const Perturbations& r, const Eigen::ArrayXd& nodes) {
  std::vector<Solved> out;
  for (int i = 1; i <= 4; ++i) {
    RiccatiSystem sys = build_system(cd, r, i);
    FixedPoint fp = iterate_to_fixed_point(IntegralOperator(sys, nodes));
    auto fs = std::make_unique<FundamentalSolution>(fundamental_solution(sys, cd, fp.z));
    out.push_back({std::move(sys), std::move(fp), std::move(fs)});
  }
  return out;
}

std::array<const FundamentalSolution*, 4> all(const std::vector<Solved>& s) {
  return {s[0].fs.get(), s[1].fs.get(), s[2].fs.get(), s[3].fs.get()};
}

// y^(n+1) = sum_k C(n,k) w^(k) y^(n-k)
Eigen::Matrix<double, 5, 1> leibniz_jet(double y, const Eigen::Vector4d& w) {
  Eigen::Matrix<double, 5, 1> yd;
  yd(0) = y;
  const double binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  for (int n = 0; n < 4; ++n) {
    double s = 0.0;
    for (int k = 0; k <= n; ++k) s += binom[n][k] * w(k) * yd(n - k);
    yd(n + 1) = s;
  }
  return yd;
}

void criterion_1(const CharacteristicData& cd, const Eigen::ArrayXd& nodes) {
  const auto s = solve_all(cd, perturbations("0"), nodes);
  bool one_step = true;
  double y_err = 0.0, w_err = 0.0;
  for (const auto& r : s) {
    one_step = one_step && r.fp.trace.converged && r.fp.trace.n_iter == 1 && c0_norm(r.fp.z) == 0.0;
    for (int n = 0; n <= 100; ++n) {
      const double t = 0.1 * n;
      y_err = std::max(y_err, std::abs(r.fs->y(t) / std::exp(r.fs->lambda() * t) - 1.0));
    }
  }
  for (double t : {0.0, 2.5, 10.0}) w_err = std::max(w_err, std::abs(wronskian_normalized(all(s), t) - 72.0));
  verdict(1, one_step && y_err <= 1e-10 && w_err <= 1e-8,
          fmt("zero perturbation: one Picard step to z=0 for all roots %s; max |y/exp(lambda t) - 1| on [0,10] = %.2e "
              "(tol 1e-10); max |W_norm - 72| = %.2e (tol 1e-8)",
              one_step ? "yes" : "no", y_err, w_err));
}

void criterion_2() {
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const CharacteristicData cd = characteristic_data(quartic_from_roots(random_roots(rng, -5, 5, 0.1)));
    for (int i = 1; i <= 4; ++i) {
      const Eigen::Vector3d b = shifted_cubic_coeffs(cd, i);
      for (int j = 1; j <= 4; ++j)
        if (j != i) worst = std::max(worst, std::abs(eval_cubic(b, cd.root(j) - cd.root(i))));
    }
  }
  verdict(2, worst <= 1e-9, fmt("shifted cubic: 200 random quartics, max residual at lambda_j - lambda_i = %.2e (tol 1e-9)", worst));
}

void criterion_3() {
  std::mt19937_64 rng(3);
  double cont = 0.0, jump = 0.0, dom = 0.0, resid = 0.0, resid_other = 0.0;
  int samples = 0, wrong_choice = 0;
  while (samples < 1000) {
    Eigen::Vector4d roots = random_roots(rng, -4, 4, 0.2);
    const CharacteristicData cd = characteristic_data(quartic_from_roots(roots));
    const int i = std::uniform_int_distribution<int>(1, 4)(rng);
    const Eigen::Vector3d g = cd.shifted(i), b = shifted_cubic_coeffs(cd, i);
    const OrientationChoice choice = select_orientation(g, b);
    if (choice.orientation != Orientation::Reflected) ++wrong_choice;
    const GreenKernel k(g, choice.orientation);
    const GreenKernel other(g, choice.orientation == Orientation::Reflected ? Orientation::Printed : Orientation::Reflected);
    cont = std::max({cont, std::abs(k.jump(0)), std::abs(k.jump(1))});
    jump = std::max(jump, std::abs(k.jump(2) - 1.0));
    for (int m = 0; m < 10; ++m, ++samples) {
      const double t = uniform(rng, 0, 8), s = uniform(rng, 0, 8);
      const Side side = t >= s ? Side::Head : Side::Tail;
      for (int d = 0; d <= 2; ++d) {
        const KernelBound kb = kernel_bound(k, d);
        const double bound = kb.coefficient(side) * std::exp(-kb.decay(side) * std::abs(t - s));
        if (bound > 0) dom = std::max(dom, std::abs(k(t, s, d)) / bound);
        else dom = std::max(dom, std::abs(k(t, s, d)) > 0 ? INFINITY : 0.0);
      }
      if (t == s) continue;
      // P(D) applied to the closed-form exponentials, relative to the size of the terms
      auto residual = [&](const GreenKernel& kk) {
        double r = 0.0, scale = 0.0;
        for (const auto& term : kk.terms()) {
          if (term.side != side) continue;
          const double e = term.coefficient * std::exp(term.rate * (t - s));
          r += e * eval_cubic(b, term.rate);
          scale += std::abs(e) * (std::abs(term.rate) * std::abs(term.rate) * std::abs(term.rate) + 1.0);
        }
        return scale > 0 ? std::abs(r) / scale : 0.0;
      };
      resid = std::max(resid, residual(k));
      resid_other = std::max(resid_other, residual(other));
    }
  }
  const bool pass = cont <= 1e-12 && jump <= 1e-10 && dom <= 1.0 + 1e-12 && resid <= 1e-8 && wrong_choice == 0;
  verdict(3, pass,
          fmt("Green kernels: continuity %.2e (tol 1e-12); |jump - 1| %.2e (tol 1e-10); max |g_d|/bound over 1000 "
              "samples %.6f (tol 1); off-diagonal residual %.2e (tol 1e-8) under the reflected convention",
              cont, jump, dom, resid));
  note(fmt("residual test: reflected kernel chosen in every draw; the typeset exponent sign leaves residual %.2e", resid_other));
}

void criterion_4() {
  std::mt19937_64 rng(4);
  const char* shapes[] = {"%g*exp(-%g*t)", "%g*sin(t)*exp(-%g*t)", "%g/(1+t^2)+0*%g", "%g*cos(%g*t)"};
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const CharacteristicData cd = characteristic_data(quartic_from_roots(random_roots(rng, -3, 3, 0.3)));
    Perturbations r;
    for (auto& e : r)
      e = parse(fmt(shapes[std::uniform_int_distribution<int>(0, 3)(rng)], uniform(rng, -0.5, 0.5), uniform(rng, 0.2, 2.0)));
    const int i = std::uniform_int_distribution<int>(1, 4)(rng);
    const RiccatiSystem sys = build_system(cd, r, i);
    const double c1 = uniform(rng, -0.3, 0.3), k1 = uniform(rng, 0.2, 2.5), c2 = uniform(rng, -0.3, 0.3),
                 k2 = uniform(rng, 0.2, 2.5);
    for (int n = 0; n < 20; ++n) {
      const double t = 0.25 * n;
      Eigen::Vector4d jet;
      for (int d = 0; d < 4; ++d)
        jet(d) = c1 * std::pow(-k1, d) * std::exp(-k1 * t) + c2 * std::pow(-k2, d) * std::exp(-k2 * t);
      const double iz = c1 / k1 * (1 - std::exp(-k1 * t)) + c2 / k2 * (1 - std::exp(-k2 * t));
      const LiftResidual lr = lift_residual_equivalence(sys, t, 0.0, iz, jet);
      Eigen::Vector4d w = jet;
      w(0) += sys.lambda;
      const auto yd = leibniz_jet(lr.y, w);
      const double r4 = yd(4) + (cd.a.a3 + r[3](t)) * yd(3) + (cd.a.a2 + r[2](t)) * yd(2) + (cd.a.a1 + r[1](t)) * yd(1) +
                        (cd.a.a0 + r[0](t)) * yd(0);
      worst = std::max(worst, std::abs(lr.lifted - r4) / std::max(std::abs(r4), std::abs(lr.y)));
    }
  }
  verdict(4, worst <= 1e-8,
          fmt("lift equivalence: 100 random (z, r, i) tuples x 20 times, max relative |y R3 - R4| = %.2e (tol 1e-8)", worst));
}

}  // namespace

int main() {
  const CharacteristicData cd = characteristic_data(test_quartic);
  const double t_max = default_t_max(0.0, cd.min_gap);
  const Eigen::ArrayXd nodes = graded_nodes(0.0, t_max, 2048);

  criterion_1(cd, nodes);
  criterion_2();
  criterion_3();
  criterion_4();

  // the small exponential test problem, shared by criteria 5 to 9
  const Perturbations r = perturbations("0.001*exp(-t)");
  const auto s = solve_all(cd, r, nodes);
  const Solved& s1 = s[0];
  const ContractionConstants c1 = contraction_constants(cd, 1, 0.25);
  const double rho_typeset = rho_bound(cd, 1, r, 0.0, Orientation::Printed).rho;
  const double rho_selected = rho_bound(cd, 1, r, 0.0, s1.sys.kernel.orientation()).rho;

  {
    const IntegralOperator T(s1.sys, nodes);
    const double k_emp = empirical_contraction(s1.fp.trace);
    const double cert = c0_distance(T.apply(s1.fp.z), s1.fp.z);
    const double res = riccati_residuals(T, s1.fp.z).abs().maxCoeff();
    const double bound = rho_typeset * c1.A * c1.varsigma + 0.1;
    verdict(5, s1.fp.trace.converged && k_emp <= bound && cert <= 1e-10 && res <= 1e-6,
            fmt("contraction: empirical factor %.2e <= rho A varsigma + 0.1 = %.4f; certificate %.2e (tol 1e-10); "
                "max residual %.2e (tol 1e-6); %d iterations",
                k_emp, bound, cert, res, s1.fp.trace.n_iter));
    note(fmt("rho_1 = %.6g as typeset, %.6g for the kernel actually used (eps/e)", rho_typeset, rho_selected));
  }

  {
    double worst = 0.0, printed_gap = 0.0;
    for (int i = 1; i <= 4; ++i) {
      const ContractionConstants c = contraction_constants(cd, i, 0.25);
      worst = std::max(worst, std::abs(c.A - c.A_kernel) / c.A);
      printed_gap = std::max(printed_gap, std::abs(c.A_printed - c.A_kernel));
    }
    auto near = [](double x, double want) { return std::abs(x - want) <= 1e-12 * std::abs(want); };
    const bool hand = near(c1.A, 14.0) && near(c1.varsigma, 44.0) && near(c1.delta_w, -6.0);
    verdict(6, hand && worst <= 1e-12,
            fmt("constants: A_1 = %.15g, varsigma_1 = %.15g, delta_w_1 = %.15g (expected 14, 44, -6, relative tol 1e-12); "
                "max relative |A_i - A_i(kernel)| = %.2e (tol 1e-12)",
                c1.A, c1.varsigma, c1.delta_w, worst));
    const ContractionConstants c3 = contraction_constants(cd, 3, 0.25);
    note(fmt("alpha_{j,3} as typeset gives A_3 = %.6g against %.6g from the kernel; the kernel value is used", c3.A_printed,
             c3.A_kernel));
  }

  {
    // literal check: sum_j |z^(j)| <= Phi (eps/2) exp(-t), Phi from rho_1 = 5e-4
    const Smallness sm = smallness_check(c1.A, c1.varsigma, rho_typeset);
    const double Phi = sm.Phi.value_or(NAN);
    const Eigen::ArrayXd lhs = channel_sum(s1.fp.z);
    double worst = 0.0, t_worst = 0.0, t_first = NAN;
    for (Eigen::Index n = 0; n < lhs.size(); ++n) {
      const double t = nodes(n);
      const double ratio = lhs(n) / (Phi * 0.5 * eps * std::exp(-t));
      if (ratio > worst) {
        worst = ratio;
        t_worst = t;
      }
      if (ratio > 1.0 && std::isnan(t_first)) t_first = t;
    }
    // first iterate ratio against A_1 (eps/2) exp(-t)
    const IntegralOperator T(s1.sys, nodes);
    const GridFunction first = T.apply(GridFunction(nodes));
    double first_ratio = 0.0;
    for (Eigen::Index n = 0; n < nodes.size(); ++n)
      first_ratio = std::max(first_ratio, std::abs(first.value(n)) / (c1.A * 0.5 * eps * std::exp(-nodes(n))));
    const bool pass = worst <= 1.0 && std::abs(first_ratio - 1.0 / 280) <= 1e-3 / 280;
    verdict(7, pass,
            fmt("envelope: max sum_j|z^(j)| / (Phi (eps/2) e^-t) = %.4g at t = %.2f (tol 1), first exceeded at t = %.2f; "
                "Phi = %.4f; first iterate ratio %.4g (expected 1/280 = %.4g)",
                worst, t_worst, t_first, Phi, first_ratio, 1.0 / 280));
    // the same statements for the kernel with the typeset exponent, and for the mirrored envelope
    const RiccatiSystem typeset = build_system(cd, r, 1, OrientationPolicy::Printed);
    const IntegralOperator Tp(typeset, nodes);
    const GridFunction first_p = Tp.apply(GridFunction(nodes));
    const EnvelopeCheck ep = envelope_check(typeset, cd, first_p, -1.0, c1.A);
    note(fmt("typeset exponent sign: first iterate ratio %.6g in z alone (1/280 = %.6g), %.6g over all three channels",
             ep.max_ratio_value, 1.0 / 280, ep.max_ratio));
    const Smallness sm_sel = smallness_check(c1.A, c1.varsigma, rho_selected);
    const EnvelopeCheck em = envelope_check(s1.sys, cd, s1.fp.z, admissible_beta(cd, 1, s1.sys.kernel.orientation()).natural(),
                                            sm_sel.Phi.value_or(NAN));
    note(fmt("mirrored envelope (beta = %.3g, head integral, Phi = %.4f from rho_1 = eps/e): max ratio %.4g, %s", em.beta,
             em.Phi, em.max_ratio, em.pass ? "holds" : "violated"));
  }

  {
    double ratio_err = 0.0;
    for (const auto& x : s) {
      const RatioErrors re = derivative_ratio_limits(*x.fs, {t_max});
      ratio_err = std::max(ratio_err, re.error.maxCoeff());
    }
    const double w = wronskian_normalized(all(s), t_max);
    std::vector<double> gaps;
    const std::vector<double> ts{2.0, 4.0, 8.0, 16.0, t_max};
    for (double t : ts) gaps.push_back(asymptotic_integral_formula(*s1.fs, t).relative_gap);
    bool shrinking = true;
    for (std::size_t n = 1; n < gaps.size(); ++n) shrinking = shrinking && gaps[n] <= gaps[n - 1];
    const bool pass = ratio_err <= 1e-4 && std::abs(w / 72.0 - 1.0) <= 0.01 && shrinking;
    verdict(8, pass,
            fmt("limits: max |y^(l)/y - lambda^l| at T_max = %.2e (tol 1e-4); W_norm(T_max) = %.10g (within 1%% of 72); "
                "formula gap for y_1 at t = 2,4,8,16,T_max: %.1e %.1e %.1e %.1e %.1e (shrinking %s)",
                ratio_err, w, gaps[0], gaps[1], gaps[2], gaps[3], gaps[4], shrinking ? "yes" : "no"));
    std::string other = "formula gap at T_max for roots 2..4 settles at";
    for (int i = 1; i < 4; ++i) other += fmt(" %.2e", asymptotic_integral_formula(*s[i].fs, t_max).relative_gap);
    note(other + " (a constant factor from the lower limit)");
    note(fmt("with +F in the exponent the y_1 gap stalls at %.2e", asymptotic_integral_formula(*s1.fs, t_max).relative_gap_printed));
  }

  {
    double dom = 0.0, sub = 0.0;
    bool methods = true;
    for (const auto& x : s) {
      const CrossValidation cv = cross_validate(*x.fs, cd.a, r, 5.0);
      if (x.sys.root == 1) {
        dom = cv.max_error;
        methods = methods && cv.method == "direct" && cv.span == 5.0;
      } else {
        sub = std::max(sub, cv.max_error);
        methods = methods && cv.method == "log_derivative" && cv.span == 3.0;
      }
    }
    verdict(9, methods && dom <= 1e-4 && sub <= 1e-3,
            fmt("oracle: y_1 vs direct integration on [0,5] max relative error %.2e (tol 1e-4); y'/y for roots 2..4 on "
                "[0,3] max error %.2e (tol 1e-3)",
                dom, sub));
  }

  {
    const BiharmonicPreset b = biharmonic_preset(6, 6);
    const CharacteristicData bcd = characteristic_data(b.spec.a);
    const Eigen::Vector4d want(2.8, 0.8, -1.2, -3.2);
    const double root_err = (bcd.lambda - want).cwiseAbs().maxCoeff();
    const double vieta = std::abs(bcd.lambda.sum() + b.spec.a.a3);
    RunOptions opts;
    const RunResult run = run_report(b.spec, opts);
    verdict(10, root_err <= 1e-12 && vieta <= 1e-12 && run.exit_code == 0,
            fmt("biharmonic n=6 p=6: max root error %.2e (tol 1e-12); |sum lambda + a3| = %.2e; full pipeline with r=0: %s",
                root_err, vieta, run.report["status"].get<std::string>().c_str()));
    note(fmt("K1 with the 8/(p-1)^3 prefactor would be %.6g; the quartic uses %.6g, which has the roots above",
             b.k1_printed, b.spec.a.a1));
  }

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
