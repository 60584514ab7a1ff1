#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "asymint/errors.hpp"
#include "asymint/hypotheses.hpp"
#include "support.hpp"

using namespace asymint;

namespace {

double exp_input(double s) { return std::exp(-s); }

// closed form of the two-sided transform of exp(-kappa s)
double transform_closed(const SideRates& L, double kappa, double t, double t0) {
  double v = 0.0;
  if (L.head) {
    const double h = L.head_rate;
    v += (std::exp(-kappa * t) - std::exp(-h * (t - t0) - kappa * t0)) / (h - kappa);
  }
  if (L.tail) v += std::exp(-kappa * t) / (L.tail_rate + kappa);
  return v;
}

}  // namespace

TEST_CASE("F operator values on exp(-s), typeset layout") {
  const auto cd = support::test_data();
  CHECK(F_operator_eval(cd, 1, exp_input, 0.0, 0.0, Orientation::Printed) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(F_operator_eval(cd, 1, exp_input, 2.0, 0.0, Orientation::Printed) ==
        doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-12));
  CHECK(F_operator_eval(cd, 2, exp_input, 1.0, 0.0, Orientation::Printed) ==
        doctest::Approx(4.0 / (3.0 * std::numbers::e)).epsilon(1e-12));
  CHECK(F_operator_eval(cd, 4, exp_input, 1.0, 0.0, Orientation::Printed) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(F_operator_eval(cd, 3, [](double) { return 0.0; }, 1.0, 0.0) == 0.0);
}

TEST_CASE("reflected layout mirrors head and tail") {
  const auto cd = support::test_data();
  for (int i = 1; i <= 4; ++i) {
    const SideRates p = f_operator_layout(cd, i, Orientation::Printed);
    const SideRates r = f_operator_layout(cd, i, Orientation::Reflected);
    CHECK(p.head == r.tail);
    CHECK(p.tail == r.head);
    if (p.head) CHECK(p.head_rate == r.tail_rate);
    if (p.tail) CHECK(p.tail_rate == r.head_rate);
    // reflected layout is the one the kernel itself has
    const SideRates k = kernel_layout(GreenKernel(cd.shifted(i)));
    CHECK(k.head == r.head);
    CHECK(k.tail == r.tail);
    if (k.head) CHECK(k.head_rate == doctest::Approx(r.head_rate));
    if (k.tail) CHECK(k.tail_rate == doctest::Approx(r.tail_rate));
  }
  // i=1 reflected: int_0^t exp(-(t-s)) exp(-s) ds = t exp(-t)
  CHECK(F_operator_eval(cd, 1, exp_input, 1.0, 0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("F operator closed forms on random exponential inputs") {
  std::mt19937_64 rng(31);
  const auto cd = support::test_data();
  int checked = 0;
  while (checked < 50) {
    const int i = std::uniform_int_distribution<int>(1, 4)(rng);
    const Orientation o = rng() % 2 ? Orientation::Printed : Orientation::Reflected;
    const double kappa = support::uniform(rng, 0.3, 3.0), t = support::uniform(rng, 0.0, 6.0);
    const SideRates L = f_operator_layout(cd, i, o);
    if (L.head && std::abs(L.head_rate - kappa) < 0.05) continue;
    const double got = F_operator_eval(cd, i, [kappa](double s) { return std::exp(-kappa * s); }, t, 0.0, o);
    CHECK(got == doctest::Approx(transform_closed(L, kappa, t, 0.0)).epsilon(1e-11));
    ++checked;
  }
}

TEST_CASE("rho bounds") {
  const auto cd = support::test_data();
  const RhoBound printed = rho_bound(cd, 1, support::perturbations("0.001*exp(-t)"), 0.0, Orientation::Printed);
  CHECK(printed.rho == doctest::Approx(5e-4).epsilon(1e-10));
  CHECK(printed.argmax_t == doctest::Approx(0.0));
  CHECK(printed.argmax_j == 0);
  const RhoBound reflected = rho_bound(cd, 1, support::perturbations("0.001*exp(-t)"), 0.0, Orientation::Reflected);
  CHECK(reflected.rho == doctest::Approx(1e-3 / std::numbers::e).epsilon(1e-8));
  CHECK(reflected.argmax_t == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(rho_bound(cd, 2, support::perturbations("0"), 0.0).rho == 0.0);
  const RhoBound four = rho_bound(cd, 4, support::perturbations("exp(-t)"), 0.0, Orientation::Printed);
  CHECK(four.rho == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));
  CHECK(four.argmax_t == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("contraction constants for the test roots") {
  const auto cd = support::test_data();
  const ContractionConstants c1 = contraction_constants(cd, 1, 0.25);
  CHECK(c1.delta_w == doctest::Approx(-6));
  CHECK(c1.alpha(0) == doctest::Approx(6));
  CHECK(c1.alpha(1) == doctest::Approx(18));
  CHECK(c1.alpha(2) == doctest::Approx(60));
  CHECK(c1.A == doctest::Approx(14));
  CHECK(c1.varsigma == doctest::Approx(44));
  CHECK(c1.A_kernel == doctest::Approx(14).epsilon(1e-14));
  CHECK(contraction_constants(cd, 4, 0.25).A == doctest::Approx(c1.A));
  // root 3: typeset alpha disagrees with the kernel, the corrected form does not
  const ContractionConstants c3 = contraction_constants(cd, 3, 0.25);
  CHECK(std::abs(c3.A - c3.A_kernel) <= 1e-12 * c3.A);
  CHECK(c3.A_printed < c3.A);
  CHECK(contraction_constants(cd, 2, 0.25).A_printed == contraction_constants(cd, 2, 0.25).A);
}

TEST_CASE("eta outside (0, 1/2)") {
  const auto cd = support::test_data();
  try {
    (void)contraction_constants(cd, 1, 0.7);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("eta must lie in (0,0.5)") != std::string::npos);
  }
  CHECK_THROWS_AS((void)contraction_constants(cd, 1, 0.0), ValidationError);
  CHECK_THROWS_AS((void)contraction_constants(cd, 1, 0.5), ValidationError);
}

TEST_CASE("closed-form and kernel constants agree on random roots") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Vector4d roots = support::random_roots(rng);
    const auto cd = characteristic_data(quartic_from_roots(roots));
    const double eta = support::uniform(rng, 0.01, 0.49);
    for (int i = 1; i <= 4; ++i) {
      const ContractionConstants c = contraction_constants(cd, i, eta);
      CAPTURE(roots.transpose());
      CAPTURE(i);
      CHECK(c.A > 0);
      CHECK(c.varsigma > 0);
      CHECK(std::abs(c.delta_w - GreenKernel(cd.shifted(i)).delta_gamma()) <= 1e-12 * std::abs(c.delta_w));
      CHECK(std::abs(c.A - c.A_kernel) <= 1e-12 * c.A);
    }
  }
}

TEST_CASE("H2 decay test") {
  const auto cd = support::test_data();
  const GreenKernel k(cd.shifted(1));
  const auto ts = default_h2_samples(0.0, cd.min_gap);
  const H2Report none = check_h2(k, support::perturbations("0"), ts, 0.0);
  CHECK(none.pass);
  for (const auto& [t, v] : none.samples) CHECK(v == 0.0);
  const H2Report decaying = check_h2(k, support::perturbations("exp(-t)", "exp(-t)"), ts, 0.0);
  CHECK(decaying.pass);
  CHECK(decaying.fitted_rate == doctest::Approx(-1.0).epsilon(0.05));
  const H2Report flat = check_h2(k, support::perturbations("1"), ts, 0.0);
  CHECK_FALSE(flat.pass);
}

TEST_CASE("smallness and Phi") {
  const Smallness s = smallness_check(14, 44, 5e-4);
  CHECK(s.product == doctest::Approx(0.308));
  CHECK(s.ok);
  REQUIRE(s.Phi);
  CHECK(*s.Phi == doctest::Approx(14 / 0.692));
  CHECK(*s.Phi == doctest::Approx(20.23).epsilon(1e-3));
  CHECK(*smallness_check(14, 44, 0).Phi == 14.0);
  const Smallness edge = smallness_check(14, 44, 1.0 / (14 * 44));
  CHECK_FALSE(edge.ok);
  CHECK_FALSE(edge.Phi);
}
