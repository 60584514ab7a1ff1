#include <doctest.h>

#include <cmath>
#include <random>

#include "asymint/errors.hpp"
#include "asymint/exprlang.hpp"

using namespace asymint;

TEST_CASE("tree shape") {
  CHECK(parse("0.001*exp(-t)").structure() == "Mul(0.001, Exp(Neg(t)))");
  CHECK(parse("-t^2").structure() == "Neg(Pow(t, 2))");
  CHECK(parse("2^3^2")(0.0) == doctest::Approx(512.0));
  CHECK(parse("1-2-3")(0.0) == -4.0);
  CHECK(parse("8/2/2")(0.0) == 2.0);
}

TEST_CASE("evaluation") {
  CHECK(parse("1/(1+t^2)")(1.0) == 0.5);
  CHECK(parse("0")(123.0) == 0.0);
  CHECK(parse("exp(-t)")(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(parse("abs(sin(t)) + cos(0)")(-M_PI / 2) == doctest::Approx(2.0));
  CHECK(parse("log(exp(2.5))")(0.0) == doctest::Approx(2.5));
  CHECK(parse("1.5e-3*t")(2.0) == doctest::Approx(3e-3));
  CHECK(FunctionExpr()(7.0) == 0.0);
  CHECK(parse("0").is_zero());
  CHECK_FALSE(parse("t").is_zero());
}

TEST_CASE("syntax errors carry the position") {
  try {
    (void)parse("exp(");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS((void)parse(""), SyntaxError);
  CHECK_THROWS_AS((void)parse("1+"), SyntaxError);
  CHECK_THROWS_AS((void)parse("(1"), SyntaxError);
  CHECK_THROWS_AS((void)parse("1 2"), SyntaxError);
}

TEST_CASE("unknown identifiers") {
  try {
    (void)parse("foo(t)");
    FAIL("expected UnknownIdentifier");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownIdentifier);
  }
  CHECK_THROWS_AS((void)parse("x+1"), Error);
}

TEST_CASE("domain and overflow errors") {
  auto code_of = [](const char* text, double t) {
    try {
      (void)parse(text)(t);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::InvalidArgument;
  };
  CHECK(code_of("1/t", 0.0) == Errc::DomainError);
  CHECK(code_of("log(t)", -1.0) == Errc::DomainError);
  CHECK(code_of("log(t)", 0.0) == Errc::DomainError);
  CHECK(code_of("exp(t)", 1000.0) == Errc::Overflow);
  CHECK(code_of("(-1)^t", 0.5) == Errc::DomainError);
}

namespace {

// random expression text from the grammar
std::string random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  std::uniform_real_distribution<double> num(0.1, 3.0);
  switch (pick(rng)) {
    case 0: return "t";
    case 1: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", num(rng));
      return buf;
    }
    case 2: return "(" + random_expr(rng, depth - 1) + "+" + random_expr(rng, depth - 1) + ")";
    case 3: return "(" + random_expr(rng, depth - 1) + "-" + random_expr(rng, depth - 1) + ")";
    case 4: return random_expr(rng, depth - 1) + "*" + random_expr(rng, depth - 1);
    case 5: return "(" + random_expr(rng, depth - 1) + ")/(2+abs(" + random_expr(rng, depth - 1) + "))";
    case 6: return "exp(-abs(" + random_expr(rng, depth - 1) + "))";
    case 7: return "sin(" + random_expr(rng, depth - 1) + ")";
    case 8: return "-cos(" + random_expr(rng, depth - 1) + ")";
    default: return "log(1+abs(" + random_expr(rng, depth - 1) + "))^2";
  }
}

}  // namespace

TEST_CASE("print then parse evaluates identically") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> tdist(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const FunctionExpr e = parse(random_expr(rng, 4));
    const FunctionExpr back = parse(e.to_string());
    CAPTURE(e.source());
    CHECK(same_structure(e, back));
    CHECK(back.to_string() == e.to_string());
    const double t = tdist(rng);
    const double u = e(t), v = back(t);
    CHECK(std::abs(u - v) <= 1e-15 * std::max(1.0, std::abs(u)));
  }
}
