#include <doctest.h>

#include <cmath>

#include "lz3/detail/ddouble.hpp"

using lz3::detail::DDComplex;
using lz3::detail::DDouble;

namespace {
double err_vs(DDouble x, double hi, double lo) {
  const DDouble ref{hi, lo};
  return std::abs((x - ref).value());
}
}  // namespace

TEST_CASE("dd arithmetic keeps the low word") {
  const DDouble a = lz3::detail::two_sum(1.0, 1e-20);
  CHECK(a.hi == 1.0);
  CHECK(a.lo == 1e-20);
  const DDouble b = (a + a) - DDouble(2.0);
  CHECK(std::abs(b.value() - 2e-20) < 1e-33);

  // (1 + eps)^2 = 1 + 2 eps + eps^2 exactly representable in dd
  const DDouble one_eps = lz3::detail::two_sum(1.0, 1e-18);
  const DDouble sq = one_eps * one_eps;
  CHECK(std::abs((sq - DDouble(1.0) - DDouble(2e-18)).value()) < 1e-32);
}

TEST_CASE("dd division round-trips") {
  const DDouble x{3.141592653589793, 1.2246467991473532e-16};
  const DDouble y{2.718281828459045, 1.4456468917292502e-16};
  const DDouble q = x / y;
  CHECK(std::abs((q * y - x).value()) < 1e-31);
}

TEST_CASE("dd exp matches high-precision references") {
  // e = 2.718281828459045235360287471352...
  CHECK(err_vs(lz3::detail::dd_exp(DDouble(1.0)), 2.718281828459045091e+00,
               1.44564689172925016e-16) < 3e-32);
  // exp(x) exp(-x) = 1 at dd accuracy
  const DDouble prod = lz3::detail::dd_exp(DDouble(-3.5)) * lz3::detail::dd_exp(DDouble(3.5));
  CHECK(std::abs((prod - DDouble(1.0)).value()) < 1e-30);
  // exp(20) = 485165195.40979027796910683...
  const DDouble e20 = lz3::detail::dd_exp(DDouble(20.0));
  CHECK(std::abs(e20.value() - 4.8516519540979028e+08) / 4.85e8 < 1e-15);
}

TEST_CASE("dd sin/cos identities") {
  for (double x : {0.3, 1.0, 2.5, -4.0, 13.7, 47.0}) {
    DDouble s, c;
    lz3::detail::dd_sincos(DDouble(x), s, c);
    const DDouble unit = s * s + c * c - DDouble(1.0);
    CHECK(std::abs(unit.value()) < 1e-30);
    CHECK(std::abs(s.value() - std::sin(x)) < 1e-15);
    CHECK(std::abs(c.value() - std::cos(x)) < 1e-15);
  }
}

TEST_CASE("dd complex exp agrees with std on the unit scale") {
  const DDComplex z(0.25, -1.75);
  const auto v = lz3::detail::dd_exp(z).value();
  const auto ref = std::exp(std::complex<double>(0.25, -1.75));
  CHECK(std::abs(v - ref) < 1e-15);
}

TEST_CASE("dd complex division") {
  const DDComplex a(1.5, -2.5), b(0.75, 0.1);
  const auto back = ((a / b) * b).value();
  CHECK(std::abs(back - std::complex<double>(1.5, -2.5)) < 1e-30);
}
