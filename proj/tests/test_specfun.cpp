#include <doctest.h>

#include <cmath>

#include "mvm/specfun.hpp"
#include "oracles.hpp"

using namespace mvm;

TEST_CASE("besselI0 matches the power-series oracle") {
  CHECK(specfun::besselI0(0.0) == 1.0);
  // Frozen from the 50-term series oracle.
  CHECK(specfun::besselI0(1.0) == doctest::Approx(1.2660658777520084).epsilon(1e-13));
  CHECK(specfun::besselI0(10.0) == doctest::Approx(2815.7166284662544).epsilon(1e-13));
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 15.0}) {
    CHECK(specfun::besselI0(x) ==
          doctest::Approx(oracles::besselI0Series(x)).epsilon(1e-12));
  }
}

TEST_CASE("besselI0 crossover continuity and overflow signal") {
  // Adjacent representable points so the function's own slope contributes
  // nothing at the 1e-12 scale; what remains is the algorithm switch.
  const double below = specfun::besselI0(15.0);
  const double above = specfun::besselI0(std::nextafter(15.0, 16.0));
  CHECK(std::abs(above - below) / below < 1e-12);
  CHECK_THROWS_AS((void)specfun::besselI0(710.0), std::overflow_error);
  CHECK_THROWS_AS((void)specfun::besselI0(-1.0), std::domain_error);
}

TEST_CASE("besselI0Scaled values and properties") {
  CHECK(specfun::besselI0Scaled(0.0) == 1.0);
  // Frozen from the Hankel-series oracle at x = 100.
  CHECK(specfun::besselI0Scaled(100.0) ==
        doctest::Approx(oracles::besselI0ScaledHankel(100.0)).epsilon(1e-13));
  CHECK(specfun::besselI0Scaled(100.0) ==
        doctest::Approx(0.03994437929909668).epsilon(1e-12));

  SUBCASE("definition identity below overflow") {
    for (double x : {0.5, 3.0, 12.0, 25.0, 50.0}) {
      CHECK(specfun::besselI0Scaled(x) * std::exp(x) ==
            doctest::Approx(specfun::besselI0(x)).epsilon(1e-12));
    }
  }
  SUBCASE("strictly decreasing, derivative sign by finite differences") {
    double prev = specfun::besselI0Scaled(0.0);
    for (double x = 0.25; x <= 200.0; x += 0.25) {
      const double cur = specfun::besselI0Scaled(x);
      CHECK(cur < prev);
      prev = cur;
    }
    for (double x : {0.5, 5.0, 20.0, 120.0}) {
      const double h = 1e-6;
      const double slope =
          (specfun::besselI0Scaled(x + h) - specfun::besselI0Scaled(x - h)) /
          (2 * h);
      CHECK(slope < 0.0);
    }
  }
  SUBCASE("value in (0, 1], equals 1 only at 0") {
    CHECK(specfun::besselI0Scaled(1e-3) < 1.0);
    CHECK(specfun::besselI0Scaled(300.0) > 0.0);
  }
}

TEST_CASE("marcumQ1 closed-form edges") {
  for (double a : {0.0, 0.7, 3.0, 12.0}) CHECK(specfun::marcumQ1(a, 0.0) == 1.0);
  CHECK(specfun::marcumQ1(0.0, 2.0) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
  CHECK(specfun::marcumQ1(0.0, 2.0) == doctest::Approx(0.1353353).epsilon(1e-6));
}

TEST_CASE("marcumQ1 against adaptive quadrature of the defining integral") {
  // Frozen from the quadrature oracle.
  CHECK(specfun::marcumQ1(1.0, 1.0) ==
        doctest::Approx(oracles::marcumQ1Quadrature(1.0, 1.0)).epsilon(1e-10));
  CHECK(specfun::marcumQ1(1.0, 1.0) == doctest::Approx(0.7328798).epsilon(1e-6));

  for (double a = 0.0; a <= 20.0; a += 2.5) {
    for (double b = 0.5; b <= 20.0; b += 2.5) {
      const double q = specfun::marcumQ1(a, b);
      const double ref = oracles::marcumQ1Quadrature(a, b);
      CHECK(std::abs(q - ref) < 1e-10);
    }
  }
}

TEST_CASE("marcumQ1 equal-argument identity") {
  for (double a = 0.0; a <= 20.0; a += 0.5) {
    const double lhs = specfun::marcumQ1(a, a);
    const double rhs =
        0.5 * (1.0 + specfun::besselI0Scaled(a * a));  // e^{-a^2} I0(a^2)
    CHECK(std::abs(lhs - rhs) < 1e-11);
  }
}

TEST_CASE("marcumQ1 monotone in a and b") {
  for (double a = 0.0; a <= 18.0; a += 1.5)
    for (double b = 0.5; b <= 18.0; b += 1.5) {
      CHECK(specfun::marcumQ1(a + 0.25, b) >= specfun::marcumQ1(a, b) - 1e-12);
      CHECK(specfun::marcumQ1(a, b + 0.25) <= specfun::marcumQ1(a, b) + 1e-12);
    }
}

TEST_CASE("marcumQ1 series/asymptotic handoff stays continuous") {
  // Points straddling the large-argument branch (max(a,b) = 37).
  for (double b : {37.5, 40.0, 50.0}) {
    for (double ratio : {0.2, 0.5, 0.8, 0.95}) {
      const double a = ratio * b;
      const double q = specfun::marcumQ1(a, b);
      CHECK(q >= 0.0);
      CHECK(q <= 1.0);
      // Complement identity ties the two branch orientations together.
      const double sum = specfun::marcumQ1(a, b) + specfun::marcumQ1(b, a);
      const double expected =
          1.0 + std::exp(-0.5 * (a - b) * (a - b)) *
                    specfun::besselI0Scaled(a * b);
      CHECK(sum == doctest::Approx(expected).epsilon(1e-9));
    }
  }
  SUBCASE("diagonal and near-diagonal beyond the series box") {
    for (double a : {40.0, 55.0, 80.0}) {
      CHECK(specfun::marcumQ1(a, a) ==
            doctest::Approx(0.5 * (1.0 + specfun::besselI0Scaled(a * a)))
                .epsilon(1e-14));
      const double near = specfun::marcumQ1(a, a + 0.01);
      CHECK(std::isfinite(near));
      CHECK(near > 0.4);
      CHECK(near < specfun::marcumQ1(a, a - 0.01));
    }
  }
}

TEST_CASE("erfc matches the series/continued-fraction oracle") {
  CHECK(specfun::erfc(0.0) == 1.0);
  CHECK(specfun::erfc(1.0) == doctest::Approx(0.15729920705).epsilon(1e-10));
  for (double x = -8.0; x <= 10.0; x += 0.5) {
    const double ref = oracles::erfc(x);
    CHECK(std::abs(specfun::erfc(x) - ref) <= 1e-12 * std::abs(ref));
  }
  SUBCASE("reflection") {
    for (double x : {0.3, 1.7, 4.2}) {
      CHECK(specfun::erfc(-x) ==
            doctest::Approx(2.0 - specfun::erfc(x)).epsilon(1e-14));
    }
  }
}

TEST_CASE("erfcx consistent with erfc") {
  for (double x : {0.0, 0.5, 2.0, 10.0, 25.0}) {
    CHECK(specfun::erfcx(x) * std::exp(-x * x) ==
          doctest::Approx(specfun::erfc(x)).epsilon(1e-12));
  }
  // Across the internal switch at x = 26.
  const double lo = specfun::erfcx(26.0 - 1e-9);
  const double hi = specfun::erfcx(26.0 + 1e-9);
  CHECK(std::abs(hi - lo) / lo < 1e-10);
}
