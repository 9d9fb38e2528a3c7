#pragma once

namespace mvm::specfun {

// Modified Bessel function I0(x), x >= 0. Power series below x = 15, Hankel
// asymptotic above; the crossover jump is below 1e-12 relative. Throws
// std::overflow_error for x > 705 where e^x leaves double range - use
// besselI0Scaled there.
double besselI0(double x);

// e^{-x} I0(x) for x >= 0, valid for all x. Strictly decreasing from 1 at
// x = 0.
double besselI0Scaled(double x);

// First-order Marcum Q function Q1(a, b), a, b >= 0. Poisson/gamma-tail
// series over the full a, b <= 37 box (absolute accuracy ~1e-14, no
// cancellation); erfc-based uniform asymptotics beyond. Result clamped to
// [0, 1].
double marcumQ1(double a, double b);

// Complementary error function. Thin wrapper over the C library
// implementation, kept behind this surface so callers stay within the
// module.
double erfc(double x);

// Scaled complement e^{x^2} erfc(x) for x >= 0. Lets callers factor the
// common exponential out of error-probability expressions.
double erfcx(double x);

}  // namespace mvm::specfun
