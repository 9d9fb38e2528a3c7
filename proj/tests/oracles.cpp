#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace oracles {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kTwoPi = 6.2831853071795864769;

double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptiveSimpson(const std::function<double(double)>& f, double a,
                       double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptiveSimpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptiveSimpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson(f, a, b, fa, fm, fb);
  return adaptiveSimpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

double besselI0Series(double x, int terms) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= terms; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
  }
  return sum;
}

double besselI0ScaledHankel(double x, int terms) {
  double term = 1.0, sum = 1.0;
  const int cap = terms < 0 ? 40 : terms;
  for (int k = 0; k < cap; ++k) {
    const double next =
        term * (2.0 * k + 1.0) * (2.0 * k + 1.0) / (8.0 * (k + 1.0) * x);
    if (terms < 0 && next >= term) break;
    term = next;
    sum += term;
  }
  return sum / std::sqrt(kTwoPi * x);
}

double besselI0Scaled(double x) {
  if (x <= 15.0) return std::exp(-x) * besselI0Series(x);
  return besselI0ScaledHankel(x);
}

double marcumQ1Quadrature(double a, double b, double tol) {
  // x exp(-(x^2+a^2)/2) I0(ax) = x exp(-(x-a)^2/2) [e^{-ax} I0(ax)]
  auto integrand = [a](double x) {
    return x * std::exp(-0.5 * (x - a) * (x - a)) *
           (a * x > 0.0 ? besselI0Scaled(a * x) : 1.0);
  };
  const double hi = a + 45.0;
  if (b >= hi) return 0.0;
  return integrate(integrand, b, hi, tol);
}

double erfc(double x) {
  if (x < 0.0) return 2.0 - erfc(-x);
  if (x < 2.0) {
    // erf series; alternating, fine this close to the origin.
    double term = x, sum = x;
    for (int n = 1; n < 120; ++n) {
      term *= -x * x / n;
      sum += term / (2.0 * n + 1.0);
      if (std::abs(term) < 1e-18) break;
    }
    return 1.0 - 2.0 / kSqrtPi * sum;
  }
  // erfc(x) = Q(1/2, x^2); Lentz continued fraction for the regularized
  // upper incomplete gamma.
  const double a = 0.5;
  const double z = x * x;
  const double tiny = 1e-300;
  double b = z + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 400; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return std::exp(-z) * x / kSqrtPi * h;
}

double bruteForceBestXi(const Eigen::MatrixXd& pbin, int k) {
  const int m = static_cast<int>(pbin.rows());
  if (m > 8) throw std::invalid_argument("bruteForceBestXi: M too large");
  std::vector<int> tail(m - 1);
  std::iota(tail.begin(), tail.end(), 1);

  auto xiOf = [&](const std::vector<int>& labels) {
    double xi = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        xi += pbin(i, j) *
              __builtin_popcount(static_cast<unsigned>(labels[i] ^ labels[j]));
    return xi * 2.0 / (static_cast<double>(k) * m);
  };

  std::vector<int> labels(m);
  labels[0] = 0;
  double best = std::numeric_limits<double>::infinity();
  do {
    for (int i = 1; i < m; ++i) labels[i] = tail[i - 1];
    best = std::min(best, xiOf(labels));
  } while (std::next_permutation(tail.begin(), tail.end()));
  return best;
}

}  // namespace oracles
