#include "mvm/pair_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mvm/stokes.hpp"

namespace mvm {

PairGeometry pairGeometryFromGamma(double gamma) {
  if (gamma < 0.0 || gamma > 1.0 + 1e-12)
    throw std::invalid_argument("pairGeometry: gamma outside [0, 1]");
  gamma = std::min(gamma, 1.0);
  const double delta = std::sqrt(std::max(0.0, 1.0 - gamma * gamma));
  return PairGeometry{gamma, delta, std::sqrt(0.5 * (1.0 - delta)),
                      std::sqrt(0.5 * (1.0 + delta))};
}

PairGeometry pairGeometry(const JonesVector& s, const JonesVector& t) {
  return pairGeometryFromGamma(std::abs(innerProduct(s, t)));
}

double distCoherent(const JonesVector& s, const JonesVector& t) {
  const double c = std::real(innerProduct(s, t));
  return std::sqrt(2.0) * std::sqrt(std::max(0.0, 1.0 - c));
}

double distDD(const JonesVector& s, const JonesVector& t) {
  const double gamma = std::min(1.0, std::abs(innerProduct(s, t)));
  return std::sqrt(2.0) * std::sqrt(std::max(0.0, 1.0 - gamma));
}

double distHS(const JonesVector& s, const JonesVector& t) {
  const double gamma = std::min(1.0, std::abs(innerProduct(s, t)));
  return std::sqrt(2.0) * std::sqrt(std::max(0.0, 1.0 - gamma * gamma));
}

double distStokes(const JonesVector& s, const JonesVector& t) {
  return distStokesFromGamma(s.dim(), std::abs(innerProduct(s, t)));
}

double distStokesFromGamma(int n, double gamma) {
  gamma = std::min(1.0, gamma);
  return 2.0 * stokesNormalization(n) *
         std::sqrt(std::max(0.0, 1.0 - gamma * gamma));
}

}  // namespace mvm
