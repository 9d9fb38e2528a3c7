#include "mvm/jones.hpp"

#include <cmath>
#include <stdexcept>

namespace mvm {

JonesVector::JonesVector(Eigen::VectorXcd entries) : entries_(std::move(entries)) {
  if (entries_.size() < 2)
    throw std::invalid_argument("JonesVector: dimension must be >= 2");
  const double norm = entries_.norm();
  if (norm < 1e-9)
    throw std::invalid_argument("JonesVector: zero vector (equipower symbols only)");
  if (std::abs(norm - 1.0) > 1e-12)
    throw std::invalid_argument("JonesVector: entries must be unit norm");
}

JonesVector JonesVector::normalized(const Eigen::VectorXcd& raw) {
  if (raw.size() < 2)
    throw std::invalid_argument("JonesVector: dimension must be >= 2");
  const double norm = raw.norm();
  if (norm < 1e-9)
    throw std::invalid_argument("JonesVector: zero vector (equipower symbols only)");
  return JonesVector(raw / norm);
}

JonesVector JonesVector::canonicalized() const {
  for (Eigen::Index i = 0; i < entries_.size(); ++i) {
    const double mag = std::abs(entries_(i));
    if (mag > 1e-12) {
      const Complex phase = std::conj(entries_(i)) / mag;
      return JonesVector::normalized(entries_ * phase);
    }
  }
  return *this;  // unreachable for valid vectors
}

Complex innerProduct(const JonesVector& a, const JonesVector& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("innerProduct: dimension mismatch");
  return a.entries().dot(b.entries());
}

JonesVector jonesFromHyperspherical(const HypersphericalCoords& coords) {
  const std::size_t count = coords.phis.size();
  if (count == 0 || coords.thetas.size() != count)
    throw std::invalid_argument(
        "jonesFromHyperspherical: need N-1 polar angles and N-1 phases");
  const int n = static_cast<int>(count) + 1;

  Eigen::VectorXcd v(n);
  double sinProduct = 1.0;  // sin(phi_1) ... sin(phi_j) running product
  v(0) = std::cos(coords.phis[0]);
  for (int j = 1; j < n; ++j) {
    sinProduct *= std::sin(coords.phis[j - 1]);
    const double radial =
        (j < n - 1) ? sinProduct * std::cos(coords.phis[j]) : sinProduct;
    v(j) = radial * std::exp(Complex(0.0, coords.thetas[j - 1]));
  }
  return JonesVector::normalized(v);
}

}  // namespace mvm
