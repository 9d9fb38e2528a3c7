#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace mvm {

using Complex = std::complex<double>;

// Hyperspherical parametrization of a unit Jones vector: N-1 polar angles in
// [0, pi/2] and N-1 phases in [0, 2pi).
struct HypersphericalCoords {
  std::vector<double> phis;
  std::vector<double> thetas;
};

// A unit complex N-vector (N >= 2) representing one equipower symbol, stored
// with arbitrary global phase. The common amplitude and pulse energy are
// normalized to 1, so the entry norm is 1 as well.
class JonesVector {
 public:
  // Requires entries already unit-norm within 1e-12.
  explicit JonesVector(Eigen::VectorXcd entries);

  // Normalizes raw entries; rejects near-zero input (norm < 1e-9).
  static JonesVector normalized(const Eigen::VectorXcd& raw);

  int dim() const { return static_cast<int>(entries_.size()); }
  const Eigen::VectorXcd& entries() const { return entries_; }
  Complex operator[](int i) const { return entries_(i); }

  // Phase gauge fixed so the first entry of magnitude > 1e-12 is real
  // positive. Only used to stabilize serialized output; all physics is
  // phase-invariant.
  JonesVector canonicalized() const;

 private:
  Eigen::VectorXcd entries_;
};

// <a|b> = sum_k conj(a_k) b_k.
Complex innerProduct(const JonesVector& a, const JonesVector& b);

JonesVector jonesFromHyperspherical(const HypersphericalCoords& coords);

}  // namespace mvm
