#include "mvm/stokes.hpp"

#include <cmath>

namespace mvm {

double stokesNormalization(int n) {
  return std::sqrt(n / (2.0 * (n - 1)));
}

StokesVector stokesFromJones(const JonesVector& s) {
  const int n = s.dim();
  const double cn = stokesNormalization(n);
  const auto& v = s.entries();

  // Expanded form of C_N <s|L_a|s> per basis class; avoids materializing the
  // basis matrices.
  Eigen::VectorXd out(n * n - 1);
  int a = 0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      out(a++) = 2.0 * cn * std::real(std::conj(v(j)) * v(k));
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      out(a++) = 2.0 * cn * std::imag(std::conj(v(j)) * v(k));
  for (int l = 1; l < n; ++l) {
    const double scale = std::sqrt(2.0 / (l * (l + 1.0)));
    double acc = 0.0;
    for (int j = 0; j < l; ++j) acc += std::norm(v(j));
    acc -= l * std::norm(v(l));
    out(a++) = cn * scale * acc;
  }
  return StokesVector{std::move(out)};
}

Eigen::MatrixXcd projectionDyad(const JonesVector& s) {
  const auto& v = s.entries();
  return v * v.adjoint();
}

}  // namespace mvm
