#pragma once

#include <Eigen/Dense>

#include "mvm/jones.hpp"

namespace mvm {

// Real vector of length N^2-1; the image of a unit Jones vector under the
// Gell-Mann quadratic form has unit norm.
struct StokesVector {
  Eigen::VectorXd components;

  int size() const { return static_cast<int>(components.size()); }
  double norm() const { return components.norm(); }
  double dot(const StokesVector& other) const {
    return components.dot(other.components);
  }
};

// C_N = sqrt(N / (2(N-1))).
double stokesNormalization(int n);

// s_hat_a = C_N <s| L_a |s> in the fixed basis ordering of GellMannBasis.
StokesVector stokesFromJones(const JonesVector& s);

// |s><s|, Hermitian with unit trace. Satisfies
// S = I/N + (1/(2 C_N)) s_hat . Lambda.
Eigen::MatrixXcd projectionDyad(const JonesVector& s);

}  // namespace mvm
