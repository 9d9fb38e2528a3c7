#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mvm {

// Generalized Gell-Mann basis of su(N): N^2-1 Hermitian traceless N x N
// matrices with trace(L_a L_b) = 2 delta_ab.
//
// Fixed ordering (this is also the component order of every Stokes vector
// this library produces or consumes):
//   1. symmetric off-diagonal pairs  E_jk + E_kj, (j,k) lexicographic, j < k
//   2. antisymmetric pairs          -i (E_jk - E_kj), same order
//   3. diagonal matrices            sqrt(2/(l(l+1))) (sum_{j<=l} E_jj - l E_{l+1,l+1}),
//      l = 1..N-1
class GellMannBasis {
 public:
  explicit GellMannBasis(int n);

  int dim() const { return n_; }
  int count() const { return static_cast<int>(matrices_.size()); }
  const Eigen::MatrixXcd& matrix(int a) const { return matrices_[a]; }
  const std::vector<Eigen::MatrixXcd>& matrices() const { return matrices_; }

  // Shared immutable instance per dimension.
  static const GellMannBasis& cached(int n);

 private:
  int n_;
  std::vector<Eigen::MatrixXcd> matrices_;
};

}  // namespace mvm
