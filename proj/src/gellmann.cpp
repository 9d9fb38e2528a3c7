#include "mvm/gellmann.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace mvm {

GellMannBasis::GellMannBasis(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("GellMannBasis: dimension must be >= 2");
  matrices_.reserve(static_cast<std::size_t>(n) * n - 1);
  const std::complex<double> i(0.0, 1.0);

  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
      m(j, k) = 1.0;
      m(k, j) = 1.0;
      matrices_.push_back(std::move(m));
    }
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
      m(j, k) = -i;
      m(k, j) = i;
      matrices_.push_back(std::move(m));
    }
  for (int l = 1; l < n; ++l) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    const double scale = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) m(j, j) = scale;
    m(l, l) = -scale * l;
    matrices_.push_back(std::move(m));
  }
}

const GellMannBasis& GellMannBasis::cached(int n) {
  static std::mutex mutex;
  static std::map<int, GellMannBasis> instances;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = instances.find(n);
  if (it == instances.end())
    it = instances.emplace(n, GellMannBasis(n)).first;
  return it->second;
}

}  // namespace mvm
