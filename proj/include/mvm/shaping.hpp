#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mvm/constellation.hpp"
#include "mvm/errprob.hpp"

namespace mvm {

// Optimizer left the configured step range without making progress.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Generator failed to reach its residual target within the retry budget.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pair potential driving the descent. coulombStokes is the Thomson objective
// Omega(d) = 1/d on the Stokes distance; unionBound uses the symbol union
// bound at a fixed training SNR.
struct Potential {
  enum class Kind { coulombStokes, unionBound };
  Kind kind = Kind::coulombStokes;
  SnrPoint snr{1.0, 1.0, 1};  // unionBound only

  static Potential coulomb() { return Potential{}; }
  static Potential unionBoundAt(const SnrPoint& snr) {
    return Potential{Kind::unionBound, snr};
  }
};

struct DescentConfig {
  int maxIters = 20000;
  double initialStep = 0.05;
  double stepShrink = 0.5;     // on energy increase; growth on success is 1.1x
  double gradTolerance = 1e-6; // on the projected gradient norm
  std::uint64_t seed = 1;
};

// Accepted steps only; the potential is non-increasing along the list.
struct DescentTrace {
  struct Step {
    int iter;
    double potential;
    double gradNorm;
    double stepUsed;
  };
  std::vector<Step> steps;
};

double potentialEnergy(const Constellation& c, const Potential& p);

// Complex M x N gradient d U / d s_im (real and imaginary parts are the
// gradient with respect to the corresponding quadratures). Coulomb uses the
// closed form 4 C_N^2 sum_j d_ij^-3 <s_j|s_i> s_jm; the union-bound potential
// differentiates each pair term by central differences on gamma and chains
// through d gamma / d s_im = <s_j|s_i> s_jm / gamma.
Eigen::MatrixXcd potentialGradient(const Constellation& c, const Potential& p);

// Projected gradient descent with per-vector renormalization and a
// backtracking step rule (halve on increase, grow 1.1x on success). Stops at
// gradTolerance on the projected gradient norm or maxIters; throws
// DivergenceError when the step underflows below 1e-15.
std::pair<Constellation, DescentTrace> optimize(const Constellation& c0,
                                                const Potential& p,
                                                const DescentConfig& cfg);

// Deterministic generators -------------------------------------------------

// First component 1, remaining components over {1, i, -1, -i}, normalized:
// M = 4^(n-1) vectors (capped at 4096).
Constellation standardHypercube(int n);

// M = N^2 equiangular unit vectors with |<s_i|s_j>|^2 = 1/(N+1) within 1e-6,
// by frame-potential descent from seeded random starts plus a Gram
// alternating-projection polish. Deterministic given the seed. Throws
// ConvergenceError (reporting the best residual) when the retry budget is
// exhausted.
Constellation sicPovm(int n, std::uint64_t seed = 2024);

// First m standard basis vectors (all pairs orthogonal).
Constellation orthogonalSet(int n, int m);

// i.i.d. complex Gaussian entries, normalized: uniform on the sphere.
Constellation randomConstellation(int n, int m, std::uint64_t seed);

// Pair-distance diagnostics ------------------------------------------------

enum class PairMetric { dd, stokes };

struct DistanceHistogram {
  double binWidth;
  double minDistance;
  double maxDistance;
  double meanDistance;
  // (bin lower edge, pair count), ascending, empty bins omitted.
  std::vector<std::pair<double, std::uint64_t>> bins;
};

DistanceHistogram coherenceHistogram(const Constellation& c, PairMetric metric,
                                     double binWidth);

std::vector<double> pairDistances(const Constellation& c, PairMetric metric);

}  // namespace mvm
