#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "mvm/constellation.hpp"
#include "mvm/errprob.hpp"
#include "mvm/stokes.hpp"

namespace mvm {

// Discrete-time ASE-limited channel: r = e^{i theta} s + n with i.i.d.
// complex Gaussian noise, variance sigma^2 = 1/(2 gammaS) per quadrature.
// The ML metric is phase-invariant, so theta = 0 simulation is statistically
// identical; applyRandomPhase re-enables the phase draw as a sanity check.
struct ChannelConfig {
  SnrPoint snr;
  bool applyRandomPhase = false;
  std::uint64_t seed = 1;
  std::uint64_t trials = 1;
  // Stop once >= 100 errors have been seen over >= 1e6 trials (checked at
  // fixed block checkpoints, so results stay thread-count independent).
  bool earlyStop = false;
};

struct SimResult {
  std::uint64_t trials = 0;
  std::uint64_t symbolErrors = 0;
  std::uint64_t bitErrors = 0;
  bool hasBits = false;
  double serEstimate = 0.0;
  double berEstimate = 0.0;
  double serStdErr = 0.0;
  double berStdErr = 0.0;
  std::uint64_t seed = 0;

  std::string toJson() const;
};

// One channel use. 2N real Gaussian draws (plus the phase draw when enabled).
Eigen::VectorXcd transmit(const JonesVector& s, const ChannelConfig& cfg,
                          std::mt19937_64& rng);

// argmax_m |<r|s_m>|, ties broken by lowest index.
int detectML(const Eigen::VectorXcd& r, const Constellation& c);

// Monte-Carlo run over uniformly random transmitted symbols; counts symbol
// errors and, when labels are present, Hamming-weighted bit errors. Trials
// are split into 65536-trial blocks with counter-derived substream seeds and
// summed in block order, so counts do not depend on the worker count.
SimResult simulate(const Constellation& c, const ChannelConfig& cfg);

// |r><r| = S_m + 2 Re(|s_m><n|) + |n><n| split into its three terms.
struct DyadDecomposition {
  Eigen::MatrixXcd signal;
  Eigen::MatrixXcd beating;
  Eigen::MatrixXcd noise;
};
DyadDecomposition receivedDyadDecomposition(const JonesVector& s,
                                            const Eigen::VectorXcd& noise);

// Monte-Carlo estimate of P(psi- >= psi+) for two Rice variables with
// reference distances rho-/rho+ and common scale sigma; the independent
// oracle for the exact pairwise error formula.
double pairwiseErrorRiceOracle(const PairGeometry& geom, const SnrPoint& snr,
                               std::uint64_t trials, std::uint64_t seed);

}  // namespace mvm
