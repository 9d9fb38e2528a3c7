#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mvm/constellation.hpp"
#include "mvm/errprob.hpp"

namespace mvm {

// Bit labels for the M symbols: a permutation of 0..M-1, M a power of two.
struct BitMapping {
  std::vector<int> labels;
};

// Exponential cooling: T_n = alpha^n T_0 down to minTemp, itersPerTemp swap
// proposals at each temperature.
struct AnnealSchedule {
  double t0;
  double alpha = 0.995;
  int itersPerTemp;
  double minTemp;
  std::uint64_t seed = 1;
};

// Pairwise error probabilities at the training SNR; symmetric, zero diagonal.
// Computed once per (constellation, SNR) and reused for every xi evaluation.
Eigen::MatrixXd pairErrorMatrix(const Constellation& c, const SnrPoint& snr);

// xi = (1/(kM)) sum_m sum_{m' != m} P_bin h_{mm'}; equals unionBoundBit for
// the same labels (xi is not probability-clipped, but coincides wherever the
// bound is below 1).
double xiObjective(const Constellation& c, const BitMapping& labels,
                   const SnrPoint& snr);
double xiFromMatrix(const Eigen::MatrixXd& pbin, const std::vector<int>& labels,
                    int k);

// Sample standard deviation of xi over `samples` uniformly random mappings
// (samples >= 30). Zero for constellations where xi is label-invariant.
double initialTemperature(const Constellation& c, const SnrPoint& snr,
                          int samples, std::uint64_t seed);

// t0 from initialTemperature (64 samples, floored at 1e-12), alpha = 0.995,
// itersPerTemp = M^2, minTemp = t0 * 1e-6.
AnnealSchedule defaultAnnealSchedule(const Constellation& c, const SnrPoint& snr,
                                     std::uint64_t seed);

struct AnnealTrace {
  struct Entry {
    int temperatureIndex;
    double temperature;
    double currentXi;
    double bestXi;
  };
  std::vector<Entry> entries;
};

// Simulated annealing over label swaps with Metropolis acceptance (equal-xi
// candidates are accepted so plateaus can drift). Returns the best-ever
// mapping, never one worse than the start.
std::pair<BitMapping, AnnealTrace> annealMapping(
    const Constellation& c, const SnrPoint& snr, const AnnealSchedule& sched,
    const std::optional<BitMapping>& start = std::nullopt);

// Independent restarts with substream seeds; minimum xi wins, ties broken by
// lowest restart index.
BitMapping annealMappingRestarts(const Constellation& c, const SnrPoint& snr,
                                 const AnnealSchedule& sched, int restarts);

// Reflected binary Gray sequence assigned around a ring ordering.
BitMapping grayCodeRing(int m);

}  // namespace mvm
