#include "mvm/mapping.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "mvm/pair_geometry.hpp"
#include "mvm/parallel.hpp"

namespace mvm {

namespace {

int hamming(int a, int b) {
  return std::popcount(static_cast<unsigned>(a ^ b));
}

void requireLabeled(const Constellation& c, const std::vector<int>& labels) {
  if (!isPowerOfTwo(c.m))
    throw std::invalid_argument("mapping: M must be a power of two");
  if (static_cast<int>(labels.size()) != c.m)
    throw std::invalid_argument("mapping: label count must equal M");
}

std::vector<int> randomLabels(int m, std::mt19937_64& rng) {
  std::vector<int> labels(m);
  std::iota(labels.begin(), labels.end(), 0);
  std::shuffle(labels.begin(), labels.end(), rng);
  return labels;
}

// Change of xi when the labels at positions i and j swap; the (i, j) pair
// itself keeps its Hamming distance.
double swapDelta(const Eigen::MatrixXd& pbin, const std::vector<int>& labels,
                 int i, int j, double scale) {
  const int m = static_cast<int>(labels.size());
  double delta = 0.0;
  for (int x = 0; x < m; ++x) {
    if (x == i || x == j) continue;
    delta += (pbin(i, x) - pbin(j, x)) *
             (hamming(labels[j], labels[x]) - hamming(labels[i], labels[x]));
  }
  return scale * delta;
}

}  // namespace

Eigen::MatrixXd pairErrorMatrix(const Constellation& c, const SnrPoint& snr) {
  c.validate();
  const std::vector<double> gammas = pairCoherences(c);
  std::vector<double> values(gammas.size());
  parallelFor(gammas.size(), [&](std::size_t idx) {
    values[idx] = pairwiseError(pairGeometryFromGamma(gammas[idx]), snr,
                                EvalMethod::autoSwitch);
  });
  Eigen::MatrixXd pbin = Eigen::MatrixXd::Zero(c.m, c.m);
  for (int i = 0; i < c.m; ++i)
    for (int j = i + 1; j < c.m; ++j)
      pbin(i, j) = pbin(j, i) = values[pairIndex(c.m, i, j)];
  return pbin;
}

double xiFromMatrix(const Eigen::MatrixXd& pbin, const std::vector<int>& labels,
                    int k) {
  const int m = static_cast<int>(labels.size());
  double xi = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      xi += pbin(i, j) * hamming(labels[i], labels[j]);
  return xi * 2.0 / (static_cast<double>(k) * m);
}

double xiObjective(const Constellation& c, const BitMapping& labels,
                   const SnrPoint& snr) {
  requireLabeled(c, labels.labels);
  return xiFromMatrix(pairErrorMatrix(c, snr), labels.labels, c.bitsPerSymbol());
}

double initialTemperature(const Constellation& c, const SnrPoint& snr,
                          int samples, std::uint64_t seed) {
  if (samples < 30)
    throw std::invalid_argument("initialTemperature: samples must be >= 30");
  if (!isPowerOfTwo(c.m))
    throw std::invalid_argument("initialTemperature: M must be a power of two");
  const Eigen::MatrixXd pbin = pairErrorMatrix(c, snr);
  const int k = c.bitsPerSymbol();
  std::mt19937_64 rng(substreamSeed(seed, 0));

  double sum = 0.0, sumSq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double xi = xiFromMatrix(pbin, randomLabels(c.m, rng), k);
    sum += xi;
    sumSq += xi * xi;
  }
  const double mean = sum / samples;
  const double variance =
      std::max(0.0, (sumSq - samples * mean * mean) / (samples - 1));
  return std::sqrt(variance);
}

AnnealSchedule defaultAnnealSchedule(const Constellation& c, const SnrPoint& snr,
                                     std::uint64_t seed) {
  const double t0 =
      std::max(initialTemperature(c, snr, 64, seed), 1e-12);
  AnnealSchedule sched;
  sched.t0 = t0;
  sched.alpha = 0.995;
  sched.itersPerTemp = c.m * c.m;
  sched.minTemp = t0 * 1e-6;
  sched.seed = seed;
  return sched;
}

std::pair<BitMapping, AnnealTrace> annealMapping(
    const Constellation& c, const SnrPoint& snr, const AnnealSchedule& sched,
    const std::optional<BitMapping>& start) {
  c.validate();
  if (!isPowerOfTwo(c.m))
    throw std::invalid_argument("annealMapping: M must be a power of two");
  if (!(sched.t0 > 0.0) || !(sched.minTemp > 0.0) || sched.itersPerTemp < 1 ||
      sched.alpha <= 0.0 || sched.alpha >= 1.0)
    throw std::invalid_argument("annealMapping: invalid schedule");

  const int k = c.bitsPerSymbol();
  const Eigen::MatrixXd pbin = pairErrorMatrix(c, snr);
  const double scale = 2.0 / (static_cast<double>(k) * c.m);

  std::mt19937_64 rng(substreamSeed(sched.seed, 1));
  std::vector<int> labels;
  if (start) {
    requireLabeled(c, start->labels);
    labels = start->labels;
  } else {
    labels = randomLabels(c.m, rng);
  }

  double xi = xiFromMatrix(pbin, labels, k);
  std::vector<int> best = labels;
  double bestXi = xi;

  std::uniform_int_distribution<int> pick(0, c.m - 1);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  AnnealTrace trace;

  int tempIndex = 0;
  for (double temp = sched.t0; temp > sched.minTemp;
       temp *= sched.alpha, ++tempIndex) {
    for (int it = 0; it < sched.itersPerTemp; ++it) {
      int i = pick(rng), j = pick(rng);
      if (i == j) continue;
      const double delta = swapDelta(pbin, labels, i, j, scale);
      if (delta <= 0.0 || uniform(rng) < std::exp(-delta / temp)) {
        std::swap(labels[i], labels[j]);
        xi += delta;
        if (xi < bestXi) {
          bestXi = xi;
          best = labels;
        }
      }
    }
    if (tempIndex % 64 == 0) {
      xi = xiFromMatrix(pbin, labels, k);  // kill accumulated drift
      trace.entries.push_back({tempIndex, temp, xi, bestXi});
    }
  }
  bestXi = xiFromMatrix(pbin, best, k);
  trace.entries.push_back({tempIndex, sched.minTemp, xi, bestXi});
  return {BitMapping{std::move(best)}, std::move(trace)};
}

BitMapping annealMappingRestarts(const Constellation& c, const SnrPoint& snr,
                                 const AnnealSchedule& sched, int restarts) {
  if (restarts < 1)
    throw std::invalid_argument("annealMappingRestarts: restarts must be >= 1");
  const int k = c.bitsPerSymbol();
  const Eigen::MatrixXd pbin = pairErrorMatrix(c, snr);

  std::vector<BitMapping> results(restarts);
  parallelFor(restarts, [&](std::size_t r) {
    AnnealSchedule local = sched;
    local.seed = substreamSeed(sched.seed, r);
    results[r] = annealMapping(c, snr, local).first;
  });

  int bestIndex = 0;
  double bestXi = xiFromMatrix(pbin, results[0].labels, k);
  for (int r = 1; r < restarts; ++r) {
    const double xi = xiFromMatrix(pbin, results[r].labels, k);
    if (xi < bestXi) {
      bestXi = xi;
      bestIndex = r;
    }
  }
  return results[bestIndex];
}

BitMapping grayCodeRing(int m) {
  if (!isPowerOfTwo(m))
    throw std::invalid_argument("grayCodeRing: m must be a power of two");
  BitMapping mapping;
  mapping.labels.resize(m);
  for (int i = 0; i < m; ++i) mapping.labels[i] = i ^ (i >> 1);
  return mapping;
}

}  // namespace mvm
