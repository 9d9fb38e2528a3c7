#include "mvm/channel.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mvm/parallel.hpp"

namespace mvm {

namespace {

constexpr std::uint64_t kBlockTrials = 65536;
constexpr std::uint64_t kCheckpointBlocks = 16;
constexpr double kTwoPi = 6.2831853071795864769;

struct BlockCounts {
  std::uint64_t trials = 0;
  std::uint64_t symbolErrors = 0;
  std::uint64_t bitErrors = 0;
};

// Rows of the detector matrix are adjoints of the symbols, so y = D r holds
// the inner products <s_m|r>.
Eigen::MatrixXcd detectorMatrix(const Constellation& c) {
  Eigen::MatrixXcd d(c.m, c.n);
  for (int m = 0; m < c.m; ++m) d.row(m) = c.vectors[m].entries().adjoint();
  return d;
}

int argmaxAbs(const Eigen::VectorXcd& y) {
  int best = 0;
  double bestValue = std::norm(y(0));
  for (int m = 1; m < y.size(); ++m) {
    const double value = std::norm(y(m));
    if (value > bestValue) {
      bestValue = value;
      best = m;
    }
  }
  return best;
}

BlockCounts runSimulationBlock(const Constellation& c,
                               const Eigen::MatrixXcd& detector,
                               const ChannelConfig& cfg,
                               std::uint64_t blockIndex,
                               std::uint64_t blockTrials) {
  std::mt19937_64 rng(substreamSeed(cfg.seed, blockIndex));
  std::uniform_int_distribution<int> pickSymbol(0, c.m - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  const double sigma = std::sqrt(cfg.snr.sigma2());

  Eigen::VectorXcd r(c.n);
  Eigen::VectorXcd y(c.m);
  BlockCounts counts;
  counts.trials = blockTrials;
  for (std::uint64_t t = 0; t < blockTrials; ++t) {
    const int sent = pickSymbol(rng);
    r = c.vectors[sent].entries();
    if (cfg.applyRandomPhase)
      r *= std::exp(Complex(0.0, phase(rng)));
    for (int i = 0; i < c.n; ++i)
      r(i) += Complex(sigma * gauss(rng), sigma * gauss(rng));
    y.noalias() = detector * r;
    const int decoded = argmaxAbs(y);
    if (decoded != sent) {
      ++counts.symbolErrors;
      if (c.hasBits())
        counts.bitErrors += std::popcount(
            static_cast<unsigned>(c.bits[sent] ^ c.bits[decoded]));
    }
  }
  return counts;
}

}  // namespace

std::string SimResult::toJson() const {
  nlohmann::json j;
  j["trials"] = trials;
  j["symbol_errors"] = symbolErrors;
  j["bit_errors"] = bitErrors;
  j["ser"] = serEstimate;
  j["ber"] = berEstimate;
  j["ser_stderr"] = serStdErr;
  j["ber_stderr"] = berStdErr;
  j["seed"] = seed;
  return j.dump();
}

Eigen::VectorXcd transmit(const JonesVector& s, const ChannelConfig& cfg,
                          std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  const double sigma = std::sqrt(cfg.snr.sigma2());

  Eigen::VectorXcd r = s.entries();
  if (cfg.applyRandomPhase) r *= std::exp(Complex(0.0, phase(rng)));
  for (Eigen::Index i = 0; i < r.size(); ++i)
    r(i) += Complex(sigma * gauss(rng), sigma * gauss(rng));
  return r;
}

int detectML(const Eigen::VectorXcd& r, const Constellation& c) {
  if (r.size() != c.n)
    throw std::invalid_argument("detectML: dimension mismatch");
  return argmaxAbs(detectorMatrix(c) * r);
}

SimResult simulate(const Constellation& c, const ChannelConfig& cfg) {
  c.validate();
  if (cfg.trials < 1) throw std::invalid_argument("simulate: trials must be >= 1");

  const Eigen::MatrixXcd detector = detectorMatrix(c);
  const std::uint64_t blockCount = (cfg.trials + kBlockTrials - 1) / kBlockTrials;
  auto blockSize = [&](std::uint64_t b) {
    return (b + 1 < blockCount) ? kBlockTrials
                                : cfg.trials - b * kBlockTrials;
  };

  std::vector<BlockCounts> blocks(blockCount);
  std::uint64_t completed = 0;
  BlockCounts total;
  auto accumulate = [&](std::uint64_t upto) {
    for (; completed < upto; ++completed) {
      total.trials += blocks[completed].trials;
      total.symbolErrors += blocks[completed].symbolErrors;
      total.bitErrors += blocks[completed].bitErrors;
    }
  };

  if (!cfg.earlyStop) {
    parallelFor(blockCount, [&](std::size_t b) {
      blocks[b] = runSimulationBlock(c, detector, cfg, b, blockSize(b));
    });
    accumulate(blockCount);
  } else {
    for (std::uint64_t start = 0; start < blockCount;
         start += kCheckpointBlocks) {
      const std::uint64_t stop =
          std::min<std::uint64_t>(start + kCheckpointBlocks, blockCount);
      parallelFor(stop - start, [&](std::size_t i) {
        const std::uint64_t b = start + i;
        blocks[b] = runSimulationBlock(c, detector, cfg, b, blockSize(b));
      });
      accumulate(stop);
      if (total.symbolErrors >= 100 && total.trials >= 1000000) break;
    }
  }

  SimResult result;
  result.trials = total.trials;
  result.symbolErrors = total.symbolErrors;
  result.bitErrors = total.bitErrors;
  result.hasBits = c.hasBits();
  result.seed = cfg.seed;
  const double trials = static_cast<double>(total.trials);
  result.serEstimate = total.symbolErrors / trials;
  result.serStdErr = std::sqrt(result.serEstimate * (1.0 - result.serEstimate) / trials);
  if (c.hasBits()) {
    const double bitTrials = trials * c.bitsPerSymbol();
    result.berEstimate = total.bitErrors / bitTrials;
    result.berStdErr =
        std::sqrt(result.berEstimate * (1.0 - result.berEstimate) / bitTrials);
  }
  return result;
}

DyadDecomposition receivedDyadDecomposition(const JonesVector& s,
                                            const Eigen::VectorXcd& noise) {
  if (noise.size() != s.dim())
    throw std::invalid_argument("receivedDyadDecomposition: dimension mismatch");
  DyadDecomposition d;
  d.signal = projectionDyad(s);
  const Eigen::MatrixXcd cross = s.entries() * noise.adjoint();
  d.beating = cross + cross.adjoint();
  d.noise = noise * noise.adjoint();
  return d;
}

double pairwiseErrorRiceOracle(const PairGeometry& geom, const SnrPoint& snr,
                               std::uint64_t trials, std::uint64_t seed) {
  if (trials < 10000)
    throw std::invalid_argument("pairwiseErrorRiceOracle: trials must be >= 1e4");
  const double sigma = std::sqrt(snr.sigma2());
  const std::uint64_t blockCount = (trials + kBlockTrials - 1) / kBlockTrials;

  std::vector<std::uint64_t> hits(blockCount);
  parallelFor(blockCount, [&](std::size_t b) {
    const std::uint64_t blockTrials =
        (b + 1 < blockCount) ? kBlockTrials : trials - b * kBlockTrials;
    std::mt19937_64 rng(substreamSeed(seed, b));
    std::normal_distribution<double> gauss(0.0, sigma);
    std::uint64_t count = 0;
    for (std::uint64_t t = 0; t < blockTrials; ++t) {
      const double xPlus = gauss(rng), yPlus = gauss(rng);
      const double xMinus = gauss(rng), yMinus = gauss(rng);
      const double psiMinusSq =
          (xPlus + geom.rhoMinus) * (xPlus + geom.rhoMinus) + yPlus * yPlus;
      const double psiPlusSq =
          (xMinus + geom.rhoPlus) * (xMinus + geom.rhoPlus) + yMinus * yMinus;
      if (psiMinusSq >= psiPlusSq) ++count;
    }
    hits[b] = count;
  });

  std::uint64_t total = 0;
  for (std::uint64_t h : hits) total += h;
  return static_cast<double>(total) / static_cast<double>(trials);
}

}  // namespace mvm
