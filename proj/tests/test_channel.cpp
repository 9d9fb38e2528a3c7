#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>

#include "mvm/channel.hpp"
#include "mvm/shaping.hpp"

using namespace mvm;

TEST_CASE("transmit noise statistics") {
  ChannelConfig cfg;
  cfg.snr = SnrPoint::fromSymbolSnr(4.0);  // sigma^2 = 1/8
  cfg.seed = 5;
  const double sigma2 = cfg.snr.sigma2();
  const Constellation c = orthogonalSet(3, 3);
  std::mt19937_64 rng(99);

  SUBCASE("noiseless cap returns the symbol exactly") {
    ChannelConfig clean = cfg;
    clean.snr = SnrPoint{std::numeric_limits<double>::infinity(),
                         std::numeric_limits<double>::infinity(), 1};
    const Eigen::VectorXcd r = transmit(c.vectors[1], clean, rng);
    CHECK((r - c.vectors[1].entries()).norm() == 0.0);
  }
  SUBCASE("quadrature covariance is sigma^2 I, noise energy is 2N sigma^2") {
    const int n = 3;
    const int draws = 200000;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    Eigen::VectorXd quad(2 * n);
    double sumEnergy = 0.0;
    for (int t = 0; t < draws; ++t) {
      const Eigen::VectorXcd r = transmit(c.vectors[0], cfg, rng);
      const Eigen::VectorXcd noise = r - c.vectors[0].entries();
      for (int i = 0; i < n; ++i) {
        quad(2 * i) = noise(i).real();
        quad(2 * i + 1) = noise(i).imag();
      }
      cov += quad * quad.transpose();
      sumEnergy += noise.squaredNorm();
    }
    cov /= draws;
    // diagonal sigma^2, off-diagonal 0, within 5 standard errors
    const double diagStderr = sigma2 * std::sqrt(2.0 / draws);
    const double offStderr = sigma2 / std::sqrt(static_cast<double>(draws));
    for (int i = 0; i < 2 * n; ++i)
      for (int j = 0; j < 2 * n; ++j) {
        if (i == j)
          CHECK(std::abs(cov(i, i) - sigma2) < 5.0 * diagStderr);
        else
          CHECK(std::abs(cov(i, j)) < 5.0 * offStderr);
      }
    const double meanEnergy = sumEnergy / draws;
    const double expected = 2.0 * n * sigma2;
    const double stderrEnergy =
        std::sqrt(2.0 * 2.0 * n * sigma2 * sigma2 / draws);
    CHECK(std::abs(meanEnergy - expected) < 5.0 * stderrEnergy);
  }
}

TEST_CASE("detectML basics") {
  const Constellation c = standardHypercube(2);
  SUBCASE("clean symbols decode to themselves") {
    for (int m = 0; m < c.m; ++m)
      CHECK(detectML(c.vectors[m].entries(), c) == m);
  }
  SUBCASE("decisions are phase invariant") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uPhase(0.0, 2 * std::numbers::pi);
    for (int m = 0; m < c.m; ++m)
      for (int rep = 0; rep < 5; ++rep) {
        const Complex rot = std::exp(Complex(0.0, uPhase(rng)));
        CHECK(detectML(rot * c.vectors[m].entries(), c) == m);
      }
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS((void)detectML(Eigen::VectorXcd::Zero(3), c),
                    std::invalid_argument);
  }
}

TEST_CASE("simulate: binary orthogonal constellation matches the closed form") {
  Constellation c = orthogonalSet(2, 2);
  c.bits = {0, 1};
  ChannelConfig cfg;
  cfg.snr = SnrPoint::fromSymbolSnr(10.0, 1);
  cfg.trials = 4000000;
  cfg.seed = 41;
  const SimResult result = simulate(c, cfg);
  const double expected = 0.5 * std::exp(-5.0);  // ~3.37e-3
  CHECK(std::abs(result.serEstimate - expected) < 3.0 * result.serStdErr);
  CHECK(result.berEstimate == doctest::Approx(result.serEstimate));  // k = 1

  SUBCASE("reproducible for a fixed seed") {
    const SimResult again = simulate(c, cfg);
    CHECK(again.symbolErrors == result.symbolErrors);
    CHECK(again.bitErrors == result.bitErrors);
  }
  SUBCASE("counts independent of the worker cap") {
    setenv("MVM_THREADS", "1", 1);
    const SimResult single = simulate(c, cfg);
    unsetenv("MVM_THREADS");
    CHECK(single.symbolErrors == result.symbolErrors);
    CHECK(single.bitErrors == result.bitErrors);
  }
  SUBCASE("random phase does not change the statistics") {
    ChannelConfig rotated = cfg;
    rotated.applyRandomPhase = true;
    rotated.seed = 42;
    const SimResult r = simulate(c, rotated);
    CHECK(std::abs(r.serEstimate - expected) < 3.0 * r.serStdErr);
  }
}

TEST_CASE("simulate guards") {
  Constellation c = orthogonalSet(2, 2);
  ChannelConfig cfg;
  cfg.snr = SnrPoint::fromSymbolSnr(10.0);
  cfg.trials = 0;
  CHECK_THROWS_AS((void)simulate(c, cfg), std::invalid_argument);
}

TEST_CASE("empirical SER stays below the union bound") {
  const Constellation c = standardHypercube(2);
  for (double db : {3.0, 6.0, 9.0}) {
    ChannelConfig cfg;
    cfg.snr = SnrPoint::fromSymbolSnrDb(db, 2);
    cfg.trials = 500000;
    cfg.seed = 7;
    const SimResult r = simulate(c, cfg);
    const double bound = unionBoundSymbol(c, cfg.snr);
    CHECK(r.serEstimate <= bound + 3.0 * r.serStdErr);
  }
}

TEST_CASE("received dyad decomposition") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss(0.0, 0.3);
  const Constellation c = standardHypercube(2);
  const JonesVector& s = c.vectors[2];

  Eigen::VectorXcd noise(2);
  noise << Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng));

  const DyadDecomposition d = receivedDyadDecomposition(s, noise);
  SUBCASE("zero noise gives (S, 0, 0)") {
    const DyadDecomposition clean =
        receivedDyadDecomposition(s, Eigen::VectorXcd::Zero(2));
    CHECK(clean.beating.norm() == 0.0);
    CHECK(clean.noise.norm() == 0.0);
    CHECK((clean.signal - projectionDyad(s)).norm() < 1e-15);
  }
  SUBCASE("parts sum to the received dyad") {
    const Eigen::VectorXcd r = s.entries() + noise;
    const Eigen::MatrixXcd sum = d.signal + d.beating + d.noise;
    CHECK((sum - r * r.adjoint()).norm() < 1e-12);
    CHECK(std::abs(sum.trace().real() - r.squaredNorm()) < 1e-12);
    CHECK(std::abs(sum.trace().imag()) < 1e-14);
  }
}

TEST_CASE("Rice oracle sanity") {
  SUBCASE("gamma = 1 gives 1/2") {
    const double p = pairwiseErrorRiceOracle(
        pairGeometryFromGamma(1.0), SnrPoint::fromSymbolSnr(8.0), 2000000, 11);
    CHECK(std::abs(p - 0.5) < 3.0 * std::sqrt(0.25 / 2000000));
  }
  SUBCASE("gamma = 0, gs = 4 gives e^-2 / 2") {
    const double expected = 0.5 * std::exp(-2.0);  // 0.067668
    const std::uint64_t trials = 4000000;
    const double p = pairwiseErrorRiceOracle(pairGeometryFromGamma(0.0),
                                             SnrPoint::fromSymbolSnr(4.0),
                                             trials, 13);
    CHECK(std::abs(p - expected) <
          3.0 * std::sqrt(expected * (1.0 - expected) / trials));
  }
  SUBCASE("cross-validates the exact formula on a small grid") {
    const std::uint64_t trials = 2000000;
    for (double gamma : {0.3, 0.7}) {
      for (double gs : {5.0, 20.0}) {
        const PairGeometry geom = pairGeometryFromGamma(gamma);
        const SnrPoint snr = SnrPoint::fromSymbolSnr(gs);
        const double exact = pairwiseErrorExact(geom, snr);
        const double mc = pairwiseErrorRiceOracle(geom, snr, trials, 17);
        CHECK(std::abs(mc - exact) <
              3.0 * std::sqrt(exact * (1.0 - exact) / trials));
      }
    }
  }
  SUBCASE("trial floor enforced") {
    CHECK_THROWS_AS(
        (void)pairwiseErrorRiceOracle(pairGeometryFromGamma(0.5),
                                      SnrPoint::fromSymbolSnr(4.0), 100, 1),
        std::invalid_argument);
  }
}
