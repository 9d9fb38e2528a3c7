#include "mvm/errprob.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "mvm/parallel.hpp"
#include "mvm/specfun.hpp"

namespace mvm {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kSqrtTwoPi = 2.5066282746310005024;

// gamma*gammaS/2 handoff between the exact formula and the order-1
// asymptotic in autoSwitch mode.
constexpr double kAutoSwitchThreshold = 50.0;

// Below this, a pair is treated as exactly orthogonal; the asymptotic
// expansions are invalid there and the closed form 1/2 exp(-gs/2) applies.
constexpr double kOrthogonalGamma = 1e-12;

void requireSnr(const SnrPoint& snr) {
  if (!(snr.gammaS > 0.0))
    throw std::invalid_argument("SnrPoint: gammaS must be positive");
}

std::string formatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

}  // namespace

double dbToLinear(double db) { return std::pow(10.0, db / 10.0); }
double linearToDb(double value) { return 10.0 * std::log10(value); }

SnrPoint SnrPoint::fromSymbolSnr(double gammaS, int k) {
  if (k < 1) throw std::invalid_argument("SnrPoint: k must be >= 1");
  return SnrPoint{gammaS, gammaS / k, k};
}

SnrPoint SnrPoint::fromSymbolSnrDb(double db, int k) {
  return fromSymbolSnr(dbToLinear(db), k);
}

SnrPoint SnrPoint::fromBitSnrDb(double db, int k) {
  if (k < 1) throw std::invalid_argument("SnrPoint: k must be >= 1");
  const double gammaB = dbToLinear(db);
  return SnrPoint{k * gammaB, gammaB, k};
}

double asymptoticACoefficient(int n, int m) {
  double value = 1.0;
  for (int i = -n; i < n; ++i) value *= m + i + 0.5;
  double factorial = 1.0;
  for (int i = 2; i <= n; ++i) factorial *= i;
  return value / (factorial * std::pow(2.0, n));
}

AsymptoticCoeffs AsymptoticCoeffs::build(const PairGeometry& geom,
                                         const SnrPoint& snr, int order) {
  requireSnr(snr);
  if (order < 0) throw std::invalid_argument("AsymptoticCoeffs: order < 0");
  const double gamma = geom.gamma;
  if (gamma < kOrthogonalGamma)
    throw std::domain_error("AsymptoticCoeffs: expansion invalid at gamma = 0");
  if (gamma >= 1.0 - 1e-15)
    throw std::domain_error("AsymptoticCoeffs: expansion invalid at gamma = 1");

  AsymptoticCoeffs coeffs;
  coeffs.order = order;
  coeffs.eTerms.resize(order + 1);
  coeffs.fTerms.resize(order + 1);
  coeffs.lambdas.resize(order + 1);
  coeffs.eCumulative.resize(order + 1);
  coeffs.fCumulative.resize(order + 1);
  coeffs.aCoeffs.resize(order + 1);
  coeffs.gTerms.resize(order + 1);

  const double ratio = (1.0 - gamma) / gamma;
  const double halfGammaGs = 0.5 * gamma * snr.gammaS;
  coeffs.eTerms[0] = 0.0;
  coeffs.fTerms[0] = kSqrtPi * std::sqrt(gamma / (1.0 - gamma));
  for (int n = 1; n <= order; ++n) {
    const double c = 1.0 / (0.5 - n);
    coeffs.eTerms[n] =
        c * (ratio * coeffs.eTerms[n - 1] - std::pow(halfGammaGs, 0.5 - n));
    coeffs.fTerms[n] = c * ratio * coeffs.fTerms[n - 1];
  }

  const double rhoRatio = geom.rhoPlus / geom.rhoMinus;
  double sign = 1.0;
  for (int n = 0; n <= order; ++n) {
    coeffs.aCoeffs[n] = {asymptoticACoefficient(n, 0),
                         asymptoticACoefficient(n, 1)};
    coeffs.lambdas[n] = sign / (2.0 * kSqrtTwoPi) *
                        (rhoRatio * coeffs.aCoeffs[n][0] - coeffs.aCoeffs[n][1]);
    sign = -sign;
  }

  double eSum = 0.0, fSum = 0.0;
  for (int n = 0; n <= order; ++n) {
    eSum += coeffs.lambdas[n] * coeffs.eTerms[n];
    fSum += coeffs.lambdas[n] * coeffs.fTerms[n];
    coeffs.eCumulative[n] = eSum;
    coeffs.fCumulative[n] = fSum;
  }

  // g_n = (1/sqrt(pi)) sum_{k<=n} ((2k-1)!!^2 / (4^k k!)) (gamma gs)^{-k-1/2}.
  const double gammaGs = gamma * snr.gammaS;
  double hankel = 1.0 / std::sqrt(gammaGs);
  double gSum = hankel;
  coeffs.gTerms[0] = gSum / kSqrtPi;
  for (int k = 1; k <= order; ++k) {
    hankel *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (4.0 * k * gammaGs);
    gSum += hankel;
    coeffs.gTerms[k] = gSum / kSqrtPi;
  }
  return coeffs;
}

double pairwiseErrorExact(const PairGeometry& geom, const SnrPoint& snr) {
  requireSnr(snr);
  const double gs = snr.gammaS;
  if (geom.gamma < kOrthogonalGamma) return 0.5 * std::exp(-0.5 * gs);
  if (geom.gamma >= 1.0 - kOrthogonalGamma) return 0.5;

  const double sqrtGs = std::sqrt(gs);
  const double marcum =
      specfun::marcumQ1(sqrtGs * geom.rhoMinus, sqrtGs * geom.rhoPlus);
  const double bessel = 0.5 * std::exp(-0.5 * gs * (1.0 - geom.gamma)) *
                        specfun::besselI0Scaled(0.5 * gs * geom.gamma);
  return std::clamp(marcum - bessel, 0.0, 0.5);
}

double pairwiseErrorAsymptotic(const PairGeometry& geom, const SnrPoint& snr,
                               int order) {
  const AsymptoticCoeffs coeffs = AsymptoticCoeffs::build(geom, snr, order);
  // P ~ E * [f''_n erfcx(x) + e''_n - g_n/2] with E = exp(-x^2) and
  // x = sqrt(gs (1-gamma)/2): the common envelope is factored so the bracket
  // is formed from O(1) quantities.
  const double x = std::sqrt(0.5 * snr.gammaS * (1.0 - geom.gamma));
  const double envelope = std::exp(-x * x);
  return envelope * (coeffs.fCumulative[order] * specfun::erfcx(x) +
                     coeffs.eCumulative[order] - 0.5 * coeffs.gTerms[order]);
}

double pairwiseErrorSimple(const PairGeometry& geom, const SnrPoint& snr) {
  requireSnr(snr);
  const double gamma = geom.gamma;
  if (gamma < kOrthogonalGamma || gamma >= 1.0 - kOrthogonalGamma)
    throw std::domain_error("pairwiseErrorSimple: gamma must be inside (0, 1)");
  return 0.5 / kSqrtPi * std::sqrt((1.0 + gamma) / (1.0 - gamma)) /
         std::sqrt(gamma * snr.gammaS) *
         std::exp(-0.5 * snr.gammaS * (1.0 - gamma));
}

double pairwiseError(const PairGeometry& geom, const SnrPoint& snr,
                     EvalMethod method) {
  if (geom.gamma < kOrthogonalGamma) return 0.5 * std::exp(-0.5 * snr.gammaS);
  switch (method) {
    case EvalMethod::exact:
      return pairwiseErrorExact(geom, snr);
    case EvalMethod::autoSwitch:
      if (0.5 * geom.gamma * snr.gammaS <= kAutoSwitchThreshold)
        return pairwiseErrorExact(geom, snr);
      return pairwiseErrorAsymptotic(geom, snr, 1);
    case EvalMethod::asymptotic0:
      return pairwiseErrorAsymptotic(geom, snr, 0);
    case EvalMethod::asymptotic1:
      return pairwiseErrorAsymptotic(geom, snr, 1);
    case EvalMethod::simple:
      return pairwiseErrorSimple(geom, snr);
  }
  throw std::logic_error("pairwiseError: unknown method");
}

double unionBoundSymbolFromCoherences(const std::vector<double>& gammas, int m,
                                      const SnrPoint& snr, EvalMethod method) {
  if (m < 2) throw std::invalid_argument("unionBoundSymbol: need M >= 2");
  std::vector<double> terms(gammas.size());
  parallelFor(gammas.size(), [&](std::size_t idx) {
    terms[idx] = pairwiseError(pairGeometryFromGamma(gammas[idx]), snr, method);
  });
  const double total = treeSum(std::move(terms)) * 2.0 / m;
  return std::clamp(total, 0.0, 1.0);
}

double unionBoundSymbol(const Constellation& c, const SnrPoint& snr,
                        EvalMethod method) {
  return unionBoundSymbolFromCoherences(pairCoherences(c), c.m, snr, method);
}

double unionBoundBitFromCoherences(const std::vector<double>& gammas,
                                   const std::vector<int>& bits, int m, int k,
                                   const SnrPoint& snr, EvalMethod method) {
  if (bits.empty())
    throw std::invalid_argument("unionBoundBit: constellation has no bit labels");
  std::vector<double> terms(gammas.size());
  parallelFor(gammas.size(), [&](std::size_t idx) {
    terms[idx] = pairwiseError(pairGeometryFromGamma(gammas[idx]), snr, method);
  });
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      terms[pairIndex(m, i, j)] *=
          std::popcount(static_cast<unsigned>(bits[i] ^ bits[j]));
  const double total = treeSum(std::move(terms)) * 2.0 / (k * m);
  return std::clamp(total, 0.0, 1.0);
}

double unionBoundBit(const Constellation& c, const SnrPoint& snr,
                     EvalMethod method) {
  return unionBoundBitFromCoherences(pairCoherences(c), c.bits, c.m,
                                     c.bitsPerSymbol(), snr, method);
}

SnrPoint solveSnrAtTarget(const Constellation& c, double target,
                          ErrorRateKind kind) {
  if (!(target > 0.0 && target < 0.4))
    throw std::invalid_argument("solveSnrAtTarget: target must be in (0, 0.4)");
  const int k = isPowerOfTwo(c.m) ? c.bitsPerSymbol() : 1;
  const std::vector<double> gammas = pairCoherences(c);

  auto snrAt = [&](double db) {
    return kind == ErrorRateKind::bit ? SnrPoint::fromBitSnrDb(db, k)
                                      : SnrPoint::fromSymbolSnrDb(db, k);
  };
  auto boundAt = [&](double db) {
    const SnrPoint snr = snrAt(db);
    return kind == ErrorRateKind::bit
               ? unionBoundBitFromCoherences(gammas, c.bits, c.m, k, snr,
                                             EvalMethod::autoSwitch)
               : unionBoundSymbolFromCoherences(gammas, c.m, snr,
                                                EvalMethod::autoSwitch);
  };

  double lo = -10.0, hi = 60.0;
  if (boundAt(lo) < target || boundAt(hi) > target)
    throw std::runtime_error(
        "solveSnrAtTarget: target unreachable within [-10, 60] dB");
  while (hi - lo > 0.01) {
    const double mid = 0.5 * (lo + hi);
    (boundAt(mid) > target ? lo : hi) = mid;
  }
  return snrAt(0.5 * (lo + hi));
}

double spectralEfficiency(int n, int m) {
  return std::log2(static_cast<double>(m)) / n;
}

double spectralEfficiency(const Constellation& c) {
  return spectralEfficiency(c.n, c.m);
}

double welchRankinBound(int n, int m) {
  if (m <= n) return 0.0;
  return std::sqrt((m - n) / (static_cast<double>(n) * (m - 1)));
}

std::string curveKindName(CurveKind kind) {
  switch (kind) {
    case CurveKind::symbolUnionBound: return "symbolUnionBound";
    case CurveKind::bitUnionBound: return "bitUnionBound";
    case CurveKind::asymptotic0: return "asymptotic0";
    case CurveKind::asymptotic1: return "asymptotic1";
    case CurveKind::asymptoticSimple: return "asymptoticSimple";
    case CurveKind::monteCarlo: return "monteCarlo";
  }
  throw std::logic_error("curveKindName: unknown kind");
}

void BerCurve::append(double snrDb, double probability) {
  if (!points.empty() && snrDb <= points.back().first)
    throw std::invalid_argument("BerCurve: snrDb must be strictly increasing");
  points.emplace_back(snrDb, probability);
}

bool BerCurve::isNonIncreasing() const {
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].second > points[i - 1].second) return false;
  return true;
}

void writeCurveCsv(const std::vector<BerCurve>& curves, std::ostream& out) {
  out << "snr_db,value,kind\r\n";
  for (const auto& curve : curves)
    for (const auto& [db, value] : curve.points)
      out << formatDouble(db) << "," << formatDouble(value) << ","
          << curveKindName(curve.kind) << "\r\n";
}

void writeCurveCsvFile(const std::vector<BerCurve>& curves,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  writeCurveCsv(curves, out);
}

}  // namespace mvm
