#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "mvm/constellation.hpp"
#include "mvm/pair_geometry.hpp"

namespace mvm {

double dbToLinear(double db);
double linearToDb(double value);

// Symbol SNR per spatial degree of freedom (linear), bit SNR, and the bits
// per symbol that tie them together: gammaS = k * gammaB. The per-quadrature
// noise variance is sigma^2 = 1/(2 gammaS).
struct SnrPoint {
  double gammaS;
  double gammaB;
  int bitsPerSymbol;

  double sigma2() const { return 0.5 / gammaS; }
  double symbolSnrDb() const { return linearToDb(gammaS); }
  double bitSnrDb() const { return linearToDb(gammaB); }

  static SnrPoint fromSymbolSnr(double gammaS, int k = 1);
  static SnrPoint fromSymbolSnrDb(double db, int k = 1);
  static SnrPoint fromBitSnrDb(double db, int k);
};

// Coefficients of the uniform large-SNR expansion of the pairwise error
// probability: the e_n / f_n recursions, the lambda_n multipliers built from
// the A_{n,m} constants, their cumulative sums, and the Hankel partial sums
// g_n for the Bessel term. Built by recursion so higher orders come for free;
// the closed forms for n <= 1 are pinned in tests.
struct AsymptoticCoeffs {
  int order;
  std::vector<double> eTerms;       // e_0 .. e_n
  std::vector<double> fTerms;       // f_0 .. f_n
  std::vector<double> lambdas;      // lambda_0 .. lambda_n
  std::vector<double> eCumulative;  // e''_0 .. e''_n
  std::vector<double> fCumulative;  // f''_0 .. f''_n
  std::vector<std::array<double, 2>> aCoeffs;  // {A_{n,0}, A_{n,1}}
  std::vector<double> gTerms;       // g_0 .. g_n

  static AsymptoticCoeffs build(const PairGeometry& geom, const SnrPoint& snr,
                                int order);
};

// A_{n,m} = 1/(n! 2^n) * prod_{i=-n}^{n-1} (m + i + 1/2).
double asymptoticACoefficient(int n, int m);

// Exact pairwise error probability between two equiprobable unit vectors:
// Q1(sqrt(gs) rho-, sqrt(gs) rho+) - 1/2 e^{-gs/2} I0(gamma gs / 2), with the
// Bessel term evaluated in scaled form. Returns 1/2 exp(-gs/2) for gamma = 0
// and exactly 1/2 for gamma = 1. Result in [0, 1/2].
double pairwiseErrorExact(const PairGeometry& geom, const SnrPoint& snr);

// Uniform asymptotic approximation of given order (0 or 1 are the documented
// orders; any n >= 0 evaluates). Meaningful when gamma*gammaS/2 is large.
// Throws std::domain_error at gamma = 0 where the expansion is invalid.
double pairwiseErrorAsymptotic(const PairGeometry& geom, const SnrPoint& snr,
                               int order);

// Simple asymptote (1/(2 sqrt(pi))) sqrt((1+gamma)/(1-gamma))
// (gamma gammaS)^{-1/2} exp(-gammaS (1-gamma)/2); valid away from gamma = 0, 1.
double pairwiseErrorSimple(const PairGeometry& geom, const SnrPoint& snr);

// Per-pair evaluation strategies for the union bounds and curve sweeps.
// autoSwitch uses the exact formula for gamma*gammaS/2 <= 50 and the order-1
// asymptotic above (continuity across the boundary is a tested property).
enum class EvalMethod { exact, autoSwitch, asymptotic0, asymptotic1, simple };

double pairwiseError(const PairGeometry& geom, const SnrPoint& snr,
                     EvalMethod method);

// (1/M) sum_m sum_{m' != m} P_bin, clipped to [0, 1]. Pair terms are filled
// in parallel and reduced with a fixed-order tree sum.
double unionBoundSymbol(const Constellation& c, const SnrPoint& snr,
                        EvalMethod method = EvalMethod::autoSwitch);

// (1/(kM)) sum_m sum_{m' != m} P_bin h_{mm'}, Hamming-weighted by the bit
// labels; clipped to [0, 1]. Requires labels.
double unionBoundBit(const Constellation& c, const SnrPoint& snr,
                     EvalMethod method = EvalMethod::autoSwitch);

// Overloads on a precomputed coherence list (layout of pairCoherences).
double unionBoundSymbolFromCoherences(const std::vector<double>& gammas, int m,
                                      const SnrPoint& snr, EvalMethod method);
double unionBoundBitFromCoherences(const std::vector<double>& gammas,
                                   const std::vector<int>& bits, int m, int k,
                                   const SnrPoint& snr, EvalMethod method);

enum class ErrorRateKind { symbol, bit };

// Bisects the union bound (autoSwitch) over [-10, 60] dB to 0.01 dB. The dB
// axis is symbol SNR for symbol kind and bit SNR for bit kind. Throws
// std::runtime_error when the target is unreachable inside the bracket.
SnrPoint solveSnrAtTarget(const Constellation& c, double target,
                          ErrorRateKind kind);

// eta = log2(M) / N (real-valued k for non power-of-two M).
double spectralEfficiency(int n, int m);
double spectralEfficiency(const Constellation& c);

// sqrt((M-N)/(N(M-1))) for M > N, else 0 (orthogonal sets exist).
double welchRankinBound(int n, int m);

// Sampled (SNR dB, probability) series.
enum class CurveKind {
  symbolUnionBound,
  bitUnionBound,
  asymptotic0,
  asymptotic1,
  asymptoticSimple,
  monteCarlo
};

std::string curveKindName(CurveKind kind);

struct BerCurve {
  CurveKind kind;
  std::vector<std::pair<double, double>> points;  // (snrDb, probability)

  // Appends a point; snrDb must be strictly increasing.
  void append(double snrDb, double probability);
  // True when probabilities never increase with SNR (required of bound kinds).
  bool isNonIncreasing() const;
};

// CSV with header `snr_db,value,kind`, one row per point, CRLF line endings,
// 17-significant-digit decimals.
void writeCurveCsv(const std::vector<BerCurve>& curves, std::ostream& out);
void writeCurveCsvFile(const std::vector<BerCurve>& curves,
                       const std::string& path);

}  // namespace mvm
