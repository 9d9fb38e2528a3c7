#include "mvm/shaping.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>

#include "mvm/pair_geometry.hpp"
#include "mvm/parallel.hpp"
#include "mvm/stokes.hpp"

namespace mvm {

namespace {

constexpr double kStepGrow = 1.1;
constexpr double kStepUnderflow = 1e-15;
constexpr double kCoincidentDistance = 1e-9;

Eigen::MatrixXcd matrixFromConstellation(const Constellation& c) {
  Eigen::MatrixXcd s(c.m, c.n);
  for (int i = 0; i < c.m; ++i) s.row(i) = c.vectors[i].entries().transpose();
  return s;
}

Constellation constellationFromMatrix(const Eigen::MatrixXcd& s,
                                      const Constellation& base) {
  Constellation c;
  c.n = static_cast<int>(s.cols());
  c.m = static_cast<int>(s.rows());
  c.bits = base.bits;
  c.metadata = base.metadata;
  c.vectors.reserve(c.m);
  for (int i = 0; i < c.m; ++i)
    c.vectors.push_back(
        JonesVector::normalized(s.row(i).transpose()).canonicalized());
  return c;
}

// G(j, i) = <s_j|s_i>.
Eigen::MatrixXcd gramMatrix(const Eigen::MatrixXcd& s) {
  return s.conjugate() * s.transpose();
}

void normalizeRows(Eigen::MatrixXcd& s) {
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const double norm = s.row(i).norm();
    if (norm > 1e-300) s.row(i) /= norm;
  }
}

Eigen::MatrixXcd randomRows(int m, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd s(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = Complex(gauss(rng), gauss(rng));
  normalizeRows(s);
  return s;
}

double coulombEnergy(const Eigen::MatrixXcd& s) {
  const int m = static_cast<int>(s.rows());
  const int n = static_cast<int>(s.cols());
  const Eigen::MatrixXcd gram = gramMatrix(s);
  double energy = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double gamma = std::min(1.0, std::abs(gram(i, j)));
      const double d = distStokesFromGamma(n, gamma);
      if (d < kCoincidentDistance)
        throw std::invalid_argument(
            "potentialEnergy: coincident symbols under the Coulomb potential");
      energy += 1.0 / d;
    }
  return energy;
}

Eigen::MatrixXcd coulombGradient(const Eigen::MatrixXcd& s) {
  const int m = static_cast<int>(s.rows());
  const int n = static_cast<int>(s.cols());
  const double cn = stokesNormalization(n);
  const Eigen::MatrixXcd gram = gramMatrix(s);
  Eigen::MatrixXcd coef = Eigen::MatrixXcd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const double gamma = std::min(1.0, std::abs(gram(i, j)));
      const double d = distStokesFromGamma(n, gamma);
      if (d < kCoincidentDistance)
        throw std::invalid_argument(
            "potentialGradient: coincident symbols under the Coulomb potential");
      coef(i, j) = 4.0 * cn * cn / (d * d * d) * gram(j, i);
    }
  return coef * s;
}

// Union-bound objective without the probability clip: descent needs strict
// decreases even where the bound saturates at 1.
double unionObjective(const Eigen::MatrixXcd& s, const SnrPoint& snr) {
  const int m = static_cast<int>(s.rows());
  const Eigen::MatrixXcd gram = gramMatrix(s);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      terms.push_back(std::min(1.0, std::abs(gram(i, j))));
  std::vector<double> values(terms.size());
  parallelFor(terms.size(), [&](std::size_t idx) {
    values[idx] = pairwiseError(pairGeometryFromGamma(terms[idx]), snr,
                                EvalMethod::autoSwitch);
  });
  return treeSum(std::move(values)) * 2.0 / m;
}

Eigen::MatrixXcd unionGradient(const Eigen::MatrixXcd& s, const SnrPoint& snr) {
  const int m = static_cast<int>(s.rows());
  const Eigen::MatrixXcd gram = gramMatrix(s);

  // dP/dgamma by central differences, one pair term at a time.
  Eigen::MatrixXd slope = Eigen::MatrixXd::Zero(m, m);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  std::vector<double> slopes(pairs.size());
  parallelFor(pairs.size(), [&](std::size_t idx) {
    const auto [i, j] = pairs[idx];
    const double gamma = std::min(1.0, std::abs(gram(i, j)));
    if (gamma < 1e-9) {
      slopes[idx] = 0.0;  // orthogonal pair: boundary stationary point
      return;
    }
    const double h = 1e-5;
    const double hi = std::min(gamma + h, 1.0 - 1e-9);
    const double lo = std::max(gamma - h, 1e-9);
    const double pHi = pairwiseError(pairGeometryFromGamma(hi), snr,
                                     EvalMethod::autoSwitch);
    const double pLo = pairwiseError(pairGeometryFromGamma(lo), snr,
                                     EvalMethod::autoSwitch);
    slopes[idx] = (pHi - pLo) / (hi - lo);
  });
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto [i, j] = pairs[idx];
    slope(i, j) = slope(j, i) = slopes[idx];
  }

  Eigen::MatrixXcd coef = Eigen::MatrixXcd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const double gamma = std::min(1.0, std::abs(gram(i, j)));
      if (gamma < 1e-9) continue;
      coef(i, j) = (2.0 / m) * slope(i, j) / gamma * gram(j, i);
    }
  return coef * s;
}

double objectiveValue(const Eigen::MatrixXcd& s, const Potential& p) {
  return p.kind == Potential::Kind::coulombStokes ? coulombEnergy(s)
                                                  : unionObjective(s, p.snr);
}

Eigen::MatrixXcd objectiveGradient(const Eigen::MatrixXcd& s,
                                   const Potential& p) {
  return p.kind == Potential::Kind::coulombStokes ? coulombGradient(s)
                                                  : unionGradient(s, p.snr);
}

// Norm of the gradient with the radial (norm-changing) component removed.
double projectedGradNorm(const Eigen::MatrixXcd& s,
                         const Eigen::MatrixXcd& grad) {
  double sq = 0.0;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const double radial = std::real(s.row(i).dot(grad.row(i)));
    sq += (grad.row(i) - radial * s.row(i)).squaredNorm();
  }
  return std::sqrt(sq);
}

}  // namespace

double potentialEnergy(const Constellation& c, const Potential& p) {
  c.validate();
  if (c.m < 2) throw std::invalid_argument("potentialEnergy: need M >= 2");
  const Eigen::MatrixXcd s = matrixFromConstellation(c);
  if (p.kind == Potential::Kind::coulombStokes) return coulombEnergy(s);
  return unionBoundSymbol(c, p.snr, EvalMethod::autoSwitch);
}

Eigen::MatrixXcd potentialGradient(const Constellation& c, const Potential& p) {
  c.validate();
  if (c.m < 2) throw std::invalid_argument("potentialGradient: need M >= 2");
  return objectiveGradient(matrixFromConstellation(c), p);
}

std::pair<Constellation, DescentTrace> optimize(const Constellation& c0,
                                                const Potential& p,
                                                const DescentConfig& cfg) {
  c0.validate();
  if (cfg.stepShrink <= 0.0 || cfg.stepShrink >= 1.0)
    throw std::invalid_argument("DescentConfig: stepShrink must be in (0, 1)");
  if (cfg.gradTolerance <= 0.0)
    throw std::invalid_argument("DescentConfig: gradTolerance must be positive");

  Eigen::MatrixXcd s = matrixFromConstellation(c0);
  double energy = objectiveValue(s, p);
  Eigen::MatrixXcd grad = objectiveGradient(s, p);
  double gradNorm = projectedGradNorm(s, grad);

  DescentTrace trace;
  if (gradNorm <= cfg.gradTolerance) return {c0, trace};

  double step = cfg.initialStep;
  for (int iter = 1; iter <= cfg.maxIters; ++iter) {
    Eigen::MatrixXcd trial = s - step * grad;
    normalizeRows(trial);
    const double trialEnergy = objectiveValue(trial, p);
    if (trialEnergy < energy) {
      s = std::move(trial);
      energy = trialEnergy;
      grad = objectiveGradient(s, p);
      gradNorm = projectedGradNorm(s, grad);
      trace.steps.push_back({iter, energy, gradNorm, step});
      step *= kStepGrow;
      if (gradNorm <= cfg.gradTolerance) break;
    } else {
      step *= cfg.stepShrink;
      if (step < kStepUnderflow)
        throw DivergenceError("optimize: step size underflow");
    }
  }
  return {constellationFromMatrix(s, c0), trace};
}

Constellation standardHypercube(int n) {
  if (n < 2) throw std::invalid_argument("standardHypercube: n must be >= 2");
  const double mReal = std::pow(4.0, n - 1);
  if (mReal > 4096.0)
    throw std::invalid_argument("standardHypercube: M = 4^(n-1) capped at 4096");
  const int m = static_cast<int>(mReal);

  static const Complex kDigits[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Constellation c;
  c.n = n;
  c.m = m;
  c.metadata["generator"] = "hypercube";
  c.vectors.reserve(m);
  for (int idx = 0; idx < m; ++idx) {
    Eigen::VectorXcd v(n);
    v(0) = scale;
    for (int j = 1; j < n; ++j)
      v(j) = kDigits[(idx >> (2 * (j - 1))) & 3] * scale;
    c.vectors.emplace_back(JonesVector::normalized(v));
  }
  return c;
}

Constellation orthogonalSet(int n, int m) {
  if (n < 2) throw std::invalid_argument("orthogonalSet: n must be >= 2");
  if (m < 1 || m > n)
    throw std::invalid_argument("orthogonalSet: need 1 <= m <= n");
  Constellation c;
  c.n = n;
  c.m = m;
  c.metadata["generator"] = "orthogonal";
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    v(i) = 1.0;
    c.vectors.emplace_back(v);
  }
  return c;
}

Constellation randomConstellation(int n, int m, std::uint64_t seed) {
  if (n < 2 || m < 1) throw std::invalid_argument("randomConstellation: bad n/m");
  Eigen::MatrixXcd s = randomRows(m, n, substreamSeed(seed, 0));
  Constellation base;
  base.metadata["generator"] = "random";
  base.metadata["seed"] = std::to_string(seed);
  return constellationFromMatrix(s, base);
}

namespace {

double maxCoherenceDeviation(const Eigen::MatrixXcd& gram, double target) {
  double dev = 0.0;
  for (Eigen::Index i = 0; i < gram.rows(); ++i)
    for (Eigen::Index j = i + 1; j < gram.cols(); ++j)
      dev = std::max(dev, std::abs(std::norm(gram(i, j)) - target));
  return dev;
}

// Limited-memory BFGS with Armijo backtracking; enough optimizer for the
// low-dimensional fiducial search below.
Eigen::VectorXd lbfgsMinimize(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& fg,
    Eigen::VectorXd x, int maxIters) {
  const int memory = 10;
  std::vector<Eigen::VectorXd> sHist, yHist;
  std::vector<double> rhoHist;

  Eigen::VectorXd grad(x.size()), gradNew(x.size());
  double f = fg(x, grad);
  for (int iter = 0; iter < maxIters; ++iter) {
    if (grad.norm() < 1e-13) break;

    // two-loop recursion
    Eigen::VectorXd q = grad;
    const int k = static_cast<int>(sHist.size());
    std::vector<double> alpha(k);
    for (int i = k - 1; i >= 0; --i) {
      alpha[i] = rhoHist[i] * sHist[i].dot(q);
      q -= alpha[i] * yHist[i];
    }
    if (k > 0)
      q *= sHist.back().dot(yHist.back()) / yHist.back().squaredNorm();
    else
      q *= 1.0 / std::max(1.0, grad.norm());
    for (int i = 0; i < k; ++i) {
      const double beta = rhoHist[i] * yHist[i].dot(q);
      q += (alpha[i] - beta) * sHist[i];
    }
    Eigen::VectorXd direction = -q;
    double slope = grad.dot(direction);
    if (slope >= 0.0) {  // safeguard: fall back to steepest descent
      direction = -grad;
      slope = -grad.squaredNorm();
    }

    double step = 1.0;
    double fNew = f;
    Eigen::VectorXd xNew;
    bool accepted = false;
    for (int ls = 0; ls < 50; ++ls) {
      xNew = x + step * direction;
      fNew = fg(xNew, gradNew);
      if (fNew <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    const Eigen::VectorXd sVec = xNew - x;
    const Eigen::VectorXd yVec = gradNew - grad;
    const double sy = sVec.dot(yVec);
    if (sy > 1e-12 * sVec.norm() * yVec.norm()) {
      sHist.push_back(sVec);
      yHist.push_back(yVec);
      rhoHist.push_back(1.0 / sy);
      if (static_cast<int>(sHist.size()) > memory) {
        sHist.erase(sHist.begin());
        yHist.erase(yHist.begin());
        rhoHist.erase(rhoHist.begin());
      }
    }
    x = std::move(xNew);
    grad = gradNew;
    if (std::abs(f - fNew) <= 1e-18 * std::max(1.0, std::abs(f))) {
      f = fNew;
      break;
    }
    f = fNew;
  }
  return x;
}

// Weyl-Heisenberg displacement orbit machinery. The orbit of any unit
// fiducial under X^a Z^b is a unit-norm tight frame, and every pair
// coherence of the orbit is one of the d^2 - 1 fiducial coherences
// |<phi|X^a Z^b phi>|, so the search space shrinks to one vector.
Eigen::VectorXcd displaced(const Eigen::VectorXcd& phi, int a, int b) {
  const int d = static_cast<int>(phi.size());
  Eigen::VectorXcd out(d);
  for (int k = 0; k < d; ++k) {
    const int src = ((k - a) % d + d) % d;
    const double angle = 2.0 * M_PI * ((static_cast<long long>(b) * src) % d) / d;
    out(k) = std::polar(1.0, angle) * phi(src);
  }
  return out;
}

// Squared deviation of the fiducial coherences from the target, with its
// gradient in the raw (unnormalized) real parametrization.
double fiducialObjective(const Eigen::VectorXd& z, Eigen::VectorXd& grad,
                         int d, double target) {
  Eigen::VectorXcd x(d);
  for (int k = 0; k < d; ++k) x(k) = Complex(z(k), z(k + d));
  const double norm = x.norm();
  const Eigen::VectorXcd phi = x / norm;

  double f = 0.0;
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      if (a == 0 && b == 0) continue;
      const Eigen::VectorXcd dPhi = displaced(phi, a, b);
      const Complex h = phi.dot(dPhi);
      const double dev = std::norm(h) - target;
      f += dev * dev;
      // adjoint displacement: (D^dag psi)[k] = omega^{-bk} psi[(k+a) mod d]
      Eigen::VectorXcd dDag(d);
      for (int k = 0; k < d; ++k) {
        const double angle =
            -2.0 * M_PI * ((static_cast<long long>(b) * k) % d) / d;
        dDag(k) = std::polar(1.0, angle) * phi((k + a) % d);
      }
      g += 2.0 * dev * (std::conj(h) * dPhi + h * dDag);
    }
  g *= 2.0;  // real-view gradient from the Wirtinger derivative

  // chain through the normalization: remove the radial part, scale by 1/norm
  const double radial = std::real(phi.dot(g));
  const Eigen::VectorXcd gx = (g - radial * phi) / norm;
  grad.resize(2 * d);
  for (int k = 0; k < d; ++k) {
    grad(k) = gx(k).real();
    grad(k + d) = gx(k).imag();
  }
  return f;
}

}  // namespace

Constellation sicPovm(int n, std::uint64_t seed) {
  if (n < 2 || n > 16)
    throw std::invalid_argument("sicPovm: n must be in [2, 16]");
  const int m = n * n;
  const double target = 1.0 / (n + 1);
  const int retries = n >= 12 ? 40 : 12;

  double bestResidual = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < retries; ++attempt) {
    std::mt19937_64 rng(substreamSeed(seed, attempt));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd z(2 * n);
    for (int k = 0; k < 2 * n; ++k) z(k) = gauss(rng);

    z = lbfgsMinimize(
        [&](const Eigen::VectorXd& v, Eigen::VectorXd& grad) {
          return fiducialObjective(v, grad, n, target);
        },
        std::move(z), 3000);

    Eigen::VectorXcd phi(n);
    for (int k = 0; k < n; ++k) phi(k) = Complex(z(k), z(k + n));
    phi /= phi.norm();

    Eigen::MatrixXcd s(m, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        s.row(a * n + b) = displaced(phi, a, b).transpose();
    const double dev = maxCoherenceDeviation(gramMatrix(s), target);
    bestResidual = std::min(bestResidual, dev);
    if (dev <= 1e-7) {
      char residual[32];
      std::snprintf(residual, sizeof(residual), "%.3e", dev);
      Constellation base;
      base.metadata["generator"] = "sic";
      base.metadata["seed"] = std::to_string(seed);
      base.metadata["attempt"] = std::to_string(attempt);
      base.metadata["coherence_residual"] = residual;
      return constellationFromMatrix(s, base);
    }
  }
  throw ConvergenceError("sicPovm: no convergence after retries, best residual " +
                         std::to_string(bestResidual));
}

std::vector<double> pairDistances(const Constellation& c, PairMetric metric) {
  const std::vector<double> gammas = pairCoherences(c);
  std::vector<double> distances(gammas.size());
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const double gamma = std::min(1.0, gammas[i]);
    distances[i] = metric == PairMetric::dd
                       ? std::sqrt(2.0) * std::sqrt(std::max(0.0, 1.0 - gamma))
                       : distStokesFromGamma(c.n, gamma);
  }
  return distances;
}

DistanceHistogram coherenceHistogram(const Constellation& c, PairMetric metric,
                                     double binWidth) {
  if (c.m < 2) throw std::invalid_argument("coherenceHistogram: need M >= 2");
  if (binWidth <= 0.0)
    throw std::invalid_argument("coherenceHistogram: bin width must be positive");
  const std::vector<double> distances = pairDistances(c, metric);

  DistanceHistogram h;
  h.binWidth = binWidth;
  h.minDistance = *std::min_element(distances.begin(), distances.end());
  h.maxDistance = *std::max_element(distances.begin(), distances.end());
  h.meanDistance = 0.0;
  std::map<long, std::uint64_t> bins;
  for (double d : distances) {
    h.meanDistance += d;
    ++bins[static_cast<long>(std::floor(d / binWidth + 1e-12))];
  }
  h.meanDistance /= static_cast<double>(distances.size());
  h.bins.reserve(bins.size());
  for (const auto& [index, count] : bins)
    h.bins.emplace_back(index * binWidth, count);
  return h;
}

}  // namespace mvm
