// mvm: command-line front end for designing, optimizing, labeling,
// evaluating, and simulating equipower mode-vector constellations.
//
// Exit codes: 0 success, 2 usage/validation, 3 generator convergence,
// 4 optimizer divergence, 5 internal numerical fault.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mvm/channel.hpp"
#include "mvm/errprob.hpp"
#include "mvm/mapping.hpp"
#include "mvm/parallel.hpp"
#include "mvm/shaping.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

struct NumericalFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ManifestWriter {
 public:
  ManifestWriter(std::string command, int argc, char** argv)
      : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {
    for (int i = 0; i < argc; ++i) argv_.emplace_back(argv[i]);
  }
  void addInput(const std::string& path) { inputs_.push_back(path); }
  void addOutput(const std::string& path) { outputs_.push_back(path); }
  void setSeed(std::uint64_t seed) { seed_ = seed; }

  // One manifest per primary output file, enough to re-run the command.
  void write() const {
    if (outputs_.empty()) return;
    nlohmann::json j;
    j["tool"] = "mvm";
    j["version"] = kVersion;
    j["command"] = command_;
    j["argv"] = argv_;
    if (seed_) j["seed"] = *seed_;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    std::ofstream out(outputs_.front() + ".manifest.json");
    out << j.dump(2) << "\n";
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::optional<std::uint64_t> seed_;
  std::chrono::steady_clock::time_point start_;
};

void printSummary(const mvm::Constellation& c) {
  const auto gammas = mvm::pairCoherences(c);
  const double minGamma = *std::min_element(gammas.begin(), gammas.end());
  const double maxGamma = *std::max_element(gammas.begin(), gammas.end());
  const double welch = mvm::welchRankinBound(c.n, c.m);
  std::cout << "N=" << c.n << " M=" << c.m << " min_gamma=" << minGamma
            << " max_gamma=" << maxGamma << " welch_bound=" << welch
            << " welch_gap=" << maxGamma - welch << "\n";
}

// Cluster the sorted pair distances into classes (new class when the next
// distance exceeds 1.05x the class start); mirrors the closest-neighbor rule
// used by `inspect`.
void printEdgeClasses(const mvm::Constellation& c) {
  std::vector<double> d = mvm::pairDistances(c, mvm::PairMetric::stokes);
  std::sort(d.begin(), d.end());
  std::cout << "stokes distance classes:";
  std::size_t i = 0;
  int printed = 0;
  while (i < d.size() && printed < 4) {
    const double start = d[i];
    std::size_t j = i;
    double sum = 0.0;
    while (j < d.size() && d[j] <= 1.05 * start) sum += d[j++];
    std::cout << " " << (j - i) << "x" << sum / (j - i);
    i = j;
    ++printed;
  }
  if (i < d.size()) std::cout << " ...";
  std::cout << "\n";
}

int defaultBitsPerSymbol(const mvm::Constellation& c) {
  return mvm::isPowerOfTwo(c.m) ? c.bitsPerSymbol() : 1;
}

mvm::EvalMethod parseMethod(const std::string& name) {
  if (name == "exact") return mvm::EvalMethod::exact;
  if (name == "auto") return mvm::EvalMethod::autoSwitch;
  if (name == "asymp0") return mvm::EvalMethod::asymptotic0;
  if (name == "asymp1") return mvm::EvalMethod::asymptotic1;
  if (name == "simple") return mvm::EvalMethod::simple;
  throw CLI::ValidationError("--method", "unknown method " + name);
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
  std::string kind;
  int n = 0;
  int m = -1;
  std::uint64_t seed = 1;
  std::string out;
};

void runGen(const GenArgs& args, ManifestWriter& manifest) {
  mvm::Constellation c;
  if (args.kind == "hypercube") {
    c = mvm::standardHypercube(args.n);
    if (args.m >= 0 && args.m != c.m)
      throw std::invalid_argument("gen: hypercube for this n has M=" +
                                  std::to_string(c.m));
  } else if (args.kind == "sic") {
    if (args.m >= 0 && args.m != args.n * args.n)
      throw std::invalid_argument("gen: sic requires M = N^2");
    c = mvm::sicPovm(args.n, args.seed);
  } else if (args.kind == "orthogonal") {
    c = mvm::orthogonalSet(args.n, args.m >= 0 ? args.m : args.n);
  } else if (args.kind == "random") {
    if (args.m < 1) throw std::invalid_argument("gen: random requires --m");
    c = mvm::randomConstellation(args.n, args.m, args.seed);
  } else {
    throw std::invalid_argument("gen: unknown kind " + args.kind);
  }
  mvm::writeConstellationFile(c, args.out);
  manifest.addOutput(args.out);
  manifest.setSeed(args.seed);
  printSummary(c);
}

// --- shape -----------------------------------------------------------------

struct ShapeArgs {
  std::string in, out, traceOut, potential = "thomson";
  double snrDb = std::numeric_limits<double>::quiet_NaN();
  int iters = 20000;
  double gradTol = 1e-6;
  double step = 0.05;
  std::uint64_t seed = 1;
};

void runShape(const ShapeArgs& args, ManifestWriter& manifest) {
  manifest.addInput(args.in);
  const mvm::Constellation input = mvm::readConstellationFile(args.in);

  mvm::Potential potential = mvm::Potential::coulomb();
  if (args.potential == "union-bound") {
    if (std::isnan(args.snrDb))
      throw std::invalid_argument("shape: union-bound requires --snr-db");
    potential = mvm::Potential::unionBoundAt(mvm::SnrPoint::fromSymbolSnrDb(
        args.snrDb, defaultBitsPerSymbol(input)));
  } else if (args.potential != "thomson") {
    throw std::invalid_argument("shape: unknown potential " + args.potential);
  }

  mvm::DescentConfig cfg;
  cfg.maxIters = args.iters;
  cfg.gradTolerance = args.gradTol;
  cfg.initialStep = args.step;
  cfg.seed = args.seed;

  const double initial = mvm::potentialEnergy(input, potential);
  auto [result, trace] = mvm::optimize(input, potential, cfg);
  const double finalEnergy = mvm::potentialEnergy(result, potential);
  std::cout << "energy initial=" << initial << " final=" << finalEnergy
            << " accepted_steps=" << trace.steps.size() << "\n";
  printEdgeClasses(result);

  mvm::writeConstellationFile(result, args.out);
  manifest.addOutput(args.out);
  manifest.setSeed(args.seed);
  if (!args.traceOut.empty()) {
    std::ofstream out(args.traceOut, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + args.traceOut);
    out << "iter,energy,grad_norm,step\r\n";
    for (const auto& s : trace.steps)
      out << s.iter << "," << s.potential << "," << s.gradNorm << "," << s.stepUsed
          << "\r\n";
    manifest.addOutput(args.traceOut);
  }
}

// --- map -------------------------------------------------------------------

struct MapArgs {
  std::string in, out;
  double snrDb = 10.0;  // bit SNR per SDOF
  int restarts = 1;
  std::uint64_t seed = 1;
};

void runMap(const MapArgs& args, ManifestWriter& manifest) {
  manifest.addInput(args.in);
  mvm::Constellation c = mvm::readConstellationFile(args.in);
  if (!mvm::isPowerOfTwo(c.m))
    throw std::invalid_argument("map: M must be a power of two");
  const int k = c.bitsPerSymbol();
  const mvm::SnrPoint snr = mvm::SnrPoint::fromBitSnrDb(args.snrDb, k);

  const Eigen::MatrixXd pbin = mvm::pairErrorMatrix(c, snr);
  std::vector<int> before(c.m);
  if (c.hasBits()) {
    before = c.bits;
  } else {
    for (int i = 0; i < c.m; ++i) before[i] = i;
  }
  const double xiBefore = mvm::xiFromMatrix(pbin, before, k);

  mvm::AnnealSchedule sched = mvm::defaultAnnealSchedule(c, snr, args.seed);
  mvm::BitMapping result = mvm::annealMappingRestarts(c, snr, sched, args.restarts);
  const double xiAfter = mvm::xiFromMatrix(pbin, result.labels, k);
  std::cout << "xi before=" << xiBefore << " after=" << xiAfter << "\n";

  c.bits = (xiAfter <= xiBefore) ? result.labels : before;
  c.metadata["mapping_snr_db"] = std::to_string(args.snrDb);
  mvm::writeConstellationFile(c, args.out);
  manifest.addOutput(args.out);
  manifest.setSeed(args.seed);
}

// --- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string in, out, kind = "ser", method = "auto";
  double snrMin = 0.0, snrMax = 20.0, snrStep = 0.5;
};

void runEval(const EvalArgs& args, ManifestWriter& manifest) {
  manifest.addInput(args.in);
  const mvm::Constellation c = mvm::readConstellationFile(args.in);
  const bool bitKind = args.kind == "ber";
  if (!bitKind && args.kind != "ser")
    throw std::invalid_argument("eval: kind must be ser or ber");
  if (bitKind && !c.hasBits())
    throw std::invalid_argument("eval: ber requires bit labels");
  if (args.snrStep <= 0.0 || args.snrMax < args.snrMin)
    throw std::invalid_argument("eval: bad SNR range");

  const mvm::EvalMethod method = parseMethod(args.method);
  const int k = defaultBitsPerSymbol(c);
  const auto gammas = mvm::pairCoherences(c);

  mvm::CurveKind curveKind;
  switch (method) {
    case mvm::EvalMethod::exact:
    case mvm::EvalMethod::autoSwitch:
      curveKind = bitKind ? mvm::CurveKind::bitUnionBound
                          : mvm::CurveKind::symbolUnionBound;
      break;
    case mvm::EvalMethod::asymptotic0: curveKind = mvm::CurveKind::asymptotic0; break;
    case mvm::EvalMethod::asymptotic1: curveKind = mvm::CurveKind::asymptotic1; break;
    case mvm::EvalMethod::simple: curveKind = mvm::CurveKind::asymptoticSimple; break;
  }

  mvm::BerCurve curve{curveKind, {}};
  for (double db = args.snrMin; db <= args.snrMax + 1e-9; db += args.snrStep) {
    const mvm::SnrPoint snr = bitKind ? mvm::SnrPoint::fromBitSnrDb(db, k)
                                      : mvm::SnrPoint::fromSymbolSnrDb(db, k);
    const double value =
        bitKind ? mvm::unionBoundBitFromCoherences(gammas, c.bits, c.m, k, snr,
                                                   method)
                : mvm::unionBoundSymbolFromCoherences(gammas, c.m, snr, method);
    curve.append(db, value);
  }
  const bool boundKind = curveKind == mvm::CurveKind::symbolUnionBound ||
                         curveKind == mvm::CurveKind::bitUnionBound;
  if (boundKind && !curve.isNonIncreasing())
    throw NumericalFault("eval: union bound curve is not non-increasing");

  mvm::writeCurveCsvFile({curve}, args.out);
  manifest.addOutput(args.out);

  for (double target : {1e-4, 1e-9}) {
    try {
      const mvm::SnrPoint at = mvm::solveSnrAtTarget(
          c, target,
          bitKind ? mvm::ErrorRateKind::bit : mvm::ErrorRateKind::symbol);
      std::cout << "snr_at_" << target << "_db="
                << (bitKind ? at.bitSnrDb() : at.symbolSnrDb()) << "\n";
    } catch (const std::runtime_error&) {
      std::cout << "snr_at_" << target << "_db=unreachable\n";
    }
  }
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string in, out;
  double snrMin = 0.0, snrMax = 12.0, snrStep = 1.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 1;
  bool earlyStop = false;
};

void runSimulate(const SimulateArgs& args, ManifestWriter& manifest) {
  manifest.addInput(args.in);
  if (args.trials < 1) throw std::invalid_argument("simulate: trials must be >= 1");
  if (args.snrStep <= 0.0 || args.snrMax < args.snrMin)
    throw std::invalid_argument("simulate: bad SNR range");
  const mvm::Constellation c = mvm::readConstellationFile(args.in);
  const bool bitAxis = c.hasBits();
  const int k = defaultBitsPerSymbol(c);

  mvm::BerCurve curve{mvm::CurveKind::monteCarlo, {}};
  nlohmann::json results = nlohmann::json::array();
  for (double db = args.snrMin; db <= args.snrMax + 1e-9; db += args.snrStep) {
    mvm::ChannelConfig cfg;
    cfg.snr = bitAxis ? mvm::SnrPoint::fromBitSnrDb(db, k)
                      : mvm::SnrPoint::fromSymbolSnrDb(db, k);
    cfg.trials = args.trials;
    cfg.seed = mvm::substreamSeed(args.seed, static_cast<std::uint64_t>(
                                                 std::llround(db * 100.0)));
    cfg.earlyStop = args.earlyStop;
    const mvm::SimResult r = mvm::simulate(c, cfg);
    curve.append(db, bitAxis ? r.berEstimate : r.serEstimate);
    nlohmann::json entry = nlohmann::json::parse(r.toJson());
    entry["snr_db"] = db;
    results.push_back(entry);
  }
  mvm::writeCurveCsvFile({curve}, args.out);
  manifest.addOutput(args.out);
  manifest.setSeed(args.seed);
  const std::string resultsPath = args.out + ".results.json";
  std::ofstream out(resultsPath);
  out << results.dump(2) << "\n";
  manifest.addOutput(resultsPath);
}

// --- inspect -----------------------------------------------------------------

struct InspectArgs {
  std::string in;
  double bin = 0.05;
};

void runInspect(const InspectArgs& args) {
  const mvm::Constellation c = mvm::readConstellationFile(args.in);
  std::cout << "n=" << c.n << " m=" << c.m
            << " eta=" << mvm::spectralEfficiency(c) << "\n";
  printSummary(c);

  const mvm::DistanceHistogram hist =
      mvm::coherenceHistogram(c, mvm::PairMetric::stokes, args.bin);
  std::cout << "stokes distances: min=" << hist.minDistance
            << " mean=" << hist.meanDistance << " max=" << hist.maxDistance
            << "\n";
  std::cout << "histogram (bin " << hist.binWidth << "):";
  for (const auto& [edge, count] : hist.bins)
    std::cout << " [" << edge << ")=" << count;
  std::cout << "\n";

  // closest-neighbor graph: edges are pairs within 1.05x the minimum distance
  const std::vector<double> d = mvm::pairDistances(c, mvm::PairMetric::stokes);
  const double dmin = *std::min_element(d.begin(), d.end());
  std::vector<int> degree(c.m, 0);
  std::uint64_t edges = 0;
  std::size_t idx = 0;
  for (int i = 0; i < c.m; ++i)
    for (int j = i + 1; j < c.m; ++j, ++idx)
      if (d[idx] <= 1.05 * dmin) {
        ++edges;
        ++degree[i];
        ++degree[j];
      }
  double meanDegree = 0.0;
  std::map<int, int> degreeHist;
  for (int deg : degree) {
    meanDegree += deg;
    ++degreeHist[deg];
  }
  meanDegree /= c.m;
  std::cout << "nn_graph: min_distance=" << dmin << " edges=" << edges
            << " mean_degree=" << meanDegree << "\n";
  std::cout << "degree histogram:";
  for (const auto& [deg, count] : degreeHist)
    std::cout << " " << deg << ":" << count;
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equipower mode-vector-modulation constellation toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* genCmd = app.add_subcommand("gen", "generate a constellation");
  genCmd->add_option("--kind", gen.kind, "hypercube|sic|orthogonal|random")
      ->required();
  genCmd->add_option("--n", gen.n, "Jones dimension N")->required();
  genCmd->add_option("--m", gen.m, "constellation size M");
  genCmd->add_option("--seed", gen.seed, "random seed");
  genCmd->add_option("--out", gen.out, "output constellation JSON")->required();

  ShapeArgs shape;
  CLI::App* shapeCmd = app.add_subcommand("shape", "gradient-descent shaping");
  shapeCmd->add_option("--in", shape.in, "input constellation")->required();
  shapeCmd->add_option("--potential", shape.potential, "thomson|union-bound");
  shapeCmd->add_option("--snr-db", shape.snrDb,
                       "symbol SNR per SDOF (dB) for union-bound");
  shapeCmd->add_option("--iters", shape.iters, "max descent iterations");
  shapeCmd->add_option("--grad-tol", shape.gradTol, "projected gradient tolerance");
  shapeCmd->add_option("--step", shape.step, "initial step size");
  shapeCmd->add_option("--seed", shape.seed, "random seed");
  shapeCmd->add_option("--out", shape.out, "output constellation JSON")->required();
  shapeCmd->add_option("--trace", shape.traceOut, "descent trace CSV");

  MapArgs mapArgs;
  CLI::App* mapCmd = app.add_subcommand("map", "simulated-annealing bit mapping");
  mapCmd->add_option("--in", mapArgs.in, "input constellation")->required();
  mapCmd->add_option("--snr-db", mapArgs.snrDb, "training bit SNR per SDOF (dB)");
  mapCmd->add_option("--restarts", mapArgs.restarts, "independent restarts");
  mapCmd->add_option("--seed", mapArgs.seed, "random seed");
  mapCmd->add_option("--out", mapArgs.out, "output constellation JSON")->required();

  EvalArgs eval;
  CLI::App* evalCmd = app.add_subcommand("eval", "union-bound curves");
  evalCmd->add_option("--in", eval.in, "input constellation")->required();
  evalCmd->add_option("--kind", eval.kind, "ser|ber");
  evalCmd->add_option("--method", eval.method, "exact|auto|asymp0|asymp1|simple");
  evalCmd->add_option("--snr-min", eval.snrMin, "sweep start (dB)");
  evalCmd->add_option("--snr-max", eval.snrMax, "sweep end (dB)");
  evalCmd->add_option("--snr-step", eval.snrStep, "sweep step (dB)");
  evalCmd->add_option("--out", eval.out, "output curve CSV")->required();

  SimulateArgs sim;
  CLI::App* simCmd = app.add_subcommand("simulate", "Monte-Carlo link simulation");
  simCmd->add_option("--in", sim.in, "input constellation")->required();
  simCmd->add_option("--snr-min", sim.snrMin, "sweep start (dB)");
  simCmd->add_option("--snr-max", sim.snrMax, "sweep end (dB)");
  simCmd->add_option("--snr-step", sim.snrStep, "sweep step (dB)");
  simCmd->add_option("--trials", sim.trials, "trials per SNR point")->required();
  simCmd->add_option("--seed", sim.seed, "random seed");
  simCmd->add_flag("--early-stop", sim.earlyStop,
                   "stop at >=100 errors and >=1e6 trials");
  simCmd->add_option("--out", sim.out, "output curve CSV")->required();

  InspectArgs inspect;
  CLI::App* inspectCmd = app.add_subcommand("inspect", "constellation diagnostics");
  inspectCmd->add_option("--in", inspect.in, "input constellation")->required();
  inspectCmd->add_option("--bin", inspect.bin, "histogram bin width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (genCmd->parsed()) {
      ManifestWriter manifest("gen", argc, argv);
      runGen(gen, manifest);
      manifest.write();
    } else if (shapeCmd->parsed()) {
      ManifestWriter manifest("shape", argc, argv);
      runShape(shape, manifest);
      manifest.write();
    } else if (mapCmd->parsed()) {
      ManifestWriter manifest("map", argc, argv);
      runMap(mapArgs, manifest);
      manifest.write();
    } else if (evalCmd->parsed()) {
      ManifestWriter manifest("eval", argc, argv);
      runEval(eval, manifest);
      manifest.write();
    } else if (simCmd->parsed()) {
      ManifestWriter manifest("simulate", argc, argv);
      runSimulate(sim, manifest);
      manifest.write();
    } else if (inspectCmd->parsed()) {
      runInspect(inspect);
    }
  } catch (const mvm::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const mvm::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const NumericalFault& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
