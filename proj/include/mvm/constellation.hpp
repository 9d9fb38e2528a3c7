#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mvm/jones.hpp"

namespace mvm {

// Ordered set of M unit Jones vectors sharing dimension N, the artifact every
// module exchanges. Optional bit labels (a permutation of 0..M-1, M a power
// of two) and free-form metadata travel with it.
struct Constellation {
  int n = 0;
  int m = 0;
  std::vector<JonesVector> vectors;
  std::vector<int> bits;  // empty when unlabeled
  std::map<std::string, std::string> metadata;

  bool hasBits() const { return !bits.empty(); }
  int bitsPerSymbol() const;  // log2(m); requires m a power of two
  void validate() const;      // throws std::invalid_argument on violation

  Constellation canonicalized() const;  // per-vector phase gauge fixed
};

bool isPowerOfTwo(int m);

// gamma = |<s_i|s_j>| for i < j, row-major upper triangle:
// index(i,j) = i*m - i*(i+1)/2 + (j-i-1).
std::vector<double> pairCoherences(const Constellation& c);
std::size_t pairIndex(int m, int i, int j);

// Constellation JSON interchange format:
//   { "n": int, "m": int,
//     "vectors": [ [[re, im] x N] x M ],
//     "bits": [int x M]            (omitted when unlabeled)
//     "metadata": { string: string } }
// Doubles are written in scientific notation with 17 significant digits, so
// files round-trip bit-exactly and identical inputs serialize byte-identically.
void writeConstellationJson(const Constellation& c, std::ostream& out);
void writeConstellationFile(const Constellation& c, const std::string& path);
Constellation readConstellationJson(std::istream& in);
Constellation readConstellationFile(const std::string& path);

}  // namespace mvm
