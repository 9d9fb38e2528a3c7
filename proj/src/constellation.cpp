#include "mvm/constellation.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace mvm {

namespace {

std::string formatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

}  // namespace

bool isPowerOfTwo(int m) { return m > 0 && (m & (m - 1)) == 0; }

int Constellation::bitsPerSymbol() const {
  if (!isPowerOfTwo(m))
    throw std::invalid_argument("Constellation: M must be a power of two for bit labels");
  int k = 0;
  while ((1 << k) < m) ++k;
  return k;
}

void Constellation::validate() const {
  if (n < 2) throw std::invalid_argument("Constellation: N must be >= 2");
  if (m != static_cast<int>(vectors.size()))
    throw std::invalid_argument("Constellation: M does not match vector count");
  for (const auto& v : vectors)
    if (v.dim() != n)
      throw std::invalid_argument("Constellation: mixed vector dimensions");
  if (!bits.empty()) {
    if (!isPowerOfTwo(m))
      throw std::invalid_argument("Constellation: bit labels require M a power of two");
    if (static_cast<int>(bits.size()) != m)
      throw std::invalid_argument("Constellation: bit label count does not match M");
    std::vector<bool> seen(m, false);
    for (int b : bits) {
      if (b < 0 || b >= m || seen[b])
        throw std::invalid_argument("Constellation: bits must be a permutation of 0..M-1");
      seen[b] = true;
    }
  }
}

Constellation Constellation::canonicalized() const {
  Constellation out = *this;
  for (auto& v : out.vectors) v = v.canonicalized();
  return out;
}

std::size_t pairIndex(int m, int i, int j) {
  return static_cast<std::size_t>(i) * m - static_cast<std::size_t>(i) * (i + 1) / 2 +
         (j - i - 1);
}

std::vector<double> pairCoherences(const Constellation& c) {
  std::vector<double> gammas(static_cast<std::size_t>(c.m) * (c.m - 1) / 2);
  for (int i = 0; i < c.m; ++i)
    for (int j = i + 1; j < c.m; ++j)
      gammas[pairIndex(c.m, i, j)] =
          std::abs(innerProduct(c.vectors[i], c.vectors[j]));
  return gammas;
}

void writeConstellationJson(const Constellation& c, std::ostream& out) {
  c.validate();
  out << "{\n";
  out << "  \"n\": " << c.n << ",\n";
  out << "  \"m\": " << c.m << ",\n";
  out << "  \"vectors\": [\n";
  for (int i = 0; i < c.m; ++i) {
    out << "    [";
    for (int j = 0; j < c.n; ++j) {
      const Complex e = c.vectors[i][j];
      out << "[" << formatDouble(e.real()) << ", " << formatDouble(e.imag()) << "]";
      if (j + 1 < c.n) out << ", ";
    }
    out << "]" << (i + 1 < c.m ? "," : "") << "\n";
  }
  out << "  ]";
  if (c.hasBits()) {
    out << ",\n  \"bits\": [";
    for (int i = 0; i < c.m; ++i)
      out << c.bits[i] << (i + 1 < c.m ? ", " : "");
    out << "]";
  }
  out << ",\n  \"metadata\": {";
  std::size_t k = 0;
  for (const auto& [key, value] : c.metadata) {
    out << (k++ ? ", " : "") << nlohmann::json(key).dump() << ": "
        << nlohmann::json(value).dump();
  }
  out << "}\n}\n";
}

void writeConstellationFile(const Constellation& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  writeConstellationJson(c, out);
}

Constellation readConstellationJson(std::istream& in) {
  nlohmann::json j;
  in >> j;
  Constellation c;
  c.n = j.at("n").get<int>();
  c.m = j.at("m").get<int>();
  const auto& rows = j.at("vectors");
  if (static_cast<int>(rows.size()) != c.m)
    throw std::invalid_argument("constellation file: vector count != m");
  c.vectors.reserve(c.m);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c.n)
      throw std::invalid_argument("constellation file: vector length != n");
    Eigen::VectorXcd v(c.n);
    for (int k = 0; k < c.n; ++k)
      v(k) = Complex(row[k][0].get<double>(), row[k][1].get<double>());
    c.vectors.emplace_back(v);
  }
  if (j.contains("bits")) c.bits = j["bits"].get<std::vector<int>>();
  if (j.contains("metadata"))
    c.metadata = j["metadata"].get<std::map<std::string, std::string>>();
  c.validate();
  return c;
}

Constellation readConstellationFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return readConstellationJson(in);
}

}  // namespace mvm
