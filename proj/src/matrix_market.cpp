#include "hsolve/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "hsolve/error.hpp"

namespace hsolve {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

void write_matrix_market(std::ostream& out, const SparseMatrix& a,
                         MatrixMarketSymmetry symmetry) {
  const bool sym = symmetry == MatrixMarketSymmetry::symmetric;
  const auto old_precision = out.precision(17);
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j : a.row_cols(i))
      if (!sym || j <= i) ++count;

  out << "%%MatrixMarket matrix coordinate real " << (sym ? "symmetric" : "general")
      << '\n'
      << a.rows() << ' ' << a.cols() << ' ' << count << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      if (sym && cols[p] > i) continue;
      out << i + 1 << ' ' << cols[p] + 1 << ' ' << vals[p] << '\n';
    }
  }
  out.precision(old_precision);
  if (!out) throw Error("write_matrix_market: stream error");
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a,
                         MatrixMarketSymmetry symmetry) {
  auto out = open_out(path);
  write_matrix_market(out, a, symmetry);
}

void write_matrix_market_vector(std::ostream& out, std::span<const double> v) {
  const auto old_precision = out.precision(17);
  out << "%%MatrixMarket matrix array real general\n" << v.size() << " 1\n";
  for (double x : v) out << x << '\n';
  out.precision(old_precision);
  if (!out) throw Error("write_matrix_market_vector: stream error");
}

void write_matrix_market_vector(const std::filesystem::path& path,
                                std::span<const double> v) {
  auto out = open_out(path);
  write_matrix_market_vector(out, v);
}

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("read_matrix_market: empty input");
  std::istringstream banner(lower(line));
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%matrixmarket" || object != "matrix" || format != "coordinate" ||
      field != "real" || (symmetry != "general" && symmetry != "symmetric")) {
    throw Error("read_matrix_market: unsupported header: " + line);
  }
  const bool sym = symmetry == "symmetric";

  while (std::getline(in, line) && (line.empty() || line[0] == '%')) {
  }
  std::size_t rows = 0, cols = 0, count = 0;
  if (!(std::istringstream(line) >> rows >> cols >> count)) {
    throw Error("read_matrix_market: malformed size line");
  }
  std::vector<Triplet> triplets;
  triplets.reserve(sym ? 2 * count : count);
  for (std::size_t e = 0; e < count; ++e) {
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v) || i == 0 || j == 0 || i > rows || j > cols) {
      throw Error("read_matrix_market: malformed entry " + std::to_string(e + 1));
    }
    triplets.push_back({i - 1, j - 1, v});
    if (sym && i != j) triplets.push_back({j - 1, i - 1, v});
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(triplets));
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_matrix_market(in);
}

}  // namespace hsolve
