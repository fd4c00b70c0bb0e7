// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#include "matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace boxmor {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
  throw ConfigError(path + ":" + std::to_string(line) + ": " + what);
}

struct Banner {
  bool coordinate = false;
  bool symmetric = false;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

Banner parse_banner(const std::string& path, const std::string& line) {
  std::istringstream in(line);
  std::string tag, object, format, field, symmetry;
  in >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || lower(object) != "matrix")
    fail(path, 1, "not a Matrix Market matrix file");
  Banner banner;
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format == "coordinate")
    banner.coordinate = true;
  else if (format != "array")
    fail(path, 1, "unsupported format '" + format + "'");
  if (field != "real")
    fail(path, 1, "unsupported field '" + field + "' (expected real)");
  if (symmetry == "symmetric")
    banner.symmetric = true;
  else if (symmetry != "general")
    fail(path, 1, "unsupported symmetry '" + symmetry + "'");
  return banner;
}

// Reads the next content line (skipping blank and % comment lines).
bool next_content_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '%') continue;
    return true;
  }
  return false;
}

double parse_double(const std::string& path, int lineno, const char* text,
                    char** end) {
  const double v = std::strtod(text, end);
  if (*end == text) fail(path, lineno, "expected a number");
  return v;
}

}  // namespace

void write_matrix_market(const std::string& path, const SpMat& m) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << fmt(it.value())
          << '\n';
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

void write_matrix_market(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) out << fmt(m(i, j)) << '\n';
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

void write_matrix_market(const std::string& path, const Eigen::VectorXd& v) {
  write_matrix_market(path, Eigen::MatrixXd(v));
}

SpMat read_sparse_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) fail(path, 1, "empty file");
  ++lineno;
  const Banner banner = parse_banner(path, line);

  if (!next_content_line(in, line, lineno)) fail(path, lineno, "missing size line");

  if (!banner.coordinate) {
    // Array banner: densify then sparsify, keeping every nonzero entry.
    if (banner.symmetric)
      fail(path, 1, "symmetric array matrices are not supported");
    long rows = 0, cols = 0;
    if (std::sscanf(line.c_str(), "%ld %ld", &rows, &cols) != 2 || rows < 0 ||
        cols < 0)
      fail(path, lineno, "bad array size line");
    Eigen::MatrixXd dense(rows, cols);
    for (long j = 0; j < cols; ++j)
      for (long i = 0; i < rows; ++i) {
        if (!next_content_line(in, line, lineno))
          fail(path, lineno, "truncated array data");
        char* end = nullptr;
        dense(i, j) = parse_double(path, lineno, line.c_str(), &end);
      }
    return dense.sparseView(0.0, 0.0);
  }

  long rows = 0, cols = 0, nnz = 0;
  if (std::sscanf(line.c_str(), "%ld %ld %ld", &rows, &cols, &nnz) != 3 ||
      rows < 0 || cols < 0 || nnz < 0)
    fail(path, lineno, "bad coordinate size line");

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(banner.symmetric ? 2 * nnz : nnz);
  for (long k = 0; k < nnz; ++k) {
    if (!next_content_line(in, line, lineno))
      fail(path, lineno, "truncated coordinate data (expected " +
                             std::to_string(nnz) + " entries)");
    char* end = nullptr;
    const char* cur = line.c_str();
    const long i = std::strtol(cur, &end, 10);
    if (end == cur) fail(path, lineno, "expected a row index");
    cur = end;
    const long j = std::strtol(cur, &end, 10);
    if (end == cur) fail(path, lineno, "expected a column index");
    cur = end;
    const double v = parse_double(path, lineno, cur, &end);
    if (i < 1 || i > rows || j < 1 || j > cols)
      fail(path, lineno, "index out of bounds");
    triplets.emplace_back(i - 1, j - 1, v);
    if (banner.symmetric && i != j) triplets.emplace_back(j - 1, i - 1, v);
  }
  SpMat m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Eigen::MatrixXd read_dense_matrix_market(const std::string& path) {
  return Eigen::MatrixXd(read_sparse_matrix_market(path));
}

Eigen::VectorXd read_vector_matrix_market(const std::string& path) {
  Eigen::MatrixXd m = read_dense_matrix_market(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw ConfigError("'" + path + "' is " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + ", expected a vector");
}

}  // namespace boxmor
