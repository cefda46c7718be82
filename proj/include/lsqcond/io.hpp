/*
 * Copyright 2026 The lsqcond Authors. All Rights Reserved
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LSQCOND_IO_HPP_
#define LSQCOND_IO_HPP_

// Matrix Market (array and coordinate, real/integer/pattern, general and
// symmetric) readers and an array writer; plain-text vectors with one value
// per line.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "lsqcond/config.hpp"
#include "lsqcond/errors.hpp"

namespace lsqcond::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline double parse_double(std::string_view token, const std::string& where) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw Error(ErrorKind::ParseError, where + ": bad number '" + std::string(token) + "'");
  return value;
}

inline long long parse_int(std::string_view token, const std::string& where) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw Error(ErrorKind::ParseError, where + ": bad integer '" + std::string(token) + "'");
  return value;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

}  // namespace detail

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
}

// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline Matrix parse_matrix_market(std::string_view text, const std::string& name = "<input>") {
  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos <= text.size();) {
    const auto nl = text.find('\n', pos);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    lines.push_back(text.substr(pos, end - pos));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (lines.empty()) throw Error(ErrorKind::ParseError, name + ": empty file");

  const auto banner = detail::split_ws(detail::trim(lines[0]));
  if (banner.size() != 5 || detail::lower(banner[0]) != "%%matrixmarket" ||
      detail::lower(banner[1]) != "matrix")
    throw Error(ErrorKind::ParseError, name + ": missing %%MatrixMarket matrix banner");
  const std::string format = detail::lower(banner[2]);
  const std::string field = detail::lower(banner[3]);
  const std::string symmetry = detail::lower(banner[4]);
  if (format != "array" && format != "coordinate")
    throw Error(ErrorKind::ParseError, name + ": unsupported format '" + format + "'");
  if (field != "real" && field != "integer" && field != "double" &&
      !(field == "pattern" && format == "coordinate"))
    throw Error(ErrorKind::ParseError, name + ": unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric")
    throw Error(ErrorKind::ParseError, name + ": unsupported symmetry '" + symmetry + "'");
  const bool symmetric = symmetry != "general";
  const double mirror = symmetry == "skew-symmetric" ? -1.0 : 1.0;

  std::vector<std::string_view> tokens;
  std::size_t line_no = 1;
  std::vector<std::string_view> size_line;
  for (; line_no < lines.size(); ++line_no) {
    const auto t = detail::trim(lines[line_no]);
    if (t.empty() || t.front() == '%') continue;
    size_line = detail::split_ws(t);
    ++line_no;
    break;
  }
  for (; line_no < lines.size(); ++line_no) {
    const auto t = detail::trim(lines[line_no]);
    if (t.empty() || t.front() == '%') continue;
    for (auto tok : detail::split_ws(t)) tokens.push_back(tok);
  }

  const std::size_t expected_size_fields = format == "array" ? 2 : 3;
  if (size_line.size() != expected_size_fields)
    throw Error(ErrorKind::ParseError, name + ": malformed size line");
  const long long rows = detail::parse_int(size_line[0], name);
  const long long cols = detail::parse_int(size_line[1], name);
  if (rows < 0 || cols < 0) throw Error(ErrorKind::ParseError, name + ": negative dimension");
  if (symmetric && rows != cols)
    throw Error(ErrorKind::ParseError, name + ": symmetric matrix must be square");
  Matrix M = Matrix::Zero(rows, cols);

  if (format == "array") {
    std::size_t k = 0;
    auto next = [&]() {
      if (k >= tokens.size()) throw Error(ErrorKind::ParseError, name + ": too few entries");
      return detail::parse_double(tokens[k++], name);
    };
    for (long long j = 0; j < cols; ++j) {
      for (long long i = symmetric ? j : 0; i < rows; ++i) {
        if (symmetric && i == j && mirror < 0.0) continue;  // skew diagonal is implicit zero
        M(i, j) = next();
        if (symmetric && i != j) M(j, i) = mirror * M(i, j);
      }
    }
    if (k != tokens.size()) throw Error(ErrorKind::ParseError, name + ": too many entries");
    return M;
  }

  const long long nnz = detail::parse_int(size_line[2], name);
  const std::size_t per_entry = field == "pattern" ? 2 : 3;
  if (nnz < 0 || tokens.size() != static_cast<std::size_t>(nnz) * per_entry)
    throw Error(ErrorKind::ParseError, name + ": entry count does not match header");
  for (long long e = 0; e < nnz; ++e) {
    const std::size_t base = static_cast<std::size_t>(e) * per_entry;
    const long long i = detail::parse_int(tokens[base], name) - 1;
    const long long j = detail::parse_int(tokens[base + 1], name) - 1;
    if (i < 0 || i >= rows || j < 0 || j >= cols)
      throw Error(ErrorKind::ParseError, name + ": coordinate out of range");
    const double v = per_entry == 3 ? detail::parse_double(tokens[base + 2], name) : 1.0;
    M(i, j) += v;
    if (symmetric && i != j) M(j, i) += mirror * v;
  }
  return M;
}

inline Matrix read_matrix(const std::string& path) { return parse_matrix_market(read_file(path), path); }

// Matrix Market array file (n x 1 or 1 x n) or plain text with one value per line.
inline Vector parse_vector(std::string_view text, const std::string& name = "<input>") {
  const auto head = detail::trim(text.substr(0, text.find('\n')));
  if (detail::lower(head.substr(0, 14)) == "%%matrixmarket") {
    const Matrix M = parse_matrix_market(text, name);
    if (M.cols() != 1 && M.rows() != 1)
      throw Error(ErrorKind::ParseError, name + ": vector file must have one row or column");
    return M.reshaped();
  }
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line =
        detail::trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    if (!line.empty() && line.front() != '#' && line.front() != '%') {
      const auto toks = detail::split_ws(line);
      if (toks.size() != 1)
        throw Error(ErrorKind::ParseError, name + ": expected one value per line");
      values.push_back(detail::parse_double(toks[0], name));
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

inline Vector read_vector(const std::string& path) { return parse_vector(read_file(path), path); }

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_matrix_market(const Matrix& M) {
  std::string out = "%%MatrixMarket matrix array real general\n";
  out += std::to_string(M.rows()) + " " + std::to_string(M.cols()) + "\n";
  for (Eigen::Index j = 0; j < M.cols(); ++j)
    for (Eigen::Index i = 0; i < M.rows(); ++i) out += format_double(M(i, j)) + "\n";
  return out;
}

inline void write_matrix(const std::string& path, const Matrix& M) {
  write_file(path, format_matrix_market(M));
}

inline void write_vector(const std::string& path, const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += format_double(v[i]) + "\n";
  write_file(path, out);
}

}  // namespace lsqcond::io

#endif  // LSQCOND_IO_HPP_
