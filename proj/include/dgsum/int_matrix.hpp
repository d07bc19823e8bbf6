/*
 * Copyright 2026 The dgsum Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DGSUM_INT_MATRIX_HPP_
#define DGSUM_INT_MATRIX_HPP_

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dgsum/errors.hpp"

namespace dgsum {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using IntVec = std::vector<BigInt>;

inline IntVec to_int_vec(const std::vector<std::int64_t>& v) {
  return IntVec(v.begin(), v.end());
}

inline std::vector<std::int64_t> to_int64_vec(const IntVec& v) {
  std::vector<std::int64_t> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (x > std::numeric_limits<std::int64_t>::max() ||
        x < std::numeric_limits<std::int64_t>::min()) {
      throw InvalidArgument("integer does not fit in 64 bits");
    }
    out.push_back(static_cast<std::int64_t>(x));
  }
  return out;
}

inline BigInt dot(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: length mismatch");
  BigInt s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline BigInt norm_sq(const IntVec& a) { return dot(a, a); }

inline double norm(const IntVec& a) {
  return std::sqrt(static_cast<double>(norm_sq(a)));
}

inline bool is_zero(const IntVec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

// Floor division for arbitrary-precision integers (rounds toward -inf).
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Nearest integer to a/b, ties rounded up.
inline BigInt round_div(const BigInt& a, const BigInt& b) {
  if (b < 0) return round_div(-a, -b);
  return floor_div(2 * a + b, 2 * b);
}

// Dense exact integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, BigInt(0)) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<IntVec>& rows) {
    if (rows.empty()) return {};
    IntMatrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_)
        throw DimensionMismatch("from_rows: ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static IntMatrix from_rows(
      const std::vector<std::vector<std::int64_t>>& rows) {
    std::vector<IntVec> big;
    big.reserve(rows.size());
    for (const auto& r : rows) big.push_back(to_int_vec(r));
    return from_rows(big);
  }

  // Columns given as vectors; the result has cols.size() columns.
  static IntMatrix from_cols(const std::vector<IntVec>& cols) {
    if (cols.empty()) return {};
    IntMatrix m(cols[0].size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != m.rows_)
        throw DimensionMismatch("from_cols: ragged columns");
      for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  BigInt& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const BigInt& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  IntVec row(std::size_t i) const {
    return IntVec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  IntVec col(std::size_t j) const {
    IntVec c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  std::vector<IntVec> row_list() const {
    std::vector<IntVec> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }

  std::vector<IntVec> col_list() const {
    std::vector<IntVec> out;
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(col(j));
    return out;
  }

  void set_col(std::size_t j, const IntVec& v) {
    if (v.size() != rows_) throw DimensionMismatch("set_col: length");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // Appends rows below the current ones.
  IntMatrix with_rows(const std::vector<IntVec>& extra) const {
    IntMatrix m(rows_ + extra.size(), cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
    for (std::size_t k = 0; k < extra.size(); ++k) {
      if (extra[k].size() != cols_)
        throw DimensionMismatch("with_rows: row length");
      for (std::size_t j = 0; j < cols_; ++j) m(rows_ + k, j) = extra[k][j];
    }
    return m;
  }

  IntVec operator*(const IntVec& v) const {
    if (v.size() != cols_) throw DimensionMismatch("matrix-vector product");
    IntVec out(rows_, BigInt(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw DimensionMismatch("matrix product");
    IntMatrix out(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        if ((*this)(i, k) == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j)
          out(i, j) += (*this)(i, k) * o(k, j);
      }
    return out;
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  Eigen::MatrixXd to_double() const {
    Eigen::MatrixXd m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            static_cast<double>((*this)(i, j));
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

inline Eigen::VectorXd to_double(const IntVec& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = static_cast<double>(v[i]);
  return out;
}

// Exact rational matrix, used for dual bases.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  Eigen::MatrixXd to_double() const {
    Eigen::MatrixXd m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            static_cast<double>((*this)(i, j));
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

// ---------------------------------------------------------------------------
// Text format: one row per line, whitespace-separated decimal integers.
// Blank lines and lines starting with '#' are ignored. Rational matrices are
// written with "p/q" tokens.

inline IntMatrix read_int_matrix(std::istream& in) {
  std::vector<IntVec> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    IntVec row;
    std::string tok;
    while (ls >> tok) {
      try {
        row.emplace_back(tok);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) +
                         ": not an integer: '" + tok + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("line " + std::to_string(lineno) +
                       ": row length differs from first row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty matrix");
  return IntMatrix::from_rows(rows);
}

inline IntMatrix parse_int_matrix(const std::string& text) {
  std::istringstream in(text);
  return read_int_matrix(in);
}

inline void write_int_matrix(std::ostream& out, const IntMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
}

inline std::string format_int_matrix(const IntMatrix& m) {
  std::ostringstream os;
  write_int_matrix(os, m);
  return os.str();
}

inline void write_rat_matrix(std::ostream& out, const RatMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << numerator(m(i, j)) << '/' << denominator(m(i, j));
    }
    out << '\n';
  }
}

inline std::string format_rat_matrix(const RatMatrix& m) {
  std::ostringstream os;
  write_rat_matrix(os, m);
  return os.str();
}

}  // namespace dgsum

#endif  // DGSUM_INT_MATRIX_HPP_
