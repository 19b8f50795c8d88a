/*
 * Copyright 2026 The Singulock Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SINGULOCK_SMITH_HPP_
#define SINGULOCK_SMITH_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace singulock {

using BigInt = boost::multiprecision::cpp_int;

/// Sparse integer matrix. Zero entries are never stored.
class IntMatrix {
 public:
  using Index = std::pair<std::size_t, std::size_t>;

  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const { return entries_.size(); }

  void set(std::size_t r, std::size_t c, const BigInt& v);
  void add(std::size_t r, std::size_t c, const BigInt& v);
  BigInt at(std::size_t r, std::size_t c) const;

  const std::map<Index, BigInt>& entries() const { return entries_; }

  /// this * other; throws std::invalid_argument on a shape mismatch.
  IntMatrix multiply(const IntMatrix& other) const;
  bool is_zero() const { return entries_.empty(); }

 private:
  void check(std::size_t r, std::size_t c) const;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::map<Index, BigInt> entries_;
};

struct SmithResult {
  std::vector<BigInt> factors;  // positive, each divides the next
  std::size_t rank = 0;
};

/// Sparse elimination to Smith form with deterministic pivoting: the entry of
/// least absolute value, ties broken by lowest (row, column).
///
/// With `track_left`, also maintains a unimodular U with U * M * V diagonal
/// (up to placement) and its inverse, which lets callers test membership in
/// the column space and read off a basis adapted to it.
class SmithReduction {
 public:
  explicit SmithReduction(const IntMatrix& m, bool track_left = false);

  SmithResult result() const;
  std::size_t rank() const { return pivots_.size(); }

  struct Pivot {
    std::size_t row;
    std::size_t col;
    BigInt factor;  // absolute value
  };
  const std::vector<Pivot>& pivots() const { return pivots_; }
  bool is_pivot_row(std::size_t r) const { return pivot_of_row_.count(r) > 0; }

  /// Requires track_left. Returns U * x.
  std::vector<BigInt> apply_left(const std::vector<BigInt>& x) const;
  /// Requires track_left. True iff x lies in the integer column space of M.
  bool in_column_space(const std::vector<BigInt>& x) const;
  /// Requires track_left. Column r of U^{-1}: the basis vector attached to row r.
  std::vector<BigInt> basis_vector(std::size_t r) const;

 private:
  using Row = std::map<std::size_t, BigInt>;

  void add_row_multiple(std::size_t target, std::size_t source, const BigInt& q);
  void add_col_multiple(std::size_t target, std::size_t source, const BigInt& q);
  void reduce();

  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<Row> rows_;
  std::vector<std::set<std::size_t>> cols_;
  std::vector<bool> row_done_;
  std::vector<bool> col_done_;
  std::vector<Pivot> pivots_;
  std::map<std::size_t, std::size_t> pivot_of_row_;

  bool track_ = false;
  std::vector<Row> left_;     // rows of U
  std::vector<Row> inverse_;  // columns of U^{-1}
};

SmithResult smith_normal_form(const IntMatrix& m);

}  // namespace singulock

#endif  // SINGULOCK_SMITH_HPP_
