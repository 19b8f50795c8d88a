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

#include "singulock/smith.hpp"

#include <stdexcept>
#include <tuple>

namespace singulock {

void IntMatrix::check(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index out of range");
}

void IntMatrix::set(std::size_t r, std::size_t c, const BigInt& v) {
  check(r, c);
  if (v == 0)
    entries_.erase({r, c});
  else
    entries_[{r, c}] = v;
}

void IntMatrix::add(std::size_t r, std::size_t c, const BigInt& v) {
  check(r, c);
  if (v == 0) return;
  auto [it, inserted] = entries_.try_emplace({r, c}, v);
  if (!inserted) {
    it->second += v;
    if (it->second == 0) entries_.erase(it);
  }
}

BigInt IntMatrix::at(std::size_t r, std::size_t c) const {
  check(r, c);
  auto it = entries_.find({r, c});
  return it == entries_.end() ? BigInt(0) : it->second;
}

IntMatrix IntMatrix::multiply(const IntMatrix& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("matrix shapes do not compose");
  std::vector<std::vector<std::pair<std::size_t, BigInt>>> other_rows(other.rows_);
  for (const auto& [idx, v] : other.entries_) other_rows[idx.first].push_back({idx.second, v});
  IntMatrix out(rows_, other.cols_);
  for (const auto& [idx, v] : entries_)
    for (const auto& [c, w] : other_rows[idx.second]) out.add(idx.first, c, v * w);
  return out;
}

// ----------------------------------------------------------------------------

SmithReduction::SmithReduction(const IntMatrix& m, bool track_left)
    : nrows_(m.rows()),
      ncols_(m.cols()),
      rows_(m.rows()),
      cols_(m.cols()),
      row_done_(m.rows(), false),
      col_done_(m.cols(), false),
      track_(track_left) {
  for (const auto& [idx, v] : m.entries()) {
    rows_[idx.first][idx.second] = v;
    cols_[idx.second].insert(idx.first);
  }
  if (track_) {
    left_.resize(nrows_);
    inverse_.resize(nrows_);
    for (std::size_t i = 0; i < nrows_; ++i) {
      left_[i][i] = 1;
      inverse_[i][i] = 1;
    }
  }
  reduce();
}

namespace {

void axpy(std::map<std::size_t, BigInt>& target, const std::map<std::size_t, BigInt>& source,
          const BigInt& q) {
  for (const auto& [k, v] : source) {
    auto [it, inserted] = target.try_emplace(k, BigInt(q * v));
    if (!inserted) {
      it->second += q * v;
      if (it->second == 0) target.erase(it);
    }
  }
}

}  // namespace

// row[target] += q * row[source]
void SmithReduction::add_row_multiple(std::size_t target, std::size_t source, const BigInt& q) {
  if (q == 0) return;
  for (const auto& [c, v] : rows_[source]) {
    auto [it, inserted] = rows_[target].try_emplace(c, BigInt(q * v));
    if (inserted) {
      cols_[c].insert(target);
    } else {
      it->second += q * v;
      if (it->second == 0) {
        rows_[target].erase(it);
        cols_[c].erase(target);
      }
    }
  }
  if (track_) {
    axpy(left_[target], left_[source], q);
    // U' = E U with E = I + q e_t e_s^T, so U'^{-1} = U^{-1} (I - q e_t e_s^T):
    // column s loses q times column t.
    axpy(inverse_[source], inverse_[target], -q);
  }
}

// col[target] += q * col[source]; right transforms are not tracked.
void SmithReduction::add_col_multiple(std::size_t target, std::size_t source, const BigInt& q) {
  if (q == 0) return;
  const std::set<std::size_t> touched = cols_[source];
  for (std::size_t r : touched) {
    const BigInt delta = q * rows_[r].at(source);
    auto [it, inserted] = rows_[r].try_emplace(target, delta);
    if (inserted) {
      cols_[target].insert(r);
    } else {
      it->second += delta;
      if (it->second == 0) {
        rows_[r].erase(it);
        cols_[target].erase(r);
      }
    }
  }
}

void SmithReduction::reduce() {
  for (;;) {
    // Pivot: least |value| among active entries, then lowest (row, col).
    bool found = false;
    std::size_t p = 0, q = 0;
    BigInt best;
    for (std::size_t r = 0; r < nrows_; ++r) {
      if (row_done_[r]) continue;
      for (const auto& [c, v] : rows_[r]) {
        if (col_done_[c]) continue;
        const BigInt a = abs(v);
        if (!found || a < best) {
          found = true;
          best = a;
          p = r;
          q = c;
        }
      }
    }
    if (!found) break;

    const BigInt piv = rows_[p].at(q);
    bool restart = false;

    // Clear the pivot column.
    const std::set<std::size_t> col_rows = cols_[q];
    for (std::size_t r : col_rows) {
      if (r == p || row_done_[r]) continue;
      const BigInt quot = rows_[r].at(q) / piv;  // truncating division
      add_row_multiple(r, p, -quot);
      if (rows_[r].count(q)) restart = true;  // remainder is a smaller pivot
    }
    if (restart) continue;

    // Clear the pivot row.
    std::vector<std::size_t> row_cols;
    for (const auto& [c, v] : rows_[p])
      if (c != q && !col_done_[c]) row_cols.push_back(c);
    for (std::size_t c : row_cols) {
      const BigInt quot = rows_[p].at(c) / piv;
      add_col_multiple(c, q, -quot);
      if (rows_[p].count(c)) restart = true;
    }
    if (restart) continue;

    // Every remaining entry must be a multiple of the pivot; otherwise fold
    // the offending row into the pivot row and try again.
    for (std::size_t r = 0; r < nrows_ && !restart; ++r) {
      if (row_done_[r] || r == p) continue;
      for (const auto& [c, v] : rows_[r]) {
        if (col_done_[c]) continue;
        if (v % piv != 0) {
          add_row_multiple(p, r, 1);
          restart = true;
          break;
        }
      }
    }
    if (restart) continue;

    pivot_of_row_[p] = pivots_.size();
    pivots_.push_back({p, q, abs(piv)});
    row_done_[p] = true;
    col_done_[q] = true;
  }
}

SmithResult SmithReduction::result() const {
  SmithResult r;
  r.rank = pivots_.size();
  for (const auto& pv : pivots_) r.factors.push_back(pv.factor);
  return r;
}

std::vector<BigInt> SmithReduction::apply_left(const std::vector<BigInt>& x) const {
  if (!track_) throw std::logic_error("left transform was not tracked");
  if (x.size() != nrows_) throw std::invalid_argument("vector length mismatch");
  std::vector<BigInt> y(nrows_);
  for (std::size_t i = 0; i < nrows_; ++i)
    for (const auto& [j, v] : left_[i]) y[i] += v * x[j];
  return y;
}

bool SmithReduction::in_column_space(const std::vector<BigInt>& x) const {
  const auto y = apply_left(x);
  for (std::size_t r = 0; r < nrows_; ++r) {
    auto it = pivot_of_row_.find(r);
    if (it == pivot_of_row_.end()) {
      if (y[r] != 0) return false;
    } else if (y[r] % pivots_[it->second].factor != 0) {
      return false;
    }
  }
  return true;
}

std::vector<BigInt> SmithReduction::basis_vector(std::size_t r) const {
  if (!track_) throw std::logic_error("left transform was not tracked");
  std::vector<BigInt> v(nrows_);
  for (const auto& [i, x] : inverse_[r]) v[i] = x;
  return v;
}

SmithResult smith_normal_form(const IntMatrix& m) { return SmithReduction(m).result(); }

}  // namespace singulock
