#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hhcat/errors.hpp"
#include "hhcat/field.hpp"

namespace hhcat {

using Index = std::uint32_t;

template <class K>
struct Entry {
  Index index;
  K value;
  friend bool operator==(const Entry& a, const Entry& b) { return a.index == b.index && a.value == b.value; }
};

// Sparse vector: strictly increasing indices, no stored zeros.
template <class K>
class SparseVector {
 public:
  SparseVector() = default;

  // Accepts unsorted input with repeated indices; sums them and drops zeros.
  static SparseVector from_unsorted(std::vector<Entry<K>> raw) {
    std::sort(raw.begin(), raw.end(), [](const Entry<K>& a, const Entry<K>& b) { return a.index < b.index; });
    SparseVector v;
    v.e_.reserve(raw.size());
    for (auto& x : raw) {
      if (!v.e_.empty() && v.e_.back().index == x.index) {
        v.e_.back().value += x.value;
      } else {
        if (!v.e_.empty() && v.e_.back().value.is_zero()) v.e_.pop_back();
        v.e_.push_back(std::move(x));
      }
    }
    if (!v.e_.empty() && v.e_.back().value.is_zero()) v.e_.pop_back();
    return v;
  }

  static SparseVector unit(Index i, K value = K(1)) {
    SparseVector v;
    if (!value.is_zero()) v.e_.push_back({i, std::move(value)});
    return v;
  }

  static SparseVector from_dense(const std::vector<K>& d) {
    SparseVector v;
    for (Index i = 0; i < d.size(); ++i)
      if (!d[i].is_zero()) v.e_.push_back({i, d[i]});
    return v;
  }

  // Caller guarantees increasing indices and nonzero value.
  void push_back(Index i, K value) { e_.push_back({i, std::move(value)}); }

  bool empty() const { return e_.empty(); }
  bool is_zero() const { return e_.empty(); }
  std::size_t nnz() const { return e_.size(); }
  auto begin() const { return e_.begin(); }
  auto end() const { return e_.end(); }
  const Entry<K>& operator[](std::size_t k) const { return e_[k]; }
  const std::vector<Entry<K>>& entries() const { return e_; }
  Index leading() const { return e_.front().index; }

  K at(Index i) const {
    auto it = std::lower_bound(e_.begin(), e_.end(), i, [](const Entry<K>& a, Index b) { return a.index < b; });
    if (it != e_.end() && it->index == i) return it->value;
    return K(0);
  }

  std::vector<K> to_dense(std::size_t n) const {
    std::vector<K> d(n, K(0));
    for (auto& x : e_) d[x.index] = x.value;
    return d;
  }

  SparseVector scaled(const K& c) const {
    SparseVector r;
    if (c.is_zero()) return r;
    r.e_.reserve(e_.size());
    for (auto& x : e_) r.e_.push_back({x.index, x.value * c});
    return r;
  }

  // this + c * w
  SparseVector plus_scaled(const SparseVector& w, const K& c) const {
    SparseVector r;
    if (c.is_zero()) return *this;
    r.e_.reserve(e_.size() + w.e_.size());
    std::size_t i = 0, j = 0;
    while (i < e_.size() || j < w.e_.size()) {
      if (j == w.e_.size() || (i < e_.size() && e_[i].index < w.e_[j].index)) {
        r.e_.push_back(e_[i++]);
      } else if (i == e_.size() || w.e_[j].index < e_[i].index) {
        r.e_.push_back({w.e_[j].index, w.e_[j].value * c});
        ++j;
      } else {
        K s = e_[i].value + w.e_[j].value * c;
        if (!s.is_zero()) r.e_.push_back({e_[i].index, std::move(s)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  friend SparseVector operator+(const SparseVector& a, const SparseVector& b) { return a.plus_scaled(b, K(1)); }
  friend SparseVector operator-(const SparseVector& a, const SparseVector& b) { return a.plus_scaled(b, K(-1)); }
  friend bool operator==(const SparseVector& a, const SparseVector& b) { return a.e_ == b.e_; }
  friend bool operator!=(const SparseVector& a, const SparseVector& b) { return !(a == b); }

  // Reindex every entry through `map` (must be injective).
  template <class F>
  SparseVector remapped(F&& map) const {
    std::vector<Entry<K>> raw;
    raw.reserve(e_.size());
    for (auto& x : e_) raw.push_back({map(x.index), x.value});
    return from_unsorted(std::move(raw));
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "{";
    for (std::size_t k = 0; k < e_.size(); ++k) os << (k ? ", " : "") << e_[k].index << ":" << e_[k].value.to_string();
    os << "}";
    return os.str();
  }

 private:
  std::vector<Entry<K>> e_;
};

template <class K>
struct Triplet {
  Index row;
  Index col;
  K value;
};

// Column-compressed sparse matrix.
template <class K>
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), col_(cols) {}

  static SparseMatrix zero(std::size_t rows, std::size_t cols) { return SparseMatrix(rows, cols); }

  static SparseMatrix identity(std::size_t n) {
    SparseMatrix m(n, n);
    for (Index i = 0; i < n; ++i) m.col_[i] = SparseVector<K>::unit(i);
    return m;
  }

  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, const std::vector<Triplet<K>>& t) {
    std::vector<std::vector<Entry<K>>> raw(cols);
    for (auto& x : t) {
      if (x.row >= rows || x.col >= cols) throw Error("matrix entry index out of range");
      raw[x.col].push_back({x.row, x.value});
    }
    SparseMatrix m(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) m.col_[j] = SparseVector<K>::from_unsorted(std::move(raw[j]));
    return m;
  }

  static SparseMatrix from_columns(std::size_t rows, std::vector<SparseVector<K>> cols) {
    SparseMatrix m(rows, cols.size());
    for (auto& c : cols)
      if (!c.empty() && c.entries().back().index >= rows) throw Error("matrix column entry out of range");
    m.col_ = std::move(cols);
    return m;
  }

  // Row-major nested initializer, used mainly by tests.
  static SparseMatrix from_rows(const std::vector<std::vector<K>>& rows) {
    std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
    std::vector<Triplet<K>> t;
    for (Index i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw Error("ragged matrix rows");
      for (Index j = 0; j < c; ++j)
        if (!rows[i][j].is_zero()) t.push_back({i, j, rows[i][j]});
    }
    return from_triplets(r, c, t);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const SparseVector<K>& column(std::size_t j) const { return col_[j]; }
  const std::vector<SparseVector<K>>& columns() const { return col_; }
  void set_column(std::size_t j, SparseVector<K> v) { col_[j] = std::move(v); }

  std::size_t nnz() const {
    std::size_t s = 0;
    for (auto& c : col_) s += c.nnz();
    return s;
  }
  bool is_zero() const {
    for (auto& c : col_)
      if (!c.empty()) return false;
    return true;
  }

  K at(Index r, Index c) const { return col_[c].at(r); }

  // Entries sorted by (row, col).
  std::vector<Triplet<K>> triplets() const {
    std::vector<Triplet<K>> t;
    for (Index j = 0; j < cols_; ++j)
      for (auto& e : col_[j]) t.push_back({e.index, j, e.value});
    std::sort(t.begin(), t.end(), [](auto& a, auto& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    return t;
  }

  SparseMatrix transpose() const {
    std::vector<std::vector<Entry<K>>> raw(rows_);
    for (Index j = 0; j < cols_; ++j)
      for (auto& e : col_[j]) raw[e.index].push_back({j, e.value});
    SparseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      SparseVector<K> v;
      for (auto& e : raw[i]) v.push_back(e.index, e.value);
      t.col_[i] = std::move(v);
    }
    return t;
  }

  SparseVector<K> apply(const SparseVector<K>& x) const {
    std::vector<Entry<K>> raw;
    for (auto& e : x) {
      if (e.index >= cols_) throw Error("vector length does not match matrix");
      for (auto& f : col_[e.index]) raw.push_back({f.index, f.value * e.value});
    }
    return SparseVector<K>::from_unsorted(std::move(raw));
  }

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols_ != b.rows_) throw Error("matrix product dimension mismatch");
    SparseMatrix r(a.rows_, b.cols_);
    for (std::size_t j = 0; j < b.cols_; ++j) r.col_[j] = a.apply(b.col_[j]);
    return r;
  }

  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error("matrix sum dimension mismatch");
    SparseMatrix r(a.rows_, a.cols_);
    for (std::size_t j = 0; j < a.cols_; ++j) r.col_[j] = a.col_[j] + b.col_[j];
    return r;
  }

  SparseMatrix scaled(const K& c) const {
    SparseMatrix r(rows_, cols_);
    for (std::size_t j = 0; j < cols_; ++j) r.col_[j] = col_[j].scaled(c);
    return r;
  }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.col_ == b.col_;
  }
  friend bool operator!=(const SparseMatrix& a, const SparseMatrix& b) { return !(a == b); }

  // Submatrix keeping the given rows/cols (in the given order).
  SparseMatrix select(const std::vector<Index>& rows, const std::vector<Index>& cols) const {
    std::vector<std::int64_t> row_pos(rows_, -1);
    for (Index k = 0; k < rows.size(); ++k) row_pos[rows[k]] = k;
    SparseMatrix r(rows.size(), cols.size());
    for (Index k = 0; k < cols.size(); ++k) {
      std::vector<Entry<K>> raw;
      for (auto& e : col_[cols[k]])
        if (row_pos[e.index] >= 0) raw.push_back({Index(row_pos[e.index]), e.value});
      r.col_[k] = SparseVector<K>::from_unsorted(std::move(raw));
    }
    return r;
  }

  std::string to_string() const {
    std::ostringstream os;
    for (Index i = 0; i < rows_; ++i) {
      os << "[";
      for (Index j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j).to_string();
      os << "]\n";
    }
    return os.str();
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<SparseVector<K>> col_;
};

// Collects matrix entries column by column with duplicates allowed.
template <class K>
class MatrixBuilder {
 public:
  MatrixBuilder(std::size_t rows, std::size_t cols) : rows_(rows), raw_(cols) {}
  void add(Index row, Index col, K value) {
    if (value.is_zero()) return;
    raw_[col].push_back({row, std::move(value)});
    ++count_;
  }
  std::size_t pending() const { return count_; }
  SparseMatrix<K> build() {
    std::vector<SparseVector<K>> cols(raw_.size());
    for (std::size_t j = 0; j < raw_.size(); ++j) {
      cols[j] = SparseVector<K>::from_unsorted(std::move(raw_[j]));
      std::vector<Entry<K>>().swap(raw_[j]);
    }
    return SparseMatrix<K>::from_columns(rows_, std::move(cols));
  }

 private:
  std::size_t rows_;
  std::vector<std::vector<Entry<K>>> raw_;
  std::size_t count_ = 0;
};

}  // namespace hhcat
