#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "hhcat/errors.hpp"
#include "hhcat/field.hpp"
#include "hhcat/sparse.hpp"

namespace hhcat {

// Incremental row echelon structure over coordinates 0..n-1. Each stored
// vector is normalized so that its first nonzero entry (the pivot) is 1, and
// pivots are distinct. Insertion only clears the leading entry repeatedly;
// `reduce` clears every pivot position and is canonical for the span.
template <class K>
class Echelon {
 public:
  explicit Echelon(std::size_t n) : n_(n), pivot_of_(n, -1) {}

  std::size_t ambient() const { return n_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<SparseVector<K>>& rows() const { return rows_; }
  bool has_pivot(Index i) const { return pivot_of_[i] >= 0; }

  bool insert(const SparseVector<K>& v) {
    if (v.empty()) return false;
    SparseVector<K> r = run(v, true);
    if (r.empty()) return false;
    K inv = r.entries().front().value.inverse();
    if (!inv.is_one()) r = r.scaled(inv);
    pivot_of_[r.leading()] = static_cast<std::int32_t>(rows_.size());
    rows_.push_back(std::move(r));
    return true;
  }

  SparseVector<K> reduce(const SparseVector<K>& v) const {
    if (v.empty()) return v;
    return run(v, false);
  }

  bool contains(const SparseVector<K>& v) const { return reduce(v).empty(); }

  // Reduced row echelon basis of the span, sorted by pivot.
  std::vector<SparseVector<K>> rref() const {
    std::vector<Index> order(rows_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return rows_[a].leading() > rows_[b].leading(); });
    Echelon fin(n_);
    std::vector<SparseVector<K>> out;
    for (Index k : order) {
      const SparseVector<K>& r = rows_[k];
      // Only the tail needs clearing; every finalized pivot lies past ours.
      SparseVector<K> red = fin.reduce(r);
      fin.pivot_of_[red.leading()] = static_cast<std::int32_t>(fin.rows_.size());
      fin.rows_.push_back(red);
    }
    out = fin.rows_;
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  SparseVector<K> run(const SparseVector<K>& v, bool leading_only) const {
    if (acc_.size() != n_) {
      acc_.assign(n_, K(0));
      mark_.assign(n_, 0);
    }
    std::priority_queue<Index, std::vector<Index>, std::greater<Index>> heap;
    std::vector<Index> touched;
    touched.reserve(v.nnz() * 2);
    for (auto& e : v) {
      if (e.index >= n_) throw Error("vector index out of range in elimination");
      acc_[e.index] = e.value;
      mark_[e.index] = 1;
      heap.push(e.index);
      touched.push_back(e.index);
    }
    SparseVector<K> out;
    bool stopped = false;
    while (!heap.empty()) {
      Index i = heap.top();
      heap.pop();
      if (acc_[i].is_zero()) continue;
      std::int32_t r = stopped ? -1 : pivot_of_[i];
      if (r >= 0) {
        K c = acc_[i];
        for (auto& f : rows_[r]) {
          if (!mark_[f.index]) {
            mark_[f.index] = 1;
            heap.push(f.index);
            touched.push_back(f.index);
            acc_[f.index] = -(c * f.value);
          } else {
            acc_[f.index] -= c * f.value;
          }
        }
        acc_[i] = K(0);
      } else {
        out.push_back(i, acc_[i]);
        if (leading_only) stopped = true;
      }
    }
    for (Index t : touched) {
      acc_[t] = K(0);
      mark_[t] = 0;
    }
    return out;
  }

  std::size_t n_;
  std::vector<std::int32_t> pivot_of_;
  std::vector<SparseVector<K>> rows_;
  mutable std::vector<K> acc_;
  mutable std::vector<char> mark_;
};

// A linear subspace given by its reduced column-echelon basis (pivot = first
// nonzero coordinate, pivots increasing, pivot entries 1, and every basis
// vector vanishes at the other pivots). The basis is unique for the subspace.
template <class K>
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient) : ambient_(ambient) {}

  static Subspace from_spanning(std::size_t ambient, const std::vector<SparseVector<K>>& vs) {
    Echelon<K> e(ambient);
    for (auto& v : vs) e.insert(v);
    return from_echelon(e);
  }
  static Subspace from_echelon(const Echelon<K>& e) {
    Subspace s(e.ambient());
    s.basis_ = e.rref();
    for (auto& b : s.basis_) s.pivots_.push_back(b.leading());
    return s;
  }
  static Subspace full(std::size_t n) {
    Subspace s(n);
    for (Index i = 0; i < n; ++i) {
      s.basis_.push_back(SparseVector<K>::unit(i));
      s.pivots_.push_back(i);
    }
    return s;
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<SparseVector<K>>& basis() const { return basis_; }
  const std::vector<Index>& pivots() const { return pivots_; }
  SparseMatrix<K> matrix() const { return SparseMatrix<K>::from_columns(ambient_, basis_); }

  // Coefficients of v in this basis; throws if v is not in the subspace.
  std::vector<K> coordinates(const SparseVector<K>& v) const {
    std::vector<K> c(basis_.size(), K(0));
    SparseVector<K> rest = v;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      K a = v.at(pivots_[k]);
      if (a.is_zero()) continue;
      c[k] = a;
      rest = rest.plus_scaled(basis_[k], -a);
    }
    if (!rest.empty()) throw Error("vector is not in the subspace");
    return c;
  }

  bool contains(const SparseVector<K>& v) const {
    SparseVector<K> rest = v;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      K a = v.at(pivots_[k]);
      if (!a.is_zero()) rest = rest.plus_scaled(basis_[k], -a);
    }
    return rest.empty();
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  std::size_t ambient_ = 0;
  std::vector<SparseVector<K>> basis_;
  std::vector<Index> pivots_;
};

namespace detail {

// Static Markowitz-style ordering: rare coordinates first, sparse vectors
// first, ties broken by index so that the run is reproducible.
template <class K>
std::size_t rank_of_vectors(std::size_t n, const std::vector<SparseVector<K>>& vs) {
  std::vector<std::uint32_t> freq(n, 0);
  for (auto& v : vs)
    for (auto& e : v) ++freq[e.index];
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return freq[a] < freq[b]; });
  std::vector<Index> pos(n);
  for (Index k = 0; k < n; ++k) pos[order[k]] = k;
  std::vector<Index> vorder(vs.size());
  std::iota(vorder.begin(), vorder.end(), 0);
  std::stable_sort(vorder.begin(), vorder.end(), [&](Index a, Index b) { return vs[a].nnz() < vs[b].nnz(); });
  Echelon<K> e(n);
  std::size_t cap = std::min(n, vs.size());
  for (Index k : vorder) {
    if (vs[k].empty()) continue;
    e.insert(vs[k].remapped([&](Index i) { return pos[i]; }));
    if (e.rank() == cap) break;
  }
  return e.rank();
}

}  // namespace detail

template <class K>
std::size_t rank(const SparseMatrix<K>& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (m.cols() <= m.rows()) return detail::rank_of_vectors(m.rows(), m.columns());
  SparseMatrix<K> t = m.transpose();
  return detail::rank_of_vectors(t.rows(), t.columns());
}

template <class K>
Subspace<K> kernel_basis(const SparseMatrix<K>& m) {
  std::size_t r = m.rows(), c = m.cols();
  // Augment each column with a tag coordinate; columns whose image part
  // reduces to zero leave a kernel vector in the tag part.
  Echelon<K> e(r + c);
  for (Index j = 0; j < c; ++j) {
    SparseVector<K> v = m.column(j);
    v.push_back(static_cast<Index>(r + j), K(1));
    e.insert(v);
  }
  std::vector<SparseVector<K>> ker;
  for (auto& row : e.rows()) {
    if (row.leading() < r) continue;
    ker.push_back(row.remapped([&](Index i) { return static_cast<Index>(i - r); }));
  }
  return Subspace<K>::from_spanning(c, ker);
}

template <class K>
Subspace<K> solve_homogeneous(const SparseMatrix<K>& constraints) {
  return kernel_basis(constraints);
}

template <class K>
Subspace<K> image_basis(const SparseMatrix<K>& m) {
  return Subspace<K>::from_spanning(m.rows(), m.columns());
}

// dim ker(d_out) - rank(d_in), after checking that d_out * d_in vanishes.
template <class K>
std::size_t homology_dim(const SparseMatrix<K>& d_out, const SparseMatrix<K>& d_in) {
  if (d_out.cols() != d_in.rows())
    throw Error("homology_dim: d_out has " + std::to_string(d_out.cols()) + " columns but d_in has " +
                std::to_string(d_in.rows()) + " rows");
  if (!(d_out * d_in).is_zero()) throw CompositionNotZero("consecutive maps do not compose to zero");
  return d_out.cols() - rank(d_out) - rank(d_in);
}

// Coordinates of classes in Z/B for a fixed list of representatives.
template <class K>
class QuotientCoordinates {
 public:
  QuotientCoordinates() = default;
  QuotientCoordinates(std::size_t ambient, const std::vector<SparseVector<K>>& boundaries,
                      const std::vector<SparseVector<K>>& reps)
      : n_(ambient), h_(reps.size()), e_(ambient + reps.size()) {
    for (auto& b : boundaries) e_.insert(b);
    for (std::size_t k = 0; k < reps.size(); ++k) {
      SparseVector<K> v = reps[k];
      v.push_back(static_cast<Index>(n_ + k), K(1));
      if (!e_.insert(v)) throw ConsistencyFailure("cohomology representatives are dependent modulo boundaries");
    }
  }

  std::size_t dim() const { return h_; }

  // Class coordinates of x; throws if x is not in span(boundaries, reps).
  std::vector<K> coordinates(const SparseVector<K>& x) const {
    SparseVector<K> r = e_.reduce(x);
    std::vector<K> c(h_, K(0));
    for (auto& t : r) {
      if (t.index < n_) throw NotACocycle("vector is not in the span of cocycle representatives and coboundaries");
      c[t.index - n_] = -t.value;
    }
    return c;
  }

  bool is_boundary(const SparseVector<K>& x) const {
    auto c = coordinates(x);
    for (auto& v : c)
      if (!v.is_zero()) return false;
    return true;
  }

 private:
  std::size_t n_ = 0;
  std::size_t h_ = 0;
  Echelon<K> e_{0};
};

}  // namespace hhcat
