#pragma once

// Shared helpers for the test executables: seeded generators and small
// builders. Everything here is deterministic given the seed.

#include <random>
#include <string>
#include <vector>

#include "hhcat/exactla.hpp"

namespace hhcat::testing {

class Gen {
 public:
  explicit Gen(std::uint32_t seed) : rng_(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937& engine() { return rng_; }

  template <class K>
  SparseMatrix<K> matrix(std::size_t rows, std::size_t cols, double density, int lo = -5, int hi = 5) {
    std::vector<Triplet<K>> t;
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j)
        if (chance(density)) t.push_back({i, j, K(uniform(lo, hi))});
    return SparseMatrix<K>::from_triplets(rows, cols, t);
  }

  template <class K>
  SparseVector<K> vector(std::size_t n, double density, int lo = -3, int hi = 3) {
    std::vector<Entry<K>> raw;
    for (Index i = 0; i < n; ++i)
      if (chance(density)) raw.push_back({i, K(uniform(lo, hi))});
    return SparseVector<K>::from_unsorted(std::move(raw));
  }

 private:
  std::mt19937 rng_;
};

// Dense Gaussian elimination on a copy, used as an independent rank oracle.
template <class K>
std::size_t dense_rank(const SparseMatrix<K>& m) {
  std::size_t r = m.rows(), c = m.cols();
  std::vector<std::vector<K>> a(r, std::vector<K>(c, K(0)));
  for (auto& t : m.triplets()) a[t.row][t.col] = t.value;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < c && rank < r; ++col) {
    std::size_t piv = rank;
    while (piv < r && a[piv][col].is_zero()) ++piv;
    if (piv == r) continue;
    std::swap(a[piv], a[rank]);
    K inv = a[rank][col].inverse();
    for (std::size_t i = 0; i < r; ++i) {
      if (i == rank || a[i][col].is_zero()) continue;
      K f = a[i][col] * inv;
      for (std::size_t j = col; j < c; ++j) a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace hhcat::testing
