#pragma once

// Q-sets shared by the complex, homalg and structure tests.

#include <string>
#include <vector>

#include "hhcat/qset.hpp"
#include "hhcat/standard.hpp"
#include "support.hpp"

namespace hhcat::testing {

template <class K>
AlgebraPtr<K> small_algebra(Gen& g) {
  switch (g.uniform(0, 3)) {
    case 0: return field_algebra<K>();
    case 1: return standard::truncated_polynomial<K>(2);
    case 2: return standard::linear_path_algebra<K>(2);
    default: return semisimple_algebra<K>(2);
  }
}

template <class K>
Bimodule<K> random_corner(Gen& g, const AlgebraPtr<K>& B, const AlgebraPtr<K>& A) {
  return free_corner_bimodule(B, g.uniform(0, int(B->system().size()) - 1), g.uniform(0, int(A->system().size()) - 1),
                              A);
}

// Random simply laced quiver on up to max_vertices vertices; arrow bimodules
// are free corners, sometimes the regular bimodule when the algebras agree.
template <class K>
QSet<K> random_qset(Gen& g, std::size_t max_vertices = 3, double arrow_p = 0.4) {
  std::size_t n = g.uniform(1, int(max_vertices));
  std::vector<std::string> v;
  std::vector<AlgebraPtr<K>> algs;
  for (std::size_t i = 0; i < n; ++i) {
    v.push_back("v" + std::to_string(i));
    algs.push_back(small_algebra<K>(g));
  }
  std::vector<Arrow> arrows;
  std::vector<Bimodule<K>> mods;
  for (Index s = 0; s < n; ++s)
    for (Index t = 0; t < n; ++t)
      if (s != t && g.chance(arrow_p)) {
        arrows.push_back({"a" + std::to_string(arrows.size()), s, t});
        mods.push_back(random_corner<K>(g, algs[t], algs[s]));
      }
  return QSet<K>(Quiver(v, arrows), algs, mods);
}

// x -> y with k at both ends and M_a = k.
template <class K>
QSet<K> a2_all_k() {
  auto k = field_algebra<K>();
  return QSet<K>(Quiver({"x", "y"}, {{"a", 0, 1}}), {k, k}, {Bimodule<K>::regular(k)});
}

template <class K>
QSet<K> round_trip_all_k() {
  auto k = field_algebra<K>();
  return round_trip_qset<K>(k, k, Bimodule<K>::regular(k), Bimodule<K>::regular(k));
}

// One-point extension: A_x = B, A_y = k, M_a = B as a k-B bimodule.
template <class K>
QSet<K> one_point(const AlgebraPtr<K>& B) {
  auto k = field_algebra<K>();
  return QSet<K>(Quiver({"x", "y"}, {{"a", 0, 1}}), {B, k}, {free_bimodule(k, B)});
}

// x -> y -> z plus x -> z, all data k.
template <class K>
QSet<K> triangle_all_k() {
  auto k = field_algebra<K>();
  auto r = Bimodule<K>::regular(k);
  return QSet<K>(Quiver({"x", "y", "z"}, {{"a", 0, 1}, {"b", 1, 2}, {"c", 0, 2}}), {k, k, k}, {r, r, r});
}

// Null square with free rank-one corners M = BA, N = AB.
template <class K>
SquareData<K> free_rank_one(const AlgebraPtr<K>& A, const AlgebraPtr<K>& B) {
  return zero_square(A, B, free_bimodule(B, A), free_bimodule(A, B));
}

// The quantum exterior algebra at s glued to x -> y (the path algebra of A2)
// by an up arrow x -> s and a down arrow s -> y.
template <class K>
SquareData<K> dh_composite(const K& q) {
  auto A = standard::quantum_exterior<K>(q);
  auto B = standard::linear_path_algebra<K>(2);
  std::size_t x = 0, y = 1;
  if (B->corner(B->system()[y], B->system()[x]).dim() == 0) std::swap(x, y);
  return zero_square(A, B, free_corner_bimodule(B, y, 0, A), free_corner_bimodule(A, 0, x, B));
}

}  // namespace hhcat::testing
