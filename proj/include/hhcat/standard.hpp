#pragma once

// Small named algebras used throughout the tests and the corpus.

#include <string>
#include <vector>

#include "hhcat/algebra.hpp"
#include "hhcat/presentation.hpp"

namespace hhcat::standard {

// Path algebra of the linear quiver 1 -> 2 -> ... -> n.
template <class K>
AlgebraPtr<K> linear_path_algebra(std::size_t n) {
  std::vector<std::string> v;
  std::vector<Arrow> a;
  for (std::size_t i = 0; i < n; ++i) v.push_back(std::to_string(i + 1));
  for (Index i = 0; i + 1 < n; ++i) a.push_back({"a" + std::to_string(i + 1), i, Index(i + 1)});
  return algebra_from_presentation<K>({Quiver(v, a), {}, n + 1});
}

// k[t]/t^n.
template <class K>
AlgebraPtr<K> truncated_polynomial(std::size_t n) {
  Quiver q({"x"}, {{"t", 0, 0}});
  RewritePresentation<K> p{q, {{Word(n, 0), {}}}, n + 1};
  return algebra_from_presentation<K>(p);
}

// k<a, b>/(a^2, b^2, ba - q ab), dimension 4 with basis {1, a, b, ab}.
template <class K>
AlgebraPtr<K> quantum_exterior(const K& q) {
  Quiver quiv({"s"}, {{"a", 0, 0}, {"b", 0, 0}});
  RewritePresentation<K> p{quiv, {{{0, 0}, {}}, {{1, 1}, {}}, {{1, 0}, {{q, {0, 1}}}}}, 4};
  return algebra_from_presentation<K>(p);
}

// kQ / rad^2 for an arbitrary finite quiver.
template <class K>
AlgebraPtr<K> radical_square_zero(const Quiver& q) {
  RewritePresentation<K> p{q, {}, 2};
  for (Index a = 0; a < q.num_arrows(); ++a)
    for (Index b = 0; b < q.num_arrows(); ++b)
      if (q.arrow(b).target == q.arrow(a).source) p.rules.push_back({{a, b}, {}});
  return algebra_from_presentation<K>(p);
}

}  // namespace hhcat::standard
