#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hhcat/algebra.hpp"
#include "hhcat/errors.hpp"
#include "hhcat/exactla.hpp"

namespace hhcat {

// B-A bimodule: `left` is B, `right` is A. Column j of left_action(i) is
// b_i * m_j; column j of right_action(i) is m_j * a_i.
template <class K>
class Bimodule {
 public:
  Bimodule() = default;

  static Bimodule from_actions(AlgebraPtr<K> left, AlgebraPtr<K> right, std::size_t dim,
                               std::vector<SparseMatrix<K>> l, std::vector<SparseMatrix<K>> r, bool validate = true) {
    Bimodule m;
    m.left_ = std::move(left);
    m.right_ = std::move(right);
    m.dim_ = dim;
    m.l_ = std::move(l);
    m.r_ = std::move(r);
    if (m.l_.size() != m.left_->dim() || m.r_.size() != m.right_->dim())
      throw Error("bimodule needs one action matrix per algebra basis element");
    for (auto& x : m.l_)
      if (x.rows() != dim || x.cols() != dim) throw Error("left action matrix has the wrong size");
    for (auto& x : m.r_)
      if (x.rows() != dim || x.cols() != dim) throw Error("right action matrix has the wrong size");
    if (validate) m.validate();
    return m;
  }

  static Bimodule zero(AlgebraPtr<K> left, AlgebraPtr<K> right) {
    std::vector<SparseMatrix<K>> l(left->dim(), SparseMatrix<K>(0, 0)), r(right->dim(), SparseMatrix<K>(0, 0));
    return from_actions(std::move(left), std::move(right), 0, std::move(l), std::move(r), false);
  }

  // A as an A-A bimodule.
  static Bimodule regular(AlgebraPtr<K> a) {
    std::vector<SparseMatrix<K>> l, r;
    for (Index i = 0; i < a->dim(); ++i) {
      l.push_back(a->left_mult(SparseVector<K>::unit(i)));
      r.push_back(a->right_mult(SparseVector<K>::unit(i)));
    }
    return from_actions(a, a, a->dim(), std::move(l), std::move(r), false);
  }

  const AlgebraPtr<K>& left_algebra() const { return left_; }
  const AlgebraPtr<K>& right_algebra() const { return right_; }
  std::size_t dim() const { return dim_; }
  const SparseMatrix<K>& left_action(Index i) const { return l_[i]; }
  const SparseMatrix<K>& right_action(Index i) const { return r_[i]; }
  bool projective_certificate() const { return projective_; }
  void set_projective_certificate(bool v) { projective_ = v; }

  // b * v and v * a for general elements b, a given in coordinates.
  SparseVector<K> act_left(const SparseVector<K>& b, const SparseVector<K>& v) const {
    SparseVector<K> out;
    for (auto& e : b) out = out.plus_scaled(l_[e.index].apply(v), e.value);
    return out;
  }
  SparseVector<K> act_right(const SparseVector<K>& v, const SparseVector<K>& a) const {
    SparseVector<K> out;
    for (auto& e : a) out = out.plus_scaled(r_[e.index].apply(v), e.value);
    return out;
  }
  SparseMatrix<K> left_matrix(const SparseVector<K>& b) const {
    SparseMatrix<K> m = SparseMatrix<K>::zero(dim_, dim_);
    for (auto& e : b) m = m + l_[e.index].scaled(e.value);
    return m;
  }
  SparseMatrix<K> right_matrix(const SparseVector<K>& a) const {
    SparseMatrix<K> m = SparseMatrix<K>::zero(dim_, dim_);
    for (auto& e : a) m = m + r_[e.index].scaled(e.value);
    return m;
  }

  void validate() const {
    const auto& B = *left_;
    const auto& A = *right_;
    auto id = SparseMatrix<K>::identity(dim_);
    if (left_matrix(B.unit()) != id) throw Error("bimodule: the unit of the left algebra does not act as identity");
    if (right_matrix(A.unit()) != id) throw Error("bimodule: the unit of the right algebra does not act as identity");
    for (Index i = 0; i < B.dim(); ++i)
      for (Index j = 0; j < B.dim(); ++j)
        if (left_matrix(B.product(i, j)) != l_[i] * l_[j])
          throw Error("bimodule: left action is not multiplicative on (" + B.label(i) + ", " + B.label(j) + ")");
    for (Index i = 0; i < A.dim(); ++i)
      for (Index j = 0; j < A.dim(); ++j)
        if (right_matrix(A.product(i, j)) != r_[j] * r_[i])
          throw Error("bimodule: right action is not multiplicative on (" + A.label(i) + ", " + A.label(j) + ")");
    for (Index i = 0; i < B.dim(); ++i)
      for (Index j = 0; j < A.dim(); ++j)
        if (l_[i] * r_[j] != r_[j] * l_[i])
          throw Error("bimodule: left and right actions do not commute on (" + B.label(i) + ", " + A.label(j) + ")");
  }

  friend bool operator==(const Bimodule& a, const Bimodule& b) {
    return same_algebra(a.left_, b.left_) && same_algebra(a.right_, b.right_) && a.dim_ == b.dim_ && a.l_ == b.l_ &&
           a.r_ == b.r_;
  }

 private:
  AlgebraPtr<K> left_;
  AlgebraPtr<K> right_;
  std::size_t dim_ = 0;
  std::vector<SparseMatrix<K>> l_;
  std::vector<SparseMatrix<K>> r_;
  bool projective_ = false;
};

// M ⊗_B N realized as the plain tensor modulo the balancing relations, plus
// the projection from the plain tensor and a section back into it.
template <class K>
struct TensorProduct {
  Bimodule<K> module;
  std::size_t plain_dim = 0;
  SparseMatrix<K> projection;   // dim(module) x plain_dim
  std::vector<Index> section;   // quotient basis k -> plain basis index
};

template <class K>
TensorProduct<K> tensor_over_detailed(const Bimodule<K>& m, const Bimodule<K>& n) {
  if (!same_algebra(m.right_algebra(), n.left_algebra()))
    throw AlgebraMismatch("tensor_over: the right algebra of the first factor is not the left algebra of the second");
  const auto& B = *m.right_algebra();
  std::size_t dm = m.dim(), dn = n.dim(), plain = dm * dn;
  Echelon<K> rel(plain);
  // Balancing for generators suffices: products of generators then balance too.
  for (Index g : B.generators()) {
    const auto& rm = m.right_action(g);
    const auto& ln = n.left_action(g);
    for (Index i = 0; i < dm; ++i) {
      const auto& mi_g = rm.column(i);
      for (Index j = 0; j < dn; ++j) {
        const auto& g_nj = ln.column(j);
        std::vector<Entry<K>> raw;
        for (auto& e : mi_g) raw.push_back({Index(e.index * dn + j), e.value});
        for (auto& e : g_nj) raw.push_back({Index(i * dn + e.index), -e.value});
        if (raw.empty()) continue;
        rel.insert(SparseVector<K>::from_unsorted(std::move(raw)));
      }
    }
  }
  auto rows = rel.rref();
  std::vector<std::int64_t> pos(plain, -1);
  std::vector<char> is_pivot(plain, 0);
  for (auto& r : rows) is_pivot[r.leading()] = 1;
  TensorProduct<K> t;
  t.plain_dim = plain;
  for (Index c = 0; c < plain; ++c)
    if (!is_pivot[c]) {
      pos[c] = static_cast<std::int64_t>(t.section.size());
      t.section.push_back(c);
    }
  std::size_t q = t.section.size();
  std::vector<SparseVector<K>> pcols(plain);
  for (Index c = 0; c < plain; ++c)
    if (!is_pivot[c]) pcols[c] = SparseVector<K>::unit(static_cast<Index>(pos[c]));
  for (auto& r : rows) {
    std::vector<Entry<K>> raw;
    for (auto& e : r)
      if (e.index != r.leading()) raw.push_back({static_cast<Index>(pos[e.index]), -e.value});
    pcols[r.leading()] = SparseVector<K>::from_unsorted(std::move(raw));
  }
  t.projection = SparseMatrix<K>::from_columns(q, std::move(pcols));

  auto act = [&](auto&& plain_image) {
    SparseMatrix<K> a(q, q);
    for (Index k = 0; k < q; ++k) a.set_column(k, t.projection.apply(plain_image(t.section[k])));
    return a;
  };
  std::vector<SparseMatrix<K>> l, r;
  for (Index i = 0; i < m.left_algebra()->dim(); ++i) {
    const auto& lm = m.left_action(i);
    l.push_back(act([&](Index c) {
      Index mi = c / dn, nj = c % dn;
      return lm.column(mi).remapped([&](Index x) { return Index(x * dn + nj); });
    }));
  }
  for (Index i = 0; i < n.right_algebra()->dim(); ++i) {
    const auto& rn = n.right_action(i);
    r.push_back(act([&](Index c) {
      Index mi = c / dn, nj = c % dn;
      return rn.column(nj).remapped([&](Index x) { return Index(mi * dn + x); });
    }));
  }
  t.module = Bimodule<K>::from_actions(m.left_algebra(), n.right_algebra(), q, std::move(l), std::move(r), false);
  return t;
}

template <class K>
Bimodule<K> tensor_over(const Bimodule<K>& m, const Bimodule<K>& n) {
  return tensor_over_detailed(m, n).module;
}

// Bimodule maps M -> N inside Hom_k(M, N); coordinate of f is
// (input i, output j) -> i * dim N + j.
template <class K>
Subspace<K> hom_bimodule(const Bimodule<K>& m, const Bimodule<K>& n) {
  if (!same_algebra(m.left_algebra(), n.left_algebra()) || !same_algebra(m.right_algebra(), n.right_algebra()))
    throw AlgebraMismatch("hom_bimodule: the two bimodules are over different algebra pairs");
  std::size_t dm = m.dim(), dn = n.dim();
  std::vector<Triplet<K>> t;
  Index row = 0;
  auto add_constraints = [&](const SparseMatrix<K>& act_m, const SparseMatrix<K>& act_n) {
    // f(act_m m_i) - act_n f(m_i) = 0, one row per (i, output j).
    for (Index i = 0; i < dm; ++i) {
      for (Index j = 0; j < dn; ++j) {
        for (auto& e : act_m.column(i)) t.push_back({Index(row + j), Index(e.index * dn + j), e.value});
      }
      for (Index jj = 0; jj < dn; ++jj)
        for (auto& e : act_n.column(jj)) t.push_back({Index(row + e.index), Index(i * dn + jj), -e.value});
      row += static_cast<Index>(dn);
    }
  };
  for (Index g : m.left_algebra()->generators()) add_constraints(m.left_action(g), n.left_action(g));
  for (Index g : m.right_algebra()->generators()) add_constraints(m.right_action(g), n.right_action(g));
  return kernel_basis(SparseMatrix<K>::from_triplets(row, dm * dn, t));
}

// Hom-space coordinate vector -> matrix (dim N x dim M).
template <class K>
SparseMatrix<K> hom_vector_to_matrix(const SparseVector<K>& f, std::size_t dm, std::size_t dn) {
  std::vector<Triplet<K>> t;
  for (auto& e : f) t.push_back({Index(e.index % dn), Index(e.index / dn), e.value});
  return SparseMatrix<K>::from_triplets(dn, dm, t);
}

// Bf ⊗ eA for f in the system of B and e in the system of A (given by index).
template <class K>
Bimodule<K> free_corner_bimodule(const AlgebraPtr<K>& B, std::size_t f_index, std::size_t e_index,
                                 const AlgebraPtr<K>& A) {
  if (f_index >= B->system().size()) throw NotInSystem("idempotent #" + std::to_string(f_index) + " of the left algebra");
  if (e_index >= A->system().size()) throw NotInSystem("idempotent #" + std::to_string(e_index) + " of the right algebra");
  const auto& f = B->system()[f_index];
  const auto& e = A->system()[e_index];
  std::vector<SparseVector<K>> bf, ea;
  for (Index i = 0; i < B->dim(); ++i) bf.push_back(B->multiply(SparseVector<K>::unit(i), f));
  for (Index i = 0; i < A->dim(); ++i) ea.push_back(A->multiply(e, SparseVector<K>::unit(i)));
  Subspace<K> U = Subspace<K>::from_spanning(B->dim(), bf);
  Subspace<K> V = Subspace<K>::from_spanning(A->dim(), ea);
  std::size_t du = U.dim(), dv = V.dim(), d = du * dv;
  auto to_vec = [](const std::vector<K>& c) { return SparseVector<K>::from_dense(c); };
  std::vector<SparseMatrix<K>> l, r;
  for (Index i = 0; i < B->dim(); ++i) {
    std::vector<Triplet<K>> t;
    for (Index u = 0; u < du; ++u) {
      auto img = to_vec(U.coordinates(B->multiply(SparseVector<K>::unit(i), U.basis()[u])));
      for (auto& x : img)
        for (Index v = 0; v < dv; ++v) t.push_back({Index(x.index * dv + v), Index(u * dv + v), x.value});
    }
    l.push_back(SparseMatrix<K>::from_triplets(d, d, t));
  }
  for (Index i = 0; i < A->dim(); ++i) {
    std::vector<Triplet<K>> t;
    for (Index v = 0; v < dv; ++v) {
      auto img = to_vec(V.coordinates(A->multiply(V.basis()[v], SparseVector<K>::unit(i))));
      for (auto& x : img)
        for (Index u = 0; u < du; ++u) t.push_back({Index(u * dv + x.index), Index(u * dv + v), x.value});
    }
    r.push_back(SparseMatrix<K>::from_triplets(d, d, t));
  }
  auto m = Bimodule<K>::from_actions(B, A, d, std::move(l), std::move(r), false);
  m.set_projective_certificate(true);
  return m;
}

// B ⊗ A, the free bimodule of rank one.
template <class K>
Bimodule<K> free_bimodule(const AlgebraPtr<K>& B, const AlgebraPtr<K>& A) {
  std::size_t db = B->dim(), da = A->dim(), d = db * da;
  std::vector<SparseMatrix<K>> l, r;
  for (Index i = 0; i < db; ++i) {
    std::vector<Triplet<K>> t;
    for (Index u = 0; u < db; ++u)
      for (auto& x : B->product(i, u))
        for (Index v = 0; v < da; ++v) t.push_back({Index(x.index * da + v), Index(u * da + v), x.value});
    l.push_back(SparseMatrix<K>::from_triplets(d, d, t));
  }
  for (Index i = 0; i < da; ++i) {
    std::vector<Triplet<K>> t;
    for (Index v = 0; v < da; ++v)
      for (auto& x : A->product(v, i))
        for (Index u = 0; u < db; ++u) t.push_back({Index(u * da + x.index), Index(u * da + v), x.value});
    r.push_back(SparseMatrix<K>::from_triplets(d, d, t));
  }
  auto m = Bimodule<K>::from_actions(B, A, d, std::move(l), std::move(r), false);
  m.set_projective_certificate(true);
  return m;
}

template <class K>
Bimodule<K> direct_sum(const Bimodule<K>& x, const Bimodule<K>& y) {
  if (!same_algebra(x.left_algebra(), y.left_algebra()) || !same_algebra(x.right_algebra(), y.right_algebra()))
    throw AlgebraMismatch("direct_sum: summands are over different algebra pairs");
  std::size_t dx = x.dim(), d = dx + y.dim();
  auto block = [&](const SparseMatrix<K>& a, const SparseMatrix<K>& b) {
    std::vector<Triplet<K>> t;
    for (auto& e : a.triplets()) t.push_back(e);
    for (auto& e : b.triplets()) t.push_back({Index(e.row + dx), Index(e.col + dx), e.value});
    return SparseMatrix<K>::from_triplets(d, d, t);
  };
  std::vector<SparseMatrix<K>> l, r;
  for (Index i = 0; i < x.left_algebra()->dim(); ++i) l.push_back(block(x.left_action(i), y.left_action(i)));
  for (Index i = 0; i < x.right_algebra()->dim(); ++i) r.push_back(block(x.right_action(i), y.right_action(i)));
  auto m = Bimodule<K>::from_actions(x.left_algebra(), x.right_algebra(), d, std::move(l), std::move(r), false);
  m.set_projective_certificate(x.projective_certificate() && y.projective_certificate());
  return m;
}

// Restriction of scalars along an algebra map given by images of basis
// elements: makes a B-A bimodule into a B'-A' bimodule. Used to view corner
// bimodules of a square as bimodules over the product algebra A x B.
template <class K>
Bimodule<K> restrict_scalars(const Bimodule<K>& m, const AlgebraPtr<K>& new_left,
                             const std::vector<SparseVector<K>>& left_images, const AlgebraPtr<K>& new_right,
                             const std::vector<SparseVector<K>>& right_images) {
  std::vector<SparseMatrix<K>> l, r;
  for (Index i = 0; i < new_left->dim(); ++i) l.push_back(m.left_matrix(left_images[i]));
  for (Index i = 0; i < new_right->dim(); ++i) r.push_back(m.right_matrix(right_images[i]));
  auto out = Bimodule<K>::from_actions(new_left, new_right, m.dim(), std::move(l), std::move(r), false);
  out.set_projective_certificate(m.projective_certificate());
  return out;
}

}  // namespace hhcat
