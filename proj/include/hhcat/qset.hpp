#pragma once

#include <string>
#include <vector>

#include "hhcat/algebra.hpp"
#include "hhcat/bimodule.hpp"
#include "hhcat/errors.hpp"

namespace hhcat {

// A simply laced quiver with an algebra at every vertex and a nonzero
// A_t(a)-A_s(a) bimodule on every arrow; compositions are zero.
template <class K>
class QSet {
 public:
  QSet() = default;
  QSet(Quiver q, std::vector<AlgebraPtr<K>> algebras, std::vector<Bimodule<K>> bimodules, bool allow_zero = false)
      : quiver_(std::move(q)), algebras_(std::move(algebras)), bimodules_(std::move(bimodules)) {
    validate(allow_zero);
  }

  const Quiver& quiver() const { return quiver_; }
  const AlgebraPtr<K>& algebra(Index x) const { return algebras_.at(x); }
  const Bimodule<K>& bimodule(Index a) const { return bimodules_.at(a); }
  const std::vector<AlgebraPtr<K>>& algebras() const { return algebras_; }
  const std::vector<Bimodule<K>>& bimodules() const { return bimodules_; }

 private:
  void validate(bool allow_zero) const {
    if (algebras_.size() != quiver_.num_vertices()) throw InvalidQSet("need exactly one algebra per vertex");
    if (bimodules_.size() != quiver_.num_arrows()) throw InvalidQSet("need exactly one bimodule per arrow");
    for (Index a = 0; a < quiver_.num_arrows(); ++a) {
      const Arrow& ar = quiver_.arrow(a);
      if (ar.source == ar.target) throw InvalidQSet("arrow '" + ar.label + "' is a loop");
      for (Index b = 0; b < a; ++b)
        if (quiver_.arrow(b).source == ar.source && quiver_.arrow(b).target == ar.target)
          throw InvalidQSet("arrows '" + quiver_.arrow(b).label + "' and '" + ar.label + "' are parallel");
      const auto& m = bimodules_[a];
      if (!allow_zero && m.dim() == 0) throw InvalidQSet("bimodule on arrow '" + ar.label + "' is zero");
      if (!same_algebra(m.left_algebra(), algebras_[ar.target]) || !same_algebra(m.right_algebra(), algebras_[ar.source]))
        throw InvalidQSet("bimodule on arrow '" + ar.label + "' is not over (A_" + quiver_.vertex_label(ar.target) +
                          ", A_" + quiver_.vertex_label(ar.source) + ")");
    }
  }

  Quiver quiver_;
  std::vector<AlgebraPtr<K>> algebras_;
  std::vector<Bimodule<K>> bimodules_;
};

// Λ_Δ = A ⊕ M with M·M = 0. Basis: the vertex algebras in vertex order, then
// the arrow bimodules in arrow order.
template <class K>
struct LambdaAlgebra {
  AlgebraPtr<K> algebra;               // system = units of the vertex algebras
  std::vector<SparseVector<K>> fine;   // union of the vertex algebras' systems
  std::vector<Index> vertex_offset;
  std::vector<Index> arrow_offset;

  // Origin of a basis element: vertex x (is_arrow false) or arrow a.
  struct Origin {
    bool is_arrow;
    Index index;
    Index local;
  };
  std::vector<Origin> origin;
};

template <class K>
LambdaAlgebra<K> assemble_lambda(const QSet<K>& d) {
  const Quiver& q = d.quiver();
  LambdaAlgebra<K> out;
  std::vector<std::string> labels;
  Index off = 0;
  for (Index x = 0; x < q.num_vertices(); ++x) {
    out.vertex_offset.push_back(off);
    const auto& A = *d.algebra(x);
    for (Index i = 0; i < A.dim(); ++i) {
      labels.push_back(q.vertex_label(x) + ":" + A.label(i));
      out.origin.push_back({false, x, i});
    }
    off += static_cast<Index>(A.dim());
  }
  for (Index a = 0; a < q.num_arrows(); ++a) {
    out.arrow_offset.push_back(off);
    for (Index i = 0; i < d.bimodule(a).dim(); ++i) {
      labels.push_back(q.arrow(a).label + ":m" + std::to_string(i + 1));
      out.origin.push_back({true, a, i});
    }
    off += static_cast<Index>(d.bimodule(a).dim());
  }
  std::size_t n = off;
  auto shift = [](const SparseVector<K>& v, Index by) { return v.remapped([by](Index i) { return Index(i + by); }); };
  std::vector<SparseVector<K>> table(n * n);
  for (Index x = 0; x < q.num_vertices(); ++x) {
    const auto& A = *d.algebra(x);
    Index o = out.vertex_offset[x];
    for (Index i = 0; i < A.dim(); ++i)
      for (Index j = 0; j < A.dim(); ++j) table[(o + i) * n + (o + j)] = shift(A.product(i, j), o);
  }
  for (Index a = 0; a < q.num_arrows(); ++a) {
    const auto& m = d.bimodule(a);
    Index om = out.arrow_offset[a];
    Index ot = out.vertex_offset[q.arrow(a).target];
    Index os = out.vertex_offset[q.arrow(a).source];
    for (Index i = 0; i < m.left_algebra()->dim(); ++i)
      for (Index j = 0; j < m.dim(); ++j) table[(ot + i) * n + (om + j)] = shift(m.left_action(i).column(j), om);
    for (Index i = 0; i < m.right_algebra()->dim(); ++i)
      for (Index j = 0; j < m.dim(); ++j) table[(om + j) * n + (os + i)] = shift(m.right_action(i).column(j), om);
  }
  SparseVector<K> unit;
  std::vector<SparseVector<K>> system;
  for (Index x = 0; x < q.num_vertices(); ++x) {
    system.push_back(shift(d.algebra(x)->unit(), out.vertex_offset[x]));
    unit = unit + system.back();
    for (auto& e : d.algebra(x)->system()) out.fine.push_back(shift(e, out.vertex_offset[x]));
  }
  out.algebra = algebra_from_structure_constants<K>(labels, std::move(table), unit, system);
  return out;
}

// The round-trip Q-set x -> y -> x with algebras A at x and B at y.
template <class K>
QSet<K> round_trip_qset(const AlgebraPtr<K>& A, const AlgebraPtr<K>& B, const Bimodule<K>& M, const Bimodule<K>& N,
                        bool allow_zero = false) {
  Quiver q({"x", "y"}, {{"m", 0, 1}, {"n", 1, 0}});
  return QSet<K>(q, {A, B}, {M, N}, allow_zero);
}

// Square algebra data. alpha is dim A x dim(N ⊗_B M) and beta is
// dim B x dim(M ⊗_A N), both on the tensor bases chosen by tensor_over.
template <class K>
struct SquareData {
  AlgebraPtr<K> A, B;
  Bimodule<K> M;  // B-A
  Bimodule<K> N;  // A-B
  SparseMatrix<K> alpha;
  SparseMatrix<K> beta;
};

template <class K>
SquareData<K> zero_square(const AlgebraPtr<K>& A, const AlgebraPtr<K>& B, const Bimodule<K>& M, const Bimodule<K>& N) {
  std::size_t t1 = tensor_over(N, M).dim(), t2 = tensor_over(M, N).dim();
  return {A, B, M, N, SparseMatrix<K>::zero(A->dim(), t1), SparseMatrix<K>::zero(B->dim(), t2)};
}

// Basis A, B, M, N (same layout as assemble_lambda on the round-trip Q-set).
template <class K>
AlgebraPtr<K> assemble_square(const SquareData<K>& sq) {
  const auto& A = *sq.A;
  const auto& B = *sq.B;
  if (!same_algebra(sq.M.left_algebra(), sq.B) || !same_algebra(sq.M.right_algebra(), sq.A) ||
      !same_algebra(sq.N.left_algebra(), sq.A) || !same_algebra(sq.N.right_algebra(), sq.B))
    throw AlgebraMismatch("square: M must be a B-A bimodule and N an A-B bimodule");
  auto nm = tensor_over_detailed(sq.N, sq.M);
  auto mn = tensor_over_detailed(sq.M, sq.N);
  if (sq.alpha.rows() != A.dim() || sq.alpha.cols() != nm.module.dim())
    throw Error("square: alpha has the wrong shape");
  if (sq.beta.rows() != B.dim() || sq.beta.cols() != mn.module.dim()) throw Error("square: beta has the wrong shape");
  Index oa = 0, ob = Index(A.dim()), om = ob + Index(B.dim()), on = om + Index(sq.M.dim());
  std::size_t n = on + sq.N.dim();
  auto shift = [](const SparseVector<K>& v, Index by) { return v.remapped([by](Index i) { return Index(i + by); }); };
  std::vector<SparseVector<K>> table(n * n);
  for (Index i = 0; i < A.dim(); ++i)
    for (Index j = 0; j < A.dim(); ++j) table[(oa + i) * n + oa + j] = shift(A.product(i, j), oa);
  for (Index i = 0; i < B.dim(); ++i)
    for (Index j = 0; j < B.dim(); ++j) table[(ob + i) * n + ob + j] = shift(B.product(i, j), ob);
  auto actions = [&](const Bimodule<K>& m, Index left_off, Index right_off, Index self) {
    for (Index i = 0; i < m.left_algebra()->dim(); ++i)
      for (Index j = 0; j < m.dim(); ++j) table[(left_off + i) * n + self + j] = shift(m.left_action(i).column(j), self);
    for (Index i = 0; i < m.right_algebra()->dim(); ++i)
      for (Index j = 0; j < m.dim(); ++j) table[(self + j) * n + right_off + i] = shift(m.right_action(i).column(j), self);
  };
  actions(sq.M, ob, oa, om);
  actions(sq.N, oa, ob, on);
  std::size_t dm = sq.M.dim(), dN = sq.N.dim();
  SparseMatrix<K> alpha_plain = sq.alpha * nm.projection;  // on n_i ⊗ m_j, index i * dm + j
  SparseMatrix<K> beta_plain = sq.beta * mn.projection;    // on m_i ⊗ n_j, index i * dN + j
  for (Index i = 0; i < dN; ++i)
    for (Index j = 0; j < dm; ++j) table[(on + i) * n + om + j] = shift(alpha_plain.column(i * dm + j), oa);
  for (Index i = 0; i < dm; ++i)
    for (Index j = 0; j < dN; ++j) table[(om + i) * n + on + j] = shift(beta_plain.column(i * dN + j), ob);

  std::vector<std::string> labels;
  for (auto& l : A.labels()) labels.push_back("x:" + l);
  for (auto& l : B.labels()) labels.push_back("y:" + l);
  for (Index i = 0; i < dm; ++i) labels.push_back("m:m" + std::to_string(i + 1));
  for (Index i = 0; i < dN; ++i) labels.push_back("n:m" + std::to_string(i + 1));
  auto ua = shift(A.unit(), oa), ub = shift(B.unit(), ob);
  try {
    return algebra_from_structure_constants<K>(labels, std::move(table), ua + ub, {ua, ub});
  } catch (const NotAssociative& e) {
    std::string msg = e.what();
    throw AssociativityViolated("witness " + msg.substr(msg.find(": ") + 2));
  }
}

// Pairs (α, β) of bimodule maps α: N ⊗_B M -> A and β: M ⊗_A N -> B with
// β(m⊗n)m' = mα(n⊗m') and α(n⊗m)n' = nβ(m⊗n'). Coordinates: α entry
// (input i, output j) at i * dim A + j, then β entries likewise after all of α.
template <class K>
struct AssociativitySolutions {
  Subspace<K> space;
  std::size_t alpha_inputs = 0;  // dim N ⊗_B M
  std::size_t beta_inputs = 0;   // dim M ⊗_A N

  SquareData<K> square(const AlgebraPtr<K>& A, const AlgebraPtr<K>& B, const Bimodule<K>& M, const Bimodule<K>& N,
                       const SparseVector<K>& v) const {
    std::size_t da = A->dim(), db = B->dim(), off = alpha_inputs * da;
    std::vector<Triplet<K>> ta, tb;
    for (auto& e : v) {
      if (e.index < off)
        ta.push_back({Index(e.index % da), Index(e.index / da), e.value});
      else
        tb.push_back({Index((e.index - off) % db), Index((e.index - off) / db), e.value});
    }
    return {A, B, M, N, SparseMatrix<K>::from_triplets(da, alpha_inputs, ta),
            SparseMatrix<K>::from_triplets(db, beta_inputs, tb)};
  }
};

template <class K>
AssociativitySolutions<K> solve_associativity(const AlgebraPtr<K>& A, const AlgebraPtr<K>& B, const Bimodule<K>& M,
                                              const Bimodule<K>& N) {
  auto nm = tensor_over_detailed(N, M);  // A-A
  auto mn = tensor_over_detailed(M, N);  // B-B
  std::size_t da = A->dim(), db = B->dim(), dm = M.dim(), dN = N.dim();
  std::size_t t1 = nm.module.dim(), t2 = mn.module.dim();
  Index off = Index(t1 * da);
  std::size_t unknowns = t1 * da + t2 * db;
  std::vector<Triplet<K>> rows;
  Index row = 0;

  // f(act_t t_i) = act_alg f(t_i) for f with coordinates base + i * d + j.
  auto bimodule_map = [&](const Bimodule<K>& T, const AlgebraPtr<K>& alg, Index base) {
    std::size_t d = alg->dim(), dt = T.dim();
    auto emit = [&](const SparseMatrix<K>& act_t, Index g, bool left) {
      for (Index i = 0; i < dt; ++i) {
        // f(act_t t_i) = Σ_k (act_t)_{k i} f(t_k)
        for (auto& e : act_t.column(i))
          for (Index j = 0; j < d; ++j) rows.push_back({Index(row + j), Index(base + e.index * d + j), e.value});
        // minus g f(t_i) or f(t_i) g: f(t_i) = Σ_j f_ij b_j
        for (Index j = 0; j < d; ++j)
          for (auto& e : (left ? alg->product(g, j) : alg->product(j, g)))
            rows.push_back({Index(row + e.index), Index(base + i * d + j), -e.value});
        row += Index(d);
      }
    };
    for (Index g : alg->generators()) {
      emit(T.left_action(g), g, true);
      emit(T.right_action(g), g, false);
    }
  };
  bimodule_map(nm.module, A, 0);
  bimodule_map(mn.module, B, off);

  // β(m_i⊗n_j) m_k - m_i α(n_j⊗m_k) = 0 in M.
  for (Index i = 0; i < dm; ++i)
    for (Index j = 0; j < dN; ++j)
      for (Index k = 0; k < dm; ++k) {
        for (auto& p : mn.projection.column(i * dN + j))
          for (Index b = 0; b < db; ++b)
            for (auto& e : M.left_action(b).column(k))
              rows.push_back({Index(row + e.index), Index(off + p.index * db + b), p.value * e.value});
        for (auto& p : nm.projection.column(j * dm + k))
          for (Index a = 0; a < da; ++a)
            for (auto& e : M.right_action(a).column(i))
              rows.push_back({Index(row + e.index), Index(p.index * da + a), -(p.value * e.value)});
        row += Index(dm);
      }
  // α(n_i⊗m_j) n_k - n_i β(m_j⊗n_k) = 0 in N.
  for (Index i = 0; i < dN; ++i)
    for (Index j = 0; j < dm; ++j)
      for (Index k = 0; k < dN; ++k) {
        for (auto& p : nm.projection.column(i * dm + j))
          for (Index a = 0; a < da; ++a)
            for (auto& e : N.left_action(a).column(k))
              rows.push_back({Index(row + e.index), Index(p.index * da + a), p.value * e.value});
        for (auto& p : mn.projection.column(j * dN + k))
          for (Index b = 0; b < db; ++b)
            for (auto& e : N.right_action(b).column(i))
              rows.push_back({Index(row + e.index), Index(off + p.index * db + b), -(p.value * e.value)});
        row += Index(dN);
      }
  return {kernel_basis(SparseMatrix<K>::from_triplets(row, unknowns, rows)), t1, t2};
}

}  // namespace hhcat
