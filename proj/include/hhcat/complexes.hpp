#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hhcat/algebra.hpp"
#include "hhcat/errors.hpp"
#include "hhcat/exactla.hpp"
#include "hhcat/qset.hpp"
#include "hhcat/trajectories.hpp"

namespace hhcat {

inline constexpr std::size_t kDefaultBudget = 100'000'000;

// The k-category with objects the idempotents of a system and morphisms
// C(x -> y) = e_y Λ e_x, with bases and composition tables.
template <class K>
class HomCategory {
 public:
  struct Factorization {
    Index p, q;
    K c;
  };

  static std::shared_ptr<const HomCategory> from_algebra(AlgebraPtr<K> alg, std::vector<SparseVector<K>> system,
                                                         std::vector<std::string> labels = {}) {
    auto c = std::make_shared<HomCategory>();
    c->alg_ = std::move(alg);
    c->system_ = std::move(system);
    std::size_t n = c->system_.size();
    if (labels.empty())
      for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    c->labels_ = std::move(labels);
    c->hom_.resize(n * n);
    for (Index y = 0; y < n; ++y)
      for (Index x = 0; x < n; ++x) c->hom_[y * n + x] = c->alg_->corner(c->system_[y], c->system_[x]);
    c->prod_.resize(n * n * n);
    c->inv_.resize(n * n * n);
    for (Index y = 0; y < n; ++y)
      for (Index x = 0; x < n; ++x)
        for (Index w = 0; w < n; ++w) {
          const auto& yx = c->hom(y, x);
          const auto& xw = c->hom(x, w);
          const auto& yw = c->hom(y, w);
          auto& pr = c->prod_[c->key(y, x, w)];
          auto& inv = c->inv_[c->key(y, x, w)];
          pr.resize(yx.dim() * xw.dim());
          inv.resize(yw.dim());
          for (Index p = 0; p < yx.dim(); ++p)
            for (Index q = 0; q < xw.dim(); ++q) {
              auto v = c->alg_->multiply(yx.basis()[p], xw.basis()[q]);
              if (v.empty()) continue;
              auto local = SparseVector<K>::from_dense(yw.coordinates(v));
              for (auto& e : local) inv[e.index].push_back({p, q, e.value});
              pr[p * xw.dim() + q] = std::move(local);
            }
        }
    return c;
  }

  std::size_t size() const { return system_.size(); }
  const std::string& label(Index x) const { return labels_[x]; }
  const AlgebraPtr<K>& algebra() const { return alg_; }
  const std::vector<SparseVector<K>>& system() const { return system_; }
  // C(x -> y) = e_y Λ e_x.
  const Subspace<K>& hom(Index y, Index x) const { return hom_[y * size() + x]; }
  std::size_t dim(Index y, Index x) const { return hom(y, x).dim(); }
  // p in C(x -> y) times q in C(w -> x), in coordinates of C(w -> y).
  const SparseVector<K>& product(Index y, Index x, Index w, Index p, Index q) const {
    return prod_[key(y, x, w)][p * dim(x, w) + q];
  }
  // All (p, q, c) with c the coefficient of basis element r of C(w -> y) in p q.
  const std::vector<Factorization>& factorizations(Index y, Index x, Index w, Index r) const {
    return inv_[key(y, x, w)][r];
  }
  // Product of general elements in local coordinates.
  SparseVector<K> compose(Index y, Index x, Index w, const SparseVector<K>& u, const SparseVector<K>& v) const {
    std::vector<Entry<K>> raw;
    for (auto& a : u)
      for (auto& b : v)
        for (auto& e : product(y, x, w, a.index, b.index)) raw.push_back({e.index, a.value * b.value * e.value});
    return SparseVector<K>::from_unsorted(std::move(raw));
  }

 private:
  std::size_t key(Index y, Index x, Index w) const { return (y * size() + x) * size() + w; }

  AlgebraPtr<K> alg_;
  std::vector<SparseVector<K>> system_;
  std::vector<std::string> labels_;
  std::vector<Subspace<K>> hom_;
  std::vector<std::vector<SparseVector<K>>> prod_;
  std::vector<std::vector<std::vector<Factorization>>> inv_;
};

template <class K>
using CategoryPtr = std::shared_ptr<const HomCategory<K>>;

// Block Hom_k(C(v_1 -> v_0) ⊗ ... ⊗ C(v_n -> v_{n-1}), C(v_n -> v_0)) for an
// object sequence v_0 .. v_n. Coordinates: tuple index * out_dim + output,
// tuples row-major with the leftmost factor slowest.
struct Block {
  std::string label;
  std::vector<Index> objects;
  std::optional<Trajectory> trajectory;
  std::vector<std::size_t> factor_dims;
  std::size_t tuples = 1;
  std::size_t out_dim = 0;
  std::size_t dim = 0;
  std::size_t offset = 0;
};

struct CochainSpace {
  std::vector<Block> blocks;
  std::size_t dim = 0;
  std::map<std::vector<Index>, Index> by_objects;

  const Block* find(const std::vector<Index>& obj) const {
    auto it = by_objects.find(obj);
    return it == by_objects.end() ? nullptr : &blocks[it->second];
  }
};

template <class K>
Block make_block(const HomCategory<K>& c, std::vector<Index> obj, std::string label) {
  Block b;
  b.label = std::move(label);
  for (std::size_t i = 1; i < obj.size(); ++i) {
    b.factor_dims.push_back(c.dim(obj[i - 1], obj[i]));
    b.tuples *= b.factor_dims.back();
  }
  b.out_dim = c.dim(obj.front(), obj.back());
  b.dim = b.tuples * b.out_dim;
  b.objects = std::move(obj);
  return b;
}

// Adds nonzero blocks in the given order.
inline CochainSpace make_space(std::vector<Block> blocks) {
  CochainSpace s;
  for (auto& b : blocks) {
    if (b.dim == 0) continue;
    b.offset = s.dim;
    s.dim += b.dim;
    s.by_objects.emplace(b.objects, static_cast<Index>(s.blocks.size()));
    s.blocks.push_back(std::move(b));
  }
  return s;
}

template <class K>
struct CochainComplex {
  CategoryPtr<K> category;
  std::optional<Quiver> quiver;
  std::vector<CochainSpace> spaces;  // degrees 0 .. top
  std::vector<SparseMatrix<K>> d;    // d[n] : degree n -> degree n + 1
  std::size_t n_max = 0;             // cohomology is wanted in degrees 0 .. n_max
  bool truncated = false;            // degree n_max has no outgoing differential

  std::size_t top() const { return spaces.size() - 1; }
  std::size_t dim(std::size_t n) const { return n < spaces.size() ? spaces[n].dim : 0; }
};

// Decides whether the component of d from block tau into block sigma is kept.
using PairFilter = std::function<bool(const Block& tau, const Block& sigma)>;

namespace detail {

// d restricted to the given blocks, straight from the Hochschild formula:
// every sigma in degree n + 1 receives from each tau = sigma minus one object.
template <class K>
SparseMatrix<K> assemble_differential(const HomCategory<K>& c, const CochainSpace& src, const CochainSpace& dst,
                                      std::size_t n, const PairFilter& keep, std::size_t budget) {
  MatrixBuilder<K> mb(dst.dim, src.dim);
  const K one(1), minus_one(-1);
  for (const Block& sg : dst.blocks) {
    const auto& obj = sg.objects;  // n + 2 objects
    const auto& e = sg.factor_dims;
    for (std::size_t j = 0; j <= n + 1; ++j) {
      std::vector<Index> tobj = obj;
      tobj.erase(tobj.begin() + j);
      const Block* tp = src.find(tobj);
      if (!tp || (keep && !keep(*tp, sg))) continue;
      const Block& t = *tp;
      if (j == 0) {
        // x_1 f(x_2 .. x_{n+1})
        for (Index s1 = 0; s1 < e[0]; ++s1)
          for (Index tt = 0; tt < t.tuples; ++tt)
            for (Index o = 0; o < t.out_dim; ++o)
              for (auto& pe : c.product(obj[0], obj[1], obj[n + 1], s1, o))
                mb.add(Index(sg.offset + (s1 * t.tuples + tt) * sg.out_dim + pe.index), Index(t.offset + tt * t.out_dim + o),
                       pe.value);
      } else if (j == n + 1) {
        // (-1)^{n+1} f(x_1 .. x_n) x_{n+1}
        const K& sign = (n + 1) % 2 ? minus_one : one;
        for (Index tt = 0; tt < t.tuples; ++tt)
          for (Index sl = 0; sl < e[n]; ++sl)
            for (Index o = 0; o < t.out_dim; ++o)
              for (auto& pe : c.product(obj[0], obj[n], obj[n + 1], o, sl))
                mb.add(Index(sg.offset + (tt * e[n] + sl) * sg.out_dim + pe.index), Index(t.offset + tt * t.out_dim + o),
                       sign * pe.value);
      } else {
        // (-1)^j f(.. x_j x_{j+1} ..)
        const K& sign = j % 2 ? minus_one : one;
        std::size_t hi_count = 1, lo_count = 1;
        for (std::size_t k = 0; k + 1 < j; ++k) hi_count *= e[k];
        for (std::size_t k = j + 1; k < e.size(); ++k) lo_count *= e[k];
        std::size_t dj = t.factor_dims[j - 1], ej0 = e[j - 1], ej1 = e[j];
        std::size_t out = t.out_dim;
        for (Index r = 0; r < dj; ++r) {
          const auto& fs = c.factorizations(obj[j - 1], obj[j], obj[j + 1], r);
          if (fs.empty()) continue;
          for (std::size_t hi = 0; hi < hi_count; ++hi)
            for (auto& f : fs) {
              K v = sign * f.c;
              std::size_t tbase = (hi * dj + r) * lo_count, sbase = (hi * ej0 * ej1 + f.p * ej1 + f.q) * lo_count;
              for (std::size_t lo = 0; lo < lo_count; ++lo)
                for (Index o = 0; o < out; ++o)
                  mb.add(Index(sg.offset + (sbase + lo) * out + o), Index(t.offset + (tbase + lo) * out + o), v);
            }
        }
      }
    }
    if (mb.pending() > budget)
      throw BudgetExceeded("differential from degree " + std::to_string(n) + " needs more than " +
                           std::to_string(budget) + " stored entries");
  }
  return mb.build();
}

}  // namespace detail

// Builds degrees 0 .. n_max + 1 (so degree n_max is exact) from a block
// enumerator; if only the extra top degree overflows the budget the complex is
// kept and flagged truncated.
template <class K>
CochainComplex<K> build_complex(CategoryPtr<K> cat, const std::function<CochainSpace(std::size_t)>& space_at,
                                std::size_t n_max, std::size_t budget, const PairFilter& keep = {},
                                std::optional<Quiver> quiver = std::nullopt) {
  CochainComplex<K> c;
  c.category = cat;
  c.quiver = std::move(quiver);
  c.n_max = n_max;
  std::size_t total = 0;
  for (std::size_t n = 0; n <= n_max + 1; ++n) {
    try {
      CochainSpace s = space_at(n);
      total += s.dim;
      if (total > budget)
        throw BudgetExceeded("cochain spaces up to degree " + std::to_string(n) + " have dimension " +
                             std::to_string(total) + ", over the budget " + std::to_string(budget));
      if (n > 0) {
        auto dn = detail::assemble_differential(*cat, c.spaces[n - 1], s, n - 1, keep, budget);
        c.d.push_back(std::move(dn));
      }
      c.spaces.push_back(std::move(s));
    } catch (const BudgetExceeded&) {
      if (n <= n_max) throw;
      c.truncated = true;
      break;
    }
  }
  for (std::size_t n = 0; n + 1 < c.d.size(); ++n)
    if (!(c.d[n + 1] * c.d[n]).is_zero())
      throw CompositionNotZero("d" + std::to_string(n + 1) + " d" + std::to_string(n) + " != 0");
  return c;
}

namespace detail {

// All object sequences of length n + 1 with nonzero factors and output, in
// lexicographic order.
template <class K>
CochainSpace all_sequences(const HomCategory<K>& c, std::size_t n) {
  std::vector<Block> blocks;
  std::vector<Index> obj;
  auto rec = [&](auto&& self) -> void {
    if (obj.size() == n + 1) {
      if (c.dim(obj.front(), obj.back()) == 0) return;
      std::string label;
      for (auto v : obj) label += (label.empty() ? "" : ",") + c.label(v);
      blocks.push_back(make_block(c, obj, label));
      return;
    }
    for (Index v = 0; v < c.size(); ++v) {
      if (!obj.empty() && c.dim(obj.back(), v) == 0) continue;
      obj.push_back(v);
      self(self);
      obj.pop_back();
    }
  };
  rec(rec);
  return make_space(std::move(blocks));
}

}  // namespace detail

// J•(Λ) relative to the separable subalgebra spanned by `system`.
template <class K>
CochainComplex<K> separable_complex(const AlgebraPtr<K>& alg, const std::vector<SparseVector<K>>& system,
                                    std::size_t n_max, std::size_t budget = kDefaultBudget) {
  auto cat = HomCategory<K>::from_algebra(alg, system);
  return build_complex<K>(cat, [&](std::size_t n) { return detail::all_sequences(*cat, n); }, n_max, budget);
}

// The absolute Hochschild complex (D = k).
template <class K>
CochainComplex<K> bar_complex(const AlgebraPtr<K>& alg, std::size_t n_max, std::size_t budget = kDefaultBudget) {
  std::size_t d = alg->dim(), need = d;
  for (std::size_t n = 0; n <= n_max; ++n) {
    need *= d;
    if (need > budget)
      throw BudgetExceeded("the bar complex up to degree " + std::to_string(n_max + 1) + " needs cochain spaces of size " +
                           std::to_string(d) + "^" + std::to_string(n + 2) + ", over the budget " +
                           std::to_string(budget));
  }
  return separable_complex<K>(alg, {alg->unit()}, n_max, budget);
}

template <class K>
struct CohomologyDegree {
  std::size_t dim = 0;
  bool exact = true;  // false: degree has no outgoing differential, dim is an upper bound
  std::vector<SparseVector<K>> reps;
};

template <class K>
struct CohomologyResult {
  std::vector<CohomologyDegree<K>> degrees;
  bool truncated = false;
  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> v;
    for (auto& d : degrees) v.push_back(d.dim);
    return v;
  }
};

template <class K>
CohomologyResult<K> cohomology(const CochainComplex<K>& c, bool with_reps = false) {
  CohomologyResult<K> out;
  out.truncated = c.truncated;
  std::vector<std::size_t> ranks;
  for (auto& m : c.d) ranks.push_back(rank(m));
  for (std::size_t n = 0; n <= c.n_max && n < c.spaces.size(); ++n) {
    CohomologyDegree<K> h;
    std::size_t in = n > 0 ? ranks[n - 1] : 0;
    h.exact = n < c.d.size();
    h.dim = c.spaces[n].dim - in - (h.exact ? ranks[n] : 0);
    if (with_reps && h.exact) {
      auto z = kernel_basis(c.d[n]);
      Echelon<K> e(c.spaces[n].dim);
      if (n > 0)
        for (auto& col : c.d[n - 1].columns()) e.insert(col);
      for (auto& v : z.basis())
        if (e.insert(v)) h.reps.push_back(v);
      if (h.reps.size() != h.dim) throw ConsistencyFailure("cohomology representatives disagree with ranks");
    }
    out.degrees.push_back(std::move(h));
  }
  return out;
}

template <class K>
CohomologyResult<K> bar_hochschild(const AlgebraPtr<K>& alg, std::size_t n_max, std::size_t budget = kDefaultBudget) {
  return cohomology(bar_complex(alg, n_max, budget));
}

// Λ_Δ with its units as system, viewed as a category over the vertices.
template <class K>
CategoryPtr<K> qset_category(const QSet<K>& d) {
  auto lam = assemble_lambda(d);
  return HomCategory<K>::from_algebra(lam.algebra, lam.algebra->system(), d.quiver().vertices());
}

namespace detail {

template <class K>
CochainSpace trajectory_space(const HomCategory<K>& c, const Quiver& q, const std::vector<QPath>& paths,
                              std::size_t n) {
  std::vector<Block> blocks;
  for (auto& w : paths)
    for (auto& t : trajectories(w, n)) {
      auto b = make_block(c, t.objects(q), t.label(q));
      b.trajectory = t;
      blocks.push_back(std::move(b));
    }
  return make_space(std::move(blocks));
}

inline bool same_path(const Block& a, const Block& b) { return a.trajectory->path == b.trajectory->path; }

}  // namespace detail

// J•(Λ_Δ) relative to D = ×k 1_{A_x}, blocks ordered by path then trajectory.
template <class K>
CochainComplex<K> relative_complex(const QSet<K>& d, std::size_t n_max, std::size_t budget = kDefaultBudget) {
  auto cat = qset_category(d);
  const Quiver& q = d.quiver();
  auto paths = enumerate_paths(q, n_max + 1);
  return build_complex<K>(
      cat, [&](std::size_t n) { return detail::trajectory_space(*cat, q, paths.all, n); }, n_max, budget, {}, q);
}

// K_ω•: trajectories over ω with the τ₀⁺ part of d.
template <class K>
CochainComplex<K> along_path_complex(const CategoryPtr<K>& cat, const Quiver& q, const QPath& w, std::size_t n_max,
                                     std::size_t budget = kDefaultBudget) {
  std::vector<QPath> one{w};
  return build_complex<K>(
      cat, [&](std::size_t n) { return detail::trajectory_space(*cat, q, one, n); }, n_max, budget, detail::same_path,
      q);
}

template <class K>
CochainComplex<K> along_path_complex(const QSet<K>& d, const QPath& w, std::size_t n_max,
                                     std::size_t budget = kDefaultBudget) {
  return along_path_complex(qset_category(d), d.quiver(), w, n_max, budget);
}

// Degreewise block selection between two spaces whose blocks are a subset of
// the other's: returns the matrix of the inclusion sub -> full.
inline std::vector<Index> block_positions(const CochainSpace& full, const CochainSpace& sub) {
  std::vector<Index> pos;
  for (auto& b : sub.blocks) {
    const Block* f = full.find(b.objects);
    if (!f) throw ConsistencyFailure("block " + b.label + " is missing from the ambient complex");
    for (std::size_t i = 0; i < b.dim; ++i) pos.push_back(Index(f->offset + i));
  }
  return pos;
}

template <class K>
SparseMatrix<K> inclusion_matrix(const CochainSpace& full, const CochainSpace& sub) {
  auto pos = block_positions(full, sub);
  std::vector<SparseVector<K>> cols;
  for (auto p : pos) cols.push_back(SparseVector<K>::unit(p));
  return SparseMatrix<K>::from_columns(full.dim, std::move(cols));
}

template <class K>
struct NoncycleSplit {
  CochainComplex<K> D;                       // non-cycle subcomplex
  CochainComplex<K> C;                       // cycle blocks with d'
  std::vector<SparseMatrix<K>> inclusion;    // D^n -> J^n
  std::vector<SparseMatrix<K>> projection;   // J^n -> C^n
};

template <class K>
NoncycleSplit<K> split_noncycle(const CochainComplex<K>& J) {
  if (!J.quiver) throw Error("split_noncycle needs a complex built over a quiver");
  auto select = [&](bool cycles) {
    CochainComplex<K> c;
    c.category = J.category;
    c.quiver = J.quiver;
    c.n_max = J.n_max;
    c.truncated = J.truncated;
    for (auto& s : J.spaces) {
      std::vector<Block> bs;
      for (auto b : s.blocks)
        if (b.trajectory->path.is_cycle() == cycles) bs.push_back(std::move(b));
      c.spaces.push_back(make_space(std::move(bs)));
    }
    return c;
  };
  NoncycleSplit<K> out{select(false), select(true), {}, {}};
  for (std::size_t n = 0; n < J.spaces.size(); ++n) {
    out.inclusion.push_back(inclusion_matrix<K>(J.spaces[n], out.D.spaces[n]));
    out.projection.push_back(inclusion_matrix<K>(J.spaces[n], out.C.spaces[n]).transpose());
  }
  for (std::size_t n = 0; n < J.d.size(); ++n) {
    auto rows = block_positions(J.spaces[n + 1], out.D.spaces[n + 1]);
    auto cols = block_positions(J.spaces[n], out.D.spaces[n]);
    out.D.d.push_back(J.d[n].select(rows, cols));
    out.C.d.push_back(detail::assemble_differential(*J.category, out.C.spaces[n], out.C.spaces[n + 1], n,
                                                    detail::same_path, kDefaultBudget));
    if (J.d[n] * out.inclusion[n] != out.inclusion[n + 1] * out.D.d[n])
      throw ConsistencyFailure("non-cycle blocks do not form a subcomplex in degree " + std::to_string(n));
    if (out.projection[n + 1] * J.d[n] != out.C.d[n] * out.projection[n])
      throw ConsistencyFailure("projection to cycle blocks is not a chain map for d' in degree " + std::to_string(n));
  }
  return out;
}

}  // namespace hhcat
