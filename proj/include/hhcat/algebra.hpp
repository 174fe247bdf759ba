#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hhcat/errors.hpp"
#include "hhcat/exactla.hpp"
#include "hhcat/field.hpp"
#include "hhcat/sparse.hpp"

namespace hhcat {

struct Arrow {
  std::string label;
  Index source;
  Index target;
  friend bool operator==(const Arrow&, const Arrow&) = default;
};

class Quiver {
 public:
  Quiver() = default;
  Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows)
      : vertices_(std::move(vertices)), arrows_(std::move(arrows)) {
    std::map<std::string, int> seen;
    for (auto& v : vertices_)
      if (seen[v]++) throw Error("duplicate vertex label '" + v + "'");
    std::map<std::string, int> seen_arrows;
    for (auto& a : arrows_) {
      if (seen_arrows[a.label]++) throw Error("duplicate arrow label '" + a.label + "'");
      if (a.source >= vertices_.size() || a.target >= vertices_.size())
        throw Error("arrow '" + a.label + "' has an endpoint outside the quiver");
    }
  }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_arrows() const { return arrows_.size(); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  const std::string& vertex_label(Index v) const { return vertices_.at(v); }
  const Arrow& arrow(Index a) const { return arrows_.at(a); }

  std::optional<Index> find_vertex(const std::string& label) const {
    for (Index v = 0; v < vertices_.size(); ++v)
      if (vertices_[v] == label) return v;
    return std::nullopt;
  }
  std::optional<Index> find_arrow(const std::string& label) const {
    for (Index a = 0; a < arrows_.size(); ++a)
      if (arrows_[a].label == label) return a;
    return std::nullopt;
  }
  std::optional<Index> arrow_between(Index s, Index t) const {
    for (Index a = 0; a < arrows_.size(); ++a)
      if (arrows_[a].source == s && arrows_[a].target == t) return a;
    return std::nullopt;
  }

  bool is_simply_laced() const {
    for (Index a = 0; a < arrows_.size(); ++a) {
      if (arrows_[a].source == arrows_[a].target) return false;
      for (Index b = a + 1; b < arrows_.size(); ++b)
        if (arrows_[a].source == arrows_[b].source && arrows_[a].target == arrows_[b].target) return false;
    }
    return true;
  }

  friend bool operator==(const Quiver&, const Quiver&) = default;

 private:
  std::vector<std::string> vertices_;
  std::vector<Arrow> arrows_;
};

// Finite-dimensional associative unital algebra given by structure constants
// on a basis, together with a system of orthogonal idempotents.
template <class K>
class FinDimAlgebra {
 public:
  FinDimAlgebra() = default;

  // table[i * dim + j] holds the coordinates of b_i * b_j.
  static FinDimAlgebra from_structure_constants(std::vector<std::string> labels, std::vector<SparseVector<K>> table,
                                                SparseVector<K> unit, std::vector<SparseVector<K>> system) {
    FinDimAlgebra a;
    a.labels_ = std::move(labels);
    a.dim_ = a.labels_.size();
    if (table.size() != a.dim_ * a.dim_) throw Error("structure constant table has the wrong size");
    for (auto& v : table)
      if (!v.empty() && v.entries().back().index >= a.dim_) throw Error("structure constant index out of range");
    a.table_ = std::move(table);
    a.unit_ = std::move(unit);
    a.system_ = std::move(system);
    a.validate();
    a.compute_generators();
    return a;
  }

  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Index i) const { return labels_.at(i); }
  const SparseVector<K>& product(Index i, Index j) const { return table_[i * dim_ + j]; }
  const std::vector<SparseVector<K>>& table() const { return table_; }
  const SparseVector<K>& unit() const { return unit_; }
  const std::vector<SparseVector<K>>& system() const { return system_; }
  // Basis elements that generate the algebra together with the unit.
  const std::vector<Index>& generators() const { return generators_; }

  SparseVector<K> multiply(const SparseVector<K>& x, const SparseVector<K>& y) const {
    std::vector<Entry<K>> raw;
    for (auto& a : x)
      for (auto& b : y) {
        K c = a.value * b.value;
        for (auto& e : product(a.index, b.index)) raw.push_back({e.index, c * e.value});
      }
    return SparseVector<K>::from_unsorted(std::move(raw));
  }

  // Matrix of v -> x v (left) or v -> v x (right) on the basis.
  SparseMatrix<K> left_mult(const SparseVector<K>& x) const {
    SparseMatrix<K> m(dim_, dim_);
    for (Index j = 0; j < dim_; ++j) m.set_column(j, multiply(x, SparseVector<K>::unit(j)));
    return m;
  }
  SparseMatrix<K> right_mult(const SparseVector<K>& x) const {
    SparseMatrix<K> m(dim_, dim_);
    for (Index j = 0; j < dim_; ++j) m.set_column(j, multiply(SparseVector<K>::unit(j), x));
    return m;
  }

  // y Λ x for idempotents x, y: image of v -> y v x, in canonical echelon basis.
  Subspace<K> corner(const SparseVector<K>& y, const SparseVector<K>& x) const {
    std::vector<SparseVector<K>> img;
    for (Index j = 0; j < dim_; ++j) img.push_back(multiply(multiply(y, SparseVector<K>::unit(j)), x));
    return Subspace<K>::from_spanning(dim_, img);
  }

  // Center as a subspace.
  Subspace<K> center() const {
    std::vector<Triplet<K>> t;
    Index row = 0;
    for (Index g = 0; g < dim_; ++g) {
      // z b_g - b_g z = 0 for z = sum z_i b_i
      std::map<Index, std::vector<Entry<K>>> rows;
      for (Index i = 0; i < dim_; ++i) {
        for (auto& e : product(i, g)) rows[e.index].push_back({i, e.value});
        for (auto& e : product(g, i)) rows[e.index].push_back({i, -e.value});
      }
      for (auto& [k, es] : rows) {
        for (auto& e : es) t.push_back({row, e.index, e.value});
        ++row;
      }
    }
    return kernel_basis(SparseMatrix<K>::from_triplets(row, dim_, t));
  }

  friend bool operator==(const FinDimAlgebra& a, const FinDimAlgebra& b) {
    return a.dim_ == b.dim_ && a.table_ == b.table_ && a.unit_ == b.unit_ && a.system_ == b.system_;
  }

 private:
  void validate() const {
    for (Index i = 0; i < dim_; ++i)
      for (Index j = 0; j < dim_; ++j) {
        const SparseVector<K>& ij = product(i, j);
        for (Index l = 0; l < dim_; ++l) {
          SparseVector<K> left = multiply(ij, SparseVector<K>::unit(l));
          SparseVector<K> right = multiply(SparseVector<K>::unit(i), product(j, l));
          if (left != right)
            throw NotAssociative("(" + labels_[i] + " " + labels_[j] + ") " + labels_[l] + " != " + labels_[i] + " (" +
                                 labels_[j] + " " + labels_[l] + ")");
        }
      }
    for (Index i = 0; i < dim_; ++i) {
      auto b = SparseVector<K>::unit(i);
      if (multiply(unit_, b) != b || multiply(b, unit_) != b)
        throw BadUnit("the declared unit does not act as identity on " + labels_[i]);
    }
    SparseVector<K> sum;
    for (std::size_t a = 0; a < system_.size(); ++a) {
      if (system_[a].empty()) throw BadSystem("idempotent #" + std::to_string(a) + " is zero");
      if (multiply(system_[a], system_[a]) != system_[a])
        throw BadSystem("element #" + std::to_string(a) + " of the system is not idempotent");
      for (std::size_t b = 0; b < system_.size(); ++b)
        if (a != b && !multiply(system_[a], system_[b]).empty())
          throw BadSystem("idempotents #" + std::to_string(a) + " and #" + std::to_string(b) + " are not orthogonal");
      sum = sum + system_[a];
    }
    if (sum != unit_) throw BadSystem("the idempotents of the system do not sum to the unit");
  }

  void compute_generators() {
    // Greedy: add basis elements until the generated subalgebra is everything.
    // Words in the generators, built by right multiplication from the unit.
    auto closure = [&](const std::vector<Index>& gens) {
      Echelon<K> e(dim_);
      std::vector<SparseVector<K>> span{unit_};
      e.insert(unit_);
      for (std::size_t a = 0; a < span.size(); ++a)
        for (Index g : gens) {
          auto v = multiply(span[a], SparseVector<K>::unit(g));
          if (e.insert(v)) span.push_back(std::move(v));
        }
      return e;
    };
    generators_.clear();
    for (Index i = 0; i < dim_; ++i) {
      Echelon<K> e = closure(generators_);
      if (e.rank() == dim_) break;
      if (!e.contains(SparseVector<K>::unit(i))) generators_.push_back(i);
    }
  }

  std::size_t dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<SparseVector<K>> table_;
  SparseVector<K> unit_;
  std::vector<SparseVector<K>> system_;
  std::vector<Index> generators_;
};

template <class K>
using AlgebraPtr = std::shared_ptr<const FinDimAlgebra<K>>;

template <class K>
AlgebraPtr<K> make_algebra(FinDimAlgebra<K> a) {
  return std::make_shared<const FinDimAlgebra<K>>(std::move(a));
}

template <class K>
bool same_algebra(const AlgebraPtr<K>& a, const AlgebraPtr<K>& b) {
  return a == b || (a && b && *a == *b);
}

template <class K>
AlgebraPtr<K> algebra_from_structure_constants(std::vector<std::string> labels, std::vector<SparseVector<K>> table,
                                               SparseVector<K> unit, std::vector<SparseVector<K>> system) {
  return make_algebra(FinDimAlgebra<K>::from_structure_constants(std::move(labels), std::move(table), std::move(unit),
                                                                std::move(system)));
}

// The ground field k.
template <class K>
AlgebraPtr<K> field_algebra() {
  auto one = SparseVector<K>::unit(0);
  return algebra_from_structure_constants<K>({"1"}, {one}, one, {one});
}

// k^n with orthogonal idempotent basis.
template <class K>
AlgebraPtr<K> semisimple_algebra(std::size_t n) {
  std::vector<std::string> labels;
  std::vector<SparseVector<K>> table(n * n), system;
  SparseVector<K> unit;
  for (Index i = 0; i < n; ++i) {
    labels.push_back("e" + std::to_string(i + 1));
    table[i * n + i] = SparseVector<K>::unit(i);
    system.push_back(SparseVector<K>::unit(i));
    unit.push_back(i, K(1));
  }
  return algebra_from_structure_constants<K>(labels, table, unit, system);
}

// A x B with basis (basis of A, basis of B) and system E ∪ F.
template <class K>
AlgebraPtr<K> product_algebra(const FinDimAlgebra<K>& a, const FinDimAlgebra<K>& b) {
  std::size_t da = a.dim(), db = b.dim(), n = da + db;
  std::vector<std::string> labels;
  for (auto& l : a.labels()) labels.push_back("A:" + l);
  for (auto& l : b.labels()) labels.push_back("B:" + l);
  std::vector<SparseVector<K>> table(n * n);
  auto shift = [&](const SparseVector<K>& v) { return v.remapped([&](Index i) { return Index(i + da); }); };
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < da; ++j) table[i * n + j] = a.product(i, j);
  for (Index i = 0; i < db; ++i)
    for (Index j = 0; j < db; ++j) table[(i + da) * n + (j + da)] = shift(b.product(i, j));
  std::vector<SparseVector<K>> system;
  for (auto& e : a.system()) system.push_back(e);
  for (auto& f : b.system()) system.push_back(shift(f));
  return algebra_from_structure_constants<K>(labels, table, a.unit() + shift(b.unit()), system);
}

// Peirce E-quiver: vertices = the idempotents of `system`, arrow x -> y iff
// x != y and y Λ x is nonzero.
template <class K>
Quiver peirce_quiver(const FinDimAlgebra<K>& alg, const std::vector<SparseVector<K>>& system,
                     std::vector<std::string> vertex_labels = {}) {
  std::size_t n = system.size();
  if (vertex_labels.empty())
    for (std::size_t i = 0; i < n; ++i) vertex_labels.push_back("e" + std::to_string(i));
  std::vector<Arrow> arrows;
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      if (x == y) continue;
      if (alg.corner(system[y], system[x]).dim() > 0)
        arrows.push_back({vertex_labels[x] + "->" + vertex_labels[y], x, y});
    }
  Quiver q(vertex_labels, arrows);
  if (!q.is_simply_laced()) throw ConsistencyFailure("Peirce quiver is not simply laced");
  return q;
}

}  // namespace hhcat
