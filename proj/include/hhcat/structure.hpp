#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hhcat/bimodule.hpp"
#include "hhcat/complexes.hpp"
#include "hhcat/errors.hpp"
#include "hhcat/exactla.hpp"
#include "hhcat/homalg.hpp"
#include "hhcat/qset.hpp"
#include "hhcat/trajectories.hpp"

namespace hhcat {

// ---------------------------------------------------------------- cup product

namespace detail {

// Entries of v inside block b, grouped by tuple: (tuple, vector over outputs).
template <class K>
std::vector<std::pair<std::size_t, SparseVector<K>>> by_tuple(const SparseVector<K>& v, const Block& b) {
  std::vector<std::pair<std::size_t, SparseVector<K>>> out;
  auto lo = std::lower_bound(v.begin(), v.end(), Index(b.offset), [](const Entry<K>& e, Index i) { return e.index < i; });
  for (auto it = lo; it != v.end() && it->index < b.offset + b.dim; ++it) {
    std::size_t local = it->index - b.offset, t = local / b.out_dim;
    if (out.empty() || out.back().first != t) out.push_back({t, SparseVector<K>()});
    out.back().second.push_back(Index(local % b.out_dim), it->value);
  }
  return out;
}

}  // namespace detail

// (f ⌣ g)(x_1 .. x_{p+q}) = f(x_1 .. x_p) g(x_{p+1} .. x_{p+q}), with f of degree
// p on `ls`, g of degree q on `rs`, and the result on `out` (degree p + q).
// Blocks of `out` whose halves are missing from ls or rs get nothing.
template <class K>
SparseVector<K> cup_product(const HomCategory<K>& cat, std::size_t p, const CochainSpace& ls, const SparseVector<K>& f,
                            std::size_t q, const CochainSpace& rs, const SparseVector<K>& g, const CochainSpace& out) {
  std::vector<Entry<K>> raw;
  if (f.empty() || g.empty()) return {};
  for (const Block& s : out.blocks) {
    const auto& o = s.objects;
    if (o.size() != p + q + 1) throw Error("cup_product: output space has the wrong degree");
    const Block* L = ls.find(std::vector<Index>(o.begin(), o.begin() + p + 1));
    const Block* R = rs.find(std::vector<Index>(o.begin() + p, o.end()));
    if (!L || !R) continue;
    auto fl = detail::by_tuple(f, *L);
    if (fl.empty()) continue;
    auto gr = detail::by_tuple(g, *R);
    for (auto& [lt, u] : fl)
      for (auto& [rt, w] : gr)
        for (auto& e : cat.compose(o[0], o[p], o[p + q], u, w))
          raw.push_back({Index(s.offset + (lt * R->tuples + rt) * s.out_dim + e.index), e.value});
  }
  return SparseVector<K>::from_unsorted(std::move(raw));
}

// Cup product inside a single complex.
template <class K>
SparseVector<K> cup_product(const CochainComplex<K>& c, std::size_t p, const SparseVector<K>& f, std::size_t q,
                            const SparseVector<K>& g) {
  if (p + q >= c.spaces.size()) throw Error("cup_product: degree " + std::to_string(p + q) + " was not built");
  return cup_product(*c.category, p, c.spaces[p], f, q, c.spaces[q], g, c.spaces[p + q]);
}

// 1_M: the identity on every block C(v_1 -> v_0) with v_0 != v_1 of a degree-1 space.
template <class K>
SparseVector<K> arrow_identity_cochain(const CochainSpace& s1) {
  std::vector<Entry<K>> raw;
  for (auto& b : s1.blocks) {
    if (b.objects.size() != 2) throw Error("arrow_identity_cochain needs a degree-1 space");
    if (b.objects[0] == b.objects[1]) continue;
    for (std::size_t i = 0; i < b.out_dim; ++i) raw.push_back({Index(b.offset + i * b.out_dim + i), K(1)});
  }
  return SparseVector<K>::from_unsorted(std::move(raw));
}

// The unit 1 of A_x as a degree-0 cochain, or the sum over all objects.
template <class K>
SparseVector<K> unit_cochain(const HomCategory<K>& cat, const CochainSpace& s0, std::optional<Index> x = std::nullopt) {
  std::vector<Entry<K>> raw;
  for (auto& b : s0.blocks) {
    Index v = b.objects[0];
    if (x && v != *x) continue;
    auto c = cat.hom(v, v).coordinates(cat.system()[v]);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!c[i].is_zero()) raw.push_back({Index(b.offset + i), c[i]});
  }
  return SparseVector<K>::from_unsorted(std::move(raw));
}

// ------------------------------------------------------- long exact sequence

// Everything the sequence 0 -> D -> J -> C -> 0 needs, built once.
template <class K>
struct LESData {
  CochainComplex<K> J;
  NoncycleSplit<K> split;
  CohomologyResult<K> hJ, hD, hC;
  std::vector<QuotientCoordinates<K>> qJ, qD, qC;  // degrees 0 .. n_max
  SparseVector<K> one_m;                           // 1_M in J^1
  std::size_t n_max = 0;
};

namespace detail {

template <class K>
std::vector<QuotientCoordinates<K>> quotients(const CochainComplex<K>& c, const CohomologyResult<K>& h) {
  std::vector<QuotientCoordinates<K>> q;
  for (std::size_t n = 0; n < h.degrees.size(); ++n) {
    std::vector<SparseVector<K>> bd;
    if (n > 0) bd = c.d[n - 1].columns();
    q.emplace_back(c.spaces[n].dim, bd, h.degrees[n].reps);
  }
  return q;
}

template <class K>
SparseMatrix<K> class_matrix(const QuotientCoordinates<K>& target, const std::vector<SparseVector<K>>& images) {
  std::vector<SparseVector<K>> cols;
  for (auto& v : images) cols.push_back(SparseVector<K>::from_dense(target.coordinates(v)));
  return SparseMatrix<K>::from_columns(target.dim(), std::move(cols));
}

}  // namespace detail

template <class K>
LESData<K> les_data(const QSet<K>& d, std::size_t n_max, std::size_t budget = kDefaultBudget) {
  LESData<K> L;
  L.n_max = n_max;
  L.J = relative_complex(d, n_max, budget);
  if (L.J.truncated) throw BudgetExceeded("the relative complex is truncated at degree " + std::to_string(n_max + 1));
  L.split = split_noncycle(L.J);
  L.hJ = cohomology(L.J, true);
  L.hD = cohomology(L.split.D, true);
  L.hC = cohomology(L.split.C, true);
  L.qJ = detail::quotients(L.J, L.hJ);
  L.qD = detail::quotients(L.split.D, L.hD);
  L.qC = detail::quotients(L.split.C, L.hC);
  L.one_m = arrow_identity_cochain<K>(L.J.spaces[1]);
  return L;
}

// ∇_n(f) = 1_M ⌣ f + (-1)^{n+1} f ⌣ 1_M for a cocycle f of C^n, in D^{n+1}
// coordinates.
template <class K>
SparseVector<K> connecting_nabla_formula(const LESData<K>& L, std::size_t n, const SparseVector<K>& f) {
  if (n + 1 > L.n_max) throw Error("connecting_nabla_formula: degree " + std::to_string(n + 1) + " is not available");
  if (!L.split.C.d[n].apply(f).empty()) throw NotACocycle("the cochain is not a cocycle of the cycle quotient");
  auto lift = L.split.projection[n].transpose().apply(f);
  auto v = cup_product(L.J, 1, L.one_m, n, lift);
  v = v.plus_scaled(cup_product(L.J, n, lift, 1, L.one_m), K((n + 1) % 2 ? -1 : 1));
  if (!L.split.projection[n + 1].apply(v).empty())
    throw ConsistencyFailure("the nabla formula leaves the non-cycle subcomplex in degree " + std::to_string(n + 1));
  return L.split.inclusion[n + 1].transpose().apply(v);
}

// Connecting map H^n(C) -> H^{n+1}(D) by lift, differentiate, restrict.
template <class K>
SparseVector<K> snake_cochain(const LESData<K>& L, std::size_t n, const SparseVector<K>& f) {
  auto lift = L.split.projection[n].transpose().apply(f);
  auto v = L.J.d[n].apply(lift);
  if (!L.split.projection[n + 1].apply(v).empty())
    throw LiftNotInSubcomplex("d of the lifted cocycle has cycle components in degree " + std::to_string(n + 1));
  return L.split.inclusion[n + 1].transpose().apply(v);
}

// Both constructions as matrices from the H^n(C) representatives to H^{n+1}(D)
// class coordinates.
template <class K>
SparseMatrix<K> connecting_snake(const LESData<K>& L, std::size_t n) {
  std::vector<SparseVector<K>> im;
  for (auto& r : L.hC.degrees.at(n).reps) im.push_back(snake_cochain(L, n, r));
  return detail::class_matrix(L.qD.at(n + 1), im);
}

template <class K>
SparseMatrix<K> connecting_nabla_matrix(const LESData<K>& L, std::size_t n) {
  std::vector<SparseVector<K>> im;
  for (auto& r : L.hC.degrees.at(n).reps) im.push_back(connecting_nabla_formula(L, n, r));
  return detail::class_matrix(L.qD.at(n + 1), im);
}

template <class K>
struct LESDegree {
  std::size_t d = 0, j = 0, c = 0;  // H^n(D), HH^n(Λ), H^n(C)
  SparseMatrix<K> i, p;             // H^n(D) -> HH^n(Λ) -> H^n(C)
  std::optional<SparseMatrix<K>> nabla;  // H^n(C) -> H^{n+1}(D), absent at the top degree
  bool exact_d = false, exact_j = false;
  std::optional<bool> exact_c;  // unchecked at the top degree
  std::vector<std::pair<std::string, std::size_t>> d_paths, c_paths;
};

template <class K>
struct LESReport {
  std::size_t n_max = 0;
  std::vector<LESDegree<K>> degrees;
  bool exact() const {
    for (auto& g : degrees)
      if (!g.exact_d || !g.exact_j || (g.exact_c && !*g.exact_c)) return false;
    return true;
  }
};

namespace detail {

// dim H^n of c restricted to each path's blocks (d preserves the path on D and C).
template <class K>
std::vector<std::pair<std::string, std::size_t>> path_breakdown(const CochainComplex<K>& c, std::size_t n) {
  const Quiver& q = *c.quiver;
  auto positions = [&](std::size_t deg) {
    std::map<std::string, std::vector<Index>> m;
    if (deg >= c.spaces.size()) return m;
    for (auto& b : c.spaces[deg].blocks) {
      auto& v = m[b.trajectory->path.label(q)];
      for (std::size_t i = 0; i < b.dim; ++i) v.push_back(Index(b.offset + i));
    }
    return m;
  };
  auto here = positions(n), up = positions(n + 1), down = n > 0 ? positions(n - 1) : decltype(here){};
  std::vector<std::pair<std::string, std::size_t>> out;
  for (auto& [label, cols] : here) {
    std::size_t out_rank = up.count(label) ? rank(c.d[n].select(up[label], cols)) : 0;
    std::size_t in_rank = n > 0 && down.count(label) ? rank(c.d[n - 1].select(cols, down[label])) : 0;
    std::size_t h = cols.size() - out_rank - in_rank;
    if (h) out.push_back({label, h});
  }
  return out;
}

template <class K>
bool composes_to_zero(const SparseMatrix<K>& second, const SparseMatrix<K>& first) {
  return (second * first).is_zero();
}

}  // namespace detail

template <class K>
LESReport<K> long_exact_sequence(const LESData<K>& L) {
  LESReport<K> R;
  R.n_max = L.n_max;
  for (std::size_t n = 0; n <= L.n_max; ++n) {
    LESDegree<K> g;
    g.d = L.hD.degrees[n].dim;
    g.j = L.hJ.degrees[n].dim;
    g.c = L.hC.degrees[n].dim;
    std::vector<SparseVector<K>> im;
    for (auto& r : L.hD.degrees[n].reps) im.push_back(L.split.inclusion[n].apply(r));
    g.i = detail::class_matrix(L.qJ[n], im);
    im.clear();
    for (auto& r : L.hJ.degrees[n].reps) im.push_back(L.split.projection[n].apply(r));
    g.p = detail::class_matrix(L.qC[n], im);
    if (n < L.n_max) g.nabla = connecting_snake(L, n);
    g.d_paths = detail::path_breakdown(L.split.D, n);
    g.c_paths = detail::path_breakdown(L.split.C, n);
    R.degrees.push_back(std::move(g));
  }
  for (std::size_t n = 0; n <= L.n_max; ++n) {
    auto& g = R.degrees[n];
    std::size_t ri = rank(g.i), rp = rank(g.p);
    std::size_t rn_in = n > 0 ? rank(*R.degrees[n - 1].nabla) : 0;
    bool zero_in = n == 0 || detail::composes_to_zero(g.i, *R.degrees[n - 1].nabla);
    g.exact_d = zero_in && rn_in == g.d - ri;
    g.exact_j = detail::composes_to_zero(g.p, g.i) && ri == g.j - rp;
    if (g.nabla) g.exact_c = detail::composes_to_zero(*g.nabla, g.p) && rp == g.c - rank(*g.nabla);
  }
  for (auto& g : R.degrees) {
    std::size_t sum_d = 0, sum_c = 0;
    for (auto& e : g.d_paths) sum_d += e.second;
    for (auto& e : g.c_paths) sum_c += e.second;
    if (sum_d != g.d || sum_c != g.c) throw ConsistencyFailure("path breakdown does not add up to the node dimension");
  }
  if (!R.exact()) {
    for (std::size_t n = 0; n <= R.n_max; ++n) {
      auto& g = R.degrees[n];
      if (!g.exact_d) throw ExactnessFailure("not exact at H^" + std::to_string(n) + "(D)");
      if (!g.exact_j) throw ExactnessFailure("not exact at HH^" + std::to_string(n));
      if (g.exact_c && !*g.exact_c) throw ExactnessFailure("not exact at H^" + std::to_string(n) + "(C)");
    }
  }
  return R;
}

template <class K>
LESReport<K> long_exact_sequence(const QSet<K>& d, std::size_t n_max, std::size_t budget = kDefaultBudget) {
  return long_exact_sequence(les_data(d, n_max, budget));
}

struct CupCheck {
  bool ok = true;
  std::size_t pairs = 0;
  std::string failure;
};

// D-cocycle pairs cup to coboundaries of J, and J -> C respects cup products
// on representatives modulo coboundaries; degrees p + q <= n_max.
template <class K>
CupCheck cup_annihilation_check(const LESData<K>& L) {
  CupCheck out;
  for (std::size_t p = 0; p <= L.n_max; ++p)
    for (std::size_t q = 0; p + q <= L.n_max; ++q) {
      for (auto& f : L.hD.degrees[p].reps)
        for (auto& g : L.hD.degrees[q].reps) {
          ++out.pairs;
          auto v = cup_product(L.J, p, L.split.inclusion[p].apply(f), q, L.split.inclusion[q].apply(g));
          if (!L.qJ[p + q].is_boundary(v)) {
            out.ok = false;
            out.failure = "D-classes of degrees " + std::to_string(p) + ", " + std::to_string(q) + " cup to a nonzero class";
            return out;
          }
        }
      for (auto& f : L.hJ.degrees[p].reps)
        for (auto& g : L.hJ.degrees[q].reps) {
          ++out.pairs;
          auto fc = L.split.projection[p].apply(f), gc = L.split.projection[q].apply(g);
          auto lhs = L.split.projection[p + q].apply(cup_product(L.J, p, f, q, g));
          auto rhs = cup_product(*L.J.category, p, L.split.C.spaces[p], fc, q, L.split.C.spaces[q], gc,
                                 L.split.C.spaces[p + q]);
          if (!L.qC[p + q].is_boundary(lhs - rhs)) {
            out.ok = false;
            out.failure = "projection to C is not multiplicative in degrees " + std::to_string(p) + ", " + std::to_string(q);
            return out;
          }
        }
    }
  return out;
}

// ------------------------------------------------------------ ∇ on Hom spaces

template <class K>
struct NablaPrime {
  std::size_t source_dim = 0, target_dim = 0, rank = 0;
  SparseMatrix<K> matrix;  // target Hom coordinates x source Hom coordinates
  std::size_t kernel_dim() const { return source_dim - rank; }
  std::size_t cokernel_dim() const { return target_dim - rank; }
};

// ∇ restricted to the lowest-degree classes of the cycles of length n, i.e.
// ⊕_γ Hom(M_γ, A_x), landing in ⊕_δ Hom(M_δ, Δ_δ) over non-cycles of length
// n + 1. Cochains live on the trajectories without waiting.
template <class K>
NablaPrime<K> nabla_lowest(const QSet<K>& d, std::size_t n, std::size_t budget = kDefaultBudget) {
  auto cat = qset_category(d);
  const Quiver& q = d.quiver();
  auto paths = enumerate_paths(q, n + 1);
  std::vector<QPath> src, tgt, arrows;
  for (auto& w : paths.all) {
    if (w.length() == n && w.is_cycle()) src.push_back(w);
    if (w.length() == n + 1 && !w.is_cycle()) tgt.push_back(w);
    if (w.length() == 1) arrows.push_back(w);
  }
  auto ss = detail::trajectory_space(*cat, q, src, n);
  auto ts = detail::trajectory_space(*cat, q, tgt, n + 1);
  auto os = detail::trajectory_space(*cat, q, arrows, 1);
  // lowest-degree cocycles of each K_ω, embedded in the given space
  auto homs = [&](const std::vector<QPath>& ws, std::size_t deg, const CochainSpace& space) {
    std::vector<SparseVector<K>> basis;
    for (auto& w : ws) {
      auto K_w = along_path_complex(cat, q, w, deg, budget);
      if (K_w.spaces[deg].blocks.empty()) continue;
      const Block& b = K_w.spaces[deg].blocks.front();
      std::size_t off = space.find(b.objects)->offset;
      auto ker = kernel_basis(K_w.d[deg]);
      for (auto& v : ker.basis())
        basis.push_back(v.remapped([&](Index i) { return Index(i - b.offset + off); }));
    }
    return basis;
  };
  auto source = homs(src, n, ss);
  auto target = Subspace<K>::from_spanning(ts.dim, homs(tgt, n + 1, ts));
  auto one = arrow_identity_cochain<K>(os);
  NablaPrime<K> out;
  out.source_dim = source.size();
  out.target_dim = target.dim();
  std::vector<SparseVector<K>> cols;
  const K sign((n + 1) % 2 ? -1 : 1);
  for (auto& f : source) {
    auto v = cup_product(*cat, 1, os, one, n, ss, f, ts).plus_scaled(cup_product(*cat, n, ss, f, 1, os, one, ts), sign);
    if (!target.contains(v)) throw ConsistencyFailure("nabla of a Hom class is not a Hom class");
    cols.push_back(SparseVector<K>::from_dense(target.coordinates(v)));
  }
  out.matrix = SparseMatrix<K>::from_columns(out.target_dim, std::move(cols));
  out.rank = rank(out.matrix);
  return out;
}

// ----------------------------------------------------- null-square algebras

template <class K>
std::vector<std::size_t> hochschild_dims(const AlgebraPtr<K>& alg, std::size_t n_max,
                                         std::size_t budget = kDefaultBudget) {
  return cohomology(separable_complex(alg, alg->system(), n_max, budget)).dims();
}

// Throws NotProjective unless the bimodule carries a free-corner certificate
// or Ext^r against itself and B ⊗ A vanishes for r = 1 .. n_cap.
template <class K>
void certify_projective(const Bimodule<K>& M, std::size_t n_cap, std::size_t budget = kDefaultBudget) {
  if (M.projective_certificate() || M.dim() == 0) return;
  auto probe = free_bimodule(M.left_algebra(), M.right_algebra());
  for (const Bimodule<K>* X : {&M, static_cast<const Bimodule<K>*>(&probe)}) {
    auto e = ext_bimodule(M, *X, n_cap, budget);
    for (std::size_t r = 1; r <= n_cap; ++r)
      if (e[r]) throw NotProjective("Ext^" + std::to_string(r) + " of the corner bimodule does not vanish");
  }
}

template <class K>
QSet<K> square_qset(const SquareData<K>& sq) {
  if (!sq.alpha.is_zero() || !sq.beta.is_zero()) throw InvalidQSet("the square has nonzero corner products");
  return round_trip_qset(sq.A, sq.B, sq.M, sq.N, true);
}

template <class K>
struct FiveTerm {
  std::size_t m = 0;
  // HH^{2m}(Λ), H^{2m}(C), H^{2m+1}(D), HH^{2m+1}(Λ), H^{2m+1}(C)
  std::vector<std::size_t> nodes;
  std::vector<SparseMatrix<K>> maps;
  std::vector<bool> exact;
  // Node dims computed independently: HH^{2m}(𝔸), Hom(𝕄^{2m}, 𝔸) (m > 0),
  // Hom(𝕄^{2m+1}, 𝕄), HH^{2m+1}(𝔸).
  std::size_t hh_even = 0, hom_even = 0, hom_odd = 0, hh_odd = 0;
};

template <class K>
FiveTerm<K> five_term(const SquareData<K>& sq, std::size_t m, std::size_t budget = kDefaultBudget) {
  std::size_t cap = 2 * m + 2;
  certify_projective(sq.M, cap, budget);
  certify_projective(sq.N, cap, budget);
  auto d = square_qset(sq);
  auto L = les_data(d, cap, budget);
  auto R = long_exact_sequence(L);
  auto& ev = R.degrees[2 * m];
  auto& od = R.degrees[2 * m + 1];
  FiveTerm<K> F;
  F.m = m;
  F.nodes = {ev.j, ev.c, od.d, od.j, od.c};
  F.maps = {ev.p, *ev.nabla, od.i, od.p};
  bool first = R.degrees[2 * m].d == 0, last = R.degrees[2 * m + 2].d == 0;
  F.exact = {first && ev.exact_j, *ev.exact_c, od.exact_d, od.exact_j, last && *od.exact_c};
  for (bool e : F.exact)
    if (!e) throw ExactnessFailure("five-term sequence at level " + std::to_string(m) + " is not exact");
  auto hA = hochschild_dims(sq.A, 2 * m + 1, budget), hB = hochschild_dims(sq.B, 2 * m + 1, budget);
  F.hh_even = hA[2 * m] + hB[2 * m];
  F.hh_odd = hA[2 * m + 1] + hB[2 * m + 1];
  for (auto& w : enumerate_paths(d.quiver(), 2 * m + 1).all) {
    if (w.length() == 0) continue;
    auto target = counterpart(d, w);
    if (target.dim() == 0) continue;
    auto h = hom_bimodule(bimodule_along(d, w), target).dim();
    if (w.length() == 2 * m) F.hom_even += h;
    if (w.length() == 2 * m + 1) F.hom_odd += h;
  }
  if (F.nodes[1] != F.hh_even + F.hom_even || F.nodes[2] != F.hom_odd || F.nodes[4] != F.hh_odd)
    throw ConsistencyFailure("five-term nodes disagree with the Hom and HH dimensions");
  return F;
}

template <class K>
struct NullSquareHH {
  std::vector<std::size_t> dims;                    // degrees 0 .. 2 m_max + 1
  std::vector<std::size_t> hh_a;                    // HH^n(A) + HH^n(B)
  std::vector<NablaPrime<K>> nabla;                 // ∇'_{2m}, m = 0 .. m_max
};

// HH^{2m} = HH^{2m}(𝔸) + ker ∇'_{2m}, HH^{2m+1} = coker ∇'_{2m} + HH^{2m+1}(𝔸);
// for m = 0 the source of ∇'_0 is all of HH^0(𝔸).
template <class K>
NullSquareHH<K> null_square_hh(const SquareData<K>& sq, std::size_t m_max, std::size_t budget = kDefaultBudget) {
  certify_projective(sq.M, 2 * m_max + 1, budget);
  certify_projective(sq.N, 2 * m_max + 1, budget);
  auto d = square_qset(sq);
  NullSquareHH<K> out;
  auto hA = hochschild_dims(sq.A, 2 * m_max + 1, budget), hB = hochschild_dims(sq.B, 2 * m_max + 1, budget);
  for (std::size_t n = 0; n <= 2 * m_max + 1; ++n) out.hh_a.push_back(hA[n] + hB[n]);
  for (std::size_t m = 0; m <= m_max; ++m) {
    auto nb = nabla_lowest(d, 2 * m, budget);
    out.dims.push_back((m ? out.hh_a[2 * m] : 0) + nb.kernel_dim());
    out.dims.push_back(nb.cokernel_dim() + out.hh_a[2 * m + 1]);
    out.nabla.push_back(std::move(nb));
  }
  return out;
}

// Closed forms for free rank-one corners M = BA, N = AB, (A, B) != (k, k).
inline std::vector<std::size_t> free_rank_one_closed_form(std::size_t dim_a, std::size_t dim_b,
                                                          const std::vector<std::size_t>& hh_a,
                                                          const std::vector<std::size_t>& hh_b, std::size_t n_max) {
  std::vector<std::size_t> out;
  std::size_t ab = dim_a * dim_b, power = 1;
  if (ab == 1) throw Error("free_rank_one_closed_form: A = B = k is not covered");
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (n == 0) {
      out.push_back(1);  // (a, b) central forces a = b = scalar, since 1 ⊗ 1 generates both corners
    } else if (n == 1) {
      out.push_back(hh_a[1] + hh_b[1] + 2 * ab + 1 - hh_a[0] - hh_b[0]);
    } else if (n % 2 == 0) {
      power *= ab;  // (dim A dim B)^m for n = 2m
      out.push_back(hh_a[n] + hh_b[n]);
    } else {
      out.push_back(hh_a[n] + hh_b[n] + 2 * power * (ab - 1));
    }
  }
  return out;
}

// ------------------------------------------------------------- Peirce quivers

struct PeirceSquareQuiver {
  Quiver qe, qf;
  std::vector<std::vector<std::size_t>> down;  // down[f][e] = multiplicity of Bf ⊗ eA in M
  std::vector<std::vector<std::size_t>> up;    // up[e][f] = multiplicity of Ae ⊗ fB in N

  std::size_t num_e() const { return qe.num_vertices(); }
  std::size_t num_f() const { return qf.num_vertices(); }
  std::size_t vertical_arrows() const {
    std::size_t c = 0;
    for (auto& r : down)
      for (auto v : r) c += v > 0;
    for (auto& r : up)
      for (auto v : r) c += v > 0;
    return c;
  }
};

template <class K>
PeirceSquareQuiver peirce_square_quiver(const AlgebraPtr<K>& A, const AlgebraPtr<K>& B,
                                        std::vector<std::vector<std::size_t>> down,
                                        std::vector<std::vector<std::size_t>> up) {
  std::size_t ne = A->system().size(), nf = B->system().size();
  if (down.size() != nf || up.size() != ne) throw Error("peirce_square_quiver: multiplicity tables have the wrong shape");
  for (auto& r : down)
    if (r.size() != ne) throw Error("peirce_square_quiver: multiplicity tables have the wrong shape");
  for (auto& r : up)
    if (r.size() != nf) throw Error("peirce_square_quiver: multiplicity tables have the wrong shape");
  std::vector<std::string> le, lf;
  for (std::size_t i = 0; i < ne; ++i) le.push_back("e" + std::to_string(i));
  for (std::size_t i = 0; i < nf; ++i) lf.push_back("f" + std::to_string(i));
  return {peirce_quiver(*A, A->system(), le), peirce_quiver(*B, B->system(), lf), std::move(down), std::move(up)};
}

// M = ⊕ down[f][e] Bf ⊗ eA and N = ⊕ up[e][f] Ae ⊗ fB.
template <class K>
std::pair<Bimodule<K>, Bimodule<K>> peirce_square_bimodules(const AlgebraPtr<K>& A, const AlgebraPtr<K>& B,
                                                            const PeirceSquareQuiver& pq) {
  auto M = Bimodule<K>::zero(B, A);
  auto N = Bimodule<K>::zero(A, B);
  M.set_projective_certificate(true);
  N.set_projective_certificate(true);
  for (Index f = 0; f < pq.num_f(); ++f)
    for (Index e = 0; e < pq.num_e(); ++e) {
      for (std::size_t k = 0; k < pq.down[f][e]; ++k) M = direct_sum(M, free_corner_bimodule(B, f, e, A));
      for (std::size_t k = 0; k < pq.up[e][f]; ++k) N = direct_sum(N, free_corner_bimodule(A, e, f, B));
    }
  return {M, N};
}

struct EfficientCycle {
  bool exists = false;
  std::vector<Index> vertices;  // E vertices 0 .. |E|-1, then F vertices; closes back to the first
  std::vector<char> kinds;      // 'v' vertical, 'E' / 'F' horizontal, one per step
  std::string label(const PeirceSquareQuiver& pq) const {
    std::string s;
    for (std::size_t i = 0; i <= vertices.size() && !vertices.empty(); ++i) {
      Index v = vertices[i % vertices.size()];
      if (i) s += std::string(" -") + kinds[i - 1] + "-> ";
      s += v < pq.num_e() ? pq.qe.vertex_label(v) : pq.qf.vertex_label(v - Index(pq.num_e()));
    }
    return s;
  }
};

// Shortest efficient cycle (lexicographically least among the shortest, read
// from its first vertical arrow) by breadth-first search over
// (vertex, kind of the last arrow).
inline EfficientCycle efficient_cycles(const PeirceSquareQuiver& pq) {
  std::size_t ne = pq.num_e(), nv = ne + pq.num_f();
  struct Edge {
    Index to;
    int kind;  // 0 vertical, 1 E, 2 F
  };
  std::vector<std::vector<Edge>> out(nv);
  for (auto& a : pq.qe.arrows()) out[a.source].push_back({a.target, 1});
  for (auto& a : pq.qf.arrows()) out[a.source + ne].push_back({Index(a.target + ne), 2});
  for (Index f = 0; f < pq.num_f(); ++f)
    for (Index e = 0; e < ne; ++e) {
      if (pq.down[f][e]) out[e].push_back({Index(f + ne), 0});
      if (pq.up[e][f]) out[f + ne].push_back({e, 0});
    }
  for (auto& o : out) std::sort(o.begin(), o.end(), [](auto& x, auto& y) { return x.to != y.to ? x.to < y.to : x.kind < y.kind; });
  auto allowed = [](int last, int k) { return k == 0 || k != last; };
  auto state = [&](Index v, int k) { return std::size_t(v) * 3 + k; };
  const std::size_t inf = std::size_t(-1);

  EfficientCycle best;
  std::size_t best_len = inf;
  for (Index u = 0; u < nv; ++u)
    for (auto& first : out[u]) {
      if (first.kind != 0) continue;
      // reverse BFS: dist[s] = fewest arrows from state s back to u
      std::vector<std::size_t> dist(nv * 3, inf);
      std::deque<std::size_t> dq;
      for (int k = 0; k < 3; ++k) {
        dist[state(u, k)] = 0;
        dq.push_back(state(u, k));
      }
      while (!dq.empty()) {
        auto s = dq.front();
        dq.pop_front();
        Index v = Index(s / 3);
        int k = int(s % 3);
        for (Index w = 0; w < nv; ++w)
          for (auto& e : out[w])
            if (e.to == v && e.kind == k)
              for (int lk = 0; lk < 3; ++lk)
                if (allowed(lk, e.kind) && dist[state(w, lk)] == inf) {
                  dist[state(w, lk)] = dist[s] + 1;
                  dq.push_back(state(w, lk));
                }
      }
      auto s0 = state(first.to, 0);
      if (dist[s0] == inf) continue;
      std::size_t len = dist[s0] + 1;
      EfficientCycle c;
      c.exists = true;
      c.vertices = {u};
      c.kinds = {'v'};
      Index v = first.to;
      int k = 0;
      while (dist[state(v, k)] > 0) {
        c.vertices.push_back(v);
        for (auto& e : out[v])
          if (allowed(k, e.kind) && dist[state(e.to, e.kind)] + 1 == dist[state(v, k)]) {
            c.kinds.push_back(e.kind == 0 ? 'v' : e.kind == 1 ? 'E' : 'F');
            v = e.to;
            k = e.kind;
            break;
          }
      }
      if (len < best_len || (len == best_len && c.vertices < best.vertices)) {
        best_len = len;
        best = std::move(c);
      }
    }
  return best;
}

// A × B with 𝕄 = M ⊕ N as a bimodule over it.
template <class K>
struct SquareBimodule {
  AlgebraPtr<K> algebra;
  Bimodule<K> module;
};

template <class K>
SquareBimodule<K> square_bimodule(const AlgebraPtr<K>& A, const AlgebraPtr<K>& B, const Bimodule<K>& M,
                                  const Bimodule<K>& N) {
  auto AB = product_algebra(*A, *B);
  std::size_t da = A->dim(), dm = M.dim(), dn = N.dim(), d = dm + dn;
  auto embed = [&](const SparseMatrix<K>& x, std::size_t off) {
    std::vector<Triplet<K>> t;
    for (auto& e : x.triplets()) t.push_back({Index(e.row + off), Index(e.col + off), e.value});
    return SparseMatrix<K>::from_triplets(d, d, t);
  };
  std::vector<SparseMatrix<K>> l, r;
  for (Index i = 0; i < AB->dim(); ++i) {
    if (i < da) {
      l.push_back(embed(N.left_action(i), dm));
      r.push_back(embed(M.right_action(i), 0));
    } else {
      l.push_back(embed(M.left_action(Index(i - da)), 0));
      r.push_back(embed(N.right_action(Index(i - da)), dm));
    }
  }
  return {AB, Bimodule<K>::from_actions(AB, AB, d, std::move(l), std::move(r))};
}

// Smallest h <= h_max with 𝕄^{⊗h} = 0, by iterated tensor_over.
template <class K>
std::optional<std::size_t> tensor_nilpotence(const Bimodule<K>& MM, std::size_t h_max,
                                              std::size_t budget = kDefaultBudget) {
  if (MM.dim() == 0) return 1;
  Bimodule<K> power = MM;
  for (std::size_t h = 2; h <= h_max; ++h) {
    if (power.dim() * MM.dim() > budget)
      throw BudgetExceeded("tensor power " + std::to_string(h) + " exceeds the budget");
    power = tensor_over(power, MM);
    if (power.dim() == 0) return h;
  }
  return std::nullopt;
}

}  // namespace hhcat
