#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hhcat/bimodule.hpp"
#include "hhcat/complexes.hpp"
#include "hhcat/errors.hpp"
#include "hhcat/exactla.hpp"
#include "hhcat/qset.hpp"
#include "hhcat/trajectories.hpp"

namespace hhcat {

// Chain complex with differentials lowering degree; d[n] maps degree n to
// degree n - 1, and d[0] is the augmentation onto the resolved module.
template <class K>
struct ChainComplexDown {
  std::vector<std::size_t> dims;
  std::vector<std::vector<std::string>> labels;  // summand labels per degree
  std::size_t augmented_dim = 0;
  std::vector<SparseMatrix<K>> d;
};

namespace detail {

// The resolution C•(M) = ⊕_{p+q=n+2} B^q M A^p of a B-A bimodule, with β
// evaluated on single basis tuples (b_1..b_q, m, a_1..a_p), row-major.
template <class K>
class Resolution {
 public:
  struct Summand {
    std::size_t q, p, dim, offset;
  };

  explicit Resolution(const Bimodule<K>& m) : m_(m), db_(m.left_algebra()->dim()), da_(m.right_algebra()->dim()) {}

  const Bimodule<K>& module() const { return m_; }

  // Summands of degree n, q from n + 1 down to 1.
  std::vector<Summand> summands(std::size_t n) const {
    std::vector<Summand> s;
    std::size_t off = 0;
    for (std::size_t q = n + 1; q >= 1; --q) {
      std::size_t p = n + 2 - q;
      std::size_t d = power(db_, q) * m_.dim() * power(da_, p);
      s.push_back({q, p, d, off});
      off += d;
    }
    return s;
  }
  std::size_t dim(std::size_t n) const {
    auto s = summands(n);
    return s.back().offset + s.back().dim;
  }

  // Digits (b_1..b_q, m, a_1..a_p) of a tuple index.
  std::vector<Index> digits(std::size_t q, std::size_t p, std::size_t idx) const {
    std::vector<Index> d(q + 1 + p);
    for (std::size_t i = d.size(); i-- > 0;) {
      std::size_t base = i < q ? db_ : (i == q ? m_.dim() : da_);
      d[i] = Index(idx % base);
      idx /= base;
    }
    return d;
  }
  std::size_t index(std::size_t q, std::size_t, const std::vector<Index>& d) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < d.size(); ++i) idx = idx * (i < q ? db_ : (i == q ? m_.dim() : da_)) + d[i];
    return idx;
  }

  // β_n on one basis tuple of summand (q, p) in degree n; for n = 0 the image
  // lies in M.
  SparseVector<K> beta(std::size_t n, std::size_t q, std::size_t p, const std::vector<Index>& t) const {
    const auto& B = *m_.left_algebra();
    const auto& A = *m_.right_algebra();
    if (n == 0) {
      // b m a
      auto v = m_.left_action(t[0]).column(t[1]);
      return m_.right_action(t[2]).apply(v);
    }
    auto lower = summands(n - 1);
    auto offset_of = [&](std::size_t qq) {
      for (auto& s : lower)
        if (s.q == qq) return s.offset;
      throw ConsistencyFailure("resolution summand missing");
    };
    std::vector<Entry<K>> raw;
    auto emit = [&](std::size_t qq, std::size_t pp, std::vector<Index> d, const K& c) {
      raw.push_back({Index(offset_of(qq) + index(qq, pp, d)), c});
    };
    if (q >= 2) {
      for (std::size_t i = 1; i < q; ++i) {
        K sign((i + 1) % 2 ? -1 : 1);
        for (auto& e : B.product(t[i - 1], t[i])) {
          std::vector<Index> d(t.begin(), t.begin() + (i - 1));
          d.push_back(e.index);
          d.insert(d.end(), t.begin() + (i + 1), t.end());
          emit(q - 1, p, std::move(d), sign * e.value);
        }
      }
      K sign((q + 1) % 2 ? -1 : 1);
      for (auto& e : m_.left_action(t[q - 1]).column(t[q])) {
        std::vector<Index> d(t.begin(), t.begin() + (q - 1));
        d.push_back(e.index);
        d.insert(d.end(), t.begin() + (q + 1), t.end());
        emit(q - 1, p, std::move(d), sign * e.value);
      }
    }
    if (p >= 2) {
      K outer((q - 1) % 2 ? -1 : 1);
      for (auto& e : m_.right_action(t[q + 1]).column(t[q])) {
        std::vector<Index> d(t.begin(), t.begin() + q);
        d.push_back(e.index);
        d.insert(d.end(), t.begin() + (q + 2), t.end());
        emit(q, p - 1, std::move(d), outer * e.value);
      }
      for (std::size_t i = 1; i < p; ++i) {
        K sign = outer * K(i % 2 ? -1 : 1);
        std::size_t pos = q + i;  // a_i sits at t[pos]
        for (auto& e : A.product(t[pos], t[pos + 1])) {
          std::vector<Index> d(t.begin(), t.begin() + pos);
          d.push_back(e.index);
          d.insert(d.end(), t.begin() + (pos + 2), t.end());
          emit(q, p - 1, std::move(d), sign * e.value);
        }
      }
    }
    return SparseVector<K>::from_unsorted(std::move(raw));
  }

  static std::size_t power(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= b;
    return r;
  }

 private:
  const Bimodule<K>& m_;
  std::size_t db_, da_;
};

}  // namespace detail

template <class K>
ChainComplexDown<K> arrow_resolution(const Bimodule<K>& M, std::size_t n_max, std::size_t budget = kDefaultBudget) {
  detail::Resolution<K> r(M);
  ChainComplexDown<K> c;
  c.augmented_dim = M.dim();
  std::size_t total = 0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    total += r.dim(n);
    if (total > budget) throw BudgetExceeded("resolution up to degree " + std::to_string(n) + " exceeds the budget");
    std::vector<std::string> labels;
    std::vector<SparseVector<K>> cols;
    for (auto& s : r.summands(n)) {
      labels.push_back("B^" + std::to_string(s.q) + "MA^" + std::to_string(s.p));
      for (std::size_t i = 0; i < s.dim; ++i) cols.push_back(r.beta(n, s.q, s.p, r.digits(s.q, s.p, i)));
    }
    c.dims.push_back(r.dim(n));
    c.labels.push_back(std::move(labels));
    c.d.push_back(SparseMatrix<K>::from_columns(n == 0 ? M.dim() : r.dim(n - 1), std::move(cols)));
  }
  for (std::size_t n = 0; n + 1 < c.d.size(); ++n)
    if (!(c.d[n] * c.d[n + 1]).is_zero()) throw CompositionNotZero("resolution differential squares to nonzero");
  return c;
}

// Ext^r_{B-A}(M, X) for r = 0 .. r_max, via Hom_{B-A}(B Y A, X) = Hom_k(Y, X)
// where each summand B^q M A^p is B ⊗ (B^{q-1} M A^{p-1}) ⊗ A.
template <class K>
std::vector<std::size_t> ext_bimodule(const Bimodule<K>& M, const Bimodule<K>& X, std::size_t r_max,
                                      std::size_t budget = kDefaultBudget) {
  if (!same_algebra(M.left_algebra(), X.left_algebra()) || !same_algebra(M.right_algebra(), X.right_algebra()))
    throw AlgebraMismatch("ext_bimodule: the two bimodules are over different algebra pairs");
  if (M.dim() == 0 || X.dim() == 0) return std::vector<std::size_t>(r_max + 1, 0);
  detail::Resolution<K> res(M);
  const auto& B = *M.left_algebra();
  const auto& A = *M.right_algebra();
  std::size_t db = B.dim(), da = A.dim(), dx = X.dim();

  // generator space Y of each summand in degree n, and the cochain layout
  struct Gen {
    std::size_t q, p, ydim, offset;
  };
  auto gens = [&](std::size_t n) {
    std::vector<Gen> g;
    std::size_t off = 0;
    for (auto& s : res.summands(n)) {
      std::size_t y = s.dim / (db * da);
      g.push_back({s.q, s.p, y, off});
      off += y * dx;
    }
    return g;
  };
  auto cochain_dim = [&](std::size_t n) {
    auto g = gens(n);
    return g.back().offset + g.back().ydim * dx;
  };
  std::size_t total = 0;
  for (std::size_t n = 0; n <= r_max + 1; ++n) {
    total += cochain_dim(n);
    if (total > budget) throw BudgetExceeded("Ext cochains up to degree " + std::to_string(n) + " exceed the budget");
  }

  // δ_n : Hom(Y_n, X) -> Hom(Y_{n+1}, X), (δφ)(y') = Φ(β(1 ⊗ y' ⊗ 1)).
  std::vector<SparseMatrix<K>> delta;
  for (std::size_t n = 0; n <= r_max; ++n) {
    auto lo = gens(n), hi = gens(n + 1);
    auto lo_sum = res.summands(n);
    MatrixBuilder<K> mb(cochain_dim(n + 1), cochain_dim(n));
    for (auto& h : hi) {
      for (std::size_t y = 0; y < h.ydim; ++y) {
        // β(1 ⊗ y ⊗ 1) with both units expanded in the bases
        std::vector<Index> inner = res.digits(h.q - 1, h.p - 1, y);  // digits of Y as a (q-1, p-1) tuple
        SparseVector<K> img;
        for (auto& ub : B.unit())
          for (auto& ua : A.unit()) {
            std::vector<Index> t{ub.index};
            t.insert(t.end(), inner.begin(), inner.end());
            t.push_back(ua.index);
            img = img.plus_scaled(res.beta(n + 1, h.q, h.p, t), ub.value * ua.value);
          }
        for (auto& e : img) {
          std::size_t k = 0;
          while (k + 1 < lo_sum.size() && e.index >= lo_sum[k + 1].offset) ++k;
          const auto& s = lo_sum[k];
          auto d = res.digits(s.q, s.p, e.index - s.offset);
          Index bj = d.front(), al = d.back();
          std::vector<Index> yd(d.begin() + 1, d.end() - 1);
          std::size_t ylo = res.index(s.q - 1, s.p - 1, yd);
          for (Index x = 0; x < dx; ++x) {
            auto v = X.right_action(al).apply(X.left_action(bj).column(x));
            for (auto& f : v)
              mb.add(Index(h.offset + y * dx + f.index), Index(lo[k].offset + ylo * dx + x), e.value * f.value);
          }
        }
      }
    }
    delta.push_back(mb.build());
  }
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r <= r_max; ++r) {
    std::size_t in = r > 0 ? rank(delta[r - 1]) : 0;
    out.push_back(cochain_dim(r) - rank(delta[r]) - in);
  }
  return out;
}

// Tor_n^B(M, N) for n = 0 .. n_max from M ⊗ B^{⊗n} ⊗ N with the bar differential.
template <class K>
std::vector<std::size_t> tor_over(const Bimodule<K>& M, const Bimodule<K>& N, std::size_t n_max,
                                  std::size_t budget = kDefaultBudget) {
  if (!same_algebra(M.right_algebra(), N.left_algebra()))
    throw AlgebraMismatch("tor_over: M and N are not over a common middle algebra");
  const auto& B = *M.right_algebra();
  std::size_t dm = M.dim(), dn = N.dim(), db = B.dim();
  if (dm == 0 || dn == 0) return std::vector<std::size_t>(n_max + 1, 0);
  auto dim = [&](std::size_t n) { return dm * detail::Resolution<K>::power(db, n) * dn; };
  std::size_t total = 0;
  for (std::size_t n = 0; n <= n_max + 1; ++n) {
    total += dim(n);
    if (total > budget) throw BudgetExceeded("Tor chains up to degree " + std::to_string(n) + " exceed the budget");
  }
  // ∂_n : C_n -> C_{n-1}, n = 1 .. n_max + 1
  std::vector<SparseMatrix<K>> del(n_max + 2);
  for (std::size_t n = 1; n <= n_max + 1; ++n) {
    std::size_t bn = detail::Resolution<K>::power(db, n), bn1 = bn / db;
    MatrixBuilder<K> mb(dim(n - 1), dim(n));
    for (std::size_t idx = 0; idx < dim(n); ++idx) {
      std::size_t x = idx % dn, rest = idx / dn, bt = rest % bn, m = rest / bn;
      std::vector<Index> b(n);
      for (std::size_t i = n; i-- > 0;) {
        b[i] = Index(bt % db);
        bt /= db;
      }
      auto bidx = [&](const std::vector<Index>& bs) {
        std::size_t r = 0;
        for (auto v : bs) r = r * db + v;
        return r;
      };
      std::vector<Index> tail(b.begin() + 1, b.end());
      for (auto& e : M.right_action(b[0]).column(m))
        mb.add(Index((e.index * bn1 + bidx(tail)) * dn + x), Index(idx), e.value);
      for (std::size_t i = 1; i < n; ++i)
        for (auto& e : B.product(b[i - 1], b[i])) {
          std::vector<Index> c(b.begin(), b.begin() + (i - 1));
          c.push_back(e.index);
          c.insert(c.end(), b.begin() + (i + 1), b.end());
          mb.add(Index((m * bn1 + bidx(c)) * dn + x), Index(idx), K(i % 2 ? -1 : 1) * e.value);
        }
      std::vector<Index> head(b.begin(), b.end() - 1);
      for (auto& e : N.left_action(b[n - 1]).column(x))
        mb.add(Index((m * bn1 + bidx(head)) * dn + e.index), Index(idx), K(n % 2 ? -1 : 1) * e.value);
    }
    del[n] = mb.build();
  }
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n <= n_max; ++n) {
    std::size_t out_rank = n > 0 ? rank(del[n]) : 0;
    out.push_back(dim(n) - out_rank - rank(del[n + 1]));
  }
  return out;
}

// M_ω = M_{a_m} ⊗ ... ⊗ M_{a_1} over the intermediate vertex algebras.
template <class K>
Bimodule<K> bimodule_along(const QSet<K>& d, const QPath& w) {
  if (w.length() == 0) return Bimodule<K>::regular(d.algebra(w.source));
  Bimodule<K> m = d.bimodule(w.a(w.length()));
  for (std::size_t i = w.length() - 1; i >= 1; --i) m = tensor_over(m, d.bimodule(w.a(i)));
  return m;
}

// Δ_ω = t(ω) Λ s(ω) as an A_t(ω)-A_s(ω) bimodule.
template <class K>
Bimodule<K> counterpart(const QSet<K>& d, const QPath& w) {
  if (w.is_cycle()) return Bimodule<K>::regular(d.algebra(w.source));
  auto a = d.quiver().arrow_between(w.source, w.target);
  if (a) return d.bimodule(*a);
  return Bimodule<K>::zero(d.algebra(w.target), d.algebra(w.source));
}

struct TorVanishing {
  bool vanishing = true;
  std::size_t verified_to = 0;  // degrees 1 .. verified_to were checked
  std::size_t i = 0, n = 0;     // offending Tor_n(M_{a_i}, M_{a_{i-1}..a_1}) when not vanishing
};

template <class K>
TorVanishing tor_vanishing(const QSet<K>& d, const QPath& w, std::size_t n_max, std::size_t budget = kDefaultBudget) {
  TorVanishing out;
  out.verified_to = n_max;
  std::size_t m = w.length();
  Bimodule<K> below = d.bimodule(w.a(1));
  for (std::size_t i = 2; i <= m; ++i) {
    const auto& ai = d.bimodule(w.a(i));
    auto t = tor_over(ai, below, n_max, budget);
    for (std::size_t n = 1; n <= n_max; ++n)
      if (t[n] != 0) return {false, n_max, i, n};
    below = tensor_over(ai, below);
  }
  return out;
}

// H^{m+r}_ω for r = 0 .. r_max as Ext^r(M_ω, Δ_ω). M_ω is resolved directly
// by arrow_resolution over (A_t(ω), A_s(ω)).
template <class K>
std::vector<std::size_t> along_path_via_ext(const QSet<K>& d, const QPath& w, std::size_t r_max,
                                            std::size_t tor_degree, std::size_t budget = kDefaultBudget) {
  if (w.length() == 0) throw Error("along_path_via_ext needs a path of positive length");
  if (w.length() >= 2) {
    auto tv = tor_vanishing(d, w, tor_degree, budget);
    if (!tv.vanishing)
      throw TorHypothesisFails("Tor_" + std::to_string(tv.n) + " of M_a" + std::to_string(tv.i) +
                               " against the bimodule below it is nonzero on path " + w.label(d.quiver()));
  }
  auto target = counterpart(d, w);
  if (target.dim() == 0) return std::vector<std::size_t>(r_max + 1, 0);
  return ext_bimodule(bimodule_along(d, w), target, r_max, budget);
}

}  // namespace hhcat
