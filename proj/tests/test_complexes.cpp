#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "hhcat/complexes.hpp"

using namespace hhcat;
using namespace hhcat::testing;
using Q = Rational;
using V = SparseVector<Q>;
using Dims = std::vector<std::size_t>;

namespace {

// Module along a path: M_{a_m} ⊗ ... ⊗ M_{a_1}, or the vertex algebra.
Bimodule<Q> along(const QSet<Q>& d, const QPath& w) {
  if (w.length() == 0) return Bimodule<Q>::regular(d.algebra(w.source));
  Bimodule<Q> m = d.bimodule(w.a(w.length()));
  for (std::size_t i = w.length() - 1; i >= 1; --i) m = tensor_over(m, d.bimodule(w.a(i)));
  return m;
}

// Independent cohomology oracle: the bar complex when it fits, otherwise the
// complex relative to the finest idempotent system of Λ.
Dims oracle_dims(const QSet<Q>& d, std::size_t n_max) {
  auto lam = assemble_lambda(d);
  try {
    return bar_hochschild(lam.algebra, n_max, 2'000'000).dims();
  } catch (const BudgetExceeded&) {
    return cohomology(separable_complex(lam.algebra, lam.fine, n_max)).dims();
  }
}

}  // namespace

TEST(Bar, Examples) {
  EXPECT_EQ(bar_hochschild(field_algebra<Q>(), 3).dims(), (Dims{1, 0, 0, 0}));
  EXPECT_EQ(bar_hochschild(standard::linear_path_algebra<Q>(2), 3).dims(), (Dims{1, 0, 0, 0}));
  EXPECT_EQ(bar_hochschild(standard::truncated_polynomial<Q>(2), 3).dims(), (Dims{2, 1, 1, 1}));
  EXPECT_THROW(bar_hochschild(standard::quantum_exterior<Q>(Q(2)), 12, 1000), BudgetExceeded);
}

TEST(Bar, BudgetOnTopDegreeOnlyTruncates) {
  auto alg = standard::truncated_polynomial<Q>(2);
  // degrees 0..2 fit (2 + 4 + 8 = 14) but degree 3 does not
  auto c = separable_complex(alg, {alg->unit()}, 2, 20);
  EXPECT_TRUE(c.truncated);
  auto h = cohomology(c);
  EXPECT_TRUE(h.degrees[1].exact);
  EXPECT_FALSE(h.degrees[2].exact);
  EXPECT_GE(h.degrees[2].dim, 1u);
}

TEST(Relative, DimensionsOnA2) {
  auto J = relative_complex(a2_all_k<Q>(), 5);
  EXPECT_EQ(J.dim(0), 2u);
  for (std::size_t n = 1; n <= 5; ++n) EXPECT_EQ(J.dim(n), n + 2);
  EXPECT_EQ(cohomology(J).dims(), (Dims{1, 0, 0, 0, 0, 0}));
}

TEST(Relative, AgreesWithOracle) {
  std::vector<QSet<Q>> sets{a2_all_k<Q>(), round_trip_all_k<Q>(), one_point<Q>(standard::truncated_polynomial<Q>(2)),
                            triangle_all_k<Q>(), one_point<Q>(standard::quantum_exterior<Q>(Q(2)))};
  for (auto& d : sets) EXPECT_EQ(cohomology(relative_complex(d, 4)).dims(), oracle_dims(d, 4));
  Gen g(51);
  for (int it = 0; it < 12; ++it) {
    auto d = random_qset<Q>(g);
    EXPECT_EQ(cohomology(relative_complex(d, 3)).dims(), oracle_dims(d, 3));
  }
}

TEST(Relative, AgreesOverPrimeField) {
  ModP::Scope scope(1000003);
  using F = ModP;
  auto d = one_point<F>(standard::truncated_polynomial<F>(2));
  auto lam = assemble_lambda(d);
  EXPECT_EQ(cohomology(relative_complex(d, 3)).dims(), bar_hochschild(lam.algebra, 3).dims());
}

// Rebuild d on a block-supported cochain from the raw Hochschild formula on
// the full tensor powers of Λ, and compare with the block-assembled column.
TEST(Relative, BlockAssemblyMatchesNaiveFormula) {
  Gen g(52);
  std::vector<QSet<Q>> sets{round_trip_all_k<Q>(), triangle_all_k<Q>(), one_point<Q>(standard::truncated_polynomial<Q>(2))};
  for (int it = 0; it < 4; ++it) sets.push_back(random_qset<Q>(g));
  for (auto& d : sets) {
    auto J = relative_complex(d, 2);
    const auto& cat = *J.category;
    const auto& L = *cat.algebra();
    std::size_t dim = L.dim();
    // local basis element l of C(x -> y) -> global basis index (bases are unit vectors here)
    auto global = [&](Index y, Index x, Index l) {
      const auto& b = cat.hom(y, x).basis()[l];
      EXPECT_EQ(b.nnz(), 1u);
      return b.entries()[0].index;
    };
    for (std::size_t n = 0; n <= 2; ++n) {
      const auto& src = J.spaces[n];
      const auto& dst = J.spaces[n + 1];
      // column sample
      for (std::size_t col = 0; col < src.dim; col += 1 + g.uniform(0, 3)) {
        const Block* tb = nullptr;
        for (auto& b : src.blocks)
          if (col >= b.offset && col < b.offset + b.dim) tb = &b;
        std::size_t local = col - tb->offset, tt = local / tb->out_dim, o = local % tb->out_dim;
        // the cochain f as a function on global basis n-tuples
        std::vector<Index> in_tuple(n);
        {
          std::size_t rest = tt;
          for (std::size_t i = n; i-- > 0;) {
            Index l = Index(rest % tb->factor_dims[i]);
            rest /= tb->factor_dims[i];
            in_tuple[i] = global(tb->objects[i], tb->objects[i + 1], l);
          }
        }
        Index out_g = global(tb->objects.front(), tb->objects.back(), Index(o));
        auto f = [&](const std::vector<V>& xs) {
          // multilinear evaluation: coefficient of the supporting tuple
          Q c(1);
          for (std::size_t i = 0; i < n; ++i) c = c * xs[i].at(in_tuple[i]);
          return V::unit(out_g, c);
        };
        // naive df on every global (n+1)-tuple
        std::size_t total = 1;
        for (std::size_t i = 0; i <= n; ++i) total *= dim;
        std::map<std::pair<std::vector<Index>, Index>, Q> naive;
        for (std::size_t idx = 0; idx < total; ++idx) {
          std::vector<Index> b(n + 1);
          std::size_t rest = idx;
          for (std::size_t i = n + 1; i-- > 0;) {
            b[i] = Index(rest % dim);
            rest /= dim;
          }
          std::vector<V> xs;
          for (auto i : b) xs.push_back(V::unit(i));
          V acc = L.multiply(xs[0], f({xs.begin() + 1, xs.end()}));
          for (std::size_t i = 1; i <= n; ++i) {
            std::vector<V> ys(xs.begin(), xs.begin() + (i - 1));
            ys.push_back(L.multiply(xs[i - 1], xs[i]));
            ys.insert(ys.end(), xs.begin() + (i + 1), xs.end());
            acc = acc.plus_scaled(f(ys), i % 2 ? Q(-1) : Q(1));
          }
          acc = acc.plus_scaled(L.multiply(f({xs.begin(), xs.begin() + n}), xs[n]), (n + 1) % 2 ? Q(-1) : Q(1));
          for (auto& e : acc) naive[{b, e.index}] = e.value;
        }
        // read the block-assembled column back as a function on global tuples
        std::map<std::pair<std::vector<Index>, Index>, Q> blockwise;
        for (auto& e : J.d[n].column(col)) {
          const Block* sb = nullptr;
          for (auto& b : dst.blocks)
            if (e.index >= b.offset && e.index < b.offset + b.dim) sb = &b;
          std::size_t loc = e.index - sb->offset, st = loc / sb->out_dim, so = loc % sb->out_dim;
          std::vector<Index> b(n + 1);
          for (std::size_t i = n + 1; i-- > 0;) {
            b[i] = global(sb->objects[i], sb->objects[i + 1], Index(st % sb->factor_dims[i]));
            st /= sb->factor_dims[i];
          }
          blockwise[{b, global(sb->objects.front(), sb->objects.back(), Index(so))}] = e.value;
        }
        EXPECT_EQ(naive, blockwise) << "degree " << n << " column " << col;
      }
    }
  }
}

TEST(Relative, NoncycleBlocksOnlyReachTau0) {
  Gen g(53);
  for (int it = 0; it < 8; ++it) {
    auto d = random_qset<Q>(g);
    auto J = relative_complex(d, 3);
    for (std::size_t n = 0; n < J.d.size(); ++n)
      for (auto& tb : J.spaces[n].blocks) {
        if (tb.trajectory->path.is_cycle()) continue;
        for (std::size_t c = tb.offset; c < tb.offset + tb.dim; ++c)
          for (auto& e : J.d[n].column(c))
            for (auto& sb : J.spaces[n + 1].blocks)
              if (e.index >= sb.offset && e.index < sb.offset + sb.dim) {
                EXPECT_EQ(sb.trajectory->path, tb.trajectory->path);
              }
      }
  }
}

TEST(Split, Examples) {
  Gen g(54);
  std::vector<QSet<Q>> sets{a2_all_k<Q>(), round_trip_all_k<Q>(), triangle_all_k<Q>(),
                            one_point<Q>(standard::truncated_polynomial<Q>(2))};
  for (int it = 0; it < 6; ++it) sets.push_back(random_qset<Q>(g));
  for (auto& d : sets) {
    auto J = relative_complex(d, 3);
    auto s = split_noncycle(J);
    EXPECT_EQ(s.D.dim(0), 0u);
    for (std::size_t n = 0; n < J.spaces.size(); ++n) EXPECT_EQ(s.D.dim(n) + s.C.dim(n), J.dim(n));
    std::size_t centers = 0, ends = 0;
    for (auto& a : d.algebras()) centers += a->center().dim();
    for (auto& m : d.bimodules()) ends += hom_bimodule(m, m).dim();
    EXPECT_EQ(cohomology(s.C).dims()[0], centers);
    EXPECT_EQ(cohomology(s.D).dims()[1], ends);

    // degreewise decomposition along paths
    auto hD = cohomology(s.D).dims(), hC = cohomology(s.C).dims();
    Dims sumD(4, 0), sumC(4, 0);
    for (auto& w : enumerate_paths(d.quiver(), 3).all) {
      auto h = cohomology(along_path_complex(d, w, 3)).dims();
      for (std::size_t n = 0; n <= 3; ++n) (w.is_cycle() ? sumC : sumD)[n] += h[n];
    }
    EXPECT_EQ(hD, sumD);
    EXPECT_EQ(hC, sumC);
  }
}

TEST(AlongPath, Examples) {
  // vertex: Hochschild cohomology of A_x
  auto d = one_point<Q>(standard::truncated_polynomial<Q>(2));
  EXPECT_EQ(cohomology(along_path_complex(d, QPath::vertex(0), 3)).dims(), (Dims{2, 1, 1, 1}));
  EXPECT_EQ(cohomology(along_path_complex(d, QPath::vertex(1), 3)).dims(), (Dims{1, 0, 0, 0}));

  // non-cycle of length m: H^m = Hom(M_delta, Delta_delta)
  auto t = triangle_all_k<Q>();
  const Quiver& q = t.quiver();
  auto ba = QPath::of_arrows(q, {1, 0});
  auto h = cohomology(along_path_complex(t, ba, 3)).dims();
  EXPECT_EQ(h[2], hom_bimodule(along(t, ba), t.bimodule(2)).dim());
  EXPECT_EQ(h[2], 1u);

  // no parallel arrow: zero complex
  auto k = field_algebra<Q>();
  auto r = Bimodule<Q>::regular(k);
  QSet<Q> line(Quiver({"x", "y", "z"}, {{"a", 0, 1}, {"b", 1, 2}}), {k, k, k}, {r, r});
  auto K = along_path_complex(line, QPath::of_arrows(line.quiver(), {1, 0}), 3);
  EXPECT_EQ(K.dim(2), 0u);
  EXPECT_EQ(cohomology(K).dims(), (Dims{0, 0, 0, 0}));
}

TEST(AlongPath, NoncycleLowestDegreeIsHom) {
  Gen g(55);
  for (int it = 0; it < 10; ++it) {
    auto d = random_qset<Q>(g, 3, 0.6);
    for (auto& w : enumerate_paths(d.quiver(), 2).noncycles) {
      auto arrow = d.quiver().arrow_between(w.source, w.target);
      std::size_t expect = arrow ? hom_bimodule(along(d, w), d.bimodule(*arrow)).dim() : 0;
      EXPECT_EQ(cohomology(along_path_complex(d, w, w.length())).dims()[w.length()], expect);
    }
  }
}

TEST(Cohomology, Examples) {
  CochainComplex<Q> z;
  z.n_max = 2;
  z.spaces.resize(3);
  z.d = {SparseMatrix<Q>::zero(0, 0), SparseMatrix<Q>::zero(0, 0)};
  EXPECT_EQ(cohomology(z).dims(), (Dims{0, 0, 0}));

  CochainComplex<Q> flat;
  flat.n_max = 1;
  flat.spaces.resize(3);
  flat.spaces[0].dim = 2;
  flat.spaces[1].dim = 3;
  flat.spaces[2].dim = 1;
  flat.d = {SparseMatrix<Q>::zero(3, 2), SparseMatrix<Q>::zero(1, 3)};
  EXPECT_EQ(cohomology(flat).dims(), (Dims{2, 3}));
}

TEST(Cohomology, RepresentativesAreIndependentCocycles) {
  Gen g(56);
  for (int it = 0; it < 6; ++it) {
    auto d = random_qset<Q>(g);
    auto J = relative_complex(d, 3);
    auto h = cohomology(J, true);
    for (std::size_t n = 0; n <= 3; ++n) {
      const auto& deg = h.degrees[n];
      ASSERT_EQ(deg.reps.size(), deg.dim);
      for (auto& r : deg.reps) EXPECT_TRUE(J.d[n].apply(r).empty());
      std::vector<V> b;
      if (n > 0) b = J.d[n - 1].columns();
      EXPECT_NO_THROW(QuotientCoordinates<Q>(J.dim(n), b, deg.reps));
    }
  }
}
