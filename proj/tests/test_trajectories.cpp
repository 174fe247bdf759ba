#include <gtest/gtest.h>

#include <set>

#include "hhcat/qset.hpp"
#include "hhcat/standard.hpp"
#include "hhcat/trajectories.hpp"
#include "support.hpp"

using namespace hhcat;
using hhcat::testing::Gen;
using Q = Rational;

namespace {

Quiver a2() { return Quiver({"x", "y"}, {{"a", 0, 1}}); }
Quiver round_trip() { return Quiver({"x", "y"}, {{"a", 0, 1}, {"b", 1, 0}}); }

std::set<std::string> labels(const Quiver& q, const std::vector<QPath>& ps) {
  std::set<std::string> s;
  for (auto& p : ps) s.insert(p.label(q));
  return s;
}

Quiver random_quiver(Gen& g, std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back("v" + std::to_string(i));
  std::vector<Arrow> a;
  for (Index s = 0; s < n; ++s)
    for (Index t = 0; t < n; ++t)
      if (s != t && g.chance(0.45)) a.push_back({"c" + std::to_string(a.size()), s, t});
  return Quiver(v, a);
}

std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Every valid object sequence one longer than tau's that contains tau's
// sequence after deleting one entry.
std::set<std::vector<Index>> insertions(const Quiver& q, const Trajectory& t) {
  auto obj = t.objects(q);
  std::set<std::vector<Index>> out;
  for (std::size_t i = 0; i <= obj.size(); ++i)
    for (Index x = 0; x < q.num_vertices(); ++x) {
      auto o = obj;
      o.insert(o.begin() + i, x);
      bool ok = true;
      for (std::size_t k = 1; k < o.size() && ok; ++k) ok = o[k] == o[k - 1] || q.arrow_between(o[k], o[k - 1]);
      if (ok) out.insert(o);
    }
  return out;
}

}  // namespace

TEST(Paths, Examples) {
  auto p = enumerate_paths(a2(), 3);
  EXPECT_EQ(labels(a2(), p.cycles), (std::set<std::string>{"x", "y"}));
  EXPECT_EQ(labels(a2(), p.noncycles), (std::set<std::string>{"a"}));
  auto r = enumerate_paths(round_trip(), 2);
  EXPECT_EQ(labels(round_trip(), r.cycles), (std::set<std::string>{"x", "y", "ba", "ab"}));
  EXPECT_EQ(labels(round_trip(), r.noncycles), (std::set<std::string>{"a", "b"}));
  Quiver empty({"u", "v", "w"}, {});
  auto e = enumerate_paths(empty, 4);
  EXPECT_TRUE(e.noncycles.empty());
  EXPECT_EQ(e.cycles.size(), 3u);
}

TEST(Paths, CountMatchesAdjacencyPowers) {
  Gen g(41);
  for (int it = 0; it < 20; ++it) {
    auto q = random_quiver(g, g.uniform(1, 4));
    std::size_t n = q.num_vertices();
    auto ps = enumerate_paths(q, 4);
    // walks of length L = sum of entries of adj^L
    std::vector<std::vector<std::size_t>> pow(n, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) pow[i][i] = 1;
    for (std::size_t L = 0; L <= 4; ++L) {
      std::size_t walks = 0, closed = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          walks += pow[i][j];
          if (i == j) closed += pow[i][j];
        }
      std::size_t got = 0, got_cycles = 0;
      for (auto& p : ps.all)
        if (p.length() == L) {
          ++got;
          got_cycles += p.is_cycle();
        }
      EXPECT_EQ(got, walks);
      EXPECT_EQ(got_cycles, closed);
      std::vector<std::vector<std::size_t>> next(n, std::vector<std::size_t>(n, 0));
      for (auto& a : q.arrows())
        for (std::size_t i = 0; i < n; ++i) next[i][a.target] += pow[i][a.source];
      pow = next;
    }
  }
}

TEST(Trajectories, Examples) {
  auto q = round_trip();
  auto a = QPath::of_arrows(q, {0});
  EXPECT_EQ(trajectories(a, 0).size(), 0u);
  ASSERT_EQ(trajectories(a, 1).size(), 1u);
  EXPECT_EQ(trajectories(a, 1)[0].waiting, (std::vector<std::size_t>{0, 0}));
  EXPECT_EQ(trajectories(a, 2).size(), 2u);
  EXPECT_EQ(trajectories(QPath::vertex(0), 5).size(), 1u);
}

TEST(Trajectories, CountIsBinomialBruteForce) {
  auto q = round_trip();
  auto ps = enumerate_paths(q, 8);
  for (auto& w : ps.all)
    for (std::size_t n = 0; n <= 8; ++n) {
      auto ts = trajectories(w, n);
      std::size_t m = w.length();
      // brute force: all tuples in [0, n]^{m+1} with the right sum
      std::size_t brute = 0;
      std::vector<std::size_t> p(m + 1, 0);
      while (m <= 3) {
        std::size_t s = m;
        for (auto x : p) s += x;
        brute += s == n;
        std::size_t k = 0;
        while (k <= m && ++p[k] > n) p[k++] = 0;
        if (k > m) break;
      }
      if (m <= 3) {
        EXPECT_EQ(ts.size(), brute);
      }
      EXPECT_EQ(ts.size(), n < m ? 0 : binomial(n, m));
      for (auto& t : ts) EXPECT_EQ(t.duration(), n);
      EXPECT_TRUE(std::is_sorted(ts.begin(), ts.end(), [](auto& x, auto& y) { return x.waiting < y.waiting; }));
      if (n == m) {
        ASSERT_EQ(ts.size(), 1u);
        EXPECT_EQ(ts[0].waiting, std::vector<std::size_t>(m + 1, 0));
      }
    }
}

TEST(Trajectories, ObjectsRoundTrip) {
  Gen g(42);
  for (int it = 0; it < 20; ++it) {
    auto q = random_quiver(g, g.uniform(1, 4));
    for (auto& w : enumerate_paths(q, 3).all)
      for (auto& t : trajectories(w, 4)) {
        auto obj = t.objects(q);
        EXPECT_EQ(obj.size(), t.duration() + 1);
        EXPECT_EQ(obj.front(), w.target);
        EXPECT_EQ(obj.back(), w.source);
        EXPECT_EQ(trajectory_from_objects(q, obj), t);
      }
  }
}

TEST(Successors, Examples) {
  auto q = a2();
  Trajectory x{QPath::vertex(0), {3}};
  auto s = successors(q, x);
  EXPECT_EQ(s.tau0.size(), 1u);
  EXPECT_EQ(s.tau1.size(), 1u);
  EXPECT_TRUE(s.tau2.empty());

  auto r = round_trip();
  auto t = trajectories(QPath::of_arrows(r, {0}), 1)[0];
  auto sr = successors(r, t);
  EXPECT_EQ(sr.tau0.size(), 2u);
  EXPECT_EQ(sr.tau1.size(), 2u);
  EXPECT_TRUE(sr.tau2.empty());
  // x^2 on the round trip: the waiting units can each become the 2-cycle ba
  auto sx = successors(r, Trajectory{QPath::vertex(0), {2}});
  EXPECT_EQ(sx.tau2.size(), 2u);
  for (auto& u : sx.tau2) {
    EXPECT_EQ(u.replaced, 0u);
    EXPECT_EQ(u.trajectory.path.length(), 2u);
  }
}

TEST(Successors, DisjointAndEqualToSingleInsertions) {
  Gen g(43);
  for (int it = 0; it < 20; ++it) {
    auto q = random_quiver(g, g.uniform(1, 4));
    for (auto& w : enumerate_paths(q, 3).all)
      for (std::size_t n = w.length(); n <= 4; ++n)
        for (auto& t : trajectories(w, n)) {
          auto s = successors(q, t);
          EXPECT_EQ(s.tau0.size(), w.length() + 1);
          std::set<std::vector<Index>> all;
          std::size_t count = 0;
          auto add = [&](const Trajectory& u) {
            EXPECT_EQ(u.duration(), n + 1);
            all.insert(u.objects(q));
            ++count;
          };
          for (auto& u : s.tau0) add(u);
          for (auto& u : s.tau1) add(u);
          for (auto& u : s.tau2) {
            add(u.trajectory);
            EXPECT_EQ(u.trajectory.path.length(), w.length() + (u.replaced ? 1 : 2));
          }
          EXPECT_EQ(all.size(), count);  // pairwise disjoint
          EXPECT_EQ(all, insertions(q, t));
        }
  }
}

TEST(Evaluate, Examples) {
  auto k = field_algebra<Q>();
  Quiver one({"x"}, {});
  QSet<Q> d1(one, {k}, {});
  EXPECT_EQ(evaluate(Trajectory{QPath::vertex(0), {4}}, d1).dim, 1u);

  auto A = semisimple_algebra<Q>(2);           // dim 2 at x
  auto B = standard::linear_path_algebra<Q>(2);  // dim 3 at y
  auto M = free_corner_bimodule(B, 1, 0, A);  // dim 1
  auto M2 = direct_sum(M, M);
  QSet<Q> d(a2(), {A, B}, {M2});
  auto a = QPath::of_arrows(d.quiver(), {0});
  EXPECT_EQ(evaluate(trajectories(a, 1)[0], d).dim, 2u);
  auto e = evaluate(Trajectory{a, {1, 1}}, d);
  EXPECT_EQ(e.dim, 12u);
  EXPECT_EQ(e.factor_dims, (std::vector<std::size_t>{3, 2, 2}));
  EXPECT_EQ(e.digits_of(e.index_of({2, 1, 0})), (std::vector<std::size_t>{2, 1, 0}));
  EXPECT_EQ(e.index_of({1, 0, 0}), 4u);
}

TEST(Evaluate, DecompositionMatchesBalancedTensorPower) {
  Gen g(44);
  for (int it = 0; it < 8; ++it) {
    std::size_t nv = g.uniform(1, 3);
    auto q = random_quiver(g, nv);
    std::vector<AlgebraPtr<Q>> algs;
    for (std::size_t x = 0; x < nv; ++x)
      algs.push_back(g.chance(0.5) ? field_algebra<Q>() : standard::truncated_polynomial<Q>(2));
    std::vector<Bimodule<Q>> mods;
    for (auto& a : q.arrows()) mods.push_back(free_corner_bimodule(algs[a.target], 0, 0, algs[a.source]));
    QSet<Q> d(q, algs, mods);
    auto lam = assemble_lambda(d);
    auto D = semisimple_algebra<Q>(nv);
    auto L = restrict_scalars(Bimodule<Q>::regular(lam.algebra), D, lam.algebra->system(), D, lam.algebra->system());
    auto paths = enumerate_paths(q, 4);
    Bimodule<Q> power = L;
    for (std::size_t n = 1; n <= 4; ++n) {
      if (n > 1) power = tensor_over(power, L);
      std::size_t sum = 0;
      for (auto& w : paths.all)
        for (auto& t : trajectories(w, n)) sum += evaluate(t, d).dim;
      EXPECT_EQ(sum, power.dim()) << "n = " << n;
    }
  }
}
