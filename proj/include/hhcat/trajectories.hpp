#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "hhcat/algebra.hpp"
#include "hhcat/errors.hpp"
#include "hhcat/qset.hpp"

namespace hhcat {

// Path a_m ... a_1 in composition order: arrows[0] = a_m is traversed last.
// A path of length 0 is a vertex.
struct QPath {
  std::vector<Index> arrows;
  Index source = 0;
  Index target = 0;

  static QPath vertex(Index x) { return {{}, x, x}; }
  static QPath of_arrows(const Quiver& q, std::vector<Index> arrows) {
    if (arrows.empty()) throw Error("QPath::of_arrows: use QPath::vertex for length 0");
    for (std::size_t i = 0; i + 1 < arrows.size(); ++i)
      if (q.arrow(arrows[i]).source != q.arrow(arrows[i + 1]).target)
        throw Error("arrows '" + q.arrow(arrows[i + 1]).label + "' and '" + q.arrow(arrows[i]).label +
                    "' are not concatenable");
    Index s = q.arrow(arrows.back()).source, t = q.arrow(arrows.front()).target;
    return {std::move(arrows), s, t};
  }

  std::size_t length() const { return arrows.size(); }
  bool is_cycle() const { return source == target; }
  // Arrow a_i for 1 <= i <= m.
  Index a(std::size_t i) const { return arrows[arrows.size() - i]; }

  // Vertices s(a_1), s(a_2) = t(a_1), ..., t(a_m): m + 1 of them.
  std::vector<Index> vertices(const Quiver& q) const {
    std::vector<Index> v{source};
    for (std::size_t i = 1; i <= length(); ++i) v.push_back(q.arrow(a(i)).target);
    return v;
  }

  std::string label(const Quiver& q) const {
    if (arrows.empty()) return q.vertex_label(source);
    std::string s;
    for (Index a : arrows) s += q.arrow(a).label;
    return s;
  }

  // omega' omega, defined when s(omega') = t(omega).
  QPath then(const QPath& later) const {
    QPath p = later;
    p.arrows.insert(p.arrows.end(), arrows.begin(), arrows.end());
    p.source = source;
    return p;
  }

  friend bool operator==(const QPath&, const QPath&) = default;
};

// Paths by (length, arrow-label sequence); vertices by vertex order.
inline bool path_less(const Quiver& q, const QPath& x, const QPath& y) {
  if (x.length() != y.length()) return x.length() < y.length();
  if (x.length() == 0) return x.source < y.source;
  for (std::size_t i = 0; i < x.length(); ++i) {
    const auto& lx = q.arrow(x.arrows[i]).label;
    const auto& ly = q.arrow(y.arrows[i]).label;
    if (lx != ly) return lx < ly;
  }
  return false;
}

struct PathSets {
  std::vector<QPath> cycles;     // CQ, including the vertices
  std::vector<QPath> noncycles;  // DQ
  std::vector<QPath> all;        // both, in path order
};

inline PathSets enumerate_paths(const Quiver& q, std::size_t n_max) {
  PathSets out;
  std::vector<QPath> layer;
  for (Index x = 0; x < q.num_vertices(); ++x) layer.push_back(QPath::vertex(x));
  for (std::size_t len = 0; len <= n_max && !layer.empty(); ++len) {
    std::sort(layer.begin(), layer.end(), [&](const QPath& a, const QPath& b) { return path_less(q, a, b); });
    std::vector<QPath> next;
    for (auto& p : layer) {
      (p.is_cycle() ? out.cycles : out.noncycles).push_back(p);
      out.all.push_back(p);
      for (Index c = 0; c < q.num_arrows(); ++c)
        if (q.arrow(c).source == p.target) next.push_back(p.then(QPath::of_arrows(q, {c})));
    }
    layer = std::move(next);
  }
  return out;
}

// t(a_m)^{p_{m+1}}, a_m, ..., a_1, s(a_1)^{p_1}; waiting[i - 1] = p_i.
struct Trajectory {
  QPath path;
  std::vector<std::size_t> waiting;

  std::size_t duration() const {
    std::size_t n = path.length();
    for (auto p : waiting) n += p;
    return n;
  }

  // Object sequence v_0 = t(omega), ..., v_n = s(omega); factor i of the
  // evaluation lies in C(v_i -> v_{i-1}).
  std::vector<Index> objects(const Quiver& q) const {
    auto verts = path.vertices(q);  // s(a_1) ... t(a_m)
    std::vector<Index> out;
    for (std::size_t i = verts.size(); i-- > 0;) out.insert(out.end(), waiting[i] + 1, verts[i]);
    return out;
  }

  std::string label(const Quiver& q) const {
    std::string s = "(";
    auto verts = path.vertices(q);
    for (std::size_t i = verts.size(); i-- > 0;) {
      s += q.vertex_label(verts[i]) + "^" + std::to_string(waiting[i]);
      if (i > 0) s += ", " + q.arrow(path.a(i)).label + ", ";
    }
    return s + ")";
  }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// Inverse of Trajectory::objects. Consecutive objects must be equal or joined
// by an arrow v_i -> v_{i-1}.
inline Trajectory trajectory_from_objects(const Quiver& q, const std::vector<Index>& obj) {
  if (obj.empty()) throw Error("empty object sequence");
  std::vector<Index> arrows;  // a_m first
  std::vector<std::size_t> wait_rev{0};
  for (std::size_t i = 1; i < obj.size(); ++i) {
    if (obj[i] == obj[i - 1]) {
      ++wait_rev.back();
      continue;
    }
    auto a = q.arrow_between(obj[i], obj[i - 1]);
    if (!a) throw Error("no arrow between consecutive objects of a trajectory");
    arrows.push_back(*a);
    wait_rev.push_back(0);
  }
  Trajectory t;
  t.path = arrows.empty() ? QPath::vertex(obj[0]) : QPath::of_arrows(q, arrows);
  t.waiting.assign(wait_rev.rbegin(), wait_rev.rend());
  return t;
}

// All of T_n(omega), lexicographic in (p_1, ..., p_{m+1}).
inline std::vector<Trajectory> trajectories(const QPath& w, std::size_t n) {
  std::vector<Trajectory> out;
  std::size_t m = w.length();
  if (n < m) return out;
  std::vector<std::size_t> p(m + 1, 0);
  // compositions of n - m into m + 1 parts, generated in lexicographic order
  auto rec = [&](auto&& self, std::size_t i, std::size_t left) -> void {
    if (i == m) {
      p[m] = left;
      out.push_back({w, p});
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      p[i] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, n - m);
  return out;
}

struct Tau2Successor {
  Trajectory trajectory;
  std::size_t insert_at;  // index of the new object in the successor's object sequence
  QPath via;              // the length-2 path a'' a' that was inserted
  std::size_t replaced;   // i when arrow a_i was replaced, 0 when a waiting unit was
};

struct Successors {
  std::vector<Trajectory> tau0;
  std::vector<Trajectory> tau1;
  std::vector<Tau2Successor> tau2;
};

inline Successors successors(const Quiver& q, const Trajectory& t) {
  Successors s;
  const QPath& w = t.path;
  std::size_t m = w.length();
  for (std::size_t i = 0; i <= m; ++i) {
    Trajectory u = t;
    ++u.waiting[i];
    s.tau0.push_back(std::move(u));
  }
  for (Index c = 0; c < q.num_arrows(); ++c) {
    const Arrow& ar = q.arrow(c);
    if (ar.source == w.target) {  // c after omega
      Trajectory u{w.then(QPath::of_arrows(q, {c})), t.waiting};
      u.waiting.push_back(0);
      s.tau1.push_back(std::move(u));
    }
    if (ar.target == w.source) {  // c before omega
      Trajectory u{QPath::of_arrows(q, {c}).then(w), {0}};
      u.waiting.insert(u.waiting.end(), t.waiting.begin(), t.waiting.end());
      s.tau1.push_back(std::move(u));
    }
  }
  // Insert a new object between two consecutive ones, distinct from both.
  auto obj = t.objects(q);
  for (std::size_t i = 1; i < obj.size(); ++i) {
    Index hi = obj[i - 1], lo = obj[i];
    std::size_t replaced = 0;
    if (hi != lo) {
      // arrow a_j with j counted from the source
      std::size_t arrows_below = 0;
      for (std::size_t k = i; k + 1 < obj.size(); ++k) arrows_below += obj[k] != obj[k + 1];
      replaced = arrows_below + 1;
    }
    for (Index x = 0; x < q.num_vertices(); ++x) {
      if (x == hi || x == lo) continue;
      auto a1 = q.arrow_between(lo, x), a2 = q.arrow_between(x, hi);
      if (!a1 || !a2) continue;
      std::vector<Index> o = obj;
      o.insert(o.begin() + i, x);
      s.tau2.push_back({trajectory_from_objects(q, o), i, QPath::of_arrows(q, {*a2, *a1}), replaced});
    }
  }
  return s;
}

// Factor dimensions of tau_Delta from left to right, and their product.
template <class K>
struct Evaluation {
  std::vector<std::size_t> factor_dims;
  std::size_t dim = 1;

  // Row-major: the leftmost factor varies slowest.
  std::size_t index_of(const std::vector<std::size_t>& digits) const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) r = r * factor_dims[i] + digits[i];
    return r;
  }
  std::vector<std::size_t> digits_of(std::size_t idx) const {
    std::vector<std::size_t> d(factor_dims.size());
    for (std::size_t i = factor_dims.size(); i-- > 0;) {
      d[i] = idx % factor_dims[i];
      idx /= factor_dims[i];
    }
    return d;
  }
};

template <class K>
Evaluation<K> evaluate(const Trajectory& t, const QSet<K>& d) {
  const Quiver& q = d.quiver();
  auto obj = t.objects(q);
  Evaluation<K> e;
  for (std::size_t i = 1; i < obj.size(); ++i) {
    std::size_t f = obj[i] == obj[i - 1] ? d.algebra(obj[i])->dim() : d.bimodule(*q.arrow_between(obj[i], obj[i - 1])).dim();
    e.factor_dims.push_back(f);
    e.dim *= f;
  }
  return e;
}

}  // namespace hhcat
