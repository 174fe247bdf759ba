#pragma once

// The CLI commands as library calls: each takes a parsed problem and returns a
// report (JSON document plus a plain-text table). tools/hhcat.cpp only handles
// flags, field dispatch and exit codes.

#include <functional>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hhcat/homalg.hpp"
#include "hhcat/problem.hpp"
#include "hhcat/structure.hpp"
#include "json.hpp"

namespace hhcat {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "hhcat-report/1";

struct RunOptions {
  std::size_t max_degree = 4;
  std::size_t budget = kDefaultBudget;
  std::optional<std::string> q;
  std::vector<std::string> path;
};

struct Report {
  Json json;
  std::string text;
  int status = 0;  // 0 ok, 3 a check failed
};

namespace detail {

class Table {
 public:
  explicit Table(std::vector<std::string> head) : rows_{std::move(head)} {}
  void row(std::vector<std::string> r) { rows_.push_back(std::move(r)); }
  std::string str() const {
    std::vector<std::size_t> w;
    for (auto& r : rows_)
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (w.size() <= i) w.push_back(0);
        w[i] = std::max(w[i], r[i].size());
      }
    std::ostringstream os;
    for (auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        os << (i ? "  " : "") << std::setw(int(w[i])) << r[i];
      }
      os << "\n";
    }
    return os.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

inline std::string str(std::size_t x) { return std::to_string(x); }
inline std::string yes(bool b) { return b ? "yes" : "no"; }

inline std::string dims_text(const std::vector<std::size_t>& d) {
  std::string s;
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? ", " : "") + std::to_string(d[i]);
  return "(" + s + ")";
}

template <class K>
QPath resolve_path(const Quiver& q, const std::vector<std::string>& labels) {
  if (labels.empty()) throw ParseError("along-path needs a path (problem key 'path' or --path)");
  if (labels.size() == 1)
    if (auto v = q.find_vertex(labels[0]); v && !q.find_arrow(labels[0])) return QPath::vertex(*v);
  std::vector<Index> arrows;
  for (auto& l : labels) {
    auto a = q.find_arrow(l);
    if (!a) throw ParseError("unknown arrow '" + l + "'");
    arrows.push_back(*a);
  }
  try {
    return QPath::of_arrows(q, arrows);
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

// ------------------------------------------------------------------ commands

template <class K>
Report cmd_hh(const Instance<K>& inst, const ProblemFile& p, const RunOptions& o) {
  auto [name, alg] = inst.hh_algebra(p.target);
  auto dims = bar_hochschild(alg, o.max_degree, o.budget).dims();
  Report r;
  r.json = {{"algebra", name}, {"dim", alg->dim()}, {"hh", dims}};
  Table t({"n", "dim HH^n"});
  for (std::size_t n = 0; n < dims.size(); ++n) t.row({str(n), str(dims[n])});
  r.text = "Hochschild cohomology of " + name + " (dim " + str(alg->dim()) + ")\n" + t.str();
  return r;
}

template <class K>
Report cmd_hh_relative(const Instance<K>& inst, const ProblemFile&, const RunOptions& o) {
  auto d = inst.working_qset();
  auto J = relative_complex(d, o.max_degree, o.budget);
  auto rel = cohomology(J).dims();
  auto lam = assemble_lambda(d).algebra;
  auto bar = bar_hochschild(lam, o.max_degree, o.budget).dims();
  std::vector<std::size_t> cochains;
  for (std::size_t n = 0; n <= o.max_degree; ++n) cochains.push_back(J.dim(n));
  Report r;
  bool agree = rel == bar;
  r.json = {{"lambda_dim", lam->dim()}, {"cochain_dims", cochains}, {"relative", rel}, {"bar", bar}, {"agree", agree}};
  Table t({"n", "cochains", "relative", "bar"});
  for (std::size_t n = 0; n <= o.max_degree; ++n) t.row({str(n), str(cochains[n]), str(rel[n]), str(bar[n])});
  r.text = "Trajectory complex of the Q-set against the bar complex of Λ (dim " + str(lam->dim()) + ")\n" + t.str() +
           (agree ? "agree\n" : "DISAGREE\n");
  r.status = agree ? 0 : 3;
  return r;
}

template <class K>
Report cmd_along_path(const Instance<K>& inst, const ProblemFile& p, const RunOptions& o) {
  auto d = inst.working_qset();
  const Quiver& q = d.quiver();
  auto w = resolve_path<K>(q, o.path.empty() ? p.path : o.path);
  auto h = cohomology(along_path_complex(d, w, o.max_degree, o.budget)).dims();
  std::size_t m = w.length();
  Report r;
  r.json = {{"path", w.label(q)}, {"length", m}, {"cycle", w.is_cycle()}, {"dims", h}};
  Table t({"n", "dim H^n_w"});
  for (std::size_t n = 0; n < h.size(); ++n) t.row({str(n), str(h[n])});
  r.text = "Cohomology along " + w.label(q) + "\n" + t.str();
  r.json["ext"] = nullptr;
  if (m == 0 || o.max_degree < m) return r;
  auto tv = tor_vanishing(d, w, o.max_degree, o.budget);
  r.json["tor"] = {{"vanishing", tv.vanishing}, {"verified_to", tv.verified_to}};
  if (!tv.vanishing) {
    r.json["tor"]["witness"] = {{"i", tv.i}, {"n", tv.n}};
    r.text += "Tor_" + str(tv.n) + " at step " + str(tv.i) + " does not vanish: no Ext comparison\n";
    return r;
  }
  auto e = along_path_via_ext(d, w, o.max_degree - m, o.max_degree, o.budget);
  bool agree = true;
  for (std::size_t k = 0; k < e.size(); ++k) agree = agree && h[m + k] == e[k];
  r.json["ext"] = e;
  r.json["ext_agrees"] = agree;
  r.text += "Ext^r against the coefficient bimodule, r = 0.." + str(e.size() - 1) + ": " + dims_text(e) +
            (agree ? ", matches H^{m+r}\n" : ", MISMATCH\n");
  r.status = agree ? 0 : 3;
  return r;
}

inline Json path_dims(const std::vector<std::pair<std::string, std::size_t>>& v) {
  Json j = Json::array();
  for (auto& [p, d] : v) j.push_back({{"path", p}, {"dim", d}});
  return j;
}

template <class K>
Report cmd_les(const Instance<K>& inst, const ProblemFile&, const RunOptions& o) {
  auto L = long_exact_sequence(inst.working_qset(), o.max_degree, o.budget);
  Report r;
  Json degs = Json::array();
  Table t({"n", "H^n(D)", "HH^n", "H^n(C)", "rank i", "rank p", "rank nabla"});
  for (std::size_t n = 0; n < L.degrees.size(); ++n) {
    auto& g = L.degrees[n];
    Json j = {{"n", n},           {"D", g.d},
              {"HH", g.j},        {"C", g.c},
              {"rank_i", rank(g.i)}, {"rank_p", rank(g.p)},
              {"rank_nabla", g.nabla ? Json(rank(*g.nabla)) : Json(nullptr)},
              {"exact_at_D", g.exact_d}, {"exact_at_HH", g.exact_j},
              {"exact_at_C", g.exact_c ? Json(*g.exact_c) : Json(nullptr)},
              {"D_paths", path_dims(g.d_paths)}, {"C_paths", path_dims(g.c_paths)}};
    degs.push_back(j);
    t.row({str(n), str(g.d), str(g.j), str(g.c), str(rank(g.i)), str(rank(g.p)), g.nabla ? str(rank(*g.nabla)) : "-"});
  }
  r.json = {{"degrees", degs}, {"exact", L.exact()}};
  r.text = "Long exact sequence 0 -> D -> J -> C -> 0 in cohomology\n" + t.str() +
           (L.exact() ? "exact at every checked node\n" : "NOT EXACT\n");
  r.status = L.exact() ? 0 : 3;
  return r;
}

template <class K>
Report cmd_square(const Instance<K>& inst, const ProblemFile&, const RunOptions& o) {
  if (!inst.square) throw ParseError("square needs a square or peirce section");
  const auto& sq = *inst.square;
  std::size_t N = o.max_degree;
  Report r;
  std::ostringstream text;
  text << "Null-square algebra: dim A = " << sq.A->dim() << ", dim B = " << sq.B->dim() << ", dim M = " << sq.M.dim()
       << ", dim N = " << sq.N.dim() << "\n";

  Json five = Json::array();
  for (std::size_t m = 0; 2 * m + 2 <= N; ++m) {
    auto F = five_term(sq, m, o.budget);
    bool ok = std::all_of(F.exact.begin(), F.exact.end(), [](bool b) { return b; });
    five.push_back({{"m", m}, {"nodes", F.nodes}, {"exact", ok}});
    text << "five-term m=" << m << ": 0 -> " << F.nodes[0] << " -> " << F.nodes[1] << " -> " << F.nodes[2] << " -> "
         << F.nodes[3] << " -> " << F.nodes[4] << " -> 0" << (ok ? " exact\n" : " NOT EXACT\n");
    if (!ok) r.status = 3;
  }
  r.json["five_term"] = five;

  std::size_t m_max = N >= 1 ? (N - 1) / 2 : 0;
  auto H = null_square_hh(sq, m_max, o.budget);
  Json nab = Json::array();
  for (std::size_t m = 0; m < H.nabla.size(); ++m)
    nab.push_back({{"m", m},
                   {"source", H.nabla[m].source_dim},
                   {"target", H.nabla[m].target_dim},
                   {"rank", H.nabla[m].rank},
                   {"injective", H.nabla[m].kernel_dim() == 0}});
  r.json["hh"] = H.dims;
  r.json["hh_diagonal"] = H.hh_a;
  r.json["nabla_prime"] = nab;

  auto oracle = cohomology(relative_complex(square_qset(sq), std::min(N, H.dims.size() - 1), o.budget)).dims();
  bool oracle_ok = std::equal(oracle.begin(), oracle.end(), H.dims.begin());
  r.json["oracle"] = oracle;
  r.json["oracle_agrees"] = oracle_ok;
  if (!oracle_ok) r.status = 3;

  Table t({"n", "HH^n", "diagonal", "oracle"});
  for (std::size_t n = 0; n < H.dims.size(); ++n)
    t.row({str(n), str(H.dims[n]), str(H.hh_a[n]), n < oracle.size() ? str(oracle[n]) : "-"});
  text << t.str();

  r.json["closed_form"] = nullptr;
  if (inst.free_rank_one && sq.A->dim() * sq.B->dim() > 1) {
    auto ha = hochschild_dims(sq.A, H.dims.size() - 1, o.budget), hb = hochschild_dims(sq.B, H.dims.size() - 1, o.budget);
    auto cf = free_rank_one_closed_form(sq.A->dim(), sq.B->dim(), ha, hb, H.dims.size() - 1);
    r.json["closed_form"] = cf;
    r.json["closed_form_agrees"] = cf == H.dims;
    text << "free rank one closed form: " << dims_text(cf) << (cf == H.dims ? " agrees\n" : " DISAGREES\n");
    if (cf != H.dims) r.status = 3;
  }
  auto sb = square_bimodule(sq.A, sq.B, sq.M, sq.N);
  std::optional<std::size_t> h;
  try {
    h = tensor_nilpotence(sb.module, std::max<std::size_t>(2, N), o.budget);
  } catch (const BudgetExceeded&) {
  }
  r.json["nilpotence"] = h ? Json(*h) : Json(nullptr);
  text << (h ? "M^{(x)" + str(*h) + "} = 0: HH^n splits over the diagonal for n >= " + str(*h) + "\n"
             : "no tensor power of M vanishes up to degree " + str(std::max<std::size_t>(2, N)) + "\n");
  r.text = text.str();
  return r;
}

template <class K>
Report cmd_peirce(const Instance<K>& inst, const ProblemFile&, const RunOptions& o) {
  if (!inst.peirce) throw ParseError("peirce needs a peirce section");
  const auto& pq = *inst.peirce;
  const auto& sq = *inst.square;
  auto cyc = efficient_cycles(pq);
  std::size_t h_max = std::max<std::size_t>(2, pq.vertical_arrows() * (pq.num_e() + pq.num_f()));
  auto sb = square_bimodule(sq.A, sq.B, sq.M, sq.N);
  Report r;
  Json vert = Json::array();
  for (Index f = 0; f < pq.num_f(); ++f)
    for (Index e = 0; e < pq.num_e(); ++e)
      if (pq.down[f][e]) vert.push_back({{"from", pq.qe.vertex_label(e)}, {"to", pq.qf.vertex_label(f)}, {"count", pq.down[f][e]}});
  for (Index e = 0; e < pq.num_e(); ++e)
    for (Index f = 0; f < pq.num_f(); ++f)
      if (pq.up[e][f]) vert.push_back({{"from", pq.qf.vertex_label(f)}, {"to", pq.qe.vertex_label(e)}, {"count", pq.up[e][f]}});
  r.json = {{"e_vertices", pq.qe.vertices()}, {"f_vertices", pq.qf.vertices()}, {"vertical", vert}};
  r.json["efficient_cycle"] = cyc.exists ? Json{{"length", cyc.vertices.size()}, {"witness", cyc.label(pq)}} : Json(nullptr);

  std::ostringstream text;
  text << "Peirce square quiver: " << pq.num_e() << " + " << pq.num_f() << " vertices, " << pq.vertical_arrows()
       << " vertical arrows\n";
  std::optional<std::size_t> h;
  bool consistent;
  if (cyc.exists) {
    // powers grow along the cycle, so only a few are formed
    std::size_t cap = std::min<std::size_t>(h_max, 4);
    try {
      h = tensor_nilpotence(sb.module, cap, o.budget);
    } catch (const BudgetExceeded&) {
    }
    consistent = !h;
    text << "efficient cycle: " << cyc.label(pq) << "\n";
    text << "M^{(x)h} != 0 for h <= " << cap << (consistent ? "" : " FAILS") << "\n";
    r.json["nilpotence_checked_to"] = cap;
  } else {
    h = tensor_nilpotence(sb.module, h_max, o.budget);
    consistent = h.has_value();
    text << "no efficient cycles; " << (h ? "h = " + str(*h) : "no vanishing power up to " + str(h_max)) << "\n";
    if (h) text << "HH^n(Λ) = HH^n(A) + HH^n(B) for n >= " << *h << "\n";
    r.json["nilpotence_checked_to"] = h_max;
  }
  r.json["nilpotence"] = h ? Json(*h) : Json(nullptr);
  r.json["consistent"] = consistent;
  r.status = consistent ? 0 : 3;
  r.text = text.str();
  return r;
}

template <class K>
Report cmd_solve_assoc(const Instance<K>& inst, const ProblemFile&, const RunOptions&) {
  if (!inst.square) throw ParseError("solve-assoc needs a square section");
  const auto& sq = *inst.square;
  auto s = solve_associativity(sq.A, sq.B, sq.M, sq.N);
  Report r;
  r.json = {{"dim", s.space.dim()}, {"alpha_inputs", s.alpha_inputs}, {"beta_inputs", s.beta_inputs}};
  r.text = "Pairs (alpha, beta) making the square associative: dimension " + str(s.space.dim()) + "\n";
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------- invariants

struct Check {
  std::string name;
  bool ok = false;
  std::string detail;
};

template <class K>
SparseVector<K> random_cochain(std::mt19937& rng, std::size_t dim, double density = 0.3) {
  std::bernoulli_distribution pick(density);
  std::uniform_int_distribution<int> val(-3, 3);
  std::vector<Entry<K>> raw;
  for (Index i = 0; i < dim; ++i)
    if (pick(rng)) raw.push_back({i, K(val(rng))});
  return SparseVector<K>::from_unsorted(std::move(raw));
}

template <class K>
bool d_squared_zero(const CochainComplex<K>& c) {
  for (std::size_t n = 0; n + 1 < c.d.size(); ++n)
    if (!(c.d[n + 1] * c.d[n]).is_zero()) return false;
  return true;
}

// Graded Leibniz on `pairs` random pairs of total degree <= top - 1.
template <class K>
std::string leibniz_failure(const CochainComplex<K>& J, std::size_t pairs, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::size_t top = J.d.size();
  if (top == 0) return "";
  std::uniform_int_distribution<std::size_t> deg(0, top - 1);
  for (std::size_t it = 0; it < pairs; ++it) {
    std::size_t p = deg(rng);
    std::size_t q = std::uniform_int_distribution<std::size_t>(0, top - 1 - p)(rng);
    auto f = random_cochain<K>(rng, J.dim(p)), g = random_cochain<K>(rng, J.dim(q));
    auto lhs = J.d[p + q].apply(cup_product(J, p, f, q, g));
    auto rhs = cup_product(J, p + 1, J.d[p].apply(f), q, g)
                   .plus_scaled(cup_product(J, p, f, q + 1, J.d[q].apply(g)), K(p % 2 ? -1 : 1));
    if (lhs != rhs) return "degrees (" + std::to_string(p) + ", " + std::to_string(q) + ")";
  }
  return "";
}

inline std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Every invariant that applies to the instance. Failures are recorded, never thrown.
template <class K>
std::vector<Check> run_invariants(const Instance<K>& inst, std::size_t N, std::size_t budget) {
  std::vector<Check> out;
  auto check = [&](const std::string& name, const std::function<std::string()>& f) {
    Check c{name, false, ""};
    try {
      c.detail = f();
      c.ok = c.detail.empty();
    } catch (const Error& e) {
      c.detail = e.what();
    }
    out.push_back(c);
  };
  if (inst.qset || inst.square) {
    auto d = inst.working_qset();
    const Quiver& q = d.quiver();
    auto lam = assemble_lambda(d).algebra;
    auto J = relative_complex(d, N, budget);
    auto B = bar_complex(lam, N, budget);
    check("d^2 = 0", [&]() -> std::string {
      if (!d_squared_zero(J)) return "relative complex";
      if (!d_squared_zero(B)) return "bar complex";
      return "";
    });
    check("relative complex agrees with the bar complex", [&]() -> std::string {
      auto a = cohomology(J).dims(), b = cohomology(B).dims();
      return a == b ? "" : "relative " + detail::dims_text(a) + " vs bar " + detail::dims_text(b);
    });
    check("trajectory counts are binomial (n <= 8)", [&]() -> std::string {
      for (auto& w : enumerate_paths(q, 8).all)
        for (std::size_t n = 0; n <= 8; ++n)
          if (trajectories(w, n).size() != binomial(n, w.length())) return w.label(q) + " n = " + std::to_string(n);
      return "";
    });
    check("cochain dims decompose over trajectories (n <= 4)", [&]() -> std::string {
      auto paths = enumerate_paths(q, std::min<std::size_t>(N, 4));
      auto D = semisimple_algebra<K>(q.num_vertices());
      auto L = restrict_scalars(Bimodule<K>::regular(lam), D, lam->system(), D, lam->system());
      Bimodule<K> power = L;
      for (std::size_t n = 1; n <= std::min<std::size_t>(N, 4); ++n) {
        if (n > 1) power = tensor_over(power, L);
        std::size_t sum = 0;
        for (auto& w : paths.all)
          for (auto& t : trajectories(w, n)) sum += evaluate(t, d).dim;
        if (sum != power.dim()) return "n = " + std::to_string(n);
      }
      return "";
    });
    check("graded Leibniz on 100 random pairs", [&] { return leibniz_failure(J, 100, 1); });
    if (N >= 1) {
      auto L = les_data(d, N, budget);
      check("long exact sequence is exact", [&]() -> std::string {
        return long_exact_sequence(L).exact() ? "" : "rank conditions fail";
      });
      check("snake map equals the nabla formula", [&]() -> std::string {
        for (std::size_t n = 0; n + 1 <= N && n <= 3; ++n)
          if (connecting_snake(L, n) != connecting_nabla_matrix(L, n)) return "degree " + std::to_string(n);
        return "";
      });
      check("cup product annihilates D-cocycles", [&]() -> std::string {
        auto c = cup_annihilation_check(L);
        return c.ok ? "" : c.failure;
      });
      check("arrow cohomology is Ext of the arrow bimodule", [&]() -> std::string {
        std::size_t r_max = std::min<std::size_t>(N - 1, 3);
        for (Index a = 0; a < q.num_arrows(); ++a) {
          auto w = QPath::of_arrows(q, {a});
          auto h = cohomology(along_path_complex(d, w, r_max + 1, budget)).dims();
          auto e = ext_bimodule(d.bimodule(a), d.bimodule(a), r_max, budget);
          for (std::size_t r = 0; r <= r_max; ++r)
            if (h[r + 1] != e[r]) return q.arrow(a).label + " r = " + std::to_string(r);
        }
        return "";
      });
    }
  }
  if (inst.square) {
    const auto& sq = *inst.square;
    check("null-square split agrees with the relative complex", [&]() -> std::string {
      auto H = null_square_hh(sq, N >= 1 ? (N - 1) / 2 : 0, budget);
      auto o = cohomology(relative_complex(square_qset(sq), H.dims.size() - 1, budget)).dims();
      return o == H.dims ? "" : detail::dims_text(H.dims) + " vs " + detail::dims_text(o);
    });
    if (N >= 2)
      check("five-term sequence (m = 0) is exact", [&]() -> std::string {
        auto F = five_term(sq, 0, budget);
        for (bool b : F.exact)
          if (!b) return "rank conditions fail";
        return "";
      });
    if (inst.free_rank_one && sq.A->dim() * sq.B->dim() > 1)
      check("free rank one closed form", [&]() -> std::string {
        auto H = null_square_hh(sq, N >= 1 ? (N - 1) / 2 : 0, budget);
        std::size_t top = H.dims.size() - 1;
        auto cf = free_rank_one_closed_form(sq.A->dim(), sq.B->dim(), hochschild_dims(sq.A, top, budget),
                                            hochschild_dims(sq.B, top, budget), top);
        return cf == H.dims ? "" : detail::dims_text(cf) + " vs " + detail::dims_text(H.dims);
      });
  }
  if (inst.peirce) {
    check("efficient cycles iff no tensor nilpotence", [&]() -> std::string {
      const auto& pq = *inst.peirce;
      auto cyc = efficient_cycles(pq);
      auto sb = square_bimodule(inst.square->A, inst.square->B, inst.square->M, inst.square->N);
      std::size_t h_max = std::max<std::size_t>(2, pq.vertical_arrows() * (pq.num_e() + pq.num_f()));
      auto h = tensor_nilpotence(sb.module, cyc.exists ? std::min<std::size_t>(h_max, 4) : h_max, budget);
      return cyc.exists == !h.has_value() ? "" : "efficient cycle " + detail::yes(cyc.exists);
    });
  }
  return out;
}

namespace detail {

template <class K>
Report cmd_verify(const Instance<K>& inst, const ProblemFile&, const RunOptions& o) {
  auto checks = run_invariants(inst, o.max_degree, o.budget);
  Report r;
  Json arr = Json::array();
  Table t({"check", "result"});
  bool all = true;
  for (auto& c : checks) {
    arr.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    t.row({c.name, c.ok ? "PASS" : "FAIL " + c.detail});
    all = all && c.ok;
  }
  r.json = {{"checks", arr}, {"all_passed", all}};
  r.text = t.str();
  r.status = all ? 0 : 3;
  return r;
}

}  // namespace detail

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"hh",     "hh-relative", "along-path",  "les",
                                              "square", "peirce",      "solve-assoc", "verify"};
  return names;
}

template <class K>
Report run_command(const std::string& command, const ProblemFile& p, const RunOptions& o, const std::string& field) {
  auto inst = build<K>(p, o.q);
  Report r;
  if (command == "hh")
    r = detail::cmd_hh(inst, p, o);
  else if (command == "hh-relative")
    r = detail::cmd_hh_relative(inst, p, o);
  else if (command == "along-path")
    r = detail::cmd_along_path(inst, p, o);
  else if (command == "les")
    r = detail::cmd_les(inst, p, o);
  else if (command == "square")
    r = detail::cmd_square(inst, p, o);
  else if (command == "peirce")
    r = detail::cmd_peirce(inst, p, o);
  else if (command == "solve-assoc")
    r = detail::cmd_solve_assoc(inst, p, o);
  else if (command == "verify")
    r = detail::cmd_verify(inst, p, o);
  else
    throw ParseError("unknown command '" + command + "'");
  Json head = {{"schema", kReportSchema}, {"command", command}, {"problem", p.name},
               {"field", field},          {"max_degree", o.max_degree}, {"status", r.status}};
  head["result"] = std::move(r.json);
  r.json = std::move(head);
  return r;
}

// Error report with the same envelope; `status` is the process exit code.
inline Json error_report(const std::string& command, const std::string& problem, const std::string& kind,
                         const std::string& message, int status) {
  return {{"schema", kReportSchema}, {"command", command}, {"problem", problem}, {"status", status},
          {"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace hhcat
