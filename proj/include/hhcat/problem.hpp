#pragma once

// Problem files. A YAML document names a field, algebras, bimodules and the
// Q-set, square or Peirce data the commands act on. ProblemFile is the
// declarative model (field independent); build<K>() resolves it.

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "hhcat/qset.hpp"
#include "hhcat/standard.hpp"
#include "hhcat/structure.hpp"

namespace hhcat {

struct ArrowSpec {
  std::string label, source, target;
  friend bool operator==(const ArrowSpec&, const ArrowSpec&) = default;
};

struct QuiverSpec {
  std::vector<std::string> vertices;
  std::vector<ArrowSpec> arrows;
  friend bool operator==(const QuiverSpec&, const QuiverSpec&) = default;
};

// Basis label -> coefficient text.
using VectorSpec = std::map<std::string, std::string>;
using MatrixSpec = std::vector<std::vector<std::string>>;

struct TermSpec {
  std::string coeff;
  std::vector<std::string> word;  // composition order: word[0] is applied last
  friend bool operator==(const TermSpec&, const TermSpec&) = default;
};

struct RelationSpec {
  std::vector<std::string> lead;
  std::vector<TermSpec> terms;  // empty: lead -> 0
  friend bool operator==(const RelationSpec&, const RelationSpec&) = default;
};

struct ProductSpec {
  std::string left, right;
  VectorSpec result;
  friend bool operator==(const ProductSpec&, const ProductSpec&) = default;
};

struct AlgebraSpec {
  std::string name;
  // field | semisimple | linear_path | truncated_polynomial | quantum_exterior |
  // radical_square_zero | presentation | structure_constants | product
  std::string kind;
  std::size_t n = 0;
  QuiverSpec quiver;
  std::vector<RelationSpec> relations;
  std::size_t cap = 12;
  std::vector<std::string> labels;
  std::vector<ProductSpec> products;
  VectorSpec unit;
  std::vector<VectorSpec> system;
  std::vector<std::string> factors;
  friend bool operator==(const AlgebraSpec&, const AlgebraSpec&) = default;
};

struct BimoduleSpec {
  std::string name;
  // regular | free | free_corner | zero | actions | direct_sum
  std::string kind;
  std::string left, right;
  std::size_t f = 0, e = 0;
  std::size_t dim = 0;
  std::map<std::string, MatrixSpec> left_action, right_action;
  std::vector<std::string> summands;
  friend bool operator==(const BimoduleSpec&, const BimoduleSpec&) = default;
};

struct QSetSpec {
  QuiverSpec quiver;
  std::map<std::string, std::string> algebras;   // vertex -> algebra
  std::map<std::string, std::string> bimodules;  // arrow -> bimodule
  friend bool operator==(const QSetSpec&, const QSetSpec&) = default;
};

struct SquareSpec {
  std::string A, B, M, N;
  friend bool operator==(const SquareSpec&, const SquareSpec&) = default;
};

struct PeirceSpec {
  std::string A, B;
  std::vector<std::vector<std::size_t>> down, up;
  friend bool operator==(const PeirceSpec&, const PeirceSpec&) = default;
};

struct ProblemFile {
  std::string name;
  std::string field = "rationals";
  std::optional<std::string> q;
  std::optional<std::size_t> max_degree;
  std::string target;
  std::vector<std::string> path;
  std::vector<AlgebraSpec> algebras;
  std::vector<BimoduleSpec> bimodules;
  std::optional<QSetSpec> qset;
  std::optional<SquareSpec> square;
  std::optional<PeirceSpec> peirce;
  friend bool operator==(const ProblemFile&, const ProblemFile&) = default;
};

// ------------------------------------------------------------------ parsing

namespace detail {

inline std::string where(const YAML::Node& n) {
  auto m = n.Mark();
  if (m.is_null()) return "";
  return "line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) + ": ";
}

[[noreturn]] inline void parse_fail(const YAML::Node& n, const std::string& msg) {
  throw ParseError(where(n) + msg);
}

inline YAML::Node need(const YAML::Node& parent, const char* key) {
  auto n = parent[key];
  if (!n) parse_fail(parent, std::string("missing key '") + key + "'");
  return n;
}

inline std::string text(const YAML::Node& n) {
  if (!n.IsScalar()) parse_fail(n, "expected a scalar");
  return n.Scalar();
}

inline std::size_t count(const YAML::Node& n) {
  auto s = text(n);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    parse_fail(n, "expected a nonnegative integer, got '" + s + "'");
  return std::stoul(s);
}

// Coefficients are rationals or the symbols q, -q.
inline std::string coefficient(const YAML::Node& n) {
  auto s = text(n);
  if (s == "q" || s == "-q") return s;
  try {
    return Rational::parse(s).to_string();
  } catch (const Error&) {
    parse_fail(n, "bad coefficient '" + s + "'");
  }
}

inline std::vector<std::string> strings(const YAML::Node& n) {
  if (!n.IsSequence()) parse_fail(n, "expected a list");
  std::vector<std::string> out;
  for (auto x : n) out.push_back(text(x));
  return out;
}

inline void check_keys(const YAML::Node& n, std::initializer_list<const char*> allowed) {
  if (!n.IsMap()) parse_fail(n, "expected a mapping");
  for (auto kv : n) {
    auto k = kv.first.as<std::string>();
    bool ok = false;
    for (auto a : allowed) ok = ok || k == a;
    if (!ok) parse_fail(kv.first, "unknown key '" + k + "'");
  }
}

inline QuiverSpec parse_quiver(const YAML::Node& n) {
  check_keys(n, {"vertices", "arrows"});
  QuiverSpec q;
  q.vertices = strings(need(n, "vertices"));
  if (auto a = n["arrows"]) {
    if (!a.IsSequence()) parse_fail(a, "expected a list of arrows");
    for (auto x : a) {
      check_keys(x, {"label", "source", "target"});
      q.arrows.push_back({text(need(x, "label")), text(need(x, "source")), text(need(x, "target"))});
    }
  }
  return q;
}

// A word is a list of arrow labels, or a string when every label is one character.
inline std::vector<std::string> parse_word(const YAML::Node& n, const QuiverSpec& q) {
  if (n.IsSequence()) return strings(n);
  auto s = text(n);
  for (auto& a : q.arrows)
    if (a.label.size() != 1) parse_fail(n, "words must be lists when arrow labels are longer than one character");
  std::vector<std::string> w;
  for (char c : s) w.push_back(std::string(1, c));
  return w;
}

inline VectorSpec parse_vector(const YAML::Node& n) {
  if (!n.IsMap()) parse_fail(n, "expected a mapping from basis labels to coefficients");
  VectorSpec v;
  for (auto kv : n) v[text(kv.first)] = coefficient(kv.second);
  return v;
}

inline MatrixSpec parse_matrix(const YAML::Node& n) {
  if (!n.IsSequence()) parse_fail(n, "expected a matrix as a list of rows");
  MatrixSpec m;
  for (auto row : n) {
    if (!row.IsSequence()) parse_fail(row, "expected a row");
    std::vector<std::string> r;
    for (auto x : row) r.push_back(coefficient(x));
    m.push_back(std::move(r));
  }
  return m;
}

inline std::vector<std::vector<std::size_t>> parse_counts(const YAML::Node& n) {
  if (!n.IsSequence()) parse_fail(n, "expected a matrix of multiplicities");
  std::vector<std::vector<std::size_t>> m;
  for (auto row : n) {
    if (!row.IsSequence()) parse_fail(row, "expected a row");
    std::vector<std::size_t> r;
    for (auto x : row) r.push_back(count(x));
    m.push_back(std::move(r));
  }
  return m;
}

inline AlgebraSpec parse_algebra(const std::string& name, const YAML::Node& n) {
  AlgebraSpec a;
  a.name = name;
  a.kind = text(need(n, "kind"));
  if (a.kind == "field" || a.kind == "quantum_exterior") {
    check_keys(n, {"kind"});
  } else if (a.kind == "semisimple" || a.kind == "linear_path" || a.kind == "truncated_polynomial") {
    check_keys(n, {"kind", "n"});
    a.n = count(need(n, "n"));
    if (a.n == 0) parse_fail(n["n"], "n must be positive");
  } else if (a.kind == "radical_square_zero") {
    check_keys(n, {"kind", "quiver"});
    a.quiver = parse_quiver(need(n, "quiver"));
  } else if (a.kind == "presentation") {
    check_keys(n, {"kind", "quiver", "relations", "cap"});
    a.quiver = parse_quiver(need(n, "quiver"));
    if (n["cap"]) a.cap = count(n["cap"]);
    if (auto rs = n["relations"]) {
      if (!rs.IsSequence()) parse_fail(rs, "expected a list of relations");
      for (auto r : rs) {
        check_keys(r, {"lead", "terms"});
        RelationSpec rel;
        rel.lead = parse_word(need(r, "lead"), a.quiver);
        if (auto ts = r["terms"]) {
          if (!ts.IsSequence()) parse_fail(ts, "expected a list of terms");
          for (auto t : ts) {
            check_keys(t, {"coeff", "word"});
            rel.terms.push_back({coefficient(need(t, "coeff")), parse_word(need(t, "word"), a.quiver)});
          }
        }
        a.relations.push_back(std::move(rel));
      }
    }
  } else if (a.kind == "structure_constants") {
    check_keys(n, {"kind", "labels", "products", "unit", "system"});
    a.labels = strings(need(n, "labels"));
    auto ps = need(n, "products");
    if (!ps.IsSequence()) parse_fail(ps, "expected a list of products");
    for (auto p : ps) {
      check_keys(p, {"left", "right", "result"});
      a.products.push_back({text(need(p, "left")), text(need(p, "right")), parse_vector(need(p, "result"))});
    }
    a.unit = parse_vector(need(n, "unit"));
    auto sys = need(n, "system");
    if (!sys.IsSequence()) parse_fail(sys, "expected a list of idempotents");
    for (auto s : sys) a.system.push_back(parse_vector(s));
  } else if (a.kind == "product") {
    check_keys(n, {"kind", "factors"});
    a.factors = strings(need(n, "factors"));
    if (a.factors.size() != 2) parse_fail(n["factors"], "a product needs exactly two factors");
  } else {
    parse_fail(n["kind"], "unknown algebra kind '" + a.kind + "'");
  }
  return a;
}

inline BimoduleSpec parse_bimodule(const std::string& name, const YAML::Node& n) {
  BimoduleSpec b;
  b.name = name;
  b.kind = text(need(n, "kind"));
  if (b.kind == "regular") {
    check_keys(n, {"kind", "algebra"});
    b.left = b.right = text(need(n, "algebra"));
  } else if (b.kind == "free" || b.kind == "zero") {
    check_keys(n, {"kind", "left", "right"});
    b.left = text(need(n, "left"));
    b.right = text(need(n, "right"));
  } else if (b.kind == "free_corner") {
    check_keys(n, {"kind", "left", "right", "f", "e"});
    b.left = text(need(n, "left"));
    b.right = text(need(n, "right"));
    b.f = count(need(n, "f"));
    b.e = count(need(n, "e"));
  } else if (b.kind == "actions") {
    check_keys(n, {"kind", "left", "right", "dim", "left_action", "right_action"});
    b.left = text(need(n, "left"));
    b.right = text(need(n, "right"));
    b.dim = count(need(n, "dim"));
    for (auto side : {"left_action", "right_action"}) {
      auto acts = need(n, side);
      if (!acts.IsMap()) parse_fail(acts, "expected a mapping from basis labels to matrices");
      auto& dst = std::string(side) == "left_action" ? b.left_action : b.right_action;
      for (auto kv : acts) dst[text(kv.first)] = parse_matrix(kv.second);
    }
  } else if (b.kind == "direct_sum") {
    check_keys(n, {"kind", "summands"});
    b.summands = strings(need(n, "summands"));
    if (b.summands.empty()) parse_fail(n["summands"], "a direct sum needs summands");
  } else {
    parse_fail(n["kind"], "unknown bimodule kind '" + b.kind + "'");
  }
  return b;
}

inline std::map<std::string, std::string> parse_names(const YAML::Node& n) {
  if (!n.IsMap()) parse_fail(n, "expected a mapping");
  std::map<std::string, std::string> m;
  for (auto kv : n) m[text(kv.first)] = text(kv.second);
  return m;
}

// Every name a section mentions must be defined somewhere in the file.
inline void resolve_names(const YAML::Node& root, const ProblemFile& p) {
  std::set<std::string> algs, mods, vertices, arrows;
  for (auto& a : p.algebras) algs.insert(a.name);
  for (auto& b : p.bimodules) mods.insert(b.name);
  auto check = [](const YAML::Node& n, const std::set<std::string>& names, const char* what) {
    if (n && !names.count(n.Scalar())) parse_fail(n, std::string("unknown ") + what + " '" + n.Scalar() + "'");
  };
  auto check_quiver = [&](const YAML::Node& q) {
    std::set<std::string> vs;
    for (auto v : q["vertices"]) vs.insert(v.Scalar());
    for (auto a : q["arrows"]) {
      check(a["source"], vs, "vertex");
      check(a["target"], vs, "vertex");
    }
  };
  for (auto kv : root["algebras"]) {
    if (kv.second["quiver"]) check_quiver(kv.second["quiver"]);
    for (auto f : kv.second["factors"]) check(f, algs, "algebra");
  }
  for (auto kv : root["bimodules"]) {
    for (auto key : {"algebra", "left", "right"}) check(kv.second[key], algs, "algebra");
    for (auto s : kv.second["summands"]) check(s, mods, "bimodule");
  }
  if (auto qs = root["qset"]) {
    vertices.insert(p.qset->quiver.vertices.begin(), p.qset->quiver.vertices.end());
    for (auto& a : p.qset->quiver.arrows) arrows.insert(a.label);
    check_quiver(qs["quiver"]);
    for (auto kv : qs["algebras"]) {
      check(kv.first, vertices, "vertex");
      check(kv.second, algs, "algebra");
    }
    for (auto kv : qs["bimodules"]) {
      check(kv.first, arrows, "arrow");
      check(kv.second, mods, "bimodule");
    }
  }
  if (auto sq = root["square"]) {
    check(sq["A"], algs, "algebra");
    check(sq["B"], algs, "algebra");
    check(sq["M"], mods, "bimodule");
    check(sq["N"], mods, "bimodule");
  }
  if (auto pc = root["peirce"]) {
    check(pc["A"], algs, "algebra");
    check(pc["B"], algs, "algebra");
  }
  check(root["target"], algs, "algebra");
}

}  // namespace detail

inline ProblemFile parse_problem(const std::string& source) {
  using namespace detail;
  YAML::Node root;
  try {
    root = YAML::Load(source);
  } catch (const YAML::Exception& e) {
    throw ParseError("line " + std::to_string(e.mark.line + 1) + ", column " + std::to_string(e.mark.column + 1) +
                     ": " + e.msg);
  }
  if (!root.IsMap()) throw ParseError("the problem file must be a mapping");
  try {
    check_keys(root, {"name", "field", "q", "max_degree", "target", "path", "algebras", "bimodules", "qset", "square",
                      "peirce"});
    ProblemFile p;
    if (root["name"]) p.name = text(root["name"]);
    if (root["field"]) {
      p.field = text(root["field"]);
      bool ok = p.field == "rationals";
      if (p.field.rfind("fp:", 0) == 0) {
        auto digits = p.field.substr(3);
        ok = !digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos && digits.size() < 11 &&
             ModP::is_prime(static_cast<std::uint32_t>(std::stoull(digits)));
      }
      if (!ok) parse_fail(root["field"], "field must be 'rationals' or 'fp:P' with P a prime below 2^31");
    }
    if (root["q"]) p.q = coefficient(root["q"]);
    if (p.q && (*p.q == "q" || *p.q == "-q")) parse_fail(root["q"], "q must be a number");
    if (root["max_degree"]) p.max_degree = count(root["max_degree"]);
    if (root["target"]) p.target = text(root["target"]);
    if (root["path"]) p.path = strings(root["path"]);
    if (auto as = root["algebras"]) {
      if (!as.IsMap()) parse_fail(as, "algebras must be a mapping from names");
      for (auto kv : as) p.algebras.push_back(parse_algebra(text(kv.first), kv.second));
    }
    if (auto bs = root["bimodules"]) {
      if (!bs.IsMap()) parse_fail(bs, "bimodules must be a mapping from names");
      for (auto kv : bs) p.bimodules.push_back(parse_bimodule(text(kv.first), kv.second));
    }
    if (auto qs = root["qset"]) {
      check_keys(qs, {"quiver", "algebras", "bimodules"});
      QSetSpec s;
      s.quiver = parse_quiver(need(qs, "quiver"));
      s.algebras = parse_names(need(qs, "algebras"));
      if (qs["bimodules"]) s.bimodules = parse_names(qs["bimodules"]);
      p.qset = std::move(s);
    }
    if (auto sq = root["square"]) {
      check_keys(sq, {"A", "B", "M", "N"});
      p.square = SquareSpec{text(need(sq, "A")), text(need(sq, "B")), text(need(sq, "M")), text(need(sq, "N"))};
    }
    if (auto pc = root["peirce"]) {
      check_keys(pc, {"A", "B", "down", "up"});
      p.peirce = PeirceSpec{text(need(pc, "A")), text(need(pc, "B")), parse_counts(need(pc, "down")),
                            parse_counts(need(pc, "up"))};
    }
    resolve_names(root, p);
    return p;
  } catch (const YAML::Exception& e) {
    throw ParseError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

inline ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_problem(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + std::string(e.what()).substr(std::string("ParseError: ").size()));
  }
}

// ----------------------------------------------------------------- emitting

namespace detail {

inline void emit_quiver(YAML::Emitter& out, const QuiverSpec& q) {
  out << YAML::BeginMap;
  out << YAML::Key << "vertices" << YAML::Value << YAML::Flow << q.vertices;
  if (!q.arrows.empty()) {
    out << YAML::Key << "arrows" << YAML::Value << YAML::BeginSeq;
    for (auto& a : q.arrows)
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "label" << YAML::Value << a.label << YAML::Key << "source"
          << YAML::Value << a.source << YAML::Key << "target" << YAML::Value << a.target << YAML::EndMap;
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
}

inline void emit_vector(YAML::Emitter& out, const VectorSpec& v) {
  out << YAML::Flow << YAML::BeginMap;
  for (auto& [k, c] : v) out << YAML::Key << k << YAML::Value << c;
  out << YAML::EndMap;
}

inline void emit_counts(YAML::Emitter& out, const std::vector<std::vector<std::size_t>>& m) {
  out << YAML::BeginSeq;
  for (auto& r : m) out << YAML::Flow << r;
  out << YAML::EndSeq;
}

}  // namespace detail

// Canonical form: fixed key order, normalised coefficients, words as lists.
inline std::string emit_problem(const ProblemFile& p) {
  using namespace detail;
  YAML::Emitter out;
  out << YAML::BeginMap;
  if (!p.name.empty()) out << YAML::Key << "name" << YAML::Value << p.name;
  out << YAML::Key << "field" << YAML::Value << p.field;
  if (p.q) out << YAML::Key << "q" << YAML::Value << *p.q;
  if (p.max_degree) out << YAML::Key << "max_degree" << YAML::Value << *p.max_degree;
  if (!p.target.empty()) out << YAML::Key << "target" << YAML::Value << p.target;
  if (!p.path.empty()) out << YAML::Key << "path" << YAML::Value << YAML::Flow << p.path;
  if (!p.algebras.empty()) {
    out << YAML::Key << "algebras" << YAML::Value << YAML::BeginMap;
    for (auto& a : p.algebras) {
      out << YAML::Key << a.name << YAML::Value << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << a.kind;
      if (a.kind == "semisimple" || a.kind == "linear_path" || a.kind == "truncated_polynomial")
        out << YAML::Key << "n" << YAML::Value << a.n;
      if (a.kind == "radical_square_zero" || a.kind == "presentation") {
        out << YAML::Key << "quiver" << YAML::Value;
        emit_quiver(out, a.quiver);
      }
      if (a.kind == "presentation") {
        out << YAML::Key << "cap" << YAML::Value << a.cap;
        if (!a.relations.empty()) {
          out << YAML::Key << "relations" << YAML::Value << YAML::BeginSeq;
          for (auto& r : a.relations) {
            out << YAML::BeginMap << YAML::Key << "lead" << YAML::Value << YAML::Flow << r.lead;
            if (!r.terms.empty()) {
              out << YAML::Key << "terms" << YAML::Value << YAML::BeginSeq;
              for (auto& t : r.terms)
                out << YAML::Flow << YAML::BeginMap << YAML::Key << "coeff" << YAML::Value << t.coeff << YAML::Key
                    << "word" << YAML::Value << YAML::Flow << t.word << YAML::EndMap;
              out << YAML::EndSeq;
            }
            out << YAML::EndMap;
          }
          out << YAML::EndSeq;
        }
      }
      if (a.kind == "structure_constants") {
        out << YAML::Key << "labels" << YAML::Value << YAML::Flow << a.labels;
        out << YAML::Key << "products" << YAML::Value << YAML::BeginSeq;
        for (auto& pr : a.products) {
          out << YAML::Flow << YAML::BeginMap << YAML::Key << "left" << YAML::Value << pr.left << YAML::Key << "right"
              << YAML::Value << pr.right << YAML::Key << "result" << YAML::Value;
          emit_vector(out, pr.result);
          out << YAML::EndMap;
        }
        out << YAML::EndSeq;
        out << YAML::Key << "unit" << YAML::Value;
        emit_vector(out, a.unit);
        out << YAML::Key << "system" << YAML::Value << YAML::BeginSeq;
        for (auto& s : a.system) emit_vector(out, s);
        out << YAML::EndSeq;
      }
      if (a.kind == "product") out << YAML::Key << "factors" << YAML::Value << YAML::Flow << a.factors;
      out << YAML::EndMap;
    }
    out << YAML::EndMap;
  }
  if (!p.bimodules.empty()) {
    out << YAML::Key << "bimodules" << YAML::Value << YAML::BeginMap;
    for (auto& b : p.bimodules) {
      out << YAML::Key << b.name << YAML::Value << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << b.kind;
      if (b.kind == "regular") out << YAML::Key << "algebra" << YAML::Value << b.left;
      if (b.kind == "free" || b.kind == "zero" || b.kind == "free_corner" || b.kind == "actions")
        out << YAML::Key << "left" << YAML::Value << b.left << YAML::Key << "right" << YAML::Value << b.right;
      if (b.kind == "free_corner") out << YAML::Key << "f" << YAML::Value << b.f << YAML::Key << "e" << YAML::Value << b.e;
      if (b.kind == "actions") {
        out << YAML::Key << "dim" << YAML::Value << b.dim;
        for (auto* side : {&b.left_action, &b.right_action}) {
          out << YAML::Key << (side == &b.left_action ? "left_action" : "right_action") << YAML::Value << YAML::BeginMap;
          for (auto& [k, m] : *side) {
            out << YAML::Key << k << YAML::Value << YAML::BeginSeq;
            for (auto& r : m) out << YAML::Flow << r;
            out << YAML::EndSeq;
          }
          out << YAML::EndMap;
        }
      }
      if (b.kind == "direct_sum") out << YAML::Key << "summands" << YAML::Value << YAML::Flow << b.summands;
      out << YAML::EndMap;
    }
    out << YAML::EndMap;
  }
  if (p.qset) {
    out << YAML::Key << "qset" << YAML::Value << YAML::BeginMap << YAML::Key << "quiver" << YAML::Value;
    emit_quiver(out, p.qset->quiver);
    out << YAML::Key << "algebras" << YAML::Value << YAML::Flow << p.qset->algebras;
    if (!p.qset->bimodules.empty()) out << YAML::Key << "bimodules" << YAML::Value << YAML::Flow << p.qset->bimodules;
    out << YAML::EndMap;
  }
  if (p.square) {
    out << YAML::Key << "square" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "A" << YAML::Value << p.square->A << YAML::Key << "B" << YAML::Value << p.square->B;
    out << YAML::Key << "M" << YAML::Value << p.square->M << YAML::Key << "N" << YAML::Value << p.square->N;
    out << YAML::EndMap;
  }
  if (p.peirce) {
    out << YAML::Key << "peirce" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "A" << YAML::Value << p.peirce->A << YAML::Key << "B" << YAML::Value << p.peirce->B;
    out << YAML::Key << "down" << YAML::Value;
    emit_counts(out, p.peirce->down);
    out << YAML::Key << "up" << YAML::Value;
    emit_counts(out, p.peirce->up);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

// ------------------------------------------------------------------ building

template <class K>
K scalar_from_rational(const Rational& r) {
  if constexpr (std::is_same_v<K, Rational>)
    return r;
  else
    return K::from_rational(r);
}

template <class K>
struct Instance {
  K q{};
  bool has_q = false;
  std::vector<std::pair<std::string, AlgebraPtr<K>>> algebras;
  std::map<std::string, Bimodule<K>> bimodules;
  std::optional<QSet<K>> qset;
  std::optional<SquareData<K>> square;
  std::optional<PeirceSquareQuiver> peirce;
  bool free_rank_one = false;  // square corners are B ⊗ A and A ⊗ B

  AlgebraPtr<K> algebra(const std::string& name) const {
    for (auto& [n, a] : algebras)
      if (n == name) return a;
    throw ParseError("unknown algebra '" + name + "'");
  }
  const Bimodule<K>& bimodule(const std::string& name) const {
    auto it = bimodules.find(name);
    if (it == bimodules.end()) throw ParseError("unknown bimodule '" + name + "'");
    return it->second;
  }
  // The Q-set the relative commands act on: explicit, else the round trip of the square.
  QSet<K> working_qset() const {
    if (qset) return *qset;
    if (square) return square_qset(*square);
    throw ParseError("the problem has neither a qset nor a square section");
  }
  // The algebra `hh` computes: the target, else Λ of the Q-set or square.
  std::pair<std::string, AlgebraPtr<K>> hh_algebra(const std::string& target) const {
    if (!target.empty()) return {target, algebra(target)};
    if (qset) return {"lambda", assemble_lambda(*qset).algebra};
    if (square) return {"lambda", assemble_square(*square)};
    if (algebras.size() == 1) return algebras.front();
    throw ParseError("nothing to compute: give a target algebra, a qset or a square");
  }
};

namespace detail {

template <class K>
K coefficient_value(const std::string& c, const Instance<K>& inst) {
  if (c == "q" || c == "-q") {
    if (!inst.has_q) throw ParseError("coefficient 'q' used but no q value is set");
    return c == "q" ? inst.q : -inst.q;
  }
  return scalar_from_rational<K>(Rational::parse(c));
}

inline Quiver build_quiver(const QuiverSpec& s) {
  std::vector<Arrow> arrows;
  auto vertex = [&](const std::string& v) {
    for (Index i = 0; i < s.vertices.size(); ++i)
      if (s.vertices[i] == v) return i;
    throw ParseError("unknown vertex '" + v + "'");
  };
  for (auto& a : s.arrows) arrows.push_back({a.label, vertex(a.source), vertex(a.target)});
  try {
    return Quiver(s.vertices, std::move(arrows));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

inline Word build_word(const Quiver& q, const std::vector<std::string>& w) {
  Word out;
  for (auto& l : w) {
    auto a = q.find_arrow(l);
    if (!a) throw ParseError("unknown arrow '" + l + "'");
    out.push_back(*a);
  }
  return out;
}

template <class K>
SparseVector<K> build_vector(const VectorSpec& v, const std::vector<std::string>& labels, const Instance<K>& inst) {
  std::vector<Entry<K>> raw;
  for (auto& [l, c] : v) {
    auto it = std::find(labels.begin(), labels.end(), l);
    if (it == labels.end()) throw ParseError("unknown basis label '" + l + "'");
    K x = coefficient_value(c, inst);
    if (x != K(0)) raw.push_back({Index(it - labels.begin()), x});
  }
  return SparseVector<K>::from_unsorted(std::move(raw));
}

template <class K>
AlgebraPtr<K> build_algebra(const AlgebraSpec& s, const Instance<K>& inst) {
  if (s.kind == "field") return field_algebra<K>();
  if (s.kind == "semisimple") return semisimple_algebra<K>(s.n);
  if (s.kind == "linear_path") return standard::linear_path_algebra<K>(s.n);
  if (s.kind == "truncated_polynomial") return standard::truncated_polynomial<K>(s.n);
  if (s.kind == "quantum_exterior") {
    if (!inst.has_q) throw ParseError("algebra '" + s.name + "' needs a q value");
    return standard::quantum_exterior<K>(inst.q);
  }
  if (s.kind == "radical_square_zero") return standard::radical_square_zero<K>(build_quiver(s.quiver));
  if (s.kind == "presentation") {
    RewritePresentation<K> p{build_quiver(s.quiver), {}, s.cap};
    for (auto& r : s.relations) {
      RewriteRule<K> rule{build_word(p.quiver, r.lead), {}};
      for (auto& t : r.terms) rule.replacement.push_back({coefficient_value(t.coeff, inst), build_word(p.quiver, t.word)});
      p.rules.push_back(std::move(rule));
    }
    return algebra_from_presentation(p);
  }
  if (s.kind == "structure_constants") {
    std::size_t n = s.labels.size();
    std::vector<SparseVector<K>> table(n * n);
    auto index = [&](const std::string& l) {
      auto it = std::find(s.labels.begin(), s.labels.end(), l);
      if (it == s.labels.end()) throw ParseError("unknown basis label '" + l + "'");
      return std::size_t(it - s.labels.begin());
    };
    for (auto& p : s.products) table[index(p.left) * n + index(p.right)] = build_vector(p.result, s.labels, inst);
    std::vector<SparseVector<K>> system;
    for (auto& e : s.system) system.push_back(build_vector(e, s.labels, inst));
    return algebra_from_structure_constants<K>(s.labels, std::move(table), build_vector(s.unit, s.labels, inst),
                                               std::move(system));
  }
  if (s.kind == "product") return product_algebra(*inst.algebra(s.factors[0]), *inst.algebra(s.factors[1]));
  throw ParseError("unknown algebra kind '" + s.kind + "'");
}

template <class K>
SparseMatrix<K> build_matrix(const MatrixSpec& m, std::size_t dim, const Instance<K>& inst) {
  if (m.size() != dim) throw ParseError("action matrix needs " + std::to_string(dim) + " rows");
  std::vector<Triplet<K>> t;
  for (Index i = 0; i < dim; ++i) {
    if (m[i].size() != dim) throw ParseError("action matrix needs " + std::to_string(dim) + " columns");
    for (Index j = 0; j < dim; ++j) {
      K x = coefficient_value(m[i][j], inst);
      if (x != K(0)) t.push_back({i, j, x});
    }
  }
  return SparseMatrix<K>::from_triplets(dim, dim, t);
}

template <class K>
Bimodule<K> build_bimodule(const BimoduleSpec& s, const Instance<K>& inst) {
  if (s.kind == "regular") return Bimodule<K>::regular(inst.algebra(s.left));
  if (s.kind == "direct_sum") {
    Bimodule<K> m = inst.bimodule(s.summands[0]);
    for (std::size_t i = 1; i < s.summands.size(); ++i) m = direct_sum(m, inst.bimodule(s.summands[i]));
    return m;
  }
  auto L = inst.algebra(s.left), R = inst.algebra(s.right);
  if (s.kind == "free") return free_bimodule(L, R);
  if (s.kind == "zero") return Bimodule<K>::zero(L, R);
  if (s.kind == "free_corner") return free_corner_bimodule(L, s.f, s.e, R);
  if (s.kind == "actions") {
    auto acts = [&](const std::map<std::string, MatrixSpec>& given, const AlgebraPtr<K>& alg) {
      std::vector<SparseMatrix<K>> out(alg->dim(), SparseMatrix<K>::zero(s.dim, s.dim));
      for (auto& [l, m] : given) {
        auto& labels = alg->labels();
        auto it = std::find(labels.begin(), labels.end(), l);
        if (it == labels.end()) throw ParseError("bimodule '" + s.name + "': unknown basis label '" + l + "'");
        out[it - labels.begin()] = build_matrix(m, s.dim, inst);
      }
      return out;
    };
    return Bimodule<K>::from_actions(L, R, s.dim, acts(s.left_action, L), acts(s.right_action, R));
  }
  throw ParseError("unknown bimodule kind '" + s.kind + "'");
}

}  // namespace detail

// Resolve names in order; every error carries the name it came from.
template <class K>
Instance<K> build(const ProblemFile& p, const std::optional<std::string>& q_override = std::nullopt) {
  using namespace detail;
  Instance<K> inst;
  auto q = q_override ? q_override : p.q;
  if (q) {
    inst.q = scalar_from_rational<K>(Rational::parse(*q));
    inst.has_q = true;
  }
  auto context = [](const std::string& what, const std::string& name, auto&& f) {
    try {
      return f();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(what + " '" + name + "': " + e.what());
    }
  };
  std::map<std::string, const BimoduleSpec*> bspec;
  for (auto& a : p.algebras) {
    for (auto& [n, _] : inst.algebras)
      if (n == a.name) throw ParseError("algebra '" + a.name + "' is defined twice");
    inst.algebras.push_back({a.name, context("algebra", a.name, [&] { return build_algebra(a, inst); })});
  }
  for (auto& b : p.bimodules) {
    inst.bimodules.emplace(b.name, context("bimodule", b.name, [&] { return build_bimodule(b, inst); }));
    bspec[b.name] = &b;
  }
  if (p.qset) {
    inst.qset = context("qset", "", [&] {
      Quiver qv = build_quiver(p.qset->quiver);
      std::vector<AlgebraPtr<K>> algs;
      for (auto& v : qv.vertices()) {
        auto it = p.qset->algebras.find(v);
        if (it == p.qset->algebras.end()) throw ParseError("qset: vertex '" + v + "' has no algebra");
        algs.push_back(inst.algebra(it->second));
      }
      std::vector<Bimodule<K>> mods;
      for (auto& a : qv.arrows()) {
        auto it = p.qset->bimodules.find(a.label);
        if (it == p.qset->bimodules.end()) throw ParseError("qset: arrow '" + a.label + "' has no bimodule");
        mods.push_back(inst.bimodule(it->second));
      }
      return QSet<K>(qv, algs, mods);
    });
  }
  if (p.square) {
    auto& s = *p.square;
    inst.square = context("square", "", [&] {
      return zero_square(inst.algebra(s.A), inst.algebra(s.B), inst.bimodule(s.M), inst.bimodule(s.N));
    });
    auto is_free = [&](const std::string& m, const std::string& l, const std::string& r) {
      auto* b = bspec.at(m);
      return b->kind == "free" && b->left == l && b->right == r;
    };
    inst.free_rank_one = is_free(s.M, s.B, s.A) && is_free(s.N, s.A, s.B);
  }
  if (p.peirce) {
    auto& s = *p.peirce;
    context("peirce", "", [&] {
      auto A = inst.algebra(s.A), B = inst.algebra(s.B);
      inst.peirce = peirce_square_quiver(A, B, s.down, s.up);
      if (!inst.square) {
        auto [M, N] = peirce_square_bimodules(A, B, *inst.peirce);
        inst.square = zero_square(A, B, M, N);
      }
      return 0;
    });
  }
  return inst;
}

}  // namespace hhcat
