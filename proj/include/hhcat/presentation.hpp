#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hhcat/algebra.hpp"
#include "hhcat/errors.hpp"

namespace hhcat {

// A path written in composition order: word[0] is traversed last, so the
// target of the path is target(word[0]) and its source is source(word.back()).
using Word = std::vector<Index>;

struct DegLex {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

template <class K>
struct RewriteRule {
  Word lead;
  std::vector<std::pair<K, Word>> replacement;  // empty means lead -> 0
};

template <class K>
struct RewritePresentation {
  Quiver quiver;
  std::vector<RewriteRule<K>> rules;
  std::size_t cap = 12;
};

namespace detail {

template <class K>
class Rewriter {
 public:
  using LinComb = std::map<Word, K, DegLex>;

  explicit Rewriter(const RewritePresentation<K>& p) : p_(p) {
    for (std::size_t r = 0; r < p_.rules.size(); ++r) validate_rule(r);
  }

  bool is_path(const Word& w) const {
    if (w.empty()) return false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (arrow(w[i]).source != arrow(w[i + 1]).target) return false;
    return true;
  }
  Index source(const Word& w) const { return arrow(w.back()).source; }
  Index target(const Word& w) const { return arrow(w.front()).target; }

  std::string word_label(const Word& w) const {
    bool single = true;
    for (auto& a : p_.quiver.arrows()) single = single && a.label.size() == 1;
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i && !single ? "*" : "") + arrow(w[i]).label;
    return s;
  }

  const LinComb& normal_form(const Word& w) {
    auto it = memo_.find(w);
    if (it != memo_.end()) return it->second;
    LinComb out;
    bool rewritten = false;
    for (std::size_t pos = 0; pos < w.size() && !rewritten; ++pos)
      for (std::size_t r = 0; r < p_.rules.size() && !rewritten; ++r)
        if (occurs_at(p_.rules[r].lead, w, pos)) {
          out = apply(r, w, pos);
          rewritten = true;
        }
    if (!rewritten) out.emplace(w, K(1));
    return memo_.emplace(w, std::move(out)).first->second;
  }

  // Rewrite with rule r at pos, then normalize everything.
  LinComb apply(std::size_t r, const Word& w, std::size_t pos) {
    LinComb out;
    const auto& rule = p_.rules[r];
    for (auto& [c, term] : rule.replacement) {
      Word nw(w.begin(), w.begin() + pos);
      nw.insert(nw.end(), term.begin(), term.end());
      nw.insert(nw.end(), w.begin() + pos + rule.lead.size(), w.end());
      for (auto& [u, d] : normal_form(nw)) add(out, u, c * d);
    }
    return out;
  }

  bool is_normal(const Word& w) const {
    for (std::size_t pos = 0; pos < w.size(); ++pos)
      for (auto& rule : p_.rules)
        if (occurs_at(rule.lead, w, pos)) return false;
    return true;
  }

  void check_confluence() {
    for (std::size_t r1 = 0; r1 < p_.rules.size(); ++r1)
      for (std::size_t r2 = 0; r2 < p_.rules.size(); ++r2) {
        const Word& l1 = p_.rules[r1].lead;
        const Word& l2 = p_.rules[r2].lead;
        // Proper overlaps: a suffix of l1 equals a prefix of l2.
        for (std::size_t k = 1; k < std::min(l1.size(), l2.size()); ++k) {
          if (!std::equal(l1.end() - k, l1.end(), l2.begin())) continue;
          Word w = l1;
          w.insert(w.end(), l2.begin() + k, l2.end());
          compare(w, r1, 0, r2, l1.size() - k);
        }
        // Inclusions: l2 occurs inside l1.
        if (l2.size() <= l1.size())
          for (std::size_t pos = 0; pos + l2.size() <= l1.size(); ++pos) {
            if (r1 == r2 && pos == 0) continue;
            if (occurs_at(l2, l1, pos)) compare(l1, r1, 0, r2, pos);
          }
      }
  }

  const Arrow& arrow(Index a) const { return p_.quiver.arrow(a); }

 private:
  static bool occurs_at(const Word& lead, const Word& w, std::size_t pos) {
    if (pos + lead.size() > w.size()) return false;
    return std::equal(lead.begin(), lead.end(), w.begin() + pos);
  }

  static void add(LinComb& lc, const Word& w, const K& c) {
    if (c.is_zero()) return;
    auto it = lc.find(w);
    if (it == lc.end()) {
      lc.emplace(w, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) lc.erase(it);
    }
  }

  void compare(const Word& w, std::size_t r1, std::size_t pos1, std::size_t r2, std::size_t pos2) {
    LinComb a = apply(r1, w, pos1);
    LinComb b = apply(r2, w, pos2);
    if (a != b)
      throw NotConfluent("critical pair on " + word_label(w) + ": rule '" + word_label(p_.rules[r1].lead) +
                         "' gives " + show(a) + " but rule '" + word_label(p_.rules[r2].lead) + "' gives " + show(b));
  }

  std::string show(const LinComb& lc) const {
    if (lc.empty()) return "0";
    std::string s;
    for (auto& [w, c] : lc) s += (s.empty() ? "" : " + ") + c.to_string() + "*" + word_label(w);
    return s;
  }

  void validate_rule(std::size_t r) const {
    const auto& rule = p_.rules[r];
    if (rule.lead.size() < 2) throw Error("rewrite rule leading path must have length at least 2");
    for (Index a : rule.lead)
      if (a >= p_.quiver.num_arrows()) throw Error("rewrite rule mentions an unknown arrow");
    if (!is_path(rule.lead)) throw Error("rewrite rule leading word '" + word_label(rule.lead) + "' is not a path");
    for (auto& [c, term] : rule.replacement) {
      if (!is_path(term)) throw Error("replacement term of rule '" + word_label(rule.lead) + "' is not a path");
      if (source(term) != source(rule.lead) || target(term) != target(rule.lead))
        throw Error("replacement term '" + word_label(term) + "' is not parallel to '" + word_label(rule.lead) + "'");
      if (!DegLex()(term, rule.lead))
        throw Error("replacement term '" + word_label(term) + "' is not smaller than '" + word_label(rule.lead) +
                    "' in length-lexicographic order, so rewriting might not terminate");
    }
  }

  const RewritePresentation<K>& p_;
  std::map<Word, LinComb, DegLex> memo_;
};

}  // namespace detail

// Basis: trivial paths (vertex order), then normal-form paths in
// length-lexicographic order; the system is the set of trivial paths.
template <class K>
AlgebraPtr<K> algebra_from_presentation(const RewritePresentation<K>& p) {
  detail::Rewriter<K> rw(p);
  rw.check_confluence();
  const Quiver& q = p.quiver;

  std::vector<Word> words;
  std::vector<Word> layer;
  for (Index a = 0; a < q.num_arrows(); ++a) layer.push_back({a});
  std::size_t len = 1;
  while (!layer.empty()) {
    if (len > p.cap)
      throw InfiniteDimensional("normal-form path '" + rw.word_label(layer.front()) + "' is longer than the cap " +
                                std::to_string(p.cap));
    std::sort(layer.begin(), layer.end());
    words.insert(words.end(), layer.begin(), layer.end());
    std::vector<Word> next;
    for (auto& w : layer)
      for (Index a = 0; a < q.num_arrows(); ++a) {
        if (q.arrow(a).source != rw.target(w)) continue;
        Word nw{a};
        nw.insert(nw.end(), w.begin(), w.end());
        if (rw.is_normal(nw)) next.push_back(std::move(nw));
      }
    layer = std::move(next);
    ++len;
  }

  std::size_t nv = q.num_vertices(), dim = nv + words.size();
  std::map<Word, Index> index;
  for (std::size_t k = 0; k < words.size(); ++k) index[words[k]] = static_cast<Index>(nv + k);
  std::vector<std::string> labels;
  for (auto& v : q.vertices()) labels.push_back("e_" + v);
  for (auto& w : words) labels.push_back(rw.word_label(w));

  std::vector<SparseVector<K>> table(dim * dim);
  auto word_of = [&](Index i) -> const Word& { return words[i - nv]; };
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) {
      SparseVector<K>& out = table[i * dim + j];
      if (i < nv && j < nv) {
        if (i == j) out = SparseVector<K>::unit(i);
      } else if (i < nv) {
        if (rw.target(word_of(j)) == i) out = SparseVector<K>::unit(j);
      } else if (j < nv) {
        if (rw.source(word_of(i)) == j) out = SparseVector<K>::unit(i);
      } else {
        const Word& u = word_of(i);
        const Word& v = word_of(j);
        if (rw.source(u) != rw.target(v)) continue;
        Word uv = u;
        uv.insert(uv.end(), v.begin(), v.end());
        std::vector<Entry<K>> raw;
        for (auto& [w, c] : rw.normal_form(uv)) raw.push_back({index.at(w), c});
        out = SparseVector<K>::from_unsorted(std::move(raw));
      }
    }
  SparseVector<K> unit;
  std::vector<SparseVector<K>> system;
  for (Index v = 0; v < nv; ++v) {
    unit.push_back(v, K(1));
    system.push_back(SparseVector<K>::unit(v));
  }
  return algebra_from_structure_constants<K>(labels, table, unit, system);
}

}  // namespace hhcat
