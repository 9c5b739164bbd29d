#pragma once

// Square roots: r(x) (.) r(x) = x, and y (.) y <= x implies y <= r(x).
//
// Construction, brute-force search, closed forms, strictness, the
// Boolean x strict classification and its splitting map.

#include "emvkit/algebra.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace emv {

struct SquareRoot {
  enum class Form { identity, affine, general, table };

  Form form = Form::identity;
  /// r(0).  Always set; for the general form it parametrizes the formula.
  Element r0;
  std::map<Element, Element> table;

  static SquareRoot identity(const Algebra& m) { return {Form::identity, m.zero(), {}}; }
  static SquareRoot affine(Element r0) { return {Form::affine, std::move(r0), {}}; }
  static SquareRoot general(Element r0) { return {Form::general, std::move(r0), {}}; }
  static SquareRoot from_table(const Algebra& m, std::map<Element, Element> t) {
    Element r0 = t.count(m.zero()) ? t.at(m.zero()) : m.zero();
    return {Form::table, std::move(r0), std::move(t)};
  }
};

inline std::string form_name(SquareRoot::Form f) {
  switch (f) {
    case SquareRoot::Form::identity: return "identity";
    case SquareRoot::Form::affine: return "affine";
    case SquareRoot::Form::general: return "general";
    case SquareRoot::Form::table: return "table";
  }
  return "?";
}

/// (x ^ w_a) v ((x ^ w_a') + w_a')/2 with w_a = lambda_a(r0) (.) lambda_a(r0)
/// and w_a' = lambda_a(w_a), for an idempotent a above r(r0) and x.
inline Element general_form_at(const Algebra& m, const Element& r0, const Element& a, const Element& x) {
  const Element la = m.complement_in(a, r0);
  const Element w = m.odot_within(a, la, la);
  const Element wc = m.complement_in(a, w);
  auto h = m.half_sum(m.meet(x, wc), wc);
  if (!h) throw InvariantError("half-sum (" + m.format(m.meet(x, wc)) + "+" + m.format(wc) + ")/2 is not in " + m.name());
  return m.join(m.meet(x, w), *h);
}

/// The Boolean element w = lambda_a(r0) (.) lambda_a(r0) at a = top, or at the
/// canonical cover of r0 (+) r0 when there is no top.
inline Element splitting_element(const Algebra& m, const Element& r0) {
  const Element a = m.has_top() ? m.top() : m.cover(m.oplus(r0, r0));
  const Element la = m.complement_in(a, r0);
  return m.odot_within(a, la, la);
}

inline Element apply(const Algebra& m, const SquareRoot& r, const Element& x) {
  switch (r.form) {
    case SquareRoot::Form::identity: return x;
    case SquareRoot::Form::affine: {
      auto h = m.half_sum(x, m.top());
      if (!h) throw InvariantError("(x+u)/2 is not in " + m.name() + " for x=" + m.format(x));
      return *h;
    }
    case SquareRoot::Form::general: return general_form_at(m, r.r0, m.cover(m.join(x, r.r0)), x);
    case SquareRoot::Form::table: {
      auto it = r.table.find(x);
      if (it == r.table.end()) throw DomainError("square-root table has no entry for " + m.format(x));
      return it->second;
    }
  }
  throw InvariantError("unknown square-root form");
}

using RootFn = std::function<Element(const Element&)>;

inline RootFn root_function(const AlgebraPtr& m, const SquareRoot& r) {
  return [m, r](const Element& x) { return apply(*m, r, x); };
}

inline SquareRoot sqrt_general_form(const Algebra&, Element r0) { return SquareRoot::general(std::move(r0)); }

/// max{y in candidates : y (.) y <= x} when the join of that set belongs to
/// it, otherwise nothing.  The caller vouches that the candidates contain
/// every y with y (.) y <= x that could be maximal.
inline std::optional<Element> sqrt_oracle(const Algebra& m, const Element& x, const std::vector<Element>& candidates) {
  std::optional<Element> acc;
  bool attained = false;
  for (const auto& y : candidates) {
    if (!m.leq(m.odot(y, y), x)) continue;
    if (!acc || m.leq(*acc, y)) {
      attained = true;
      acc = y;
    } else if (!m.leq(y, *acc)) {
      acc = m.join(*acc, y);
      attained = false;
    }
  }
  if (!acc) return std::nullopt;
  if (attained) return acc;
  if (std::find(candidates.begin(), candidates.end(), *acc) != candidates.end() && m.leq(m.odot(*acc, *acc), x)) return acc;
  return std::nullopt;
}

/// Brute force over the whole algebra; refuses truncated enumerations.
inline std::optional<Element> sqrt_oracle(const Algebra& m, const Element& x, const Budget& budget) {
  Enumeration all = m.enumerate(budget);
  if (!all.exhaustive) throw DomainError("oracle needs an exhaustive enumeration of " + m.name());
  return sqrt_oracle(m, x, all.elements);
}

struct Witness {
  enum class Kind { none, no_max, no_upper_bound, sq1_fail, not_closed };

  Kind kind = Kind::none;
  Element x;
  /// no_max / no_upper_bound: a strictly increasing chain of elements y with
  /// y (.) y <= x.
  std::vector<Element> chain;
  /// sq1_fail: the maximum of {y : y (.) y <= x}, when it exists.
  std::optional<Element> candidate;
  std::string message;
};

inline std::string witness_kind_name(Witness::Kind k) {
  switch (k) {
    case Witness::Kind::none: return "none";
    case Witness::Kind::no_max: return "no-max";
    case Witness::Kind::no_upper_bound: return "no-upper-bound";
    case Witness::Kind::sq1_fail: return "sq1-fail";
    case Witness::Kind::not_closed: return "not-closed";
  }
  return "?";
}

struct ExistenceVerdict {
  bool exists = false;
  std::optional<SquareRoot> root;
  Witness witness;
};

namespace detail {

inline std::string describe_half_plus_unit(const Carrier& c, const GroupElement& x) {
  const GroupElement s = c.add(x, c.unit());
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Rational>) return format_rational(Rational(v / 2));
        else if constexpr (std::is_same_v<T, Quad>) {
          std::string out;
          if (v.a != 0) out = format_rational(Rational(v.a, 2));
          if (v.b != 0) out += (out.empty() ? "" : "+") + format_rational(Rational(v.b, 2)) + "*sqrt2";
          return out.empty() ? "0" : out;
        } else if constexpr (std::is_same_v<T, ScaledInt>) {
          return format_rational(Rational(v.value, 2 * c.parameter()));
        } else {
          return "c(" + format_rational(Rational(v.hi, 2)) + "," + format_rational(Rational(v.lo, 2)) + ")";
        }
      },
      s);
}

inline std::string chain_text(const Algebra& m, const std::vector<Element>& chain) {
  std::string s;
  for (std::size_t i = 0; i < chain.size() && i < 3; ++i) s += (i ? " < " : "") + m.format(chain[i]);
  return s + " < ...";
}

/// Places a factor element at coordinate i of a product, zero elsewhere.
inline Element lift(const ProductAlgebra& p, std::size_t i, const Element& v) {
  Element z = p.zero();
  z.items[i] = v;
  return z;
}

}  // namespace detail

/// The table of the oracle over an exhaustive enumeration, or the first x
/// where the maximum is missing or (Sq1) fails.
inline ExistenceVerdict sqrt_build_finite(const Algebra& m, const Budget& budget) {
  Enumeration all = m.enumerate(budget);
  if (!all.exhaustive) throw DomainError(m.name() + " is too large to search exhaustively");
  std::map<Element, Element> table;
  bool identity = true;
  for (const auto& x : all.elements) {
    auto best = sqrt_oracle(m, x, all.elements);
    if (!best || m.odot(*best, *best) != x) {
      ExistenceVerdict v;
      v.witness.kind = Witness::Kind::sq1_fail;
      v.witness.x = x;
      v.witness.candidate = best;
      v.witness.message = "x=" + m.format(x) + (best ? ": max exists but (Sq1) fails" : ": no maximum");
      return v;
    }
    identity = identity && *best == x;
    table.emplace(x, *best);
  }
  ExistenceVerdict v;
  v.exists = true;
  v.root = identity ? SquareRoot::identity(m) : SquareRoot::from_table(m, std::move(table));
  return v;
}

inline ExistenceVerdict sqrt_build(const Algebra& m, const Budget& budget = {});

namespace detail {

inline ExistenceVerdict sqrt_build_gamma(const GammaAlgebra& g, const Budget& budget) {
  if (g.finite()) return sqrt_build_finite(g, budget);
  const Carrier& c = g.carrier();
  ExistenceVerdict v;
  if (g.is_chang()) {
    // Every infinitesimal squares to 0, so {y : y (.) y <= 0} is the
    // unbounded chain (0,1) < (0,2) < ...
    v.witness.kind = Witness::Kind::no_max;
    v.witness.x = g.zero();
    for (int k = 1; k <= 10; ++k) v.witness.chain.push_back(Element::group(Lex{0, k}));
    v.witness.message = "x=c(0,0): y*y<=x along " + chain_text(g, v.witness.chain) + " with no maximum";
    return v;
  }
  if (auto gap = c.halving_gap()) {
    v.witness.kind = Witness::Kind::not_closed;
    v.witness.x = Element::group(*gap);
    v.witness.message = "x=" + g.format(v.witness.x) + ": (x+1)/2=" + describe_half_plus_unit(c, *gap) + " not in algebra";
    return v;
  }
  v.exists = true;
  v.root = SquareRoot::affine(*g.half_sum(g.zero(), g.top()));
  return v;
}

inline ExistenceVerdict sqrt_build_product(const ProductAlgebra& p, const Budget& budget) {
  std::vector<Element> r0;
  bool all_identity = true;
  bool all_affine = true;
  for (std::size_t i = 0; i < p.factors().size(); ++i) {
    const Algebra& f = *p.factors()[i];
    ExistenceVerdict fv = sqrt_build(f, budget);
    if (!fv.exists) {
      ExistenceVerdict v;
      v.witness = fv.witness;
      v.witness.x = lift(p, i, fv.witness.x);
      for (auto& y : v.witness.chain) y = lift(p, i, y);
      if (v.witness.candidate) {
        // The maximum in the product also maximizes the other coordinates at 0.
        Element c = lift(p, i, *v.witness.candidate);
        for (std::size_t j = 0; j < p.factors().size() && v.witness.candidate; ++j) {
          if (j == i) continue;
          const Algebra& g = *p.factors()[j];
          if (g.enumerate(budget).exhaustive) {
            auto best = sqrt_oracle(g, g.zero(), budget);
            if (best) c.items[j] = *best;
            else v.witness.candidate.reset();
          } else if (auto gv = sqrt_build(g, budget); gv.exists) {
            c.items[j] = apply(g, *gv.root, g.zero());
          } else {
            v.witness.candidate.reset();
          }
        }
        if (v.witness.candidate) v.witness.candidate = c;
      }
      v.witness.message = "factor " + std::to_string(i + 1) + " (" + f.name() + "): " + fv.witness.message;
      return v;
    }
    all_identity = all_identity && fv.root->form == SquareRoot::Form::identity;
    all_affine = all_affine && fv.root->form == SquareRoot::Form::affine;
    r0.push_back(fv.root->r0);
  }
  ExistenceVerdict v;
  v.exists = true;
  if (all_identity) v.root = SquareRoot::identity(p);
  else if (all_affine && p.has_top()) v.root = SquareRoot::affine(Element::tuple(std::move(r0)));
  else v.root = SquareRoot::general(Element::tuple(std::move(r0)));
  return v;
}

inline ExistenceVerdict sqrt_build_sum(const SumAlgebra& s, const Budget& budget) {
  ExistenceVerdict bv = sqrt_build(s.base(), budget);
  ExistenceVerdict v;
  if (!bv.exists) {
    v.witness = bv.witness;
    v.witness.x = s.constant_prefix(bv.witness.x, 1);
    for (auto& y : v.witness.chain) y = s.constant_prefix(y, 1);
    if (v.witness.candidate) v.witness.candidate = s.constant_prefix(*v.witness.candidate, 1);
    v.witness.message = "component 1: " + bv.witness.message;
    return v;
  }
  // r_i(0) > 0 on every index: the elements with value r(0) on 1..n all
  // square to 0 and have no common upper bound of finite support.
  v.witness.kind = Witness::Kind::no_upper_bound;
  v.witness.x = s.zero();
  for (unsigned n = 1; n <= 10; ++n) v.witness.chain.push_back(s.constant_prefix(bv.root->r0, n));
  v.witness.message = "x=[]: {y : y*y=0} has no upper bound: " + chain_text(s, v.witness.chain);
  return v;
}

inline ExistenceVerdict sqrt_build_repr(const ReprAlgebra& n, const Budget& budget) {
  ExistenceVerdict bv = sqrt_build(n.base(), budget);
  ExistenceVerdict v;
  if (!bv.exists) {
    v.witness = bv.witness;
    v.witness.x = Element::inl(bv.witness.x);
    for (auto& y : v.witness.chain) y = Element::inl(y);
    if (v.witness.candidate) v.witness.candidate = Element::inl(*v.witness.candidate);
    v.witness.message = "restriction to the ideal: " + bv.witness.message;
    return v;
  }
  v.exists = true;
  v.root = bv.root->form == SquareRoot::Form::identity ? SquareRoot::identity(n)
                                                       : SquareRoot::general(Element::inl(bv.root->r0));
  return v;
}

}  // namespace detail

/// Decides existence and builds the square root of a cataloged algebra.
inline ExistenceVerdict sqrt_build(const Algebra& m, const Budget& budget) {
  if (m.generalized_boolean()) {
    ExistenceVerdict v;
    v.exists = true;
    v.root = SquareRoot::identity(m);
    return v;
  }
  switch (m.kind()) {
    case AlgebraKind::gamma: return detail::sqrt_build_gamma(dynamic_cast<const GammaAlgebra&>(m), budget);
    case AlgebraKind::product: return detail::sqrt_build_product(dynamic_cast<const ProductAlgebra&>(m), budget);
    case AlgebraKind::sum: return detail::sqrt_build_sum(dynamic_cast<const SumAlgebra&>(m), budget);
    case AlgebraKind::repr: return detail::sqrt_build_repr(dynamic_cast<const ReprAlgebra&>(m), budget);
    case AlgebraKind::finsubsets:
    case AlgebraKind::wrapped: return sqrt_build_finite(m, budget);
  }
  throw InvariantError("unknown algebra kind");
}

/// Re-derives a negative verdict from its witness by direct evaluation.
inline bool recheck(const Algebra& m, const ExistenceVerdict& v, const Budget& budget = {}) {
  if (v.exists) return false;
  const Witness& w = v.witness;
  if (!m.contains(w.x)) return false;
  switch (w.kind) {
    case Witness::Kind::sq1_fail: {
      auto best = sqrt_oracle(m, w.x, budget);
      if (best != w.candidate) return false;
      return !best || m.odot(*best, *best) != w.x;
    }
    case Witness::Kind::not_closed: return m.has_top() && !m.half_sum(w.x, m.top()).has_value();
    case Witness::Kind::no_max:
    case Witness::Kind::no_upper_bound: {
      if (w.chain.size() < 8) return false;
      for (std::size_t i = 0; i < w.chain.size(); ++i) {
        if (!m.contains(w.chain[i]) || !m.leq(m.odot(w.chain[i], w.chain[i]), w.x)) return false;
        if (i && (!m.leq(w.chain[i - 1], w.chain[i]) || w.chain[i - 1] == w.chain[i])) return false;
      }
      return true;
    }
    case Witness::Kind::none: return false;
  }
  return false;
}

struct VerifyReport {
  bool ok = true;
  std::size_t checked = 0;
  std::string failure;
};

/// (Sq1) on xs.  (Sq2) on every pair when |xs|*|ys| fits the tuple budget;
/// otherwise on the window [x v r0, x (+) r0], which holds every y with
/// y (.) y <= x: all of ys inside it on chains, ys projected into it
/// elsewhere.
inline VerifyReport verify_sqrt(const Algebra& m, const RootFn& r, const std::vector<Element>& xs,
                                const std::vector<Element>& ys, const Budget& budget = {}) {
  VerifyReport rep;
  const Element r0 = r(m.zero());
  const bool all_pairs = xs.size() * ys.size() <= budget.exhaustive_tuples;
  std::vector<Element> sorted;
  if (!all_pairs && m.totally_ordered()) {
    sorted = ys;
    std::sort(sorted.begin(), sorted.end(), [&](const Element& a, const Element& b) { return !m.leq(b, a); });
  }
  const std::size_t per_x = std::max<std::size_t>(16, budget.exhaustive_tuples / std::max<std::size_t>(1, xs.size()));
  const auto picks = detail::stride_indices(ys.size(), per_x);
  auto probe = [&](const Element& x, const Element& rx, const Element& y) {
    ++rep.checked;
    if (m.leq(m.odot(y, y), x) && !m.leq(y, rx)) {
      rep.ok = false;
      rep.failure = "(Sq2) fails at x=" + m.format(x) + ", y=" + m.format(y);
    }
    return rep.ok;
  };
  for (const auto& x : xs) {
    const Element rx = r(x);
    ++rep.checked;
    if (m.odot(rx, rx) != x) {
      rep.ok = false;
      rep.failure = "(Sq1) fails at x=" + m.format(x);
      return rep;
    }
    const Element lo = m.join(x, r0);
    const Element hi = m.oplus(x, r0);
    if (all_pairs) {
      for (const auto& y : ys)
        if (!probe(x, rx, y)) return rep;
    } else if (!sorted.empty()) {
      auto first = std::partition_point(sorted.begin(), sorted.end(), [&](const Element& y) { return !m.leq(lo, y); });
      for (auto it = first; it != sorted.end() && m.leq(*it, hi); ++it)
        if (!probe(x, rx, *it)) return rep;
    } else {
      for (auto i : picks)
        if (!probe(x, rx, m.join(lo, m.meet(ys[i], hi)))) return rep;
    }
  }
  return rep;
}

inline VerifyReport verify_sqrt(const Algebra& m, const SquareRoot& r, const Budget& budget = {}) {
  const auto elems = m.enumerate(budget).elements;
  return verify_sqrt(m, [&](const Element& x) { return apply(m, r, x); }, elems, elems, budget);
}

struct StrictReport {
  bool strict = false;
  /// Strict yet no top element: impossible for a genuine square root.
  bool contradiction = false;
  std::optional<Element> failing_idempotent;
};

/// r_b(0) = lambda_b(r_b(0)) for every enumerated idempotent b >= r(0).
inline StrictReport is_strict(const Algebra& m, const RootFn& r, const Budget& budget = {}) {
  const Element r0 = r(m.zero());
  auto bs = m.idempotents(budget);
  bs.push_back(m.cover(r0));
  if (m.has_top()) bs.push_back(m.top());
  StrictReport rep;
  rep.strict = true;
  for (const auto& b : bs) {
    if (!m.leq(r0, b)) continue;
    const Element rb0 = m.meet(r0, b);
    if (m.complement_in(b, rb0) != rb0) {
      rep.strict = false;
      rep.failing_idempotent = b;
      break;
    }
  }
  rep.contradiction = rep.strict && !m.has_top();
  return rep;
}

inline StrictReport is_strict(const Algebra& m, const SquareRoot& r, const Budget& budget = {}) {
  return is_strict(m, [&](const Element& x) { return apply(m, r, x); }, budget);
}

struct Classification {
  enum class Tag { generalized_boolean, strict, product };

  Tag tag = Tag::generalized_boolean;
  std::string boolean_part;
  std::string strict_part;
  /// The Boolean element splitting M (product tag only).
  std::optional<Element> w;
  std::string text;
};

namespace detail {

/// Leaves of a nested product: non-product factors and boolean blocks,
/// paired with the matching component of r(0).
inline void product_leaves(const Algebra& m, const Element& r0, std::vector<std::pair<std::string, bool>>& out) {
  const auto* p = dynamic_cast<const ProductAlgebra*>(&m);
  if (p && !p->is_boolean_block()) {
    for (std::size_t i = 0; i < p->factors().size(); ++i) product_leaves(*p->factors()[i], r0.items[i], out);
    return;
  }
  out.emplace_back(m.name(), r0 == m.zero());
}

inline std::string join_names(const std::vector<std::string>& names) {
  if (names.size() == 1) return names[0];
  std::string s = "product(";
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + names[i];
  return s + ")";
}

}  // namespace detail

inline Classification classify(const Algebra& m, const SquareRoot& r, const Budget& budget = {}) {
  const VerifyReport check = verify_sqrt(m, r, budget);
  if (!check.ok) throw InvariantError("not a square root: " + check.failure);
  Classification c;
  const Element r0 = apply(m, r, m.zero());
  if (r0 == m.zero()) {
    c.tag = Classification::Tag::generalized_boolean;
    c.text = "generalized-boolean";
    return c;
  }
  if (is_strict(m, r, budget).strict) {
    c.tag = Classification::Tag::strict;
    c.text = "strict";
    return c;
  }
  c.tag = Classification::Tag::product;
  c.w = splitting_element(m, r0);
  if (m.kind() == AlgebraKind::product) {
    std::vector<std::pair<std::string, bool>> leaves;
    detail::product_leaves(m, r0, leaves);
    std::vector<std::string> b, s;
    for (auto& [n, boolean] : leaves) (boolean ? b : s).push_back(n);
    c.boolean_part = detail::join_names(b);
    c.strict_part = detail::join_names(s);
  } else {
    c.boolean_part = "[0," + m.format(*c.w) + "]";
    c.strict_part = "[0," + m.format(m.oplus(r0, r0)) + "]";
  }
  c.text = "product: boolean=" + c.boolean_part + ", strict=" + c.strict_part + ", w=" + m.format(*c.w);
  return c;
}

inline std::string classification_name(Classification::Tag t) {
  switch (t) {
    case Classification::Tag::generalized_boolean: return "generalized-boolean";
    case Classification::Tag::strict: return "strict";
    case Classification::Tag::product: return "product";
  }
  return "?";
}

/// M = M1 x M2 with M1 = {x ^ t} all idempotent and M2 = [0,e] strict, where
/// e = r(0) (+) r(0) and t = lambda_b(e) inside the cover b of x v e.
struct Decomposition {
  Classification classification;
  Element e;

  std::pair<Element, Element> split(const Algebra& m, const Element& x) const {
    const Element b = m.cover(m.join(x, e));
    return {m.meet(x, m.complement_in(b, e)), m.meet(x, e)};
  }
  Element recompose(const Algebra& m, const Element& m1, const Element& m2) const { return m.join(m1, m2); }
};

inline Decomposition decompose(const Algebra& m, const SquareRoot& r, const Budget& budget = {}) {
  Classification c = classify(m, r, budget);
  if (c.tag != Classification::Tag::product)
    throw DomainError(m.name() + " is " + c.text + "; there is nothing to decompose");
  const Element r0 = apply(m, r, m.zero());
  return {std::move(c), m.oplus(r0, r0)};
}

struct DecompositionReport {
  bool ok = true;
  std::size_t checked = 0;
  std::size_t boolean_size = 0;
  std::size_t boolean_atoms = 0;
  std::string failure;
};

/// Exhaustive over the enumeration: split is a bijective homomorphism onto
/// the product of its images, recomposition inverts it, M1 is Boolean and
/// r restricted to M2 = [0,e] is strict.
inline DecompositionReport verify_decomposition(const Algebra& m, const SquareRoot& r, const Decomposition& d,
                                                const Budget& budget = {}) {
  DecompositionReport rep;
  auto fail = [&](const std::string& why) {
    rep.ok = false;
    rep.failure = why;
    return rep;
  };
  const auto xs = m.enumerate(budget).elements;
  std::vector<Element> firsts, seconds;
  for (const auto& x : xs) {
    ++rep.checked;
    auto [m1, m2] = d.split(m, x);
    if (d.recompose(m, m1, m2) != x) return fail("recomposition fails at " + m.format(x));
    if (!m.is_idempotent(m1)) return fail("boolean part not idempotent at " + m.format(x));
    if (!m.leq(m2, d.e)) return fail("strict part escapes [0,e] at " + m.format(x));
    if (m.meet(m1, m2) != m.zero()) return fail("parts overlap at " + m.format(x));
    firsts.push_back(m1);
    seconds.push_back(m2);
  }
  std::sort(firsts.begin(), firsts.end());
  firsts.erase(std::unique(firsts.begin(), firsts.end()), firsts.end());
  std::sort(seconds.begin(), seconds.end());
  seconds.erase(std::unique(seconds.begin(), seconds.end()), seconds.end());
  const bool pairs_fit = xs.size() * xs.size() <= budget.exhaustive_tuples * 4;
  const std::size_t step = pairs_fit ? 1 : std::max<std::size_t>(1, xs.size() * xs.size() / (budget.exhaustive_tuples * 4));
  std::size_t k = 0;
  for (const auto& x : xs)
    for (const auto& y : xs) {
      if (k++ % step) continue;
      ++rep.checked;
      auto [x1, x2] = d.split(m, x);
      auto [y1, y2] = d.split(m, y);
      if (d.split(m, m.oplus(x, y)) != std::pair{m.oplus(x1, y1), m.oplus(x2, y2)}) return fail("split does not preserve (+)");
      if (d.split(m, m.join(x, y)) != std::pair{m.join(x1, y1), m.join(x2, y2)}) return fail("split does not preserve v");
      if (d.split(m, m.meet(x, y)) != std::pair{m.meet(x1, y1), m.meet(x2, y2)}) return fail("split does not preserve ^");
    }
  for (const auto& b : m.idempotents(budget))
    for (std::size_t i = 0; i < xs.size(); i += std::max<std::size_t>(1, xs.size() / 64)) {
      const Element x = m.meet(xs[i], b);
      auto [x1, x2] = d.split(m, x);
      auto [b1, b2] = d.split(m, b);
      if (d.split(m, m.complement_in(b, x)) != std::pair{m.complement_in(b1, x1), m.complement_in(b2, x2)})
        return fail("split does not preserve lambda");
    }
  for (const auto& p : firsts)
    for (const auto& q : seconds) {
      ++rep.checked;
      if (d.split(m, d.recompose(m, p, q)) != std::pair{p, q}) return fail("split is not onto the product of its images");
    }
  const Element r0 = apply(m, r, m.zero());
  if (m.meet(r0, d.e) != r0 || m.complement_in(d.e, r0) != r0) return fail("square root on [0,e] is not strict");
  rep.boolean_size = firsts.size();
  for (const auto& p : firsts) {
    if (p == m.zero()) continue;
    bool atom = true;
    for (const auto& q : firsts)
      if (q != m.zero() && q != p && m.leq(q, p)) atom = false;
    rep.boolean_atoms += atom;
  }
  return rep;
}

struct DivisibilityReport {
  bool divisible = true;
  std::size_t checked = 0;
  std::optional<Element> x;
  unsigned n = 0;
};

/// For idempotents first, then the other enumerated elements, and each
/// 2 <= n <= n_max, looks for y with n.y = x and (n-1).y (.) y = 0.
inline DivisibilityReport divisible_check(const Algebra& m, unsigned n_max, const Budget& budget = {}) {
  auto order = m.idempotents(budget);
  const auto elems = m.enumerate(budget).elements;
  order.insert(order.end(), elems.begin(), elems.end());
  DivisibilityReport rep;
  for (unsigned n = 2; n <= n_max; ++n)
    for (const auto& x : order) {
      ++rep.checked;
      Division d = m.divide(x, n);
      if (d.status == Division::Status::unknown) {
        d.status = Division::Status::none;
        for (const auto& y : elems)
          if (m.multiple(n, y) == x && m.odot(m.multiple(n - 1, y), y) == m.zero()) {
            d = {Division::Status::found, y};
            break;
          }
      }
      if (d.status == Division::Status::found) {
        if (m.multiple(n, d.value) != x || m.odot(m.multiple(n - 1, d.value), d.value) != m.zero())
          throw InvariantError("division returned a wrong quotient");
        continue;
      }
      rep.divisible = false;
      rep.x = x;
      rep.n = n;
      return rep;
    }
  return rep;
}

/// z with 0 < z < x and x (.) lambda_a(z) <= z, trying the half of x first.
inline std::optional<Element> atomless_witness(const Algebra& m, const Element& x, const std::vector<Element>& candidates) {
  const Element a = m.cover(x);
  auto good = [&](const Element& z) {
    return z != m.zero() && z != x && m.leq(z, x) && m.leq(m.odot(x, m.complement_in(a, z)), z);
  };
  if (auto h = m.half_sum(x, m.zero()); h && good(*h)) return h;
  for (const auto& z : candidates)
    if (good(z)) return z;
  return std::nullopt;
}

struct AtomlessReport {
  bool holds = true;
  std::size_t checked = 0;
  std::optional<Element> x;
};

inline AtomlessReport strongly_atomless_check(const Algebra& m, const Budget& budget = {}) {
  const auto elems = m.enumerate(budget).elements;
  AtomlessReport rep;
  for (const auto& x : elems) {
    if (x == m.zero()) continue;
    ++rep.checked;
    if (!atomless_witness(m, x, elems)) {
      rep.holds = false;
      rep.x = x;
      return rep;
    }
  }
  return rep;
}

struct TribeReport {
  bool halving_closed = true;
  bool dyadic_constants = true;
  bool sqrt_valid = true;
  bool strict = false;
  std::string witness;

  bool consistent() const { return halving_closed == dyadic_constants && dyadic_constants == sqrt_valid; }
};

/// Functions from an omega-point domain into the unit interval of a carrier,
/// i.e. the product of omega copies of that interval.  Checks that closure
/// under f -> (f+1)/2, presence of all dyadic constants, and validity of
/// s(f) = (f+1)/2 as a square root agree.
inline TribeReport tribe_criteria_check(unsigned omega, const Descriptor& carrier, const Budget& budget = {}) {
  if (omega == 0) throw DomainError("the domain must be non-empty");
  std::vector<Descriptor> copies(omega, carrier);
  auto f = make_algebra(Descriptor::product(copies));
  const auto& p = dynamic_cast<const ProductAlgebra&>(*f);
  const auto& g = dynamic_cast<const GammaAlgebra&>(*p.factors()[0]);
  auto constant = [&](const Element& v) { return Element::tuple(std::vector<Element>(omega, v)); };

  TribeReport rep;
  std::vector<Element> probes;
  if (auto gap = g.carrier().halving_gap()) probes.push_back(constant(Element::group(*gap)));
  const auto elems = f->enumerate(budget).elements;
  probes.insert(probes.end(), elems.begin(), elems.end());
  for (const auto& h : probes)
    if (!f->half_sum(h, f->top())) {
      rep.halving_closed = false;
      rep.witness = "(f+1)/2 undefined at f=" + f->format(h);
      break;
    }

  Integer den = 1;
  for (unsigned e = 0; e <= budget.max_denom_exp && rep.dyadic_constants; ++e, den *= 2)
    for (Integer i = 0; i <= den; ++i) {
      Element c = constant(Element::group(Rational(i, den)));
      if (!g.carrier().holds(c.items[0].value)) {
        rep.dyadic_constants = false;
        if (rep.witness.empty()) rep.witness = "constant " + detail::format_rational(Rational(i, den)) + " missing";
        break;
      }
    }

  if (!rep.halving_closed) {
    rep.sqrt_valid = false;
  } else {
    const SquareRoot s = SquareRoot::affine(*f->half_sum(f->zero(), f->top()));
    rep.sqrt_valid = verify_sqrt(*f, s, budget).ok;
    rep.strict = rep.sqrt_valid && is_strict(*f, s, budget).strict;
  }
  return rep;
}

}  // namespace emv
