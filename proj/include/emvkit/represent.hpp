#pragma once

// Adjoining a top element to a proper algebra, moving square roots between
// an algebra and its representing algebra, and transporting square roots
// along homomorphisms.

#include "emvkit/sqrt.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace emv {

/// The representing algebra N of a proper algebra M.
inline std::shared_ptr<const ReprAlgebra> represent_top(const AlgebraPtr& m) {
  if (m->has_top()) throw DomainError(m->name() + " already has a top element; it represents itself");
  return std::make_shared<ReprAlgebra>(m);
}

/// Short structural description of N: generalized Boolean parts become the
/// finite/cofinite algebra B, bounded factors are kept as they are.
inline std::string describe_representation(const Algebra& m) {
  if (m.generalized_boolean()) return "finite/cofinite";
  if (const auto* p = dynamic_cast<const ProductAlgebra*>(&m)) {
    std::string s;
    for (std::size_t i = 0; i < p->factors().size(); ++i) {
      const Algebra& f = *p->factors()[i];
      s += (i ? "×" : "") + (f.has_top() ? f.name() : (f.generalized_boolean() ? "B" : describe_representation(f)));
    }
    return s;
  }
  return "repr(" + m.name() + ")";
}

/// "identity", or the per-factor forms "(id,affine,...)" for products.
inline std::string describe_root(const Algebra& m, const SquareRoot& r, const Budget& budget = {}) {
  if (r.form == SquareRoot::Form::identity) return "identity";
  const Algebra* inner = &m;
  Element r0 = r.r0;
  if (const auto* n = dynamic_cast<const ReprAlgebra*>(&m)) {
    inner = &n->base();
    if (r0.kind == Element::Kind::repr) r0 = r0.body();
  }
  const auto* p = dynamic_cast<const ProductAlgebra*>(inner);
  if (!p) return form_name(r.form);
  std::string s = "(";
  for (std::size_t i = 0; i < p->factors().size(); ++i) {
    const Algebra& f = *p->factors()[i];
    std::string part;
    if (r0.items[i] == f.zero()) part = "id";
    else if (auto v = sqrt_build(f, budget); v.exists) part = form_name(v.root->form);
    else part = "general";
    s += (i ? "," : "") + part;
  }
  return s + ")";
}

/// R on N with R restricted to M equal to r: the identity when M is
/// generalized Boolean, otherwise the general form with R(0) = Inl(r(0)).
inline SquareRoot extend_sqrt(const ReprAlgebra& n, const SquareRoot& r, const Budget& budget = {}) {
  const Algebra& m = n.base();
  const VerifyReport check = verify_sqrt(m, r, budget);
  if (!check.ok) throw InvariantError("cannot extend: " + check.failure);
  const Element r0 = apply(m, r, m.zero());
  SquareRoot ext = r0 == m.zero() ? SquareRoot::identity(n) : SquareRoot::general(Element::inl(r0));
  if (is_strict(n, ext, budget).strict) throw InvariantError("extension to a proper algebra came out strict");
  return ext;
}

/// R restricted to the ideal M, failing when some R(Inl m) is a complement.
inline RootFn restrict_root(const std::shared_ptr<const ReprAlgebra>& n, RootFn big) {
  return [n, big = std::move(big)](const Element& m) {
    const Element v = big(Element::inl(m));
    if (v.complement) throw InvariantError("R maps " + n->base().format(m) + " outside M to " + n->format(v));
    return v.body();
  };
}

inline SquareRoot restrict_sqrt(const ReprAlgebra& n, const SquareRoot& big, const Budget& budget = {}) {
  const Algebra& m = n.base();
  const auto elems = m.enumerate(budget).elements;
  std::map<Element, Element> table;
  for (const auto& x : elems) {
    const Element v = apply(n, big, Element::inl(x));
    if (v.complement) throw InvariantError("R maps " + m.format(x) + " outside M to " + n.format(v));
    table.emplace(x, v.body());
  }
  SquareRoot r;
  if (big.form == SquareRoot::Form::identity) r = SquareRoot::identity(m);
  else if (big.form == SquareRoot::Form::general && !big.r0.complement) r = SquareRoot::general(big.r0.body());
  else r = SquareRoot::from_table(m, std::move(table));
  const VerifyReport check = verify_sqrt(m, r, budget);
  if (!check.ok) throw InvariantError("restriction is not a square root: " + check.failure);
  return r;
}

struct IdealReport {
  bool ideal = true;
  bool maximal = true;
  std::size_t n_size = 0;
  std::size_t m_size = 0;
  std::string failure;
};

/// M sits in N as a maximal ideal: Inl images are closed under (+) and
/// downward closed, and each Compl(m) together with Inl(m) reaches the top.
inline IdealReport check_ideal(const ReprAlgebra& n, const Budget& budget = {}) {
  IdealReport rep;
  const auto elems = n.enumerate(budget).elements;
  std::vector<Element> uniq = elems;
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  rep.n_size = uniq.size();
  rep.m_size = n.base().enumerate(budget).elements.size();
  const auto picks = detail::stride_indices(elems.size() * elems.size(), budget.exhaustive_tuples);
  for (auto k : picks) {
    const Element& x = elems[k / elems.size()];
    const Element& y = elems[k % elems.size()];
    if (x.complement) continue;
    if (!y.complement && n.oplus(x, y).complement) {
      rep.ideal = false;
      rep.failure = "image not closed under (+) at " + n.format(x) + ", " + n.format(y);
      return rep;
    }
    if (y.complement && n.leq(y, x)) {
      rep.ideal = false;
      rep.failure = "image not downward closed below " + n.format(x);
      return rep;
    }
  }
  for (const auto& x : elems) {
    if (!x.complement) continue;
    if (n.oplus(x, Element::inl(x.body())) != n.top()) {
      rep.maximal = false;
      rep.failure = "ideal generated with " + n.format(x) + " misses the top";
      return rep;
    }
  }
  return rep;
}

struct Homomorphism {
  enum class Rule { projection, embedding, identity, collapse, restriction, table };

  AlgebraPtr source;
  AlgebraPtr target;
  Rule rule = Rule::identity;
  std::function<Element(const Element&)> map;
  bool surjective = false;
  /// A section of map, present for surjective rules.
  std::function<Element(const Element&)> preimage;
  std::string label;

  Element operator()(const Element& x) const { return map(x); }
};

inline Homomorphism identity_hom(const AlgebraPtr& m) {
  auto id = [](const Element& x) { return x; };
  return {m, m, Homomorphism::Rule::identity, id, true, id, "identity on " + m->name()};
}

/// Product onto one factor.
inline Homomorphism projection_hom(const AlgebraPtr& product, std::size_t i) {
  const auto& p = dynamic_cast<const ProductAlgebra&>(*product);
  AlgebraPtr target = p.factors().at(i);
  auto map = [i](const Element& x) { return x.items[i]; };
  auto section = [product, i](const Element& y) {
    Element z = product->zero();
    z.items[i] = y;
    return z;
  };
  return {product, target, Homomorphism::Rule::projection, map, true, section,
          "projection " + product->name() + " -> " + target->name()};
}

/// Product onto the sub-product of the listed coordinates.
inline Homomorphism restriction_hom(const AlgebraPtr& product, std::vector<std::size_t> coords) {
  const auto& p = dynamic_cast<const ProductAlgebra&>(*product);
  std::vector<AlgebraPtr> fs;
  std::vector<Descriptor> ds;
  for (auto c : coords) {
    fs.push_back(p.factors().at(c));
    ds.push_back(parse_descriptor(p.factors()[c]->name()));
  }
  AlgebraPtr target = std::make_shared<ProductAlgebra>(fs, Descriptor::product(ds));
  auto map = [coords](const Element& x) {
    std::vector<Element> out;
    for (auto c : coords) out.push_back(x.items[c]);
    return Element::tuple(std::move(out));
  };
  auto section = [product, coords](const Element& y) {
    Element z = product->zero();
    for (std::size_t k = 0; k < coords.size(); ++k) z.items[coords[k]] = y.items[k];
    return z;
  };
  return {product, target, Homomorphism::Rule::restriction, map, true, section,
          "restriction " + product->name() + " -> " + target->name()};
}

/// Everything to the one-element algebra bool(0).
inline Homomorphism collapse_hom(const AlgebraPtr& m) {
  AlgebraPtr target = make_algebra(Descriptor::boolean(0));
  auto map = [](const Element&) { return Element::tuple({}); };
  auto section = [m](const Element&) { return m->zero(); };
  return {m, target, Homomorphism::Rule::collapse, map, true, section, "collapse " + m->name() + " -> bool(0)"};
}

/// An explicitly given injective homomorphism.
inline Homomorphism embedding_hom(const AlgebraPtr& source, const AlgebraPtr& target,
                                  std::function<Element(const Element&)> map, std::string label) {
  return {source, target, Homomorphism::Rule::embedding, std::move(map), false, nullptr, std::move(label)};
}

/// chain(1) = {0,1} into the rational unit interval.
inline Homomorphism boolean_into_rational() {
  AlgebraPtr two = make_algebra(Descriptor::chain(1));
  AlgebraPtr q = make_algebra(Descriptor::rational());
  auto map = [q](const Element& x) {
    return std::get<ScaledInt>(x.value).value == 0 ? q->zero() : q->top();
  };
  return embedding_hom(two, q, map, "embedding chain(1) -> rational");
}

struct HomReport {
  bool ok = true;
  std::size_t checked = 0;
  std::string failure;
};

/// Preservation of v, ^, (+), 0 and lambda_b on sampled arguments.
inline HomReport verify_homomorphism(const Homomorphism& f, const Budget& budget = {}) {
  HomReport rep;
  const Algebra& s = *f.source;
  const Algebra& t = *f.target;
  auto fail = [&](const std::string& why) {
    rep.ok = false;
    rep.failure = why;
    return rep;
  };
  if (f(s.zero()) != t.zero()) return fail("0 is not preserved");
  const auto xs = s.enumerate(budget).elements;
  for (auto k : detail::stride_indices(xs.size() * xs.size(), budget.exhaustive_tuples)) {
    const Element& x = xs[k / xs.size()];
    const Element& y = xs[k % xs.size()];
    ++rep.checked;
    if (f(s.join(x, y)) != t.join(f(x), f(y))) return fail("v is not preserved at " + s.format(x) + ", " + s.format(y));
    if (f(s.meet(x, y)) != t.meet(f(x), f(y))) return fail("^ is not preserved at " + s.format(x) + ", " + s.format(y));
    if (f(s.oplus(x, y)) != t.oplus(f(x), f(y))) return fail("(+) is not preserved at " + s.format(x) + ", " + s.format(y));
  }
  for (const auto& b : s.idempotents(budget))
    for (auto i : detail::stride_indices(xs.size(), 64)) {
      const Element x = s.meet(xs[i], b);
      ++rep.checked;
      if (f(s.complement_in(b, x)) != t.complement_in(f(b), f(x)))
        return fail("lambda is not preserved at " + s.format(b) + ", " + s.format(x));
    }
  return rep;
}

struct ImageRoot {
  SquareRoot root;
  /// Values t(f(x)) = f(r(x)) on the sampled image.
  std::map<Element, Element> values;
  VerifyReport check;
};

/// t(f(x)) = f(r(x)) on the image of f, checked for well-definedness and for
/// (Sq1)/(Sq2) on the sampled image.
inline ImageRoot hom_image_sqrt(const Homomorphism& f, const SquareRoot& r, const Budget& budget = {}) {
  const Algebra& s = *f.source;
  const Algebra& t = *f.target;
  ImageRoot out;
  for (const auto& x : s.enumerate(budget).elements) {
    const Element fx = f(x);
    const Element frx = f(apply(s, r, x));
    auto [it, fresh] = out.values.emplace(fx, frx);
    if (!fresh && it->second != frx)
      throw InvariantError("image square root is not well defined at " + t.format(fx));
  }
  bool identity = true;
  bool affine = t.has_top();
  for (const auto& [y, ty] : out.values) {
    identity = identity && ty == y;
    if (affine) {
      auto h = t.half_sum(y, t.top());
      affine = h && *h == ty;
    }
  }
  const Element t0 = out.values.at(t.zero());
  if (identity) out.root = SquareRoot::identity(t);
  else if (affine) out.root = SquareRoot::affine(t0);
  else out.root = SquareRoot::from_table(t, out.values);
  std::vector<Element> image;
  for (const auto& [y, ty] : out.values) image.push_back(y);
  out.check = verify_sqrt(t, [&](const Element& y) { return out.values.count(y) ? out.values.at(y) : apply(t, out.root, y); },
                          image, image, budget);
  return out;
}

struct PreservationReport {
  bool preserves = true;
  /// s maps the sampled image into the image.
  bool image_closed = true;
  std::size_t checked = 0;
  std::optional<Element> witness;

  bool consistent() const { return preserves == image_closed; }
};

/// f(r(x)) = s(f(x)) on samples, cross-checked against closure of Im(f)
/// under s.
inline PreservationReport preserves_sqrt(const Homomorphism& f, const SquareRoot& r, const SquareRoot& s,
                                         const Budget& budget = {}) {
  const Algebra& src = *f.source;
  const Algebra& tgt = *f.target;
  PreservationReport rep;
  const auto xs = src.enumerate(budget).elements;
  std::vector<Element> image;
  for (const auto& x : xs) image.push_back(f(x));
  std::sort(image.begin(), image.end());
  image.erase(std::unique(image.begin(), image.end()), image.end());
  for (const auto& x : xs) {
    ++rep.checked;
    const Element sfx = apply(tgt, s, f(x));
    if (f(apply(src, r, x)) != sfx && rep.preserves) {
      rep.preserves = false;
      rep.witness = x;
    }
    const bool in_image = f.preimage ? f(f.preimage(sfx)) == sfx : std::binary_search(image.begin(), image.end(), sfx);
    if (!in_image) rep.image_closed = false;
  }
  return rep;
}

}  // namespace emv
