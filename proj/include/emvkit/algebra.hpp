#pragma once

// EMV-algebras over the cataloged carriers.
//
// An Algebra supplies the primitive operations (lattice, truncated sum,
// relative complements inside [0,a], canonical idempotent covers) and a
// bounded enumeration.  Derived operations such as the product, the arrow
// and the partial sum are defined once here in terms of the primitives.

#include "emvkit/arith.hpp"
#include "emvkit/element.hpp"
#include "emvkit/syntax.hpp"

#include <boost/integer/common_factor.hpp>

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace emv {

/// Explicit enumeration and sampling limits.
struct Budget {
  unsigned max_denom_exp = 6;      // dyadic / p-adic denominators p^e
  unsigned max_set = 8;            // finite subsets of {1..max_set}
  unsigned lex_bound = 64;         // Chang infinitesimals |lo| <= L
  unsigned max_support = 3;        // finite-support sums over indices 1..S
  unsigned max_denominator = 12;   // rationals with denominator <= this
  unsigned quad_bound = 8;         // m + n*alpha with |m|,|n| <= this
  std::size_t max_elements = 4096;
  std::size_t samples = 10000;
  std::size_t exhaustive_tuples = std::size_t{1} << 16;
};

struct Enumeration {
  std::vector<Element> elements;
  /// True when the list is the whole algebra.
  bool exhaustive = false;
};

struct Division {
  enum class Status { found, none, unknown };
  Status status = Status::unknown;
  Element value;
};

enum class AlgebraKind { gamma, product, finsubsets, sum, repr, wrapped };

namespace detail {

/// Indices 0..total-1 when total <= count; otherwise count indices visited by
/// a fixed stride coprime to total, always including 0 and total-1.
inline std::vector<std::uint64_t> stride_indices(std::uint64_t total, std::uint64_t count) {
  std::vector<std::uint64_t> out;
  if (total == 0) return out;
  if (total <= count) {
    out.resize(total);
    std::iota(out.begin(), out.end(), std::uint64_t{0});
    return out;
  }
  auto stride = static_cast<std::uint64_t>(static_cast<long double>(total) * 0.6180339887498949L);
  if (stride == 0) stride = 1;
  while (boost::integer::gcd(stride, total) != 1) ++stride;
  out.reserve(count);
  bool has_last = false;
  for (std::uint64_t k = 0; k + 1 < count; ++k) {
    const auto idx = static_cast<std::uint64_t>((static_cast<unsigned __int128>(k) * stride) % total);
    has_last = has_last || idx == total - 1;
    out.push_back(idx);
  }
  if (!has_last) out.push_back(total - 1);
  return out;
}

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  constexpr std::uint64_t cap = std::uint64_t{1} << 62;
  if (a == 0 || b == 0) return 0;
  if (a > cap / b) return cap;
  return a * b;
}

}  // namespace detail

class Algebra {
 public:
  virtual ~Algebra() = default;

  virtual AlgebraKind kind() const = 0;
  virtual std::string name() const = 0;
  virtual bool has_top() const = 0;
  virtual Element top() const = 0;
  virtual Element zero() const = 0;
  virtual bool contains(const Element& x) const = 0;

  virtual bool leq(const Element& x, const Element& y) const = 0;
  virtual Element join(const Element& x, const Element& y) const = 0;
  virtual Element meet(const Element& x, const Element& y) const = 0;
  virtual Element oplus(const Element& x, const Element& y) const = 0;
  /// lambda_a(x) for an idempotent a and x <= a; arguments are not checked.
  virtual Element complement_in(const Element& a, const Element& x) const = 0;
  /// The canonical least idempotent above x.
  virtual Element cover(const Element& x) const = 0;
  /// (x+y)/2 computed in the underlying group, when it lies in the algebra.
  virtual std::optional<Element> half_sum(const Element& x, const Element& y) const = 0;
  /// y with n.y = x and (n-1).y (.) y = 0.
  virtual Division divide(const Element& x, unsigned n) const = 0;
  /// (x+y-u) v 0 on interval algebras.
  virtual std::optional<Element> odot_shortcut(const Element&, const Element&) const { return std::nullopt; }

  virtual bool totally_ordered() const = 0;
  /// Every element is idempotent.
  virtual bool generalized_boolean() const = 0;
  virtual bool finite() const = 0;

  virtual Enumeration enumerate(const Budget& budget) const = 0;
  virtual std::vector<Element> idempotents(const Budget& budget) const = 0;

  virtual std::string format(const Element& x) const = 0;
  virtual Element from_literal(const Literal& lit) const = 0;

  // Derived operations.

  bool equal(const Element& x, const Element& y) const { return x == y; }

  Element odot_within(const Element& a, const Element& x, const Element& y) const {
    return complement_in(a, oplus(complement_in(a, x), complement_in(a, y)));
  }
  /// lambda_a(lambda_a(x) (+) lambda_a(y)) with a the canonical cover of x v y.
  /// Subclasses may override with an equivalent direct computation.
  virtual Element odot(const Element& x, const Element& y) const { return odot_within(cover(join(x, y)), x, y); }

  bool is_idempotent(const Element& x) const { return oplus(x, x) == x; }

  Element lambda(const Element& a, const Element& x) const {
    require(a);
    require(x);
    if (!is_idempotent(a)) throw DomainError(format(a) + " is not idempotent");
    if (!leq(x, a)) throw DomainError(format(x) + " is not below " + format(a));
    return complement_in(a, x);
  }

  /// x ->_a y = lambda_a(x) (+) y.
  Element arrow(const Element& a, const Element& x, const Element& y) const {
    if (!leq(y, a)) throw DomainError(format(y) + " is not below " + format(a));
    return oplus(lambda(a, x), y);
  }

  Element ominus(const Element& x, const Element& y) const {
    return odot(x, complement_in(cover(join(x, y)), y));
  }

  std::optional<Element> partial_add(const Element& x, const Element& y) const {
    if (odot(x, y) != zero()) return std::nullopt;
    return oplus(x, y);
  }

  /// n.x, the n-fold truncated sum.
  Element multiple(unsigned n, const Element& x) const {
    Element acc = zero();
    for (unsigned i = 0; i < n; ++i) acc = oplus(acc, x);
    return acc;
  }

  Element parse_element(std::string_view text) const { return from_literal(parse_literal(text)); }

  void require(const Element& x) const {
    if (!contains(x)) throw DomainError("element does not belong to " + name());
  }
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

/// An element known to satisfy a (+) a = a.
class Idempotent {
 public:
  Idempotent(const Algebra& m, Element a) : value_(std::move(a)) {
    m.require(value_);
    if (!m.is_idempotent(value_)) throw DomainError(m.format(value_) + " is not idempotent");
  }
  const Element& element() const { return value_; }

 private:
  Element value_;
};

inline Element mv_oplus(const Algebra& m, const Element& x, const Element& y) {
  m.require(x);
  m.require(y);
  return m.oplus(x, y);
}

inline Element mv_lambda(const Algebra& m, const Idempotent& a, const Element& x) { return m.lambda(a.element(), x); }

inline Element mv_odot(const Algebra& m, const Element& x, const Element& y) {
  m.require(x);
  m.require(y);
  return m.odot(x, y);
}

inline std::optional<Element> mv_partial_add(const Algebra& m, const Element& x, const Element& y) {
  m.require(x);
  m.require(y);
  return m.partial_add(x, y);
}

inline Element mv_arrow(const Algebra& m, const Idempotent& a, const Element& x, const Element& y) {
  m.require(x);
  m.require(y);
  return m.arrow(a.element(), x, y);
}

// ---------------------------------------------------------------------------
// Gamma(G,u): chains, dyadic/rational/p-adic intervals, M(sqrt2-1), Chang.

class GammaAlgebra : public Algebra {
 public:
  GammaAlgebra(Carrier carrier, Descriptor descriptor)
      : carrier_(std::move(carrier)), descriptor_(std::move(descriptor)), unit_(carrier_.unit()) {}

  const Carrier& carrier() const { return carrier_; }
  const Descriptor& descriptor() const { return descriptor_; }
  bool is_chang() const { return carrier_.kind() == CarrierKind::lex; }

  AlgebraKind kind() const override { return AlgebraKind::gamma; }
  std::string name() const override { return to_string(descriptor_); }
  bool has_top() const override { return true; }
  Element top() const override { return Element::group(unit_); }
  Element zero() const override { return Element::group(carrier_.zero()); }

  bool contains(const Element& x) const override {
    if (x.kind != Element::Kind::group || !carrier_.holds(x.value)) return false;
    return carrier_.less_equal(carrier_.zero(), x.value) && carrier_.less_equal(x.value, unit_);
  }

  bool leq(const Element& x, const Element& y) const override { return carrier_.less_equal(x.value, y.value); }
  Element join(const Element& x, const Element& y) const override { return leq(x, y) ? y : x; }
  Element meet(const Element& x, const Element& y) const override { return leq(x, y) ? x : y; }
  Element oplus(const Element& x, const Element& y) const override {
    return Element::group(carrier_.min(carrier_.add(x.value, y.value), unit_));
  }
  Element complement_in(const Element& a, const Element& x) const override {
    return Element::group(carrier_.subtract(a.value, x.value));
  }
  Element cover(const Element& x) const override { return x == zero() ? zero() : top(); }

  std::optional<Element> half_sum(const Element& x, const Element& y) const override {
    auto h = carrier_.half(carrier_.add(x.value, y.value));
    if (!h) return std::nullopt;
    return Element::group(*h);
  }

  Division divide(const Element& x, unsigned n) const override {
    auto y = carrier_.divide(x.value, n);
    if (!y) return {Division::Status::none, {}};
    return {Division::Status::found, Element::group(*y)};
  }

  std::optional<Element> odot_shortcut(const Element& x, const Element& y) const override {
    const GroupElement s = carrier_.subtract(carrier_.add(x.value, y.value), unit_);
    return Element::group(carrier_.max(s, carrier_.zero()));
  }
  Element odot(const Element& x, const Element& y) const override { return *odot_shortcut(x, y); }

  bool totally_ordered() const override { return true; }
  bool generalized_boolean() const override {
    return carrier_.kind() == CarrierKind::integers && carrier_.parameter() == 1;
  }
  bool finite() const override { return carrier_.kind() == CarrierKind::integers; }

  Enumeration enumerate(const Budget& budget) const override {
    Enumeration out;
    switch (carrier_.kind()) {
      case CarrierKind::integers: {
        const Integer& n = carrier_.parameter();
        for (Integer i = 0; i <= n; ++i) out.elements.push_back(Element::group(ScaledInt{i}));
        out.exhaustive = true;
        break;
      }
      case CarrierKind::dyadics:
      case CarrierKind::padic: {
        const Integer& p = carrier_.parameter();
        Integer den = 1;
        for (unsigned e = 0; e < budget.max_denom_exp && den * p <= Integer(budget.max_elements); ++e) den *= p;
        for (Integer i = 0; i <= den; ++i) out.elements.push_back(Element::group(Rational(i, den)));
        break;
      }
      case CarrierKind::rationals: {
        std::vector<Rational> values;
        for (unsigned q = 1; q <= std::max(1u, budget.max_denominator); ++q)
          for (unsigned p = 0; p <= q; ++p)
            if (std::gcd(p, q) == 1) values.emplace_back(p, q);
        std::sort(values.begin(), values.end());
        for (auto& v : values) out.elements.push_back(Element::group(v));
        break;
      }
      case CarrierKind::quad: {
        const int b = static_cast<int>(budget.quad_bound);
        for (int m = -b; m <= b; ++m)
          for (int n = -b; n <= b; ++n) {
            Element e = Element::group(quad_from_alpha(m, n));
            if (contains(e)) out.elements.push_back(std::move(e));
          }
        std::sort(out.elements.begin(), out.elements.end(),
                  [&](const Element& l, const Element& r) { return carrier_.compare(l.value, r.value) < 0; });
        break;
      }
      case CarrierKind::lex: {
        const int L = static_cast<int>(budget.lex_bound);
        for (int l = 0; l <= L; ++l) out.elements.push_back(Element::group(Lex{0, l}));
        for (int l = -L; l <= 0; ++l) out.elements.push_back(Element::group(Lex{1, l}));
        break;
      }
    }
    return out;
  }

  std::vector<Element> idempotents(const Budget&) const override { return {zero(), top()}; }

  std::string format(const Element& x) const override { return carrier_.format(x.value); }

  Element from_literal(const Literal& lit) const override {
    Element e;
    switch (carrier_.kind()) {
      case CarrierKind::integers: {
        if (lit.kind != Literal::Kind::number) throw ParseError("expected a fraction", lit.offset);
        const Rational scaled = lit.number * Rational(carrier_.parameter());
        if (boost::multiprecision::denominator(scaled) != 1)
          throw DomainError(detail::format_rational(lit.number) + " is not an element of " + name());
        e = Element::group(ScaledInt{boost::multiprecision::numerator(scaled)});
        break;
      }
      case CarrierKind::quad:
        if (lit.kind != Literal::Kind::quad) throw ParseError("expected q(m,n)", lit.offset);
        e = Element::group(quad_from_alpha(lit.first, lit.second));
        break;
      case CarrierKind::lex:
        if (lit.kind != Literal::Kind::chang) throw ParseError("expected c(h,l)", lit.offset);
        e = Element::group(Lex{lit.first, lit.second});
        break;
      default:
        if (lit.kind != Literal::Kind::number) throw ParseError("expected a fraction", lit.offset);
        e = Element::group(lit.number);
        break;
    }
    if (!contains(e)) throw DomainError(format_unchecked(e) + " is not an element of " + name());
    return e;
  }

 private:
  std::string format_unchecked(const Element& e) const {
    return carrier_.holds(e.value) ? carrier_.format(e.value) : std::string("value");
  }

  Carrier carrier_;
  Descriptor descriptor_;
  GroupElement unit_;
};

// ---------------------------------------------------------------------------
// Finite direct products.  bool(k) is the product of k copies of chain(1);
// its components are flattened when printed inside an enclosing product.

class ProductAlgebra : public Algebra {
 public:
  ProductAlgebra(std::vector<AlgebraPtr> factors, Descriptor descriptor, bool boolean = false)
      : factors_(std::move(factors)), descriptor_(std::move(descriptor)), boolean_(boolean) {}

  const std::vector<AlgebraPtr>& factors() const { return factors_; }
  const Descriptor& descriptor() const { return descriptor_; }
  bool is_boolean_block() const { return boolean_; }

  AlgebraKind kind() const override { return AlgebraKind::product; }
  std::string name() const override { return to_string(descriptor_); }
  bool has_top() const override {
    return std::all_of(factors_.begin(), factors_.end(), [](const AlgebraPtr& f) { return f->has_top(); });
  }
  Element top() const override {
    return build([](const Algebra& f, std::size_t) { return f.top(); });
  }
  Element zero() const override {
    return build([](const Algebra& f, std::size_t) { return f.zero(); });
  }
  bool contains(const Element& x) const override {
    if (x.kind != Element::Kind::tuple || x.items.size() != factors_.size() || !x.members.empty()) return false;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      if (!factors_[i]->contains(x.items[i])) return false;
    return true;
  }
  bool leq(const Element& x, const Element& y) const override {
    for (std::size_t i = 0; i < factors_.size(); ++i)
      if (!factors_[i]->leq(x.items[i], y.items[i])) return false;
    return true;
  }
  Element join(const Element& x, const Element& y) const override {
    return build([&](const Algebra& f, std::size_t i) { return f.join(x.items[i], y.items[i]); });
  }
  Element meet(const Element& x, const Element& y) const override {
    return build([&](const Algebra& f, std::size_t i) { return f.meet(x.items[i], y.items[i]); });
  }
  Element oplus(const Element& x, const Element& y) const override {
    return build([&](const Algebra& f, std::size_t i) { return f.oplus(x.items[i], y.items[i]); });
  }
  Element complement_in(const Element& a, const Element& x) const override {
    return build([&](const Algebra& f, std::size_t i) { return f.complement_in(a.items[i], x.items[i]); });
  }
  Element cover(const Element& x) const override {
    return build([&](const Algebra& f, std::size_t i) { return f.cover(x.items[i]); });
  }
  std::optional<Element> half_sum(const Element& x, const Element& y) const override {
    std::vector<Element> out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      auto h = factors_[i]->half_sum(x.items[i], y.items[i]);
      if (!h) return std::nullopt;
      out.push_back(std::move(*h));
    }
    return Element::tuple(std::move(out));
  }
  Division divide(const Element& x, unsigned n) const override {
    std::vector<Element> out;
    bool unknown = false;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      Division d = factors_[i]->divide(x.items[i], n);
      if (d.status == Division::Status::none) return {Division::Status::none, {}};
      if (d.status == Division::Status::unknown) unknown = true;
      out.push_back(std::move(d.value));
    }
    if (unknown) return {Division::Status::unknown, {}};
    return {Division::Status::found, Element::tuple(std::move(out))};
  }
  Element odot(const Element& x, const Element& y) const override {
    return build([&](const Algebra& f, std::size_t i) { return f.odot(x.items[i], y.items[i]); });
  }
  std::optional<Element> odot_shortcut(const Element& x, const Element& y) const override {
    std::vector<Element> out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      auto s = factors_[i]->odot_shortcut(x.items[i], y.items[i]);
      if (!s) return std::nullopt;
      out.push_back(std::move(*s));
    }
    return Element::tuple(std::move(out));
  }

  bool totally_ordered() const override { return factors_.size() <= 1 && (factors_.empty() || factors_[0]->totally_ordered()); }
  bool generalized_boolean() const override {
    return std::all_of(factors_.begin(), factors_.end(), [](const AlgebraPtr& f) { return f->generalized_boolean(); });
  }
  bool finite() const override {
    return std::all_of(factors_.begin(), factors_.end(), [](const AlgebraPtr& f) { return f->finite(); });
  }

  Enumeration enumerate(const Budget& budget) const override {
    std::vector<std::vector<Element>> parts;
    bool exhaustive = true;
    for (const auto& f : factors_) {
      Enumeration e = f->enumerate(budget);
      exhaustive = exhaustive && e.exhaustive;
      parts.push_back(std::move(e.elements));
    }
    Enumeration out = combine(parts, budget.max_elements);
    out.exhaustive = exhaustive && out.exhaustive;
    return out;
  }

  std::vector<Element> idempotents(const Budget& budget) const override {
    std::vector<std::vector<Element>> parts;
    for (const auto& f : factors_) parts.push_back(f->idempotents(budget));
    return combine(parts, budget.max_elements).elements;
  }

  std::string format(const Element& x) const override { return "(" + format_flat(x) + ")"; }

  /// Components joined by commas, boolean blocks spliced in.
  std::string format_flat(const Element& x) const {
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += ",";
      const auto* inner = dynamic_cast<const ProductAlgebra*>(factors_[i].get());
      if (inner && inner->is_boolean_block()) s += inner->format_flat(x.items[i]);
      else s += factors_[i]->format(x.items[i]);
    }
    return s;
  }

  Element from_literal(const Literal& lit) const override {
    if (lit.kind != Literal::Kind::tuple) throw ParseError("expected a tuple", lit.offset);
    std::size_t pos = 0;
    Element e = consume(lit.items, pos, lit.offset);
    if (pos != lit.items.size()) throw ParseError("too many components", lit.offset);
    return e;
  }

  /// Reads one element from a flat component list, splicing boolean blocks.
  Element consume(const std::vector<Literal>& items, std::size_t& pos, std::size_t offset) const {
    std::vector<Element> out;
    for (const auto& f : factors_) {
      if (pos >= items.size()) throw ParseError("too few components", offset);
      const auto* inner = dynamic_cast<const ProductAlgebra*>(f.get());
      const bool splice = inner && inner->is_boolean_block() &&
                          !(items[pos].kind == Literal::Kind::tuple && items[pos].items.size() == inner->factors().size());
      if (splice) out.push_back(inner->consume(items, pos, offset));
      else out.push_back(f->from_literal(items[pos++]));
    }
    return Element::tuple(std::move(out));
  }

 private:
  template <class F>
  Element build(F&& f) const {
    std::vector<Element> out;
    out.reserve(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i) out.push_back(f(*factors_[i], i));
    return Element::tuple(std::move(out));
  }

  static Enumeration combine(const std::vector<std::vector<Element>>& parts, std::size_t cap) {
    std::uint64_t total = 1;
    for (const auto& p : parts) total = detail::saturating_mul(total, p.size());
    Enumeration out;
    out.exhaustive = total <= cap;
    for (std::uint64_t idx : detail::stride_indices(total, cap)) {
      std::vector<Element> comps(parts.size());
      for (std::size_t i = parts.size(); i-- > 0;) {
        comps[i] = parts[i][idx % parts[i].size()];
        idx /= parts[i].size();
      }
      out.elements.push_back(Element::tuple(std::move(comps)));
    }
    return out;
  }

  std::vector<AlgebraPtr> factors_;
  Descriptor descriptor_;
  bool boolean_;
};

// ---------------------------------------------------------------------------
// Finite subsets of the naturals: a generalized Boolean algebra without top.

class FinSubsetsAlgebra : public Algebra {
 public:
  using Set = std::vector<std::uint64_t>;

  AlgebraKind kind() const override { return AlgebraKind::finsubsets; }
  std::string name() const override { return "finsubsets"; }
  bool has_top() const override { return false; }
  Element top() const override { throw DomainError("finsubsets has no top element"); }
  Element zero() const override { return Element::set({}); }
  bool contains(const Element& x) const override {
    return x.kind == Element::Kind::set && std::adjacent_find(x.members.begin(), x.members.end(),
                                                              [](auto a, auto b) { return a >= b; }) == x.members.end();
  }
  bool leq(const Element& x, const Element& y) const override {
    return std::includes(y.members.begin(), y.members.end(), x.members.begin(), x.members.end());
  }
  Element join(const Element& x, const Element& y) const override {
    Set s;
    std::set_union(x.members.begin(), x.members.end(), y.members.begin(), y.members.end(), std::back_inserter(s));
    return Element::set(std::move(s));
  }
  Element meet(const Element& x, const Element& y) const override {
    Set s;
    std::set_intersection(x.members.begin(), x.members.end(), y.members.begin(), y.members.end(), std::back_inserter(s));
    return Element::set(std::move(s));
  }
  Element oplus(const Element& x, const Element& y) const override { return join(x, y); }
  Element complement_in(const Element& a, const Element& x) const override {
    Set s;
    std::set_difference(a.members.begin(), a.members.end(), x.members.begin(), x.members.end(), std::back_inserter(s));
    return Element::set(std::move(s));
  }
  Element cover(const Element& x) const override { return x; }
  std::optional<Element> half_sum(const Element& x, const Element& y) const override {
    if (x != y) return std::nullopt;
    return x;
  }
  Division divide(const Element& x, unsigned n) const override {
    if (n == 1 || x.members.empty()) return {Division::Status::found, x};
    return {Division::Status::none, {}};
  }

  bool totally_ordered() const override { return false; }
  bool generalized_boolean() const override { return true; }
  bool finite() const override { return false; }

  Enumeration enumerate(const Budget& budget) const override {
    const unsigned n = std::min(budget.max_set, 62u);
    Enumeration out;
    for (std::uint64_t mask : detail::stride_indices(std::uint64_t{1} << n, budget.max_elements)) {
      Set s;
      for (unsigned i = 0; i < n; ++i)
        if (mask >> i & 1u) s.push_back(i + 1);
      out.elements.push_back(Element::set(std::move(s)));
    }
    return out;
  }
  std::vector<Element> idempotents(const Budget& budget) const override { return enumerate(budget).elements; }

  std::string format(const Element& x) const override {
    std::string s = "{";
    for (std::size_t i = 0; i < x.members.size(); ++i) s += (i ? "," : "") + std::to_string(x.members[i]);
    return s + "}";
  }
  Element from_literal(const Literal& lit) const override {
    if (lit.kind != Literal::Kind::set) throw ParseError("expected a set", lit.offset);
    Set s = lit.keys;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return Element::set(std::move(s));
  }
};

// ---------------------------------------------------------------------------
// Finite-support sums of copies of a base algebra indexed by the naturals.

class SumAlgebra : public Algebra {
 public:
  explicit SumAlgebra(AlgebraPtr base) : base_(std::move(base)) {}

  const Algebra& base() const { return *base_; }
  const AlgebraPtr& base_ptr() const { return base_; }

  AlgebraKind kind() const override { return AlgebraKind::sum; }
  std::string name() const override { return "sum(" + base_->name() + ")"; }
  bool has_top() const override { return false; }
  Element top() const override { throw DomainError(name() + " has no top element"); }
  Element zero() const override { return Element::map({}, {}); }
  bool contains(const Element& x) const override {
    if (x.kind != Element::Kind::map || x.members.size() != x.items.size()) return false;
    const Element z = base_->zero();
    for (std::size_t i = 0; i < x.items.size(); ++i) {
      if (i && x.members[i - 1] >= x.members[i]) return false;
      if (x.items[i] == z || !base_->contains(x.items[i])) return false;
    }
    return true;
  }
  bool leq(const Element& x, const Element& y) const override {
    bool ok = true;
    zip(x, y, [&](const Element& a, const Element& b) { ok = ok && base_->leq(a, b); });
    return ok;
  }
  Element join(const Element& x, const Element& y) const override {
    return pointwise(x, y, [&](const Element& a, const Element& b) { return base_->join(a, b); });
  }
  Element meet(const Element& x, const Element& y) const override {
    return pointwise(x, y, [&](const Element& a, const Element& b) { return base_->meet(a, b); });
  }
  Element oplus(const Element& x, const Element& y) const override {
    return pointwise(x, y, [&](const Element& a, const Element& b) { return base_->oplus(a, b); });
  }
  Element complement_in(const Element& a, const Element& x) const override {
    return pointwise(a, x, [&](const Element& p, const Element& q) { return base_->complement_in(p, q); });
  }
  Element odot(const Element& x, const Element& y) const override {
    return pointwise(x, y, [&](const Element& a, const Element& b) { return base_->odot(a, b); });
  }
  Element cover(const Element& x) const override {
    return pointwise(x, x, [&](const Element& p, const Element&) { return base_->cover(p); });
  }
  std::optional<Element> half_sum(const Element& x, const Element& y) const override {
    bool ok = true;
    Element out = pointwise(x, y, [&](const Element& a, const Element& b) {
      auto h = base_->half_sum(a, b);
      if (!h) {
        ok = false;
        return base_->zero();
      }
      return *h;
    });
    if (!ok) return std::nullopt;
    return out;
  }
  Division divide(const Element& x, unsigned n) const override {
    Division::Status status = Division::Status::found;
    Element out = pointwise(x, x, [&](const Element& a, const Element&) {
      Division d = base_->divide(a, n);
      if (d.status != Division::Status::found) {
        if (status == Division::Status::found || d.status == Division::Status::none) status = d.status;
        return base_->zero();
      }
      return d.value;
    });
    if (status != Division::Status::found) return {status, {}};
    return {status, out};
  }

  bool totally_ordered() const override { return false; }
  bool generalized_boolean() const override { return base_->generalized_boolean(); }
  bool finite() const override { return false; }

  Enumeration enumerate(const Budget& budget) const override {
    return {spread(base_->enumerate(budget).elements, budget), false};
  }
  std::vector<Element> idempotents(const Budget& budget) const override {
    return spread(base_->idempotents(budget), budget);
  }

  std::string format(const Element& x) const override {
    std::string s = "[";
    for (std::size_t i = 0; i < x.members.size(); ++i)
      s += (i ? ", " : "") + std::to_string(x.members[i]) + ":" + base_->format(x.items[i]);
    return s + "]";
  }
  Element from_literal(const Literal& lit) const override {
    if (lit.kind != Literal::Kind::map) throw ParseError("expected a finite-support map", lit.offset);
    std::vector<std::pair<std::uint64_t, Element>> entries;
    for (std::size_t i = 0; i < lit.keys.size(); ++i) entries.emplace_back(lit.keys[i], base_->from_literal(lit.items[i]));
    std::sort(entries.begin(), entries.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    std::vector<std::uint64_t> idx;
    std::vector<Element> vals;
    const Element z = base_->zero();
    for (auto& [i, v] : entries) {
      if (!idx.empty() && idx.back() == i) throw ParseError("duplicate index", lit.offset);
      if (v == z) continue;
      idx.push_back(i);
      vals.push_back(std::move(v));
    }
    return Element::map(std::move(idx), std::move(vals));
  }

  /// The element with value v at indices 1..n.
  Element constant_prefix(const Element& v, unsigned n) const {
    std::vector<std::uint64_t> idx;
    std::vector<Element> vals;
    if (v != base_->zero())
      for (unsigned i = 1; i <= n; ++i) {
        idx.push_back(i);
        vals.push_back(v);
      }
    return Element::map(std::move(idx), std::move(vals));
  }

 private:
  /// Calls f on the aligned pair of components over the union of supports.
  template <class F>
  void zip(const Element& x, const Element& y, F&& f) const {
    const Element z = base_->zero();
    std::size_t i = 0, j = 0;
    while (i < x.members.size() || j < y.members.size()) {
      if (j >= y.members.size() || (i < x.members.size() && x.members[i] < y.members[j])) f(x.items[i++], z);
      else if (i >= x.members.size() || y.members[j] < x.members[i]) f(z, y.items[j++]);
      else f(x.items[i++], y.items[j++]);
    }
  }

  template <class F>
  Element pointwise(const Element& x, const Element& y, F&& f) const {
    const Element z = base_->zero();
    std::vector<std::uint64_t> idx;
    std::vector<Element> vals;
    std::size_t i = 0, j = 0;
    while (i < x.members.size() || j < y.members.size()) {
      std::uint64_t at;
      Element v;
      if (j >= y.members.size() || (i < x.members.size() && x.members[i] < y.members[j])) {
        at = x.members[i];
        v = f(x.items[i++], z);
      } else if (i >= x.members.size() || y.members[j] < x.members[i]) {
        at = y.members[j];
        v = f(z, y.items[j++]);
      } else {
        at = x.members[i];
        v = f(x.items[i++], y.items[j++]);
      }
      if (v != z) {
        idx.push_back(at);
        vals.push_back(std::move(v));
      }
    }
    return Element::map(std::move(idx), std::move(vals));
  }

  std::vector<Element> spread(const std::vector<Element>& values, const Budget& budget) const {
    const unsigned s = budget.max_support;
    std::uint64_t total = 1;
    for (unsigned i = 0; i < s; ++i) total = detail::saturating_mul(total, values.size());
    const Element z = base_->zero();
    std::vector<Element> out;
    for (std::uint64_t idx : detail::stride_indices(total, budget.max_elements)) {
      std::vector<std::uint64_t> keys;
      std::vector<Element> vals;
      std::vector<Element> digits(s);
      for (unsigned i = s; i-- > 0;) {
        digits[i] = values[idx % values.size()];
        idx /= values.size();
      }
      for (unsigned i = 0; i < s; ++i)
        if (digits[i] != z) {
          keys.push_back(i + 1);
          vals.push_back(std::move(digits[i]));
        }
      out.push_back(Element::map(std::move(keys), std::move(vals)));
    }
    return out;
  }

  AlgebraPtr base_;
};

// ---------------------------------------------------------------------------
// The representing algebra N of a proper algebra M: every element is either
// the image Inl(m) of some m in M or the complement Compl(m) of such an image.
// The rules below are the Boolean-complement rules of the unit interval, with
// lambda_c taken inside the canonical cover c of the arguments.

class ReprAlgebra : public Algebra {
 public:
  explicit ReprAlgebra(AlgebraPtr base) : base_(std::move(base)) {
    if (base_->has_top()) throw DomainError(base_->name() + " already has a top element");
  }

  const Algebra& base() const { return *base_; }
  const AlgebraPtr& base_ptr() const { return base_; }

  AlgebraKind kind() const override { return AlgebraKind::repr; }
  std::string name() const override { return "repr(" + base_->name() + ")"; }
  bool has_top() const override { return true; }
  Element top() const override { return Element::compl_of(base_->zero()); }
  Element zero() const override { return Element::inl(base_->zero()); }
  bool contains(const Element& x) const override {
    return x.kind == Element::Kind::repr && x.items.size() == 1 && base_->contains(x.body());
  }

  bool leq(const Element& x, const Element& y) const override { return meet(x, y) == x; }

  Element join(const Element& x, const Element& y) const override {
    const Element& a = x.body();
    const Element& b = y.body();
    if (!x.complement && !y.complement) return Element::inl(base_->join(a, b));
    if (x.complement && y.complement) return Element::compl_of(base_->meet(a, b));
    if (x.complement) return join(y, x);
    return Element::compl_of(base_->meet(local_complement(a, b), b));
  }

  Element meet(const Element& x, const Element& y) const override {
    const Element& a = x.body();
    const Element& b = y.body();
    if (!x.complement && !y.complement) return Element::inl(base_->meet(a, b));
    if (x.complement && y.complement) return Element::compl_of(base_->join(a, b));
    if (x.complement) return meet(y, x);
    return Element::inl(base_->meet(a, local_complement(b, a)));
  }

  Element oplus(const Element& x, const Element& y) const override {
    const Element& a = x.body();
    const Element& b = y.body();
    if (!x.complement && !y.complement) return Element::inl(base_->oplus(a, b));
    if (x.complement && y.complement) return Element::compl_of(base_->odot(a, b));
    if (x.complement) return oplus(y, x);
    return Element::compl_of(base_->odot(b, local_complement(a, b)));
  }

  /// lambda_A(X) = (lambda_1(A) (+) X)' with ' = lambda_1.
  Element complement_in(const Element& a, const Element& x) const override {
    return negate(oplus(negate(a), x));
  }

  Element cover(const Element& x) const override {
    if (x.complement) return top();
    return Element::inl(base_->cover(x.body()));
  }

  std::optional<Element> half_sum(const Element& x, const Element& y) const override {
    if (x.complement != y.complement) return std::nullopt;
    auto h = base_->half_sum(x.body(), y.body());
    if (!h) return std::nullopt;
    return x.complement ? Element::compl_of(*h) : Element::inl(*h);
  }

  Division divide(const Element& x, unsigned n) const override {
    if (x.complement) return {n == 1 ? Division::Status::found : Division::Status::unknown, x};
    Division d = base_->divide(x.body(), n);
    if (d.status == Division::Status::found) d.value = Element::inl(d.value);
    return d;
  }

  bool totally_ordered() const override { return false; }
  bool generalized_boolean() const override { return base_->generalized_boolean(); }
  bool finite() const override { return false; }

  /// The images of a truncation of M followed by their complements.
  Enumeration enumerate(const Budget& budget) const override {
    Enumeration out;
    const auto inner = base_->enumerate(budget).elements;
    for (const auto& m : inner) out.elements.push_back(Element::inl(m));
    for (const auto& m : inner) out.elements.push_back(Element::compl_of(m));
    return out;
  }

  std::vector<Element> idempotents(const Budget& budget) const override {
    std::vector<Element> out;
    const auto inner = base_->idempotents(budget);
    for (const auto& m : inner) out.push_back(Element::inl(m));
    for (const auto& m : inner) out.push_back(Element::compl_of(m));
    return out;
  }

  std::string format(const Element& x) const override {
    return x.complement ? "compl(" + base_->format(x.body()) + ")" : base_->format(x.body());
  }

  Element from_literal(const Literal& lit) const override {
    if (lit.kind == Literal::Kind::compl_of) return Element::compl_of(base_->from_literal(lit.items.at(0)));
    return Element::inl(base_->from_literal(lit));
  }

  /// lambda_1: swaps Inl and Compl.
  Element negate(const Element& x) const {
    return x.complement ? Element::inl(x.body()) : Element::compl_of(x.body());
  }

 private:
  /// lambda_c(a) with c the canonical cover of a v b.
  Element local_complement(const Element& a, const Element& b) const {
    return base_->complement_in(base_->cover(base_->join(a, b)), a);
  }

  AlgebraPtr base_;
};

inline AlgebraPtr make_algebra(const Descriptor& d) {
  switch (d.kind) {
    case Descriptor::Kind::chain: return std::make_shared<GammaAlgebra>(Carrier::integers(d.param), d);
    case Descriptor::Kind::dyadic: return std::make_shared<GammaAlgebra>(Carrier::dyadics(), d);
    case Descriptor::Kind::rational: return std::make_shared<GammaAlgebra>(Carrier::rationals(), d);
    case Descriptor::Kind::padic: return std::make_shared<GammaAlgebra>(Carrier::padic(d.param), d);
    case Descriptor::Kind::quad: return std::make_shared<GammaAlgebra>(Carrier::quad(), d);
    case Descriptor::Kind::chang: return std::make_shared<GammaAlgebra>(Carrier::lex(), d);
    case Descriptor::Kind::finsubsets: return std::make_shared<FinSubsetsAlgebra>();
    case Descriptor::Kind::boolean: {
      std::vector<AlgebraPtr> bits(d.param, make_algebra(Descriptor::chain(1)));
      return std::make_shared<ProductAlgebra>(std::move(bits), d, true);
    }
    case Descriptor::Kind::product: {
      std::vector<AlgebraPtr> factors;
      for (const auto& a : d.args) factors.push_back(make_algebra(a));
      return std::make_shared<ProductAlgebra>(std::move(factors), d);
    }
    case Descriptor::Kind::sum: {
      AlgebraPtr base = make_algebra(d.args.at(0));
      if (base->enumerate(Budget{}).elements.size() < 2)
        throw DomainError("sum needs a non-trivial base algebra");
      return std::make_shared<SumAlgebra>(std::move(base));
    }
  }
  throw DomainError("unknown descriptor");
}

inline AlgebraPtr make_algebra(std::string_view text) { return make_algebra(parse_descriptor(text)); }

}  // namespace emv
