#pragma once

// Exact unital lattice-ordered groups used as carriers for interval algebras.
//
// Every carrier is totally ordered and carries a strong unit u > 0.  All
// arithmetic is done with arbitrary precision integers and reduced rationals.

#include <boost/multiprecision/gmp.hpp>

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace emv {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation (wrong carrier,
/// element not in the algebra, bound violated, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant did not hold.  Signals a bug or a broken input
/// (for example a fabricated square root).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Element of Integers(n): the integer i, standing for i/n of the unit.
struct ScaledInt {
  Integer value;
};

/// a + b*sqrt(2).
struct Quad {
  Integer a;
  Integer b;
};

/// Element of the lexicographic product Z x Z.
struct Lex {
  Integer hi;
  Integer lo;
};

using GroupElement = std::variant<ScaledInt, Rational, Quad, Lex>;

inline bool operator==(const ScaledInt& l, const ScaledInt& r) { return l.value == r.value; }
inline bool operator==(const Quad& l, const Quad& r) { return l.a == r.a && l.b == r.b; }
inline bool operator==(const Lex& l, const Lex& r) { return l.hi == r.hi && l.lo == r.lo; }

namespace detail {

inline int sign(const Integer& v) { return v.sign(); }

inline int compare_int(const Integer& l, const Integer& r) { return l < r ? -1 : (r < l ? 1 : 0); }

inline int compare_rat(const Rational& l, const Rational& r) { return l < r ? -1 : (r < l ? 1 : 0); }

/// Sign of a + b*sqrt(2), decided by integer case analysis.  sqrt(2) is
/// irrational, so the value is zero iff a = b = 0.
inline int quad_sign(const Integer& a, const Integer& b) {
  const int sa = sign(a);
  const int sb = sign(b);
  if (sa >= 0 && sb >= 0) return (sa != 0 || sb != 0) ? 1 : 0;
  if (sa <= 0 && sb <= 0) return -1;
  const Integer a2 = a * a;
  const Integer b2 = 2 * b * b;
  if (sa > 0) return a2 > b2 ? 1 : -1;
  return b2 > a2 ? 1 : -1;
}

/// True iff every prime factor of d divides p, i.e. d | p^k for some k.
inline bool divides_power_of(Integer d, const Integer& p) {
  if (d < 0) d = -d;
  while (d != 1) {
    Integer g = boost::multiprecision::gcd(d, p);
    if (g == 1) return false;
    while (d % g == 0) d /= g;
  }
  return true;
}

inline std::string format_rational(const Rational& q) {
  const Integer num = boost::multiprecision::numerator(q);
  const Integer den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace detail

enum class CarrierKind { integers, rationals, dyadics, padic, quad, lex };

/// A totally ordered unital l-group with exact arithmetic.
///
/// integers(n): (Z, n).  rationals(): (Q, 1).  padic(p): the rationals i/p^k
/// with unit 1; dyadics() is padic(2).  quad(): (Z[sqrt 2], 1).  lex():
/// Z x Z ordered lexicographically with unit (1,0).
class Carrier {
 public:
  static Carrier integers(Integer n) {
    if (n <= 0) throw DomainError("integers carrier needs a positive unit");
    return Carrier(CarrierKind::integers, std::move(n));
  }
  static Carrier rationals() { return Carrier(CarrierKind::rationals, 1); }
  static Carrier dyadics() { return Carrier(CarrierKind::dyadics, 2); }
  static Carrier padic(Integer p) {
    if (p < 2) throw DomainError("p-adic carrier needs p >= 2");
    return Carrier(CarrierKind::padic, std::move(p));
  }
  static Carrier quad() { return Carrier(CarrierKind::quad, 0); }
  static Carrier lex() { return Carrier(CarrierKind::lex, 0); }

  CarrierKind kind() const { return kind_; }
  /// n for integers(n), p for padic(p) and 2 for dyadics.
  const Integer& parameter() const { return param_; }

  GroupElement zero() const {
    switch (kind_) {
      case CarrierKind::integers: return ScaledInt{0};
      case CarrierKind::quad: return Quad{0, 0};
      case CarrierKind::lex: return Lex{0, 0};
      default: return Rational(0);
    }
  }

  GroupElement unit() const {
    switch (kind_) {
      case CarrierKind::integers: return ScaledInt{param_};
      case CarrierKind::quad: return Quad{1, 0};
      case CarrierKind::lex: return Lex{1, 0};
      default: return Rational(1);
    }
  }

  /// Payload has the right shape and lies in the group.
  bool holds(const GroupElement& x) const {
    switch (kind_) {
      case CarrierKind::integers: return std::holds_alternative<ScaledInt>(x);
      case CarrierKind::quad: return std::holds_alternative<Quad>(x);
      case CarrierKind::lex: return std::holds_alternative<Lex>(x);
      case CarrierKind::rationals: return std::holds_alternative<Rational>(x);
      case CarrierKind::dyadics:
      case CarrierKind::padic: {
        const auto* q = std::get_if<Rational>(&x);
        return q && detail::divides_power_of(boost::multiprecision::denominator(*q), param_);
      }
    }
    return false;
  }

  GroupElement add(const GroupElement& x, const GroupElement& y) const {
    check(x);
    check(y);
    return std::visit(
        [&](const auto& l) -> GroupElement {
          using T = std::decay_t<decltype(l)>;
          const auto& r = std::get<T>(y);
          if constexpr (std::is_same_v<T, ScaledInt>) return ScaledInt{l.value + r.value};
          else if constexpr (std::is_same_v<T, Rational>) return Rational(l + r);
          else if constexpr (std::is_same_v<T, Quad>) return Quad{l.a + r.a, l.b + r.b};
          else return Lex{l.hi + r.hi, l.lo + r.lo};
        },
        x);
  }

  GroupElement negate(const GroupElement& x) const {
    check(x);
    return std::visit(
        [](const auto& v) -> GroupElement {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, ScaledInt>) return ScaledInt{-v.value};
          else if constexpr (std::is_same_v<T, Rational>) return Rational(-v);
          else if constexpr (std::is_same_v<T, Quad>) return Quad{-v.a, -v.b};
          else return Lex{-v.hi, -v.lo};
        },
        x);
  }

  GroupElement subtract(const GroupElement& x, const GroupElement& y) const { return add(x, negate(y)); }

  std::strong_ordering compare(const GroupElement& x, const GroupElement& y) const {
    check(x);
    check(y);
    const int c = std::visit(
        [&](const auto& l) -> int {
          using T = std::decay_t<decltype(l)>;
          const auto& r = std::get<T>(y);
          if constexpr (std::is_same_v<T, ScaledInt>) return detail::compare_int(l.value, r.value);
          else if constexpr (std::is_same_v<T, Rational>) return detail::compare_rat(l, r);
          else if constexpr (std::is_same_v<T, Quad>) return detail::quad_sign(l.a - r.a, l.b - r.b);
          else {
            const int h = detail::compare_int(l.hi, r.hi);
            return h != 0 ? h : detail::compare_int(l.lo, r.lo);
          }
        },
        x);
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  bool less_equal(const GroupElement& x, const GroupElement& y) const { return compare(x, y) <= 0; }
  GroupElement min(const GroupElement& x, const GroupElement& y) const { return less_equal(x, y) ? x : y; }
  GroupElement max(const GroupElement& x, const GroupElement& y) const { return less_equal(x, y) ? y : x; }

  /// The unique y with y + y = x, when it exists in the group.
  std::optional<GroupElement> half(const GroupElement& x) const {
    auto y = divide(x, 2);
    if (y && !(add(*y, *y) == x)) throw InvariantError("halving is not an exact inverse of doubling");
    return y;
  }

  /// The unique y with n*y = x, when it exists in the group.
  std::optional<GroupElement> divide(const GroupElement& x, unsigned n) const {
    check(x);
    if (n == 0) throw DomainError("division by zero");
    const Integer d = n;
    return std::visit(
        [&](const auto& v) -> std::optional<GroupElement> {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, ScaledInt>) {
            if (v.value % d != 0) return std::nullopt;
            return ScaledInt{v.value / d};
          } else if constexpr (std::is_same_v<T, Rational>) {
            GroupElement q = Rational(v / Rational(d));
            if (!holds(q)) return std::nullopt;
            return q;
          } else if constexpr (std::is_same_v<T, Quad>) {
            if (v.a % d != 0 || v.b % d != 0) return std::nullopt;
            return Quad{v.a / d, v.b / d};
          } else {
            if (v.hi % d != 0 || v.lo % d != 0) return std::nullopt;
            return Lex{v.hi / d, v.lo / d};
          }
        },
        x);
  }

  /// An element x of [0,u] for which (x+u)/2 does not exist, or nothing when
  /// the carrier is two-divisible.  For the odd p-adic case the witness is
  /// 2/p, whose half-sum (2+p)/2p would need an even p^k.
  std::optional<GroupElement> halving_gap() const {
    switch (kind_) {
      case CarrierKind::rationals:
      case CarrierKind::dyadics: return std::nullopt;
      case CarrierKind::padic:
        if (param_ % 2 == 0) return std::nullopt;
        return Rational(Rational(2) / Rational(param_));
      case CarrierKind::integers:
        // (0 + n)/2 needs n even; (1 + n)/2 needs n odd.
        return param_ % 2 == 0 ? ScaledInt{1} : ScaledInt{0};
      case CarrierKind::quad: return Quad{-1, 1};  // alpha = sqrt2 - 1
      case CarrierKind::lex: return Lex{0, 0};
    }
    return std::nullopt;
  }

  std::string format(const GroupElement& x) const {
    if (!holds(x)) throw DomainError("element does not belong to carrier " + name());
    return std::visit(
        [&](const auto& v) -> std::string {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, ScaledInt>) return detail::format_rational(Rational(v.value, param_));
          else if constexpr (std::is_same_v<T, Rational>) return detail::format_rational(v);
          else if constexpr (std::is_same_v<T, Quad>) return "q(" + Integer(v.a + v.b).str() + "," + v.b.str() + ")";
          else return "c(" + v.hi.str() + "," + v.lo.str() + ")";
        },
        x);
  }

  std::string name() const {
    switch (kind_) {
      case CarrierKind::integers: return "integers(" + param_.str() + ")";
      case CarrierKind::rationals: return "rationals";
      case CarrierKind::dyadics: return "dyadics";
      case CarrierKind::padic: return "padic(" + param_.str() + ")";
      case CarrierKind::quad: return "quad";
      case CarrierKind::lex: return "lex";
    }
    return "?";
  }

  bool operator==(const Carrier& other) const { return kind_ == other.kind_ && param_ == other.param_; }

 private:
  Carrier(CarrierKind kind, Integer param) : kind_(kind), param_(std::move(param)) {}

  /// Payload shape only; full membership is holds().
  void check(const GroupElement& x) const {
    bool ok = false;
    switch (kind_) {
      case CarrierKind::integers: ok = std::holds_alternative<ScaledInt>(x); break;
      case CarrierKind::quad: ok = std::holds_alternative<Quad>(x); break;
      case CarrierKind::lex: ok = std::holds_alternative<Lex>(x); break;
      default: ok = std::holds_alternative<Rational>(x); break;
    }
    if (!ok) throw DomainError("payload does not match carrier " + name());
  }

  CarrierKind kind_;
  Integer param_;
};

/// m + n*alpha with alpha = sqrt(2) - 1, as an element of the quad carrier.
inline Quad quad_from_alpha(const Integer& m, const Integer& n) { return Quad{m - n, n}; }

}  // namespace emv
