#pragma once

// Values of the cataloged algebras.

#include "emvkit/arith.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace emv {

namespace detail {

inline int compare_group(const GroupElement& l, const GroupElement& r) {
  if (l.index() != r.index()) return l.index() < r.index() ? -1 : 1;
  return std::visit(
      [&](const auto& a) -> int {
        using T = std::decay_t<decltype(a)>;
        const auto& b = std::get<T>(r);
        if constexpr (std::is_same_v<T, ScaledInt>) return compare_int(a.value, b.value);
        else if constexpr (std::is_same_v<T, Rational>) return compare_rat(a, b);
        else if constexpr (std::is_same_v<T, Quad>) {
          const int c = compare_int(a.a, b.a);
          return c != 0 ? c : compare_int(a.b, b.b);
        } else {
          const int c = compare_int(a.hi, b.hi);
          return c != 0 ? c : compare_int(a.lo, b.lo);
        }
      },
      l);
}

}  // namespace detail

/// A tagged value.  The meaning of the payload is fixed by the algebra the
/// element belongs to; the structural order defined here is only used for
/// containers and has nothing to do with the lattice order.
struct Element {
  enum class Kind : std::uint8_t { group, set, tuple, map, repr };

  Kind kind = Kind::group;
  GroupElement value = Rational(0);     // group
  std::vector<std::uint64_t> members;   // set: sorted; map: sorted indices
  std::vector<Element> items;           // tuple components; map values; repr body
  bool complement = false;              // repr: Compl(body) instead of Inl(body)

  static Element group(GroupElement g) {
    Element e;
    e.value = std::move(g);
    return e;
  }
  static Element set(std::vector<std::uint64_t> sorted_members) {
    Element e;
    e.kind = Kind::set;
    e.members = std::move(sorted_members);
    return e;
  }
  static Element tuple(std::vector<Element> components) {
    Element e;
    e.kind = Kind::tuple;
    e.items = std::move(components);
    return e;
  }
  /// Indices must be sorted, unique, and paired with non-zero values.
  static Element map(std::vector<std::uint64_t> indices, std::vector<Element> values) {
    Element e;
    e.kind = Kind::map;
    e.members = std::move(indices);
    e.items = std::move(values);
    return e;
  }
  static Element inl(Element body) {
    Element e;
    e.kind = Kind::repr;
    e.items.push_back(std::move(body));
    return e;
  }
  static Element compl_of(Element body) {
    Element e = inl(std::move(body));
    e.complement = true;
    return e;
  }

  const Element& body() const { return items.front(); }
};

inline int compare(const Element& l, const Element& r) {
  if (l.kind != r.kind) return l.kind < r.kind ? -1 : 1;
  switch (l.kind) {
    case Element::Kind::group: return detail::compare_group(l.value, r.value);
    case Element::Kind::set:
      if (l.members == r.members) return 0;
      return l.members < r.members ? -1 : 1;
    case Element::Kind::repr:
      if (l.complement != r.complement) return l.complement ? 1 : -1;
      return compare(l.body(), r.body());
    case Element::Kind::tuple:
    case Element::Kind::map: {
      if (l.members != r.members) return l.members < r.members ? -1 : 1;
      if (l.items.size() != r.items.size()) return l.items.size() < r.items.size() ? -1 : 1;
      for (std::size_t i = 0; i < l.items.size(); ++i) {
        const int c = compare(l.items[i], r.items[i]);
        if (c != 0) return c;
      }
      return 0;
    }
  }
  return 0;
}

inline bool operator==(const Element& l, const Element& r) { return compare(l, r) == 0; }
inline bool operator!=(const Element& l, const Element& r) { return compare(l, r) != 0; }
inline bool operator<(const Element& l, const Element& r) { return compare(l, r) < 0; }

}  // namespace emv
