#pragma once

// Algebra descriptors and element literals.
//
//   algebra := "chain(" NAT ")" | "bool(" NAT ")" | "dyadic" | "rational"
//            | "padic(" NAT ")" | "quad" | "chang" | "finsubsets"
//            | "product(" algebra { "," algebra } ")" | "sum(" algebra ")"
//
//   literal := ["-"] NAT ["/" NAT] | "{" [NAT {"," NAT}] "}"
//            | "(" literal {"," literal} ")" | "c(" INT "," INT ")"
//            | "q(" INT "," INT ")" | "[" [NAT ":" literal {"," ...}] "]"
//            | "compl(" literal ")"

#include "emvkit/arith.hpp"

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace emv {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct Descriptor {
  enum class Kind { chain, boolean, dyadic, rational, padic, quad, chang, finsubsets, product, sum };

  Kind kind = Kind::dyadic;
  unsigned param = 0;
  std::vector<Descriptor> args;

  static Descriptor chain(unsigned n) { return {Kind::chain, n, {}}; }
  static Descriptor boolean(unsigned k) { return {Kind::boolean, k, {}}; }
  static Descriptor dyadic() { return {Kind::dyadic, 0, {}}; }
  static Descriptor rational() { return {Kind::rational, 0, {}}; }
  static Descriptor padic(unsigned p) { return {Kind::padic, p, {}}; }
  static Descriptor quad() { return {Kind::quad, 0, {}}; }
  static Descriptor chang() { return {Kind::chang, 0, {}}; }
  static Descriptor finsubsets() { return {Kind::finsubsets, 0, {}}; }
  static Descriptor product(std::vector<Descriptor> factors) { return {Kind::product, 0, std::move(factors)}; }
  static Descriptor sum(Descriptor base) { return {Kind::sum, 0, {std::move(base)}}; }

  bool operator==(const Descriptor& o) const { return kind == o.kind && param == o.param && args == o.args; }
};

inline std::string to_string(const Descriptor& d) {
  switch (d.kind) {
    case Descriptor::Kind::chain: return "chain(" + std::to_string(d.param) + ")";
    case Descriptor::Kind::boolean: return "bool(" + std::to_string(d.param) + ")";
    case Descriptor::Kind::dyadic: return "dyadic";
    case Descriptor::Kind::rational: return "rational";
    case Descriptor::Kind::padic: return "padic(" + std::to_string(d.param) + ")";
    case Descriptor::Kind::quad: return "quad";
    case Descriptor::Kind::chang: return "chang";
    case Descriptor::Kind::finsubsets: return "finsubsets";
    case Descriptor::Kind::sum: return "sum(" + to_string(d.args.at(0)) + ")";
    case Descriptor::Kind::product: {
      std::string s = "product(";
      for (std::size_t i = 0; i < d.args.size(); ++i) s += (i ? "," : "") + to_string(d.args[i]);
      return s + ")";
    }
  }
  return "?";
}

struct Literal {
  enum class Kind { number, set, tuple, chang, quad, map, compl_of };

  Kind kind = Kind::number;
  Rational number;
  Integer first, second;              // chang (hi, lo); quad (m, n)
  std::vector<std::uint64_t> keys;    // set members or map indices, in source order
  std::vector<Literal> items;         // tuple components, map values, compl body
  std::size_t offset = 0;
};

namespace detail {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  bool accept_word(std::string_view w) {
    skip_space();
    if (text_.substr(pos_, w.size()) != w) return false;
    const std::size_t end = pos_ + w.size();
    if (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) return false;
    pos_ = end;
    return true;
  }
  std::string identifier() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }
  Integer natural() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a natural number");
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }
  Integer integer() {
    const bool neg = accept('-');
    Integer v = natural();
    return neg ? Integer(-v) : v;
  }
  std::size_t pos() const { return pos_; }
  void set_pos(std::size_t p) { pos_ = p; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

inline unsigned small_natural(Cursor& c, unsigned limit) {
  const std::size_t at = c.pos();
  const Integer v = c.natural();
  if (v > limit) throw ParseError("number too large", at);
  return static_cast<unsigned>(v);
}

inline Descriptor parse_descriptor(Cursor& c) {
  const std::size_t at = c.pos();
  const std::string word = c.identifier();
  auto with_param = [&](Descriptor::Kind kind, unsigned lo, unsigned hi) {
    c.expect('(');
    const std::size_t p = c.pos();
    const unsigned v = small_natural(c, hi);
    if (v < lo) throw ParseError("parameter out of range", p);
    c.expect(')');
    return Descriptor{kind, v, {}};
  };
  if (word == "chain") return with_param(Descriptor::Kind::chain, 1, 1u << 20);
  if (word == "bool") return with_param(Descriptor::Kind::boolean, 0, 64);
  if (word == "padic") return with_param(Descriptor::Kind::padic, 2, 1u << 20);
  if (word == "dyadic") return Descriptor::dyadic();
  if (word == "rational") return Descriptor::rational();
  if (word == "quad") return Descriptor::quad();
  if (word == "chang") return Descriptor::chang();
  if (word == "finsubsets") return Descriptor::finsubsets();
  if (word == "sum") {
    c.expect('(');
    Descriptor base = parse_descriptor(c);
    c.expect(')');
    return Descriptor::sum(std::move(base));
  }
  if (word == "product") {
    c.expect('(');
    std::vector<Descriptor> factors;
    factors.push_back(parse_descriptor(c));
    while (c.accept(',')) factors.push_back(parse_descriptor(c));
    c.expect(')');
    return Descriptor::product(std::move(factors));
  }
  throw ParseError(word.empty() ? "expected an algebra name" : "unknown algebra '" + word + "'", at);
}

inline Literal parse_literal(Cursor& c) {
  Literal lit;
  lit.offset = (c.skip_space(), c.pos());
  const char ch = c.peek();
  if (ch == '{') {
    c.expect('{');
    lit.kind = Literal::Kind::set;
    if (!c.accept('}')) {
      do lit.keys.push_back(static_cast<std::uint64_t>(small_natural(c, 1u << 30)));
      while (c.accept(','));
      c.expect('}');
    }
    return lit;
  }
  if (ch == '[') {
    c.expect('[');
    lit.kind = Literal::Kind::map;
    if (!c.accept(']')) {
      do {
        lit.keys.push_back(static_cast<std::uint64_t>(small_natural(c, 1u << 30)));
        c.expect(':');
        lit.items.push_back(parse_literal(c));
      } while (c.accept(','));
      c.expect(']');
    }
    return lit;
  }
  if (ch == '(') {
    c.expect('(');
    lit.kind = Literal::Kind::tuple;
    do lit.items.push_back(parse_literal(c));
    while (c.accept(','));
    c.expect(')');
    return lit;
  }
  if (ch == '-' || std::isdigit(static_cast<unsigned char>(ch))) {
    lit.kind = Literal::Kind::number;
    const Integer num = c.integer();
    Integer den = 1;
    if (c.accept('/')) {
      const std::size_t at = c.pos();
      den = c.natural();
      if (den == 0) throw ParseError("zero denominator", at);
    }
    lit.number = Rational(num, den);
    return lit;
  }
  if (c.accept_word("compl")) {
    c.expect('(');
    lit.kind = Literal::Kind::compl_of;
    lit.items.push_back(parse_literal(c));
    c.expect(')');
    return lit;
  }
  const bool chang = c.accept_word("c");
  if (chang || c.accept_word("q")) {
    lit.kind = chang ? Literal::Kind::chang : Literal::Kind::quad;
    c.expect('(');
    lit.first = c.integer();
    c.expect(',');
    lit.second = c.integer();
    c.expect(')');
    return lit;
  }
  c.fail("expected an element literal");
}

}  // namespace detail

inline Descriptor parse_descriptor(std::string_view text) {
  detail::Cursor c(text);
  Descriptor d = detail::parse_descriptor(c);
  if (!c.at_end()) c.fail("trailing input");
  return d;
}

inline Literal parse_literal(std::string_view text) {
  detail::Cursor c(text);
  Literal lit = detail::parse_literal(c);
  if (!c.at_end()) c.fail("trailing input");
  return lit;
}

}  // namespace emv
