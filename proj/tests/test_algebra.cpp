#include "emvkit/algebra.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace emv;

namespace {

Element el(const AlgebraPtr& m, std::string_view s) { return m->parse_element(s); }
std::string fmt(const AlgebraPtr& m, const Element& x) { return m->format(x); }

std::vector<std::string> formatted(const AlgebraPtr& m, const std::vector<Element>& xs) {
  std::vector<std::string> out;
  for (const auto& x : xs) out.push_back(m->format(x));
  return out;
}

Budget small() {
  Budget b;
  b.max_denom_exp = 3;
  b.max_set = 3;
  b.lex_bound = 3;
  b.max_support = 2;
  b.max_denominator = 4;
  b.quad_bound = 2;
  return b;
}

/// The MV/EMV identities checked by brute force over a list of elements.
void expect_emv_axioms(const AlgebraPtr& m, const std::vector<Element>& xs) {
  const auto idem = m->idempotents(small());
  for (const auto& x : xs) {
    ASSERT_EQ(m->oplus(x, m->zero()), x) << m->name();
    bool covered = false;
    for (const auto& a : idem) covered = covered || m->leq(x, a);
    ASSERT_TRUE(covered) << m->name() << " " << fmt(m, x);
    for (const auto& y : xs) {
      ASSERT_EQ(m->oplus(x, y), m->oplus(y, x));
      ASSERT_EQ(m->join(x, y), m->join(y, x));
      ASSERT_EQ(m->leq(x, y), m->meet(x, y) == x);
      ASSERT_TRUE(m->leq(x, m->oplus(x, y)));
      for (const auto& a : idem) {
        if (!m->leq(x, a) || !m->leq(y, a)) continue;
        // Local MV identities on [0,a].
        ASSERT_EQ(m->complement_in(a, m->complement_in(a, x)), x);
        ASSERT_EQ(m->oplus(x, m->complement_in(a, x)), a);
        const Element lhs = m->oplus(m->complement_in(a, m->oplus(m->complement_in(a, x), y)), y);
        const Element rhs = m->oplus(m->complement_in(a, m->oplus(m->complement_in(a, y), x)), x);
        ASSERT_EQ(lhs, rhs) << m->name() << " x=" << fmt(m, x) << " y=" << fmt(m, y) << " a=" << fmt(m, a);
      }
    }
  }
}

}  // namespace

TEST(Descriptor, RoundTrip) {
  for (std::string s : {"chain(4)", "bool(3)", "dyadic", "rational", "padic(9)", "quad", "chang", "finsubsets",
                        "product(bool(2),dyadic)", "sum(rational)", "product(finsubsets,dyadic)",
                        "product(chain(1),product(chain(2),chain(3)))"})
    EXPECT_EQ(to_string(parse_descriptor(s)), s);
  EXPECT_EQ(to_string(parse_descriptor(" product( bool(2) , dyadic ) ")), "product(bool(2),dyadic)");
}

TEST(Descriptor, ErrorsCarryOffsets) {
  auto offset = [](std::string_view s) {
    try {
      parse_descriptor(s);
    } catch (const ParseError& e) {
      return static_cast<long>(e.offset());
    }
    return -1L;
  };
  EXPECT_EQ(offset("prod(chain(2))"), 0);
  EXPECT_EQ(offset("chain(x)"), 6);
  EXPECT_EQ(offset("chain(2"), 7);
  EXPECT_EQ(offset("product()"), 8);
  EXPECT_EQ(offset("chain(0)"), 6);
  EXPECT_EQ(offset("dyadic dyadic"), 7);
}

TEST(Literal, ParsesIntoAlgebras) {
  auto c = make_algebra("chain(4)");
  EXPECT_EQ(fmt(c, el(c, "2/4")), "1/2");
  EXPECT_THROW(el(c, "1/3"), DomainError);
  EXPECT_THROW(el(c, "5/4"), DomainError);
  auto f = make_algebra("finsubsets");
  EXPECT_EQ(fmt(f, el(f, "{5,1,3}")), "{1,3,5}");
  auto s = make_algebra("sum(rational)");
  EXPECT_EQ(fmt(s, el(s, "[3:1/2, 1:1]")), "[1:1, 3:1/2]");
  auto ch = make_algebra("chang");
  EXPECT_EQ(fmt(ch, el(ch, "c(1,-2)")), "c(1,-2)");
  EXPECT_THROW(el(ch, "c(1,2)"), DomainError);
  auto q = make_algebra("quad");
  EXPECT_EQ(fmt(q, el(q, "q(0,1)")), "q(0,1)");
  EXPECT_THROW(el(q, "q(0,3)"), DomainError);
  EXPECT_THROW(el(c, "(1"), ParseError);
}

TEST(Operations, Oplus) {
  auto c = make_algebra("chain(4)");
  EXPECT_EQ(fmt(c, c->oplus(el(c, "2/4"), el(c, "3/4"))), "1");
  auto ch = make_algebra("chang");
  EXPECT_EQ(fmt(ch, ch->oplus(el(ch, "c(1,-2)"), el(ch, "c(0,5)"))), "c(1,0)");
  auto f = make_algebra("finsubsets");
  EXPECT_EQ(fmt(f, f->oplus(el(f, "{1,3}"), el(f, "{3,5}"))), "{1,3,5}");
}

TEST(Operations, Lambda) {
  auto c = make_algebra("chain(4)");
  EXPECT_EQ(fmt(c, c->lambda(el(c, "1"), el(c, "3/4"))), "1/4");
  auto f = make_algebra("finsubsets");
  EXPECT_EQ(fmt(f, f->lambda(el(f, "{1,2,3}"), el(f, "{2}"))), "{1,3}");
  auto p = make_algebra("product(bool(1),dyadic)");
  EXPECT_EQ(fmt(p, p->lambda(el(p, "(1,1)"), el(p, "(1,1/4)"))), "(0,3/4)");
  EXPECT_THROW(c->lambda(el(c, "1/2"), el(c, "1/4")), DomainError);
  EXPECT_THROW(f->lambda(el(f, "{1}"), el(f, "{2}")), DomainError);
}

TEST(Operations, Odot) {
  auto c = make_algebra("chain(4)");
  EXPECT_EQ(fmt(c, c->odot(el(c, "3/4"), el(c, "3/4"))), "1/2");
  auto ch = make_algebra("chang");
  for (int k = 0; k < 50; ++k) {
    const Element y = el(ch, "c(0," + std::to_string(k) + ")");
    EXPECT_EQ(fmt(ch, ch->odot(y, y)), "c(0,0)");
  }
  auto f = make_algebra("finsubsets");
  EXPECT_EQ(fmt(f, f->odot(el(f, "{1,3}"), el(f, "{3,5}"))), "{3}");
}

TEST(Operations, PartialAdd) {
  auto c = make_algebra("chain(4)");
  EXPECT_EQ(fmt(c, *c->partial_add(el(c, "1/4"), el(c, "2/4"))), "3/4");
  EXPECT_FALSE(c->partial_add(el(c, "3/4"), el(c, "2/4")).has_value());
  auto f = make_algebra("finsubsets");
  EXPECT_EQ(fmt(f, *f->partial_add(el(f, "{1}"), el(f, "{2}"))), "{1,2}");
}

TEST(Operations, Arrow) {
  auto c = make_algebra("chain(4)");
  EXPECT_EQ(fmt(c, c->arrow(el(c, "1"), el(c, "3/4"), el(c, "1/4"))), "1/2");
  for (const auto& x : c->enumerate({}).elements) EXPECT_EQ(fmt(c, c->arrow(el(c, "1"), x, x)), "1");
  auto b = make_algebra("bool(2)");
  EXPECT_EQ(fmt(b, b->arrow(el(b, "(1,1)"), el(b, "(1,0)"), el(b, "(0,1)"))), "(0,1)");
}

TEST(Operations, Idempotents) {
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  auto c = make_algebra("chain(4)");
  EXPECT_EQ(sorted(formatted(c, c->idempotents({}))), (std::vector<std::string>{"0", "1"}));
  auto p = make_algebra("product(chain(1),chain(4))");
  EXPECT_EQ(sorted(formatted(p, p->idempotents({}))), (std::vector<std::string>{"(0,0)", "(0,1)", "(1,0)", "(1,1)"}));
  auto d = make_algebra("dyadic");
  EXPECT_EQ(sorted(formatted(d, d->idempotents({}))), (std::vector<std::string>{"0", "1"}));
}

TEST(Enumeration, Truncations) {
  auto c = make_algebra("chain(2)");
  const auto ce = c->enumerate({});
  EXPECT_TRUE(ce.exhaustive);
  EXPECT_EQ(formatted(c, ce.elements), (std::vector<std::string>{"0", "1/2", "1"}));
  Budget b;
  b.max_denom_exp = 2;
  auto d = make_algebra("dyadic");
  EXPECT_EQ(formatted(d, d->enumerate(b).elements), (std::vector<std::string>{"0", "1/4", "1/2", "3/4", "1"}));
  b.lex_bound = 2;
  auto ch = make_algebra("chang");
  EXPECT_EQ(formatted(ch, ch->enumerate(b).elements),
            (std::vector<std::string>{"c(0,0)", "c(0,1)", "c(0,2)", "c(1,-2)", "c(1,-1)", "c(1,0)"}));
}

TEST(Enumeration, SizesMatchCounting) {
  Budget b;
  for (unsigned e = 0; e <= 8; ++e) {
    b.max_denom_exp = e;
    EXPECT_EQ(make_algebra("dyadic")->enumerate(b).elements.size(), (std::size_t{1} << e) + 1);
    if (e <= 4) EXPECT_EQ(make_algebra("padic(3)")->enumerate(b).elements.size(), oracle::padic_grid(3, e).size());
  }
  for (unsigned n = 1; n <= 8; ++n) EXPECT_EQ(make_algebra("chain(" + std::to_string(n) + ")")->enumerate({}).elements.size(), n + 1);
  for (unsigned k = 0; k <= 6; ++k) EXPECT_EQ(make_algebra("bool(" + std::to_string(k) + ")")->enumerate({}).elements.size(), 1u << k);
  b = {};
  b.max_set = 5;
  EXPECT_EQ(make_algebra("finsubsets")->enumerate(b).elements.size(), 32u);
  b.max_denominator = 4;
  // 0, 1 and the proper fractions with denominator 2..4.
  EXPECT_EQ(make_algebra("rational")->enumerate(b).elements.size(), 7u);
}

TEST(Enumeration, TopAndZero) {
  for (std::string s : {"chain(3)", "bool(2)", "dyadic", "rational", "padic(5)", "quad", "chang", "product(bool(1),dyadic)"})
    EXPECT_TRUE(make_algebra(s)->has_top()) << s;
  EXPECT_FALSE(make_algebra("finsubsets")->has_top());
  EXPECT_FALSE(make_algebra("sum(rational)")->has_top());
  EXPECT_FALSE(make_algebra("product(finsubsets,dyadic)")->has_top());
  EXPECT_TRUE(make_algebra("chain(1)")->generalized_boolean());
  EXPECT_TRUE(make_algebra("bool(3)")->generalized_boolean());
  EXPECT_FALSE(make_algebra("chain(2)")->generalized_boolean());
}

TEST(Axioms, FiniteAlgebrasExhaustive) {
  for (std::string s : {"chain(1)", "chain(3)", "chain(5)", "bool(3)", "product(chain(1),chain(2))",
                        "product(chain(2),chain(3))"}) {
    auto m = make_algebra(s);
    expect_emv_axioms(m, m->enumerate({}).elements);
  }
}

TEST(Axioms, TruncatedAlgebras) {
  for (std::string s : {"dyadic", "rational", "padic(3)", "quad", "chang", "finsubsets", "sum(chain(2))",
                        "product(finsubsets,dyadic)", "sum(rational)"}) {
    auto m = make_algebra(s);
    expect_emv_axioms(m, m->enumerate(small()).elements);
  }
}

TEST(Oracle, ChainOperationsMatchIntegers) {
  for (long n = 1; n <= 8; ++n) {
    auto c = make_algebra("chain(" + std::to_string(n) + ")");
    const Element one = c->top();
    for (long i = 0; i <= n; ++i)
      for (long j = 0; j <= n; ++j) {
        const oracle::Frac x(i, n), y(j, n);
        const Element ex = el(c, oracle::text(x)), ey = el(c, oracle::text(y));
        ASSERT_EQ(fmt(c, c->oplus(ex, ey)), oracle::text(oracle::oplus(x, y)));
        ASSERT_EQ(fmt(c, c->odot(ex, ey)), oracle::text(oracle::odot(x, y)));
        ASSERT_EQ(fmt(c, c->join(ex, ey)), oracle::text(oracle::fmax(x, y)));
        ASSERT_EQ(fmt(c, c->meet(ex, ey)), oracle::text(oracle::fmin(x, y)));
        ASSERT_EQ(fmt(c, c->lambda(one, ex)), oracle::text(oracle::neg(x)));
      }
  }
}

TEST(Oracle, IntervalOperationsMatchFractions) {
  auto d = make_algebra("dyadic");
  auto q = make_algebra("rational");
  for (int i = 0; i < 4000; ++i) {
    const long e1 = oracle::uniform(0, 10), e2 = oracle::uniform(0, 10);
    const oracle::Frac x(oracle::uniform(0, 1L << e1), 1L << e1), y(oracle::uniform(0, 1L << e2), 1L << e2);
    ASSERT_EQ(fmt(d, d->oplus(el(d, oracle::text(x)), el(d, oracle::text(y)))), oracle::text(oracle::oplus(x, y)));
    ASSERT_EQ(fmt(d, d->odot(el(d, oracle::text(x)), el(d, oracle::text(y)))), oracle::text(oracle::odot(x, y)));
    const long d1 = oracle::uniform(1, 40), d2 = oracle::uniform(1, 40);
    const oracle::Frac a(oracle::uniform(0, d1), d1), b(oracle::uniform(0, d2), d2);
    ASSERT_EQ(fmt(q, q->odot(el(q, oracle::text(a)), el(q, oracle::text(b)))), oracle::text(oracle::odot(a, b)));
    ASSERT_EQ(fmt(q, q->lambda(q->top(), el(q, oracle::text(a)))), oracle::text(oracle::neg(a)));
  }
}

TEST(Oracle, FinSubsetsMatchBitmasks) {
  auto f = make_algebra("finsubsets");
  auto text = [](unsigned mask) {
    std::string s = "{";
    for (unsigned i = 0; i < 8; ++i)
      if (mask >> i & 1) s += (s.size() > 1 ? "," : "") + std::to_string(i + 1);
    return s + "}";
  };
  for (unsigned a = 0; a < 64; ++a)
    for (unsigned b = 0; b < 64; ++b) {
      const Element x = el(f, text(a)), y = el(f, text(b));
      ASSERT_EQ(fmt(f, f->oplus(x, y)), text(a | b));
      ASSERT_EQ(fmt(f, f->odot(x, y)), text(a & b));
      ASSERT_EQ(f->leq(x, y), (a & ~b) == 0);
      if ((a & ~b) == 0) ASSERT_EQ(fmt(f, f->lambda(y, x)), text(b & ~a));
    }
}

TEST(Oracle, ProductIsComponentwise) {
  auto p = make_algebra("product(chain(2),chain(3))");
  const std::vector<long> ns{2, 3};
  for (const auto& x : oracle::chain_product(ns))
    for (const auto& y : oracle::chain_product(ns)) {
      const Element ex = el(p, oracle::tuple_text(ns, x)), ey = el(p, oracle::tuple_text(ns, y));
      ASSERT_EQ(fmt(p, p->odot(ex, ey)), oracle::tuple_text(ns, oracle::tuple_odot(ns, x, y)));
      ASSERT_EQ(p->leq(ex, ey), oracle::tuple_leq(x, y));
    }
}

TEST(Oracle, ChangProductMatchesLexPairs) {
  auto ch = make_algebra("chang");
  for (int i = 0; i < 3000; ++i) {
    const oracle::LexPair x{oracle::uniform(0, 1), oracle::uniform(-30, 30)};
    const oracle::LexPair y{oracle::uniform(0, 1), oracle::uniform(-30, 30)};
    if (!(oracle::LexPair{0, 0} <= x) || !(x <= oracle::LexPair{1, 0})) continue;
    if (!(oracle::LexPair{0, 0} <= y) || !(y <= oracle::LexPair{1, 0})) continue;
    auto lit = [](oracle::LexPair v) { return "c(" + std::to_string(v.h) + "," + std::to_string(v.l) + ")"; };
    const oracle::LexPair z = oracle::lex_odot(x, y);
    ASSERT_EQ(fmt(ch, ch->odot(el(ch, lit(x)), el(ch, lit(y)))), lit(z));
  }
}

TEST(Oracle, QuadMembershipMatchesFloatingPoint) {
  auto q = make_algebra("quad");
  for (long m = -6; m <= 6; ++m)
    for (long n = -6; n <= 6; ++n) {
      const long double v = oracle::quad_value(m, n);
      const bool inside = v > -1e-12L && v < 1 + 1e-12L;
      const std::string lit = "q(" + std::to_string(m) + "," + std::to_string(n) + ")";
      if (inside)
        EXPECT_NO_THROW(el(q, lit)) << lit;
      else
        EXPECT_THROW(el(q, lit), DomainError) << lit;
    }
}

TEST(Sum, FiniteSupport) {
  auto s = make_algebra("sum(chain(2))");
  const Element x = el(s, "[1:1/2, 4:1]"), y = el(s, "[1:1/2, 2:1/2]");
  EXPECT_EQ(fmt(s, s->oplus(x, y)), "[1:1, 2:1/2, 4:1]");
  EXPECT_EQ(fmt(s, s->odot(x, y)), "[]");
  EXPECT_EQ(fmt(s, s->cover(x)), "[1:1, 4:1]");
  EXPECT_THROW(make_algebra("sum(bool(0))"), DomainError);
}
