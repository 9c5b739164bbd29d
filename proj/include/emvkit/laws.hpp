#pragma once

// Named law suites over (algebra, square root) pairs with deterministic
// sampling, counterexample shrinking and line or JSON reports.

#include "emvkit/represent.hpp"
#include "emvkit/sqrt.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace emv {

enum class Slot { element, idempotent };

struct LawContext {
  AlgebraPtr algebra;
  std::optional<RootFn> root;
  Budget budget;
  std::uint64_t seed = 0;
  std::vector<Element> elements;
  std::vector<Element> idempotents;
  Element r0;
  bool strict = false;
  /// Root values and (Sq1) results already computed; suites reuse them.
  std::shared_ptr<std::map<Element, Element>> memo = std::make_shared<std::map<Element, Element>>();
  std::shared_ptr<std::map<Element, bool>> sq1_memo = std::make_shared<std::map<Element, bool>>();

  const Algebra& m() const { return *algebra; }
  Element r(const Element& x) const {
    auto it = memo->find(x);
    if (it == memo->end()) it = memo->emplace(x, (*root)(x)).first;
    return it->second;
  }
  bool sq1_holds(const Element& x) const {
    auto it = sq1_memo->find(x);
    if (it == sq1_memo->end()) {
      const Element rx = r(x);
      it = sq1_memo->emplace(x, algebra->odot(rx, rx) == x).first;
    }
    return it->second;
  }
};

inline LawContext make_context(AlgebraPtr m, std::optional<RootFn> root, const Budget& budget = {},
                               std::uint64_t seed = 0) {
  LawContext ctx;
  ctx.algebra = std::move(m);
  ctx.root = std::move(root);
  ctx.budget = budget;
  ctx.seed = seed;
  ctx.elements = ctx.algebra->enumerate(budget).elements;
  ctx.idempotents = ctx.algebra->idempotents(budget);
  std::sort(ctx.idempotents.begin(), ctx.idempotents.end());
  ctx.idempotents.erase(std::unique(ctx.idempotents.begin(), ctx.idempotents.end()), ctx.idempotents.end());
  ctx.r0 = ctx.algebra->zero();
  if (ctx.root) {
    try {
      ctx.r0 = ctx.r(ctx.algebra->zero());
      ctx.strict = is_strict(*ctx.algebra, *ctx.root, budget).strict;
    } catch (const Error&) {
      ctx.strict = false;
    }
  }
  return ctx;
}

inline LawContext make_context(AlgebraPtr m, const std::optional<SquareRoot>& r, const Budget& budget = {},
                               std::uint64_t seed = 0) {
  std::optional<RootFn> fn;
  if (r) fn = root_function(m, *r);
  return make_context(std::move(m), std::move(fn), budget, seed);
}

/// A violated law, or nothing when the tuple satisfies it (or is vacuous).
using Outcome = std::optional<std::string>;

struct LawReport {
  enum class Verdict { pass, fail, skipped };

  std::string suite;
  std::string algebra;
  std::size_t samples = 0;
  Verdict verdict = Verdict::pass;
  std::string reason;
  std::vector<std::pair<std::string, Element>> witness;
  std::string witness_text;
  std::string detail;
  std::optional<std::string> value;
};

struct LawSuite {
  std::string id;
  std::string statement;
  bool needs_sqrt = false;
  bool needs_top = false;
  bool needs_total = false;
  bool needs_gamma = false;
  bool needs_boolean = false;
  bool needs_strict = false;
  std::vector<std::pair<std::string, Slot>> slots;
  std::function<Outcome(const LawContext&, const std::vector<Element>&)> check;
  /// Suites that look at the algebra as a whole instead of at tuples.
  std::function<LawReport(const LawContext&)> whole;
};

namespace detail {

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::optional<std::string> skip_reason(const LawSuite& s, const LawContext& ctx) {
  const Algebra& m = ctx.m();
  if (s.needs_sqrt && !ctx.root) return "no square root";
  if (s.needs_top && !m.has_top()) return "no top element";
  if (s.needs_total && !m.totally_ordered()) return "not totally ordered";
  if (s.needs_gamma && m.kind() != AlgebraKind::gamma) return "not an interval algebra";
  if (s.needs_boolean && !m.generalized_boolean()) return "not generalized Boolean";
  if (s.needs_strict && !ctx.strict) return "not strict";
  return std::nullopt;
}

inline std::string witness_text(const Algebra& m, const std::vector<std::pair<std::string, Element>>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? ", " : "") + w[i].first + "=" + m.format(w[i].second);
  return s.empty() ? "-" : s;
}

/// The law with (Sq1) checked first on every element argument when the
/// suite depends on the square root; errors raised during evaluation count
/// as violations.
inline Outcome evaluate(const LawSuite& s, const LawContext& ctx, const std::vector<Element>& args) {
  const Algebra& m = ctx.m();
  try {
    if (s.needs_sqrt)
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (s.slots[i].second != Slot::element) continue;
        if (!ctx.sq1_holds(args[i])) return "(Sq1) fails at " + s.slots[i].first + "=" + m.format(args[i]);
      }
    return s.check(ctx, args);
  } catch (const Error& e) {
    return std::string("evaluation error: ") + e.what();
  }
}

/// Moves each coordinate down the lattice toward 0 while the violation
/// persists.
inline std::vector<Element> shrink(const LawSuite& s, const LawContext& ctx, std::vector<Element> args) {
  const Algebra& m = ctx.m();
  bool improved = true;
  for (int round = 0; improved && round < 64; ++round) {
    improved = false;
    for (std::size_t i = 0; i < args.size(); ++i) {
      const auto& pool = s.slots[i].second == Slot::element ? ctx.elements : ctx.idempotents;
      std::vector<Element> below{m.zero()};
      for (auto k : stride_indices(pool.size(), 4096)) below.push_back(pool[k]);
      for (const auto& c : below) {
        if (c == args[i] || !m.leq(c, args[i])) continue;
        std::vector<Element> trial = args;
        trial[i] = c;
        if (evaluate(s, ctx, trial)) {
          args = std::move(trial);
          improved = true;
          break;
        }
      }
    }
  }
  return args;
}

}  // namespace detail

/// Exhaustive over the pools when the tuple count fits the budget, otherwise
/// budget.samples tuples: half from a stride walk of the tuple space, half
/// uniform picks seeded by seed ^ FNV-1a(suite id).
inline LawReport run_suite(const LawSuite& s, const LawContext& ctx) {
  LawReport rep;
  rep.suite = s.id;
  rep.algebra = ctx.m().name();
  if (auto why = detail::skip_reason(s, ctx)) {
    rep.verdict = LawReport::Verdict::skipped;
    rep.reason = *why;
    return rep;
  }
  if (s.whole) {
    LawReport w = s.whole(ctx);
    w.suite = rep.suite;
    w.algebra = rep.algebra;
    return w;
  }

  std::vector<const std::vector<Element>*> pools;
  std::uint64_t total = 1;
  for (const auto& [name, slot] : s.slots) {
    pools.push_back(slot == Slot::element ? &ctx.elements : &ctx.idempotents);
    total = detail::saturating_mul(total, pools.back()->size());
  }
  if (total == 0) {
    rep.verdict = LawReport::Verdict::skipped;
    rep.reason = "empty sample pool";
    return rep;
  }

  auto decode = [&](std::uint64_t k) {
    std::vector<Element> args;
    for (const auto* p : pools) {
      args.push_back((*p)[k % p->size()]);
      k /= p->size();
    }
    return args;
  };
  auto try_tuple = [&](const std::vector<Element>& args) {
    ++rep.samples;
    if (auto bad = detail::evaluate(s, ctx, args)) {
      const auto small = detail::shrink(s, ctx, args);
      auto again = detail::evaluate(s, ctx, small);
      if (!again) throw InvariantError("witness for " + s.id + " does not re-check");
      rep.verdict = LawReport::Verdict::fail;
      rep.detail = *again;
      for (std::size_t i = 0; i < small.size(); ++i) rep.witness.emplace_back(s.slots[i].first, small[i]);
      rep.witness_text = detail::witness_text(ctx.m(), rep.witness);
      return false;
    }
    return true;
  };

  if (total <= ctx.budget.exhaustive_tuples) {
    for (std::uint64_t k = 0; k < total; ++k)
      if (!try_tuple(decode(k))) return rep;
    return rep;
  }
  const std::size_t half = ctx.budget.samples / 2;
  for (auto k : detail::stride_indices(total, half))
    if (!try_tuple(decode(k))) return rep;
  std::mt19937_64 rng(ctx.seed ^ detail::fnv1a(s.id));
  for (std::size_t n = 0; n < ctx.budget.samples - half; ++n) {
    std::vector<Element> args;
    for (const auto* p : pools) args.push_back((*p)[std::uniform_int_distribution<std::size_t>(0, p->size() - 1)(rng)]);
    if (!try_tuple(args)) return rep;
  }
  return rep;
}

namespace detail {

using Args = std::vector<Element>;

inline Outcome require_law(bool ok, const std::string& what) {
  if (ok) return std::nullopt;
  return what;
}

inline Element arrow(const Algebra& m, const Element& a, const Element& x, const Element& y) {
  return m.oplus(m.complement_in(a, x), y);
}

inline bool strict_at(const Algebra& m, const Element& r0, const Element& b) {
  const Element rb = m.meet(r0, b);
  return m.complement_in(b, rb) == rb;
}

inline LawReport whole_report(std::size_t samples, bool ok, std::string detail = {}, std::optional<std::string> value = {}) {
  LawReport r;
  r.samples = samples;
  r.verdict = ok ? LawReport::Verdict::pass : LawReport::Verdict::fail;
  r.detail = std::move(detail);
  r.witness_text = ok ? "-" : r.detail;
  r.value = std::move(value);
  return r;
}

/// f(r(x)) = s(f(x)) for all sampled x, against closure of the image under s.
inline std::optional<std::string> home_case(const std::string& label, const std::vector<Element>& xs,
                                            const std::function<Element(const Element&)>& f,
                                            const std::function<Element(const Element&)>& r,
                                            const std::function<Element(const Element&)>& s,
                                            const std::function<bool(const Element&)>& in_image) {
  bool preserves = true;
  bool closed = true;
  for (const auto& x : xs) {
    const Element sfx = s(f(x));
    preserves = preserves && f(r(x)) == sfx;
    closed = closed && in_image(sfx);
  }
  if (preserves != closed)
    return label + ": preserves=" + (preserves ? "true" : "false") + " but closed=" + (closed ? "true" : "false");
  return std::nullopt;
}

inline LawSuite tuple_suite(std::string id, std::string statement, std::vector<std::pair<std::string, Slot>> slots,
                            std::function<Outcome(const LawContext&, const Args&)> check) {
  LawSuite s;
  s.id = std::move(id);
  s.statement = std::move(statement);
  s.slots = std::move(slots);
  s.check = std::move(check);
  return s;
}

inline LawSuite sqrt_suite(std::string id, std::string statement, std::vector<std::pair<std::string, Slot>> slots,
                           std::function<Outcome(const LawContext&, const Args&)> check) {
  LawSuite s = tuple_suite(std::move(id), std::move(statement), std::move(slots), std::move(check));
  s.needs_sqrt = true;
  return s;
}

inline LawSuite whole_suite(std::string id, std::string statement, bool needs_sqrt,
                            std::function<LawReport(const LawContext&)> whole) {
  LawSuite s;
  s.id = std::move(id);
  s.statement = std::move(statement);
  s.needs_sqrt = needs_sqrt;
  s.whole = std::move(whole);
  return s;
}

}  // namespace detail

/// The full catalog in reporting order.
inline std::vector<LawSuite> law_catalog() {
  using detail::Args;
  using detail::require_law;
  const std::pair<std::string, Slot> X{"x", Slot::element}, Y{"y", Slot::element}, Z{"z", Slot::element};
  const std::pair<std::string, Slot> A{"a", Slot::idempotent}, B{"b", Slot::idempotent};
  std::vector<LawSuite> out;

  out.push_back(detail::tuple_suite(
      "emv.e1.lattice", "(M;v,^,0) is a distributive lattice with least element 0", {X, Y, Z},
      [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        const Element &x = v[0], &y = v[1], &z = v[2];
        if (m.join(x, y) != m.join(y, x) || m.meet(x, y) != m.meet(y, x)) return "v or ^ not commutative";
        if (m.join(m.join(x, y), z) != m.join(x, m.join(y, z))) return "v not associative";
        if (m.meet(m.meet(x, y), z) != m.meet(x, m.meet(y, z))) return "^ not associative";
        if (m.join(x, m.meet(x, y)) != x || m.meet(x, m.join(x, y)) != x) return "absorption fails";
        if (m.meet(x, m.join(y, z)) != m.join(m.meet(x, y), m.meet(x, z))) return "distributivity fails";
        if (!m.leq(m.zero(), x)) return "0 is not least";
        return require_law(m.leq(x, y) == (m.join(x, y) == y), "x <= y disagrees with x v y = y");
      }));

  out.push_back(detail::tuple_suite(
      "emv.e2.monoid", "(M;(+),0) is a commutative monoid and idempotents form a sublattice", {X, Y, Z},
      [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        const Element &x = v[0], &y = v[1], &z = v[2];
        if (m.oplus(x, y) != m.oplus(y, x)) return "(+) not commutative";
        if (m.oplus(m.oplus(x, y), z) != m.oplus(x, m.oplus(y, z))) return "(+) not associative";
        if (m.oplus(x, m.zero()) != x) return "x (+) 0 != x";
        if (!m.leq(x, m.oplus(x, y))) return "x (+) y not above x";
        if (m.is_idempotent(x) && m.is_idempotent(y)) {
          if (!m.is_idempotent(m.join(x, y)) || !m.is_idempotent(m.meet(x, y))) return "idempotents not closed under v, ^";
          if (m.oplus(x, y) != m.join(x, y)) return "a (+) b != a v b on idempotents";
        }
        return std::nullopt;
      }));

  out.push_back(detail::tuple_suite(
      "emv.e3.local-mv", "([0,a];(+),lambda_a,0,a) is an MV-algebra", {A, X, Y},
      [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        const Element& a = v[0];
        const Element x = m.meet(v[1], a), y = m.meet(v[2], a);
        auto l = [&](const Element& t) { return m.complement_in(a, t); };
        if (!m.leq(m.oplus(x, y), a)) return "x (+) y leaves [0,a]";
        if (l(l(x)) != x) return "lambda_a(lambda_a(x)) != x";
        if (m.oplus(x, l(m.zero())) != a) return "x (+) lambda_a(0) != a";
        if (m.oplus(l(m.oplus(l(x), y)), y) != m.oplus(l(m.oplus(l(y), x)), x)) return "Lukasiewicz axiom fails";
        return require_law(m.leq(x, y) == (m.oplus(l(x), y) == a), "x <= y disagrees with lambda_a(x) (+) y = a");
      }));

  out.push_back(detail::tuple_suite("emv.e4.full", "every x lies below some idempotent", {X},
                                    [](const LawContext& c, const Args& v) -> Outcome {
                                      const Algebra& m = c.m();
                                      const Element a = m.cover(v[0]);
                                      return require_law(m.is_idempotent(a) && m.leq(v[0], a),
                                                         "cover(x) is not an idempotent above x");
                                    }));

  out.push_back(detail::tuple_suite("prop2.2.i", "a <= b, x <= a => lambda_a(x) = lambda_b(x) ^ a", {A, B, X},
                                    [](const LawContext& c, const Args& v) -> Outcome {
                                      const Algebra& m = c.m();
                                      const Element &b = v[1], a = m.meet(v[0], b), x = m.meet(v[2], a);
                                      return require_law(m.complement_in(a, x) == m.meet(m.complement_in(b, x), a),
                                                         "lambda_a(x) != lambda_b(x) ^ a");
                                    }));

  out.push_back(detail::tuple_suite("prop2.2.ii", "a <= b, x <= a => lambda_b(x) = lambda_a(x) (+) lambda_b(a)", {A, B, X},
                                    [](const LawContext& c, const Args& v) -> Outcome {
                                      const Algebra& m = c.m();
                                      const Element &b = v[1], a = m.meet(v[0], b), x = m.meet(v[2], a);
                                      return require_law(
                                          m.complement_in(b, x) == m.oplus(m.complement_in(a, x), m.complement_in(b, a)),
                                          "lambda_b(x) != lambda_a(x) (+) lambda_b(a)");
                                    }));

  out.push_back(detail::tuple_suite("prop2.2.iii", "a <= b => lambda_b(a) idempotent and lambda_a(a) = 0", {A, B},
                                    [](const LawContext& c, const Args& v) -> Outcome {
                                      const Algebra& m = c.m();
                                      const Element &b = v[1], a = m.meet(v[0], b);
                                      if (!m.is_idempotent(m.complement_in(b, a))) return "lambda_b(a) not idempotent";
                                      return require_law(m.complement_in(a, a) == m.zero(), "lambda_a(a) != 0");
                                    }));

  out.push_back(detail::tuple_suite(
      "lemma2.3.indep", "x (.) y = lambda_a(lambda_a(x) (+) lambda_a(y)) for every idempotent a >= x v y", {A, X, Y},
      [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        const Element &x = v[1], &y = v[2];
        const Element a = m.cover(m.join(x, y));
        const Element b = m.join(v[0], a);
        const Element p = m.odot_within(a, x, y);
        if (m.odot_within(b, x, y) != p) return "x (.) y depends on the idempotent";
        if (m.odot(x, y) != p) return "x (.) y disagrees with its definition";
        const Element lo = m.meet(x, y), hi = m.join(x, y);
        return require_law(m.odot(hi, m.complement_in(a, lo)) == m.odot(hi, m.complement_in(b, lo)),
                           "y (.) lambda_a(x) depends on the idempotent");
      }));

  {
    LawSuite s = detail::tuple_suite(
        "gamma.odot-shortcut", "x (.) y = (x + y - u) v 0 in Gamma(G,u)", {X, Y}, [](const LawContext& c, const Args& v) -> Outcome {
          const auto& g = dynamic_cast<const GammaAlgebra&>(c.m());
          const Carrier& k = g.carrier();
          const GroupElement d = k.subtract(k.add(v[0].value, v[1].value), g.top().value);
          const Element expect = Element::group(k.max(d, k.zero()));
          return require_law(g.odot_within(g.top(), v[0], v[1]) == expect, "lambda-defined product != (x+y-u) v 0");
        });
    s.needs_gamma = true;
    out.push_back(std::move(s));
  }

  out.push_back(detail::tuple_suite(
      "lemma3.2.i", "a <= b, x,y <= a => x ->_a y = (x ->_b y) ^ a", {A, B, X, Y},
      [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        const Element &b = v[1], a = m.meet(v[0], b), x = m.meet(v[2], a), y = m.meet(v[3], a);
        return require_law(detail::arrow(m, a, x, y) == m.meet(detail::arrow(m, b, x, y), a), "x ->_a y != (x ->_b y) ^ a");
      }));

  out.push_back(detail::tuple_suite("lemma3.2.ii", "x (.) y <= (x (.) x) v (y (.) y)", {X, Y},
                                    [](const LawContext& c, const Args& v) -> Outcome {
                                      const Algebra& m = c.m();
                                      const Element &x = v[0], &y = v[1];
                                      return require_law(m.leq(m.odot(x, y), m.join(m.odot(x, x), m.odot(y, y))),
                                                         "x (.) y exceeds (x (.) x) v (y (.) y)");
                                    }));

  out.push_back(detail::tuple_suite(
      "partial-add", "x + y = x (+) y when x (.) y = 0 is commutative, associative and cancellative", {X, Y, Z},
      [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        const Element &x = v[0], &y = v[1], &z = v[2];
        const auto xy = m.partial_add(x, y);
        if (xy != m.partial_add(y, x)) return "x + y not commutative";
        if (xy) {
          const auto xy_z = m.partial_add(*xy, z);
          if (xy_z) {
            const auto yz = m.partial_add(y, z);
            if (!yz) return "(x + y) + z defined but y + z is not";
            const auto x_yz = m.partial_add(x, *yz);
            if (!x_yz || *x_yz != *xy_z) return "x + y not associative";
          }
        }
        const auto xz = m.partial_add(x, z), yz = m.partial_add(y, z);
        return require_law(!(xz && yz && *xz == *yz && x != y), "x + z = y + z with x != y");
      }));

  out.push_back(detail::sqrt_suite("sq1", "r(x) (.) r(x) = x", {X},
                                   [](const LawContext&, const Args&) -> Outcome { return std::nullopt; }));

  out.push_back(detail::sqrt_suite(
      "sq2", "y (.) y <= x => y <= r(x)", {X, Y}, [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        const Element &x = v[0], rx = c.r(x);
        const Element window = m.join(m.join(x, c.r0), m.meet(v[1], m.oplus(x, c.r0)));
        for (const Element& y : {v[1], window})
          if (m.leq(m.odot(y, y), x) && !m.leq(y, rx)) return "y (.) y <= x but y not below r(x) at y=" + m.format(y);
        return std::nullopt;
      }));

  out.push_back(detail::sqrt_suite("prop3.2.i", "x <= x v r(0) <= r(x)", {X}, [](const LawContext& c, const Args& v) -> Outcome {
    const Algebra& m = c.m();
    const Element xr = m.join(v[0], c.r0);
    return require_law(m.leq(v[0], xr) && m.leq(xr, c.r(v[0])), "x v r(0) not below r(x)");
  }));

  out.push_back(detail::sqrt_suite("prop3.2.ii", "x <= y => r(x) <= r(y)", {X, Y}, [](const LawContext& c, const Args& v) -> Outcome {
    const Algebra& m = c.m();
    const Element lo = m.meet(v[0], v[1]);
    if (!m.leq(c.r(lo), c.r(v[1]))) return "r(x ^ y) not below r(y)";
    return require_law(!m.leq(v[0], v[1]) || m.leq(c.r(v[0]), c.r(v[1])), "r not monotone");
  }));

  out.push_back(detail::sqrt_suite("prop3.2.iii", "r(x) (.) r(y) <= r(x (.) y)", {X, Y},
                                   [](const LawContext& c, const Args& v) -> Outcome {
                                     const Algebra& m = c.m();
                                     return require_law(m.leq(m.odot(c.r(v[0]), c.r(v[1])), c.r(m.odot(v[0], v[1]))),
                                                        "r(x) (.) r(y) exceeds r(x (.) y)");
                                   }));

  out.push_back(detail::sqrt_suite("prop3.2.iv", "x ^ y <= r(x) (.) r(y)", {X, Y}, [](const LawContext& c, const Args& v) -> Outcome {
    const Algebra& m = c.m();
    return require_law(m.leq(m.meet(v[0], v[1]), m.odot(c.r(v[0]), c.r(v[1]))), "x ^ y exceeds r(x) (.) r(y)");
  }));

  out.push_back(detail::sqrt_suite(
      "prop3.2.v", "r(x) (.) r(y) <= x v y and x ^ lambda_a(x) <= r(0) for x <= a", {X, Y, A},
      [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        if (!m.leq(m.odot(c.r(v[0]), c.r(v[1])), m.join(v[0], v[1]))) return "r(x) (.) r(y) exceeds x v y";
        const Element a = m.join(v[2], m.cover(v[0]));
        return require_law(m.leq(m.meet(v[0], m.complement_in(a, v[0])), c.r0), "x ^ lambda_a(x) exceeds r(0)");
      }));

  out.push_back(detail::sqrt_suite("prop3.2.vi", "r(x) idempotent <=> r(x) = x", {X}, [](const LawContext& c, const Args& v) -> Outcome {
    const Algebra& m = c.m();
    const Element rx = c.r(v[0]);
    return require_law(m.is_idempotent(rx) == (rx == v[0]), "r(x) idempotent disagrees with r(x) = x");
  }));

  out.push_back(detail::sqrt_suite("prop3.2.vii", "r(x ^ y) = r(x) ^ r(y)", {X, Y}, [](const LawContext& c, const Args& v) -> Outcome {
    const Algebra& m = c.m();
    return require_law(c.r(m.meet(v[0], v[1])) == m.meet(c.r(v[0]), c.r(v[1])), "r(x ^ y) != r(x) ^ r(y)");
  }));

  out.push_back(detail::sqrt_suite(
      "prop3.2.viii", "r_b(x) = r(x) ^ b is a square root on [0,b] with r_b(b) = b", {B, X, Y},
      [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        const Element& b = v[0];
        const Element x = m.meet(v[1], b), y = m.meet(v[2], b);
        auto rb = [&](const Element& t) { return m.meet(c.r(t), b); };
        if (rb(b) != b) return "r_b(b) != b";
        if (m.odot_within(b, rb(x), rb(x)) != x) return "r_b(x) (.) r_b(x) != x";
        return require_law(!m.leq(m.odot_within(b, y, y), x) || m.leq(y, rb(x)), "(Sq2) fails for r_b");
      }));

  out.push_back(detail::sqrt_suite("prop3.2.ix", "y <= r(x) (.) r(y) => y <= x", {X, Y}, [](const LawContext& c, const Args& v) -> Outcome {
    const Algebra& m = c.m();
    return require_law(!m.leq(v[1], m.odot(c.r(v[0]), c.r(v[1]))) || m.leq(v[1], v[0]), "y <= r(x) (.) r(y) but not y <= x");
  }));

  out.push_back(detail::sqrt_suite(
      "prop3.2.x", "r(x), r(y) <= b => r(x) ->_b r(y) = r(x ->_b y) ^ b", {B, X, Y},
      [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        const Element rx = c.r(v[1]), ry = c.r(v[2]);
        const Element b = m.join(v[0], m.cover(m.join(rx, ry)));
        return require_law(detail::arrow(m, b, rx, ry) == m.meet(c.r(detail::arrow(m, b, v[1], v[2])), b),
                           "r(x) ->_b r(y) != r(x ->_b y) ^ b");
      }));

  {
    LawSuite s = detail::sqrt_suite("prop3.2.xi", "(+) = v => r = id", {X}, [](const LawContext& c, const Args& v) -> Outcome {
      return require_law(c.r(v[0]) == v[0], "r(x) != x on a generalized Boolean algebra");
    });
    s.needs_boolean = true;
    out.push_back(std::move(s));
  }

  out.push_back(detail::sqrt_suite(
      "prop3.2.xii", "r(x v y) = r(x) v r(y), r(x (.) y) = (r(x) (.) r(y)) v r(0)", {X, Y},
      [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        const Element &x = v[0], &y = v[1];
        if (c.r(m.join(x, y)) != m.join(c.r(x), c.r(y))) return "r(x v y) != r(x) v r(y)";
        if (c.r(m.odot(x, y)) != m.join(m.odot(c.r(x), c.r(y)), c.r0)) return "r(x (.) y) != (r(x) (.) r(y)) v r(0)";
        return require_law(!m.leq(c.r0, x) || c.r(m.odot(x, x)) == x, "r(0) <= x but r(x (.) x) != x");
      }));

  out.push_back(detail::sqrt_suite(
      "prop3.2.xiii", "a >= r(r(0)) => (r(0) ->_a 0) (.) (r(0) ->_a 0) idempotent", {A},
      [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        const Element a = m.join(v[0], m.cover(c.r(c.r0)));
        const Element t = detail::arrow(m, a, c.r0, m.zero());
        return require_law(m.is_idempotent(m.odot(t, t)), "(r(0) ->_a 0)^2 not idempotent");
      }));

  out.push_back(detail::sqrt_suite(
      "prop3.2.xiv", "x <= r(x (.) x) and r(x (.) x)^2 = r(x)^4", {X}, [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        const Element& x = v[0];
        const Element rxx = c.r(m.odot(x, x)), rx = c.r(x);
        if (!m.leq(x, rxx)) return "x not below r(x (.) x)";
        const Element sq = m.odot(rx, rx);
        return require_law(m.odot(rxx, rxx) == m.odot(sq, sq), "r(x (.) x)^2 != r(x)^4");
      }));

  out.push_back(detail::sqrt_suite(
      "rmkcor.bounds", "x v r(0) = r(x (.) x) <= r(x) <= x (+) r(0); r(a) = a v r(0) on idempotents", {X},
      [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        const Element &x = v[0], rx = c.r(x);
        const Element lo = m.join(x, c.r0);
        if (c.r(m.odot(x, x)) != lo) return "r(x (.) x) != x v r(0)";
        if (!m.leq(lo, rx) || !m.leq(rx, m.oplus(x, c.r0))) return "r(x) outside [x v r(0), x (+) r(0)]";
        return require_law(!m.is_idempotent(x) || rx == lo, "r(a) != a v r(0) for idempotent a");
      }));

  out.push_back(detail::sqrt_suite(
      "prop3.5.i", "a >= r(r(0)), x => r(x ->_a 0) = r(x) ->_a r(0)", {X, A}, [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        const Element a = m.join(v[1], m.cover(m.join(c.r(c.r0), v[0])));
        return require_law(c.r(detail::arrow(m, a, v[0], m.zero())) == detail::arrow(m, a, c.r(v[0]), c.r0),
                           "r(x ->_a 0) != r(x) ->_a r(0)");
      }));

  out.push_back(detail::sqrt_suite(
      "prop3.5.ii", "r(x (+) y) = (r(x) (.) lambda_a(r(0))) (+) r(y) <= r(x) (+) r(y)", {X, Y, A},
      [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        const Element &x = v[0], &y = v[1];
        const Element a = m.join(v[2], m.cover(m.join(c.r(c.r0), m.join(x, y))));
        const Element lhs = c.r(m.oplus(x, y));
        if (lhs != m.oplus(m.odot(c.r(x), m.complement_in(a, c.r0)), c.r(y))) return "r(x (+) y) != (r(x) (.) lambda_a(r(0))) (+) r(y)";
        return require_law(m.leq(lhs, m.oplus(c.r(x), c.r(y))), "r(x (+) y) exceeds r(x) (+) r(y)");
      }));

  out.push_back(detail::whole_suite("thm3.5.iff", "(+) = v <=> r(0) = 0", true, [](const LawContext& c) {
    const Algebra& m = c.m();
    bool boolean = true;
    std::size_t n = 0;
    for (const auto& x : c.elements) {
      ++n;
      if (!m.is_idempotent(x)) {
        boolean = false;
        break;
      }
    }
    const bool zero = c.r0 == m.zero();
    return detail::whole_report(n, boolean == zero, "generalized Boolean=" + std::string(boolean ? "true" : "false") +
                                                        " but r(0)=" + m.format(c.r0));
  }));

  {
    auto sq = [](const LawContext& c, const Element& x) {
      const Algebra& m = c.m();
      return m.complement_in(m.top(), c.r(m.complement_in(m.top(), x)));
    };
    LawSuite i = detail::sqrt_suite("lemsqMV.i", "s(x')' (+) s(x')' = x and s(x')' <= x <= s(x)", {X},
                                    [sq](const LawContext& c, const Args& v) -> Outcome {
                                      const Algebra& m = c.m();
                                      const Element t = sq(c, v[0]);
                                      if (m.oplus(t, t) != v[0]) return "s(x')' (+) s(x')' != x";
                                      return require_law(m.leq(t, v[0]) && m.leq(v[0], c.r(v[0])), "x outside [s(x')', s(x)]");
                                    });
    i.needs_top = true;
    out.push_back(std::move(i));
    LawSuite iii = detail::sqrt_suite(
        "lemsqMV.iii", "x = s(x')' or x = s(x) => x Boolean; x not Boolean => s(x')' < x < s(x)", {X},
        [sq](const LawContext& c, const Args& v) -> Outcome {
          const Algebra& m = c.m();
          const Element &x = v[0], t = sq(c, x), sx = c.r(x);
          if ((x == t || x == sx) && !m.is_idempotent(x)) return "fixed point of s or s(x')' is not Boolean";
          return require_law(m.is_idempotent(x) || (t != x && x != sx), "non-Boolean x not strictly between s(x')' and s(x)");
        });
    iii.needs_top = true;
    out.push_back(std::move(iii));
    LawSuite p37 = detail::sqrt_suite("prop3.7", "(s(x') (.) s(x'))' = s(x) (.) s(x)", {X}, [](const LawContext& c, const Args& v) -> Outcome {
      const Algebra& m = c.m();
      const Element u = m.top();
      const Element sx1 = c.r(m.complement_in(u, v[0])), sx = c.r(v[0]);
      return require_law(m.complement_in(u, m.odot(sx1, sx1)) == m.odot(sx, sx), "(s(x') (.) s(x'))' != s(x) (.) s(x)");
    });
    p37.needs_top = true;
    out.push_back(std::move(p37));
  }

  out.push_back(detail::whole_suite("def3.9.strict", "s_b(0) = lambda_b(s_b(0)) for all idempotents b >= s(0)", true,
                                    [](const LawContext& c) {
                                      return detail::whole_report(c.idempotents.size(), true, {}, c.strict ? "true" : "false");
                                    }));

  out.push_back(detail::whole_suite("thm3.10.top", "strict => top element exists", true, [](const LawContext& c) {
    return detail::whole_report(1, !c.strict || c.m().has_top(), "strict square root on an algebra without top",
                                c.m().has_top() ? "true" : "false");
  }));

  out.push_back(detail::sqrt_suite(
      "corstrictN", "s(0) <= a < b, s_b strict => s_a not strict", {A, B}, [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        const Element floor = m.cover(c.r0);
        const Element b = m.join(v[1], floor);
        const Element a = m.meet(m.join(v[0], floor), b);
        if (a == b || !detail::strict_at(m, c.r0, b)) return std::nullopt;
        return require_law(!detail::strict_at(m, c.r0, a), "s_a and s_b both strict");
      }));

  {
    LawSuite s = detail::whole_suite("prop4.1.form", "totally ordered: r = id with r(0) = 0, else r(x) = (x+u)/2 and strict",
                                     true, [](const LawContext& c) {
                                       const Algebra& m = c.m();
                                       std::size_t n = 0;
                                       for (const auto& x : c.elements) {
                                         ++n;
                                         const Element rx = c.r(x);
                                         const auto h = m.half_sum(x, m.top());
                                         const bool ok = c.r0 == m.zero() ? rx == x : (h && rx == *h);
                                         if (!ok) return detail::whole_report(n, false, "r(x) off the expected form at x=" + m.format(x));
                                       }
                                       if (c.r0 != m.zero() && !c.strict) return detail::whole_report(n, false, "r(0) > 0 but not strict");
                                       return detail::whole_report(n, true, {}, c.r0 == m.zero() ? "identity" : "affine");
                                     });
    s.needs_total = true;
    s.needs_top = true;
    out.push_back(std::move(s));
  }

  {
    LawSuite s = detail::sqrt_suite("thm4.3.affine", "strict => r(x) = (x+u)/2", {X}, [](const LawContext& c, const Args& v) -> Outcome {
      const Algebra& m = c.m();
      const auto h = m.half_sum(v[0], m.top());
      return require_law(h && *h == c.r(v[0]), "r(x) != (x+u)/2");
    });
    s.needs_top = true;
    s.needs_strict = true;
    out.push_back(std::move(s));
  }

  {
    LawSuite s = detail::sqrt_suite("thm4.3.1.general", "r(x) = (x ^ w) v ((x ^ w') + w')/2, w = r(0)' (.) r(0)'", {X},
                                    [](const LawContext& c, const Args& v) -> Outcome {
                                      const Algebra& m = c.m();
                                      return require_law(general_form_at(m, c.r0, m.top(), v[0]) == c.r(v[0]),
                                                         "r(x) differs from the w-formula");
                                    });
    s.needs_top = true;
    out.push_back(std::move(s));
  }

  out.push_back(detail::sqrt_suite(
      "coEMV.general", "a >= r(r(0)), x => r(x) = (x ^ w_a) v ((x ^ lambda_a(w_a)) + lambda_a(w_a))/2", {X, A},
      [](const LawContext& c, const Args& v) -> Outcome {
        const Algebra& m = c.m();
        const Element a = m.join(v[1], m.cover(m.join(c.r(c.r0), v[0])));
        return require_law(general_form_at(m, c.r0, a, v[0]) == c.r(v[0]), "r(x) differs from the w_a-formula");
      }));

  out.push_back(detail::whole_suite(
      "corHome.closure", "f preserves square roots <=> Im(f) closed under s", true, [](const LawContext& c) {
        const Algebra& m = c.m();
        std::size_t n = 0;
        auto id = [](const Element& x) { return x; };
        auto rf = [&](const Element& x) { return c.r(x); };
        // Identity, and the inclusion of the idempotents, which carry the identity root.
        auto bad = detail::home_case("identity", c.elements, id, rf, rf, [](const Element&) { return true; });
        n += c.elements.size();
        if (!bad) {
          bad = detail::home_case("idempotent inclusion", c.idempotents, id, id, rf,
                                  [&](const Element& y) { return m.is_idempotent(y); });
          n += c.idempotents.size();
        }
        if (!bad) {
          const std::vector<Element> zero{m.zero()};
          bad = detail::home_case("inclusion of {0}", zero, id, id, rf, [&](const Element& y) { return y == m.zero(); });
          ++n;
        }
        if (const auto* p = dynamic_cast<const ProductAlgebra*>(&m); p && !bad) {
          for (std::size_t i = 0; i < p->factors().size() && !bad; ++i) {
            const Algebra& f = *p->factors()[i];
            const auto v = sqrt_build(f, c.budget);
            if (!v.exists) {
              bad = "factor " + std::to_string(i + 1) + " has no square root";
              break;
            }
            auto proj = [i](const Element& x) { return x.items[i]; };
            auto s = [&](const Element& y) { return apply(f, *v.root, y); };
            bad = detail::home_case("projection " + std::to_string(i + 1), c.elements, proj, rf, s,
                                    [](const Element&) { return true; });
            n += c.elements.size();
          }
        }
        return detail::whole_report(n, !bad, bad.value_or(""));
      }));

  out.push_back(detail::whole_suite("def4.1.div", "for all x, n: exists y with n.y = x and (n-1).y (.) y = 0", false,
                                    [](const LawContext& c) {
                                      const Algebra& m = c.m();
                                      Budget b = c.budget;
                                      b.max_elements = std::min<std::size_t>(b.max_elements, 512);
                                      const DivisibilityReport d = divisible_check(m, 12, b);
                                      std::string v = d.divisible ? "true" : "false (x=" + m.format(*d.x) + ", n=" + std::to_string(d.n) + ")";
                                      return detail::whole_report(d.checked, true, {}, v);
                                    }));

  out.push_back(detail::whole_suite("atomless", "for all x > 0 exists 0 < z < x with x (.) lambda_a(z) <= z", false,
                                    [](const LawContext& c) {
                                      const Algebra& m = c.m();
                                      Budget b = c.budget;
                                      b.max_elements = std::min<std::size_t>(b.max_elements, 512);
                                      const AtomlessReport a = strongly_atomless_check(m, b);
                                      std::string v = a.holds ? "true" : "false (x=" + m.format(*a.x) + ")";
                                      return detail::whole_report(a.checked, true, {}, v);
                                    }));
  return out;
}

inline const LawSuite* find_suite(const std::vector<LawSuite>& catalog, std::string_view id) {
  for (const auto& s : catalog)
    if (s.id == id) return &s;
  return nullptr;
}

struct CatalogSummary {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t skipped = 0;
};

inline std::vector<LawReport> run_catalog(const LawContext& ctx, std::string_view only = {}) {
  const auto catalog = law_catalog();
  std::vector<LawReport> out;
  if (!only.empty()) {
    const LawSuite* s = find_suite(catalog, only);
    if (!s) throw DomainError("unknown suite '" + std::string(only) + "'");
    out.push_back(run_suite(*s, ctx));
    return out;
  }
  for (const auto& s : catalog) out.push_back(run_suite(s, ctx));
  return out;
}

inline CatalogSummary summarize(const std::vector<LawReport>& reports) {
  CatalogSummary s;
  for (const auto& r : reports) {
    switch (r.verdict) {
      case LawReport::Verdict::pass: ++s.pass; break;
      case LawReport::Verdict::fail: ++s.fail; break;
      case LawReport::Verdict::skipped: ++s.skipped; break;
    }
  }
  return s;
}

inline std::string verdict_text(const LawReport& r) {
  switch (r.verdict) {
    case LawReport::Verdict::pass: return "pass";
    case LawReport::Verdict::fail: return "fail";
    case LawReport::Verdict::skipped: return "skipped(" + r.reason + ")";
  }
  return "?";
}

inline std::string to_line(const LawReport& r) {
  std::string s = "suite=" + r.suite + "\talgebra=" + r.algebra + "\tsamples=" + std::to_string(r.samples) +
                  "\tverdict=" + verdict_text(r) + "\twitness=" + (r.witness_text.empty() ? "-" : r.witness_text);
  if (r.value) s += "\tvalue=" + *r.value;
  if (r.verdict == LawReport::Verdict::fail && !r.detail.empty()) s += "\tdetail=" + r.detail;
  return s;
}

inline nlohmann::json to_json(const LawReport& r) {
  nlohmann::json j = {{"suite", r.suite},
                      {"algebra", r.algebra},
                      {"samples", r.samples},
                      {"verdict", verdict_text(r)},
                      {"witness", r.witness_text.empty() ? "-" : r.witness_text}};
  if (r.value) j["value"] = *r.value;
  if (r.verdict == LawReport::Verdict::fail) j["detail"] = r.detail;
  return j;
}

}  // namespace emv
