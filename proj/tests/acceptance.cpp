// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

#include "emvkit/emvkit.hpp"
#include "emvkit/mutation.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

using namespace emv;

namespace {

struct Result {
  bool ok = true;
  std::string detail;
};

/// Records the first failed expectation.
class Check {
 public:
  void expect(bool cond, const std::string& what) {
    if (!cond && ok_) {
      ok_ = false;
      first_ = what;
    }
  }
  Result done(const std::string& summary) const { return {ok_, ok_ ? summary : first_}; }

 private:
  bool ok_ = true;
  std::string first_;
};

SquareRoot built(const AlgebraPtr& m, const Budget& b = {}) {
  auto v = sqrt_build(*m, b);
  if (!v.exists) throw std::runtime_error(m->name() + " has no square root: " + v.witness.message);
  return *v.root;
}

std::string chain_name(long n) { return "chain(" + std::to_string(n) + ")"; }

/// Multisets of chain sizes n >= 1 with at least two factors and at most
/// `limit` elements in the product.
void chain_products(long limit, long prod, long start, std::vector<long>& acc, std::vector<std::vector<long>>& out) {
  if (acc.size() >= 2) out.push_back(acc);
  for (long n = start; prod * (n + 1) <= limit; ++n) {
    acc.push_back(n);
    chain_products(limit, prod * (n + 1), n, acc, out);
    acc.pop_back();
  }
}

Result criterion1() {
  Check c;
  for (long n = 2; n <= 8; ++n) {
    auto m = make_algebra(chain_name(n));
    const auto v = sqrt_build(*m);
    c.expect(!v.exists, chain_name(n) + " reported a square root");
    c.expect(recheck(*m, v), chain_name(n) + " witness does not re-check");
  }
  std::vector<std::vector<long>> products;
  std::vector<long> acc;
  chain_products(4096, 1, 1, acc, products);
  std::size_t with_chain = 0;
  for (const auto& ns : products) {
    const bool has_big = std::any_of(ns.begin(), ns.end(), [](long n) { return n >= 2; });
    std::string d = "product(";
    for (std::size_t i = 0; i < ns.size(); ++i) d += (i ? "," : "") + chain_name(ns[i]);
    d += ")";
    auto m = make_algebra(d);
    const auto v = sqrt_build(*m);
    if (has_big) {
      ++with_chain;
      c.expect(!v.exists, d + " reported a square root");
    } else {
      c.expect(v.exists && v.root->form == SquareRoot::Form::identity, d + " is Boolean but got no identity root");
    }
    long size = 1;
    for (long n : ns) size *= n + 1;
    if (size <= 64) {
      c.expect(v.exists == oracle::chain_product_has_sqrt(ns), d + " disagrees with the brute-force oracle");
      if (!v.exists) c.expect(recheck(*m, v), d + " witness does not re-check");
    }
  }
  for (unsigned k = 0; k <= 6; ++k) {
    auto m = make_algebra("bool(" + std::to_string(k) + ")");
    const auto v = sqrt_build(*m);
    c.expect(v.exists && v.root->form == SquareRoot::Form::identity, m->name() + " root is not the identity");
    if (v.exists) c.expect(verify_sqrt(*m, *v.root).ok, m->name() + " identity fails verification");
  }
  return c.done("chains 2..8 and " + std::to_string(with_chain) + " chain products have no root; bool(0..6) identity");
}

Result criterion2() {
  Check c;
  Budget b;
  b.max_denom_exp = 8;
  auto d = make_algebra("dyadic");
  const SquareRoot r = built(d, b);
  c.expect(r.form == SquareRoot::Form::affine, "dyadic root is not affine");
  const auto xs = d->enumerate(b).elements;
  c.expect(xs.size() == 257, "dyadic truncation at exponent 8 has " + std::to_string(xs.size()) + " elements");
  for (long i = 0; i <= 256; ++i) {
    const oracle::Frac x(i, 256);
    const Element rx = apply(*d, r, d->parse_element(oracle::text(x)));
    c.expect(d->format(rx) == oracle::text((x + oracle::Frac(1)) / 2), "r(" + oracle::text(x) + ") differs from (x+1)/2");
  }
  const auto rep = verify_sqrt(*d, r, b);
  c.expect(rep.ok, "dyadic: " + rep.failure);
  c.expect(is_strict(*d, r, b).strict, "dyadic root is not strict");
  auto q = make_algebra("rational");
  const SquareRoot rq = built(q, b);
  const auto qrep = verify_sqrt(*q, rq, b);
  c.expect(qrep.ok, "rational: " + qrep.failure);
  c.expect(is_strict(*q, rq, b).strict, "rational root is not strict");
  return c.done("affine root verified on 257 dyadics (" + std::to_string(rep.checked) + " probes); strict");
}

Result criterion3() {
  Check c;
  for (long p : {3, 5, 7, 9}) {
    auto m = make_algebra("padic(" + std::to_string(p) + ")");
    const auto v = sqrt_build(*m);
    c.expect(!v.exists, m->name() + " reported a square root");
    c.expect(v.witness.kind == Witness::Kind::not_closed && m->format(v.witness.x) == oracle::text(oracle::Frac(2, p)),
             m->name() + " witness is not 2/p");
    c.expect(recheck(*m, v), m->name() + " witness does not re-check");
    const oracle::Frac half = (oracle::Frac(2, p) + oracle::Frac(1)) / 2;
    c.expect(!oracle::power_of_factors(half.d, p), m->name() + " oracle finds (x+1)/2 in the algebra");
  }
  for (long p : {2, 4, 6, 8}) {
    auto m = make_algebra("padic(" + std::to_string(p) + ")");
    Budget b;
    b.max_denom_exp = 3;
    const auto v = sqrt_build(*m, b);
    c.expect(v.exists, m->name() + " reported no square root");
    if (!v.exists) continue;
    c.expect(verify_sqrt(*m, *v.root, b).ok, m->name() + " root fails verification");
    c.expect(is_strict(*m, *v.root, b).strict, m->name() + " root is not strict");
  }
  return c.done("odd p: witness 2/p; even p: strict root");
}

Result criterion4() {
  Check c;
  auto ch = make_algebra("chang");
  const auto v = sqrt_build(*ch);
  c.expect(!v.exists && v.witness.kind == Witness::Kind::no_max, "chang: no no-max witness");
  c.expect(ch->format(v.witness.x) == "c(0,0)", "chang witness is not at (0,0)");
  c.expect(v.witness.chain.size() >= 8, "chang chain shorter than 8");
  for (std::size_t k = 0; k < v.witness.chain.size(); ++k) {
    const auto& y = std::get<Lex>(v.witness.chain[k].value);
    const oracle::LexPair o{static_cast<long>(y.hi), static_cast<long>(y.lo)};
    c.expect(oracle::lex_odot(o, o) <= oracle::LexPair{0, 0}, "chain element squares above (0,0)");
    if (k) c.expect(std::get<Lex>(v.witness.chain[k - 1].value).lo < y.lo, "chain is not increasing");
  }
  c.expect(recheck(*ch, v), "chang witness does not re-check");
  auto q = make_algebra("quad");
  const auto w = sqrt_build(*q);
  c.expect(!w.exists && w.witness.kind == Witness::Kind::not_closed, "quad: no membership witness");
  c.expect(recheck(*q, w), "quad witness does not re-check");
  const auto& g = std::get<Quad>(w.witness.x.value);
  const long m = static_cast<long>(g.a + g.b), n = static_cast<long>(g.b);
  c.expect(!oracle::quad_half_plus_one_exists(m, n), "oracle finds (x+1)/2 in Z[alpha]");
  return c.done("chang chain of " + std::to_string(v.witness.chain.size()) + "; quad: " + w.witness.message);
}

Result criterion5() {
  Check c;
  const unsigned e = 5;
  std::size_t points = 0;
  for (unsigned k = 1; k <= 3; ++k) {
    auto m = make_algebra("product(bool(" + std::to_string(k) + "),dyadic)");
    Budget b;
    b.max_denom_exp = e;
    const SquareRoot r = built(m, b);
    c.expect(r.form == SquareRoot::Form::general, m->name() + " root is not in general form");
    const auto roots = oracle::bool_dyadic_roots(k, e);
    c.expect(roots.size() == m->enumerate(b).elements.size(), m->name() + ": oracle misses elements");
    for (const auto& [x, y] : roots) {
      ++points;
      const std::string lit = oracle::bool_dyadic_text(x);
      c.expect(m->format(apply(*m, r, m->parse_element(lit))) == oracle::bool_dyadic_text(y), m->name() + " differs at " + lit);
    }
  }
  return c.done("general form equals brute force on " + std::to_string(points) + " points");
}

Result criterion6() {
  Check c;
  std::size_t runs = 0;
  auto run = [&](const std::string& d, const Budget& b) {
    auto m = make_algebra(d);
    std::optional<RootFn> root;
    if (auto v = sqrt_build(*m, b); v.exists) root = root_function(m, *v.root);
    for (const auto& r : run_catalog(make_context(m, root, b))) {
      ++runs;
      c.expect(r.verdict != LawReport::Verdict::fail, to_line(r));
    }
  };
  Budget finite;
  finite.exhaustive_tuples = std::size_t{1} << 18;
  for (const std::string d : {"chain(1)", "chain(2)", "chain(3)", "chain(4)", "chain(5)", "chain(6)", "chain(7)", "chain(8)",
                              "bool(0)", "bool(1)", "bool(2)", "bool(3)", "bool(4)", "product(chain(1),chain(2))",
                              "product(chain(2),chain(3))", "product(chain(1),chain(1),chain(2))", "product(bool(2),chain(4))"})
    run(d, finite);
  for (const std::string d : {"dyadic", "rational", "quad", "chang", "padic(6)", "product(bool(1),dyadic)", "finsubsets",
                              "sum(chain(1))", "product(finsubsets,dyadic)"})
    run(d, Budget{});
  std::size_t flipped = 0;
  const auto faults = mutation_self_test();
  for (const auto& f : faults) {
    if (f.failed_suites > 0) ++flipped;
    c.expect(f.failed_suites > 0, "fault not detected: " + f.label);
  }
  c.expect(faults.size() == 20, "expected 20 faults");
  return c.done(std::to_string(runs) + " suite runs without failure; mutation " + std::to_string(flipped) + "/" +
                std::to_string(faults.size()));
}

Result criterion7() {
  Check c;
  Budget b;
  b.max_denom_exp = 3;
  b.max_set = 4;
  b.max_support = 2;
  b.max_denominator = 6;
  using Tag = Classification::Tag;
  const std::vector<std::pair<std::string, Tag>> cases{
      {"finsubsets", Tag::generalized_boolean},  {"bool(3)", Tag::generalized_boolean},
      {"chain(1)", Tag::generalized_boolean},    {"sum(chain(1))", Tag::generalized_boolean},
      {"dyadic", Tag::strict},                   {"rational", Tag::strict},
      {"padic(4)", Tag::strict},                 {"product(dyadic,rational)", Tag::strict},
      {"product(bool(2),dyadic)", Tag::product}, {"product(bool(1),rational)", Tag::product},
      {"product(finsubsets,dyadic)", Tag::product}, {"product(chain(1),padic(6))", Tag::product}};
  std::size_t decomposed = 0;
  for (const auto& [d, tag] : cases) {
    auto m = make_algebra(d);
    const SquareRoot r = built(m, b);
    const Classification cl = classify(*m, r, b);
    c.expect(cl.tag == tag, d + " classified as " + cl.text);
    if (tag != Tag::product) continue;
    const Decomposition dec = decompose(*m, r, b);
    const auto rep = verify_decomposition(*m, r, dec, b);
    c.expect(rep.ok, d + ": " + rep.failure);
    for (const auto& x : m->enumerate(b).elements) {
      const auto [m1, m2] = dec.split(*m, x);
      c.expect(dec.recompose(*m, m1, m2) == x, d + ": recomposition fails at " + m->format(x));
    }
    ++decomposed;
  }
  return c.done("12 tags match; " + std::to_string(decomposed) + " decompositions verified");
}

Result criterion8() {
  Check c;
  for (const std::string d : {"finsubsets", "product(finsubsets,dyadic)"}) {
    auto m = make_algebra(d);
    auto n = represent_top(m);
    Budget b;
    b.max_set = 4;
    b.max_denom_exp = 3;
    const LawContext ctx = make_context(n, std::optional<RootFn>{}, b);
    for (const std::string id : {"emv.e1.lattice", "emv.e2.monoid", "emv.e3.local-mv", "emv.e4.full"})
      for (const auto& r : run_catalog(ctx, id)) c.expect(r.verdict == LawReport::Verdict::pass, d + " N: " + to_line(r));
    const SquareRoot r = built(m, b);
    const SquareRoot big = extend_sqrt(*n, r, b);
    c.expect(verify_sqrt(*n, big, b).ok, d + ": extension is not a square root on N");
    const SquareRoot back = restrict_sqrt(*n, big, b);
    for (const auto& x : m->enumerate(b).elements)
      c.expect(apply(*m, back, x) == apply(*m, r, x), d + ": restriction differs at " + m->format(x));
    for (unsigned s = 1; s <= 5; ++s)
      for (unsigned e = 0; e <= 2; ++e) {
        Budget t;
        t.max_set = s;
        t.max_denom_exp = e;
        const auto rep = check_ideal(*n, t);
        c.expect(rep.n_size == 2 * rep.m_size, d + ": |N| != 2|M| at max_set=" + std::to_string(s));
        c.expect(rep.ideal && rep.maximal, d + ": " + rep.failure);
      }
  }
  return c.done("N passes the EMV suites; extend/restrict round-trips; |N|=2|M|");
}

Result criterion9() {
  Check c;
  Budget b;
  b.max_denom_exp = 4;
  b.max_denominator = 8;
  auto p = make_algebra("product(bool(1),dyadic)");
  auto t = make_algebra("product(bool(1),dyadic,rational)");
  auto q = make_algebra("rational");
  std::vector<Homomorphism> homs{projection_hom(p, 0), projection_hom(p, 1), restriction_hom(t, {1, 2}),
                                 restriction_hom(t, {0, 1}), identity_hom(p), identity_hom(q), collapse_hom(p),
                                 collapse_hom(q)};
  for (const auto& f : homs) {
    c.expect(f.surjective, f.label + " is not surjective");
    const auto hr = verify_homomorphism(f, b);
    c.expect(hr.ok, f.label + ": " + hr.failure);
    const auto pr = preserves_sqrt(f, built(f.source, b), built(f.target, b), b);
    c.expect(pr.preserves && pr.consistent(), f.label + " does not preserve the square root");
    const auto img = hom_image_sqrt(f, built(f.source, b), b);
    c.expect(img.check.ok, f.label + ": image root " + img.check.failure);
  }
  const Homomorphism emb = boolean_into_rational();
  c.expect(verify_homomorphism(emb, b).ok, "embedding is not a homomorphism");
  const auto pr = preserves_sqrt(emb, built(emb.source, b), built(emb.target, b), b);
  c.expect(!pr.preserves && !pr.image_closed, "embedding reported preserving");
  return c.done(std::to_string(homs.size()) + " surjections preserve roots; embedding does not");
}

Result criterion10() {
  Check c;
  Budget b;
  auto q = make_algebra("rational");
  const auto qd = divisible_check(*q, 12, b);
  c.expect(qd.divisible, "rational is not divisible at " + (qd.x ? q->format(*qd.x) : "?") + ", n=" + std::to_string(qd.n));
  c.expect(is_strict(*q, built(q, b), b).strict, "rational root is not strict");
  auto d = make_algebra("dyadic");
  const auto dd = divisible_check(*d, 12, b);
  c.expect(!dd.divisible && dd.x && d->format(*dd.x) == "1" && dd.n == 3, "dyadic divisibility does not fail at (1,3)");
  c.expect(is_strict(*d, built(d, b), b).strict, "dyadic root is not strict");
  return c.done("rational divisible and strict; dyadic strict, not divisible at x=1, n=3");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double limit;  // seconds; 0 for none
    std::function<Result()> run;
  };
  const std::vector<Criterion> criteria{{1, 10, criterion1}, {2, 5, criterion2}, {3, 5, criterion3},
                                        {4, 2, criterion4},  {5, 30, criterion5}, {6, 0, criterion6},
                                        {7, 60, criterion7}, {8, 30, criterion8}, {9, 5, criterion9},
                                        {10, 5, criterion10}};
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Result o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && cr.limit > 0 && secs > cr.limit) o = {false, "took longer than " + std::to_string(cr.limit) + " s"};
    if (!o.ok) ++failed;
    char head[96];
    std::snprintf(head, sizeof head, "criterion %2d: %s (%.2f s", cr.id, o.ok ? "PASS" : "FAIL", secs);
    std::cout << head << (cr.limit > 0 ? ", limit " + std::to_string(static_cast<int>(cr.limit)) + " s" : "") << ") "
              << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
