#pragma once

// Test-side reference computations on machine integers.  Nothing here uses
// the library's arithmetic; results are compared through formatted text.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using i64 = std::int64_t;

struct Frac {
  i64 n = 0, d = 1;

  Frac() = default;
  Frac(i64 num, i64 den = 1) {
    if (den < 0) num = -num, den = -den;
    const i64 g = std::gcd(num < 0 ? -num : num, den);
    n = num / (g ? g : 1);
    d = den / (g ? g : 1);
  }
  friend Frac operator+(Frac a, Frac b) { return Frac(a.n * b.d + b.n * a.d, a.d * b.d); }
  friend Frac operator-(Frac a, Frac b) { return Frac(a.n * b.d - b.n * a.d, a.d * b.d); }
  friend Frac operator*(Frac a, i64 k) { return Frac(a.n * k, a.d); }
  friend Frac operator/(Frac a, i64 k) { return Frac(a.n, a.d * k); }
  friend bool operator==(Frac a, Frac b) { return a.n == b.n && a.d == b.d; }
  friend bool operator<(Frac a, Frac b) { return a.n * b.d < b.n * a.d; }
  friend bool operator<=(Frac a, Frac b) { return !(b < a); }
};

inline std::string text(Frac q) { return q.d == 1 ? std::to_string(q.n) : std::to_string(q.n) + "/" + std::to_string(q.d); }
inline Frac fmin(Frac a, Frac b) { return b < a ? b : a; }
inline Frac fmax(Frac a, Frac b) { return a < b ? b : a; }

// Lukasiewicz operations on [0,1].
inline Frac oplus(Frac x, Frac y) { return fmin(x + y, Frac(1)); }
inline Frac odot(Frac x, Frac y) { return fmax(x + y - Frac(1), Frac(0)); }
inline Frac neg(Frac x) { return Frac(1) - x; }

/// True when every prime factor of d divides p.
inline bool power_of_factors(i64 d, i64 p) {
  for (i64 g = std::gcd(d, p); g > 1; g = std::gcd(d, p))
    while (d % g == 0) d /= g;
  return d == 1;
}

/// {i/p^k : 0 <= i <= p^k, k <= e}, sorted, duplicates removed.
inline std::vector<Frac> padic_grid(i64 p, unsigned e) {
  i64 den = 1;
  for (unsigned k = 0; k < e; ++k) den *= p;
  std::vector<Frac> out;
  for (i64 i = 0; i <= den; ++i) out.push_back(Frac(i, den));
  return out;
}

/// Tuples of chain ranks: a point of chain(n_1) x ... x chain(n_k).
using Tuple = std::vector<i64>;

inline std::vector<Tuple> chain_product(const std::vector<i64>& ns) {
  std::vector<Tuple> out{{}};
  for (i64 n : ns) {
    std::vector<Tuple> next;
    for (const auto& t : out)
      for (i64 v = 0; v <= n; ++v) {
        Tuple u = t;
        u.push_back(v);
        next.push_back(u);
      }
    out = std::move(next);
  }
  return out;
}

inline bool tuple_leq(const Tuple& a, const Tuple& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Tuple tuple_odot(const std::vector<i64>& ns, const Tuple& a, const Tuple& b) {
  Tuple out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max<i64>(a[i] + b[i] - ns[i], 0);
  return out;
}

inline std::string tuple_text(const std::vector<i64>& ns, const Tuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + text(Frac(t[i], ns[i]));
  return s + ")";
}

/// Whether chain(n_1) x ... x chain(n_k) has a square root: the set
/// {y : y.y <= x} must have a greatest element r with r.r = x for every x.
inline bool chain_product_has_sqrt(const std::vector<i64>& ns) {
  const auto all = chain_product(ns);
  for (const auto& x : all) {
    std::vector<const Tuple*> below;
    for (const auto& y : all)
      if (tuple_leq(tuple_odot(ns, y, y), x)) below.push_back(&y);
    const Tuple* top = nullptr;
    for (const Tuple* c : below) {
      bool dominates = true;
      for (const Tuple* y : below)
        if (!tuple_leq(*y, *c)) {
          dominates = false;
          break;
        }
      if (dominates) top = c;
    }
    if (!top || tuple_odot(ns, *top, *top) != x) return false;
  }
  return true;
}

/// Greatest y of the candidate grid with y.y <= x on [0,1], if attained.
inline std::optional<Frac> interval_sqrt(Frac x, const std::vector<Frac>& grid) {
  std::optional<Frac> best;
  for (Frac y : grid)
    if (odot(y, y) <= x && (!best || *best < y)) best = y;
  return best;
}

/// One point of {0,1}^k x [0,1] with the interval coordinate on a grid.
struct BoolDyadic {
  std::vector<int> bits;
  Frac q;
};

/// Brute-force root on {0,1}^k x (dyadics with exponent <= e): for every x
/// the greatest y over a grid one exponent finer with y.y <= x, found by
/// scanning all candidates and checking domination.
inline std::vector<std::pair<BoolDyadic, BoolDyadic>> bool_dyadic_roots(unsigned k, unsigned e) {
  const auto coarse = padic_grid(2, e);
  const auto fine = padic_grid(2, e + 1);
  std::vector<BoolDyadic> xs, ys;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> bits(k);
    for (unsigned i = 0; i < k; ++i) bits[i] = (mask >> i) & 1;
    for (Frac q : coarse) xs.push_back({bits, q});
    for (Frac q : fine) ys.push_back({bits, q});
  }
  auto leq = [](const BoolDyadic& a, const BoolDyadic& b) {
    for (std::size_t i = 0; i < a.bits.size(); ++i)
      if (a.bits[i] > b.bits[i]) return false;
    return a.q <= b.q;
  };
  auto sq = [](const BoolDyadic& a) { return BoolDyadic{a.bits, odot(a.q, a.q)}; };
  std::vector<std::pair<BoolDyadic, BoolDyadic>> out;
  for (const auto& x : xs) {
    std::vector<const BoolDyadic*> below;
    for (const auto& y : ys)
      if (leq(sq(y), x)) below.push_back(&y);
    const BoolDyadic* top = nullptr;
    for (const BoolDyadic* c : below) {
      bool ok = true;
      for (const BoolDyadic* y : below)
        if (!leq(*y, *c)) {
          ok = false;
          break;
        }
      if (ok) {
        top = c;
        break;
      }
    }
    if (top) out.push_back({x, *top});
  }
  return out;
}

inline std::string bool_dyadic_text(const BoolDyadic& v) {
  std::string s = "(";
  for (int b : v.bits) s += std::to_string(b) + ",";
  return s + text(v.q) + ")";
}

/// m + n*alpha with alpha = sqrt2 - 1, as a floating value (oracle only).
inline long double quad_value(i64 m, i64 n) { return static_cast<long double>(m - n) + n * std::sqrt(2.0L); }

/// (x+1)/2 for x = m + n*alpha lies in Z[alpha] iff x+1 = (m+1-n) + n*sqrt2
/// has both coordinates even.
inline bool quad_half_plus_one_exists(i64 m, i64 n) { return (m + 1 - n) % 2 == 0 && n % 2 == 0; }

/// Lexicographic pair arithmetic for Gamma(Z x_lex Z, (1,0)).
struct LexPair {
  i64 h = 0, l = 0;
  friend bool operator<=(LexPair a, LexPair b) { return a.h < b.h || (a.h == b.h && a.l <= b.l); }
};

inline LexPair lex_odot(LexPair x, LexPair y) {
  LexPair s{x.h + y.h - 1, x.l + y.l};
  return LexPair{0, 0} <= s ? s : LexPair{0, 0};
}

/// Deterministic generator for hand-rolled property tests.
inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

inline i64 uniform(i64 lo, i64 hi) { return std::uniform_int_distribution<i64>(lo, hi)(rng()); }

}  // namespace oracle
