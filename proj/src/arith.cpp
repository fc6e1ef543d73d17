#include "ecexp/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ecexp {

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 invmod(u64 a, u64 m) {
  i128 t = 0, new_t = 1;
  i128 r = m, new_r = a % m;
  while (new_r != 0) {
    i128 q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw std::domain_error("invmod: argument not invertible");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

u64 lcm(u64 a, u64 b) {
  if (a == 0 || b == 0) return 0;
  u128 r = static_cast<u128>(a / gcd(a, b)) * b;
  if (r > UINT64_MAX) throw std::overflow_error("lcm overflow");
  return static_cast<u64>(r);
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

namespace {

bool miller_rabin_witness(u64 n, u64 a, u64 d, unsigned s) {
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (unsigned r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  // Fixed sequence of constants keeps factorization deterministic.
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    const u64 m = 128;
    u64 r = 1;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_large(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_brent(n);
  factor_large(d, out);
  factor_large(n / d, out);
}

constexpr u64 kTrialLimit = 10000;

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : small) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : small) {
    if (miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

int legendre(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

int kronecker(i64 d, u64 n) {
  if (n == 2) {
    if (d % 2 == 0) return 0;
    i64 r = ((d % 8) + 8) % 8;
    return (r == 1 || r == 7) ? 1 : -1;
  }
  i64 r = d % static_cast<i64>(n);
  if (r < 0) r += static_cast<i64>(n);
  return legendre(static_cast<u64>(r), n);
}

u64 sqrt_mod(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  u64 q = p - 1;
  unsigned s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  u64 z = 2;
  while (legendre(z, p) != -1) ++z;
  u64 m = s;
  u64 c = powmod(z, q, p);
  u64 t = powmod(a, q, p);
  u64 r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 i = 0, t2 = t;
    while (t2 != 1) {
      t2 = mulmod(t2, t2, p);
      ++i;
      if (i == m) throw std::domain_error("sqrt_mod: non-residue");
    }
    u64 b = c;
    for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

unsigned Factorization::valuation(u64 prime) const {
  for (const auto& pp : factors) {
    if (pp.prime == prime) return pp.exponent;
  }
  return 0;
}

Factorization factorize(u64 n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  Factorization f;
  f.value = n;
  auto take = [&](u64 p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) f.factors.push_back({p, e});
  };
  take(2);
  for (u64 p = 3; p <= kTrialLimit && p * p <= n; p += 2) take(p);
  if (n > 1) {
    std::vector<u64> rest;
    factor_large(n, rest);
    std::sort(rest.begin(), rest.end());
    for (std::size_t i = 0; i < rest.size();) {
      std::size_t j = i;
      while (j < rest.size() && rest[j] == rest[i]) ++j;
      f.factors.push_back({rest[i], static_cast<unsigned>(j - i)});
      i = j;
    }
  }
  return f;
}

std::vector<u64> divisors(const Factorization& f) {
  std::vector<u64> out{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t n = out.size();
    u64 pk = 1;
    for (unsigned i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < n; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<u64> divisors(u64 n) { return divisors(factorize(n)); }

ArithFn parse_arith_fn(const std::string& name) {
  if (name == "mobius") return ArithFn::mobius;
  if (name == "omega") return ArithFn::omega;
  if (name == "phi") return ArithFn::phi;
  if (name == "rad") return ArithFn::rad;
  if (name == "tau") return ArithFn::tau;
  if (name == "sigma") return ArithFn::sigma;
  throw std::invalid_argument("unknown arithmetic function: " + name);
}

int mobius(const Factorization& f) {
  for (const auto& pp : f.factors) {
    if (pp.exponent > 1) return 0;
  }
  return f.factors.size() % 2 ? -1 : 1;
}

unsigned omega(const Factorization& f) { return static_cast<unsigned>(f.factors.size()); }

u64 phi(const Factorization& f) {
  u64 r = 1;
  for (const auto& [p, e] : f.factors) {
    r *= p - 1;
    for (unsigned i = 1; i < e; ++i) r *= p;
  }
  return r;
}

u64 rad(const Factorization& f) {
  u64 r = 1;
  for (const auto& pp : f.factors) r *= pp.prime;
  return r;
}

u64 tau(const Factorization& f) {
  u64 r = 1;
  for (const auto& pp : f.factors) r *= pp.exponent + 1;
  return r;
}

u64 sigma(const Factorization& f) {
  u64 r = 1;
  for (const auto& [p, e] : f.factors) {
    u64 term = 1, pk = 1;
    for (unsigned i = 1; i <= e; ++i) {
      pk *= p;
      term += pk;
    }
    r *= term;
  }
  return r;
}

i64 arith_fn(ArithFn fn, u64 k) {
  if (k == 0) throw std::invalid_argument("arith_fn: k must be positive");
  const Factorization f = factorize(k);
  switch (fn) {
    case ArithFn::mobius: return mobius(f);
    case ArithFn::omega: return omega(f);
    case ArithFn::phi: return static_cast<i64>(phi(f));
    case ArithFn::rad: return static_cast<i64>(rad(f));
    case ArithFn::tau: return static_cast<i64>(tau(f));
    case ArithFn::sigma: return static_cast<i64>(sigma(f));
  }
  throw std::logic_error("unreachable");
}

// --- Rational ---------------------------------------------------------------

Rational::Rational(i64 n, i64 d) {
  if (d == 0) throw std::domain_error("Rational: zero denominator");
  *this = from_wide(n, d);
}

Rational Rational::from_wide(i128 n, i128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 a = n < 0 ? -n : n, b = d;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  constexpr i128 lim = INT64_MAX;
  if (n > lim || n < -lim || d > lim) throw std::overflow_error("Rational overflow");
  Rational r;
  r.num_ = static_cast<i64>(n);
  r.den_ = static_cast<i64>(d);
  return r;
}

Rational Rational::operator+(const Rational& o) const {
  return from_wide(static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_,
                   static_cast<i128>(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
  return from_wide(static_cast<i128>(num_) * o.num_, static_cast<i128>(den_) * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
  return from_wide(static_cast<i128>(num_) * o.den_, static_cast<i128>(den_) * o.num_);
}

bool Rational::operator<(const Rational& o) const {
  return static_cast<i128>(num_) * o.den_ < static_cast<i128>(o.num_) * den_;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

// --- identities -------------------------------------------------------------

Rational mu_over_j_exact(u64 k) {
  if (k == 0) throw std::invalid_argument("mu_over_j_exact: k must be positive");
  const Factorization f = factorize(k);
  const i64 sign = omega(f) % 2 ? -1 : 1;
  return Rational(sign * static_cast<i64>(phi(factorize(rad(f)))), static_cast<i64>(k));
}

Rational mu_over_j_convolution(u64 k) {
  if (k == 0) throw std::invalid_argument("mu_over_j_convolution: k must be positive");
  Rational sum;
  for (u64 h : divisors(k)) {
    const int mu = mobius(h);
    if (mu != 0) sum += Rational(mu, static_cast<i64>(k / h));
  }
  return sum;
}

Rational inverse_identity_check(u64 k) {
  if (k == 0) throw std::invalid_argument("inverse_identity_check: k must be positive");
  Rational sum;
  for (u64 h : divisors(k)) {
    const int mu = mobius(h);
    if (mu == 0) continue;
    for (u64 j : divisors(k / h)) sum += Rational(mu, static_cast<i64>(j));
  }
  return sum;
}

}  // namespace ecexp
