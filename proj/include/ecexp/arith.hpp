#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ecexp {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 base, u64 exp, u64 m);

/// Inverse of a modulo m; requires gcd(a, m) = 1.
u64 invmod(u64 a, u64 m);

/// Deterministic Miller-Rabin, exact for all n < 2^64.
bool is_prime(u64 n);

u64 gcd(u64 a, u64 b);
/// Throws std::overflow_error if the result does not fit.
u64 lcm(u64 a, u64 b);

/// Legendre symbol (a | p) for an odd prime p.
int legendre(u64 a, u64 p);
/// Kronecker symbol (d | n) for a fundamental discriminant d and a prime n.
int kronecker(i64 d, u64 n);

/// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks).
u64 sqrt_mod(u64 a, u64 p);

u64 isqrt(u64 n);

struct PrimePower {
  u64 prime;
  unsigned exponent;
  bool operator==(const PrimePower&) const = default;
};

struct Factorization {
  u64 value = 1;
  std::vector<PrimePower> factors;  // strictly increasing primes

  unsigned valuation(u64 prime) const;
};

/// Trial division to 10^4, then Miller-Rabin / Pollard-Brent on the cofactor.
Factorization factorize(u64 n);

std::vector<u64> divisors(const Factorization& f);
std::vector<u64> divisors(u64 n);

enum class ArithFn { mobius, omega, phi, rad, tau, sigma };

ArithFn parse_arith_fn(const std::string& name);

int mobius(const Factorization& f);
unsigned omega(const Factorization& f);
u64 phi(const Factorization& f);
u64 rad(const Factorization& f);
u64 tau(const Factorization& f);
u64 sigma(const Factorization& f);

i64 arith_fn(ArithFn fn, u64 k);

inline int mobius(u64 k) { return mobius(factorize(k)); }
inline unsigned omega(u64 k) { return omega(factorize(k)); }
inline u64 phi(u64 k) { return phi(factorize(k)); }
inline u64 rad(u64 k) { return rad(factorize(k)); }

/// Exact rational with a positive denominator in lowest terms. Arithmetic
/// throws std::overflow_error rather than wrapping.
class Rational {
 public:
  Rational() = default;
  Rational(i64 n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(i64 n, i64 d);

  i64 num() const { return num_; }
  i64 den() const { return den_; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return Rational(-num_, den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  bool operator==(const Rational&) const = default;
  bool operator<(const Rational& o) const;

  long double to_long_double() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }
  std::string str() const;

 private:
  static Rational from_wide(i128 n, i128 d);

  i64 num_ = 0;
  i64 den_ = 1;
};

/// Sum over hj = k of mu(h)/j, by the closed form (-1)^omega(k) phi(rad k) / k.
Rational mu_over_j_exact(u64 k);
/// Same sum by direct Dirichlet convolution; reference path.
Rational mu_over_j_convolution(u64 k);
/// Sum over pairs with hj | k of mu(h)/j; equals 1/k.
Rational inverse_identity_check(u64 k);

}  // namespace ecexp
