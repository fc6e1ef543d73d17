#include "ecexp/constants.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ecexp/sieve.hpp"

namespace ecexp {

namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;
constexpr long double kUnit = std::numeric_limits<long double>::epsilon();
constexpr u64 kMinPrimeCutoff = u64{1} << 16;
constexpr u64 kMaxPrimeCutoff = u64{1} << 17;  // keeps q^7 inside 128 bits

void check_eps(double eps) {
  if (!(eps >= 1e-12) || !std::isfinite(eps)) {
    throw std::invalid_argument("eps must be a finite value >= 1e-12");
  }
}

// Smallest Q in {2^16, 2^17} whose log-tail bound is below eps/2.
template <class TailFn>
u64 choose_cutoff(double eps, TailFn tail) {
  u64 Q = kMinPrimeCutoff;
  while (tail(Q) >= eps / 2 && Q < kMaxPrimeCutoff) Q *= 2;
  if (tail(Q) >= eps / 2) throw std::invalid_argument("eps below the supported tail resolution");
  return Q;
}

const std::vector<u64>& primes_to(u64 Q) {
  static const std::vector<u64> all = primes_in(2, kMaxPrimeCutoff + 1).primes;
  (void)Q;
  return all;
}

// Sum over n > Q of n^-s, by the integral comparison.
long double power_tail(u64 Q, unsigned s) {
  return 1 / ((s - 1) * std::pow(static_cast<long double>(Q), s - 1.0L));
}

BoundedValue finish(long double product, long double log_tail, bool two_sided, std::size_t factors,
                    u64 Q) {
  // The omitted factors lie in [e^-T, 1] (or [e^-T, e^T] when two-sided).
  long double value = product, err;
  if (two_sided) {
    err = product * std::expm1(log_tail);
  } else {
    const long double shrink = -std::expm1(-log_tail);
    value = product * (1 - shrink / 2);
    err = product * shrink / 2;
  }
  err += std::fabs(product) * 8 * kUnit * (factors + 16);
  const double v = static_cast<double>(value);
  err += std::fabs(v) * std::numeric_limits<double>::epsilon();
  return {v, static_cast<double>(err), static_cast<double>(Q)};
}

// L(3, chi_d) for a fundamental discriminant d < 0, with its absolute error.
std::pair<long double, long double> dirichlet_L3(i64 d) {
  const u64 m = static_cast<u64>(-d);
  std::vector<int> chi(m);
  for (u64 a = 0; a < m; ++a) {
    if (a == 0 || gcd(a, m) != 1) {
      chi[a] = 0;
      continue;
    }
    int c = 1;
    for (const auto& [q, e] : factorize(a).factors) {
      const int kq = kronecker(d, q);
      if (e % 2) c *= kq;
    }
    chi[a] = c;
  }
  constexpr u64 N = u64{1} << 20;
  long double sum = 0;
  for (u64 n = N; n >= 1; --n) {
    const int c = chi[n % m];
    if (c == 0) continue;
    const long double nl = static_cast<long double>(n);
    sum += c / (nl * nl * nl);
  }
  // Interval sums of chi are bounded by |d|; Abel summation bounds the tail.
  const long double n1 = static_cast<long double>(N + 1);
  const long double err = static_cast<long double>(m) / (n1 * n1 * n1) + 4 * N * kUnit;
  return {sum, err};
}

// n / d in lowest terms; std::overflow_error if it does not fit in 64 bits.
Rational exact_ratio(i128 n, i128 d) {
  i128 a = n < 0 ? -n : n, b = d;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  n /= a;
  d /= a;
  constexpr i128 lim = std::numeric_limits<i64>::max();
  if (n > lim || n < -lim || d > lim) throw std::overflow_error("Euler factor exceeds 64 bits");
  return Rational(static_cast<i64>(n), static_cast<i64>(d));
}

long double series_rounding(long double abs_sum, u64 terms) {
  return abs_sum * kUnit * (2.0L * static_cast<long double>(terms) + 8);
}

}  // namespace

Rational universal_c_factor(u64 q) {
  const i128 Q = q;
  const i128 den = (Q * Q - 1) * (Q * Q * Q * Q * Q - 1);
  return exact_ratio(den - Q * Q * Q, den);
}

Rational kummer_C_factor(u64 q) {
  const i128 Q = q;
  return exact_ratio(Q * Q * Q - 1 - Q, Q * Q * Q - 1);
}

Rational cm_factor(u64 q, int chi) {
  if (chi != 1 && chi != -1) throw std::invalid_argument("cm_factor: chi must be +1 or -1");
  const i128 Q = q;
  const i128 den = (Q - chi) * (Q * Q * Q - 1);
  return exact_ratio(den - Q * Q, den);
}

BoundedValue universal_c(double eps) {
  check_eps(eps);
  auto tail = [](u64 Q) {
    const long double Ql = static_cast<long double>(Q);
    const long double K = 1 / ((1 - 1 / (Ql * Ql)) * (1 - std::pow(Ql, -5.0L)));
    const long double x = K * power_tail(Q, 4);
    return x / (1 - K / std::pow(Ql, 4.0L));
  };
  const u64 Q = choose_cutoff(eps, tail);
  long double product = 1;
  std::size_t n = 0;
  for (u64 q : primes_to(Q)) {
    if (q > Q) break;
    const u128 num = static_cast<u128>(q) * q * q;
    const u128 den = (static_cast<u128>(q) * q - 1) * (static_cast<u128>(q) * q * q * q * q - 1);
    product *= static_cast<long double>(den - num) / static_cast<long double>(den);
    ++n;
  }
  return finish(product, tail(Q), false, n, Q);
}

BoundedValue kummer_C(double eps) {
  check_eps(eps);
  // 1 - q/(q^3-1) = (1 - q^-2)(1 - 1/((q^3-1)(q^2-1))); the first factors
  // multiply to 6/pi^2 over all q, leaving a product with q^-5 decay.
  auto tail = [](u64 Q) {
    const long double Ql = static_cast<long double>(Q);
    const long double K = 1 / ((1 - std::pow(Ql, -3.0L)) * (1 - 1 / (Ql * Ql)));
    const long double x = K * power_tail(Q, 5);
    return x / (1 - K / std::pow(Ql, 5.0L));
  };
  const u64 Q = choose_cutoff(eps, tail);
  long double product = 6 / (kPi * kPi);
  std::size_t n = 0;
  for (u64 q : primes_to(Q)) {
    if (q > Q) break;
    const u128 den = (static_cast<u128>(q) * q * q - 1) * (static_cast<u128>(q) * q - 1);
    product *= static_cast<long double>(den - 1) / static_cast<long double>(den);
    ++n;
  }
  return finish(product, tail(Q), false, n, Q);
}

BoundedValue cm_product(unsigned D, double eps) {
  check_eps(eps);
  const DegreeOracle K = DegreeOracle::cm(D);  // validates D
  const i64 d = K.cm_discriminant();
  // f_q = (1 - q^-2)(1 - chi(q) q^-3) r_q with |r_q - 1| <= 1.05 q^-4 for
  // q >= 1000. The first two factors are completed to 1/zeta(2) and
  // 1/L(3, chi) over all primes.
  auto tail = [](u64 Q) { return 1.05L * power_tail(Q, 4) * (1 + 1e-6L); };
  const u64 Q = choose_cutoff(eps, tail);
  const auto [L3, L3_err] = dirichlet_L3(d);
  long double product = 6 / (kPi * kPi) / L3;
  std::size_t n = 0;
  for (u64 q : primes_to(Q)) {
    if (q > Q) break;
    const long double ql = static_cast<long double>(q);
    const int chi = kronecker(d, q);
    const long double zeta_part = 1 - 1 / (ql * ql);
    if (chi == 0) {
      product /= zeta_part;
    } else {
      const u128 A = (static_cast<u128>(q) - chi) * (static_cast<u128>(q) * q * q - 1);
      const long double f = static_cast<long double>(A - static_cast<u128>(q) * q) /
                            static_cast<long double>(A);
      product *= f / (zeta_part * (1 - chi / (ql * ql * ql)));
    }
    ++n;
  }
  BoundedValue out = finish(product, tail(Q), true, 4 * n, Q);
  out.error += static_cast<double>(std::fabs(product) * (L3_err / (L3 - L3_err)));
  return out;
}

BoundedValue c_E_series(const DegreeOracle& oracle, u64 Y) {
  if (Y == 0) throw std::invalid_argument("c_E_series: Y must be positive");
  long double sum = 0, abs_sum = 0;
  for (u64 k = 1; k <= Y; ++k) {
    const Factorization f = factorize(k);
    const long double mag = static_cast<long double>(phi(factorize(rad(f)))) /
                            static_cast<long double>(k) * oracle.inverse_degree(k);
    // Signs from the parity of omega(k).
    sum += omega(f) % 2 ? -mag : mag;
    abs_sum += mag;
  }
  long double tail = Y >= 2 ? degree_tail_bound(oracle, static_cast<double>(Y)).value
                            : 1 / oracle.degree_lower_bound(2) + degree_tail_bound(oracle, 2).value;
  const long double err = tail + series_rounding(abs_sum, Y);
  return {static_cast<double>(sum), static_cast<double>(err), static_cast<double>(Y)};
}

BoundedValue cyclicity_constant(const DegreeOracle& oracle, u64 Y) {
  if (Y == 0) throw std::invalid_argument("cyclicity_constant: Y must be positive");
  long double sum = 0, abs_sum = 0;
  for (u64 k = 1; k <= Y; ++k) {
    const int mu = mobius(k);
    if (mu == 0) continue;
    const long double mag = oracle.inverse_degree(k);
    sum += mu * mag;
    abs_sum += mag;
  }
  long double tail = Y >= 2 ? degree_tail_bound(oracle, static_cast<double>(Y)).value
                            : 1 / oracle.degree_lower_bound(2) + degree_tail_bound(oracle, 2).value;
  const long double err = tail + series_rounding(abs_sum, Y);
  return {static_cast<double>(sum), static_cast<double>(err), static_cast<double>(Y)};
}

Rational closed_form_rational_factor(const DegreeOracle& oracle) {
  if (oracle.kind() != OracleKind::table_corrected) {
    throw std::invalid_argument("c_E_closed_form needs a table-corrected oracle with a level m");
  }
  const u64 m = oracle.level();
  const Factorization mf = factorize(m);
  // Sum over h supported on primes of m, grouped by g = gcd(h, m): primes
  // with v_q(g) = v_q(m) contribute an extra geometric factor q^5/(q^5 - 1).
  Rational S;
  for (u64 g : divisors(mf)) {
    u64 Tg = 1;
    if (g > 1) {
      const auto it = oracle.table().find(g);
      if (it == oracle.table().end()) {
        throw MissingDegreeError("missing r_E entry: no table degree for divisor " +
                                 std::to_string(g) + " of the level " + std::to_string(m));
      }
      Tg = it->second;
    }
    const Factorization gf = factorize(g);
    Rational term(omega(gf) % 2 ? -static_cast<i64>(phi(rad(gf))) : static_cast<i64>(phi(rad(gf))),
                  static_cast<i64>(g));
    term = term / Rational(static_cast<i64>(Tg));
    for (const auto& [q, e] : mf.factors) {
      if (gf.valuation(q) == e) {
        const i64 q5 = static_cast<i64>(q * q * q * q * q);
        term *= Rational(q5, q5 - 1);
      }
    }
    S += term;
  }
  for (const auto& pp : mf.factors) S = S / universal_c_factor(pp.prime);
  return S;
}

BoundedValue c_E_closed_form(const DegreeOracle& oracle, double eps) {
  const Rational R = closed_form_rational_factor(oracle);
  const BoundedValue c = universal_c(eps);
  const long double r = R.to_long_double();
  const long double v = static_cast<long double>(c.value) * r;
  const long double err = c.error * std::fabs(r) + std::fabs(v) * 4 * kUnit +
                          std::fabs(v) * std::numeric_limits<double>::epsilon();
  return {static_cast<double>(v), static_cast<double>(err), c.truncation};
}

}  // namespace ecexp
