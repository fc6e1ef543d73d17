#include "ecexp/structure.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>
#include <string>

namespace ecexp {

namespace {

constexpr u64 kAuditStream = 0xa0d17ULL;
constexpr u64 kStructureStream = 0x5eedULL;
constexpr unsigned kMaxCertifyRounds = 4096;

u64 ipow(u64 base, unsigned e) {
  u64 r = 1;
  while (e--) r *= base;
  return r;
}

// Exponent j such that the order of P (known to divide l^cap) is l^j.
unsigned log_order(Point P, u64 l, unsigned cap, const CurveModP& E) {
  unsigned j = 0;
  while (!P.infinity) {
    if (j == cap) throw ConsistencyError("point order exceeds the l-part of N");
    P = scalar_mul(l, P, E);
    ++j;
  }
  return j;
}

// m with X = m R, where R has order l^t; std::nullopt if X is not in <R>.
// Pohlig-Hellman, one base-l digit at a time.
std::optional<u64> discrete_log(const Point& X, const Point& R, u64 l, unsigned t,
                                const CurveModP& E) {
  if (t == 0) return X.infinity ? std::optional<u64>(0) : std::nullopt;
  const Point g = scalar_mul(ipow(l, t - 1), R, E);
  std::vector<Point> multiples;
  multiples.reserve(l);
  Point acc = Point::identity();
  for (u64 i = 0; i < l; ++i) {
    multiples.push_back(acc);
    acc = add(acc, g, E);
  }
  u64 m = 0, lk = 1;
  for (unsigned i = 0; i < t; ++i) {
    const Point rest = add(X, neg(scalar_mul(m, R, E), E), E);
    const Point Y = scalar_mul(ipow(l, t - 1 - i), rest, E);
    const auto it = std::find(multiples.begin(), multiples.end(), Y);
    if (it == multiples.end()) return std::nullopt;
    m += static_cast<u64>(it - multiples.begin()) * lk;
    lk *= l;
  }
  if (!(scalar_mul(m, R, E) == X)) return std::nullopt;
  return m;
}

// Exponent s with l^s || d_p, given s_max = v_l(Frobenius bound) >= 1 and
// v = v_l(N). Succeeds once the l-Sylow subgroup is exhibited as
// <R1> + <R2'> with |R1| = l^t, |R2'| = l^(v-t) and trivial intersection.
unsigned certify_l_part(const CurveModP& E, u64 N, u64 l, unsigned v, unsigned s_max,
                        PointSampler& sampler) {
  const u64 cofactor = N / ipow(l, v);
  Point R1 = Point::identity();
  unsigned t = 0;
  for (unsigned round = 0; round < kMaxCertifyRounds; ++round) {
    const Point R = scalar_mul(cofactor, sampler.next(), E);
    const unsigned j = log_order(R, l, v, E);
    if (j > t) {
      R1 = R;
      t = j;
      if (t == v) return 0;  // a generator of the whole l-Sylow subgroup
      continue;
    }
    // Order l^i of R in the quotient by <R1>.
    Point X = R;
    unsigned i = 0;
    std::optional<u64> m;
    while (!(m = discrete_log(X, R1, l, t, E))) {
      X = scalar_mul(l, X, E);
      ++i;
    }
    if (i != v - t) continue;
    // l^i R = m R1 with l^i | m gives R2' = R - (m / l^i) R1 of order l^i.
    if (*m % ipow(l, i) != 0) continue;
    const unsigned s = std::min(t, v - t);
    if (s > s_max) {
      throw ConsistencyError("structure: l-part exceeds the Frobenius bound at p = " +
                             std::to_string(E.p));
    }
    return s;
  }
  throw ConsistencyError("structure: could not certify the l-part of d_p for l = " +
                         std::to_string(l) + ", p = " + std::to_string(E.p));
}

}  // namespace

void check_invariants(const LocalData& ld) {
  const auto fail = [&](const char* what) {
    throw ConsistencyError(std::string("LocalData invariant violated (") + what +
                           ") at p = " + std::to_string(ld.p));
  };
  if (static_cast<i64>(ld.p + 1) - ld.a_p != static_cast<i64>(ld.N)) fail("N = p + 1 - a_p");
  if (static_cast<u128>(ld.a_p) * ld.a_p > 4 * static_cast<u128>(ld.p)) fail("Hasse");
  if (ld.d == 0 || ld.e == 0 || ld.d * ld.e != ld.N) fail("d e = N");
  if (ld.e % ld.d != 0) fail("d | e");
  if ((ld.p - 1) % ld.d != 0) fail("d | p - 1");
}

bool divides_d(u64 k, u64 p, i64 a_p) {
  if (k == 0) throw std::invalid_argument("divides_d: k must be positive");
  if (k % p == 0) throw std::invalid_argument("divides_d: requires p not dividing k");
  const i64 t = a_p - 2;
  const i64 n = static_cast<i64>(p) + 1 - a_p;
  if (t % static_cast<i64>(k) != 0) return false;
  const u128 k2 = static_cast<u128>(k) * k;
  return static_cast<u128>(n) % k2 == 0;
}

u64 d_via_frobenius(u64 p, i64 a_p) {
  const u64 N = static_cast<u64>(static_cast<i64>(p) + 1 - a_p);
  // a_p = 2 makes the trace condition vacuous; then N = p - 1 bounds the scan.
  const u64 base = a_p == 2 ? p - 1 : static_cast<u64>(std::llabs(a_p - 2));
  const Factorization t = factorize(base);
  const Factorization n = factorize(N);
  u64 d = 1;
  for (const auto& [q, e] : t.factors) {
    const unsigned s = std::min(e, n.valuation(q) / 2);
    d *= ipow(q, s);
  }
  return d;
}

LocalData structure_pair(const CurveModP& E, u64 N, u64 stream) {
  LocalData ld;
  ld.p = E.p;
  ld.N = N;
  ld.a_p = static_cast<i64>(E.p + 1) - static_cast<i64>(N);
  const u64 bound = d_via_frobenius(E.p, ld.a_p);
  if (N % (static_cast<u128>(bound) * bound) != 0) {
    throw ConsistencyError("structure: N_p not divisible by d_p^2 at p = " + std::to_string(E.p));
  }
  u64 d = 1;
  if (bound > 1) {
    const Factorization nf = factorize(N);
    PointSampler sampler(E, stream ^ kStructureStream);
    for (const auto& [l, s_max] : factorize(bound).factors) {
      d *= ipow(l, certify_l_part(E, N, l, nf.valuation(l), s_max, sampler));
    }
  }
  ld.d = d;
  ld.e = N / d;
  check_invariants(ld);
  return ld;
}

LocalData structure_pair(const CurveModP& E, u64 stream) {
  return structure_pair(E, group_order(E, stream), stream);
}

u64 exponent_via_points(const CurveModP& E, const Factorization& N, unsigned trials, u64 stream) {
  if (trials == 0) throw std::invalid_argument("exponent_via_points: trials must be positive");
  PointSampler sampler(E, stream ^ kAuditStream);
  u64 e = 1;
  for (unsigned i = 0; i < trials; ++i) e = lcm(e, point_order(sampler.next(), N, E));
  return e;
}

u64 exponent_via_points(const CurveModP& E, unsigned trials, u64 stream) {
  return exponent_via_points(E, factorize(group_order(E, stream)), trials, stream);
}

}  // namespace ecexp
