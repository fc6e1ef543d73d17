#include "ecexp/ec_group.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace ecexp {

namespace {

u64 mod_signed(i64 v, u64 p) {
  const i64 r = v % static_cast<i64>(p);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(p) : r);
}

u64 addm(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  return s >= p ? s - p : s;
}

u64 subm(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

u64 rhs(u64 x, const CurveModP& E) {
  const u64 x2 = mulmod(x, x, E.p);
  return addm(mulmod(addm(x2, E.a, E.p), x, E.p), E.b, E.p);
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  const bool negative = v < 0;
  u128 u = negative ? static_cast<u128>(-v) : static_cast<u128>(v);
  std::string s;
  while (u) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (negative) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

u64 splitmix64(u64 x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Smallest M in [H.lo, H.hi] with M * P = identity.
u64 smallest_multiple_in(const Point& P, const CurveModP& E, const HasseInterval& H) {
  const u64 width = H.hi - H.lo;
  const u64 m = isqrt(width) + 1;
  using Key = std::tuple<bool, u64, u64>;
  std::vector<std::pair<Key, u64>> baby;
  baby.reserve(m);
  Point acc = Point::identity();
  for (u64 j = 0; j < m; ++j) {
    baby.push_back({{acc.infinity, acc.x, acc.y}, j});
    acc = add(acc, P, E);
  }
  std::sort(baby.begin(), baby.end());
  const Point giant = neg(acc, E);  // -(m P)
  Point R = neg(scalar_mul(H.lo, P, E), E);
  for (u64 k = 0; k * m <= width; ++k) {
    const Key key{R.infinity, R.x, R.y};
    auto it = std::lower_bound(baby.begin(), baby.end(), std::make_pair(key, u64{0}));
    if (it != baby.end() && it->first == key) {
      const u64 M = H.lo + k * m + it->second;
      if (M <= H.hi) return M;
      break;
    }
    R = add(R, giant, E);
  }
  throw std::logic_error("bsgs: no multiple of the point order in the Hasse interval");
}

std::vector<u64> candidate_orders(const HasseInterval& H, u64 p, u64 lcm_curve, u64 lcm_twist) {
  std::vector<u64> out;
  const u64 twist_sum = 2 * p + 2;
  for (u64 n = (H.lo + lcm_curve - 1) / lcm_curve * lcm_curve; n <= H.hi; n += lcm_curve) {
    if ((twist_sum - n) % lcm_twist == 0) {
      out.push_back(n);
      if (out.size() > 1) break;
    }
  }
  return out;
}

}  // namespace

CurveZ::CurveZ(i64 a, i64 b) : a_(a), b_(b) {
  const i128 A = a, B = b;
  disc_ = -16 * (4 * A * A * A + 27 * B * B);
  if (disc_ == 0) throw std::invalid_argument("singular curve: 4a^3 + 27b^2 = 0");
}

std::string CurveZ::str() const {
  return "y^2 = x^3 + (" + std::to_string(a_) + ")x + (" + std::to_string(b_) +
         "), disc = " + to_string(disc_);
}

std::optional<CurveModP> reduce(const CurveZ& curve, u64 p) {
  if (p >= kMaxFieldPrime || !is_prime(p)) {
    throw std::invalid_argument("reduce: p must be a prime below 2^62");
  }
  if (p <= 3) return std::nullopt;
  if (curve.discriminant() % static_cast<i128>(p) == 0) return std::nullopt;
  return CurveModP{p, mod_signed(curve.a(), p), mod_signed(curve.b(), p)};
}

bool on_curve(const Point& P, const CurveModP& E) {
  if (P.infinity) return true;
  return P.x < E.p && P.y < E.p && mulmod(P.y, P.y, E.p) == rhs(P.x, E);
}

Point neg(const Point& P, const CurveModP& E) {
  if (P.infinity) return P;
  return Point::affine(P.x, P.y == 0 ? 0 : E.p - P.y);
}

Point dbl(const Point& P, const CurveModP& E) {
  if (P.infinity || P.y == 0) return Point::identity();
  const u64 p = E.p;
  const u64 num = addm(mulmod(3, mulmod(P.x, P.x, p), p), E.a, p);
  const u64 lambda = mulmod(num, invmod(addm(P.y, P.y, p), p), p);
  const u64 x3 = subm(mulmod(lambda, lambda, p), addm(P.x, P.x, p), p);
  const u64 y3 = subm(mulmod(lambda, subm(P.x, x3, p), p), P.y, p);
  return Point::affine(x3, y3);
}

Point add(const Point& P, const Point& Q, const CurveModP& E) {
  if (P.infinity) return Q;
  if (Q.infinity) return P;
  const u64 p = E.p;
  if (P.x == Q.x) {
    if (addm(P.y, Q.y, p) == 0) return Point::identity();
    return dbl(P, E);
  }
  const u64 lambda = mulmod(subm(Q.y, P.y, p), invmod(subm(Q.x, P.x, p), p), p);
  const u64 x3 = subm(subm(mulmod(lambda, lambda, p), P.x, p), Q.x, p);
  const u64 y3 = subm(mulmod(lambda, subm(P.x, x3, p), p), P.y, p);
  return Point::affine(x3, y3);
}

Point scalar_mul(u64 n, const Point& P, const CurveModP& E) {
  Point result = Point::identity();
  if (n == 0 || P.infinity) return result;
  for (int bit = 63 - __builtin_clzll(n); bit >= 0; --bit) {
    result = dbl(result, E);
    if ((n >> bit) & 1) result = add(result, P, E);
  }
  return result;
}

u64 point_order(const Point& P, const Factorization& multiple, const CurveModP& E) {
  u64 order = multiple.value;
  for (const auto& [q, e] : multiple.factors) {
    for (unsigned i = 0; i < e; ++i) {
      if (!scalar_mul(order / q, P, E).infinity) break;
      order /= q;
    }
  }
  return order;
}

u64 point_order(const Point& P, u64 multiple, const CurveModP& E) {
  return point_order(P, factorize(multiple), E);
}

u64 seed_for(u64 a, u64 b, u64 p, u64 stream) {
  return splitmix64(splitmix64(splitmix64(splitmix64(a) ^ b) ^ p) ^ stream);
}

PointSampler::PointSampler(const CurveModP& E, u64 stream)
    : curve_(E), rng_(seed_for(E.a, E.b, E.p, stream)) {}

Point PointSampler::next() {
  const u64 p = curve_.p;
  for (;;) {
    const u64 x = rng_() % p;
    const u64 r = rhs(x, curve_);
    if (r == 0) return Point::affine(x, 0);
    if (legendre(r, p) != 1) continue;
    u64 y = sqrt_mod(r, p);
    if (rng_() & 1) y = p - y;
    return Point::affine(x, y);
  }
}

HasseInterval hasse_interval(u64 p) {
  const u64 w = isqrt(4 * p);  // floor(2 sqrt p)
  return {p + 1 - w, p + 1 + w};
}

CurveModP quadratic_twist(const CurveModP& E) {
  u64 u = 2;
  while (legendre(u, E.p) != -1) ++u;
  const u64 u2 = mulmod(u, u, E.p);
  return {E.p, mulmod(E.a, u2, E.p), mulmod(E.b, mulmod(u2, u, E.p), E.p)};
}

u64 order_by_enumeration(const CurveModP& E) {
  const u64 p = E.p;
  u64 count = 1;
  if (p < (u64{1} << 26)) {
    std::vector<char> square(p, 0);
    for (u64 y = 1; y <= p / 2; ++y) square[mulmod(y, y, p)] = 1;
    for (u64 x = 0; x < p; ++x) {
      const u64 r = rhs(x, E);
      count += r == 0 ? 1 : (square[r] ? 2 : 0);
    }
  } else {
    for (u64 x = 0; x < p; ++x) count += 1 + legendre(rhs(x, E), p);
  }
  return count;
}

std::optional<u64> order_by_bsgs(const CurveModP& E, unsigned max_rounds, u64 stream) {
  const HasseInterval H = hasse_interval(E.p);
  const CurveModP twist = quadratic_twist(E);
  PointSampler on_curve_pts(E, stream);
  PointSampler on_twist_pts(twist, stream ^ 0x7f4a7c15ULL);
  u64 lcm_curve = 1, lcm_twist = 1;
  for (unsigned round = 0; round < max_rounds; ++round) {
    const Point P = on_curve_pts.next();
    lcm_curve = lcm(lcm_curve, point_order(P, smallest_multiple_in(P, E, H), E));
    auto c = candidate_orders(H, E.p, lcm_curve, lcm_twist);
    if (c.empty()) throw std::logic_error("bsgs: inconsistent point orders");
    if (c.size() == 1) return c.front();

    const Point T = on_twist_pts.next();
    lcm_twist = lcm(lcm_twist, point_order(T, smallest_multiple_in(T, twist, H), twist));
    c = candidate_orders(H, E.p, lcm_curve, lcm_twist);
    if (c.empty()) throw std::logic_error("bsgs: inconsistent point orders");
    if (c.size() == 1) return c.front();
  }
  return std::nullopt;
}

u64 group_order(const CurveModP& E, u64 stream) {
  if (E.p < 10000) return order_by_enumeration(E);
  if (auto n = order_by_bsgs(E, 24, stream)) return *n;
  return order_by_enumeration(E);
}

i64 trace(const CurveModP& E, u64 stream) {
  return static_cast<i64>(E.p + 1) - static_cast<i64>(group_order(E, stream));
}

}  // namespace ecexp
