#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "ecexp/arith.hpp"

namespace ecexp {

/// Integer short-Weierstrass model y^2 = x^3 + a x + b over Q.
class CurveZ {
 public:
  /// Throws std::invalid_argument when the discriminant vanishes.
  CurveZ(i64 a, i64 b);

  i64 a() const { return a_; }
  i64 b() const { return b_; }
  /// -16 (4 a^3 + 27 b^2)
  i128 discriminant() const { return disc_; }
  std::string str() const;

  bool operator==(const CurveZ& o) const { return a_ == o.a_ && b_ == o.b_; }

 private:
  i64 a_;
  i64 b_;
  i128 disc_;
};

struct CurveModP {
  u64 p;
  u64 a;
  u64 b;
};

struct Point {
  u64 x = 0;
  u64 y = 0;
  bool infinity = true;

  static Point identity() { return {}; }
  static Point affine(u64 x, u64 y) { return {x, y, false}; }
  bool operator==(const Point&) const = default;
};

/// Upper bound on p for the 64-bit field arithmetic.
inline constexpr u64 kMaxFieldPrime = u64{1} << 62;

/// Good reduction: p > 3 and p does not divide the discriminant of the given
/// model. std::nullopt marks bad reduction.
std::optional<CurveModP> reduce(const CurveZ& curve, u64 p);

bool on_curve(const Point& P, const CurveModP& E);
Point neg(const Point& P, const CurveModP& E);
Point add(const Point& P, const Point& Q, const CurveModP& E);
Point dbl(const Point& P, const CurveModP& E);
Point scalar_mul(u64 n, const Point& P, const CurveModP& E);

/// Order of P given any multiple M of it (M * P = identity).
u64 point_order(const Point& P, u64 multiple, const CurveModP& E);
u64 point_order(const Point& P, const Factorization& multiple, const CurveModP& E);

/// Deterministic stream of pseudo-random affine points, seeded from (a, b, p)
/// plus a caller-chosen stream tag.
class PointSampler {
 public:
  PointSampler(const CurveModP& E, u64 stream);
  Point next();

 private:
  CurveModP curve_;
  std::mt19937_64 rng_;
};

u64 seed_for(u64 a, u64 b, u64 p, u64 stream);

/// Hasse interval [p + 1 - floor(2 sqrt p), p + 1 + floor(2 sqrt p)].
struct HasseInterval {
  u64 lo;
  u64 hi;
};
HasseInterval hasse_interval(u64 p);

/// Quadratic twist by the least non-residue modulo p.
CurveModP quadratic_twist(const CurveModP& E);

/// Exhaustive count p + 1 + sum_x (x^3 + ax + b | p).
u64 order_by_enumeration(const CurveModP& E);

/// Baby-step/giant-step order determination. Returns std::nullopt if the
/// group order is still ambiguous after `max_rounds` sampled points on the
/// curve and its twist.
std::optional<u64> order_by_bsgs(const CurveModP& E, unsigned max_rounds = 24, u64 stream = 0);

/// Enumeration below 10^4, BSGS above with enumeration as the fallback.
u64 group_order(const CurveModP& E, u64 stream = 0);

/// p + 1 - group_order(E)
i64 trace(const CurveModP& E, u64 stream = 0);

}  // namespace ecexp
