#pragma once

#include <stdexcept>

#include "ecexp/arith.hpp"
#include "ecexp/ec_group.hpp"

namespace ecexp {

/// Local invariants at a prime of good reduction: E(F_p) = Z/d x Z/e, d | e.
struct LocalData {
  u64 p = 0;
  i64 a_p = 0;
  u64 N = 0;
  u64 d = 0;
  u64 e = 0;

  bool operator==(const LocalData&) const = default;
};

/// Raised when computed local data contradicts a group-theoretic identity.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Checks d*e = N, d | e, d | p-1 and the Hasse bound; throws ConsistencyError.
void check_invariants(const LocalData& ld);

/// Trace/norm integrality of (pi_p - 1)/k: k | a_p - 2 and k^2 | p + 1 - a_p.
/// Every k | d_p passes; the converse holds when End(E mod p) is maximal at
/// the primes dividing k. Throws std::invalid_argument if p | k.
bool divides_d(u64 k, u64 p, i64 a_p);

/// Largest k passing divides_d. A multiple of d_p and a divisor of p - 1.
u64 d_via_frobenius(u64 p, i64 a_p);

/// (d_p, e_p) for a good reduction. d is the Frobenius bound cut down, prime
/// by prime, to the largest l^s for which two independent points of order
/// l^s are exhibited; the cut is driven by observed point orders, so the
/// result is exact, not probabilistic.
LocalData structure_pair(const CurveModP& E, u64 stream = 0);
LocalData structure_pair(const CurveModP& E, u64 N, u64 stream);

/// lcm of the orders of `trials` sampled points. Divides e_p; equal to it
/// with probability tending to 1 in `trials`.
u64 exponent_via_points(const CurveModP& E, unsigned trials, u64 stream = 0);
u64 exponent_via_points(const CurveModP& E, const Factorization& N, unsigned trials, u64 stream);

}  // namespace ecexp
