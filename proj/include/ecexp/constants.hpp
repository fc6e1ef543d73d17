#pragma once

#include "ecexp/arith.hpp"
#include "ecexp/degrees.hpp"

namespace ecexp {

/// Exact Euler factors; std::overflow_error once the reduced fraction leaves
/// 64 bits (q around 400 for c). The products use 128-bit factors directly.
///
/// Euler factor of c at q: 1 - q^3 / ((q^2 - 1)(q^5 - 1)).
Rational universal_c_factor(u64 q);
/// Euler factor of C at q: 1 - q / (q^3 - 1).
Rational kummer_C_factor(u64 q);
/// Euler factor of the CM product at an unramified q (chi = +1 split, -1 inert).
Rational cm_factor(u64 q, int chi);

/// Products are truncated at a prime cutoff Q >= 65536, raised until the
/// certified log-tail is below eps / 2. Preconditions: 1e-12 <= eps.
BoundedValue universal_c(double eps);
BoundedValue kummer_C(double eps);
/// Product over unramified q of the split/inert CM factors for K = Q(sqrt -D).
BoundedValue cm_product(unsigned D, double eps);

/// Truncated sum of (-1)^omega(k) phi(rad k) / (k deg L_k) over k <= Y, with
/// the tail bounded by degree_tail_bound(Y).
BoundedValue c_E_series(const DegreeOracle& oracle, u64 Y);
/// c * prod_{q | m} (Euler factor of c at q)^-1 * S(m) with S(m) the exact
/// rational sum over h supported on primes of m. Needs a table entry for
/// every divisor of m (MissingDegreeError otherwise).
BoundedValue c_E_closed_form(const DegreeOracle& oracle, double eps = 1e-12);
/// The exact ratio c_E / c used by c_E_closed_form: S(m) times the inverted
/// Euler factors at q | m.
Rational closed_form_rational_factor(const DegreeOracle& oracle);
/// Truncated sum of mu(k) / deg L_k over k <= Y with certified tail.
BoundedValue cyclicity_constant(const DegreeOracle& oracle, u64 Y);

}  // namespace ecexp
