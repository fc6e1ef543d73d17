#pragma once

namespace ecexp {

/// Offset logarithmic integral: the integral of 1/log u over [2, x].
/// Throws std::domain_error for x < 2.
double log_integral(double x);

}  // namespace ecexp
