#include "ecexp/log_integral.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

namespace ecexp {

double log_integral(double x) {
  if (!(x >= 2.0)) throw std::domain_error("log_integral: x must be >= 2");
  if (x == 2.0) return 0.0;
  // Substituting u = e^t turns du/log u into e^t/t dt, which is smooth on
  // [log 2, log x] and easy for Gauss-Kronrod.
  auto integrand = [](long double t) { return std::exp(t) / t; };
  const long double a = std::log(2.0L);
  const long double b = std::log(static_cast<long double>(x));
  long double err = 0;
  const long double value = boost::math::quadrature::gauss_kronrod<long double, 31>::integrate(
      integrand, a, b, 30, 1e-12L, &err);
  return static_cast<double>(value);
}

}  // namespace ecexp
