#include "xtree/special.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "xtree/error.hpp"

namespace xtree::special {
namespace {

double checked(double value, const char* name, double arg) {
  if (!std::isfinite(value)) {
    throw Error(Errc::NumericalError, std::string(name) + " not finite at " + std::to_string(arg));
  }
  return value;
}

}  // namespace

double gamma(double x) {
  if (x <= 0.0 && x == std::nearbyint(x)) {
    throw Error(Errc::NumericalError, "gamma pole at " + std::to_string(x));
  }
  return checked(std::tgamma(x), "gamma", x);
}

double digamma(double x) {
  if (x <= 0.0 && x == std::nearbyint(x)) {
    throw Error(Errc::NumericalError, "digamma pole at " + std::to_string(x));
  }
  return checked(boost::math::digamma(x), "digamma", x);
}

double lower_gamma(double s, double x) {
  if (!(s > 0.0) || !(x >= 0.0)) {
    throw Error(Errc::NumericalError, "lower_gamma outside domain");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return gamma(s);
  return checked(boost::math::tgamma_lower(s, x), "lower_gamma", x);
}

double ei(double x) {
  if (x == 0.0 || std::isnan(x)) {
    throw Error(Errc::NumericalError, "Ei undefined at 0");
  }
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  return checked(boost::math::expint(x), "Ei", x);
}

double li(double x) {
  if (x == 0.0) return 0.0;
  if (!(x > 0.0) || x == 1.0) {
    throw Error(Errc::NumericalError, "li outside domain");
  }
  return ei(std::log(x));
}

double gamma_one_minus_ratio(double xi) {
  if (xi == 0.0) return kEulerGamma;
  // tgamma1pm1 keeps relative accuracy where Gamma(1 - xi) is close to 1.
  return checked(boost::math::tgamma1pm1(-xi), "gamma", 1.0 - xi) / xi;
}

}  // namespace xtree::special
