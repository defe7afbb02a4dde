#pragma once

// Thin wrappers over the special functions the GEV formulas need. Poles and
// out-of-domain arguments raise Errc::NumericalError instead of returning NaN.

namespace xtree::special {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kPi = 3.14159265358979323846264338327950288;

double gamma(double x);
double digamma(double x);

// Lower incomplete gamma: integral_0^x t^(s-1) e^-t dt, s > 0, x >= 0 (x may be +inf).
double lower_gamma(double s, double x);

// Exponential integral Ei(x) = PV integral_-inf^x e^t / t dt, x != 0.
double ei(double x);

// Logarithmic integral li(x) = Ei(log x), 0 <= x, x != 1.
double li(double x);

// (Gamma(1 - xi) - 1) / xi without cancellation near xi = 0.
double gamma_one_minus_ratio(double xi);

}  // namespace xtree::special
