#pragma once

// Brute-force reference computations used to check the closed forms.
// Everything integrates densities or quantile curves numerically instead of
// using the special-function expressions the library evaluates.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "xtree/gev.hpp"

namespace oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Integral of f over [a, b]; either end may be infinite.
template <class F>
double integrate(F f, double a, double b) {
  if (a == b) return 0.0;
  if (std::isfinite(a) && std::isfinite(b)) {
    boost::math::quadrature::tanh_sinh<double> q;
    return q.integrate(f, a, b);
  }
  if (!std::isfinite(a) && !std::isfinite(b)) {
    boost::math::quadrature::sinh_sinh<double> q;
    return q.integrate(f);
  }
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate(f, a, b);
}

// Integral over the real line split at the given interior breakpoints.
template <class F>
double integrate_line(F f, std::vector<double> breaks) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double total = integrate(f, -kInf, breaks.front());
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) total += integrate(f, breaks[i], breaks[i + 1]);
  return total + integrate(f, breaks.back(), kInf);
}

// Finite support edge (lower for xi > 0, upper for xi < 0), or mu for Gumbel.
inline double support_edge(const xtree::GevParams& p) {
  return p.xi == 0.0 ? p.mu : p.mu - p.sigma / p.xi;
}

// Quantile as a function of t = -log(u), so that u -> 1 keeps full precision.
inline double quantile_t(double t, const xtree::GevParams& p) {
  if (p.xi == 0.0) return p.mu - p.sigma * std::log(t);
  return p.mu + p.sigma * (std::pow(t, -p.xi) - 1.0) / p.xi;
}

inline double pdf_mass(const xtree::GevParams& p) {
  return integrate_line([&](double y) { return xtree::pdf(y, p); }, {support_edge(p), p.mu});
}

// integral_{-inf}^{inf} (F(t) - 1{t >= y})^2 dt
inline double crps(double y, const xtree::GevParams& p) {
  auto f = [&](double t) {
    const double d = xtree::cdf(t, p) - (t >= y ? 1.0 : 0.0);
    return d * d;
  };
  return integrate_line(f, {support_edge(p), p.mu, y});
}

// (1 / (1 - alpha)) integral_alpha^1 Q(u) du with u = exp(-t).
inline double cvar(double alpha, const xtree::GevParams& p) {
  const double t_alpha = -std::log(alpha);
  boost::math::quadrature::tanh_sinh<double> q;
  const double v = q.integrate([&](double t) { return quantile_t(t, p) * std::exp(-t); }, 0.0, t_alpha);
  return v / (1.0 - alpha);
}

// integral_{VaR}^{inf} (y - VaR) pdf(y) dy
inline double tail_excess(double alpha, const xtree::GevParams& p) {
  const double var = xtree::value_at_risk(alpha, p);
  const double hi = p.xi < 0.0 ? support_edge(p) : kInf;
  return integrate([&](double y) { return (y - var) * xtree::pdf(y, p); }, var, hi);
}

// Central finite difference of log_score in each parameter.
inline std::vector<double> fd_gradient(double y, const xtree::GevParams& p, double rel_step = 1e-6) {
  std::vector<double> g(3);
  for (int k = 0; k < 3; ++k) {
    xtree::GevParams a = p, b = p;
    double* pa = k == 0 ? &a.mu : k == 1 ? &a.sigma : &a.xi;
    double* pb = k == 0 ? &b.mu : k == 1 ? &b.sigma : &b.xi;
    const double h = rel_step * std::max(1.0, std::abs(*pa));
    *pa += h;
    *pb -= h;
    g[k] = (xtree::log_score(y, a) - xtree::log_score(y, b)) / (2.0 * h);
  }
  return g;
}

// Random admissible parameters: xi in (-0.45, 0.9), sigma in [0.1, 10].
inline xtree::GevParams random_params(std::mt19937_64& rng, double xi_lo = -0.45, double xi_hi = 0.9) {
  std::uniform_real_distribution<double> mu(-5.0, 5.0), lsig(std::log(0.1), std::log(10.0)), xi(xi_lo, xi_hi);
  return {mu(rng), std::exp(lsig(rng)), xi(rng)};
}

}  // namespace oracle
