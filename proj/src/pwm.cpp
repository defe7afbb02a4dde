#include "xtree/pwm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "xtree/error.hpp"
#include "xtree/special.hpp"

namespace xtree {
namespace {

const double kLog2OverLog3 = std::numbers::ln2 / std::log(3.0);

}  // namespace

PwmMoments compute_moments_sorted(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  if (n < 3) {
    throw Error(Errc::TooFewSamples, "PWM needs at least 3 values, got " + std::to_string(n));
  }
  if (sorted.front() == sorted.back()) {
    throw Error(Errc::DegenerateSample, "constant sample");
  }
  const double n1 = static_cast<double>(n - 1);
  const double n2 = static_cast<double>(n - 2);
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double y = sorted[j];
    const double r = static_cast<double>(j);  // rank - 1
    s0 += y;
    s1 += r * y;
    s2 += r * (r - 1.0) * y;
  }
  const double nn = static_cast<double>(n);
  PwmMoments m;
  m.n = n;
  m.b0 = s0 / nn;
  m.b1 = s1 / (nn * n1);
  m.b2 = s2 / (nn * n1 * n2);
  const double denom = 3.0 * m.b2 - m.b0;
  if (!(denom > 0.0) && !(denom < 0.0)) {
    throw Error(Errc::DegenerateSample, "3 b2 - b0 vanishes");
  }
  m.c = (2.0 * m.b1 - m.b0) / denom - kLog2OverLog3;
  if (!std::isfinite(m.c)) {
    throw Error(Errc::DegenerateSample, "non-finite PWM ratio");
  }
  return m;
}

PwmMoments compute_moments(std::span<const double> sample) {
  std::vector<double> sorted(sample.begin(), sample.end());
  std::stable_sort(sorted.begin(), sorted.end());
  return compute_moments_sorted(sorted);
}

GevParams estimate_from_moments(const PwmMoments& m, GumbelThreshold eps) {
  const double c = m.c;
  const double xi = -7.8590 * c - 2.9554 * c * c;
  if (!(xi > -1.0)) {
    throw Error(Errc::ShapeOutOfRange, "PWM shape " + std::to_string(xi) + " <= -1");
  }
  double sigma;
  double mu;
  if (eps.is_gumbel(xi)) {
    sigma = (2.0 * m.b1 - m.b0) / std::numbers::ln2;
    mu = m.b0 - special::kEulerGamma * sigma;
  } else {
    // 1 - 2^xi through expm1 to stay accurate for small |xi|.
    const double one_minus_pow2 = -std::expm1(xi * std::numbers::ln2);
    sigma = (m.b0 - 2.0 * m.b1) * xi / (special::gamma(1.0 - xi) * one_minus_pow2);
    mu = m.b0 - sigma * special::gamma_one_minus_ratio(xi);
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(Errc::InvalidScale, "PWM scale " + std::to_string(sigma) + " not positive");
  }
  return {mu, sigma, xi};
}

GevParams estimate_sorted(std::span<const double> sorted, GumbelThreshold eps) {
  return estimate_from_moments(compute_moments_sorted(sorted), eps);
}

GevParams estimate(std::span<const double> sample, GumbelThreshold eps) {
  return estimate_from_moments(compute_moments(sample), eps);
}

}  // namespace xtree
