#pragma once

#include <cstddef>
#include <span>

#include "xtree/gev.hpp"

namespace xtree {

/// Sample probability-weighted moments of an ascending-sorted sample.
struct PwmMoments {
  double b0 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double c = 0.0;
  std::size_t n = 0;
};

/// Moments of an arbitrary-order sample (a sorted copy is taken).
/// Throws Errc::TooFewSamples for n < 3 and Errc::DegenerateSample for a
/// constant sample.
PwmMoments compute_moments(std::span<const double> sample);

/// Same as compute_moments but requires the input to be sorted ascending.
PwmMoments compute_moments_sorted(std::span<const double> sorted);

/// GEV parameters from moments. Throws Errc::InvalidScale when sigma <= 0 and
/// Errc::ShapeOutOfRange when xi <= -1.
GevParams estimate_from_moments(const PwmMoments& m, GumbelThreshold eps = {});

GevParams estimate(std::span<const double> sample, GumbelThreshold eps = {});
GevParams estimate_sorted(std::span<const double> sorted, GumbelThreshold eps = {});

}  // namespace xtree
