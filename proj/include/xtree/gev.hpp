#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace xtree {

/// Location, scale and shape of a generalized extreme value distribution.
struct GevParams {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;

  friend bool operator==(const GevParams&, const GevParams&) = default;
};

/// Throws Errc::InvalidScale / Errc::DomainError when the triple is not a
/// distribution (sigma <= 0 or non-finite components).
void validate(const GevParams& p);

/// |xi| <= eps_xi selects the Gumbel (xi = 0) branch of every piecewise formula.
struct GumbelThreshold {
  double eps_xi = 1e-9;

  bool is_gumbel(double xi) const noexcept { return xi <= eps_xi && xi >= -eps_xi; }
};

inline constexpr double kSupportPenalty = 1e12;
inline constexpr double kFisherConditionLimit = 1e12;

bool in_support(double y, const GevParams& p, GumbelThreshold eps = {});

/// tau(y) = (1 + xi (y - mu) / sigma)^(-1/xi), or exp(-(y - mu) / sigma) at xi = 0.
/// Throws Errc::SupportViolation outside the support.
double tau(double y, const GevParams& p, GumbelThreshold eps = {});

/// Density; 0 outside the support.
double pdf(double y, const GevParams& p, GumbelThreshold eps = {});
double cdf(double y, const GevParams& p, GumbelThreshold eps = {});

/// Quantile function. Throws Errc::DomainError unless 0 < alpha < 1.
double inverse_cdf(double alpha, const GevParams& p, GumbelThreshold eps = {});

/// Negative log-likelihood log(sigma) - (1 + xi) log(tau) + tau. Outside the
/// support (or on overflow) the finite `penalty` is returned so that candidate
/// partitions stay comparable.
double log_score(double y, const GevParams& p, GumbelThreshold eps = {},
                 double penalty = kSupportPenalty);

/// d log_score / d(mu, sigma, xi). Throws Errc::SupportViolation.
Eigen::Vector3d gradient(double y, const GevParams& p, GumbelThreshold eps = {});

/// Expected information per observation, ordered (mu, sigma, xi).
/// Throws Errc::RegularityError for xi <= -0.5.
Eigen::Matrix3d fisher_information(const GevParams& p);

/// I^-1 * gradient. Throws Errc::IllConditioned when cond(I) exceeds kFisherConditionLimit.
Eigen::Vector3d natural_gradient(double y, const GevParams& p, GumbelThreshold eps = {});

/// Expectation; +infinity for xi >= 1.
double mean(const GevParams& p, GumbelThreshold eps = {});

/// Value-at-risk at confidence alpha (same contract as inverse_cdf).
double value_at_risk(double alpha, const GevParams& p, GumbelThreshold eps = {});

/// Expected value beyond the alpha quantile. Throws Errc::HeavyTail for xi >= 1.
double cvar(double alpha, const GevParams& p, GumbelThreshold eps = {});

/// Closed-form continuous ranked probability score. Throws Errc::HeavyTail for xi >= 1.
double crps(double y, const GevParams& p, GumbelThreshold eps = {});

/// One inverse-transform draw.
double draw(const GevParams& p, std::mt19937_64& rng);

/// n inverse-transform draws from a generator seeded with `seed`.
std::vector<double> sample(const GevParams& p, std::size_t n, std::uint64_t seed);

}  // namespace xtree
