#pragma once

#include <chrono>
#include <span>
#include <vector>

#include "xtree/dataset.hpp"
#include "xtree/ensemble.hpp"
#include "xtree/gev.hpp"

namespace xtree {

/// Daily loss-of-load probability and its confidence level alpha = 1 - eta.
class RiskPolicy {
 public:
  /// Throws Errc::DomainError unless 0 < eta < 1.
  explicit RiskPolicy(double daily_lolp);

  double daily_lolp() const noexcept { return eta_; }
  double confidence() const noexcept { return 1.0 - eta_; }

 private:
  double eta_;
};

/// One-day-in-ten-years reliability target expressed per day: 0.1 / 365.
constexpr double nerc_daily_lolp() { return 0.1 / 365.0; }

/// Minimal capacity with exceedance probability <= eta under the worst-case
/// baseline, i.e. VaR at alpha.
double capacity_requirement(const GevParams& params, const RiskPolicy& policy);

/// (1 - alpha) * sum_n (CVaR_n - VaR_n) over the intervals of one day.
/// Throws Errc::HeavyTail when any xi >= 1.
double daily_eue(std::span<const GevParams> interval_params, const RiskPolicy& policy);

struct RiskRecord {
  Instant instant;
  GevParams params;
  double var = 0.0;
  double cvar = 0.0;
  double capacity = 0.0;
};

struct DailyEue {
  Instant day_start;
  double eue = 0.0;
};

struct RiskReport {
  std::vector<RiskRecord> records;
  std::vector<DailyEue> daily;
  double annual_eue = 0.0;
  double annual_capacity_sum = 0.0;
};

struct ReportOptions {
  std::chrono::minutes utc_offset{0};
  std::size_t intervals_per_day = 24;
};

/// Per-interval capacity, per-day EUE and their sums. `instants` must be
/// sorted and group into complete local days of `intervals_per_day` rows;
/// otherwise Errc::IncompleteDay.
RiskReport annual_report(const EnsembleModel& model, const Dataset& covariates,
                         std::span<const Instant> instants, const RiskPolicy& policy,
                         const ReportOptions& options = {});

/// Same as annual_report but for already predicted parameters.
RiskReport risk_report(std::span<const GevParams> params, std::span<const Instant> instants,
                       const RiskPolicy& policy, const ReportOptions& options = {});

}  // namespace xtree
