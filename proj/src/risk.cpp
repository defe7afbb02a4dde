#include "xtree/risk.hpp"

#include <string>

#include "xtree/error.hpp"

namespace xtree {

RiskPolicy::RiskPolicy(double daily_lolp) : eta_(daily_lolp) {
  if (!(daily_lolp > 0.0 && daily_lolp < 1.0)) {
    throw Error(Errc::DomainError, "daily LOLP must lie in (0, 1)");
  }
}

double capacity_requirement(const GevParams& params, const RiskPolicy& policy) {
  validate(params);
  return value_at_risk(policy.confidence(), params);
}

double daily_eue(std::span<const GevParams> interval_params, const RiskPolicy& policy) {
  const double alpha = policy.confidence();
  double sum = 0.0;
  for (const GevParams& p : interval_params) {
    validate(p);
    sum += cvar(alpha, p) - value_at_risk(alpha, p);
  }
  return (1.0 - alpha) * sum;
}

RiskReport risk_report(std::span<const GevParams> params, std::span<const Instant> instants,
                       const RiskPolicy& policy, const ReportOptions& options) {
  if (params.size() != instants.size()) {
    throw Error(Errc::DimensionMismatch, "parameter and instant counts differ");
  }
  const double alpha = policy.confidence();
  RiskReport report;
  report.records.reserve(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    validate(params[i]);
    const double var = value_at_risk(alpha, params[i]);
    report.records.push_back({instants[i], params[i], var, cvar(alpha, params[i]), var});
  }

  std::size_t i = 0;
  while (i < instants.size()) {
    const Instant day = local_day_start(instants[i], options.utc_offset);
    std::size_t j = i;
    while (j < instants.size() && local_day_start(instants[j], options.utc_offset) == day) {
      if (j > i && !(instants[j - 1] < instants[j])) {
        throw Error(Errc::IncompleteDay, "instants are not strictly increasing at " + format_instant(instants[j]));
      }
      ++j;
    }
    if (j - i != options.intervals_per_day) {
      throw Error(Errc::IncompleteDay, "day starting " + format_instant(day) + " has " + std::to_string(j - i) +
                                           " intervals, expected " + std::to_string(options.intervals_per_day));
    }
    double eue_sum = 0.0;
    for (std::size_t k = i; k < j; ++k) eue_sum += report.records[k].cvar - report.records[k].var;
    const double eue = (1.0 - alpha) * eue_sum;
    report.daily.push_back({day, eue});
    report.annual_eue += eue;
    i = j;
  }
  for (const auto& r : report.records) report.annual_capacity_sum += r.capacity;
  return report;
}

RiskReport annual_report(const EnsembleModel& model, const Dataset& covariates,
                         std::span<const Instant> instants, const RiskPolicy& policy,
                         const ReportOptions& options) {
  if (covariates.cols() != model.schema.size()) {
    throw Error(Errc::DimensionMismatch, "covariate columns do not match the model schema");
  }
  const auto params = predict_series(model, covariates.covariates);
  return risk_report(params, instants, policy, options);
}

}  // namespace xtree
