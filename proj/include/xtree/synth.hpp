#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <span>
#include <vector>

#include <json.hpp>

#include "xtree/dataset.hpp"
#include "xtree/ensemble.hpp"
#include "xtree/gev.hpp"

namespace xtree::synth {

struct SyntheticSpec {
  std::size_t n = 1000;
  double x_min = 0.0;
  double x_max = std::numbers::pi;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Ground-truth parameter curves on [0, pi]:
///   mu = cos(1.23x) + 0.3cos(4.56x), sigma = 1 + 0.1cos(6.78x), xi = 0.3cos(5.67x).
GevParams true_params(double x);

/// x ~ U[x_min, x_max], y ~ GEV(true_params(x)); single covariate column "x".
Dataset generate(const SyntheticSpec& spec);

/// Quantiles reported by default; the last two are the low-probability
/// high-consequence tail.
inline const std::vector<double>& default_quantiles() {
  static const std::vector<double> q{0.1, 0.5, 0.9, 0.999, 0.999999};
  return q;
}

struct GridPoint {
  double x = 0.0;
  GevParams truth;
  GevParams estimate;
  std::vector<double> abs_quantile_error;  // one per requested quantile
};

struct ScoreTable {
  double mean_crps = 0.0;
  std::size_t crps_samples = 0;
  std::vector<double> quantiles;
  std::vector<double> quantile_mae;
  std::vector<GridPoint> grid;
};

/// Mean CRPS on a fresh sample (seed derived from spec.seed) plus quantile
/// errors and parameter curves on a uniform grid over [x_min, x_max].
ScoreTable evaluate(const EnsembleModel& model, const SyntheticSpec& spec, std::span<const double> quantiles,
                    std::size_t grid_points = 200);

/// 90% Cramer-Rao half-widths of (mu, sigma, xi) at the true parameters of x.
struct CrbBand {
  double mu = 0.0;
  double sigma = 0.0;
  double xi = 0.0;
};

CrbBand crb_band(double x, std::size_t n_effective);

/// Fraction of grid points whose three estimates all lie inside the band.
double crb_containment(const ScoreTable& table, std::size_t n_effective);

/// `x,mu_true,sigma_true,xi_true,mu_hat,sigma_hat,xi_hat,err_q<q>...`
void write_eval_csv(std::ostream& out, const ScoreTable& table);

/// {mean_crps, crps_samples, quantiles, quantile_mae}
nlohmann::json scores_json(const ScoreTable& table);

}  // namespace xtree::synth
