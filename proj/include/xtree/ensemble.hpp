#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "xtree/dataset.hpp"
#include "xtree/gev.hpp"
#include "xtree/tree.hpp"

namespace xtree {

struct EnsembleConfig {
  std::size_t k_members = 50;
  double resample_ratio = 1.0;
  std::uint64_t seed = 0;
  TreeConfig tree{};
  // Worker threads for member fitting; 0 picks the hardware concurrency.
  // Results do not depend on this value.
  std::size_t threads = 0;

  void validate() const;
};

struct EnsembleModel {
  std::vector<Tree> members;
  EnsembleConfig config;
  std::vector<std::string> schema;

  /// Member-averaged parameters. Throws Errc::DimensionMismatch.
  GevParams predict(std::span<const double> x) const;
};

/// Deterministic 64-bit seed derived from a master seed and stream indices.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t substream = 0);

/// ceil(ratio * N) rows drawn uniformly with replacement. Throws Errc::EmptyDataset.
Dataset bootstrap_sample(const Dataset& data, double ratio, std::mt19937_64& rng);

/// Row indices of a bootstrap sample (same draw sequence as bootstrap_sample).
std::vector<std::size_t> bootstrap_rows(std::size_t n, double ratio, std::mt19937_64& rng);

/// Fits K members on independent bootstrap samples. A member whose root is
/// unfittable is redrawn up to 5 times before Errc::MemberFitFailure.
EnsembleModel fit_ensemble(const Dataset& data, const EnsembleConfig& config);

inline GevParams predict(const EnsembleModel& model, std::span<const double> x) { return model.predict(x); }

/// Row-wise predict over a row-major matrix with model.schema.size() columns.
std::vector<GevParams> predict_series(const EnsembleModel& model, std::span<const double> xs);

}  // namespace xtree
