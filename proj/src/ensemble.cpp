#include "xtree/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "xtree/error.hpp"

namespace xtree {
namespace {

constexpr int kMemberAttempts = 6;  // first try plus 5 retries

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

void EnsembleConfig::validate() const {
  if (k_members < 1) throw Error(Errc::InvalidConfig, "k_members must be at least 1");
  if (!(resample_ratio > 0.0) || !std::isfinite(resample_ratio)) {
    throw Error(Errc::InvalidConfig, "resample_ratio must be positive");
  }
  tree.validate();
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t substream) {
  return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ (substream * 0xD1B54A32D192ED03ULL));
}

std::vector<std::size_t> bootstrap_rows(std::size_t n, double ratio, std::mt19937_64& rng) {
  if (n == 0) throw Error(Errc::EmptyDataset, "cannot bootstrap an empty dataset");
  if (!(ratio > 0.0)) throw Error(Errc::InvalidConfig, "resample ratio must be positive");
  const auto count = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n)));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> rows(count);
  for (auto& r : rows) r = pick(rng);
  return rows;
}

Dataset bootstrap_sample(const Dataset& data, double ratio, std::mt19937_64& rng) {
  const auto rows = bootstrap_rows(data.rows(), ratio, rng);
  return subset(data, rows);
}

GevParams EnsembleModel::predict(std::span<const double> x) const {
  if (x.size() != schema.size()) {
    throw Error(Errc::DimensionMismatch,
                "expected " + std::to_string(schema.size()) + " covariates, got " + std::to_string(x.size()));
  }
  GevParams sum{0.0, 0.0, 0.0};
  for (const Tree& t : members) {
    const GevParams& p = t.predict(x);
    sum.mu += p.mu;
    sum.sigma += p.sigma;
    sum.xi += p.xi;
  }
  const double k = static_cast<double>(members.size());
  return {sum.mu / k, sum.sigma / k, sum.xi / k};
}

std::vector<GevParams> predict_series(const EnsembleModel& model, std::span<const double> xs) {
  const std::size_t m = model.schema.size();
  if (m == 0 ? !xs.empty() : xs.size() % m != 0) {
    throw Error(Errc::DimensionMismatch, "covariate matrix does not have " + std::to_string(m) + " columns");
  }
  std::vector<GevParams> out;
  if (m == 0) return out;
  out.reserve(xs.size() / m);
  for (std::size_t off = 0; off < xs.size(); off += m) out.push_back(model.predict(xs.subspan(off, m)));
  return out;
}

EnsembleModel fit_ensemble(const Dataset& data, const EnsembleConfig& config) {
  config.validate();
  if (data.rows() == 0) throw Error(Errc::EmptyDataset, "no covariate-target pairs");
  data.validate();

  std::vector<std::optional<Tree>> fitted(config.k_members);
  std::vector<std::exception_ptr> failures(config.k_members);

  auto fit_member = [&](std::size_t k) {
    for (int attempt = 0; attempt < kMemberAttempts; ++attempt) {
      std::mt19937_64 rng(derive_seed(config.seed, k, static_cast<std::uint64_t>(attempt)));
      const Dataset boot = bootstrap_sample(data, config.resample_ratio, rng);
      try {
        fitted[k] = fit_tree(boot, config.tree);
        return;
      } catch (const Error& e) {
        if (e.code() != Errc::RootUnfittable) throw;
      }
    }
    throw Error(Errc::MemberFitFailure, "member " + std::to_string(k) + " root unfittable after " +
                                            std::to_string(kMemberAttempts) + " bootstrap draws");
  };

  std::size_t workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, config.k_members);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t k = next++; k < config.k_members; k = next++) {
      try {
        fit_member(k);
      } catch (...) {
        failures[k] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  }

  // Lowest member index wins so the reported error is deterministic.
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  EnsembleModel model;
  model.config = config;
  model.schema = data.column_names;
  model.members.reserve(config.k_members);
  for (auto& t : fitted) model.members.push_back(std::move(*t));
  return model;
}

}  // namespace xtree
