#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "xtree/error.hpp"
#include "xtree/pwm.hpp"
#include "xtree/synth.hpp"

using namespace xtree;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an xtree::Error");
  return Errc::InvalidConfig;
}

// Asymptotic Kolmogorov p-value with Stephens' small-sample correction.
double ks_uniform_p(std::vector<double> u) {
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max({d, u[i] - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - u[i]});
  }
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  return std::clamp(p, 0.0, 1.0);
}

EnsembleModel constant_model(const GevParams& p) {
  std::vector<TreeNode> nodes(1);
  nodes[0].params = p;
  EnsembleModel m;
  m.schema = {"x"};
  m.members.emplace_back(nodes, 1);
  return m;
}

}  // namespace

TEST_CASE("true parameter curves") {
  const GevParams p0 = synth::true_params(0.0);
  CHECK(p0.mu == doctest::Approx(1.3).epsilon(1e-15));
  CHECK(p0.sigma == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(p0.xi == doctest::Approx(0.3).epsilon(1e-15));

  const double x = 1.0;
  const GevParams p1 = synth::true_params(x);
  CHECK(p1.mu == doctest::Approx(std::cos(1.23) + 0.3 * std::cos(4.56)).epsilon(1e-15));
  CHECK(p1.sigma == doctest::Approx(1 + 0.1 * std::cos(6.78)).epsilon(1e-15));
  CHECK(p1.xi == doctest::Approx(0.3 * std::cos(5.67)).epsilon(1e-15));

  for (int i = 0; i <= 1000; ++i) {
    const GevParams p = synth::true_params(std::numbers::pi * i / 1000.0);
    CHECK(p.sigma >= 0.9);
    CHECK(p.sigma <= 1.1);
    CHECK(std::abs(p.xi) <= 0.3);
  }
  CHECK(code_of([] { synth::true_params(-0.01); }) == Errc::DomainError);
  CHECK(code_of([] { synth::true_params(3.2); }) == Errc::DomainError);
}

TEST_CASE("generation is sized and reproducible") {
  synth::SyntheticSpec spec;
  spec.seed = 12;
  const Dataset a = synth::generate(spec);
  const Dataset b = synth::generate(spec);
  CHECK(a.rows() == 1000);
  CHECK(a.column_names == std::vector<std::string>{"x"});
  CHECK(a.covariates == b.covariates);
  CHECK(a.targets == b.targets);
  for (double x : a.covariates) {
    CHECK(x >= 0.0);
    CHECK(x <= std::numbers::pi);
  }
  spec.seed = 13;
  CHECK(synth::generate(spec).targets != a.targets);

  spec.n = 0;
  CHECK(code_of([&] { synth::generate(spec); }) == Errc::InvalidConfig);
}

TEST_CASE("targets follow the true conditional law in each x bin") {
  synth::SyntheticSpec spec;
  spec.n = 5000;
  spec.seed = 21;
  const Dataset d = synth::generate(spec);
  std::vector<std::vector<double>> bins(10);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const double x = d.covariates[i];
    const auto b = std::min<std::size_t>(9, static_cast<std::size_t>(x / std::numbers::pi * 10));
    bins[b].push_back(cdf(d.targets[i], synth::true_params(x)));
  }
  int ok = 0;
  for (const auto& u : bins) {
    const double p = ks_uniform_p(u);
    INFO("bin p-value " << p);
    ok += p > 0.01;
  }
  CHECK(ok >= 9);
}

TEST_CASE("evaluation of the true model") {
  // A model that predicts the truth at x = 0 everywhere: grid errors vanish at 0.
  const EnsembleModel m = constant_model(synth::true_params(0.0));
  synth::SyntheticSpec spec;
  spec.n = 300;
  spec.seed = 4;
  const auto& q = synth::default_quantiles();
  const synth::ScoreTable t = synth::evaluate(m, spec, q, 11);
  REQUIRE(t.grid.size() == 11);
  CHECK(t.grid.front().x == 0.0);
  CHECK(t.grid.back().x == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  for (double e : t.grid.front().abs_quantile_error) CHECK(e == 0.0);
  CHECK(t.crps_samples == 300);
  CHECK(t.quantile_mae.size() == q.size());
  CHECK(t.mean_crps > 0.0);

  const synth::ScoreTable again = synth::evaluate(m, spec, q, 11);
  CHECK(again.mean_crps == t.mean_crps);
  CHECK(again.quantile_mae == t.quantile_mae);

  std::ostringstream csv;
  synth::write_eval_csv(csv, t);
  const std::string text = csv.str();
  CHECK(text.rfind("x,mu_true,sigma_true,xi_true,mu_hat,sigma_hat,xi_hat,err_q0.1,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 12);

  const auto j = synth::scores_json(t);
  CHECK(j.at("mean_crps").get<double>() == t.mean_crps);
  CHECK(j.at("quantiles").size() == q.size());

  EnsembleModel two = m;
  two.schema = {"x", "z"};
  CHECK(code_of([&] { synth::evaluate(two, spec, q); }) == Errc::DimensionMismatch);
}

TEST_CASE("Cramer-Rao band") {
  for (double x : {0.0, 0.7, 2.0, 3.1}) {
    const synth::CrbBand a = synth::crb_band(x, 100);
    const synth::CrbBand b = synth::crb_band(x, 400);
    CHECK(a.mu > 0.0);
    CHECK(a.sigma > 0.0);
    CHECK(a.xi > 0.0);
    CHECK(b.mu == doctest::Approx(a.mu / 2).epsilon(1e-13));
    CHECK(b.sigma == doctest::Approx(a.sigma / 2).epsilon(1e-13));
    CHECK(b.xi == doctest::Approx(a.xi / 2).epsilon(1e-13));
  }
  // Exact estimates are always contained.
  synth::ScoreTable t;
  for (double x : {0.0, 1.0, 2.0}) t.grid.push_back({x, synth::true_params(x), synth::true_params(x), {}});
  CHECK(synth::crb_containment(t, 1000) == 1.0);
  t.grid[1].estimate.xi += 1.0;
  CHECK(synth::crb_containment(t, 1000) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("PWM variance respects the Cramer-Rao bound" * doctest::description("slow")) {
  const GevParams truth = synth::true_params(0.0);
  const std::size_t n = 10'000;
  const int reps = 150;
  Eigen::Vector3d m1 = Eigen::Vector3d::Zero(), m2 = Eigen::Vector3d::Zero();
  for (int r = 0; r < reps; ++r) {
    const GevParams p = estimate(sample(truth, n, 9000 + r));
    const Eigen::Vector3d v(p.mu, p.sigma, p.xi);
    m1 += v;
    m2 += v.cwiseProduct(v);
  }
  m1 /= reps;
  const Eigen::Vector3d var = (m2 / reps - m1.cwiseProduct(m1)) * reps / (reps - 1);
  const Eigen::Vector3d crb = fisher_information(truth).inverse().diagonal() / static_cast<double>(n);
  for (int i = 0; i < 3; ++i) {
    INFO("component " << i << " var " << var[i] << " crb " << crb[i]);
    // 150 replicates put ~12% sampling noise on the variance.
    CHECK(var[i] > 0.75 * crb[i]);
  }
}
