#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "xtree/error.hpp"
#include "xtree/gev.hpp"
#include "xtree/pwm.hpp"

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

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("moments of {0, 1, 2}") {
  const std::vector<double> s{0, 1, 2};
  const PwmMoments m = compute_moments(s);
  CHECK(m.n == 3);
  CHECK(m.b0 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.b1 == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(m.b2 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  // 2/3 - log 2 / log 3
  CHECK(m.c == doctest::Approx(0.035736913095209229567).epsilon(1e-13));
}

TEST_CASE("estimate on {0, 1, 2}") {
  const std::vector<double> s{0, 1, 2};
  const GevParams p = estimate(s);
  CHECK(p.xi == doctest::Approx(-0.28463082102566512157).epsilon(1e-13));
  CHECK(p.sigma == doctest::Approx(1.1776392891765930138).epsilon(1e-13));
  CHECK(p.mu == doctest::Approx(0.5859620967182006516).epsilon(1e-13));
}

TEST_CASE("sample mean is b0") {
  const std::vector<double> s{3.5, -1.0, 7.25, 0.5, 2.0, 2.0, 11.0};
  double sum = 0.0;
  for (double v : s) sum += v;
  CHECK(compute_moments(s).b0 == doctest::Approx(sum / s.size()).epsilon(1e-15));
}

TEST_CASE("permutation invariance") {
  const PwmMoments a = compute_moments(std::vector<double>{2, 0, 1});
  const PwmMoments b = compute_moments(std::vector<double>{0, 1, 2});
  CHECK(a.b0 == b.b0);
  CHECK(a.b1 == b.b1);
  CHECK(a.b2 == b.b2);
  CHECK(a.c == b.c);

  auto ys = sample({0, 1, 0.1}, 500, 3);
  for (int i = 0; i < 20; ++i) ys.push_back(ys[i]);  // ties
  const GevParams ref = estimate(ys);
  std::reverse(ys.begin(), ys.end());
  CHECK(estimate(ys) == ref);
  std::rotate(ys.begin(), ys.begin() + 137, ys.end());
  CHECK(estimate(ys) == ref);
}

TEST_CASE("errors") {
  CHECK(code_of([] { compute_moments(std::vector<double>{1, 2}); }) == Errc::TooFewSamples);
  CHECK(code_of([] { compute_moments(std::vector<double>{}); }) == Errc::TooFewSamples);
  CHECK(code_of([] { compute_moments(std::vector<double>{5, 5, 5, 5}); }) == Errc::DegenerateSample);
  CHECK(code_of([] { estimate(std::vector<double>{5, 5, 5, 5}); }) == Errc::DegenerateSample);
  CHECK(code_of([] { estimate(std::vector<double>{0, 10, 10, 10, 10}); }) == Errc::ShapeOutOfRange);

  PwmMoments bad;  // 2 b1 < b0 is impossible for a real sample
  bad.b0 = 1.0;
  bad.b1 = 0.4;
  bad.b2 = 0.2;
  bad.c = (2 * bad.b1 - bad.b0) / (3 * bad.b2 - bad.b0) - std::log(2.0) / std::log(3.0);
  bad.n = 10;
  CHECK(code_of([&] { estimate_from_moments(bad); }) == Errc::InvalidScale);
}

TEST_CASE("large-sample recovery of GEV(0, 1, 0.2)") {
  const auto ys = sample({0, 1, 0.2}, 100'000, 17);
  const GevParams p = estimate(ys);
  CHECK(std::abs(p.mu) < 0.02);
  CHECK(std::abs(p.sigma - 1.0) < 0.02);
  CHECK(std::abs(p.xi - 0.2) < 0.02);
}

TEST_CASE("translation and scale equivariance") {
  const auto ys = sample({1, 2, -0.1}, 2000, 5);
  const GevParams base = estimate(ys);

  std::vector<double> shifted(ys), scaled(ys);
  for (double& v : shifted) v += 10.0;
  for (double& v : scaled) v *= 3.5;
  const GevParams s = estimate(shifted);
  const GevParams k = estimate(scaled);

  CHECK(s.mu == doctest::Approx(base.mu + 10.0).epsilon(1e-12));
  CHECK(s.sigma == doctest::Approx(base.sigma).epsilon(1e-12));
  CHECK(s.xi == doctest::Approx(base.xi).epsilon(1e-12));
  CHECK(k.mu == doctest::Approx(base.mu * 3.5).epsilon(1e-12));
  CHECK(k.sigma == doctest::Approx(base.sigma * 3.5).epsilon(1e-12));
  CHECK(k.xi == doctest::Approx(base.xi).epsilon(1e-12));
}

TEST_CASE("shape error shrinks with sample size") {
  const GevParams truth{0, 1, 0.2};
  double prev = 1e9;
  for (std::size_t n : {100u, 1000u, 10000u}) {
    std::vector<double> errs;
    for (std::uint64_t seed = 0; seed < 41; ++seed) {
      errs.push_back(std::abs(estimate(sample(truth, n, 1000 * n + seed)).xi - truth.xi));
    }
    const double med = median(errs);
    INFO("n=" << n << " median |xi error|=" << med);
    CHECK(med < prev);
    prev = med;
  }
}

TEST_CASE("Gumbel samples give a near-zero shape") {
  const GevParams p = estimate(sample({2, 0.5, 0.0}, 10'000, 8));
  CHECK(std::abs(p.xi) < 0.05);
  CHECK(std::abs(p.mu - 2.0) < 0.03);
  CHECK(std::abs(p.sigma - 0.5) < 0.03);
}

TEST_CASE("Gumbel branch of the scale and location") {
  // c within eps of zero: compare the limit branch with the general formula
  // evaluated at a tiny nonzero shape.
  const auto ys = sample({0, 1, 0.0}, 300, 2);
  PwmMoments m = compute_moments(ys);
  m.c = 0.0;
  const GevParams g = estimate_from_moments(m);
  CHECK(g.xi == 0.0);
  CHECK(g.sigma > 0.0);
  m.c = -1e-7;  // xi ~ 7.9e-7, general branch
  const GevParams near = estimate_from_moments(m);
  CHECK(near.xi != 0.0);
  CHECK(std::abs(near.sigma - g.sigma) < 1e-5);
  CHECK(std::abs(near.mu - g.mu) < 1e-5);
}
