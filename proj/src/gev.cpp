#include "xtree/gev.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "xtree/error.hpp"
#include "xtree/special.hpp"

namespace xtree {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(tau) for a point known to be inside the support.
double log_tau(double y, const GevParams& p, GumbelThreshold eps) {
  const double z = (y - p.mu) / p.sigma;
  if (eps.is_gumbel(p.xi)) return -z;
  return -std::log1p(p.xi * z) / p.xi;
}

// -log(alpha), accurate for alpha close to 1.
double neg_log(double alpha) {
  return alpha > 0.5 ? -std::log1p(alpha - 1.0) : -std::log(alpha);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(Errc::DomainError, "probability must lie in (0, 1), got " + std::to_string(alpha));
  }
}

// Taylor coefficients in xi about 0 of the sigma-free parts of the Fisher
// entries that carry 1/xi^k cancellation. Valid radius is 0.5; used for |xi| < 0.05.
constexpr int kSeriesTerms = 14;
constexpr double kFisherSeriesRadius = 0.05;
constexpr std::array<double, kSeriesTerms> kMuSigma = {
    -0.42278433509846713939, -2.2355209912793190844, 0.58339289507346185656,
    -5.0699591426145986964,  7.26810905277818577,    -16.410354269592655433,
    31.786128224187374751,   -64.098046337639510304, 127.95812756827129466,
    -256.01672499367249648,  511.99414414157230499,  -1024.0022860562725934,
    2047.9994662703441736,   -4096.0003199317359727};
constexpr std::array<double, kSeriesTerms> kMuXi = {
    0.41184033042643969479, -0.25090798791318779509, 3.7839071042725705477,
    -6.3592950663535744071, 15.3617019084494693,     -30.784164634536142163,
    63.088065756292655007,  -126.95384964327942961,  255.01371541538114183,
    -510.99246851815628782, 1023.0013103145214321,   -2046.9989193652485287,
    4095.0000153106223104,  -8190.9998495354166131};
constexpr std::array<double, kSeriesTerms> kSigmaSigma = {
    1.8236806608528793896,  -0.66496981432054812294, 4.9957101318610847981,
    -7.2678420707094407552, 16.399200223874524442,   -31.78327557836621941,
    64.095942404298812916,  -127.95720799443246871,  256.01623460522167391,
    -511.99390320013648114, 1024.0021643824660614,   -2047.9994054774528625,
    4096.0002894781789349,  -8192.0000018887255867};
constexpr std::array<double, kSeriesTerms> kSigmaXi = {
    0.33248490716027406147, -3.7096580935190566494, 6.3590280842848293923,
    -15.350547862731338309, 30.781311988714986822,  -63.085961822951957619,
    126.95293006944060367,  -255.01322502693031926, 510.99222757672046397,
    -1023.0011886407149001, 2046.9988585723572177,  -4094.9999848570652726,
    8190.9998343004807182,  -16382.999973281260795};
constexpr std::array<double, kSeriesTerms> kXiXi = {
    2.4236060551770285007,  -5.4502140978602180295, 14.301895501588152175,
    -29.779348399063754235, 62.075981241605102322,  -125.94865214444873862,
    254.0102154486389646,   -509.9905519533044468,  1022.0002128989637388,
    -2045.9983116672615729, 4093.9996802359516103,  -8189.9996667122358497,
    16381.999881815022174,  -32765.999930646175381};

double horner(const std::array<double, kSeriesTerms>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace

void validate(const GevParams& p) {
  if (!std::isfinite(p.mu) || !std::isfinite(p.xi) || !std::isfinite(p.sigma)) {
    throw Error(Errc::DomainError, "non-finite GEV parameter");
  }
  if (!(p.sigma > 0.0)) {
    throw Error(Errc::InvalidScale, "sigma must be positive, got " + std::to_string(p.sigma));
  }
}

bool in_support(double y, const GevParams& p, GumbelThreshold eps) {
  if (eps.is_gumbel(p.xi)) return std::isfinite(y);
  return 1.0 + p.xi * (y - p.mu) / p.sigma > 0.0;
}

double tau(double y, const GevParams& p, GumbelThreshold eps) {
  if (!in_support(y, p, eps)) {
    throw Error(Errc::SupportViolation, "y=" + std::to_string(y) + " outside support");
  }
  return std::exp(log_tau(y, p, eps));
}

double pdf(double y, const GevParams& p, GumbelThreshold eps) {
  if (!in_support(y, p, eps)) return 0.0;
  const double lt = log_tau(y, p, eps);
  return std::exp((1.0 + p.xi) * lt - std::exp(lt)) / p.sigma;
}

double cdf(double y, const GevParams& p, GumbelThreshold eps) {
  if (!in_support(y, p, eps)) {
    if (std::isnan(y)) return std::numeric_limits<double>::quiet_NaN();
    // Below the lower edge for xi > 0, above the upper edge for xi < 0.
    if (eps.is_gumbel(p.xi)) return y > 0 ? 1.0 : 0.0;
    return p.xi > 0.0 ? 0.0 : 1.0;
  }
  return std::exp(-std::exp(log_tau(y, p, eps)));
}

double inverse_cdf(double alpha, const GevParams& p, GumbelThreshold eps) {
  check_alpha(alpha);
  const double log_nla = std::log(neg_log(alpha));
  if (eps.is_gumbel(p.xi)) return p.mu - p.sigma * log_nla;
  return p.mu + p.sigma * std::expm1(-p.xi * log_nla) / p.xi;
}

double value_at_risk(double alpha, const GevParams& p, GumbelThreshold eps) {
  return inverse_cdf(alpha, p, eps);
}

double log_score(double y, const GevParams& p, GumbelThreshold eps, double penalty) {
  if (!in_support(y, p, eps)) return penalty;
  const double lt = log_tau(y, p, eps);
  const double score = std::log(p.sigma) - (1.0 + p.xi) * lt + std::exp(lt);
  if (!std::isfinite(score) || score > penalty) return penalty;
  return score;
}

Eigen::Vector3d gradient(double y, const GevParams& p, GumbelThreshold eps) {
  if (!in_support(y, p, eps)) {
    throw Error(Errc::SupportViolation, "gradient outside support");
  }
  const double s = p.sigma;
  const double xi = p.xi;
  const double z = (y - p.mu) / s;
  if (eps.is_gumbel(xi)) {
    const double t = std::exp(-z);
    return {-(1.0 - t) / s, (1.0 - z * (1.0 - t)) / s, z - 0.5 * z * z * (1.0 - t)};
  }
  const double omega = 1.0 + xi * z;
  const double log_omega = std::log1p(xi * z);
  const double nu = std::exp(-log_omega / xi);
  const double k = (1.0 + xi - nu) / omega;
  return {-k / s, (1.0 - k * z) / s, -(1.0 - nu) * log_omega / (xi * xi) + z * k / xi};
}

Eigen::Matrix3d fisher_information(const GevParams& p) {
  validate(p);
  const double xi = p.xi;
  if (!(xi > -0.5)) {
    throw Error(Errc::RegularityError, "Fisher information requires xi > -0.5, got " + std::to_string(xi));
  }
  const double s = p.sigma;
  const double pp = (1.0 + xi) * (1.0 + xi) * special::gamma(1.0 + 2.0 * xi);

  double mu_sigma, mu_xi, sigma_sigma, sigma_xi, xi_xi;
  if (std::abs(xi) < kFisherSeriesRadius) {
    mu_sigma = horner(kMuSigma, xi);
    mu_xi = horner(kMuXi, xi);
    sigma_sigma = horner(kSigmaSigma, xi);
    sigma_xi = horner(kSigmaXi, xi);
    xi_xi = horner(kXiXi, xi);
  } else {
    constexpr double g = special::kEulerGamma;
    const double g2 = special::gamma(2.0 + xi);
    const double q = g2 * (special::digamma(1.0 + xi) + (1.0 + xi) / xi);
    const double x2 = xi * xi;
    mu_sigma = -(pp - g2) / xi;
    mu_xi = -(q - pp / xi) / xi;
    sigma_sigma = (1.0 - 2.0 * g2 + pp) / x2;
    sigma_xi = -((1.0 - g2 + pp) / xi + 1.0 - g - q) / x2;
    const double a = 1.0 - g + 1.0 / xi;
    xi_xi = (special::kPi * special::kPi / 6.0 + a * a - 2.0 * q / xi + pp / x2) / x2;
  }

  Eigen::Matrix3d info;
  info(0, 0) = pp / (s * s);
  info(0, 1) = info(1, 0) = mu_sigma / (s * s);
  info(0, 2) = info(2, 0) = mu_xi / s;
  info(1, 1) = sigma_sigma / (s * s);
  info(1, 2) = info(2, 1) = sigma_xi / s;
  info(2, 2) = xi_xi;
  if (!info.allFinite()) {
    throw Error(Errc::NumericalError, "non-finite Fisher information");
  }
  return info;
}

Eigen::Vector3d natural_gradient(double y, const GevParams& p, GumbelThreshold eps) {
  const Eigen::Matrix3d info = fisher_information(p);
  const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3d>(info).singularValues();
  const double cond = sv(2) > 0.0 ? sv(0) / sv(2) : kInf;
  if (!(cond <= kFisherConditionLimit)) {
    throw Error(Errc::IllConditioned, "Fisher information condition number " + std::to_string(cond));
  }
  return info.fullPivLu().solve(gradient(y, p, eps));
}

double mean(const GevParams& p, GumbelThreshold eps) {
  if (p.xi >= 1.0) return kInf;
  if (eps.is_gumbel(p.xi)) return p.mu + p.sigma * special::kEulerGamma;
  return p.mu + p.sigma * special::gamma_one_minus_ratio(p.xi);
}

double cvar(double alpha, const GevParams& p, GumbelThreshold eps) {
  check_alpha(alpha);
  if (p.xi >= 1.0) {
    throw Error(Errc::HeavyTail, "CVaR undefined for xi >= 1");
  }
  const double tail = 1.0 - alpha;
  const double nla = neg_log(alpha);
  if (eps.is_gumbel(p.xi)) {
    const double bracket = special::kEulerGamma - special::li(alpha) + alpha * std::log(nla);
    return p.mu + p.sigma / tail * bracket;
  }
  const double bracket = special::lower_gamma(1.0 - p.xi, nla) - tail;
  return p.mu + p.sigma / (tail * p.xi) * bracket;
}

double crps(double y, const GevParams& p, GumbelThreshold eps) {
  if (p.xi >= 1.0) {
    throw Error(Errc::HeavyTail, "CRPS undefined for xi >= 1");
  }
  const double s = p.sigma;
  if (eps.is_gumbel(p.xi)) {
    const double lt = log_tau(y, p, eps);
    const double t = std::exp(lt);
    // Ei(-t) for tiny t through its logarithmic expansion.
    const double ei = t < 1e-10 ? special::kEulerGamma + lt - t : special::ei(-t);
    return p.mu - y + s * (special::kEulerGamma - std::log(2.0)) - 2.0 * s * ei;
  }
  const double xi = p.xi;
  double t;
  if (in_support(y, p, eps)) {
    t = std::exp(log_tau(y, p, eps));
  } else {
    t = xi > 0.0 ? kInf : 0.0;
  }
  const double f = std::exp(-t);
  const double a = 1.0 - xi;
  const double ratio = s / xi;
  return (p.mu - y - ratio) * (1.0 - 2.0 * f) -
         ratio * (std::exp2(xi) * special::gamma(a) - 2.0 * special::lower_gamma(a, t));
}

double draw(const GevParams& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);
  while (u <= 0.0) u = unif(rng);
  return inverse_cdf(u, p);
}

std::vector<double> sample(const GevParams& p, std::size_t n, std::uint64_t seed) {
  validate(p);
  std::mt19937_64 rng(seed);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(draw(p, rng));
  return out;
}

}  // namespace xtree
