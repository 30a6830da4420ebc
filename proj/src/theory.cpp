#include "starfactor/theory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "starfactor/parallel.hpp"
#include "starfactor/rng.hpp"

namespace starfactor::theory {

namespace {

void require_degree(int d) {
  if (d < kMinDegree) throw std::invalid_argument("degree d must be at least 4, got " + std::to_string(d));
}

void require_k(int k) {
  if (k < 1) throw std::invalid_argument("cycle length k must be at least 1");
}

std::complex<double> power(std::complex<double> base, int k) {
  std::complex<double> result(1.0, 0.0);
  std::complex<double> factor = base;
  for (unsigned e = static_cast<unsigned>(k); e != 0; e >>= 1) {
    if (e & 1u) result *= factor;
    factor *= factor;
  }
  return result;
}

// log(1 + x) - x, accurate for tiny x.
double log1p_minus_x(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return -x2 / 2.0 + x2 * x / 3.0 - x2 * x2 / 4.0;
  }
  return std::log1p(x) - x;
}

}  // namespace

TheoryParams::TheoryParams(int d) : d_(d) { require_degree(d); }

double lambda(int d, int k) {
  require_degree(d);
  require_k(k);
  return std::pow(static_cast<double>(d - 1), k) / (2.0 * k);
}

std::complex<double> delta_base(int d) {
  require_degree(d);
  const double dd = d;
  // -15d^2 + 24d < 0 for d >= 4, so the two bases are complex conjugates.
  const double im = std::sqrt(15.0 * dd * dd - 24.0 * dd);
  return std::complex<double>(-3.0 * (dd - 2.0), im) / (4.0 * (dd - 1.0) * (dd - 1.5));
}

double delta(int d, int k) {
  require_k(k);
  return 2.0 * power(delta_base(d), k).real();
}

double series_ratio(int d) {
  require_degree(d);
  return 3.0 / (2.0 * d - 3.0);
}

TransferMatrix transfer_matrix(int d) {
  require_degree(d);
  const double dd = d;
  TransferMatrix t;
  t.a.setZero();
  t.a(0, 0) = 1.0 + (dd - 3.0) * (dd - 4.0) / (3.0 * (dd - 1.0) * (dd - 2.0));
  t.a(0, 1) = 1.0;
  t.a(1, 0) = 8.0 * (dd - 1.5) * (dd - 3.0) / (3.0 * (dd - 1.0) * (dd - 2.0) * (dd - 2.0));
  t.a(1, 2) = 32.0 * (dd - 1.5) * (dd - 1.5) / (9.0 * (dd - 1.0) * std::pow(dd - 2.0, 3));
  t.a(2, 0) = 1.0;

  const double im = std::sqrt(15.0 * dd * dd - 24.0 * dd);
  const double scale = 3.0 * (dd - 1.0) * (dd - 2.0);
  t.gamma[0] = 4.0 * (dd - 1.5) / (3.0 * (dd - 2.0));
  t.gamma[1] = std::complex<double>(-3.0 * (dd - 2.0), im) / scale;
  t.gamma[2] = std::complex<double>(-3.0 * (dd - 2.0), -im) / scale;
  return t;
}

double transfer_trace_power(const TransferMatrix& t, int k) {
  require_k(k);
  Eigen::Matrix3d power_matrix = Eigen::Matrix3d::Identity();
  for (int i = 0; i < k; ++i) power_matrix = power_matrix * t.a;
  return power_matrix.trace();
}

double transfer_trace_spectral(const TransferMatrix& t, int k) {
  require_k(k);
  return std::pow(t.gamma[0].real(), k) + 2.0 * power(t.gamma[1], k).real();
}

double rel_joint_moment(int d, int k) {
  require_degree(d);
  require_k(k);
  const double dd = d;
  const double im = std::sqrt(15.0 * dd * dd - 24.0 * dd);
  const std::complex<double> w(-3.0 * (dd - 2.0) / (4.0 * (dd - 1.5)), im / (4.0 * (dd - 1.5)));
  return (std::pow(dd - 1.0, k) + 2.0 * power(w, k).real()) / (2.0 * k);
}

double rel_joint_moment_via_transfer(int d, int k) {
  const TransferMatrix t = transfer_matrix(d);
  const double dd = d;
  const double scale = 3.0 * (dd - 1.0) * (dd - 2.0) / (4.0 * (dd - 1.5));
  return std::pow(scale, k) * transfer_trace_power(t, k) / (2.0 * k);
}

BigCount factor_incidences(int n, int d) {
  require_degree(d);
  if (n <= 0 || n % 4 != 0) throw std::invalid_argument("n must be a positive multiple of 4");
  const auto nn = static_cast<std::uint64_t>(n);
  const auto dd = static_cast<std::uint64_t>(d);
  // d^4 (d-1)(d-2) is divisible by 6 since d(d-1)(d-2) is.
  const BigCount per_star = BigCount(dd) * dd * dd * dd * (dd - 1) * (dd - 2) / 6;
  BigCount result = factorial(nn) / factorial(nn / 4);
  result *= boost::multiprecision::pow(per_star, static_cast<unsigned>(nn / 4));
  // Free points n(d - 3/2) = nd - 3n/2, always even when 4 | n.
  result *= matchings_count((nn * dd - 3 * nn / 2) / 2);
  return result;
}

Rational expected_factors_exact(int n, int d) {
  const BigCount incidences = factor_incidences(n, d);
  const auto total_points = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(d);
  return Rational(incidences, matchings_count(total_points / 2));
}

double expectation_base(int d) {
  require_degree(d);
  const double dd = d;
  const double log_b = std::log(dd) + (dd / 2.0 - 0.75) * std::log(dd - 1.5) +
                       0.5 * (std::log(2.0) - dd * std::log(dd)) +
                       0.25 * std::log((dd - 1.0) * (dd - 2.0) / 6.0);
  return std::exp(log_b);
}

double expected_factors_asymptotic(int n, int d) {
  if (n <= 0 || n % 4 != 0) throw std::invalid_argument("n must be a positive multiple of 4");
  return 2.0 * std::exp(n * std::log(expectation_base(d)));
}

double variance_ratio(int d) {
  require_degree(d);
  const double dd = d;
  const double cubic = 4.0 * dd * dd * dd - 13.0 * dd * dd + 36.0 * dd - 36.0;
  return 2.0 * std::sqrt(dd - 1.0) * (dd - 1.5) * (dd - 1.5) / ((dd - 3.0) * std::sqrt(cubic));
}

MomentIdentityReport moment_identity_check(int d, double tol) {
  require_degree(d);
  if (!(tol > 0.0)) throw std::invalid_argument("moment_identity_check: tol must be positive");
  MomentIdentityReport report;
  report.d = d;
  report.tolerance = tol;
  const double ratio = series_ratio(d);
  long double sum = 0.0L;
  int k = 0;
  double tail = 1.0;
  do {
    ++k;
    const double dk = delta(d, k);
    sum += static_cast<long double>(lambda(d, k)) * dk * dk;
    tail = std::pow(ratio, k + 1) / (1.0 - ratio);
  } while (tail >= tol / 10.0);
  report.terms = k;
  report.tail_bound = tail;
  report.series_sum = static_cast<double>(sum);
  report.log_variance_ratio = std::log(variance_ratio(d));
  report.residual = std::abs(report.series_sum - report.log_variance_ratio);
  report.passed = report.residual < tol;
  return report;
}

SimpleModelConstants simple_model_constants(int d) {
  require_degree(d);
  const double dd = d;
  const double two_d_minus_3 = 2.0 * dd - 3.0;
  SimpleModelConstants out;
  const double mean_exponent = 3.0 * (5.0 * dd * dd - 12.0 * dd + 6.0) / (4.0 * two_d_minus_3 * two_d_minus_3);
  const double quintic = 8.0 * std::pow(dd, 5) - 63.0 * std::pow(dd, 4) + 206.0 * std::pow(dd, 3) -
                         322.0 * dd * dd + 216.0 * dd - 36.0;
  out.prefactor_exponent = -9.0 * quintic / (4.0 * std::pow(two_d_minus_3, 4) * (dd - 1.0) * (dd - 1.0));
  out.mean_ratio = std::exp(mean_exponent);
  out.second_moment_ratio = std::exp(out.prefactor_exponent) * variance_ratio(d);

  const double d1 = delta(d, 1);
  const double d2 = delta(d, 2);
  out.removed_terms = lambda(d, 1) * d1 * d1 + lambda(d, 2) * d2 * d2;
  out.prefactor_residual = std::abs(out.prefactor_exponent + out.removed_terms);
  out.mean_exponent_residual = std::abs(mean_exponent + lambda(d, 1) * d1 + lambda(d, 2) * d2);
  return out;
}

double w_truncation_bound(int d, int kmax) {
  const double ratio = series_ratio(d);
  return std::pow(ratio, kmax + 1) / (1.0 - ratio);
}

WDraw sample_W(int d, int kmin, int kmax, std::uint64_t seed) {
  require_degree(d);
  if (kmin < 1 || kmax < kmin) throw std::invalid_argument("sample_W: need 1 <= kmin <= kmax");
  if (lambda(d, kmax) > kMaxPoissonMean) {
    throw std::domain_error("sample_W: lambda_kmax = " + std::to_string(lambda(d, kmax)) +
                            " exceeds the Poisson sampler limit; lower kmax");
  }
  Rng rng(seed);
  double log_w = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const double mean = lambda(d, k);
    const double dk = delta(d, k);
    const auto z = static_cast<double>(sample_poisson(rng, mean));
    // Z log(1+delta) - lambda delta, split to avoid cancellation for large lambda.
    log_w += (z - mean) * std::log1p(dk) + mean * log1p_minus_x(dk);
  }
  return {std::exp(log_w), w_truncation_bound(d, kmax)};
}

WMoments sample_W_moments(int d, int kmin, int kmax, std::uint64_t seed, std::uint64_t draws,
                          unsigned threads) {
  if (draws < 2) throw std::invalid_argument("sample_W_moments: need at least two draws");
  std::vector<double> values(draws);
  parallel_for(draws, threads, [&](std::size_t i) { values[i] = sample_W(d, kmin, kmax, derive_seed(seed, i)).value; });

  long double sum = 0.0L, sum_sq = 0.0L, sum_4 = 0.0L;
  for (double w : values) {
    const long double w2 = static_cast<long double>(w) * w;
    sum += w;
    sum_sq += w2;
    sum_4 += w2 * w2;
  }
  const long double count = static_cast<long double>(draws);
  WMoments out;
  out.draws = draws;
  out.mean = static_cast<double>(sum / count);
  out.mean_square = static_cast<double>(sum_sq / count);
  const long double var_w = (sum_sq - sum * sum / count) / (count - 1);
  const long double var_w2 = (sum_4 - sum_sq * sum_sq / count) / (count - 1);
  out.mean_stderr = static_cast<double>(std::sqrt(var_w / count));
  out.mean_square_stderr = static_cast<double>(std::sqrt(var_w2 / count));
  out.truncation_bound = w_truncation_bound(d, kmax);
  return out;
}

MomentConstants moment_constants(int d, int kmax, double tol) {
  require_degree(d);
  if (kmax < 1) throw std::invalid_argument("moment_constants: kmax must be at least 1");
  MomentConstants out;
  out.d = d;
  out.kmax = kmax;
  for (int k = 1; k <= kmax; ++k) {
    out.lambda.push_back(lambda(d, k));
    out.delta.push_back(delta(d, k));
  }
  out.variance_ratio = variance_ratio(d);
  out.expectation_base = expectation_base(d);
  out.identity = moment_identity_check(d, tol);
  out.simple = simple_model_constants(d);
  out.mean_ratio = out.simple.mean_ratio;
  out.second_moment_ratio = out.simple.second_moment_ratio;
  return out;
}

}  // namespace starfactor::theory
