#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "starfactor/bigint.hpp"

namespace starfactor::theory {

inline constexpr int kMinDegree = 4;
inline constexpr int kMaxCertifiedDegree = 10;

/// Degree parameter. Throws std::invalid_argument for d < 4. Degrees above 10
/// are accepted but flagged as exploratory.
class TheoryParams {
 public:
  explicit TheoryParams(int d);
  int d() const { return d_; }
  bool certified() const { return d_ <= kMaxCertifiedDegree; }

 private:
  int d_;
};

// lambda_k = (d-1)^k / (2k): limiting mean of the k-cycle count.
double lambda(int d, int k);

// z = (-3(d-2) + i sqrt(15d^2 - 24d)) / (4 (d-1)(d-3/2)); delta_k = 2 Re z^k.
std::complex<double> delta_base(int d);
double delta(int d, int k);

// 3 / (2d - 3) = (d-1)|z|^2, the geometric ratio bounding lambda_k delta_k^2.
double series_ratio(int d);

struct TransferMatrix {
  Eigen::Matrix3d a;
  std::array<std::complex<double>, 3> gamma;  // closed-form eigenvalues
};

TransferMatrix transfer_matrix(int d);

// tr(A^k) by repeated multiplication, and by the closed-form spectrum.
double transfer_trace_power(const TransferMatrix& t, int k);
double transfer_trace_spectral(const TransferMatrix& t, int k);

/// Limit of E(Y* X_k) / E Y*: (1/2k) [(d-1)^k + 2 Re w^k] with
/// w = (d-1) z.
double rel_joint_moment(int d, int k);

// Same limit through the cycle-walk sum: (3(d-1)(d-2)/(4(d-3/2)))^k tr(A^k)/(2k).
double rel_joint_moment_via_transfer(int d, int k);

/// n!/(n/4)! * (d^4 (d-1)(d-2)/6)^(n/4) * N(n(d-3/2)): the number of
/// (pairing, 3-star factor) incidences. Requires n % 4 == 0.
BigCount factor_incidences(int n, int d);

/// E Y* = factor_incidences(n, d) / N(nd), exactly.
Rational expected_factors_exact(int n, int d);

// b = d (d-3/2)^(d/2-3/4) (2/d^d)^(1/2) ((d-1)(d-2)/6)^(1/4).
double expectation_base(int d);

// 2 b^n.
double expected_factors_asymptotic(int n, int d);

/// R(d) = 2 (d-1)^(1/2) (d-3/2)^2 / ((d-3)(4d^3 - 13d^2 + 36d - 36)^(1/2)),
/// the limit of E Y*^2 / (E Y*)^2.
double variance_ratio(int d);

struct MomentIdentityReport {
  int d = 0;
  double series_sum = 0.0;      // sum_k lambda_k delta_k^2
  double log_variance_ratio = 0.0;
  double residual = 0.0;        // |series_sum - log_variance_ratio|
  double tail_bound = 0.0;
  int terms = 0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Sums lambda_k delta_k^2 until the geometric tail bound
/// ratio^(K+1)/(1-ratio) falls below tol/10, then compares with ln R(d).
MomentIdentityReport moment_identity_check(int d, double tol);

struct SimpleModelConstants {
  double mean_ratio = 0.0;               // lim E Y_d / E Y_d*
  double second_moment_ratio = 0.0;      // lim E Y_d^2 / (E Y_d)^2
  double prefactor_exponent = 0.0;       // log of the exponential factor
  double removed_terms = 0.0;            // lambda_1 delta_1^2 + lambda_2 delta_2^2
  double prefactor_residual = 0.0;       // |prefactor_exponent + removed_terms|
  double mean_exponent_residual = 0.0;   // |log mean_ratio + lambda_1 delta_1 + lambda_2 delta_2|
};

SimpleModelConstants simple_model_constants(int d);

struct WDraw {
  double value = 0.0;
  double truncation_bound = 0.0;  // bound on the omitted sum_k lambda_k delta_k^2
};

/// One draw of prod_{k=kmin}^{kmax} (1+delta_k)^{Z_k} e^{-lambda_k delta_k},
/// Z_k ~ Poisson(lambda_k) independent. Throws std::domain_error if
/// lambda_kmax exceeds kMaxPoissonMean and std::invalid_argument for bad k.
WDraw sample_W(int d, int kmin, int kmax, std::uint64_t seed);

// Geometric tail bound ratio^(kmax+1) / (1 - ratio).
double w_truncation_bound(int d, int kmax);

struct WMoments {
  std::uint64_t draws = 0;
  double mean = 0.0;
  double mean_stderr = 0.0;
  double mean_square = 0.0;
  double mean_square_stderr = 0.0;
  double truncation_bound = 0.0;
};

/// Sample moments of W over `draws` draws; draw i uses derive_seed(seed, i).
WMoments sample_W_moments(int d, int kmin, int kmax, std::uint64_t seed, std::uint64_t draws,
                          unsigned threads = 1);

struct MomentConstants {
  int d = 0;
  int kmax = 0;
  std::vector<double> lambda;  // index k-1
  std::vector<double> delta;
  double variance_ratio = 0.0;
  double expectation_base = 0.0;
  double mean_ratio = 0.0;
  double second_moment_ratio = 0.0;
  MomentIdentityReport identity;
  SimpleModelConstants simple;
};

MomentConstants moment_constants(int d, int kmax, double tol = 1e-7);

}  // namespace starfactor::theory
