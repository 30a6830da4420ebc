#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace starfactor::laplace {

/// Scaled overlap parameters (p, q, r, s, t) of two 3-star factors. The
/// region is the simplex p, q, r, s, t >= 0, p + q + r + s + t <= 1/4; the
/// remaining linear forms of the boundary analysis are then nonnegative too.
struct RegionPoint {
  std::array<double, 5> x{};

  static RegionPoint of(double p, double q, double r, double s, double t) { return {{p, q, r, s, t}}; }
  double p() const { return x[0]; }
  double q() const { return x[1]; }
  double r() const { return x[2]; }
  double s() const { return x[3]; }
  double t() const { return x[4]; }
  // 1/4 - p - q - r - s - t
  double slack() const { return 0.25 - x[0] - x[1] - x[2] - x[3] - x[4]; }
};

inline constexpr double kRegionTolerance = 1e-14;

/// f_1..f_9: p, q, r, s, t, (d-3)/2 + p + q + 2r + 3s, 1/4 - p - q - r - s - t,
/// 1/2 - r - 2s + t, 3/4 - p - q - 2r - 3s.
std::array<double, 9> linear_forms(const RegionPoint& x, int d);

bool in_region(const RegionPoint& x, int d, double tol = kRegionTolerance);

/// Coordinates free to vary for degree d. The (d-4)^(q+t) and (d-5)^t
/// factors of F vanish off q = t = 0 at d = 4 and off t = 0 at d = 5, so those
/// coordinates are frozen at zero there.
std::vector<int> active_coordinates(int d);

/// ln F in log-space with 0 ln 0 = 0 and 0^0 = 1. Throws std::domain_error
/// outside the region; returns -infinity where a frozen coordinate is nonzero.
double log_F(const RegionPoint& x, int d);
long double log_F_extended(const std::array<long double, 5>& x, int d);
double eval_F(const RegionPoint& x, int d);

/// The Laplace amplitude over all five coordinates. Throws std::domain_error
/// if any factor under the root is not strictly positive.
double eval_alpha(const RegionPoint& x, int d);

/// Amplitude for the free coordinates only (frozen ones contribute no
/// Stirling factor). Equals eval_alpha for d >= 6.
double eval_alpha_reduced(const RegionPoint& x, int d);

RegionPoint x_max_closed_form(int d);
RegionPoint corner_c1();  // (0, 0, 0, 1/4, 0)

// (2d)^(1-d/2) (2(d-3/2))^(d-3/2) / ((d-1)(d-3))^(1/2)
double F_max_closed_form(int d);
// 3^(1/4) (2(d-3/2))^(d/2-3/4) / ((d-1)^3 (d-2) (d-3)^2)^(1/4)
double F_c1_closed_form(int d);
// 8192 sqrt6 d^3 (d-1)^(3/2) (d-3/2)(d-2)^2 / (243 (d-3)^(5/2) (d-4)(d-5)^(1/2)), d >= 6
double alpha_max_closed_form(int d);
// 162 sqrt6 pi^(5/2) (d-3/2)(d-3)^(3/2)(d-4)(d-5)^(1/2) / (d^3 (d-1)(d-2)^2 (4d^3-13d^2+36d-36)^(1/2)), d >= 6
double gaussian_constant_display(int d);

struct StationarityResidual {
  double value = 0.0;     // A_i - B_i
  double relative = 0.0;  // |A_i - B_i| / max(|A_i|, |B_i|)
  bool active = true;
};

/// The five polynomial stationarity equations of ln F, written as A_i - B_i
/// with A_i, B_i > 0 in the interior; d ln F / dx_i = ln A_i - ln B_i.
std::array<StationarityResidual, 5> stationarity_residuals(const RegionPoint& x, int d);

/// Gradient over the active coordinates, ln A_i - ln B_i.
Eigen::VectorXd gradient_log_F(const RegionPoint& x, int d);

/// Exact Hessian of ln F over the active coordinates, from the x ln x terms.
Eigen::MatrixXd analytic_hessian_log_F(const RegionPoint& x, int d);

struct HessianReport {
  std::vector<int> coordinates;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd eigenvalues;  // ascending
  bool negative_definite() const { return eigenvalues.size() > 0 && eigenvalues.maxCoeff() < 0.0; }
};

/// Central-difference Hessian of ln F over the active coordinates, evaluated
/// in extended precision with one Richardson step, symmetrized. Steps are
/// 2e-3 x_i, shrunk so the slack moves by at most the same fraction.
/// Throws std::domain_error if x is not interior.
HessianReport hessian_log_F(const RegionPoint& x, int d);

/// Central differences of the analytic gradient.
Eigen::MatrixXd hessian_from_gradient(const RegionPoint& x, int d);

Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXd& symmetric);

enum class PointClass { interior_max, saddle, interior_min, boundary, unconverged };
std::string to_string(PointClass c);

struct CriticalPointReport {
  RegionPoint location;
  double log_value = 0.0;
  double value = 0.0;
  double gradient_norm = 0.0;  // infinity norm over active coordinates
  std::array<StationarityResidual, 5> residuals{};
  Eigen::VectorXd hessian_eigenvalues;
  PointClass classification = PointClass::unconverged;
};

/// Classifies x from the analytic gradient and Hessian.
CriticalPointReport describe_point(const RegionPoint& x, int d);

struct SearchOptions {
  int starts = 2000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  int max_evaluations = 3000;
};

struct StartStatistics {
  int starts = 0;
  int polished = 0;       // Newton polish reached a gradient below 1e-10
  int boundary = 0;       // ended within 1e-12 of a face
  int unconverged = 0;
};

struct GlobalMaxReport {
  int d = 0;
  bool certified_range = false;
  CriticalPointReport best;
  RegionPoint closed_form;
  double closed_form_log_value = 0.0;
  double max_coordinate_error = 0.0;      // |best - closed form|_inf
  double max_log_value_excess = 0.0;      // max over starts of ln F - ln F(x_max)
  StartStatistics statistics;
  std::vector<CriticalPointReport> critical_points;  // distinct interior critical points
  int other_critical_points = 0;
  bool others_below_max = true;
  bool passed = false;  // certified-range assertions; always true when uncertified
};

inline constexpr double kCoordinateTolerance = 1e-8;
inline constexpr double kLogValueTolerance = 1e-9;

/// Multi-start ascent of ln F from a shifted Halton sweep of the free
/// coordinates plus starts next to every face, each refined by Newton on
/// the stationarity system; then a Levenberg-Marquardt sweep for all interior
/// critical points.
GlobalMaxReport find_global_max(int d, const SearchOptions& options);

/// Distinct interior critical points found by Levenberg-Marquardt on the
/// gradient from `options.starts` starts, sorted by decreasing ln F.
std::vector<CriticalPointReport> critical_point_sweep(int d, const SearchOptions& options);

struct FaceReport {
  std::string name;
  bool single_point = false;  // the face is the corner c1
  double max_log_value = 0.0;
  RegionPoint argmax;
  bool below_interior_max = false;
};

struct BoundaryReport {
  int d = 0;
  std::vector<FaceReport> faces;
  double interior_max_log_value = 0.0;
  double c1_value = 0.0;
  double c1_closed_form = 0.0;
  double c1_relative_error = 0.0;
  bool f6_empty = false;  // f6 >= (d-3)/2 > 0 on the region
  bool f8_reduces_to_c1 = false;
  bool f9_reduces_to_c1 = false;
  bool passed = false;
};

BoundaryReport boundary_scan(int d, const SearchOptions& options);

/// pi^(k/2) / sqrt(det M) = integral of exp(-t^T M t) over R^k. Throws
/// std::domain_error unless M is symmetric positive definite.
double gaussian_integral(const Eigen::MatrixXd& m);

struct GaussianReport {
  int d = 0;
  int dimension = 0;
  double determinant = 0.0;  // det M, M = -H/2
  double numeric = 0.0;      // pi^(k/2) / sqrt(det M)
  std::optional<double> display;
  double display_ratio = 0.0;     // numeric / display
  double relative_error = 0.0;    // |numeric / display - 1|
};

/// Gaussian integral of exp(-t^T M t) with M = -H/2 and H the finite
/// difference Hessian of ln F at x_max over the free coordinates.
/// Throws std::domain_error if M is not positive definite.
GaussianReport gaussian_constant(int d);

struct VarianceReconstruction {
  int d = 0;
  int dimension = 0;
  double alpha = 0.0;
  double gaussian = 0.0;
  double growth_log_mismatch = 0.0;  // ln(B_2 F(x_max)) - 2 ln b
  double reconstructed = 0.0;
  double theory = 0.0;
  double relative_error = 0.0;
};

/// 2^(-(k+1)/2) alpha(x_max) G / pi^(k/2) / 4 with k free coordinates: the
/// limit of E Y*(Y*-1) / (E Y*)^2 rebuilt from the Laplace ingredients.
VarianceReconstruction reconstruct_variance_ratio(int d);

struct PlugInReport {
  int d = 0;
  RegionPoint x_max;
  double log_value = 0.0;
  double value = 0.0;
  double closed_form_value = 0.0;
  double value_relative_error = 0.0;
  std::array<StationarityResidual, 5> residuals{};
  double max_active_residual = 0.0;
  HessianReport hessian;                  // finite differences
  Eigen::VectorXd analytic_eigenvalues;   // exact Hessian
  bool passed = false;  // residuals < 1e-10, negative definite, value to 1e-12
};

PlugInReport plug_in_check(int d);

/// Everything laplace-verify runs for one degree. `passed` collects the
/// assertions; the displayed Gaussian constant is compared but not asserted
/// (see README).
struct Verification {
  int d = 0;
  bool certified = false;
  PlugInReport plug_in;
  GlobalMaxReport global;
  BoundaryReport boundary;
  GaussianReport gaussian;
  VarianceReconstruction reconstruction;
  std::vector<std::string> failures;
  bool passed = false;
};

Verification verify(int d, const SearchOptions& options);

}  // namespace starfactor::laplace
