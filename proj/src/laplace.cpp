#include "starfactor/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "starfactor/parallel.hpp"
#include "starfactor/rng.hpp"
#include "starfactor/theory.hpp"

namespace starfactor::laplace {
namespace {

constexpr int kSlack = 5;
constexpr double kPi = std::numbers::pi;

// Multiplicities of the forms a, b, c, e in ln F and their coordinate gradients.
constexpr std::array<double, 4> kFormWeight = {2.0, 1.0, -2.0, -1.0};
constexpr std::array<std::array<double, 5>, 4> kFormGradient = {{
    {-1, -1, -2, -3, 0},
    {1, 1, 2, 3, 0},
    {-1, -1, -1, -1, -1},
    {0, 0, -1, -2, 1},
}};

void check_degree(int d) {
  if (d < 4) throw std::domain_error("laplace: degree must be at least 4");
}

template <typename T>
T xlogx(T u) {
  return u > 0 ? u * std::log(u) : T(0);
}

template <typename T>
std::array<T, 4> forms(const std::array<T, 5>& x, int d) {
  const auto [p, q, r, s, t] = x;
  return {T(3) / 4 - p - q - 2 * r - 3 * s, (T(d) - 3) / 2 + p + q + 2 * r + 3 * s,
          T(1) / 4 - p - q - r - s - t, T(1) / 2 - r - 2 * s + t};
}

template <typename T>
T log_F_impl(const std::array<T, 5>& x, int d) {
  const auto [p, q, r, s, t] = x;
  if ((d == 4 && q + t > 0) || (d == 5 && t > 0)) return -std::numeric_limits<T>::infinity();
  const T dd = d;
  const auto [a, b, c, e] = forms(x, d);
  T v = 2 * xlogx(a) + xlogx(b) - 2 * xlogx(c) - xlogx(e);
  for (T u : x) v -= xlogx(u);
  v += (2 * p + 2 * q + 2 * r + s) * std::log(T(3)) + (dd - 3 + p + q + 3 * r + 4 * s) * std::log(T(2));
  if (q + t > 0) v += (q + t) * std::log(dd - 4);
  if (t > 0) v += t * std::log(dd - 5);
  v -= (q + 2 * r + 3 * s) * std::log(dd - 1) + (q + r + s + t) * std::log(dd - 2) +
       (2 * p + q + r + 2 * s + t) * std::log(dd - 3);
  return v;
}

// Constant part of d ln F / dx_i.
double gradient_constant(int i, int d) {
  const double l2 = std::log(2.0), l3 = std::log(3.0);
  const double d1 = std::log(d - 1.0), d2 = std::log(d - 2.0), d3 = std::log(d - 3.0);
  switch (i) {
    case 0: return 2 * l3 + l2 - 2 * d3;
    case 1: return 2 * l3 + l2 + std::log(d - 4.0) - d1 - d2 - d3;
    case 2: return 2 * l3 + 3 * l2 - 2 * d1 - d2 - d3;
    case 3: return l3 + 4 * l2 - 3 * d1 - d2 - 2 * d3;
    default: return std::log(d - 4.0) + std::log(d - 5.0) - d2 - d3;
  }
}

bool is_interior(const RegionPoint& x, const std::vector<int>& active) {
  for (int i : active)
    if (!(x.x[i] > 0.0)) return false;
  return x.slack() > 0.0;
}

void require_interior(const RegionPoint& x, int d) {
  check_degree(d);
  if (!is_interior(x, active_coordinates(d)))
    throw std::domain_error("laplace: point is not interior to the region");
}

double sup_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

double radical_inverse(std::uint64_t i, int base) {
  double result = 0.0, f = 1.0 / base;
  while (i > 0) {
    result += f * static_cast<double>(i % base);
    i /= base;
    f /= base;
  }
  return result;
}

constexpr std::array<int, 6> kPrimes = {2, 3, 5, 7, 11, 13};

// A chart on a face of the simplex: the listed slots (0..4 coordinates,
// kSlack for 1/4 - sum) carry softmax weights, the last one with logit 0,
// every other slot is held at zero.
struct Chart {
  std::vector<int> slots;
  std::size_t dimension() const { return slots.size() - 1; }

  RegionPoint point(const std::vector<double>& z) const {
    double top = 0.0;
    for (double v : z) top = std::max(top, std::clamp(v, -200.0, 200.0));
    std::vector<double> w(slots.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < slots.size(); ++j) {
      const double logit = j < z.size() ? std::clamp(z[j], -200.0, 200.0) : 0.0;
      w[j] = std::exp(logit - top);
      sum += w[j];
    }
    RegionPoint x;
    for (std::size_t j = 0; j < slots.size(); ++j)
      if (slots[j] != kSlack) x.x[slots[j]] = 0.25 * w[j] / sum;
    return x;
  }

  std::vector<double> logits(const std::vector<double>& weights) const {
    std::vector<double> z(dimension());
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = std::log(weights[j] / weights.back());
    return z;
  }
};

Chart interior_chart(int d) {
  Chart chart{active_coordinates(d)};
  chart.slots.push_back(kSlack);
  return chart;
}

// Dirichlet(1, ..., 1) weights from a Cranley-Patterson rotated Halton point.
std::vector<double> halton_weights(std::uint64_t index, const std::vector<double>& shift) {
  std::vector<double> w(shift.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    double u = radical_inverse(index, kPrimes[j]) + shift[j];
    u -= std::floor(u);
    w[j] = -std::log(std::max(u, 1e-300));
  }
  return w;
}

std::vector<double> random_shift(std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> shift(m);
  for (double& s : shift) s = rng.uniform01();
  return shift;
}

struct Minimum {
  std::vector<double> z;
  double value = 0.0;
};

// Nelder-Mead with the standard coefficients (1, 2, 1/2, 1/2).
template <typename F>
Minimum nelder_mead(F&& f, const std::vector<double>& start, double step, int max_evaluations) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> simplex(n + 1, start);
  std::vector<double> values(n + 1);
  for (std::size_t j = 0; j < n; ++j) simplex[j + 1][j] += step;
  int evaluations = 0;
  auto eval = [&](const std::vector<double>& z) {
    ++evaluations;
    return f(z);
  };
  for (std::size_t j = 0; j <= n; ++j) values[j] = eval(simplex[j]);
  std::vector<std::size_t> order(n + 1);
  while (evaluations < max_evaluations) {
    for (std::size_t j = 0; j <= n; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    double diameter = 0.0;
    for (std::size_t j = 0; j <= n; ++j)
      for (std::size_t i = 0; i < n; ++i) diameter = std::max(diameter, std::abs(simplex[j][i] - simplex[best][i]));
    if (values[worst] - values[best] <= 1e-15 && diameter < 1e-10) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t j : order)
      if (j != worst)
        for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[j][i] / n;
    auto along = [&](double coef) {
      std::vector<double> z(n);
      for (std::size_t i = 0; i < n; ++i) z[i] = centroid[i] + coef * (simplex[worst][i] - centroid[i]);
      return z;
    };
    auto reflected = along(-1.0);
    const double fr = eval(reflected);
    if (fr < values[best]) {
      auto expanded = along(-2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = std::move(expanded);
        values[worst] = fe;
      } else {
        simplex[worst] = std::move(reflected);
        values[worst] = fr;
      }
    } else if (fr < values[second]) {
      simplex[worst] = std::move(reflected);
      values[worst] = fr;
    } else {
      auto contracted = fr < values[worst] ? along(-0.5) : along(0.5);
      const double fc = eval(contracted);
      if (fc < std::min(fr, values[worst])) {
        simplex[worst] = std::move(contracted);
        values[worst] = fc;
      } else {
        for (std::size_t j = 0; j <= n; ++j) {
          if (j == best) continue;
          for (std::size_t i = 0; i < n; ++i) simplex[j][i] = simplex[best][i] + 0.5 * (simplex[j][i] - simplex[best][i]);
          values[j] = eval(simplex[j]);
        }
      }
    }
  }
  const auto best = std::min_element(values.begin(), values.end()) - values.begin();
  return {simplex[best], values[best]};
}

// Maximizes ln F over the relative interior of a chart's face.
Minimum maximize_on_chart(const Chart& chart, int d, const std::vector<double>& weights, int max_evaluations) {
  auto objective = [&](const std::vector<double>& z) {
    const double v = log_F_impl(chart.point(z).x, d);
    return std::isfinite(v) ? -v : std::numeric_limits<double>::max();
  };
  const int half = std::max(1, max_evaluations / 2);
  auto first = nelder_mead(objective, chart.logits(weights), 1.0, half);
  return nelder_mead(objective, first.z, 0.05, half);
}

RegionPoint with_step(const RegionPoint& x, const std::vector<int>& active, const Eigen::VectorXd& step, double scale) {
  RegionPoint y = x;
  for (std::size_t a = 0; a < active.size(); ++a) y.x[active[a]] += scale * step(a);
  return y;
}

// Damped Newton on the stationarity system; returns the final gradient norm.
double newton_polish(RegionPoint& x, int d) {
  const auto active = active_coordinates(d);
  if (!is_interior(x, active)) return std::numeric_limits<double>::infinity();
  Eigen::VectorXd g = gradient_log_F(x, d);
  double norm = sup_norm(g);
  for (int iteration = 0; iteration < 60 && norm > 1e-14; ++iteration) {
    const Eigen::VectorXd step = analytic_hessian_log_F(x, d).fullPivLu().solve(-g);
    bool accepted = false;
    for (double scale = 1.0; scale > 1e-12; scale *= 0.5) {
      const RegionPoint y = with_step(x, active, step, scale);
      if (!is_interior(y, active)) continue;
      const Eigen::VectorXd gy = gradient_log_F(y, d);
      if (sup_norm(gy) < norm) {
        x = y;
        g = gy;
        norm = sup_norm(gy);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return norm;
}

double min_chart_coordinate(const RegionPoint& x, const Chart& chart) {
  double m = std::numeric_limits<double>::infinity();
  for (int slot : chart.slots) m = std::min(m, slot == kSlack ? x.slack() : x.x[slot]);
  return m;
}

bool same_point(const RegionPoint& a, const RegionPoint& b, double tol) {
  for (int i = 0; i < 5; ++i)
    if (std::abs(a.x[i] - b.x[i]) > tol * std::max(1.0, std::abs(b.x[i]))) return false;
  return true;
}

}  // namespace

std::array<double, 9> linear_forms(const RegionPoint& x, int d) {
  const auto [a, b, c, e] = forms(x.x, d);
  return {x.p(), x.q(), x.r(), x.s(), x.t(), b, c, e, a};
}

bool in_region(const RegionPoint& x, int d, double tol) {
  check_degree(d);
  for (double f : linear_forms(x, d))
    if (f < -tol) return false;
  if (d == 4 && (x.q() != 0.0 || x.t() != 0.0)) return false;
  if (d == 5 && x.t() != 0.0) return false;
  return true;
}

std::vector<int> active_coordinates(int d) {
  check_degree(d);
  if (d == 4) return {0, 2, 3};
  if (d == 5) return {0, 1, 2, 3};
  return {0, 1, 2, 3, 4};
}

double log_F(const RegionPoint& x, int d) {
  check_degree(d);
  for (double f : linear_forms(x, d))
    if (f < -kRegionTolerance) throw std::domain_error("laplace: point outside the region");
  return log_F_impl(x.x, d);
}

long double log_F_extended(const std::array<long double, 5>& x, int d) {
  check_degree(d);
  return log_F_impl(x, d);
}

double eval_F(const RegionPoint& x, int d) { return std::exp(log_F(x, d)); }

double eval_alpha(const RegionPoint& x, int d) {
  check_degree(d);
  const auto [a, b, c, e] = forms(x.x, d);
  double denominator = c * c * e;
  for (double u : x.x) denominator *= u;
  if (!(denominator > 0.0)) throw std::domain_error("laplace: amplitude needs an interior point");
  return std::sqrt(2.0 * a * a / denominator);
}

double eval_alpha_reduced(const RegionPoint& x, int d) {
  require_interior(x, d);
  const auto [a, b, c, e] = forms(x.x, d);
  double denominator = c * c * e;
  for (int i : active_coordinates(d)) denominator *= x.x[i];
  return std::sqrt(2.0 * a * a / denominator);
}

RegionPoint x_max_closed_form(int d) {
  check_degree(d);
  const double dd = d, D = dd * (dd - 1) * (dd - 2);
  return RegionPoint::of(9.0 / (16 * dd), 9 * (dd - 3) * (dd - 4) / (16 * D), 9 * (dd - 3) / (8 * D), 3 / (8 * D),
                         (dd - 3) * (dd - 4) * (dd - 5) / (16 * D));
}

RegionPoint corner_c1() { return RegionPoint::of(0, 0, 0, 0.25, 0); }

double F_max_closed_form(int d) {
  check_degree(d);
  const double dd = d;
  return std::pow(2 * dd, 1 - dd / 2) * std::pow(2 * (dd - 1.5), dd - 1.5) / std::sqrt((dd - 1) * (dd - 3));
}

double F_c1_closed_form(int d) {
  check_degree(d);
  const double dd = d;
  return std::pow(3.0, 0.25) * std::pow(2 * (dd - 1.5), dd / 2 - 0.75) /
         std::pow(std::pow(dd - 1, 3) * (dd - 2) * (dd - 3) * (dd - 3), 0.25);
}

double alpha_max_closed_form(int d) {
  if (d < 6) throw std::domain_error("laplace: closed-form amplitude needs d >= 6");
  const double dd = d;
  return 8192 * std::sqrt(6.0) * std::pow(dd, 3) * std::pow(dd - 1, 1.5) * (dd - 1.5) * (dd - 2) * (dd - 2) /
         (243 * std::pow(dd - 3, 2.5) * (dd - 4) * std::sqrt(dd - 5));
}

double gaussian_constant_display(int d) {
  if (d < 6) throw std::domain_error("laplace: displayed Gaussian constant needs d >= 6");
  const double dd = d;
  return 162 * std::sqrt(6.0) * std::pow(kPi, 2.5) * (dd - 1.5) * std::pow(dd - 3, 1.5) * (dd - 4) *
         std::sqrt(dd - 5) /
         (std::pow(dd, 3) * (dd - 1) * (dd - 2) * (dd - 2) *
          std::sqrt(4 * dd * dd * dd - 13 * dd * dd + 36 * dd - 36));
}

std::array<StationarityResidual, 5> stationarity_residuals(const RegionPoint& x, int d) {
  check_degree(d);
  const auto [a, b, c, e] = forms(x.x, d);
  const auto [p, q, r, s, t] = x.x;
  const double dd = d;
  const std::array<std::pair<double, double>, 5> sides = {{
      {18 * b * c * c, a * a * p * (dd - 3) * (dd - 3)},
      {18 * b * c * c * (dd - 4), a * a * q * (dd - 1) * (dd - 2) * (dd - 3)},
      {72 * b * b * c * c * e, std::pow(a, 4) * r * (dd - 1) * (dd - 1) * (dd - 2) * (dd - 3)},
      {48 * b * b * b * c * c * e * e, std::pow(a, 6) * s * std::pow(dd - 1, 3) * (dd - 2) * (dd - 3) * (dd - 3)},
      {c * c * (dd - 4) * (dd - 5), e * t * (dd - 2) * (dd - 3)},
  }};
  const auto active = active_coordinates(d);
  std::array<StationarityResidual, 5> out;
  for (int i = 0; i < 5; ++i) {
    const auto [lhs, rhs] = sides[i];
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    out[i].value = lhs - rhs;
    out[i].relative = scale > 0 ? std::abs(lhs - rhs) / scale : 0.0;
    out[i].active = std::find(active.begin(), active.end(), i) != active.end();
  }
  return out;
}

Eigen::VectorXd gradient_log_F(const RegionPoint& x, int d) {
  require_interior(x, d);
  const auto f = forms(x.x, d);
  const auto active = active_coordinates(d);
  Eigen::VectorXd g(active.size());
  for (std::size_t k = 0; k < active.size(); ++k) {
    const int i = active[k];
    double v = gradient_constant(i, d) - std::log(x.x[i]);
    for (int j = 0; j < 4; ++j)
      if (kFormGradient[j][i] != 0.0) v += kFormWeight[j] * kFormGradient[j][i] * std::log(f[j]);
    g(k) = v;
  }
  return g;
}

Eigen::MatrixXd analytic_hessian_log_F(const RegionPoint& x, int d) {
  require_interior(x, d);
  const auto f = forms(x.x, d);
  const auto active = active_coordinates(d);
  const auto k = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b)
      for (int j = 0; j < 4; ++j)
        h(a, b) += kFormWeight[j] * kFormGradient[j][active[a]] * kFormGradient[j][active[b]] / f[j];
    h(a, a) -= 1.0 / x.x[active[a]];
  }
  return h;
}

Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();  // Eigen returns them ascending
}

HessianReport hessian_log_F(const RegionPoint& x, int d) {
  require_interior(x, d);
  const auto active = active_coordinates(d);
  const std::size_t k = active.size();
  std::array<long double, 5> base;
  for (int i = 0; i < 5; ++i) base[i] = x.x[i];

  // Relative steps; the slack (and with it a and e, which dominate it) moves
  // by at most the same fraction.
  constexpr long double kStep = 2e-3L;
  std::vector<long double> h(k);
  long double total = 0;
  for (std::size_t a = 0; a < k; ++a) total += h[a] = kStep * base[active[a]];
  const long double slack = 0.25L - base[0] - base[1] - base[2] - base[3] - base[4];
  if (total > kStep * slack)
    for (auto& v : h) v *= kStep * slack / total;

  auto at = [&](std::size_t a, long double da, std::size_t b, long double db) {
    auto y = base;
    y[active[a]] += da;
    y[active[b]] += db;
    return log_F_impl(y, d);
  };
  const long double center = log_F_impl(base, d);
  auto differences = [&](long double scale) {
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> m(k, k);
    for (std::size_t a = 0; a < k; ++a) {
      const long double ha = h[a] * scale;
      m(a, a) = (at(a, ha, a, 0) - 2 * center + at(a, -ha, a, 0)) / (ha * ha);
      for (std::size_t b = a + 1; b < k; ++b) {
        const long double hb = h[b] * scale;
        m(a, b) = m(b, a) =
            (at(a, ha, b, hb) - at(a, ha, b, -hb) - at(a, -ha, b, hb) + at(a, -ha, b, -hb)) / (4 * ha * hb);
      }
    }
    return m;
  };
  const auto coarse = differences(1.0L);
  const auto fine = differences(0.5L);
  const Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> extrapolated = (4 * fine - coarse) / 3;

  HessianReport report;
  report.coordinates = active;
  report.matrix = extrapolated.cast<double>();
  report.matrix = (0.5 * (report.matrix + report.matrix.transpose())).eval();
  report.eigenvalues = sorted_eigenvalues(report.matrix);
  return report;
}

Eigen::MatrixXd hessian_from_gradient(const RegionPoint& x, int d) {
  require_interior(x, d);
  const auto active = active_coordinates(d);
  const auto k = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd h(k, k);
  for (Eigen::Index b = 0; b < k; ++b) {
    double step = 1e-6 * std::max(std::abs(x.x[active[b]]), 1e-3);
    step = std::min(step, 0.25 * std::min(x.x[active[b]], x.slack()));
    RegionPoint up = x, down = x;
    up.x[active[b]] += step;
    down.x[active[b]] -= step;
    h.col(b) = (gradient_log_F(up, d) - gradient_log_F(down, d)) / (2 * step);
  }
  return 0.5 * (h + h.transpose());
}

std::string to_string(PointClass c) {
  switch (c) {
    case PointClass::interior_max: return "interior_max";
    case PointClass::saddle: return "saddle";
    case PointClass::interior_min: return "interior_min";
    case PointClass::boundary: return "boundary";
    case PointClass::unconverged: return "unconverged";
  }
  return "unknown";
}

CriticalPointReport describe_point(const RegionPoint& x, int d) {
  CriticalPointReport report;
  report.location = x;
  report.log_value = log_F(x, d);
  report.value = std::exp(report.log_value);
  report.residuals = stationarity_residuals(x, d);
  if (!is_interior(x, active_coordinates(d))) {
    report.gradient_norm = std::numeric_limits<double>::infinity();
    report.classification = PointClass::boundary;
    return report;
  }
  report.gradient_norm = sup_norm(gradient_log_F(x, d));
  report.hessian_eigenvalues = sorted_eigenvalues(analytic_hessian_log_F(x, d));
  if (report.gradient_norm > 1e-8)
    report.classification = PointClass::unconverged;
  else if (report.hessian_eigenvalues.maxCoeff() < 0)
    report.classification = PointClass::interior_max;
  else if (report.hessian_eigenvalues.minCoeff() > 0)
    report.classification = PointClass::interior_min;
  else
    report.classification = PointClass::saddle;
  return report;
}

std::vector<CriticalPointReport> critical_point_sweep(int d, const SearchOptions& options) {
  check_degree(d);
  const auto active = active_coordinates(d);
  const Chart chart = interior_chart(d);
  const auto shift = random_shift(chart.slots.size(), derive_seed(options.seed, 0x5EED));
  const std::size_t k = active.size();

  std::vector<std::optional<RegionPoint>> found(std::max(options.starts, 0));
  parallel_for(found.size(), options.threads, [&](std::size_t index) {
    std::vector<double> z = chart.logits(halton_weights(index + 1, shift));
    auto residual = [&](const RegionPoint& x) { return gradient_log_F(x, d).squaredNorm(); };
    RegionPoint x = chart.point(z);
    if (min_chart_coordinate(x, chart) < 1e-13) return;
    double current = residual(x);
    double mu = 1e-3;
    for (int iteration = 0; iteration < 300 && current > 1e-22; ++iteration) {
      const Eigen::VectorXd g = gradient_log_F(x, d);
      Eigen::MatrixXd jacobian = analytic_hessian_log_F(x, d);
      Eigen::MatrixXd chain(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          chain(i, j) = x.x[active[i]] * ((i == j ? 1.0 : 0.0) - 4 * x.x[active[j]]);
      jacobian = jacobian * chain;
      const Eigen::MatrixXd normal = jacobian.transpose() * jacobian;
      const Eigen::VectorXd rhs = -jacobian.transpose() * g;
      bool accepted = false;
      while (mu < 1e12) {
        Eigen::MatrixXd damped = normal;
        damped.diagonal() += mu * normal.diagonal().cwiseMax(1e-300);
        const Eigen::VectorXd step = damped.ldlt().solve(rhs);
        std::vector<double> trial = z;
        for (std::size_t j = 0; j < k; ++j) trial[j] += step(j);
        const RegionPoint y = chart.point(trial);
        if (min_chart_coordinate(y, chart) >= 1e-13) {
          const double value = residual(y);
          if (value < current) {
            z = std::move(trial);
            x = y;
            current = value;
            mu = std::max(mu / 3, 1e-12);
            accepted = true;
            break;
          }
        }
        mu *= 4;
      }
      if (!accepted) break;
    }
    if (std::sqrt(current) > 1e-6) return;
    if (newton_polish(x, d) < 1e-10) found[index] = x;
  });

  std::vector<CriticalPointReport> points;
  for (const auto& x : found) {
    if (!x) continue;
    const bool seen = std::any_of(points.begin(), points.end(),
                                  [&](const CriticalPointReport& c) { return same_point(*x, c.location, 1e-7); });
    if (!seen) points.push_back(describe_point(*x, d));
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const CriticalPointReport& a, const CriticalPointReport& b) { return a.log_value > b.log_value; });
  return points;
}

GlobalMaxReport find_global_max(int d, const SearchOptions& options) {
  check_degree(d);
  const Chart chart = interior_chart(d);
  const std::size_t m = chart.slots.size();
  const auto shift = random_shift(m, options.seed);

  struct Outcome {
    RegionPoint x;
    double log_value = -std::numeric_limits<double>::infinity();
    int kind = 0;  // 0 polished, 1 boundary, 2 unconverged
  };
  std::vector<Outcome> outcomes(std::max(options.starts, 0));
  parallel_for(outcomes.size(), options.threads, [&](std::size_t index) {
    auto weights = halton_weights(index + 1, shift);
    if (index % 4 == 3) weights[(index / 4) % m] *= 1e-8;  // start next to a face
    const Minimum best = maximize_on_chart(chart, d, weights, options.max_evaluations);
    Outcome& out = outcomes[index];
    out.x = chart.point(best.z);
    if (min_chart_coordinate(out.x, chart) < 1e-12) {
      out.kind = 1;
    } else {
      RegionPoint polished = out.x;
      if (newton_polish(polished, d) < 1e-10) {
        out.x = polished;
        out.kind = 0;
      } else {
        out.kind = 2;
      }
    }
    out.log_value = log_F(out.x, d);
  });

  GlobalMaxReport report;
  report.d = d;
  report.certified_range = d >= theory::kMinDegree && d <= theory::kMaxCertifiedDegree;
  report.closed_form = x_max_closed_form(d);
  report.closed_form_log_value = log_F(report.closed_form, d);
  report.statistics.starts = static_cast<int>(outcomes.size());
  report.max_log_value_excess = -std::numeric_limits<double>::infinity();
  const Outcome* best = nullptr;
  for (const auto& out : outcomes) {
    if (!best || out.log_value > best->log_value ||
        (out.log_value == best->log_value && out.x.x < best->x.x))
      best = &out;
    report.max_log_value_excess = std::max(report.max_log_value_excess, out.log_value - report.closed_form_log_value);
    if (out.kind == 0) ++report.statistics.polished;
    if (out.kind == 1) ++report.statistics.boundary;
    if (out.kind == 2) ++report.statistics.unconverged;
  }
  if (best) {
    report.best = describe_point(best->x, d);
    for (int i = 0; i < 5; ++i)
      report.max_coordinate_error =
          std::max(report.max_coordinate_error, std::abs(best->x.x[i] - report.closed_form.x[i]));
  } else {
    report.max_coordinate_error = std::numeric_limits<double>::infinity();
  }

  SearchOptions sweep = options;
  sweep.starts = std::max(200, options.starts / 4);
  report.critical_points = critical_point_sweep(d, sweep);
  for (const auto& c : report.critical_points) {
    if (same_point(c.location, report.closed_form, 1e-7)) continue;
    ++report.other_critical_points;
    if (!(c.log_value < report.closed_form_log_value - kLogValueTolerance)) report.others_below_max = false;
  }
  report.passed = best && report.max_coordinate_error <= kCoordinateTolerance &&
                  report.max_log_value_excess <= kLogValueTolerance && report.others_below_max;
  return report;
}

BoundaryReport boundary_scan(int d, const SearchOptions& options) {
  check_degree(d);
  static constexpr std::array<const char*, 6> kNames = {"p=0", "q=0", "r=0", "s=0", "t=0", "c=0"};
  const auto active = active_coordinates(d);
  BoundaryReport report;
  report.d = d;
  report.interior_max_log_value = log_F(x_max_closed_form(d), d);

  std::vector<int> faces = active;
  faces.push_back(kSlack);
  const int per_face = std::max(64, options.starts / 8);
  for (int face : faces) {
    Chart chart;
    for (int slot : active)
      if (slot != face) chart.slots.push_back(slot);
    if (face != kSlack) chart.slots.push_back(kSlack);
    const auto shift = random_shift(chart.slots.size(), derive_seed(options.seed, face + 1));
    std::vector<Minimum> results(per_face);
    parallel_for(results.size(), options.threads, [&](std::size_t index) {
      results[index] = maximize_on_chart(chart, d, halton_weights(index + 1, shift), options.max_evaluations);
    });
    const auto best = std::min_element(results.begin(), results.end(),
                                       [](const Minimum& a, const Minimum& b) { return a.value < b.value; });
    FaceReport f;
    f.name = kNames[face];
    f.argmax = chart.point(best->z);
    f.max_log_value = log_F(f.argmax, d);
    f.below_interior_max = f.max_log_value < report.interior_max_log_value - kLogValueTolerance;
    report.faces.push_back(f);
  }

  FaceReport corner;
  corner.name = "c1";
  corner.single_point = true;
  corner.argmax = corner_c1();
  corner.max_log_value = log_F(corner.argmax, d);
  corner.below_interior_max = corner.max_log_value < report.interior_max_log_value - kLogValueTolerance;
  report.faces.push_back(corner);
  report.c1_value = std::exp(corner.max_log_value);
  report.c1_closed_form = F_c1_closed_form(d);
  report.c1_relative_error = std::abs(report.c1_value / report.c1_closed_form - 1.0);

  // f8 and f9 are linear and the region is a simplex: the zero set of a form
  // that is nonnegative at every vertex is the hull of the vertices where it
  // vanishes. Vertex coordinates are dyadic, so these values are exact.
  auto reduces_to_c1 = [&](int form) {
    std::vector<RegionPoint> vertices = {RegionPoint{}};
    for (int i : active) {
      RegionPoint v;
      v.x[i] = 0.25;
      vertices.push_back(v);
    }
    for (const auto& v : vertices) {
      const double value = linear_forms(v, d)[form];
      if (value < 0.0) return false;
      if (value == 0.0 && v.x != corner_c1().x) return false;
    }
    return true;
  };
  report.f6_empty = linear_forms(RegionPoint{}, d)[5] > 0;  // f6 only grows from the origin
  report.f8_reduces_to_c1 = reduces_to_c1(7);
  report.f9_reduces_to_c1 = reduces_to_c1(8);

  report.passed = report.c1_relative_error < 1e-10 && report.f6_empty && report.f8_reduces_to_c1 &&
                  report.f9_reduces_to_c1 &&
                  std::all_of(report.faces.begin(), report.faces.end(),
                              [](const FaceReport& f) { return f.below_interior_max; });
  return report;
}

double gaussian_integral(const Eigen::MatrixXd& m) {
  const Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (m.rows() != m.cols() || !m.isApprox(m.transpose()) || llt.info() != Eigen::Success)
    throw std::domain_error("laplace: quadratic form is not positive definite");
  const double root_det = llt.matrixL().toDenseMatrix().diagonal().prod();
  return std::pow(kPi, m.rows() / 2.0) / root_det;
}

GaussianReport gaussian_constant(int d) {
  check_degree(d);
  const HessianReport hessian = hessian_log_F(x_max_closed_form(d), d);
  const Eigen::MatrixXd m = -0.5 * hessian.matrix;
  GaussianReport report;
  report.d = d;
  report.dimension = static_cast<int>(m.rows());
  report.numeric = gaussian_integral(m);
  report.determinant = m.determinant();
  if (d >= 6) {
    report.display = gaussian_constant_display(d);
    report.display_ratio = report.numeric / *report.display;
    report.relative_error = std::abs(report.display_ratio - 1.0);
  }
  return report;
}

VarianceReconstruction reconstruct_variance_ratio(int d) {
  check_degree(d);
  const RegionPoint x = x_max_closed_form(d);
  const GaussianReport gaussian = gaussian_constant(d);
  VarianceReconstruction out;
  out.d = d;
  out.dimension = gaussian.dimension;
  out.alpha = eval_alpha_reduced(x, d);
  out.gaussian = gaussian.numeric;
  const double dd = d;
  const double log_B2 = 0.5 * std::log(2.0) + (1 - dd / 2) * std::log(2 * dd) + std::log(dd - 1) +
                        0.5 * std::log((dd - 2) * (dd - 3) / 6);
  out.growth_log_mismatch = log_B2 + log_F(x, d) - 2 * std::log(theory::expectation_base(d));
  const int k = out.dimension;
  out.reconstructed = std::pow(2.0, -(k + 1) / 2.0) * out.alpha * out.gaussian / std::pow(kPi, k / 2.0) / 4;
  out.theory = theory::variance_ratio(d);
  out.relative_error = std::abs(out.reconstructed / out.theory - 1.0);
  return out;
}

PlugInReport plug_in_check(int d) {
  PlugInReport out;
  out.d = d;
  out.x_max = x_max_closed_form(d);
  out.log_value = log_F(out.x_max, d);
  out.value = std::exp(out.log_value);
  out.closed_form_value = F_max_closed_form(d);
  out.value_relative_error = std::abs(out.value / out.closed_form_value - 1.0);
  out.residuals = stationarity_residuals(out.x_max, d);
  for (const auto& r : out.residuals)
    if (r.active) out.max_active_residual = std::max(out.max_active_residual, r.relative);
  out.hessian = hessian_log_F(out.x_max, d);
  out.analytic_eigenvalues = sorted_eigenvalues(analytic_hessian_log_F(out.x_max, d));
  out.passed = out.max_active_residual < 1e-10 && out.hessian.negative_definite() &&
               out.analytic_eigenvalues.maxCoeff() < 0 && out.value_relative_error < 1e-12;
  return out;
}

Verification verify(int d, const SearchOptions& options) {
  Verification v;
  v.d = d;
  v.certified = d >= theory::kMinDegree && d <= theory::kMaxCertifiedDegree;
  v.plug_in = plug_in_check(d);
  v.global = find_global_max(d, options);
  v.boundary = boundary_scan(d, options);
  v.gaussian = gaussian_constant(d);
  v.reconstruction = reconstruct_variance_ratio(d);
  if (!v.plug_in.passed) v.failures.push_back("x_max plug-in");
  if (!v.global.passed) v.failures.push_back("global maximum search");
  if (!v.boundary.passed) v.failures.push_back("boundary scan");
  if (!(v.reconstruction.relative_error < 1e-6)) v.failures.push_back("variance ratio reconstruction");
  if (!(std::abs(v.reconstruction.growth_log_mismatch) < 1e-12)) v.failures.push_back("growth base mismatch");
  v.passed = v.failures.empty();
  return v;
}

}  // namespace starfactor::laplace
