#include "starfactor/report.hpp"

#include <cmath>
#include <cstdio>

namespace starfactor::report {
namespace {

std::string number(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

Json optional_number(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

// JSON has no infinities; report them as null.
Json finite(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i).transpose()));
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
  out << "name,k,estimate,stderr,theory,z\n";
  auto field = [](const std::optional<double>& v) { return v ? number(*v) : std::string(); };
  for (const auto& r : rows)
    out << r.name << ',' << r.k << ',' << number(r.estimate) << ',' << field(r.stderr_) << ',' << field(r.theory)
        << ',' << field(r.z) << '\n';
}

Json to_json(const theory::MomentConstants& c) {
  Json out;
  out["d"] = c.d;
  out["kmax"] = c.kmax;
  out["lambda"] = c.lambda;
  out["delta"] = c.delta;
  out["variance_ratio"] = c.variance_ratio;
  out["expectation_base"] = c.expectation_base;
  out["mean_ratio"] = c.mean_ratio;
  out["second_moment_ratio"] = c.second_moment_ratio;
  out["identity_residuals"] = {
      {"moment_identity",
       {{"series_sum", c.identity.series_sum},
        {"log_variance_ratio", c.identity.log_variance_ratio},
        {"residual", c.identity.residual},
        {"tail_bound", c.identity.tail_bound},
        {"terms", c.identity.terms},
        {"tolerance", c.identity.tolerance},
        {"passed", c.identity.passed}}},
      {"simple_prefactor",
       {{"prefactor_exponent", c.simple.prefactor_exponent},
        {"removed_terms", c.simple.removed_terms},
        {"residual", c.simple.prefactor_residual}}},
      {"simple_mean", {{"residual", c.simple.mean_exponent_residual}}},
  };
  return out;
}

std::vector<CsvRow> csv_rows(const theory::MomentConstants& c) {
  std::vector<CsvRow> rows;
  for (int k = 1; k <= c.kmax; ++k) {
    rows.push_back({"lambda", k, c.lambda[k - 1], {}, {}, {}});
    rows.push_back({"delta", k, c.delta[k - 1], {}, {}, {}});
  }
  rows.push_back({"variance_ratio", 0, c.variance_ratio, {}, {}, {}});
  rows.push_back({"series_sum", 0, c.identity.series_sum, {}, c.identity.log_variance_ratio, {}});
  rows.push_back({"expectation_base", 0, c.expectation_base, {}, {}, {}});
  rows.push_back({"mean_ratio", 0, c.mean_ratio, {}, {}, {}});
  rows.push_back({"second_moment_ratio", 0, c.second_moment_ratio, {}, {}, {}});
  rows.push_back({"simple_prefactor_exponent", 0, c.simple.prefactor_exponent, {}, -c.simple.removed_terms, {}});
  return rows;
}

Json to_json(const laplace::RegionPoint& x) {
  return {{"p", x.p()}, {"q", x.q()}, {"r", x.r()}, {"s", x.s()}, {"t", x.t()}};
}

Json to_json(const laplace::CriticalPointReport& c) {
  Json out;
  out["location"] = to_json(c.location);
  out["log_value"] = c.log_value;
  out["value"] = c.value;
  out["gradient_norm"] = finite(c.gradient_norm);
  Json residuals = Json::array();
  for (const auto& r : c.residuals)
    if (r.active) residuals.push_back(r.relative);
  out["relative_residuals"] = residuals;
  out["hessian_eigenvalues"] = vector_json(c.hessian_eigenvalues);
  out["classification"] = laplace::to_string(c.classification);
  return out;
}

Json to_json(const laplace::Verification& v) {
  static constexpr const char* kNames[] = {"p", "q", "r", "s", "t"};
  Json out;
  out["d"] = v.d;
  out["certified"] = v.certified;
  if (!v.certified) out["banner"] = "uncertified: exploratory run outside 4 <= d <= 10, nothing asserted";

  const auto& plug = v.plug_in;
  Json residuals = Json::array();
  for (int i = 0; i < 5; ++i)
    residuals.push_back({{"coordinate", kNames[i]},
                         {"value", plug.residuals[i].value},
                         {"relative", plug.residuals[i].relative},
                         {"active", plug.residuals[i].active}});
  Json coordinates = Json::array();
  for (int i : plug.hessian.coordinates) coordinates.push_back(kNames[i]);
  out["x_max"] = {{"location", to_json(plug.x_max)},
                  {"log_value", plug.log_value},
                  {"value", plug.value},
                  {"closed_form_value", plug.closed_form_value},
                  {"value_relative_error", plug.value_relative_error},
                  {"residuals", residuals},
                  {"max_active_residual", plug.max_active_residual},
                  {"free_coordinates", coordinates},
                  {"hessian", matrix_json(plug.hessian.matrix)},
                  {"hessian_eigenvalues", vector_json(plug.hessian.eigenvalues)},
                  {"analytic_hessian_eigenvalues", vector_json(plug.analytic_eigenvalues)},
                  {"passed", plug.passed}};

  const auto& g = v.global;
  Json critical = Json::array();
  for (const auto& c : g.critical_points) critical.push_back(to_json(c));
  out["global_max"] = {{"best", to_json(g.best)},
                       {"max_coordinate_error", g.max_coordinate_error},
                       {"max_log_value_excess", g.max_log_value_excess},
                       {"start_statistics",
                        {{"starts", g.statistics.starts},
                         {"polished", g.statistics.polished},
                         {"boundary", g.statistics.boundary},
                         {"unconverged", g.statistics.unconverged}}},
                       {"critical_points", critical},
                       {"other_critical_points", g.other_critical_points},
                       {"others_below_max", g.others_below_max},
                       {"passed", g.passed}};

  const auto& b = v.boundary;
  Json faces = Json::array();
  for (const auto& f : b.faces)
    faces.push_back({{"face", f.name},
                     {"single_point", f.single_point},
                     {"max_log_value", f.max_log_value},
                     {"argmax", to_json(f.argmax)},
                     {"below_interior_max", f.below_interior_max}});
  out["boundary"] = {{"faces", faces},
                     {"interior_max_log_value", b.interior_max_log_value},
                     {"c1_value", b.c1_value},
                     {"c1_closed_form", b.c1_closed_form},
                     {"c1_relative_error", b.c1_relative_error},
                     {"f6_empty", b.f6_empty},
                     {"f8_reduces_to_c1", b.f8_reduces_to_c1},
                     {"f9_reduces_to_c1", b.f9_reduces_to_c1},
                     {"passed", b.passed}};

  const auto& gc = v.gaussian;
  out["gaussian"] = {{"dimension", gc.dimension},
                     {"determinant", gc.determinant},
                     {"numeric", gc.numeric},
                     {"display", optional_number(gc.display)},
                     {"display_ratio", gc.display ? Json(gc.display_ratio) : Json(nullptr)},
                     {"display_relative_error", gc.display ? Json(gc.relative_error) : Json(nullptr)}};

  const auto& r = v.reconstruction;
  out["reconstruction"] = {{"dimension", r.dimension},
                           {"alpha", r.alpha},
                           {"gaussian", r.gaussian},
                           {"growth_log_mismatch", r.growth_log_mismatch},
                           {"reconstructed", r.reconstructed},
                           {"variance_ratio", r.theory},
                           {"relative_error", r.relative_error}};
  out["failures"] = v.failures;
  out["passed"] = v.passed;
  return out;
}

std::vector<CsvRow> csv_rows(const laplace::Verification& v) {
  std::vector<CsvRow> rows;
  rows.push_back({"F_max", 0, v.plug_in.value, {}, v.plug_in.closed_form_value, {}});
  rows.push_back({"max_stationarity_residual", 0, v.plug_in.max_active_residual, {}, {}, {}});
  for (Eigen::Index i = 0; i < v.plug_in.hessian.eigenvalues.size(); ++i)
    rows.push_back({"hessian_eigenvalue", static_cast<int>(i + 1), v.plug_in.hessian.eigenvalues(i), {},
                    v.plug_in.analytic_eigenvalues(i), {}});
  rows.push_back({"global_max_log_value", 0, v.global.best.log_value, {}, v.global.closed_form_log_value, {}});
  rows.push_back({"max_log_value_excess", 0, v.global.max_log_value_excess, {}, {}, {}});
  rows.push_back({"other_critical_points", 0, static_cast<double>(v.global.other_critical_points), {}, {}, {}});
  for (const auto& f : v.boundary.faces)
    rows.push_back({"face_max_log_value_" + f.name, 0, f.max_log_value, {}, v.boundary.interior_max_log_value, {}});
  rows.push_back({"F_c1", 0, v.boundary.c1_value, {}, v.boundary.c1_closed_form, {}});
  rows.push_back({"gaussian_constant", 0, v.gaussian.numeric, {}, v.gaussian.display, {}});
  rows.push_back({"variance_ratio", 0, v.reconstruction.reconstructed, {}, v.reconstruction.theory, {}});
  return rows;
}

Json to_json(const experiment::ExperimentReport& report, const std::vector<experiment::JointMomentRow>& joint,
             bool per_sample) {
  const auto& c = report.config;
  Json out;
  out["config"] = {{"n", c.n},
                   {"d", c.d},
                   {"mode", experiment::to_string(c.mode)},
                   {"samples", c.mode == experiment::Mode::exhaustive ? Json(nullptr) : Json(c.samples)},
                   {"kmax", c.kmax},
                   {"seed", c.seed},
                   {"count_factors", c.count_factors},
                   {"bootstrap_resamples", c.bootstrap_resamples}};
  out["samples"] = report.samples;

  Json stats = Json::array();
  for (const auto& s : report.statistics) {
    Json row = {{"name", s.name}, {"k", s.k}, {"estimate", s.estimate}, {"stderr", s.stderr_},
                {"theory", optional_number(s.theory)}, {"z", optional_number(s.z)}, {"asserted", s.asserted}};
    if (!s.note.empty()) row["note"] = s.note;
    stats.push_back(row);
  }
  out["statistics"] = stats;

  if (c.count_factors) {
    Json exact;
    exact["sum_Y"] = to_string(report.sum_factors);
    exact["sum_Y2"] = to_string(report.sum_factors_squared);
    exact["mean_Y"] = to_string(report.exact_mean_factors());
    exact["mean_Y2"] = to_string(report.exact_mean_factors_squared());
    if (report.sum_factors != 0) {
      const Rational m = report.exact_mean_factors();
      exact["second_moment_ratio"] = to_string(report.exact_mean_factors_squared() / (m * m));
      exact["variance_ratio_limit"] = theory::variance_ratio(c.d);
    }
    if (report.theory_mean_factors) exact["theory_mean_Y"] = to_string(*report.theory_mean_factors);
    if (report.theory_incidences) exact["theory_incidences"] = to_string(*report.theory_incidences);
    out["exact"] = exact;

    Json rows = Json::array();
    for (const auto& r : joint)
      rows.push_back({{"k", r.k},
                      {"defined", r.defined},
                      {"ratio", r.defined ? Json(r.ratio) : Json(nullptr)},
                      {"stderr", r.stderr_},
                      {"theory", r.theory},
                      {"z", optional_number(r.z)}});
    out["joint_moments"] = {
        {"note", "ratio E(Y* X_k) / E Y* against the n -> infinity limit lambda_k (1 + delta_k); "
                 "bootstrap standard errors; finite-n bias is not controlled, so nothing here is asserted"},
        {"rows", rows}};
  }

  if (per_sample && !report.records.empty()) {
    Json samples = Json::array();
    for (const auto& r : report.records) {
      Json cycles = Json::array();
      for (const auto& x : r.cycles) cycles.push_back(to_string(x));
      samples.push_back({{"Y", to_string(r.factors)}, {"X", cycles}});
    }
    out["per_sample"] = samples;
  }

  out["checks"] = {{"passed", report.checks_passed}, {"failures", report.failures}};
  out["run_info"] = {{"timestamp", report.timestamp}, {"wall_seconds", report.wall_seconds}};
  return out;
}

std::vector<CsvRow> csv_rows(const experiment::ExperimentReport& report,
                             const std::vector<experiment::JointMomentRow>& joint) {
  std::vector<CsvRow> rows;
  for (const auto& s : report.statistics) rows.push_back({s.name, s.k, s.estimate, s.stderr_, s.theory, s.z});
  for (const auto& r : joint)
    if (r.defined) rows.push_back({"joint_ratio", r.k, r.ratio, r.stderr_, r.theory, r.z});
  return rows;
}

}  // namespace starfactor::report
