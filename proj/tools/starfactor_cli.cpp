#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "starfactor/cycle_census.hpp"
#include "starfactor/experiment.hpp"
#include "starfactor/factor_count.hpp"
#include "starfactor/laplace.hpp"
#include "starfactor/pairing.hpp"
#include "starfactor/parallel.hpp"
#include "starfactor/report.hpp"
#include "starfactor/theory.hpp"

namespace {

using namespace starfactor;
using report::Json;

constexpr int kAssertionFailed = 1;
constexpr int kUsageError = 2;

struct Output {
  std::string format = "json";
  std::string path;

  // Writes to --out or standard output.
  template <typename Writer>
  void emit(Writer&& write) const {
    if (path.empty()) {
      write(std::cout);
      std::cout.flush();
      return;
    }
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open " + path + " for writing");
    write(file);
  }
  void emit_json(const Json& json) const {
    emit([&](std::ostream& out) { out << json.dump(2) << '\n'; });
  }
  void emit_csv(const std::vector<report::CsvRow>& rows) const {
    emit([&](std::ostream& out) { report::write_csv(out, rows); });
  }
};

void add_output(CLI::App* cmd, Output& out, std::vector<std::string> formats = {"json", "csv"}) {
  cmd->add_option("--format", out.format, "Output format")->check(CLI::IsMember(formats));
  cmd->add_option("--out", out.path, "Output file (default: standard output)");
}

// A graph from --graph FILE, or the projection of a pairing sampled from
// --n, --d, --seed.
struct GraphSource {
  std::string file;
  int n = 0;
  int d = 0;
  std::uint64_t seed = 1;

  void add(CLI::App* cmd) {
    cmd->add_option("--graph", file, "Multigraph file (header 'n d', then 'u v mult' lines)");
    cmd->add_option("--n", n, "Vertices of a sampled pairing");
    cmd->add_option("--d", d, "Degree of a sampled pairing");
    cmd->add_option("--seed", seed, "Seed of a sampled pairing");
  }

  MultiGraph load() const {
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw std::invalid_argument("cannot read " + file);
      return read_multigraph(in);
    }
    if (n < 1 || d < 1) throw std::invalid_argument("give --graph FILE or --n and --d");
    const PairingSpace space(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(d));
    return project(space, sample_uniform(space, seed));
  }

  std::string describe() const {
    if (!file.empty()) return "graph=" + file;
    return "n=" + std::to_string(n) + " d=" + std::to_string(d) + " seed=" + std::to_string(seed);
  }
};

int cmd_theory(int d, int kmax, double tol, const Output& out) {
  std::cerr << "starfactor theory: d=" << d << " kmax=" << kmax << " tol=" << tol << '\n';
  const auto constants = theory::moment_constants(d, kmax, tol);
  if (out.format == "csv")
    out.emit_csv(report::csv_rows(constants));
  else
    out.emit_json(report::to_json(constants));
  const bool ok = constants.identity.passed && constants.simple.prefactor_residual < 1e-10 &&
                  constants.simple.mean_exponent_residual < 1e-10;
  if (!ok) std::cerr << "starfactor theory: identity check failed\n";
  return ok ? 0 : kAssertionFailed;
}

int cmd_laplace(int d, const laplace::SearchOptions& options, const Output& out) {
  std::cerr << "starfactor laplace-verify: d=" << d << " starts=" << options.starts << " seed=" << options.seed
            << " threads=" << options.threads << '\n';
  const auto verification = laplace::verify(d, options);
  if (!verification.certified)
    std::cerr << "starfactor laplace-verify: uncertified (d outside 4..10), exploratory report only\n";
  if (out.format == "csv")
    out.emit_csv(report::csv_rows(verification));
  else
    out.emit_json(report::to_json(verification));
  if (!verification.certified) return 0;
  for (const auto& f : verification.failures) std::cerr << "starfactor laplace-verify: failed: " << f << '\n';
  return verification.passed ? 0 : kAssertionFailed;
}

int cmd_sample(int n, int d, std::uint64_t seed, const Output& out) {
  std::cerr << "starfactor sample: n=" << n << " d=" << d << " seed=" << seed << '\n';
  const PairingSpace space(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(d));
  const Pairing pairing = sample_uniform(space, seed);
  const MultiGraph g = project(space, pairing);
  if (out.format == "pairing") {
    out.emit([&](std::ostream& o) { write_pairing(o, pairing); });
  } else if (out.format == "graph") {
    out.emit([&](std::ostream& o) { write_multigraph(o, g); });
  } else if (out.format == "csv") {
    out.emit([&](std::ostream& o) {
      o << "a,b\n";
      for (const auto& p : pairing.pairs()) o << p.a << ',' << p.b << '\n';
    });
  } else {
    Json pairs = Json::array(), edges = Json::array();
    for (const auto& p : pairing.pairs()) pairs.push_back({p.a, p.b});
    for (const auto& e : g.edges()) edges.push_back({e.u, e.v, e.multiplicity});
    out.emit_json({{"n", n}, {"d", d}, {"seed", seed}, {"pairs", pairs}, {"edges", edges},
                   {"simple", is_simple(g)}});
  }
  return 0;
}

int cmd_count(const GraphSource& source, bool oracle, const Output& out) {
  std::cerr << "starfactor count: " << source.describe() << (oracle ? " oracle" : "") << '\n';
  const MultiGraph g = source.load();
  const BigCount value = count_3star_factors(g).value;
  Json json = {{"vertices", g.vertex_count()}, {"edges", g.edge_count()}, {"factors", to_string(value)}};
  bool ok = true;
  if (oracle) {
    const BigCount check = oracle_count(g).value;
    json["oracle"] = to_string(check);
    ok = check == value;
  }
  if (out.format == "csv") {
    std::vector<report::CsvRow> rows = {{"factors", 0, to_double(value), {}, {}, {}}};
    if (oracle) rows[0].theory = to_double(oracle_count(g).value);
    out.emit_csv(rows);
  } else {
    out.emit_json(json);
  }
  return ok ? 0 : kAssertionFailed;
}

int cmd_census(const GraphSource& source, int kmax, bool trace, const Output& out) {
  std::cerr << "starfactor census: " << source.describe() << " kmax=" << kmax << '\n';
  const MultiGraph g = source.load();
  const CycleCensus c = census(g, static_cast<std::uint32_t>(kmax));
  Json counts = Json::array();
  for (const auto& x : c.counts) counts.push_back(to_string(x));
  Json json = {{"vertices", g.vertex_count()}, {"kmax", kmax}, {"X", counts}};
  bool ok = true;
  std::optional<TraceCensus> check;
  if (trace) {
    check = census_trace_check(g);
    json["trace"] = {{"X3", to_string(check->triangles)}, {"X4", to_string(check->four_cycles)}};
    if (kmax >= 3) ok = ok && c.at(3) == check->triangles;
    if (kmax >= 4) ok = ok && c.at(4) == check->four_cycles;
  }
  if (out.format == "csv") {
    std::vector<report::CsvRow> rows;
    for (int k = 1; k <= kmax; ++k) {
      report::CsvRow row{"X", k, to_double(c.at(k)), {}, {}, {}};
      if (check && k == 3) row.theory = to_double(check->triangles);
      if (check && k == 4) row.theory = to_double(check->four_cycles);
      rows.push_back(row);
    }
    out.emit_csv(rows);
  } else {
    out.emit_json(json);
  }
  return ok ? 0 : kAssertionFailed;
}

int cmd_experiment(const experiment::ExperimentConfig& config, bool per_sample, const std::string& csv_path,
                   const Output& out) {
  std::cerr << "starfactor experiment: n=" << config.n << " d=" << config.d
            << " mode=" << experiment::to_string(config.mode)
            << (config.mode == experiment::Mode::exhaustive ? "" : " samples=" + std::to_string(config.samples))
            << " kmax=" << config.kmax << " seed=" << config.seed << " threads=" << config.threads
            << " count_factors=" << config.count_factors << '\n';
  const auto result = experiment::run(config);
  const auto joint =
      config.count_factors ? experiment::joint_moment_table(result) : std::vector<experiment::JointMomentRow>{};
  if (out.format == "csv")
    out.emit_csv(report::csv_rows(result, joint));
  else
    out.emit_json(report::to_json(result, joint, per_sample));
  if (!csv_path.empty()) {
    Output csv{"csv", csv_path};
    csv.emit_csv(report::csv_rows(result, joint));
  }
  for (const auto& f : result.failures) std::cerr << "starfactor experiment: failed: " << f << '\n';
  return result.checks_passed ? 0 : kAssertionFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3-star factors of random regular graphs: counting, moments, and the Laplace analysis"};
  app.require_subcommand(1);
  unsigned threads = default_thread_count();
  app.add_option("--threads", threads, "Worker threads (default: STARFACTOR_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  auto degree_check = CLI::Range(theory::kMinDegree, 1 << 20);

  Output theory_out;
  int theory_d = 0, theory_kmax = 10;
  double theory_tol = 1e-7;
  auto* theory_cmd = app.add_subcommand("theory", "Moment constants and their identities");
  theory_cmd->add_option("--d", theory_d, "Degree (>= 4)")->required()->check(degree_check);
  theory_cmd->add_option("--kmax", theory_kmax, "Largest cycle length listed")->check(CLI::Range(1, 10000));
  theory_cmd->add_option("--tol", theory_tol, "Moment identity tolerance")->check(CLI::PositiveNumber);
  add_output(theory_cmd, theory_out);

  Output laplace_out;
  int laplace_d = 0;
  laplace::SearchOptions search;
  auto* laplace_cmd = app.add_subcommand("laplace-verify", "Maximum of F, boundary, Hessian and the variance ratio");
  laplace_cmd->add_option("--d", laplace_d, "Degree (>= 4)")->required()->check(degree_check);
  laplace_cmd->add_option("--starts", search.starts, "Optimizer starts")->check(CLI::PositiveNumber);
  laplace_cmd->add_option("--seed", search.seed, "Start sequence seed");
  laplace_cmd->add_option("--max-evals", search.max_evaluations, "Objective evaluations per start")
      ->check(CLI::PositiveNumber);
  add_output(laplace_cmd, laplace_out);

  Output sample_out;
  int sample_n = 0, sample_d = 0;
  std::uint64_t sample_seed = 1;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a uniform pairing");
  sample_cmd->add_option("--n", sample_n, "Cells")->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--d", sample_d, "Points per cell")->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", sample_seed, "Seed");
  add_output(sample_cmd, sample_out, {"json", "csv", "pairing", "graph"});

  Output count_out;
  GraphSource count_source;
  bool count_oracle = false;
  auto* count_cmd = app.add_subcommand("count", "Count 3-star factors of a multigraph");
  count_source.add(count_cmd);
  count_cmd->add_flag("--oracle", count_oracle, "Also run the partition oracle (n <= 12) and compare");
  add_output(count_cmd, count_out);

  Output census_out;
  GraphSource census_source;
  int census_kmax = 4;
  bool census_trace = false;
  auto* census_cmd = app.add_subcommand("census", "Short-cycle counts of a multigraph");
  census_source.add(census_cmd);
  census_cmd->add_option("--kmax", census_kmax, "Largest cycle length")->check(CLI::Range(1, 64));
  census_cmd->add_flag("--trace-check", census_trace, "Compare X_3, X_4 with adjacency traces (simple graphs)");
  add_output(census_cmd, census_out);

  Output experiment_out;
  experiment::ExperimentConfig config;
  std::string mode = "monte-carlo", csv_path;
  bool no_factors = false, per_sample = false;
  auto* experiment_cmd = app.add_subcommand("experiment", "Monte Carlo or exhaustive experiment against theory");
  auto* exhaustive_cmd = app.add_subcommand("exhaustive", "Experiment over every pairing (d n <= cap)");
  for (auto* cmd : {experiment_cmd, exhaustive_cmd}) {
    cmd->add_option("--n", config.n, "Vertices")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--d", config.d, "Degree (>= 4)")->required()->check(degree_check);
    cmd->add_option("--kmax", config.kmax, "Largest cycle length")->check(CLI::Range(1, 64));
    cmd->add_option("--cap", config.point_cap, "Largest d n for exhaustive enumeration");
    cmd->add_flag("--no-factors", no_factors, "Cycle statistics only (any n)");
    add_output(cmd, experiment_out);
  }
  experiment_cmd->add_option("--samples", config.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--seed", config.seed, "Master seed");
  experiment_cmd->add_option("--mode", mode, "monte-carlo or exhaustive")
      ->check(CLI::IsMember({"monte-carlo", "exhaustive"}));
  experiment_cmd->add_option("--bootstrap", config.bootstrap_resamples, "Bootstrap resamples")
      ->check(CLI::PositiveNumber);
  experiment_cmd->add_flag("--per-sample", per_sample, "Include per-sample counts in the JSON report");
  experiment_cmd->add_option("--csv", csv_path, "Also write the CSV table here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*theory_cmd) return cmd_theory(theory_d, theory_kmax, theory_tol, theory_out);
    if (*laplace_cmd) {
      search.threads = threads;
      return cmd_laplace(laplace_d, search, laplace_out);
    }
    if (*sample_cmd) return cmd_sample(sample_n, sample_d, sample_seed, sample_out);
    if (*count_cmd) return cmd_count(count_source, count_oracle, count_out);
    if (*census_cmd) return cmd_census(census_source, census_kmax, census_trace, census_out);
    config.threads = threads;
    config.count_factors = !no_factors;
    config.mode = *exhaustive_cmd ? experiment::Mode::exhaustive : experiment::parse_mode(mode);
    experiment::validate(config);
    return cmd_experiment(config, per_sample, csv_path, experiment_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "starfactor: usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::length_error& e) {
    std::cerr << "starfactor: usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "starfactor: error: " << e.what() << '\n';
    return kAssertionFailed;
  }
}
