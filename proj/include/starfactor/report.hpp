#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "starfactor/experiment.hpp"
#include "starfactor/laplace.hpp"
#include "starfactor/theory.hpp"

namespace starfactor::report {

using Json = nlohmann::ordered_json;

// One CSV line: name,k,estimate,stderr,theory,z. Missing fields stay empty.
struct CsvRow {
  std::string name;
  int k = 0;
  double estimate = 0.0;
  std::optional<double> stderr_;
  std::optional<double> theory;
  std::optional<double> z;
};

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);

Json to_json(const theory::MomentConstants& constants);
std::vector<CsvRow> csv_rows(const theory::MomentConstants& constants);

Json to_json(const laplace::RegionPoint& x);
Json to_json(const laplace::CriticalPointReport& point);
Json to_json(const laplace::Verification& verification);
std::vector<CsvRow> csv_rows(const laplace::Verification& verification);

/// `run_info` (timestamp, wall clock) is the only part that differs between
/// identical invocations.
Json to_json(const experiment::ExperimentReport& report, const std::vector<experiment::JointMomentRow>& joint,
             bool per_sample);
std::vector<CsvRow> csv_rows(const experiment::ExperimentReport& report,
                             const std::vector<experiment::JointMomentRow>& joint);

}  // namespace starfactor::report
