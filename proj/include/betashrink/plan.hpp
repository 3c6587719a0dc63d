#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "betashrink/series.hpp"
#include "betashrink/verify.hpp"
#include "json.hpp"

namespace betashrink {

inline constexpr int kSchemaVersion = 1;

enum class PlanMode {
  classify,
  w2star,
  enumerate,
  verify_core,
  verify_divergence,
  measure,
  cover_scaling,
  verify_all
};

const char* plan_mode_name(PlanMode m);
std::optional<PlanMode> plan_mode_from_name(const std::string& name);

enum class OutputFormat { json, csv };

struct ExperimentPlan {
  PlanMode mode = PlanMode::verify_all;
  std::vector<std::string> betas;
  std::vector<std::string> psi;
  std::string f;
  std::vector<std::string> maps;
  std::string theorem = "rectangle";  // classify: rectangle | multiplicative
  double t = 0;                       // w2star
  int n_lo = 1;
  int n_hi = 1;
  bool full_only = false;             // enumerate
  std::size_t max_cylinders = 1'000'000;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  int precision_bits = kDefaultPrecisionBits;
  std::optional<std::pair<int, int>> ball_range;  // verify-divergence
  double s = 1.5;                                  // cover-scaling
  std::vector<double> anchor{0, 0};
  std::vector<double> deltas{1e-1, 1e-2, 1e-3, 1e-4};
  std::optional<std::pair<double, double>> expect_slope;
  std::string out_dir;
  OutputFormat format = OutputFormat::json;

  // canonical form; parse_plan(to_json().dump()) reproduces the plan
  nlohmann::ordered_json to_json() const;
  // FNV-1a over the canonical form without the output block, as 16 hex digits
  std::string hash() const;
};

struct PlanError {
  std::string path;
  std::string message;
};

struct PlanParseResult {
  std::optional<ExperimentPlan> plan;
  std::vector<PlanError> errors;

  bool ok() const { return plan.has_value(); }
  std::string error_text() const;
};

// JSON plan text; `mode` fills in a missing "mode" key and must agree with a present one
PlanParseResult parse_plan(const std::string& text, std::optional<PlanMode> mode = std::nullopt);

// re-validates a plan after command-line overrides
std::vector<PlanError> validate_plan(const ExperimentPlan& plan);

struct DataTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::ordered_json>> rows;

  std::string to_csv() const;
};

struct ReportBundle {
  std::string plan_hash;
  std::string mode;
  std::vector<CheckResult> checks;  // decide the exit status
  std::vector<CheckResult> flags;   // reported, never fail the run
  std::vector<std::pair<std::string, DichotomyVerdict>> verdicts;
  std::vector<DataTable> tables;
  std::vector<std::pair<std::string, double>> timing;
  bool complete = true;
  std::string error;

  bool passed() const;
  // 0 ok, 1 check failure, 3 incomplete
  int exit_code() const;
  nlohmann::ordered_json to_json(bool with_timing = true) const;
  std::string checks_csv() const;
};

struct RunOptions {
  int jobs = 1;
};

// resource and precision failures end the run with complete = false
ReportBundle run_plan(const ExperimentPlan& plan, const RunOptions& options = {});

}  // namespace betashrink
