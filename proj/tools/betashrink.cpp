#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "betashrink/errors.hpp"
#include "betashrink/plan.hpp"

namespace fs = std::filesystem;
using namespace betashrink;

namespace {

constexpr int kUsage = 2;
constexpr int kResource = 3;

int usage_error(const std::string& msg) {
  std::cerr << "betashrink: " << msg << '\n';
  return kUsage;
}

bool write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

bool write_outputs(const ExperimentPlan& plan, const ReportBundle& bundle) {
  const fs::path dir(plan.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return false;
  bool ok = write_file(dir / "plan.json", plan.to_json().dump(2) + "\n");
  if (plan.format == OutputFormat::json) {
    ok = ok && write_file(dir / "report.json", bundle.to_json().dump(2) + "\n");
  } else {
    ok = ok && write_file(dir / "checks.csv", bundle.checks_csv());
    if (!bundle.verdicts.empty()) ok = ok && write_file(dir / "verdicts.csv", verdicts_to_csv(bundle.verdicts));
    for (const auto& t : bundle.tables) ok = ok && write_file(dir / (t.name + ".csv"), t.to_csv());
  }
  return ok;
}

void print_summary(const ReportBundle& b) {
  for (const auto& c : b.checks) {
    std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << '\n';
  }
  for (const auto& c : b.flags) {
    std::cout << (c.passed ? "[ok]   " : "[flag] ") << c.name << ": " << c.detail << '\n';
  }
  for (const auto& [label, v] : b.verdicts) {
    std::cout << "verdict " << label << ": " << conclusion_name(v.conclusion) << " (series "
              << series_verdict_name(v.series.verdict) << ")\n";
  }
  if (!b.complete) std::cout << "incomplete: " << b.error << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shrinking-target toolkit for beta-dynamical systems"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config;
  std::uint64_t seed = 1;
  std::string out_dir;
  std::string format;
  int precision_bits = kDefaultPrecisionBits;
  int jobs = 1;
  app.add_option("--config", config, "JSON experiment plan")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides the plan)");
  auto* out_opt = app.add_option("--out", out_dir, "directory for plan.json and the report");
  auto* format_opt =
      app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
  auto* bits_opt = app.add_option("--precision-bits", precision_bits, "working precision in bits")
                       ->check(CLI::Range(64, 8192));
  app.add_option("--jobs", jobs, "worker threads for independent checks")->check(CLI::Range(1, 256));

  const std::pair<const char*, const char*> commands[] = {
      {"classify", "dichotomy verdict and series terms for a rectangle or multiplicative target"},
      {"w2star", "verdict for the two-parameter example family"},
      {"enumerate", "list the cylinders of one level"},
      {"verify-core", "cylinder counting checks for one beta"},
      {"verify-divergence", "frame identities and the ball bound for a divergent configuration"},
      {"measure", "Monte Carlo Lebesgue measure of a tail union"},
      {"cover-scaling", "hyperboloid ball covers and their scaling"},
      {"verify-all", "the full acceptance suite"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const PlanMode mode = *plan_mode_from_name(command);

  std::string text = "{}";
  if (!config.empty()) {
    std::ifstream in(config);
    std::stringstream ss;
    ss << in.rdbuf();
    if (!in) return usage_error("cannot read " + config);
    text = ss.str();
  }
  auto parsed = parse_plan(text, mode);
  if (!parsed.ok()) {
    std::cerr << "betashrink: invalid plan" << (config.empty() ? " (no --config given)" : "") << '\n'
              << parsed.error_text();
    return kUsage;
  }
  ExperimentPlan plan = *parsed.plan;
  if (*seed_opt) plan.seed = seed;
  if (*out_opt) plan.out_dir = out_dir;
  if (*format_opt) plan.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
  if (*bits_opt) plan.precision_bits = precision_bits;
  if (auto errors = validate_plan(plan); !errors.empty()) {
    PlanParseResult r;
    r.errors = std::move(errors);
    std::cerr << "betashrink: invalid plan\n" << r.error_text();
    return kUsage;
  }

  ReportBundle bundle;
  try {
    bundle = run_plan(plan, RunOptions{jobs});
  } catch (const Error& e) {
    return usage_error(e.what());
  }

  if (!plan.out_dir.empty()) {
    if (!write_outputs(plan, bundle)) {
      std::cerr << "betashrink: cannot write to " << plan.out_dir << '\n';
      return kResource;
    }
    print_summary(bundle);
    std::cout << "report written to " << plan.out_dir << '\n';
  } else if (plan.format == OutputFormat::json) {
    std::cout << bundle.to_json().dump(2) << '\n';
  } else {
    std::cout << bundle.checks_csv();
    for (const auto& t : bundle.tables) std::cout << '\n' << "# " << t.name << '\n' << t.to_csv();
  }
  return bundle.exit_code();
}
