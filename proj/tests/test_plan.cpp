#include "doctest.h"

#include <fstream>
#include <sstream>

#include "betashrink/plan.hpp"

using namespace betashrink;

namespace {

std::string read_config(const std::string& name) {
  std::ifstream in(std::string(CONFIG_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  REQUIRE(in);
  return ss.str();
}

ExperimentPlan plan_of(const std::string& text, std::optional<PlanMode> mode = std::nullopt) {
  auto r = parse_plan(text, mode);
  INFO(r.error_text());
  REQUIRE(r.ok());
  return *r.plan;
}

bool has_error(const PlanParseResult& r, const std::string& path, const std::string& needle) {
  for (const auto& e : r.errors) {
    if (e.path == path && e.message.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("parse_plan examples") {
  auto p = plan_of(R"j({"mode":"classify","betas":[2,3],"psi":["exp(-1.2n)","exp(-n^2)"],"f":"r^0.9"})j");
  CHECK(p.mode == PlanMode::classify);
  CHECK(p.betas == std::vector<std::string>{"2", "3"});
  CHECK(p.n_lo == 1);
  CHECK(p.n_hi == 20);

  auto r = parse_plan(R"j({"mode":"classify","betas":[3,2],"psi":["1/n","1/n"],"f":"r^0.9"})j");
  CHECK_FALSE(r.ok());
  CHECK(has_error(r, "betas", "betas must be nondecreasing"));

  r = parse_plan(R"j({"mode":"classify","betas":[2,3],"psi":["1/n","1/n"],"f":"r^-1"})j");
  CHECK(has_error(r, "f", "dimension function must be nondecreasing"));
}

TEST_CASE("schema errors carry paths") {
  auto r = parse_plan(R"j({"mode":"classify","betas":[2,"x"],"psi":["1/n"],"f":"r^0.9","colour":1})j");
  CHECK(has_error(r, "colour", "unknown key"));
  CHECK(has_error(r, "betas[1]", ""));

  r = parse_plan(R"j({"mode":"measure","betas":[2],"psi":["exp(n)"],"n_range":[5,2]})j");
  CHECK(has_error(r, "psi[0]", ""));
  CHECK(has_error(r, "n_range", ""));

  r = parse_plan(R"j({"mode":"w2star","f":"r"})j");
  CHECK(has_error(r, "t", "required"));
  r = parse_plan(R"j({"schema_version":2,"mode":"verify-all"})j");
  CHECK(has_error(r, "schema_version", "unsupported"));
  r = parse_plan("{\"mode\":");
  CHECK(has_error(r, "$", "invalid JSON"));
  r = parse_plan("{}");
  CHECK(has_error(r, "mode", "required"));
  r = parse_plan(R"j({"mode":"classify"})j", PlanMode::w2star);
  CHECK(has_error(r, "mode", "config is for"));
  r = parse_plan(R"j({"mode":"classify","theorem":"multiplicative","betas":[2,3],"psi":["1/n","1/n"],"f":"r"})j");
  CHECK(has_error(r, "psi", "single rate function"));
  r = parse_plan(R"j({"output":{"format":"xml"}})j", PlanMode::verify_all);
  CHECK(has_error(r, "output.format", ""));
}

TEST_CASE("canonical form round-trips and hashes stably") {
  auto p = plan_of(read_config("verify_divergence.json"));
  auto q = plan_of(p.to_json().dump());
  CHECK(q.to_json() == p.to_json());
  CHECK(q.hash() == p.hash());
  CHECK(p.hash().size() == 16);

  q.out_dir = "elsewhere";
  CHECK(q.hash() == p.hash());
  q.seed = 99;
  CHECK(q.hash() != p.hash());

  auto spaced = plan_of(R"j({ "mode" : "verify-core", "n_range": [1, 12], "betas": ["phi"] })j");
  CHECK(spaced.hash() == plan_of(read_config("verify_core_phi.json")).hash());
}

TEST_CASE("w2star plan with t = 2 and f = r gives MeasureZero") {
  auto b = run_plan(plan_of(read_config("w2star.json")));
  REQUIRE(b.verdicts.size() == 1);
  CHECK(b.verdicts[0].second.conclusion == Conclusion::measure_zero);
  CHECK(b.exit_code() == 0);
  CHECK(b.to_json()["verdicts"][0]["verdict"]["conclusion"] == "MeasureZero");
}

TEST_CASE("non-integer beta on the divergence side is flagged, not failed") {
  auto b = run_plan(plan_of(read_config("classify_noninteger.json")));
  REQUIRE(b.verdicts.size() == 1);
  CHECK(b.verdicts[0].second.conclusion == Conclusion::hypothesis_failed);
  CHECK(b.verdicts[0].second.series.verdict == SeriesVerdict::diverges);
  REQUIRE(b.flags.size() >= 1);
  CHECK_FALSE(b.flags[0].passed);
  CHECK(b.exit_code() == 0);
}

TEST_CASE("classify reports terms and checks the fitted form") {
  auto b = run_plan(plan_of(read_config("classify.json")));
  CHECK(b.verdicts[0].second.conclusion == Conclusion::full_measure);
  REQUIRE(b.checks.size() == 1);
  CHECK(b.checks[0].passed);
  REQUIRE(b.tables.size() == 1);
  CHECK(b.tables[0].rows.size() == 11);
  CHECK(b.tables[0].rows[1][3].get<double>() == doctest::Approx(std::pow(2.0, -3) * std::exp(-3.6)));

  auto m = run_plan(plan_of(read_config("classify_multiplicative.json")));
  CHECK(m.verdicts[0].second.tag == TheoremTag::multiplicative_d1);
  CHECK(m.exit_code() == 0);
}

TEST_CASE("verify-core for phi up to 12 passes") {
  auto b = run_plan(plan_of(read_config("verify_core_phi.json")));
  CHECK(b.checks.size() == 3);
  CHECK(b.passed());
  CHECK(b.tables[0].rows.size() == 12);
  for (const auto& c : b.checks) {
    for (const auto& [k, v] : c.measured) CHECK(k != "seconds");
  }
}

TEST_CASE("enumerate checks its count and reports resource failures") {
  auto b = run_plan(plan_of(read_config("enumerate.json")));
  CHECK(b.passed());
  const auto& cyl = b.tables[1];
  CHECK(cyl.name == "cylinders");
  CHECK(cyl.rows.size() == 34);  // full phi-cylinders at level 8 (Fibonacci)

  auto big = run_plan(plan_of(read_config("enumerate_too_large.json")));
  CHECK_FALSE(big.complete);
  CHECK(big.exit_code() == 3);
  CHECK(big.tables.size() == 1);
  CHECK(big.to_json()["error"].get<std::string>().find("resource") == 0);
}

TEST_CASE("identical plan and seed give byte-identical bundles") {
  auto p = plan_of(read_config("measure.json"));
  p.samples = 20000;
  const auto a = run_plan(p).to_json(false).dump();
  const auto b = run_plan(p).to_json(false).dump();
  CHECK(a == b);
  p.seed = 8;
  CHECK(run_plan(p).to_json(false).dump() != a);
}

TEST_CASE("measure compares against the exact union") {
  auto p = plan_of(read_config("measure.json"));
  auto b = run_plan(p);
  REQUIRE(b.checks.size() == 1);
  CHECK(b.checks[0].passed);

  auto q = plan_of(R"j({"mode":"measure","betas":["phi"],"psi":["2^-n"],"maps":["const:0.3"],"n_range":[2,12],"samples":20000})j");
  auto c = run_plan(q);
  REQUIRE(c.checks.size() == 1);
  CHECK(c.checks[0].passed);
  CHECK(c.tables[1].rows[0][2] == "interval merge");
}

TEST_CASE("cover-scaling and divergence plans") {
  auto p = plan_of(read_config("cover_scaling.json"));
  p.samples = 5000;
  auto b = run_plan(p);
  CHECK(b.checks.size() == 2);
  CHECK(b.passed());
  CHECK(b.tables[0].rows.size() == 4);

  auto d = plan_of(read_config("verify_divergence.json"));
  d.samples = 2000;
  auto db = run_plan(d);
  CHECK(db.checks.size() == 2);
  CHECK(db.passed());
}

TEST_CASE("csv output quotes fields") {
  DataTable t{"x", {"a", "b"}, {{1, "p,q"}, {2.5, "r"}}};
  CHECK(t.to_csv() == "a,b\n1,\"p,q\"\n2.5,r\n");
  ReportBundle b;
  b.checks.push_back({"c", true, "d", {{"m", 1}}});
  b.flags.push_back({"f", false, "say \"no\"", {}});
  CHECK(b.checks_csv() == "kind,name,passed,detail,measured\ncheck,c,true,d,m=1\nflag,f,false,\"say \"\"no\"\"\",\n");
  CHECK(b.exit_code() == 0);
  b.checks.push_back({"e", false, "", {}});
  CHECK(b.exit_code() == 1);
}
