#include "betashrink/plan.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <set>
#include <sstream>
#include <thread>
#include <type_traits>

#include "betashrink/covering.hpp"
#include "betashrink/divergence.hpp"
#include "betashrink/errors.hpp"
#include "betashrink/hitset.hpp"
#include "betashrink/measure.hpp"

namespace betashrink {

using ojson = nlohmann::ordered_json;

namespace {

const std::pair<PlanMode, const char*> kModeNames[] = {
    {PlanMode::classify, "classify"},
    {PlanMode::w2star, "w2star"},
    {PlanMode::enumerate, "enumerate"},
    {PlanMode::verify_core, "verify-core"},
    {PlanMode::verify_divergence, "verify-divergence"},
    {PlanMode::measure, "measure"},
    {PlanMode::cover_scaling, "cover-scaling"},
    {PlanMode::verify_all, "verify-all"},
};

const std::set<std::string> kKeys{
    "schema_version", "mode",     "betas",          "psi",        "f",       "maps",
    "theorem",        "t",        "n_range",        "full_only",  "max_cylinders",
    "samples",        "seed",     "precision_bits", "ball_range", "s",       "anchor",
    "deltas",         "expect_slope", "output"};

bool weighted_mode(const ExperimentPlan& p) {
  return p.mode == PlanMode::measure || p.mode == PlanMode::verify_divergence ||
         (p.mode == PlanMode::classify && p.theorem == "rectangle");
}

// default n_range for modes where it is optional
std::optional<std::pair<int, int>> default_range(PlanMode m) {
  switch (m) {
    case PlanMode::classify: return std::pair{1, 20};
    case PlanMode::verify_divergence: return std::pair{1, 200};
    case PlanMode::enumerate:
    case PlanMode::verify_core:
    case PlanMode::measure: return std::nullopt;
    default: return std::pair{1, 1};
  }
}

class Reader {
 public:
  explicit Reader(std::vector<PlanError>& errors) : errors_(errors) {}

  void error(const std::string& path, const std::string& msg) { errors_.push_back({path, msg}); }

  std::optional<double> number(const ojson& j, const std::string& path) {
    if (!j.is_number()) {
      error(path, "expected a number");
      return std::nullopt;
    }
    return j.get<double>();
  }

  std::optional<long long> integer(const ojson& j, const std::string& path) {
    if (!j.is_number_integer()) {
      error(path, "expected an integer");
      return std::nullopt;
    }
    return j.get<long long>();
  }

  std::optional<std::string> string(const ojson& j, const std::string& path) {
    if (!j.is_string()) {
      error(path, "expected a string");
      return std::nullopt;
    }
    return j.get<std::string>();
  }

  // numbers are accepted for betas so that [2, 3] works
  std::vector<std::string> labels(const ojson& j, const std::string& path, bool numbers_ok) {
    std::vector<std::string> out;
    if (!j.is_array()) {
      error(path, "expected an array");
      return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string p = path + "[" + std::to_string(i) + "]";
      if (j[i].is_string()) {
        out.push_back(j[i].get<std::string>());
      } else if (numbers_ok && j[i].is_number_integer()) {
        out.push_back(std::to_string(j[i].get<long long>()));
      } else if (numbers_ok && j[i].is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << j[i].get<double>();
        out.push_back(os.str());
      } else {
        error(p, numbers_ok ? "expected a string or number" : "expected a string");
      }
    }
    return out;
  }

  std::vector<double> numbers(const ojson& j, const std::string& path) {
    std::vector<double> out;
    if (!j.is_array()) {
      error(path, "expected an array");
      return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (auto v = number(j[i], path + "[" + std::to_string(i) + "]")) out.push_back(*v);
    }
    return out;
  }

 private:
  std::vector<PlanError>& errors_;
};

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const ojson& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

const char* plan_mode_name(PlanMode m) {
  for (const auto& [mode, name] : kModeNames) {
    if (mode == m) return name;
  }
  return "?";
}

std::optional<PlanMode> plan_mode_from_name(const std::string& name) {
  for (const auto& [mode, n] : kModeNames) {
    if (name == n) return mode;
  }
  return std::nullopt;
}

ojson ExperimentPlan::to_json() const {
  ojson j;
  j["schema_version"] = kSchemaVersion;
  j["mode"] = plan_mode_name(mode);
  j["betas"] = betas;
  j["psi"] = psi;
  j["f"] = f;
  j["maps"] = maps;
  j["theorem"] = theorem;
  j["t"] = t;
  j["n_range"] = {n_lo, n_hi};
  j["full_only"] = full_only;
  j["max_cylinders"] = max_cylinders;
  j["samples"] = samples;
  j["seed"] = seed;
  j["precision_bits"] = precision_bits;
  j["ball_range"] = ball_range ? ojson{ball_range->first, ball_range->second} : ojson(nullptr);
  j["s"] = s;
  j["anchor"] = anchor;
  j["deltas"] = deltas;
  j["expect_slope"] =
      expect_slope ? ojson{expect_slope->first, expect_slope->second} : ojson(nullptr);
  j["output"] = {{"dir", out_dir}, {"format", format == OutputFormat::json ? "json" : "csv"}};
  return j;
}

std::string ExperimentPlan::hash() const {
  auto j = to_json();
  j.erase("output");
  return hex64(fnv1a(j.dump()));
}

std::string PlanParseResult::error_text() const {
  std::string out;
  for (const auto& e : errors) out += e.path + ": " + e.message + "\n";
  return out;
}

std::vector<PlanError> validate_plan(const ExperimentPlan& p) {
  std::vector<PlanError> errors;
  auto err = [&](const std::string& path, const std::string& msg) { errors.push_back({path, msg}); };
  const PlanMode m = p.mode;
  const bool needs_betas = m == PlanMode::classify || m == PlanMode::enumerate ||
                           m == PlanMode::verify_core || m == PlanMode::verify_divergence ||
                           m == PlanMode::measure;
  const bool needs_psi = m == PlanMode::classify || m == PlanMode::verify_divergence ||
                         m == PlanMode::measure;
  const bool needs_f =
      m == PlanMode::classify || m == PlanMode::w2star || m == PlanMode::verify_divergence;

  if (p.precision_bits < 64 || p.precision_bits > 8192) err("precision_bits", "must lie in [64, 8192]");
  if (p.samples < 1 || p.samples > 1'000'000'000) err("samples", "must lie in [1, 1e9]");
  if (p.n_lo < 1 || p.n_hi < p.n_lo || p.n_hi > 100000) err("n_range", "need 1 <= lo <= hi <= 100000");

  if (needs_betas && p.betas.empty()) err("betas", "required for mode " + std::string(plan_mode_name(m)));
  if ((m == PlanMode::enumerate || m == PlanMode::verify_core) && p.betas.size() > 1) {
    err("betas", "this mode takes a single beta");
  }
  BetaVector betas;
  for (std::size_t i = 0; i < p.betas.size(); ++i) {
    try {
      betas.push_back(Beta::parse(p.betas[i], p.precision_bits));
    } catch (const Error& e) {
      err("betas[" + std::to_string(i) + "]", e.what());
    }
  }
  if (betas.size() == p.betas.size()) {
    for (std::size_t i = 0; i < betas.size(); ++i) {
      if (!(betas[i].value > 1)) err("betas[" + std::to_string(i) + "]", "betas must exceed 1");
      if (i > 0 && betas[i].value < betas[i - 1].value) {
        err("betas", "betas must be nondecreasing");
        break;
      }
    }
  }

  if (needs_psi && p.psi.empty()) err("psi", "required for mode " + std::string(plan_mode_name(m)));
  for (std::size_t i = 0; i < p.psi.size(); ++i) {
    const std::string path = "psi[" + std::to_string(i) + "]";
    try {
      ApproxFunction::parse(p.psi[i]).validate();
    } catch (const Error& e) {
      err(path, e.what());
    }
  }
  if (needs_psi && !p.psi.empty()) {
    if (weighted_mode(p) && p.psi.size() != p.betas.size()) {
      err("psi", "need one rate function per beta");
    }
    if (m == PlanMode::classify && p.theorem == "multiplicative" && p.psi.size() != 1) {
      err("psi", "the multiplicative theorem takes a single rate function");
    }
  }
  if (m == PlanMode::classify && p.theorem != "rectangle" && p.theorem != "multiplicative") {
    err("theorem", "must be \"rectangle\" or \"multiplicative\"");
  }

  if (needs_f && p.f.empty()) err("f", "required for mode " + std::string(plan_mode_name(m)));
  if (!p.f.empty()) {
    try {
      DimensionFunction::parse(p.f);
    } catch (const DomainError& e) {
      const std::string what = e.what();
      err("f", what.find("nondecreasing") != std::string::npos
                   ? what
                   : "dimension function must be nondecreasing with f(0+) = 0: " + what);
    } catch (const Error& e) {
      err("f", e.what());
    }
  }

  for (std::size_t i = 0; i < p.maps.size(); ++i) {
    try {
      LipschitzMap::parse(p.maps[i]).check_range();
    } catch (const Error& e) {
      err("maps[" + std::to_string(i) + "]", e.what());
    }
  }
  if (!p.maps.empty() && p.maps.size() != p.betas.size()) err("maps", "need one map per beta");

  if (m == PlanMode::w2star && !(p.t > 0)) err("t", "must be positive");
  if (p.ball_range) {
    const auto [lo, hi] = *p.ball_range;
    if (lo < 1 || hi < lo) err("ball_range", "need 1 <= lo <= hi");
    if (m == PlanMode::verify_divergence && !betas.empty() && !all_integer(betas)) {
      err("ball_range", "the ball bound needs integer betas");
    }
  }
  if (m == PlanMode::cover_scaling) {
    if (!(p.s > 1 && p.s <= 2)) err("s", "must lie in (1, 2]");
    if (p.anchor.size() != 2) err("anchor", "need two coordinates");
    for (double a : p.anchor) {
      if (!(a >= 0 && a <= 1)) err("anchor", "coordinates must lie in [0, 1]");
    }
    if (p.deltas.size() < 2) err("deltas", "need at least two values");
    for (double d : p.deltas) {
      if (!(d > 0 && d < 1)) err("deltas", "values must lie in (0, 1)");
    }
  }
  if (p.expect_slope && p.expect_slope->first > p.expect_slope->second) {
    err("expect_slope", "need lo <= hi");
  }
  return errors;
}

PlanParseResult parse_plan(const std::string& text, std::optional<PlanMode> mode) {
  PlanParseResult res;
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    res.errors.push_back({"$", std::string("invalid JSON: ") + e.what()});
    return res;
  }
  if (!j.is_object()) {
    res.errors.push_back({"$", "expected an object"});
    return res;
  }
  Reader rd(res.errors);
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) rd.error(key, "unknown key");
  }

  ExperimentPlan p;
  if (j.contains("schema_version")) {
    auto v = rd.integer(j["schema_version"], "schema_version");
    if (v && *v != kSchemaVersion) {
      rd.error("schema_version", "unsupported version " + std::to_string(*v));
    }
  }
  std::optional<PlanMode> file_mode;
  if (j.contains("mode")) {
    if (auto s = rd.string(j["mode"], "mode")) {
      file_mode = plan_mode_from_name(*s);
      if (!file_mode) rd.error("mode", "unknown mode \"" + *s + "\"");
    }
  }
  if (file_mode && mode && *file_mode != *mode) {
    rd.error("mode", std::string("config is for \"") + plan_mode_name(*file_mode) +
                         "\" but the command is \"" + plan_mode_name(*mode) + "\"");
  }
  if (!file_mode && !mode && !j.contains("mode")) rd.error("mode", "required");
  p.mode = file_mode ? *file_mode : mode.value_or(PlanMode::verify_all);

  if (j.contains("betas")) p.betas = rd.labels(j["betas"], "betas", true);
  if (j.contains("psi")) p.psi = rd.labels(j["psi"], "psi", false);
  if (j.contains("f")) {
    if (auto s = rd.string(j["f"], "f")) p.f = *s;
  }
  if (j.contains("maps")) p.maps = rd.labels(j["maps"], "maps", false);
  if (j.contains("theorem")) {
    if (auto s = rd.string(j["theorem"], "theorem")) p.theorem = *s;
  }
  if (j.contains("t")) {
    if (auto v = rd.number(j["t"], "t")) p.t = *v;
  } else if (p.mode == PlanMode::w2star) {
    rd.error("t", "required for mode w2star");
  }

  auto pair_of = [&](const char* key, bool integral) -> std::optional<std::pair<double, double>> {
    const auto& v = j[key];
    if (v.is_null()) return std::nullopt;
    if (!v.is_array() || v.size() != 2) {
      rd.error(key, "expected [lo, hi]");
      return std::nullopt;
    }
    auto get = [&](std::size_t k) -> std::optional<double> {
      const std::string path = std::string(key) + "[" + std::to_string(k) + "]";
      if (!integral) return rd.number(v[k], path);
      auto x = rd.integer(v[k], path);
      return x ? std::optional<double>(double(*x)) : std::nullopt;
    };
    auto a = get(0);
    auto b = get(1);
    if (!a || !b) return std::nullopt;
    return std::pair{*a, *b};
  };
  auto clamp_int = [](double x) { return static_cast<int>(std::clamp(x, -1e9, 1e9)); };

  if (j.contains("n_range")) {
    if (auto r = pair_of("n_range", true)) {
      p.n_lo = clamp_int(r->first);
      p.n_hi = clamp_int(r->second);
    }
  } else if (auto d = default_range(p.mode)) {
    p.n_lo = d->first;
    p.n_hi = d->second;
  } else {
    rd.error("n_range", std::string("required for mode ") + plan_mode_name(p.mode));
  }
  if (j.contains("ball_range")) {
    if (auto r = pair_of("ball_range", true)) p.ball_range = std::pair{clamp_int(r->first), clamp_int(r->second)};
  }
  if (j.contains("expect_slope")) p.expect_slope = pair_of("expect_slope", false);

  if (j.contains("full_only")) {
    if (!j["full_only"].is_boolean()) {
      rd.error("full_only", "expected a boolean");
    } else {
      p.full_only = j["full_only"].get<bool>();
    }
  }
  auto unsigned_of = [&](const char* key, auto& dst) {
    if (!j.contains(key)) return;
    const auto& v = j[key];
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      rd.error(key, "expected a nonnegative integer");
      return;
    }
    dst = static_cast<std::remove_reference_t<decltype(dst)>>(v.get<std::uint64_t>());
  };
  unsigned_of("max_cylinders", p.max_cylinders);
  unsigned_of("samples", p.samples);
  unsigned_of("seed", p.seed);
  if (j.contains("precision_bits")) {
    if (auto v = rd.integer(j["precision_bits"], "precision_bits")) p.precision_bits = clamp_int(double(*v));
  }
  if (j.contains("s")) {
    if (auto v = rd.number(j["s"], "s")) p.s = *v;
  }
  if (j.contains("anchor")) p.anchor = rd.numbers(j["anchor"], "anchor");
  if (j.contains("deltas")) p.deltas = rd.numbers(j["deltas"], "deltas");

  if (j.contains("output")) {
    const auto& o = j["output"];
    if (!o.is_object()) {
      rd.error("output", "expected an object");
    } else {
      for (const auto& [key, value] : o.items()) {
        if (key == "dir") {
          if (auto s = rd.string(value, "output.dir")) p.out_dir = *s;
        } else if (key == "format") {
          auto s = rd.string(value, "output.format");
          if (s && *s == "json") {
            p.format = OutputFormat::json;
          } else if (s && *s == "csv") {
            p.format = OutputFormat::csv;
          } else if (s) {
            rd.error("output.format", "must be \"json\" or \"csv\"");
          }
        } else {
          rd.error("output." + key, "unknown key");
        }
      }
    }
  }

  // semantic errors under a path that already failed would only repeat it
  const auto schema_errors = res.errors;
  for (auto& e : validate_plan(p)) {
    const bool shadowed = std::any_of(schema_errors.begin(), schema_errors.end(), [&](const PlanError& s) {
      return e.path.compare(0, s.path.size(), s.path) == 0 || s.path.compare(0, e.path.size(), e.path) == 0;
    });
    if (!shadowed) res.errors.push_back(std::move(e));
  }
  if (res.errors.empty()) res.plan = std::move(p);
  return res;
}

std::string DataTable::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + csv_field(columns[i]);
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(cell_text(row[i]));
    out += '\n';
  }
  return out;
}

bool ReportBundle::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

int ReportBundle::exit_code() const {
  if (!complete) return 3;
  return passed() ? 0 : 1;
}

ojson ReportBundle::to_json(bool with_timing) const {
  ojson j;
  j["schema_version"] = kSchemaVersion;
  j["plan_hash"] = plan_hash;
  j["mode"] = mode;
  j["complete"] = complete;
  j["error"] = complete ? ojson(nullptr) : ojson(error);
  j["passed"] = passed();
  j["checks"] = ojson::array();
  for (const auto& c : checks) j["checks"].push_back(c.to_json());
  j["flags"] = ojson::array();
  for (const auto& c : flags) j["flags"].push_back(c.to_json());
  j["verdicts"] = ojson::array();
  for (const auto& [label, v] : verdicts) {
    j["verdicts"].push_back({{"label", label}, {"verdict", ojson::parse(v.to_json())}});
  }
  j["tables"] = ojson::array();
  for (const auto& t : tables) {
    ojson rows = ojson::array();
    for (const auto& r : t.rows) rows.push_back(r);
    j["tables"].push_back({{"name", t.name}, {"columns", t.columns}, {"rows", rows}});
  }
  if (with_timing) {
    ojson tm = ojson::object();
    for (const auto& [k, v] : timing) tm[k] = v;
    j["timing"] = tm;
  }
  return j;
}

std::string ReportBundle::checks_csv() const {
  std::string out = "kind,name,passed,detail,measured\n";
  auto emit = [&](const char* kind, const CheckResult& c) {
    std::ostringstream m;
    m.precision(12);
    for (std::size_t i = 0; i < c.measured.size(); ++i) {
      m << (i ? ";" : "") << c.measured[i].first << '=' << c.measured[i].second;
    }
    out += std::string(kind) + ',' + csv_field(c.name) + ',' + (c.passed ? "true" : "false") + ',' +
           csv_field(c.detail) + ',' + csv_field(m.str()) + '\n';
  };
  for (const auto& c : checks) emit("check", c);
  for (const auto& c : flags) emit("flag", c);
  return out;
}

namespace {

struct Inputs {
  BetaVector betas;
  ApproxTuple psi;
  std::optional<DimensionFunction> f;
  std::vector<LipschitzMap> maps;
};

Inputs build_inputs(const ExperimentPlan& p) {
  Inputs in;
  for (const auto& b : p.betas) in.betas.push_back(Beta::parse(b, p.precision_bits));
  for (const auto& s : p.psi) in.psi.push_back(ApproxFunction::parse(s));
  if (!p.f.empty()) in.f = DimensionFunction::parse(p.f);
  for (std::size_t i = 0; i < p.betas.size(); ++i) {
    in.maps.push_back(p.maps.empty() ? LipschitzMap::constant(0) : LipschitzMap::parse(p.maps[i]));
  }
  return in;
}

// moves the per-check wall time out of the deterministic part of the report
void take_timing(ReportBundle& b, CheckResult c) {
  auto it = std::find_if(c.measured.begin(), c.measured.end(),
                         [](const auto& kv) { return kv.first == "seconds"; });
  if (it != c.measured.end()) {
    b.timing.push_back({c.name, it->second});
    c.measured.erase(it);
  }
  b.checks.push_back(std::move(c));
}

CheckResult hypotheses_flag(const DichotomyVerdict& v) {
  CheckResult c{"hypotheses", v.hypotheses_hold(), conclusion_name(v.conclusion), {}};
  for (const auto& h : v.hypothesis_checks) {
    if (!h.pass) c.detail += "; " + h.name + " failed: " + h.note;
  }
  if (!v.reason.empty() && c.detail.find(v.reason) == std::string::npos) c.detail += "; " + v.reason;
  return c;
}

// the fitted form should track log a_n up to a bounded constant
CheckResult form_check(const AsymptoticForm& form, const std::vector<std::pair<int, double>>& terms,
                       long long n0) {
  CheckResult c{"asymptotic form tracks the terms", true, "", {}};
  double worst = 0;
  std::size_t compared = 0;
  for (const auto& [n, lt] : terms) {
    if (n < n0 || !std::isfinite(lt)) continue;
    worst = std::max(worst, std::abs(form.log_value(n) - lt));
    ++compared;
  }
  c.passed = compared > 0 && worst <= std::log(8.0);
  c.detail = "max |log form - log term| = " + std::to_string(worst) + " over " +
             std::to_string(compared) + " terms";
  c.measured = {{"max_log_gap", worst}, {"terms", double(compared)}};
  return c;
}

void run_classify(const ExperimentPlan& p, ReportBundle& b) {
  const auto in = build_inputs(p);
  DataTable table{"terms", {"n", "log_term", "term"}, {}};
  std::vector<std::pair<int, double>> terms;
  DichotomyVerdict v;
  if (p.theorem == "multiplicative") {
    const int d = static_cast<int>(in.betas.size());
    v = multiplicative_verdict(in.betas, in.psi[0], *in.f, d);
    SeriesSpec spec{d == 1 ? SeriesTarget::multiplicative_d1 : SeriesTarget::multiplicative,
                    in.betas, in.psi, *in.f, d, 0};
    for (int n = std::max<long long>(p.n_lo, v.n0); n <= p.n_hi; ++n) {
      const double lt = series_log_term(spec, n);
      terms.push_back({n, lt});
      table.rows.push_back({n, lt, std::exp(lt)});
    }
  } else {
    v = rectangle_verdict(in.betas, in.psi, *in.f);
    table.columns = {"n", "log_term", "term", "tau_star", "axis", "psi_scale"};
    if (v.hypotheses_hold() || v.series_form) {
      const int start = std::max(p.n_lo, sn_min_index(in.betas, in.psi));
      for (int n = start; n <= p.n_hi; ++n) {
        const auto sb = sn_breakdown(in.betas, in.psi, *in.f, n);
        const auto& cand = sb.candidates[sb.argmin];
        terms.push_back({n, sb.log_term});
        table.rows.push_back({n, sb.log_term, std::exp(sb.log_term), sb.tau_star(), cand.axis + 1,
                              cand.psi_scale});
      }
    }
  }
  b.flags.push_back(hypotheses_flag(v));
  if (v.series_form && v.hypotheses_hold() && !terms.empty()) {
    b.checks.push_back(form_check(*v.series_form, terms, v.n0));
  }
  b.verdicts.push_back({p.theorem, v});
  b.tables.push_back(std::move(table));
}

void run_w2star(const ExperimentPlan& p, ReportBundle& b) {
  const auto f = DimensionFunction::parse(p.f);
  auto v = w2star_verdict(p.t, f);
  b.flags.push_back(hypotheses_flag(v));
  b.verdicts.push_back({"w2star", v});
}

void run_enumerate(const ExperimentPlan& p, ReportBundle& b) {
  const Beta beta = Beta::parse(p.betas[0], p.precision_bits);
  const auto counts = count_cylinders(beta, p.n_hi);
  DataTable ct{"counts", {"n", "total", "full"}, {}};
  for (const auto& c : counts) {
    if (c.n >= p.n_lo) ct.rows.push_back({c.n, c.total, c.full});
  }
  b.tables.push_back(std::move(ct));
  const std::uint64_t predicted = p.full_only ? counts.back().full : counts.back().total;
  if (predicted > p.max_cylinders) {
    throw ResourceError("level " + std::to_string(p.n_hi) + " has " + std::to_string(predicted) +
                        " cylinders, above max_cylinders = " + std::to_string(p.max_cylinders));
  }
  const auto cyls = p.full_only ? enumerate_full(beta, p.n_hi, std::nullopt, p.max_cylinders)
                                : enumerate_cylinders(beta, p.n_hi, p.max_cylinders);
  DataTable t{"cylinders", {"word", "left", "length", "full"}, {}};
  for (const auto& c : cyls) t.rows.push_back({word_string(c.word), c.left_d(), c.length_d(), c.is_full});
  b.tables.push_back(std::move(t));
  CheckResult c{"enumeration matches the automaton count", cyls.size() == predicted, "", {}};
  c.detail = std::to_string(cyls.size()) + " enumerated, " + std::to_string(predicted) + " counted";
  c.measured = {{"enumerated", double(cyls.size())}, {"counted", double(predicted)}};
  b.checks.push_back(std::move(c));
}

void run_verify_core(const ExperimentPlan& p, ReportBundle& b) {
  const Beta beta = Beta::parse(p.betas[0], p.precision_bits);
  for (auto& c : verify_core(beta, p.n_hi)) take_timing(b, std::move(c));
  DataTable t{"counts", {"n", "total", "full", "renyi_lower", "renyi_upper", "li_lower"}, {}};
  for (const auto& c : count_cylinders(beta, p.n_hi)) {
    if (c.n < p.n_lo) continue;
    const auto cb = count_bounds(beta, c.n);
    t.rows.push_back({c.n, c.total, c.full, to_double(cb.renyi_lower), to_double(cb.renyi_upper),
                      to_double(cb.li_lower)});
  }
  b.tables.push_back(std::move(t));
}

void run_verify_divergence(const ExperimentPlan& p, ReportBundle& b) {
  const auto in = build_inputs(p);
  const auto order = eventual_block_order(in.betas, in.psi);
  DivergenceConfig cfg{"plan", in.betas, permute(in.psi, order), *in.f};
  const auto [lo, hi] = p.ball_range.value_or(std::pair{1, 0});
  for (auto& c : verify_divergence(cfg, p.n_hi, lo, hi, p.samples, p.seed)) take_timing(b, std::move(c));
  DataTable t{"frames",
              {"n", "in_P", "m", "kj_prev", "kj", "log_omega", "omega_bounds", "identity_rel_error",
               "phi_rel_error"},
              {}};
  for (int n = std::max(p.n_lo, sn_min_index(cfg.betas, cfg.psi)); n <= p.n_hi; ++n) {
    const auto fr = frame(n, cfg.betas, cfg.psi, cfg.f);
    if (!fr.p.in_P) {
      t.rows.push_back({n, false, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr});
      continue;
    }
    t.rows.push_back({n, true, fr.m, fr.kj_prev, fr.kj, fr.log_omega,
                      fr.found_m && fr.bounds_hold(), fr.identity_rel_error, fr.phi_rel_error});
  }
  b.tables.push_back(std::move(t));
  std::string ord;
  for (int i : order) ord += (ord.empty() ? "" : " ") + std::to_string(i + 1);
  b.flags.push_back({"block order", true, "psi order used: " + ord, {}});
}

void run_measure(const ExperimentPlan& p, ReportBundle& b) {
  const auto in = build_inputs(p);
  const auto tail = weighted_tail(in.betas, in.psi, in.maps, p.n_lo, p.n_hi);
  const auto est = mc_lebesgue(tail, p.samples, p.seed);
  b.tables.push_back({"estimate",
                      {"estimate", "radius", "samples", "hits", "ambiguous", "config_hash"},
                      {{est.estimate, est.radius, est.samples, est.hits, est.ambiguous,
                        hex64(est.config_hash)}}});
  if (tail.dimension() != 1) return;

  std::optional<std::pair<double, double>> bracket;
  const char* oracle = "";
  if (in.betas[0].is_integer && in.maps[0].kind() == LipschitzMap::Kind::constant) {
    const auto ub = shift_union_bounds(tail);
    bracket = std::pair{ub.lower, ub.upper};
    oracle = "digit-window bracket";
  } else {
    const auto counts = count_cylinders(in.betas[0], p.n_hi);
    std::uint64_t total = 0;
    for (const auto& c : counts) {
      if (c.n >= p.n_lo) total += c.total;
    }
    if (total <= 2'000'000) {
      const double exact = to_double(exact_union_measure(tail));
      bracket = std::pair{exact, exact};
      oracle = "interval merge";
    }
  }
  if (!bracket) {
    b.flags.push_back({"exact oracle", false, "too many cylinders for an exact union", {}});
    return;
  }
  b.tables.push_back({"exact", {"lower", "upper", "oracle"}, {{bracket->first, bracket->second, oracle}}});
  const bool ok = est.estimate >= bracket->first - est.radius && est.estimate <= bracket->second + est.radius;
  CheckResult c{"estimate agrees with the exact union", ok, "", {}};
  c.detail = std::string(oracle) + " [" + std::to_string(bracket->first) + ", " +
             std::to_string(bracket->second) + "], estimate " + std::to_string(est.estimate) + " ± " +
             std::to_string(est.radius);
  c.measured = {{"estimate", est.estimate}, {"lower", bracket->first}, {"upper", bracket->second}};
  b.checks.push_back(std::move(c));
}

void run_cover_scaling(const ExperimentPlan& p, ReportBundle& b) {
  DataTable t{"hyperboloid", {"delta", "balls", "volume", "constant", "min_diameter", "escapes"}, {}};
  std::vector<double> xs, ys;
  std::size_t escapes = 0;
  for (std::size_t i = 0; i < p.deltas.size(); ++i) {
    const double delta = p.deltas[i];
    const auto hc = hyperboloid_cover(p.anchor, delta, p.s);
    const auto cov = check_hyperboloid_coverage(hc, p.samples, p.seed + i);
    escapes += cov.escapes;
    xs.push_back(delta);
    ys.push_back(hc.cover.total_volume);
    t.rows.push_back({delta, hc.cover.ball_count, hc.cover.total_volume, hc.constant, hc.min_diameter,
                      cov.escapes});
  }
  b.tables.push_back(std::move(t));
  const auto fit = fit_log_log(xs, ys);
  CheckResult cov{"hyperboloid coverage", escapes == 0,
                  std::to_string(escapes) + " escapes over " + std::to_string(p.deltas.size()) +
                      " covers; fitted slope " + std::to_string(fit.slope),
                  {{"escapes", double(escapes)}, {"slope", fit.slope}, {"expected_slope", p.s - 1}}};
  b.checks.push_back(std::move(cov));
  if (p.expect_slope) {
    const auto [lo, hi] = *p.expect_slope;
    b.checks.push_back({"fitted slope in range", fit.slope >= lo && fit.slope <= hi,
                        "slope " + std::to_string(fit.slope) + " against [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + "]",
                        {{"slope", fit.slope}}});
  }
}

void run_verify_all(const ExperimentPlan& p, const RunOptions& opt, ReportBundle& b) {
  auto tasks = acceptance_tasks(p.seed);
  std::vector<std::optional<CheckResult>> results(tasks.size());
  std::vector<std::exception_ptr> failures(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    PrecisionScope scope(p.precision_bits);
    for (std::size_t i; (i = next++) < tasks.size();) {
      try {
        results[i] = tasks[i]();
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(opt.jobs, 1, tasks.size());
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < jobs; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (failures[i]) std::rethrow_exception(failures[i]);
    take_timing(b, std::move(*results[i]));
  }
}

}  // namespace

ReportBundle run_plan(const ExperimentPlan& plan, const RunOptions& options) {
  ReportBundle b;
  b.plan_hash = plan.hash();
  b.mode = plan_mode_name(plan.mode);
  PrecisionScope scope(plan.precision_bits);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (plan.mode) {
      case PlanMode::classify: run_classify(plan, b); break;
      case PlanMode::w2star: run_w2star(plan, b); break;
      case PlanMode::enumerate: run_enumerate(plan, b); break;
      case PlanMode::verify_core: run_verify_core(plan, b); break;
      case PlanMode::verify_divergence: run_verify_divergence(plan, b); break;
      case PlanMode::measure: run_measure(plan, b); break;
      case PlanMode::cover_scaling: run_cover_scaling(plan, b); break;
      case PlanMode::verify_all: run_verify_all(plan, options, b); break;
    }
  } catch (const ResourceError& e) {
    b.complete = false;
    b.error = std::string("resource: ") + e.what();
  } catch (const IndeterminateError& e) {
    b.complete = false;
    b.error = std::string("precision: ") + e.what();
  }
  b.timing.push_back({"total", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
  return b;
}

}  // namespace betashrink
