#include "betashrink/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "betashrink/covering.hpp"
#include "betashrink/divergence.hpp"
#include "betashrink/errors.hpp"
#include "betashrink/hitset.hpp"
#include "betashrink/measure.hpp"
#include "betashrink/series.hpp"

namespace betashrink {

nlohmann::ordered_json CheckResult::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["passed"] = passed;
  j["detail"] = detail;
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [k, v] : measured) m[k] = v;
  j["measured"] = m;
  return j;
}

namespace {

BetaVector parse_betas(std::initializer_list<const char*> xs) {
  BetaVector b;
  for (auto x : xs) b.push_back(Beta::parse(x));
  return b;
}

ApproxTuple parse_rates(std::initializer_list<const char*> xs) {
  ApproxTuple t;
  for (auto x : xs) t.push_back(ApproxFunction::parse(x));
  return t;
}

std::vector<LipschitzMap> constant_maps(std::size_t d, double a) {
  return std::vector<LipschitzMap>(d, LipschitzMap::constant(a));
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

std::vector<DivergenceConfig> divergence_configs() {
  const double s2 = std::log(6.0) / (std::log(2.0) + 1.2);
  const double s3 = (3 * std::log(3.0) + 2) / (std::log(3.0) + 1);
  return {
      {"d1", parse_betas({"2"}), parse_rates({"2^-n"}), DimensionFunction::power(0.5)},
      {"d2", parse_betas({"2", "3"}), parse_rates({"exp(-1.2n)", "exp(-n^2)"}),
       DimensionFunction{s2, 0.05, 1}},
      {"d3_tied", parse_betas({"2", "3", "3"}), parse_rates({"n^-0.05", "n^-0.1", "exp(-n)"}),
       DimensionFunction{s3, 0.5, 1}},
  };
}

CheckResult check_full_exactness() {
  CheckResult r{"full-cylinder exactness", true, "", {}};
  std::size_t levels = 0;
  for (auto [b, n_max] : {std::pair{"2", 14}, std::pair{"3", 9}, std::pair{"5", 8}}) {
    Beta beta = Beta::parse(b);
    auto counts = count_cylinders(beta, n_max);
    std::uint64_t expect = 1;
    for (int n = 1; n <= n_max; ++n) {
      expect *= static_cast<std::uint64_t>(beta.max_digit() + 1);
      const auto listed = enumerate_full(beta, n).size();
      ++levels;
      if (listed != expect || counts[n - 1].full != expect) {
        r.passed = false;
        r.detail += std::string("beta=") + b + " n=" + std::to_string(n) + " listed " +
                    std::to_string(listed) + "; ";
      }
    }
  }
  r.measured.push_back({"levels", static_cast<double>(levels)});
  if (r.passed) r.detail = "#Λ_β^n = β^n for every level checked";
  return r;
}

CheckResult check_renyi_sandwich(const std::vector<std::string>& betas, int n_max) {
  CheckResult r{"Renyi sandwich", true, "", {}};
  std::size_t violations = 0, checked = 0;
  for (const auto& b : betas) {
    Beta beta = Beta::parse(b);
    for (const auto& cc : count_cylinders(beta, n_max)) {
      CountBounds cb = count_bounds(beta, cc.n);
      PrecisionScope scope(beta.precision_bits);
      ++checked;
      if (!(cb.renyi_lower <= Real(cc.total) && Real(cc.total) <= cb.renyi_upper)) {
        ++violations;
        r.detail += "beta=" + b + " n=" + std::to_string(cc.n) + "; ";
      }
    }
  }
  r.passed = violations == 0;
  r.measured = {{"checked", double(checked)}, {"violations", double(violations)}};
  if (r.passed) r.detail = "β^n ≤ #Σ ≤ β^(n+1)/(β−1) at every level";
  return r;
}

CheckResult check_li_bounds(const std::vector<std::string>& betas, int n_max) {
  CheckResult r{"Li lower bounds", true, "", {}};
  std::size_t violations = 0, checked = 0;
  double min_margin = 1e300;
  for (const auto& b : betas) {
    Beta beta = Beta::parse(b);
    for (const auto& cc : count_cylinders(beta, n_max)) {
      CountBounds cb = count_bounds(beta, cc.n);
      PrecisionScope scope(beta.precision_bits);
      ++checked;
      const bool ok = cb.li_is_exact ? Real(cc.full) == cb.li_lower : Real(cc.full) > cb.li_lower;
      if (!ok) {
        ++violations;
        r.detail += "beta=" + b + " n=" + std::to_string(cc.n) + "; ";
      }
      if (!cb.li_is_exact) min_margin = std::min(min_margin, to_double(Real(cc.full) / cb.li_lower));
    }
  }
  r.passed = violations == 0;
  r.measured = {{"checked", double(checked)}, {"violations", double(violations)},
                {"min_count_over_bound", min_margin}};
  if (r.passed) r.detail = "#Λ exceeds the lower bound at every level";
  return r;
}

CheckResult check_hit_sandwich(std::size_t trials, std::uint64_t seed) {
  CheckResult r{"hit-set sandwich", true, "", {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const char* names[] = {"2", "3", "2.5", "phi", "1.5", "pi"};
  std::vector<Beta> betas;
  std::vector<BetaShift> shifts;
  for (auto b : names) {
    betas.push_back(Beta::parse(b));
    shifts.emplace_back(betas.back());
  }
  std::size_t done = 0, inner_fail = 0, outer_fail = 0, center_fail = 0, points = 0;
  while (done < trials) {
    const std::size_t k = rng() % betas.size();
    const Beta& beta = betas[k];
    const int n = 1 + static_cast<int>(rng() % 12);
    auto c = make_cylinder(shifts[k], beta_digits(u(rng), beta, n));
    if (!c || !c->is_full) continue;
    LipschitzMap h = LipschitzMap::constant(0.3);
    switch (rng() % 4) {
      case 0: h = LipschitzMap::constant(u(rng) * 0.999); break;
      case 1: h = LipschitzMap::identity(); break;
      case 2: h = LipschitzMap::affine(0.4, 0.1 + 0.4 * u(rng)); break;
      default: h = LipschitzMap::tabulated({0, 0.3, 0.7, 1}, {0.1, 0.6, 0.2, 0.5}, 1.7);
    }
    if (h.lipschitz() >= std::pow(beta.approx(), n)) continue;
    ++done;
    const double rad = 0.01 + 0.98 * u(rng);
    auto e = hit_enclosures(*c, h, rad);
    auto e_small = hit_enclosures(*c, h, rad / 2);
    if (e_small.center != e.center) ++center_fail;
    const double lo = to_double(e.inner_clipped.lo), hi = to_double(e.inner_clipped.hi);
    for (int j = 0; j < 10; ++j) {
      const double x = lo + (hi - lo) * u(rng);
      if (x >= hi) continue;
      ++points;
      if (!(hit_residual(*c, h, x) < rad)) ++inner_fail;
    }
    const double z = to_double(e.center), R = to_double(e.outer_radius);
    for (int j = 0; j < 10; ++j) {
      const double x = c->left_d() + c->length_d() * u(rng);
      if (std::abs(x - z) < R) continue;
      ++points;
      if (hit_residual(*c, h, x) < rad) ++outer_fail;
    }
  }
  r.passed = inner_fail == 0 && outer_fail == 0 && center_fail == 0;
  r.measured = {{"trials", double(done)},
                {"points", double(points)},
                {"inner_failures", double(inner_fail)},
                {"outer_failures", double(outer_fail)},
                {"center_failures", double(center_fail)}};
  r.detail = r.passed ? "no failures" : "sandwich violated";
  return r;
}

namespace {

// min over A_n of log(#τ-balls · f(τ)), counted axis by axis
bool oracle_log_term(const BetaVector& betas, const ApproxTuple& psi, const DimensionFunction& f,
                     int n, double* out) {
  std::vector<double> lb, lp;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    lb.push_back(-n * std::log(betas[i].approx()));
    lp.push_back(lb.back() + psi[i].log_value(n));
  }
  std::vector<double> taus = lb;
  taus.insert(taus.end(), lp.begin(), lp.end());
  double best = 1e300;
  for (double lt : taus) {
    if (lt > -1) return false;
    double v = f.log_eval(lt);
    for (std::size_t i = 0; i < betas.size(); ++i) {
      if (lt <= lp[i]) v += lp[i] - lb[i] - lt;
      else if (lt <= lb[i]) v += -lb[i];
      else v += -lt;
    }
    best = std::min(best, v);
  }
  *out = best;
  return true;
}

}  // namespace

CheckResult check_sn_consistency(std::size_t configs, std::uint64_t seed) {
  CheckResult r{"s_n consistency", true, "", {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const char* pool[] = {"1.5", "phi", "2", "2.5", "3", "pi"};
  std::size_t compared = 0, mismatches = 0, skipped = 0;
  double worst = 0;
  for (std::size_t k = 0; k < configs; ++k) {
    const int d = 1 + static_cast<int>(rng() % 3);
    std::vector<std::string> picks;
    for (int i = 0; i < d; ++i) picks.push_back(pool[rng() % 6]);
    BetaVector betas;
    for (const auto& p : picks) betas.push_back(Beta::parse(p));
    std::sort(betas.begin(), betas.end(), [](const Beta& a, const Beta& b) { return a.value < b.value; });
    ApproxTuple psi;
    for (int i = 0; i < d; ++i) {
      psi.push_back(ApproxFunction{-u(rng), -2 * u(rng), rng() % 2 ? 0.0 : -0.5 * u(rng), -2 * u(rng)});
    }
    DimensionFunction f{0.1 + (d - 0.1) * u(rng), 2 * u(rng) - 1, 1};
    const int lo = std::max(2, sn_min_index(betas, psi));
    const int n = lo + static_cast<int>(rng() % 40);
    double ref;
    if (!oracle_log_term(betas, psi, f, n, &ref)) {
      ++skipped;
      continue;
    }
    const double got = sn_breakdown(betas, psi, f, n).log_term;
    const double err = std::abs(got - ref) / std::max(1.0, std::abs(ref));
    worst = std::max(worst, err);
    ++compared;
    if (err > 1e-9) ++mismatches;
  }
  auto b = parse_betas({"2", "3"});
  auto p = parse_rates({"exp(-1.2n)", "exp(-n^2)"});
  auto worked = sn_breakdown(b, p, DimensionFunction::power(0.9), 3);
  const double tau_expect = -3 * std::log(2.0) - 3.6;
  const bool tau_ok = std::abs(std::log(worked.tau_star()) - tau_expect) < 1e-12;
  const bool term_ok = std::abs(worked.term() - 1.301) <= 1e-3;
  r.passed = mismatches == 0 && compared > configs / 2 && tau_ok && term_ok;
  r.measured = {{"compared", double(compared)},
                {"skipped", double(skipped)},
                {"mismatches", double(mismatches)},
                {"max_rel_error", worst},
                {"worked_term", worked.term()},
                {"worked_log_tau", std::log(worked.tau_star())}};
  r.detail = "s_3·6^3 = " + fmt(worked.term()) + (tau_ok ? ", τ* = 2^-3 e^-3.6" : ", τ* mismatch");
  return r;
}

CheckResult check_cover_band(int n_lo, int n_hi) {
  CheckResult r{"cover-oracle band", true, "", {}};
  auto b = parse_betas({"2", "3"});
  auto p = parse_rates({"exp(-1.2n)", "exp(-n^2)"});
  const auto f = DimensionFunction::power(0.9);
  const auto h = constant_maps(2, 0.5);
  double lo = 1e300, hi = 0;
  for (int n = n_lo; n <= n_hi; ++n) {
    auto reg = build_weighted_region(b, p, h, n);
    auto sn = sn_breakdown(b, p, f, n);
    std::vector<double> grid;
    for (const auto& c : sn.candidates) grid.push_back(std::exp(c.log_tau));
    auto cover = brute_force_fcover(reg, f, grid);
    const double ratio = cover.best_f_volume / sn.term();
    r.measured.push_back({"ratio_n" + std::to_string(n), ratio});
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  r.passed = lo >= 1.0 / 32 && hi <= 32;
  r.detail = "ratios in [" + fmt(lo) + ", " + fmt(hi) + "]";
  return r;
}

CheckResult check_verdict_agreement() {
  CheckResult r{"verdict agreement", true, "", {}};
  const double log3 = std::log(3.0);
  auto betas = parse_betas({"2", "3"});
  std::size_t compared = 0, disagree = 0;
  for (double t : {0.5, 1.0, log3, 1.2, 2.0}) {
    std::vector<DimensionFunction> fs;
    for (double s : {0.4, 0.665, 0.9, 1.0, 1.2}) fs.push_back(DimensionFunction::power(s));
    fs.push_back(DimensionFunction{std::min(1.0, std::log(6.0) / (std::log(2.0) + t)), 0.5, 1});
    for (const auto& f : fs) {
      auto w = w2star_verdict(t, f);
      auto rv = rectangle_verdict(betas, {ApproxFunction{0, -t, 0, 0}, ApproxFunction{0, 0, -1, 0}}, f);
      if (w.hypotheses_hold() && rv.hypotheses_hold()) {
        ++compared;
        if (w.conclusion != rv.conclusion) {
          ++disagree;
          r.detail += "t=" + fmt(t) + " f=" + f.describe() + "; ";
        }
      }
    }
  }
  std::size_t boundary_ok = 0, boundary = 0;
  for (double t : {1.2, 2.0}) {
    const auto f = DimensionFunction::power(std::log(6.0) / (std::log(2.0) + t));
    auto w = w2star_verdict(t, f);
    auto rv = rectangle_verdict(betas, {ApproxFunction{0, -t, 0, 0}, ApproxFunction{0, 0, -1, 0}}, f);
    ++boundary;
    if (w.conclusion == Conclusion::full_measure && rv.conclusion == Conclusion::full_measure &&
        w.series.verdict == SeriesVerdict::diverges) {
      ++boundary_ok;
    }
  }
  r.passed = disagree == 0 && compared > 0 && boundary_ok == boundary;
  r.measured = {{"compared", double(compared)},
                {"disagreements", double(disagree)},
                {"boundary_full", double(boundary_ok)}};
  if (r.passed) r.detail = "agree on every comparable grid point; boundary exponent gives FullMeasure";
  return r;
}

CheckResult check_divergence_frames(const std::vector<DivergenceConfig>& configs, int n_max) {
  CheckResult r{"divergence-frame identities", true, "", {}};
  for (const auto& c : configs) {
    auto rep = measure_threshold(c.betas, c.psi, c.f, n_max);
    const bool ok = !rep.P.empty() && rep.threshold <= n_max / 2 && rep.checked * 2 >= rep.P.size() &&
                    rep.max_identity_error < 1e-9 && rep.max_phi_error < 1e-9;
    r.passed = r.passed && ok;
    r.measured.push_back({c.name + "_P", double(rep.P.size())});
    r.measured.push_back({c.name + "_threshold", double(rep.threshold)});
    r.measured.push_back({c.name + "_checked", double(rep.checked)});
    r.measured.push_back({c.name + "_identity_error", rep.max_identity_error});
    r.detail += c.name + (ok ? " ok; " : " FAILED; ");
  }
  return r;
}

CheckResult check_ball_bound(const DivergenceConfig& config, int n_lo, int n_hi, std::size_t samples,
                             std::uint64_t seed) {
  CheckResult r{"mu ball bound stability", true, "", {}};
  double lo = 1e300, hi = 0;
  bool spans = true, bounds = true;
  for (int n = n_lo; n <= n_hi; ++n) {
    auto fr = frame(n, config.betas, config.psi, config.f);
    bounds = bounds && fr.p.in_P && fr.bounds_hold();
    std::vector<std::uint64_t> cells;
    for (const auto& b : config.betas) {
      std::uint64_t size = 1;
      for (int k = 0; k < n; ++k) size *= static_cast<std::uint64_t>(b.max_digit() + 1);
      cells.push_back(size / 2);
    }
    auto fam = build_rect_family(fr, config.betas, config.psi, constant_maps(config.betas.size(), 0), cells);
    auto rep = sample_ball_bound(fam, fr, config.f, samples, seed + static_cast<std::uint64_t>(n));
    for (auto k : rep.per_case) spans = spans && k > 0;
    lo = std::min(lo, rep.sup_ratio);
    hi = std::max(hi, rep.sup_ratio);
    r.measured.push_back({"sup_n" + std::to_string(n), rep.sup_ratio});
  }
  r.passed = bounds && spans && lo > 0 && std::isfinite(hi) && hi / lo < 10;
  r.measured.push_back({"spread", hi / lo});
  r.detail = "sup ratio in [" + fmt(lo) + ", " + fmt(hi) + "]" + (spans ? "" : "; a case regime was empty");
  return r;
}

CheckResult check_lebesgue_trend() {
  CheckResult r{"Lebesgue dichotomy trend", true, "", {}};
  auto zero = constant_maps(1, 0);
  auto conv = shift_union_bounds(weighted_tail({Beta::parse("2")}, {ApproxFunction::parse("n^-2")}, zero, 20, 60));
  auto div = shift_union_bounds(weighted_tail({Beta::parse("2")}, {ApproxFunction::parse("1/n")}, zero, 10, 200));
  // the digit-window bounds must bracket interval merge where merge is feasible
  bool bracket = true;
  for (const char* psi : {"n^-2", "1/n"}) {
    auto t = weighted_tail({Beta::parse("2")}, {ApproxFunction::parse(psi)}, zero, 4, 14);
    const double exact = to_double(exact_union_measure(t));
    auto b = shift_union_bounds(t);
    bracket = bracket && b.lower <= exact + 1e-12 && exact <= b.upper + 1e-12;
  }
  r.passed = conv.upper <= 0.2 && div.lower >= 0.8 && bracket;
  r.measured = {{"convergent_upper", conv.upper},
                {"convergent_lower", conv.lower},
                {"divergent_lower", div.lower},
                {"divergent_upper", div.upper}};
  r.detail = "n^-2 on [20,60]: ≤ " + fmt(conv.upper) + "; 1/n on [10,200]: ≥ " + fmt(div.lower) +
             (bracket ? "" : "; bracket against interval merge failed");
  return r;
}

CheckResult check_chung_erdos() {
  CheckResult r{"Chung-Erdos", true, "", {}};
  auto zero = constant_maps(1, 0);
  std::size_t sound = 0, configs = 0;
  for (const char* beta : {"2", "phi", "2.5", "3"}) {
    for (const char* psi : {"1/n", "n^-2", "0.5*n^-0.5"}) {
      auto t = weighted_tail({Beta::parse(beta)}, {ApproxFunction::parse(psi)}, zero, 3, 11,
                             CylinderSelection::full);
      const Interval<Real> unit{Real(0), Real(1)};
      const double exact = to_double(exact_union_measure(t, unit));
      auto ce = chung_erdos_lower(tail_intervals(t), unit);
      ++configs;
      if (ce.bound <= exact + 1e-12) ++sound;
    }
  }
  auto t = weighted_tail({Beta::parse("2")}, {ApproxFunction::parse("1/n")}, zero, 10, 100);
  auto u = shift_union_bounds(t, {}, std::size_t(1) << 16);
  double min_ratio = 1e300;
  bool below_union = true;
  for (int w = 0; w < 8; ++w) {
    Word prefix{static_cast<std::uint8_t>(w >> 2), static_cast<std::uint8_t>((w >> 1) & 1),
                static_cast<std::uint8_t>(w & 1)};
    auto ce = chung_erdos_shift(t, prefix);
    min_ratio = std::min(min_ratio, ce.bound / ce.window);
    below_union = below_union && ce.bound <= u.lower * ce.window;
    if (w == 0) r.measured.push_back({"correlation_constant", ce.correlation_constant});
  }
  r.passed = sound == configs && below_union && min_ratio >= 0.1;
  r.measured.push_back({"min_bound_over_window", min_ratio});
  r.measured.push_back({"sound_configs", double(sound)});
  r.measured.push_back({"union_over_window", u.lower});
  r.detail = "bound ≥ " + fmt(min_ratio) + "·|I| on every level-3 window; sound on " +
             std::to_string(sound) + "/" + std::to_string(configs) + " explicit configs";
  return r;
}

CheckResult check_hyperboloid_scaling(std::size_t samples, std::uint64_t seed) {
  CheckResult r{"hyperboloid cover scaling", true, "", {}};
  std::vector<double> ds, vs;
  std::size_t escapes = 0;
  for (double d : {1e-1, 1e-2, 1e-3, 1e-4}) {
    auto hc = hyperboloid_cover({0, 0}, d, 1.5);
    ds.push_back(d);
    vs.push_back(hc.cover.total_volume);
    escapes += check_hyperboloid_coverage(hc, samples, seed++).escapes;
  }
  auto fit = fit_log_log(ds, vs);
  r.passed = std::abs(fit.slope - 0.5) <= 0.1 && escapes == 0;
  r.measured = {{"slope", fit.slope}, {"escapes", double(escapes)}};
  r.detail = "slope " + fmt(fit.slope) + ", " + std::to_string(escapes) + " escapes";
  return r;
}

CheckResult check_d1_reduction(std::size_t configs, std::uint64_t seed) {
  CheckResult r{"d=1 reduction", true, "", {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const char* bs[] = {"2", "3", "2.5", "phi", "1.5"};
  std::size_t terms = 0, bad = 0;
  double worst = 0;
  for (std::size_t k = 0; k < configs; ++k) {
    BetaVector b{Beta::parse(bs[k % 5])};
    ApproxFunction psi{-u(rng), -u(rng), 0, -2 * u(rng)};
    DimensionFunction g{0.2 + 0.8 * u(rng), 0, 1};
    g.p = g.s == 1 ? 0 : -0.5 * g.s * u(rng);
    g.validate();
    SeriesSpec rect{SeriesTarget::rectangle, b, {psi}, g, 1, 0};
    SeriesSpec mult{SeriesTarget::multiplicative_d1, b, {psi}, g, 1, 0};
    for (int n = sn_min_index(b, {psi}); n < 40; ++n) {
      const double a = series_log_term(rect, n), c = series_log_term(mult, n);
      const double err = std::abs(a - c) / std::max(1.0, std::abs(c));
      worst = std::max(worst, err);
      ++terms;
      if (err > 1e-12) ++bad;
    }
  }
  r.passed = bad == 0;
  r.measured = {{"terms", double(terms)}, {"mismatches", double(bad)}, {"max_rel_error", worst}};
  r.detail = std::to_string(terms) + " terms compared";
  return r;
}

CheckResult check_concatenation(const Beta& beta, int a, int b) {
  CheckResult r{"concatenation of full words", true, "", {}};
  BetaShift shift(beta);
  std::size_t pairs = 0, bad = 0;
  auto us = enumerate_full(beta, a);
  auto vs = enumerate_full(beta, b);
  for (const auto& u : us) {
    for (const auto& v : vs) {
      Word uv = u.word;
      uv.insert(uv.end(), v.word.begin(), v.word.end());
      auto c = make_cylinder(shift, uv);
      ++pairs;
      if (!c || !c->is_full) ++bad;
    }
  }
  r.passed = bad == 0;
  r.measured = {{"pairs", double(pairs)}, {"failures", double(bad)}};
  r.detail = std::to_string(pairs) + " concatenations";
  return r;
}

namespace {

CheckResult timed(int index, CheckResult (*fn)(std::uint64_t), std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult c = fn(seed);
  c.name = std::to_string(index) + " " + c.name;
  c.measured.push_back(
      {"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
  return c;
}

}  // namespace

std::vector<std::function<CheckResult()>> acceptance_tasks(std::uint64_t seed) {
  std::vector<CheckResult (*)(std::uint64_t)> fns{
      [](std::uint64_t) { return check_full_exactness(); },
      [](std::uint64_t) { return check_renyi_sandwich({"1.5", "phi", "2.5", "pi"}, 18); },
      [](std::uint64_t) { return check_li_bounds({"1.5", "phi", "2.5", "pi"}, 18); },
      [](std::uint64_t s) { return check_hit_sandwich(10000, s); },
      [](std::uint64_t s) { return check_sn_consistency(1000, s); },
      [](std::uint64_t) { return check_cover_band(3, 6); },
      [](std::uint64_t) { return check_verdict_agreement(); },
      [](std::uint64_t) { return check_divergence_frames(divergence_configs(), 200); },
      [](std::uint64_t s) { return check_ball_bound(divergence_configs()[1], 8, 14, 10000, s); },
      [](std::uint64_t) { return check_lebesgue_trend(); },
      [](std::uint64_t) { return check_chung_erdos(); },
      [](std::uint64_t s) { return check_hyperboloid_scaling(100000, s); },
      [](std::uint64_t s) { return check_d1_reduction(100, s); },
  };
  std::vector<std::function<CheckResult()>> out;
  for (std::size_t i = 0; i < fns.size(); ++i) {
    out.push_back([i, fn = fns[i], seed] { return timed(static_cast<int>(i + 1), fn, seed); });
  }
  return out;
}

std::vector<CheckResult> acceptance_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  for (auto& task : acceptance_tasks(seed)) out.push_back(task());
  return out;
}

std::vector<CheckResult> verify_core(const Beta& beta, int n_max) {
  std::vector<CheckResult> out;
  out.push_back(check_renyi_sandwich({beta.label}, n_max));
  out.push_back(check_li_bounds({beta.label}, n_max));
  const int a = std::max(1, std::min(4, n_max / 2));
  out.push_back(check_concatenation(beta, a, std::max(1, std::min(5, n_max - a))));
  return out;
}

std::vector<CheckResult> verify_divergence(const DivergenceConfig& config, int n_max, int ball_lo,
                                           int ball_hi, std::size_t samples, std::uint64_t seed) {
  std::vector<CheckResult> out;
  out.push_back(check_divergence_frames({config}, n_max));
  if (all_integer(config.betas) && ball_lo <= ball_hi) {
    out.push_back(check_ball_bound(config, ball_lo, ball_hi, samples, seed));
  }
  return out;
}

}  // namespace betashrink
