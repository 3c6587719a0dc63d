#include "betashrink/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "betashrink/errors.hpp"
#include "json.hpp"

namespace betashrink {

namespace {

bool approx_equal(double a, double b) {
  return std::abs(a - b) <= kCoefficientTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

bool near_zero(double x) { return approx_equal(x, 0.0); }

int sign_cmp(double a, double b) {
  if (approx_equal(a, b)) return 0;
  return a < b ? -1 : 1;
}

bool log_le(double a, double b) {
  return a <= b + kCoefficientTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

AsymptoticForm beta_form(double log_beta) { return {0, -log_beta, 0, 0, 0}; }

AsymptoticForm psi_form(double log_beta, const ApproxFunction& psi) {
  return {psi.a2, psi.a1 - log_beta, psi.q, 0, psi.a0};
}

// log(-log τ) for a shrinking scale τ
AsymptoticForm neglog_form(const AsymptoticForm& tau) {
  if (tau.gamma < 0 && !near_zero(tau.gamma)) return {0, 0, 2, 0, std::log(-tau.gamma)};
  if (tau.lambda < 0 && !near_zero(tau.lambda)) return {0, 0, 1, 0, std::log(-tau.lambda)};
  throw DomainError("scale does not shrink exponentially");
}

AsymptoticForm logf_form(const DimensionFunction& f, const AsymptoticForm& tau) {
  AsymptoticForm r = tau.scaled(f.s) + neglog_form(tau).scaled(-f.p);
  r.c += std::log(f.scale);
  return r;
}

double log_psi(const ApproxFunction& psi, int n) { return psi.log_value(static_cast<double>(n)); }

std::vector<double> log_betas(const BetaVector& betas) {
  std::vector<double> out;
  for (const auto& b : betas) out.push_back(b.log());
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

const Beta& pick_beta(const BetaVector& betas, int d) {
  if (betas.empty()) throw PreconditionError("at least one β is required");
  if (d == 1) return betas.front();
  return betas.back();
}

}  // namespace

double AsymptoticForm::log_value(double n) const {
  double v = gamma * n * n + lambda * n + c;
  if (q != 0) v += q * std::log(n);
  if (u != 0) v += u * std::log(std::log(n));
  return v;
}

AsymptoticForm AsymptoticForm::operator+(const AsymptoticForm& o) const {
  return {gamma + o.gamma, lambda + o.lambda, q + o.q, u + o.u, c + o.c,
          bounded_remainder && o.bounded_remainder};
}

AsymptoticForm AsymptoticForm::operator-(const AsymptoticForm& o) const {
  return *this + o.scaled(-1);
}

AsymptoticForm AsymptoticForm::scaled(double k) const {
  return {k * gamma, k * lambda, k * q, k * u, k * c, bounded_remainder};
}

int eventual_compare(const AsymptoticForm& a, const AsymptoticForm& b) {
  if (int s = sign_cmp(a.gamma, b.gamma)) return s;
  if (int s = sign_cmp(a.lambda, b.lambda)) return s;
  if (int s = sign_cmp(a.q, b.q)) return s;
  if (int s = sign_cmp(a.u, b.u)) return s;
  return sign_cmp(a.c, b.c);
}

double SnBreakdown::tau_star() const { return std::exp(candidates[argmin].log_tau); }
double SnBreakdown::s_n() const { return std::exp(log_s); }
double SnBreakdown::term() const { return std::exp(log_term); }

int sn_min_index(const BetaVector& betas, const ApproxTuple& psi) {
  if (betas.size() != psi.size()) throw PreconditionError("need one ψ per β");
  long long start = 1;
  for (const auto& p : psi) start = std::max(start, p.validate());
  const auto lb = log_betas(betas);
  for (long long m = start; m < 10'000'000; ++m) {
    bool ok = true;
    for (std::size_t i = 0; i < lb.size() && ok; ++i) {
      const double base = -static_cast<double>(m) * lb[i];
      ok = log_le(base, -1) && log_le(base + psi[i].log_value(static_cast<double>(m)), -1);
    }
    if (ok) return static_cast<int>(m);
  }
  throw DomainError("scales never enter the dimension-function domain");
}

SnBreakdown sn_breakdown(const BetaVector& betas, const ApproxTuple& psi,
                         const DimensionFunction& f, int n) {
  if (betas.empty() || betas.size() != psi.size()) throw PreconditionError("need one ψ per β");
  if (n < 1) throw PreconditionError("n must be positive");
  const auto lb = log_betas(betas);
  const std::size_t d = lb.size();
  std::vector<double> lbase(d), lpsi(d);
  for (std::size_t i = 0; i < d; ++i) {
    lbase[i] = -n * lb[i];
    const double lp = log_psi(psi[i], n);
    if (lp > 0) {
      throw DomainError("psi_" + std::to_string(i + 1) + "(n) > 1 at n = " + std::to_string(n) +
                        "; need n >= " + std::to_string(sn_min_index(betas, psi)));
    }
    lpsi[i] = lbase[i] + lp;
  }
  SnBreakdown out;
  out.n = n;
  for (std::size_t i = 0; i < 2 * d; ++i) {
    SnCandidate c;
    c.axis = static_cast<int>(i % d);
    c.psi_scale = i >= d;
    c.log_tau = c.psi_scale ? lpsi[c.axis] : lbase[c.axis];
    if (c.log_tau > -1 + 1e-12) {
      throw DomainError("scale outside the dimension-function domain at n = " + std::to_string(n) +
                        "; need n >= " + std::to_string(sn_min_index(betas, psi)));
    }
    c.log_value = f.log_eval(std::min(c.log_tau, -1.0));
    for (std::size_t k = 0; k < d; ++k) {
      if (log_le(lbase[k], c.log_tau)) {
        c.K1.push_back(static_cast<int>(k));
        c.log_value += lbase[k] - c.log_tau;
      }
      if (log_le(c.log_tau, lpsi[k])) {
        c.K2.push_back(static_cast<int>(k));
        c.log_value += lpsi[k] - c.log_tau;
      }
    }
    out.candidates.push_back(std::move(c));
  }
  for (std::size_t i = 1; i < out.candidates.size(); ++i) {
    if (out.candidates[i].log_value < out.candidates[out.argmin].log_value) out.argmin = i;
  }
  out.log_s = out.candidates[out.argmin].log_value;
  out.log_term = out.log_s + n * std::accumulate(lb.begin(), lb.end(), 0.0);
  return out;
}

AsymptoticForm series_asymptotics(const SeriesSpec& spec) {
  const DimensionFunction& f = spec.f;
  switch (spec.target) {
    case SeriesTarget::rectangle: {
      const auto lb = log_betas(spec.betas);
      const std::size_t d = lb.size();
      if (d == 0 || spec.psi.size() != d) throw PreconditionError("need one ψ per β");
      std::vector<AsymptoticForm> base(d), scaled(d);
      for (std::size_t i = 0; i < d; ++i) {
        base[i] = beta_form(lb[i]);
        scaled[i] = psi_form(lb[i], spec.psi[i]);
      }
      std::optional<AsymptoticForm> best;
      for (std::size_t j = 0; j < 2 * d; ++j) {
        const AsymptoticForm tau = j < d ? base[j] : scaled[j - d];
        AsymptoticForm v = logf_form(f, tau);
        for (std::size_t k = 0; k < d; ++k) {
          if (eventual_compare(base[k], tau) <= 0) v = v + (base[k] - tau);
          if (eventual_compare(tau, scaled[k]) <= 0) v = v + (scaled[k] - tau);
        }
        if (!best || eventual_compare(v, *best) < 0) best = v;
      }
      AsymptoticForm full{0, std::accumulate(lb.begin(), lb.end(), 0.0), 0, 0, 0};
      return *best + full;
    }
    case SeriesTarget::multiplicative_d1:
    case SeriesTarget::multiplicative: {
      if (spec.psi.empty()) throw PreconditionError("missing ψ");
      const int d = spec.target == SeriesTarget::multiplicative_d1 ? 1 : spec.d;
      const double lbeta = pick_beta(spec.betas, d).log();
      const AsymptoticForm tau = psi_form(lbeta, spec.psi[0]);
      AsymptoticForm lpsi{spec.psi[0].a2, spec.psi[0].a1, spec.psi[0].q, 0, spec.psi[0].a0};
      AsymptoticForm growth{0, d * lbeta, 0, 0, 0};
      return logf_form(f, tau) + growth - lpsi.scaled(d - 1);
    }
    case SeriesTarget::w2star_first: {
      const AsymptoticForm tau{0, -(std::log(2.0) + spec.t), 0, 0, 0};
      return logf_form(f, tau) + AsymptoticForm{0, std::log(6.0), 0, 0, 0};
    }
    case SeriesTarget::w2star_second: {
      const AsymptoticForm tau{-1, -std::log(3.0), 0, 0, 0};
      return logf_form(f, tau) + AsymptoticForm{1, std::log(9.0) - spec.t, 0, 0, 0};
    }
  }
  throw PreconditionError("unknown series target");
}

double series_log_term(const SeriesSpec& spec, int n) {
  const DimensionFunction& f = spec.f;
  const double nn = n;
  switch (spec.target) {
    case SeriesTarget::rectangle:
      return sn_breakdown(spec.betas, spec.psi, f, n).log_term;
    case SeriesTarget::multiplicative_d1:
    case SeriesTarget::multiplicative: {
      const int d = spec.target == SeriesTarget::multiplicative_d1 ? 1 : spec.d;
      const double lbeta = pick_beta(spec.betas, d).log();
      const double lp = log_psi(spec.psi.at(0), n);
      return d * nn * lbeta - (d - 1) * lp + f.log_eval(-nn * lbeta + lp);
    }
    case SeriesTarget::w2star_first:
      return nn * std::log(6.0) + f.log_eval(-nn * (std::log(2.0) + spec.t));
    case SeriesTarget::w2star_second:
      return nn * std::log(9.0) + nn * nn - nn * spec.t + f.log_eval(-nn * std::log(3.0) - nn * nn);
  }
  throw PreconditionError("unknown series target");
}

const char* series_verdict_name(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::converges: return "converges";
    case SeriesVerdict::diverges: return "diverges";
    case SeriesVerdict::undetermined: return "undetermined";
  }
  return "?";
}

SeriesDecision decide_series(const AsymptoticForm& form) {
  SeriesDecision out;
  auto decide = [&](bool converges, const std::string& why) {
    out.verdict = converges ? SeriesVerdict::converges : SeriesVerdict::diverges;
    out.detail = why;
    return out;
  };
  if (!near_zero(form.gamma)) return decide(form.gamma < 0, "gamma = " + fmt(form.gamma));
  if (!near_zero(form.lambda)) return decide(form.lambda < 0, "lambda = " + fmt(form.lambda));
  out.boundary = true;
  if (!approx_equal(form.q, -1)) return decide(form.q < -1, "lambda = 0, q = " + fmt(form.q));
  const bool conv = form.u < -1 && !approx_equal(form.u, -1);
  return decide(conv, "lambda = 0, q = -1, u = " + fmt(form.u));
}

const char* theorem_tag_name(TheoremTag t) {
  switch (t) {
    case TheoremTag::rectangle: return "rectangle";
    case TheoremTag::multiplicative_d1: return "multiplicative_d1";
    case TheoremTag::multiplicative: return "multiplicative";
    case TheoremTag::w2star: return "w2star";
  }
  return "?";
}

const char* conclusion_name(Conclusion c) {
  switch (c) {
    case Conclusion::measure_zero: return "MeasureZero";
    case Conclusion::full_measure: return "FullMeasure";
    case Conclusion::hypothesis_failed: return "HypothesisFailed";
  }
  return "?";
}

bool DichotomyVerdict::hypotheses_hold() const {
  return std::all_of(hypothesis_checks.begin(), hypothesis_checks.end(),
                     [](const HypothesisCheck& c) { return c.pass; });
}

std::string DichotomyVerdict::to_json() const {
  nlohmann::ordered_json j;
  j["tag"] = theorem_tag_name(tag);
  j["hypothesis_checks"] = nlohmann::ordered_json::array();
  for (const auto& c : hypothesis_checks) {
    j["hypothesis_checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"note", c.note}});
  }
  if (series_form) {
    j["series"] = {{"gamma", series_form->gamma},
                   {"lambda", series_form->lambda},
                   {"q", series_form->q},
                   {"u", series_form->u}};
  } else {
    j["series"] = nullptr;
  }
  j["verdict"] = series_verdict_name(series.verdict);
  j["boundary"] = series.boundary;
  j["detail"] = series.detail;
  j["conclusion"] = conclusion_name(conclusion);
  j["infinite"] = infinite;
  j["reason"] = reason;
  j["n0"] = n0;
  j["metadata"] = metadata;
  return j.dump(2);
}

namespace {

void finish(DichotomyVerdict& v) {
  for (const auto& c : v.hypothesis_checks) {
    if (!c.pass) {
      v.conclusion = Conclusion::hypothesis_failed;
      v.reason = c.note;
      return;
    }
  }
  if (v.series.verdict == SeriesVerdict::converges) {
    v.conclusion = Conclusion::measure_zero;
  } else if (v.series.verdict == SeriesVerdict::diverges) {
    v.conclusion = Conclusion::full_measure;
  } else {
    v.conclusion = Conclusion::hypothesis_failed;
    v.reason = "series undetermined";
  }
}

HypothesisCheck psi_check(const ApproxTuple& psi, long long& n0) {
  n0 = 1;
  try {
    for (const auto& p : psi) n0 = std::max(n0, p.validate());
  } catch (const DomainError& e) {
    return {"psi_le_one", false, e.what()};
  }
  return {"psi_le_one", true, "psi_i(n) <= 1 for n >= " + std::to_string(n0)};
}

HypothesisCheck betas_check(const BetaVector& betas) {
  try {
    validate_betas(betas);
  } catch (const DomainError& e) {
    return {"betas_ordered", false, e.what()};
  }
  return {"betas_ordered", true, "1 < beta_1 <= ... <= beta_d"};
}

}  // namespace

DichotomyVerdict rectangle_verdict(const BetaVector& betas, const ApproxTuple& psi,
                                   const DimensionFunction& f) {
  if (betas.empty() || betas.size() != psi.size()) throw PreconditionError("need one ψ per β");
  const int d = static_cast<int>(betas.size());
  DichotomyVerdict v;
  v.tag = TheoremTag::rectangle;
  v.hypothesis_checks.push_back(betas_check(betas));
  long long n0 = 1;
  v.hypothesis_checks.push_back(psi_check(psi, n0));
  const bool below_d = precsim(f, DimensionFunction::power(d));
  v.hypothesis_checks.push_back({"f_precsim_d", below_d,
                                 below_d ? "f ⪯ " + std::to_string(d)
                                         : "f ⪯ " + std::to_string(d) + " fails"});
  for (int k = 1; k < d; ++k) {
    const auto rel = compare_monomial(f, k).relation;
    const bool ok = rel != Relation::incomparable;
    v.hypothesis_checks.push_back({"comparable_" + std::to_string(k), ok,
                                   ok ? std::string("f ") + relation_name(rel) + " " + std::to_string(k)
                                      : "f is incomparable with " + std::to_string(k)});
  }
  if (v.hypotheses_hold()) {
    v.n0 = sn_min_index(betas, psi);
    SeriesSpec spec{SeriesTarget::rectangle, betas, psi, f, d, 0};
    v.series_form = series_asymptotics(spec);
    v.series = decide_series(*v.series_form);
  }
  const bool integral = all_integer(betas);
  if (integral) {
    v.hypothesis_checks.push_back({"integer_betas", true, "every beta_i is an integer"});
  } else if (v.series.verdict == SeriesVerdict::converges) {
    v.hypothesis_checks.push_back({"integer_betas", true, "not needed on the convergence side"});
  } else {
    v.hypothesis_checks.push_back({"integer_betas", false, "non-integer β on divergence side"});
  }
  // within-block order of ψ, largest first
  for (int a = 0; a < d;) {
    int b = a + 1;
    while (b < d && same_beta(betas[a], betas[b])) ++b;
    if (b - a > 1) {
      std::vector<int> idx(b - a);
      std::iota(idx.begin(), idx.end(), a);
      const double lbeta = betas[a].log();
      std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) {
        return eventual_compare(psi_form(lbeta, psi[x]), psi_form(lbeta, psi[y])) > 0;
      });
      std::ostringstream os;
      os << "block beta=" << betas[a].label << " order";
      for (int i : idx) os << ' ' << i + 1;
      v.metadata.push_back(os.str());
    }
    a = b;
  }
  finish(v);
  return v;
}

DichotomyVerdict multiplicative_verdict(const BetaVector& betas, const ApproxFunction& psi,
                                        const DimensionFunction& f, int d) {
  if (d < 1) throw PreconditionError("d must be at least 1");
  DichotomyVerdict v;
  v.tag = d == 1 ? TheoremTag::multiplicative_d1 : TheoremTag::multiplicative;
  v.hypothesis_checks.push_back(betas_check(betas));
  if (static_cast<int>(betas.size()) != d) {
    v.hypothesis_checks.push_back({"dimension", false, "need d betas"});
  }
  long long n0 = 1;
  v.hypothesis_checks.push_back(psi_check({psi}, n0));
  if (d == 1) {
    const bool ok = precsim(f, DimensionFunction::power(1));
    v.hypothesis_checks.push_back({"g_precsim_1", ok, ok ? "g ⪯ 1" : "g ⪯ 1 fails"});
  } else {
    const auto rel = compare(DimensionFunction::power(d - 1), f).relation;
    const bool strict = rel == Relation::strict;
    v.hypothesis_checks.push_back({"d_minus_1_strictly_below_f", strict,
                                   strict ? std::to_string(d - 1) + " ≺ f"
                                          : std::to_string(d - 1) + " ≺ f fails"});
    // f ⪯ s holds for every s strictly above max(s_f, s_f + p_f), so test the midpoint to d
    const double lo = std::max({static_cast<double>(d - 1), f.s, f.s + f.p});
    const double s = (lo + d) / 2;
    const bool ok = lo < d && precsim(f, DimensionFunction::power(s));
    v.hypothesis_checks.push_back({"f_precsim_s_below_d", ok,
                                   ok ? "f ⪯ " + fmt(s) : "f ⪯ s < d fails"});
  }
  if (v.hypotheses_hold()) {
    SeriesSpec spec{d == 1 ? SeriesTarget::multiplicative_d1 : SeriesTarget::multiplicative,
                    betas, {psi}, f, d, 0};
    v.series_form = series_asymptotics(spec);
    v.series = decide_series(*v.series_form);
    const double lbeta = pick_beta(betas, d).log();
    for (long long m = n0;; ++m) {
      if (-static_cast<double>(m) * lbeta + psi.log_value(static_cast<double>(m)) <= -1) {
        v.n0 = m;
        break;
      }
    }
  }
  finish(v);
  return v;
}

DichotomyVerdict w2star_verdict(double t, const DimensionFunction& f) {
  if (!(t > 0)) throw DomainError("t must be positive");
  DichotomyVerdict v;
  v.tag = TheoremTag::w2star;
  const bool below2 = precsim(f, DimensionFunction::power(2));
  v.hypothesis_checks.push_back({"f_precsim_2", below2, below2 ? "f ⪯ 2" : "f ⪯ 2 fails"});
  const auto rel = compare_monomial(f, 1).relation;
  const bool comparable = rel != Relation::incomparable;
  v.hypothesis_checks.push_back({"comparable_1", comparable,
                                 comparable ? std::string("f ") + relation_name(rel) + " 1"
                                            : "f is comparable to neither side of 1"});
  const double log3 = std::log(3.0);
  const bool large_t = t > log3 && !approx_equal(t, log3);
  const bool one_below_f = is_above(rel);
  const bool f_strictly_below = rel == Relation::strict;
  if (!large_t && one_below_f) {
    const double cap = 1 + std::log(2.0) / log3;
    const bool ok = precsim(f, DimensionFunction::power(cap));
    v.hypothesis_checks.push_back({"f_precsim_1_plus_log2_over_log3", ok,
                                   ok ? "f ⪯ 1+log2/log3" : "f ⪯ 1+log2/log3 fails"});
  }
  SeriesSpec spec;
  spec.f = f;
  spec.t = t;
  spec.target = large_t ? SeriesTarget::w2star_first : SeriesTarget::w2star_second;
  v.series_form = series_asymptotics(spec);
  v.series = decide_series(*v.series_form);
  v.n0 = 1;
  finish(v);
  if (!v.hypotheses_hold()) return v;
  if (large_t) {
    if (one_below_f) {
      v.conclusion = Conclusion::measure_zero;
      v.metadata.push_back("t > log 3 and 1 ⪯ f");
    } else {
      v.metadata.push_back("t > log 3 and f ≺ 1: series of f(2^-n e^-nt) 6^n");
    }
  } else {
    if (f_strictly_below) {
      v.conclusion = Conclusion::full_measure;
      v.infinite = true;
      v.metadata.push_back("t <= log 3 and f ≺ 1");
    } else {
      v.metadata.push_back("t <= log 3 and 1 ⪯ f: series of f(3^-n e^-n^2) 9^n e^(n^2-nt)");
    }
  }
  return v;
}

NumericSeriesReport numeric_series(const std::function<double(long long)>& term,
                                   long long n_from, long long n_to) {
  if (n_from < 1 || n_to < n_from) throw PreconditionError("bad summation range");
  NumericSeriesReport r;
  r.n_from = n_from;
  r.n_to = n_to;
  double sum = 0;
  long long next = n_from;
  const long long mid = n_from + (n_to - n_from) / 2;
  double a_mid = 0;
  for (long long n = n_from; n <= n_to; ++n) {
    const double a = term(n);
    sum += a;
    if (n == mid) a_mid = a;
    if (n == next || n == n_to) {
      r.partial_sums.emplace_back(n, sum);
      next = std::max(next + 1, 2 * next);
    }
    r.last_term = a;
  }
  r.tail_ratio = a_mid > 0 ? r.last_term / a_mid : std::numeric_limits<double>::quiet_NaN();
  if (a_mid > 0 && r.last_term > 0 && n_to > mid) {
    r.log_slope = (std::log(r.last_term) - std::log(a_mid)) /
                  (std::log(static_cast<double>(n_to)) - std::log(static_cast<double>(mid)));
  }
  return r;
}

std::string verdicts_to_csv(const std::vector<std::pair<std::string, DichotomyVerdict>>& rows) {
  std::ostringstream os;
  os << "label,tag,conclusion,verdict,gamma,lambda,q,u\n";
  os.precision(12);
  for (const auto& [label, v] : rows) {
    os << label << ',' << theorem_tag_name(v.tag) << ',' << conclusion_name(v.conclusion) << ','
       << series_verdict_name(v.series.verdict);
    if (v.series_form) {
      os << ',' << v.series_form->gamma << ',' << v.series_form->lambda << ',' << v.series_form->q
         << ',' << v.series_form->u;
    } else {
      os << ",,,,";
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace betashrink
