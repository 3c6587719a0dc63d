#include "doctest.h"

#include <cmath>
#include <random>

#include "betashrink/errors.hpp"
#include "betashrink/series.hpp"

using namespace betashrink;

namespace {

DimensionFunction df(double s, double p = 0) { return {s, p, 1}; }
ApproxFunction rate(const char* s) { return ApproxFunction::parse(s); }
BetaVector betas(std::initializer_list<const char*> xs) {
  BetaVector out;
  for (auto x : xs) out.push_back(Beta::parse(x));
  return out;
}
ApproxFunction exp_rate(double a1, double a2 = 0) { return {0, a1, a2, 0}; }

}  // namespace

TEST_CASE("sn_breakdown examples") {
  for (int n : {3, 10, 40}) {
    auto b = sn_breakdown(betas({"2"}), {rate("2^-n")}, df(0.5), n);
    CHECK(b.tau_star() == doctest::Approx(std::pow(4.0, -n)));
    CHECK(b.s_n() == doctest::Approx(std::pow(2.0, -n)));
    CHECK(b.term() == doctest::Approx(1.0));
    const auto& c = b.candidates[b.argmin];
    CHECK(c.psi_scale);
    CHECK(c.K1.empty());
    CHECK(c.K2 == std::vector<int>{0});
  }
  auto b = sn_breakdown(betas({"2", "3"}), {rate("exp(-1.2n)"), rate("exp(-n^2)")}, df(0.9), 3);
  CHECK(b.tau_star() == doctest::Approx(std::pow(2.0, -3) * std::exp(-3.6)).epsilon(1e-12));
  CHECK(b.tau_star() == doctest::Approx(0.003415).epsilon(1e-3));
  CHECK(b.s_n() == doctest::Approx(0.006024).epsilon(1e-3));
  CHECK(std::abs(b.term() - 1.301) <= 1e-3);
  CHECK(b.candidates.size() == 4);

  auto flat = sn_breakdown(betas({"2"}), {ApproxFunction::constant(1)}, df(0.7, 0.2), 5);
  CHECK(flat.s_n() == doctest::Approx(df(0.7, 0.2).eval(std::pow(2.0, -5))));
}

TEST_CASE("sn_breakdown domain errors") {
  CHECK_THROWS_AS(sn_breakdown(betas({"1.5"}), {ApproxFunction::constant(1)}, df(1), 1), DomainError);
  CHECK(sn_min_index(betas({"1.5"}), {ApproxFunction::constant(1)}) == 3);
  CHECK_THROWS_AS(sn_breakdown(betas({"2"}), {rate("10*exp(-n)")}, df(1), 2), DomainError);
  try {
    sn_breakdown(betas({"2"}), {rate("10*exp(-n)")}, df(1), 2);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("n >= 3") != std::string::npos);
  }
}

TEST_CASE("series_asymptotics examples") {
  SeriesSpec r1{SeriesTarget::rectangle, betas({"2"}), {rate("2^-n")}, df(0.5), 1, 0};
  auto f1 = series_asymptotics(r1);
  CHECK(f1.gamma == doctest::Approx(0));
  CHECK(f1.lambda == doctest::Approx(0));
  CHECK(f1.q == doctest::Approx(0));
  for (int n = 2; n <= 50; ++n) {
    CHECK(series_log_term(r1, n) == doctest::Approx(f1.log_value(n)).epsilon(1e-9));
  }

  const double s = 0.7, t = 1.5;
  SeriesSpec w{SeriesTarget::w2star_first, {}, {}, df(s), 1, t};
  auto fw = series_asymptotics(w);
  CHECK(fw.lambda == doctest::Approx(std::log(6.0) - s * (std::log(2.0) + t)));
  CHECK(fw.gamma == 0);
  CHECK(fw.q == 0);
  CHECK(fw.u == 0);

  SeriesSpec m{SeriesTarget::multiplicative, betas({"3", "3"}), {rate("exp(-n)")}, df(s), 2, 0};
  auto fm = series_asymptotics(m);
  CHECK(fm.lambda == doctest::Approx(2 * std::log(3.0) + 1 - s * (std::log(3.0) + 1)));
}

TEST_CASE("decide_series examples") {
  CHECK(decide_series({0, 0, 0, 0}).verdict == SeriesVerdict::diverges);
  CHECK(decide_series({0, 0, -2, 0}).verdict == SeriesVerdict::converges);
  CHECK(decide_series({0, 0, -1, 0}).verdict == SeriesVerdict::diverges);
  CHECK(decide_series({0, 0, -1, -2}).verdict == SeriesVerdict::converges);
  CHECK(decide_series({0, 0, -1, -1}).verdict == SeriesVerdict::diverges);
  CHECK(decide_series({-1, 50, 0, 0}).verdict == SeriesVerdict::converges);
  CHECK(decide_series({1e-3, -50, 0, 0}).verdict == SeriesVerdict::diverges);
  CHECK(decide_series({0, -1e-6, 5, 0}).verdict == SeriesVerdict::converges);
  CHECK(decide_series({0, 0, 0, 0}).boundary);
}

TEST_CASE("rectangle_verdict examples") {
  auto v1 = rectangle_verdict(betas({"2"}), {rate("2^-n")}, df(0.5));
  CHECK(v1.conclusion == Conclusion::full_measure);

  const double s = std::log(6.0) / (std::log(2.0) + 2);
  auto v2 = rectangle_verdict(betas({"2", "3"}), {exp_rate(-2), exp_rate(0, -1)}, df(s));
  CHECK(v2.conclusion == Conclusion::full_measure);
  REQUIRE(v2.series_form);
  CHECK(v2.series_form->lambda == 0);
  CHECK(v2.series.boundary);

  auto v3 = rectangle_verdict(betas({"2", "2.5"}), {rate("1/n"), rate("1/n")}, df(1.5));
  CHECK(v3.series.verdict == SeriesVerdict::diverges);
  CHECK(v3.conclusion == Conclusion::hypothesis_failed);
  CHECK(v3.reason == "non-integer β on divergence side");

  auto v4 = rectangle_verdict(betas({"2", "2.5"}), {rate("exp(-n)"), rate("exp(-n)")}, df(1.9));
  CHECK(v4.series.verdict == SeriesVerdict::converges);
  CHECK(v4.conclusion == Conclusion::measure_zero);

  auto v5 = rectangle_verdict(betas({"2", "3"}), {rate("1/n"), rate("1/n")}, df(2.5));
  CHECK(v5.conclusion == Conclusion::hypothesis_failed);

  auto v6 = rectangle_verdict(betas({"2", "3"}), {rate("1/n"), rate("1/n")}, df(0.9, 0.5));
  CHECK(v6.conclusion == Conclusion::hypothesis_failed);
  CHECK(v6.reason.find("incomparable") != std::string::npos);

  auto v7 = rectangle_verdict(betas({"2", "2", "3"}), {rate("n^-2"), rate("exp(-n)"), rate("1/n")},
                              df(2.5));
  REQUIRE(v7.metadata.size() == 1);
  CHECK(v7.metadata[0] == "block beta=2 order 1 2");
  auto v8 = rectangle_verdict(betas({"2", "2", "3"}), {rate("exp(-n)"), rate("n^-2"), rate("1/n")},
                              df(2.5));
  CHECK(v8.metadata[0] == "block beta=2 order 2 1");
  CHECK(v1.to_json().find("\"conclusion\": \"FullMeasure\"") != std::string::npos);
}

TEST_CASE("multiplicative_verdict examples") {
  auto v1 = multiplicative_verdict(betas({"2"}), rate("n^-2"), df(1), 1);
  CHECK(v1.tag == TheoremTag::multiplicative_d1);
  CHECK(v1.conclusion == Conclusion::measure_zero);
  auto v1d = multiplicative_verdict(betas({"2"}), rate("1/n"), df(1), 1);
  CHECK(v1d.conclusion == Conclusion::full_measure);

  const double s = (2 * std::log(3.0) + 1) / (std::log(3.0) + 1);
  auto v2 = multiplicative_verdict(betas({"3", "3"}), rate("exp(-n)"), df(s), 2);
  CHECK(v2.series.boundary);
  CHECK(v2.conclusion == Conclusion::full_measure);
  auto v2c = multiplicative_verdict(betas({"3", "3"}), rate("exp(-n)"), df(s + 0.01), 2);
  CHECK(v2c.conclusion == Conclusion::measure_zero);

  auto v3 = multiplicative_verdict(betas({"2", "3"}), rate("exp(-n)"), df(2), 2);
  CHECK(v3.conclusion == Conclusion::hypothesis_failed);
  CHECK(v3.reason == "f ⪯ s < d fails");

  // d - 1 ≺ f with a positive logarithmic exponent at s_f = d - 1
  auto v4 = multiplicative_verdict(betas({"2", "3"}), rate("exp(-n)"), df(1, 0.3), 2);
  CHECK(v4.hypotheses_hold());
  auto v5 = multiplicative_verdict(betas({"2", "3"}), rate("exp(-n)"), df(1, -0.3), 2);
  CHECK(!v5.hypotheses_hold());
}

TEST_CASE("w2star_verdict examples") {
  CHECK(w2star_verdict(2, df(1)).conclusion == Conclusion::measure_zero);
  auto v = w2star_verdict(1, df(0.9));
  CHECK(v.conclusion == Conclusion::full_measure);
  CHECK(v.infinite);
  const double s = std::log(6.0) / (std::log(2.0) + 2);
  auto b = w2star_verdict(2, df(s));
  CHECK(b.conclusion == Conclusion::full_measure);
  CHECK(b.series.boundary);
  CHECK(w2star_verdict(2, df(s + 1e-3)).conclusion == Conclusion::measure_zero);
  CHECK(w2star_verdict(2, df(0.9, 0.5)).conclusion == Conclusion::hypothesis_failed);
  CHECK(w2star_verdict(1, df(1.9)).conclusion == Conclusion::hypothesis_failed);
  CHECK_THROWS_AS(w2star_verdict(0, df(1)), DomainError);
}

TEST_CASE("w2star and rectangle agree on the grid") {
  const double log3 = std::log(3.0);
  int compared = 0;
  for (double t : {0.5, 1.0, log3, 1.2, 2.0}) {
    std::vector<DimensionFunction> fs;
    for (double s : {0.4, 0.665, 0.9, 1.0, 1.2}) fs.push_back(df(s));
    fs.push_back(df(std::min(1.0, std::log(6.0) / (std::log(2.0) + t)), 0.5));
    for (const auto& f : fs) {
      auto w = w2star_verdict(t, f);
      auto r = rectangle_verdict(betas({"2", "3"}), {exp_rate(-t), exp_rate(0, -1)}, f);
      if (w.hypotheses_hold() && r.hypotheses_hold()) {
        CHECK_MESSAGE(w.conclusion == r.conclusion, "t=" << t << " f=" << f.describe());
        ++compared;
      }
    }
  }
  CHECK(compared >= 25);
}

TEST_CASE("asymptotic forms track the direct terms") {
  std::vector<SeriesSpec> specs{
      {SeriesTarget::rectangle, betas({"2", "3"}), {rate("exp(-1.2n)"), rate("exp(-n^2)")}, df(0.9), 2, 0},
      {SeriesTarget::rectangle, betas({"2", "3"}), {rate("1/n"), rate("n^-2")}, df(1.5, 0.5), 2, 0},
      {SeriesTarget::rectangle, betas({"2", "2", "3"}), {rate("2^-n"), rate("n^-1"), rate("exp(-n)")}, df(2.2, -0.4), 3, 0},
      {SeriesTarget::rectangle, betas({"3"}), {rate("0.5*exp(-0.3n^2)")}, df(0.6, 1), 1, 0},
      {SeriesTarget::multiplicative_d1, betas({"2.5"}), {rate("n^-3")}, df(0.8, -0.5), 1, 0},
      {SeriesTarget::multiplicative, betas({"2", "3"}), {rate("exp(-n)")}, df(1.2, 0.2), 2, 0},
      {SeriesTarget::w2star_first, {}, {}, df(0.6, 0.5), 1, 1.7},
      {SeriesTarget::w2star_second, {}, {}, df(1.1, -0.5), 1, 0.8},
  };
  for (const auto& spec : specs) {
    const auto form = series_asymptotics(spec);
    int start = 1;
    if (spec.target == SeriesTarget::rectangle) start = sn_min_index(spec.betas, spec.psi);
    for (int n = std::max(start, 2); n <= 50; ++n) {
      double direct;
      try {
        direct = series_log_term(spec, n);
      } catch (const DomainError&) {
        continue;
      }
      CHECK(std::abs(direct - form.log_value(n)) <= std::log(8.0));
    }
  }
}

TEST_CASE("d=1 reduction term by term") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const char* bs[] = {"2", "3", "2.5", "phi", "1.5"};
  for (int trial = 0; trial < 100; ++trial) {
    BetaVector b{Beta::parse(bs[trial % 5])};
    ApproxFunction psi{-u(rng), -u(rng), 0, -2 * u(rng)};
    DimensionFunction g = df(0.2 + 0.8 * u(rng), 0);
    g.p = g.s == 1 ? 0 : -0.5 * g.s * u(rng);
    g.validate();
    SeriesSpec rect{SeriesTarget::rectangle, b, {psi}, g, 1, 0};
    SeriesSpec mult{SeriesTarget::multiplicative_d1, b, {psi}, g, 1, 0};
    for (int n = sn_min_index(b, {psi}); n < 40; ++n) {
      CHECK(series_log_term(rect, n) == doctest::Approx(series_log_term(mult, n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("scale invariance of verdicts") {
  auto f = df(0.665);
  auto g = f;
  g.scale = 1e-3;
  for (double t : {0.5, 2.0}) {
    CHECK(w2star_verdict(t, f).conclusion == w2star_verdict(t, g).conclusion);
  }
  auto a = rectangle_verdict(betas({"2", "3"}), {exp_rate(-2), exp_rate(0, -1)}, f);
  auto b = rectangle_verdict(betas({"2", "3"}), {exp_rate(-2), exp_rate(0, -1)}, g);
  CHECK(a.conclusion == b.conclusion);
}

TEST_CASE("numeric mode never claims a verdict") {
  auto r = numeric_series([](long long n) { return 1.0 / (n * std::log(n + 1.0)); }, 1, 4096);
  CHECK(r.verdict == SeriesVerdict::undetermined);
  CHECK(r.partial_sums.size() == 13);
  CHECK(r.partial_sums.back().first == 4096);
  CHECK(r.log_slope < -1);
}
