#include "doctest.h"

#include <cmath>

#include "betashrink/covering.hpp"
#include "betashrink/errors.hpp"
#include "betashrink/series.hpp"

using namespace betashrink;

namespace {

DimensionFunction df(double s, double p = 0) { return {s, p, 1}; }
BetaVector betas(std::initializer_list<const char*> xs) {
  BetaVector out;
  for (auto x : xs) out.push_back(Beta::parse(x));
  return out;
}
ApproxTuple rates(std::initializer_list<const char*> xs) {
  ApproxTuple out;
  for (auto x : xs) out.push_back(ApproxFunction::parse(x));
  return out;
}

}  // namespace

TEST_CASE("cover_count examples") {
  for (int n : {3, 8, 20}) {
    auto e = cover_count(betas({"2"}), rates({"2^-n"}), df(0.5), n, -n * std::log(4.0));
    CHECK(e.count() == doctest::Approx(std::pow(2.0, n)));
    CHECK(e.f_volume() == doctest::Approx(1.0));
    CHECK(e.breakdown[0] == AxisClass::k2);
  }
  auto b = betas({"2", "3"});
  auto p = rates({"exp(-1.2n)", "exp(-n^2)"});
  const double lt = -3 * std::log(2.0) - 3.6;
  auto e = cover_count(b, p, df(0.9), 3, lt);
  CHECK(e.f_volume() == doctest::Approx(1.301).epsilon(1e-3));
  CHECK(e.count() == doctest::Approx(1.301 / df(0.9).eval(std::exp(lt))).epsilon(1e-3));

  // τ = min A_n: every axis in K2
  const double lmin = -3 * std::log(3.0) - 9;
  auto m = cover_count(b, p, df(0.9), 3, lmin);
  CHECK(m.breakdown[0] == AxisClass::k2);
  CHECK(m.breakdown[1] == AxisClass::k2);
  CHECK(m.log_count == doctest::Approx(-3.6 - 9 - 2 * lmin));
}

TEST_CASE("minimum over A_n matches sn_breakdown") {
  struct Cfg {
    BetaVector b;
    ApproxTuple p;
    DimensionFunction f;
  };
  std::vector<Cfg> cfgs{
      {betas({"2", "3"}), rates({"exp(-1.2n)", "exp(-n^2)"}), df(0.9)},
      {betas({"2", "2", "5"}), rates({"n^-2", "exp(-0.5n)", "1/n"}), df(2.3, 0.4)},
      {betas({"2.5", "phi"}), rates({"exp(-n)", "n^-3"}), df(1.4, -0.5)},
  };
  for (auto& c : cfgs) {
    for (int n = sn_min_index(c.b, c.p); n < 30; ++n) {
      const double ref = sn_breakdown(c.b, c.p, c.f, n).log_term;
      CHECK(min_cover_log_volume(c.b, c.p, c.f, n) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("convergent configuration: tail sums of minimal volumes shrink") {
  auto b = betas({"2", "3"});
  auto p = rates({"exp(-1.2n)", "exp(-n^2)"});
  auto f = df(1.0);
  double prev = INFINITY;
  for (int N : {5, 10, 20, 40, 80, 160}) {
    double sum = 0;
    for (int n = N; n <= 2 * N; ++n) sum += std::exp(min_cover_log_volume(b, p, f, n));
    CHECK(sum < prev);
    prev = sum;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("brute_force_fcover examples") {
  std::vector<std::vector<Interval<Real>>> one{{{Real(0.25), Real(0.375)}}};
  auto r = grid_fcover(one, df(0.5), {0.125}, 10);
  CHECK(r.best_f_volume == doctest::Approx(std::sqrt(0.125)));
  CHECK(r.cover.balls.size() == 1);

  std::vector<std::vector<Interval<Real>>> empty{{}};
  CHECK(grid_fcover(empty, df(0.5), {0.125}).best_f_volume == 0);

  auto reg = build_weighted_region(betas({"2"}), {ApproxFunction::constant(0.25)},
                                   {LipschitzMap::constant(0.5)}, 2);
  auto c = brute_force_fcover(reg, df(1), {0.25, 1.0 / 16}, 100);
  // four hit intervals of length 1/16 centred in each cylinder
  CHECK(c.scales[1].cells == 8);
  CHECK(c.cover.balls.size() == static_cast<std::size_t>(c.cover.ball_count));

  auto rm = build_multiplicative_region(betas({"2"}), ApproxFunction::constant(0.1),
                                        {LipschitzMap::constant(0)}, 2);
  CHECK_THROWS_AS(brute_force_fcover(rm, df(1), {0.1}), UnsupportedError);
}

TEST_CASE("brute force band on the worked d=2 configuration") {
  auto b = betas({"2", "3"});
  auto p = rates({"exp(-1.2n)", "exp(-n^2)"});
  std::vector<LipschitzMap> h{LipschitzMap::constant(0.5), LipschitzMap::constant(0.5)};
  for (int n = 3; n <= 4; ++n) {
    auto reg = build_weighted_region(b, p, h, n);
    auto sn = sn_breakdown(b, p, df(0.9), n);
    std::vector<double> grid;
    for (const auto& c : sn.candidates) grid.push_back(std::exp(c.log_tau));
    auto r = brute_force_fcover(reg, df(0.9), grid);
    const double ratio = r.best_f_volume / sn.term();
    CHECK(ratio >= 1.0 / 32);
    CHECK(ratio <= 32);
  }
}

TEST_CASE("hyperboloid cover") {
  auto one = hyperboloid_cover({0.3, 0.6}, 1.0, 1.5);
  CHECK(one.cover.balls.size() == 1);

  auto hc = hyperboloid_cover({0, 0}, 1e-2, 1.5);
  CHECK(hc.constant <= 64);
  CHECK(hc.min_diameter >= 1e-2);
  auto chk = check_hyperboloid_coverage(hc, 100000, 7);
  CHECK(chk.samples == 100000);
  CHECK(chk.escapes == 0);

  auto hm = hyperboloid_cover({0.5, 0.5}, 1e-3, 1.5);
  CHECK(check_hyperboloid_coverage(hm, 100000, 8).escapes == 0);
  CHECK(hm.constant <= 64);

  std::vector<double> ds, vs;
  for (double d : {1e-1, 1e-2, 1e-3, 1e-4}) {
    ds.push_back(d);
    vs.push_back(hyperboloid_cover({0, 0}, d, 1.5).cover.total_volume);
  }
  auto fit = fit_log_log(ds, vs);
  CHECK(std::abs(fit.slope - 0.5) <= 0.1);

  CHECK_THROWS_AS(hyperboloid_cover({0.5, 0.5, 0.5}, 0.1, 2.5), UnsupportedError);
  CHECK(one.cover.to_csv().rfind("cx,cy,radius\n", 0) == 0);
}
