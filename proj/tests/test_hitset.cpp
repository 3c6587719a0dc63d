#include "doctest.h"

#include <cmath>
#include <random>

#include "betashrink/errors.hpp"
#include "betashrink/hitset.hpp"

using namespace betashrink;

namespace {

Cylinder cyl_of(const char* beta, Word w) {
  BetaShift s(Beta::parse(beta));
  auto c = make_cylinder(s, w);
  REQUIRE(c);
  return *c;
}

}  // namespace

TEST_CASE("rate function parsing") {
  auto f = ApproxFunction::parse("exp(-1.2n)");
  CHECK(f.a1 == doctest::Approx(-1.2));
  auto g = ApproxFunction::parse("2^-n");
  CHECK(g.value(3) == doctest::Approx(0.125));
  CHECK(ApproxFunction::parse("n^-2").value(4) == doctest::Approx(1.0 / 16));
  CHECK(ApproxFunction::parse("1/n").value(5) == doctest::Approx(0.2));
  CHECK(ApproxFunction::parse("exp(-n^2)").value(2) == doctest::Approx(std::exp(-4.0)));
  CHECK(ApproxFunction::parse("0.5*exp(-2*n)").value(1) == doctest::Approx(0.5 * std::exp(-2.0)));
  CHECK(ApproxFunction::parse("e^(-n)").value(2) == doctest::Approx(std::exp(-2.0)));
  CHECK_THROWS_AS(ApproxFunction::parse("exp(n^3)"), ParseError);
  CHECK_THROWS_AS(ApproxFunction::parse("foo"), ParseError);
}

TEST_CASE("rate function validation") {
  CHECK(ApproxFunction::parse("1/n").validate() == 1);
  CHECK(ApproxFunction::constant(1.0).validate() == 1);
  CHECK(ApproxFunction::parse("10*exp(-n)").validate() == 3);
  CHECK(ApproxFunction::parse("100*n^-2").validate() == 10);
  CHECK(ApproxFunction::parse("n^3*exp(-n)").validate() >= 1);
  auto f = ApproxFunction::parse("n^3*exp(-n)");
  const long long n0 = f.validate();
  for (long long m = n0; m < n0 + 200; ++m) CHECK(f.value(static_cast<double>(m)) <= 1 + 1e-12);
  if (n0 > 1) CHECK(f.value(static_cast<double>(n0 - 1)) > 1);
  CHECK_THROWS_AS(ApproxFunction::parse("exp(n)").validate(), DomainError);
  CHECK_THROWS_AS(ApproxFunction::parse("2").validate(), DomainError);
  CHECK_THROWS_AS(ApproxFunction::parse("n").validate(), DomainError);
}

TEST_CASE("solve_anchor examples") {
  auto c = cyl_of("2", {0, 0, 0});
  CHECK(to_double(solve_anchor(c, LipschitzMap::constant(0.5))) == doctest::Approx(1.0 / 16));
  auto c0 = cyl_of("2", {0});
  CHECK(to_double(solve_anchor(c0, LipschitzMap::identity())) == doctest::Approx(0.0));
  auto cphi = cyl_of("phi", {1, 0});
  REQUIRE(cphi.is_full);
  const double phi = (1 + std::sqrt(5.0)) / 2;
  CHECK(to_double(solve_anchor(cphi, LipschitzMap::constant(0.3))) ==
        doctest::Approx(1 / phi + 0.3 / (phi * phi)).epsilon(1e-12));
}

TEST_CASE("tabulated anchor agrees with the closed form") {
  auto c = cyl_of("2.5", {1, 0, 2});
  auto tab = LipschitzMap::tabulated({0, 0.5, 1}, {0.2, 0.45, 0.7}, 0.5);
  auto aff = LipschitzMap::affine(0.5, 0.2);
  CHECK(to_double(abs(solve_anchor(c, tab) - solve_anchor(c, aff))) < 1e-15);
  CHECK_THROWS_AS(LipschitzMap::tabulated({0, 1}, {0, 0.9}, 0.5), DomainError);
}

TEST_CASE("hit_enclosures examples") {
  auto c = cyl_of("2", {0, 0, 0});
  auto e = hit_enclosures(c, LipschitzMap::constant(0.5), 0.1);
  CHECK(to_double(e.center) == doctest::Approx(1.0 / 16));
  CHECK(to_double(e.outer_radius) == doctest::Approx(0.025));
  REQUIRE(e.inner_radius);
  CHECK(to_double(*e.inner_radius) == doctest::Approx(0.00625));

  auto c0 = cyl_of("2", {0});
  auto e0 = hit_enclosures(c0, LipschitzMap::constant(0.0), 1.0);
  CHECK(to_double(e0.center) == 0.0);
  CHECK(to_double(e0.outer_radius) >= 0.5);

  CHECK_THROWS_AS(hit_enclosures(c0, LipschitzMap::affine(3, 0), 0.5), PreconditionError);
}

TEST_CASE("boundary anchor is flagged and the inner ball is clipped") {
  auto c = cyl_of("2", {1, 1, 1});
  auto e = hit_enclosures(c, LipschitzMap::identity(), 0.2);
  CHECK(e.boundary_anchor);
  CHECK(to_double(e.center) == doctest::Approx(1.0));
  CHECK(to_double(e.inner_clipped.hi) <= 1.0);
}

TEST_CASE("sandwich and monotonicity on random trials") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const char* betas[] = {"2", "3", "2.5", "phi"};
  int trials = 0;
  while (trials < 400) {
    Beta beta = Beta::parse(betas[rng() % 4]);
    const int n = 1 + static_cast<int>(rng() % 8);
    BetaShift shift(beta);
    auto c = make_cylinder(shift, beta_digits(u(rng), beta, n));
    if (!c || !c->is_full) continue;
    LipschitzMap h = LipschitzMap::constant(0.3);
    switch (rng() % 4) {
      case 0: h = LipschitzMap::constant(u(rng) * 0.999); break;
      case 1: h = LipschitzMap::identity(); break;
      case 2: h = LipschitzMap::affine(0.4, 0.1 + 0.4 * u(rng)); break;
      default: h = LipschitzMap::tabulated({0, 0.3, 0.7, 1}, {0.1, 0.6, 0.2, 0.5}, 1.7);
    }
    if (h.lipschitz() >= std::pow(beta.approx(), n)) continue;
    ++trials;
    const double r = 0.01 + 0.98 * u(rng);
    auto e = hit_enclosures(*c, h, r);
    auto e_small = hit_enclosures(*c, h, r / 2);
    CHECK(e_small.outer_radius <= e.outer_radius);
    CHECK(e_small.center == e.center);
    const double lo = to_double(e.inner_clipped.lo), hi = to_double(e.inner_clipped.hi);
    for (int k = 0; k < 20; ++k) {
      const double x = lo + (hi - lo) * u(rng);
      if (x >= hi) continue;
      CHECK(hit_residual(*c, h, x) < r);
    }
    const double z = to_double(e.center), R = to_double(e.outer_radius);
    for (int k = 0; k < 20; ++k) {
      const double x = c->left_d() + c->length_d() * u(rng);
      if (std::abs(x - z) < R) continue;
      CHECK(hit_residual(*c, h, x) >= r);
    }
  }
}

TEST_CASE("build_hit_region examples") {
  auto r1 = build_weighted_region({Beta::parse("2")}, {ApproxFunction::parse("2^-n")},
                                  {LipschitzMap::constant(0)}, 2);
  CHECK(r1.axes[0].entries.size() == 4);
  CHECK(to_double(r1.axes[0].inner_radius) == doctest::Approx(0.03125));

  BetaVector b23{Beta::parse("2"), Beta::parse("3")};
  auto r2 = build_weighted_region(b23, {ApproxFunction::parse("exp(-1.2n)"),
                                        ApproxFunction::parse("exp(-n^2)")},
                                  {LipschitzMap::constant(0), LipschitzMap::constant(0)}, 2);
  CHECK(r2.axes[0].entries.size() == 4);
  CHECK(r2.axes[1].entries.size() == 9);

  auto rm = build_multiplicative_region(b23, ApproxFunction::constant(0.01),
                                        {LipschitzMap::constant(0), LipschitzMap::constant(0)}, 3);
  CHECK(rm.delta == doctest::Approx(0.04));
  for (std::size_t k = 0; k < 5; ++k) {
    std::vector<double> x{to_double(rm.axes[0].entries[k].z), to_double(rm.axes[1].entries[k * 3].z)};
    CHECK(rm.membership(x));
  }
}

TEST_CASE("pullback soundness") {
  BetaVector b{Beta::parse("2"), Beta::parse("3")};
  std::vector<LipschitzMap> maps{LipschitzMap::affine(0.5, 0.2), LipschitzMap::constant(0.4)};
  auto region = build_multiplicative_region(b, ApproxFunction::constant(0.02), maps, 4);
  REQUIRE(region.pullback_valid);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int hits = 0;
  for (int k = 0; k < 20000; ++k) {
    std::vector<double> x{u(rng), u(rng)};
    if (region.membership(x)) {
      ++hits;
      CHECK(region.pullback_membership(x));
    }
  }
  CHECK(hits > 100);
}

TEST_CASE("region_measure_1d") {
  auto reg = build_weighted_region({Beta::parse("2")}, {ApproxFunction::constant(0.25)},
                                   {LipschitzMap::constant(0)}, 2, CylinderSelection::full);
  CHECK(to_double(region_measure_1d(reg, 0, AxisSet::inner)) == doctest::Approx(0.125));
  CHECK(to_double(region_measure_1d(reg, 0, AxisSet::hit)) == doctest::Approx(0.25));

  std::vector<Interval<double>> four{{0, 1.0 / 16}, {0.25, 0.25 + 1.0 / 16},
                                     {0.5, 0.5 + 1.0 / 16}, {0.75, 0.75 + 1.0 / 16}};
  CHECK(union_measure(four) == doctest::Approx(0.25));
  std::vector<Interval<double>> twin{{0.1, 0.3}, {0.1, 0.3}};
  CHECK(union_measure(twin) == doctest::Approx(0.2));

  auto rm = build_multiplicative_region({Beta::parse("2")}, ApproxFunction::constant(0.1),
                                        {LipschitzMap::constant(0)}, 2);
  CHECK_THROWS_AS(region_measure_1d(rm, 0), UnsupportedError);
  CHECK(region_to_json(reg).find("\"inner_radius\"") != std::string::npos);
}
