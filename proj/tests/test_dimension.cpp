#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "betashrink/dimension.hpp"
#include "betashrink/errors.hpp"

using namespace betashrink;

namespace {

DimensionFunction df(double s, double p) { return {s, p, 1}; }

double ratio(const DimensionFunction& f, const DimensionFunction& g, double r) {
  return f.eval(r) / g.eval(r);
}

std::vector<double> log_grid() {
  std::vector<double> rs;
  for (int k = 0; k < 1000; ++k) rs.push_back(std::exp(-1.0 - 299.0 * k / 999.0));
  return rs;  // decreasing from e^-1 to e^-300
}

}  // namespace

TEST_CASE("eval examples") {
  CHECK(df(2, 0).eval(0.25) == doctest::Approx(0.0625));
  CHECK(df(1, -1).eval(std::exp(-2.0)) == doctest::Approx(2 * std::exp(-2.0)));
  CHECK(df(1, 0.5).eval(std::exp(-4.0)) == doctest::Approx(0.0091578).epsilon(1e-5));
  CHECK(df(1, 0.5).log_eval(-4.0) == doctest::Approx(std::log(std::exp(-4.0) / 2)));
  CHECK_THROWS_AS(df(1, 0).eval(0.5), DomainError);
  CHECK_THROWS_AS(df(1, 0).eval(0.0), DomainError);
}

TEST_CASE("validation and parsing") {
  CHECK_THROWS_AS(DimensionFunction::parse("r^-1"), DomainError);
  CHECK_NOTHROW(df(0, 0.5).validate());
  CHECK_THROWS_AS(df(0, -1).validate(), DomainError);
  CHECK_THROWS_AS(df(0.2, -0.5).validate(), DomainError);
  CHECK_NOTHROW(df(1, -1).validate());
  auto f = DimensionFunction::parse("r^0.9");
  CHECK(f.s == 0.9);
  CHECK(f.p == 0);
  auto g = DimensionFunction::parse("r^1.5*log^-0.5");
  CHECK(g.s == 1.5);
  CHECK(g.p == 0.5);
  auto h = DimensionFunction::parse("3*r^2*log^(1)");
  CHECK(h.scale == 3);
  CHECK(h.p == -1);
  CHECK_THROWS_AS(DimensionFunction::parse("log^2"), ParseError);
  CHECK_THROWS_AS(DimensionFunction::parse("r^x"), ParseError);
  CHECK(DimensionFunction::parse(g.describe()).p == g.p);
}

TEST_CASE("compare examples") {
  CHECK(compare(df(0.9, 0), df(1, 0)).relation == Relation::strict);
  const double s = 0.665;
  auto v = compare(df(s, 0.5), df(s, 0));
  CHECK(v.relation == Relation::reverse_strict);
  CHECK(compare(df(s, 0), df(s, 0.5)).relation == Relation::strict);
  CHECK(compare(df(1.2, 0.3), df(1.2, 0.3)).relation == Relation::equivalent);
}

TEST_CASE("compare_monomial examples") {
  CHECK(compare_monomial(df(1.5, 0), 1).relation == Relation::reverse_strict);
  CHECK(is_above(compare_monomial(df(1.5, 0), 1).relation));
  CHECK(compare_monomial(df(1, 0), 1).relation == Relation::equivalent);
  CHECK(compare_monomial(df(1, 1), 1).relation == Relation::reverse_strict);
  CHECK(compare_monomial(df(1, -1), 1).relation == Relation::strict);
}

TEST_CASE("incomparable pairs carry witnesses") {
  // r^0.9 (-log r)^(-0.5) against r: ratio rises then falls on L >= 1
  auto f = df(0.9, 0.5);
  auto g = df(1, 0);
  auto v = compare(f, g);
  REQUIRE(v.relation == Relation::incomparable);
  REQUIRE(v.witness);
  REQUIRE(v.reverse_witness);
  CHECK(v.witness->x < v.witness->y);
  CHECK(ratio(f, g, v.witness->y) > ratio(f, g, v.witness->x));
  CHECK(v.reverse_witness->x < v.reverse_witness->y);
  CHECK(ratio(g, f, v.reverse_witness->y) > ratio(g, f, v.reverse_witness->x));
}

TEST_CASE("grid soundness on random pairs") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> us(0.0, 2.0), up(-1.0, 1.0);
  const auto grid = log_grid();
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    DimensionFunction f = df(0.05 + us(rng), up(rng));
    DimensionFunction g = df(0.05 + us(rng), up(rng));
    if (trial % 5 == 0) g.s = f.s;
    const auto v = compare(f, g);
    if (is_below(v.relation)) {
      for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        // grid[k+1] < grid[k]
        const double ly = f.log_eval(std::log(grid[k])) - g.log_eval(std::log(grid[k]));
        const double lx = f.log_eval(std::log(grid[k + 1])) - g.log_eval(std::log(grid[k + 1]));
        CHECK(ly <= lx + std::log1p(1e-12) + 1e-13);
      }
      ++checked;
    }
    if (v.relation == Relation::incomparable) {
      REQUIRE(v.witness);
      const double lx = f.log_eval(std::log(v.witness->x)) - g.log_eval(std::log(v.witness->x));
      const double ly = f.log_eval(std::log(v.witness->y)) - g.log_eval(std::log(v.witness->y));
      CHECK(v.witness->x < v.witness->y);
      CHECK(ly > lx);
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("transitivity on random triples") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> ui(0, 6);
  auto pick = [&] { return df(0.25 * (1 + ui(rng)), 0.5 * (ui(rng) - 3)); };
  int chains = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    auto f = pick(), g = pick(), h = pick();
    if (precsim(f, g) && precsim(g, h)) {
      CHECK(precsim(f, h));
      ++chains;
    }
  }
  CHECK(chains > 100);
}

TEST_CASE("limit consistency in the strict direction") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> us(0.0, 2.0), up(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    auto f = df(0.05 + us(rng), up(rng));
    auto g = df(0.05 + us(rng), up(rng));
    const double far = f.log_eval(-40) - g.log_eval(-40);
    const double near = f.log_eval(-1) - g.log_eval(-1);
    if (far - near > std::log(1e6) && compare(f, g).relation != Relation::incomparable) {
      CHECK(compare(f, g).relation == Relation::strict);
    }
  }
}

TEST_CASE("scale does not change the order") {
  auto f = df(0.9, 0.2);
  auto g = f;
  g.scale = 17;
  CHECK(compare(g, df(1, 0)).relation == compare(f, df(1, 0)).relation);
  CHECK(compare(f, g).relation == Relation::equivalent);
}
