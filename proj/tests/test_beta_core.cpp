#include "doctest.h"

#include <random>
#include <set>

#include "betashrink/beta_core.hpp"
#include "betashrink/errors.hpp"

using namespace betashrink;

namespace {

std::set<std::string> words_of(const std::vector<Cylinder>& cs) {
  std::set<std::string> out;
  for (const auto& c : cs) out.insert(word_string(c.word));
  return out;
}

}  // namespace

TEST_CASE("beta parsing") {
  CHECK(Beta::parse("2").is_integer);
  CHECK_FALSE(Beta::parse("2.5").is_integer);
  CHECK(Beta::parse("phi").approx() == doctest::Approx(1.6180339887));
  CHECK(Beta::parse("pi").approx() == doctest::Approx(3.14159265358979));
  CHECK(Beta::parse("5/2").approx() == doctest::Approx(2.5));
  CHECK(Beta::parse("phi").max_digit() == 1);
  CHECK(Beta::parse("2.5").max_digit() == 2);
  CHECK(Beta::parse("3").max_digit() == 2);
  CHECK_THROWS_AS(Beta::parse("1"), DomainError);
  CHECK_THROWS_AS(Beta::parse("abc"), ParseError);
}

TEST_CASE("beta_digits examples") {
  CHECK(beta_digits(0.5, Beta::parse("2"), 4) == Word{1, 0, 0, 0});
  CHECK(beta_digits(0.5, Beta::parse("3"), 3) == Word{1, 1, 1});
  Beta phi = Beta::parse("phi");
  PrecisionScope scope(phi.precision_bits);
  Real x = phi.value - 1;
  CHECK(beta_digits(x, phi, 3) == Word{1, 0, 0});
  CHECK_THROWS_AS(beta_digits(1.0, phi, 3), DomainError);
  CHECK_THROWS_AS(beta_digits(-0.1, phi, 3), DomainError);
}

TEST_CASE("quasi-greedy expansion of one") {
  CHECK(quasi_greedy_one(Beta::parse("2"), 5) == Word{1, 1, 1, 1, 1});
  CHECK(quasi_greedy_one(Beta::parse("3"), 3) == Word{2, 2, 2});
  CHECK(quasi_greedy_one(Beta::parse("phi"), 6) == Word{1, 0, 1, 0, 1, 0});
}

TEST_CASE("quasi-greedy word dominates every admissible word under shifts") {
  for (const char* b : {"phi", "1.5", "2.5", "pi"}) {
    Beta beta = Beta::parse(b);
    const int n = 7;
    Word q = quasi_greedy_one(beta, n);
    for (const auto& c : enumerate_cylinders(beta, n)) {
      for (int s = 0; s < n; ++s) {
        Word tail(c.word.begin() + s, c.word.end());
        Word pref(q.begin(), q.begin() + tail.size());
        CHECK(tail <= pref);
      }
    }
  }
}

TEST_CASE("enumerate_cylinders examples") {
  auto c2 = enumerate_cylinders(Beta::parse("2"), 3);
  REQUIRE(c2.size() == 8);
  for (const auto& c : c2) CHECK(c.length_d() == doctest::Approx(0.125));

  auto c25 = enumerate_cylinders(Beta::parse("2.5"), 1);
  REQUIRE(c25.size() == 3);
  CHECK(c25[0].length_d() == doctest::Approx(0.4));
  CHECK(c25[1].length_d() == doctest::Approx(0.4));
  CHECK(c25[2].length_d() == doctest::Approx(0.2));

  auto cphi = enumerate_cylinders(Beta::parse("phi"), 2);
  CHECK(words_of(cphi) == std::set<std::string>{"00", "01", "10"});
}

TEST_CASE("is_full examples") {
  for (const auto& c : enumerate_cylinders(Beta::parse("2"), 4)) CHECK(is_full(c));
  BetaShift phi(Beta::parse("phi"));
  auto c01 = make_cylinder(phi, Word{0, 1});
  REQUIRE(c01);
  CHECK_FALSE(is_full(*c01));
  CHECK_FALSE(make_cylinder(phi, Word{1, 1}).has_value());
  BetaShift b25(Beta::parse("2.5"));
  auto c2 = make_cylinder(b25, Word{2});
  REQUIRE(c2);
  CHECK_FALSE(is_full(*c2));
}

TEST_CASE("enumerate_full examples") {
  CHECK(enumerate_full(Beta::parse("3"), 4).size() == 81);
  auto fphi = enumerate_full(Beta::parse("phi"), 3);
  CHECK(words_of(fphi) == std::set<std::string>{"000", "010", "100"});
  Window w{Real(0), Real(0.5)};
  auto f2 = enumerate_full(Beta::parse("2"), 2, w);
  CHECK(words_of(f2) == std::set<std::string>{"00", "01"});
}

TEST_CASE("counts agree with enumeration") {
  for (const char* b : {"1.5", "phi", "2.5", "pi", "3"}) {
    Beta beta = Beta::parse(b);
    auto counts = count_cylinders(beta, 8);
    for (int n = 1; n <= 8; ++n) {
      auto all = enumerate_cylinders(beta, n);
      std::uint64_t full = 0;
      for (const auto& c : all) full += c.is_full ? 1 : 0;
      CHECK(all.size() == counts[n - 1].total);
      CHECK(full == counts[n - 1].full);
      CHECK(enumerate_full(beta, n).size() == full);
    }
  }
}

TEST_CASE("Renyi and Li bounds at small levels") {
  for (const char* b : {"1.5", "phi", "2.5", "pi", "2", "3"}) {
    Beta beta = Beta::parse(b);
    auto counts = count_cylinders(beta, 12);
    for (const auto& cc : counts) {
      CountBounds cb = count_bounds(beta, cc.n);
      PrecisionScope scope(beta.precision_bits);
      CHECK(cb.renyi_lower <= Real(cc.total));
      CHECK(Real(cc.total) <= cb.renyi_upper);
      if (cb.li_is_exact) {
        CHECK(Real(cc.full) == cb.li_lower);
      } else {
        CHECK(Real(cc.full) > cb.li_lower);
      }
    }
  }
}

TEST_CASE("partition of [0,1)") {
  for (const char* b : {"phi", "2.5", "pi", "1.5"}) {
    Beta beta = Beta::parse(b);
    const int n = 9;
    auto cyls = enumerate_cylinders(beta, n);
    PrecisionScope scope(beta.precision_bits + 64);
    Real total = 0;
    for (std::size_t i = 0; i < cyls.size(); ++i) {
      total += cyls[i].length;
      if (i + 1 < cyls.size()) {
        CHECK(cyls[i + 1].left >= cyls[i].left + cyls[i].length - Real(1e-30));
      }
    }
    CHECK(to_double(abs(total - 1)) <= n * std::ldexp(1.0, -beta.precision_bits + 4));
  }
}

TEST_CASE("concatenation of full words") {
  for (const char* b : {"phi", "2.5", "1.5"}) {
    Beta beta = Beta::parse(b);
    BetaShift shift(beta);
    auto u_list = enumerate_full(beta, 3);
    auto v_list = enumerate_full(beta, 4);
    for (const auto& u : u_list) {
      for (const auto& v : v_list) {
        Word uv = u.word;
        uv.insert(uv.end(), v.word.begin(), v.word.end());
        auto c = make_cylinder(shift, uv);
        REQUIRE(c);
        CHECK(c->is_full);
        PrecisionScope scope(beta.precision_bits);
        double err = to_double(abs(c->length - u.length * v.length));
        CHECK(err <= c->length_error + u.length_error + v.length_error);
      }
    }
  }
}

TEST_CASE("digits agree with the containing cylinder") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const char* b : {"phi", "2.5", "pi", "2"}) {
    Beta beta = Beta::parse(b);
    BetaShift shift(beta);
    for (int trial = 0; trial < 2500; ++trial) {
      const double x = unif(rng);
      const int n = 1 + static_cast<int>(rng() % 12);
      Word w = beta_digits(x, beta, n);
      auto c = make_cylinder(shift, w);
      REQUIRE(c);
      PrecisionScope scope(beta.precision_bits);
      CHECK(c->contains(Real(x)));
    }
  }
}

TEST_CASE("full cylinders inside a full cylinder") {
  Beta beta = Beta::parse("phi");
  auto counts = count_cylinders(beta, 10);
  for (const auto& host : enumerate_full(beta, 3)) {
    PrecisionScope scope(beta.precision_bits);
    Window w{host.left, Real(host.left + host.length)};
    for (int n = 4; n <= 10; ++n) {
      CHECK(enumerate_full(beta, n, w).size() == counts[n - 3 - 1].full);
    }
  }
}

TEST_CASE("full_cover_check") {
  CHECK(full_cover_check(Beta::parse("2"), 1, 1).uncovered == 0.0);
  auto rphi = full_cover_check(Beta::parse("phi"), 2, 8);
  CHECK(rphi.uncovered <= rphi.geometric_bound);
  auto r25 = full_cover_check(Beta::parse("2.5"), 1, 6);
  CHECK(r25.geometric_bound == doctest::Approx(0.046656));
  CHECK(r25.uncovered == doctest::Approx(6.4e-05).epsilon(1e-9));
  CHECK(r25.within_geometric_bound);
  // the residual is nonincreasing in the depth
  auto r15 = full_cover_check(Beta::parse("1.5"), 1, 11);
  for (std::size_t i = 1; i < r15.residual_by_level.size(); ++i) {
    CHECK(r15.residual_by_level[i] <= r15.residual_by_level[i - 1] + 1e-15);
  }
  CHECK_THROWS_AS(full_cover_check(Beta::parse("2"), 3, 2), DomainError);
}

TEST_CASE("enumeration cap") {
  CHECK_THROWS_AS(enumerate_cylinders(Beta::parse("3"), 10, 1000), ResourceError);
}

TEST_CASE("serialization") {
  auto cyls = enumerate_cylinders(Beta::parse("2"), 1);
  auto csv = cylinders_to_csv(cyls);
  CHECK(csv.find("word;left;length;is_full") == 0);
  CHECK(csv.find("\n1;0.5;0.5;1") != std::string::npos);
  CHECK(cylinders_to_json(cyls).find("\"is_full\": true") != std::string::npos);
}
