#pragma once

#include <optional>
#include <string>
#include <utility>

namespace betashrink {

// f(r) = scale · r^s · (−log r)^(−p) on (0, e^-1]
struct DimensionFunction {
  double s = 1;
  double p = 0;
  double scale = 1;

  static DimensionFunction power(double s) { return {s, 0, 1}; }
  // "r^S", "r^S*log^E" with E = -p, optionally prefixed by "C*"
  static DimensionFunction parse(const std::string& text);

  // throws DomainError unless f is nondecreasing with f(0+) = 0
  void validate() const;
  double eval(double r) const;
  // log f at r = exp(log_r), for radii far below double range
  double log_eval(double log_r) const;
  std::string describe() const;
};

inline const double kDomainLogCap = -1.0;  // log of r_max = e^-1

enum class Relation { precsim, strict, equivalent, reverse, reverse_strict, incomparable };

const char* relation_name(Relation r);

struct OrderWitness {
  double x = 0;
  double y = 0;  // x < y with f(y)/g(y) > f(x)/g(x)
};

struct OrderVerdict {
  Relation relation = Relation::equivalent;
  std::optional<OrderWitness> witness;          // violates f ⪯ g
  std::optional<OrderWitness> reverse_witness;  // violates g ⪯ f
};

// f ⪯ g: f/g nonincreasing in r on (0, e^-1]
bool precsim(const DimensionFunction& f, const DimensionFunction& g);
OrderVerdict compare(const DimensionFunction& f, const DimensionFunction& g);
OrderVerdict compare_monomial(const DimensionFunction& f, int k);

// relation says f ⪯ g (strict or not, or equivalent)
bool is_below(Relation r);
// relation says g ⪯ f
bool is_above(Relation r);

}  // namespace betashrink
