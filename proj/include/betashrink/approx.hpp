#pragma once

#include <string>
#include <vector>

namespace betashrink {

// ψ(n) = exp(a0 + a1·n + a2·n²)·n^q
struct ApproxFunction {
  double a0 = 0;
  double a1 = 0;
  double a2 = 0;
  double q = 0;

  double log_value(double n) const;
  double value(double n) const;

  // Parses products such as "exp(-1.2n)", "2^-n", "n^-2", "1/n", "0.5*exp(-n^2)".
  static ApproxFunction parse(const std::string& text);
  static ApproxFunction constant(double c);

  // Checks the shrinking-target constraints and returns the smallest n0
  // with ψ(m) ≤ 1 for every m ≥ n0. Throws DomainError if there is none.
  long long validate() const;

  std::string describe() const;
};

using ApproxTuple = std::vector<ApproxFunction>;

}  // namespace betashrink
