#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "betashrink/real.hpp"

namespace betashrink {

using Word = std::vector<std::uint8_t>;

constexpr std::size_t kEnumerationCap = 50'000'000;

struct Beta {
  Real value;
  bool is_integer = false;
  int precision_bits = kDefaultPrecisionBits;
  std::string label;

  // Accepts integers, decimals, "a/b", "phi", "pi", "e" and "sqrt(k)".
  static Beta parse(const std::string& text, int bits = kDefaultPrecisionBits);
  static Beta from_integer(int k, int bits = kDefaultPrecisionBits);

  double approx() const { return to_double(value); }
  double log() const;
  // digits run over 0..max_digit()
  int max_digit() const;
};

bool same_beta(const Beta& a, const Beta& b);

using BetaVector = std::vector<Beta>;

// throws DomainError unless 1 < β₁ ≤ … ≤ β_d
void validate_betas(const BetaVector& betas);
bool all_integer(const BetaVector& betas);

struct Cylinder {
  Word word;
  Real left;
  Real length;
  Real full_length;  // β^-n
  double length_error = 0;
  bool is_full = false;
  int state = 0;  // index in the orbit table of 1; 0 means T^n maps onto [0,1)
  int precision_bits = kDefaultPrecisionBits;

  std::size_t level() const { return word.size(); }
  double left_d() const { return to_double(left); }
  double length_d() const { return to_double(length); }
  bool contains(const Real& x) const { return x >= left && x < left + length; }
};

// The orbit of 1 under the β-shift, as the automaton of cylinder images.
// State k has image length o_k (o_0 = 1); its children are the digits
// 0..children(k)-1, all landing in state 0 except the top digit, which
// moves to top_next(k).
class BetaShift {
 public:
  explicit BetaShift(Beta beta);

  const Beta& beta() const { return beta_; }
  int children(int state) const;
  int top_next(int state) const;
  // -1 when the digit is not admissible from this state
  int next_state(int state, int digit) const;
  const Real& image(int state) const;
  double image_error(int state) const;
  const Real& inv_power(int n) const;

 private:
  void extend_states(int k) const;
  void extend_powers(int n) const;

  Beta beta_;
  mutable std::vector<Real> image_;
  mutable std::vector<double> error_;
  mutable std::vector<int> children_;
  mutable std::vector<int> top_next_;
  mutable std::vector<Real> inv_pow_;
};

Word beta_digits(const Real& x, const Beta& beta, int n);
Word beta_digits(double x, const Beta& beta, int n);

Word quasi_greedy_one(const Beta& beta, int n);

std::optional<Cylinder> make_cylinder(const BetaShift& shift, const Word& word);

std::vector<Cylinder> enumerate_cylinders(const Beta& beta, int n,
                                          std::size_t cap = kEnumerationCap);

// throws IndeterminateError when length_error cannot separate the cases
bool is_full(const Cylinder& cyl);

struct Window {
  Real lo;
  Real hi;
};

std::vector<Cylinder> enumerate_full(const Beta& beta, int n,
                                     const std::optional<Window>& window = std::nullopt,
                                     std::size_t cap = kEnumerationCap);

struct CylinderCounts {
  int n = 0;
  std::uint64_t total = 0;
  std::uint64_t full = 0;
};

// #Σ_β^k and #Λ_β^k for k = 1..n without materializing cylinders
std::vector<CylinderCounts> count_cylinders(const Beta& beta, int n);

struct CoverageReport {
  int N = 0;
  int depth = 0;
  double covered = 0;
  double uncovered = 0;
  std::vector<double> residual_by_level;  // uncovered after levels N..depth
  double geometric_bound = 0;             // (1 - 1/β)^(depth-N+1)
  bool within_geometric_bound = false;
};

CoverageReport full_cover_check(const Beta& beta, int N, int depth);

struct CountBounds {
  Real renyi_lower;   // β^n
  Real renyi_upper;   // β^(n+1)/(β-1)
  Real li_lower;      // exact count for integer β, strict lower bound otherwise
  bool li_is_exact = false;
};

CountBounds count_bounds(const Beta& beta, int n);

std::string word_string(const Word& w);
std::string cylinders_to_csv(const std::vector<Cylinder>& cyls);
std::string cylinders_to_json(const std::vector<Cylinder>& cyls);

}  // namespace betashrink
