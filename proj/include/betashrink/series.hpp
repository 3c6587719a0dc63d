#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "betashrink/approx.hpp"
#include "betashrink/beta_core.hpp"
#include "betashrink/dimension.hpp"

namespace betashrink {

// log a_n = γn² + λn + q·log n + u·log log n + c + o(1)
struct AsymptoticForm {
  double gamma = 0;
  double lambda = 0;
  double q = 0;
  double u = 0;
  double c = 0;
  bool bounded_remainder = true;

  double log_value(double n) const;
  AsymptoticForm operator+(const AsymptoticForm& o) const;
  AsymptoticForm operator-(const AsymptoticForm& o) const;
  AsymptoticForm scaled(double k) const;
};

// coefficients closer than this (relative to their size) count as equal
inline constexpr double kCoefficientTolerance = 1e-12;

// eventual order: negative if a_n/b_n → 0 or stays bounded with a smaller constant
int eventual_compare(const AsymptoticForm& a, const AsymptoticForm& b);

struct SnCandidate {
  double log_tau = 0;
  int axis = 0;           // 0-based
  bool psi_scale = false;  // β_i^-n ψ_i(n) rather than β_i^-n
  std::vector<int> K1;
  std::vector<int> K2;
  double log_value = 0;
};

struct SnBreakdown {
  int n = 0;
  std::vector<SnCandidate> candidates;
  std::size_t argmin = 0;
  double log_s = 0;
  double log_term = 0;  // log(s_n ∏β_i^n)

  double tau_star() const;
  double s_n() const;
  double term() const;
};

// smallest n at which every scale of A_n lies in (0, e^-1] and every ψ_i ≤ 1 from there on
int sn_min_index(const BetaVector& betas, const ApproxTuple& psi);

SnBreakdown sn_breakdown(const BetaVector& betas, const ApproxTuple& psi,
                         const DimensionFunction& f, int n);

enum class SeriesTarget { rectangle, multiplicative_d1, multiplicative, w2star_first, w2star_second };

struct SeriesSpec {
  SeriesTarget target = SeriesTarget::rectangle;
  BetaVector betas;
  ApproxTuple psi;           // one entry for the multiplicative kinds
  DimensionFunction f;
  int d = 1;                 // multiplicative dimension
  double t = 0;              // w2star parameter
};

AsymptoticForm series_asymptotics(const SeriesSpec& spec);

// log of the n-th series term computed directly
double series_log_term(const SeriesSpec& spec, int n);

enum class SeriesVerdict { converges, diverges, undetermined };
const char* series_verdict_name(SeriesVerdict v);

struct SeriesDecision {
  SeriesVerdict verdict = SeriesVerdict::undetermined;
  bool boundary = false;  // decided below the leading exponential order
  std::string detail;
};

SeriesDecision decide_series(const AsymptoticForm& form);

enum class TheoremTag { rectangle, multiplicative_d1, multiplicative, w2star };
const char* theorem_tag_name(TheoremTag t);

enum class Conclusion { measure_zero, full_measure, hypothesis_failed };
const char* conclusion_name(Conclusion c);

struct HypothesisCheck {
  std::string name;
  bool pass = false;
  std::string note;
};

struct DichotomyVerdict {
  TheoremTag tag = TheoremTag::rectangle;
  std::vector<HypothesisCheck> hypothesis_checks;
  std::optional<AsymptoticForm> series_form;
  SeriesDecision series;
  Conclusion conclusion = Conclusion::hypothesis_failed;
  std::string reason;
  bool infinite = false;  // full measure of an infinite-measure space
  long long n0 = 1;
  std::vector<std::string> metadata;

  bool hypotheses_hold() const;
  std::string to_json() const;
};

DichotomyVerdict rectangle_verdict(const BetaVector& betas, const ApproxTuple& psi,
                                   const DimensionFunction& f);
DichotomyVerdict multiplicative_verdict(const BetaVector& betas, const ApproxFunction& psi,
                                        const DimensionFunction& f, int d);
DichotomyVerdict w2star_verdict(double t, const DimensionFunction& f);

// partial sums of an arbitrary term sequence; never claims a verdict
struct NumericSeriesReport {
  long long n_from = 1;
  long long n_to = 1;
  std::vector<std::pair<long long, double>> partial_sums;  // at doubling checkpoints
  double last_term = 0;
  double tail_ratio = 0;       // a_N / a_{N/2}
  double log_slope = 0;        // d log a_n / d log n over the last half
  SeriesVerdict verdict = SeriesVerdict::undetermined;
};

NumericSeriesReport numeric_series(const std::function<double(long long)>& term,
                                   long long n_from, long long n_to);

std::string verdicts_to_csv(const std::vector<std::pair<std::string, DichotomyVerdict>>& rows);

}  // namespace betashrink
