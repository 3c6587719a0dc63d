#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "betashrink/approx.hpp"
#include "betashrink/beta_core.hpp"
#include "betashrink/dimension.hpp"
#include "betashrink/hitset.hpp"

namespace betashrink {

enum class AxisClass { k1, k2, neither };
const char* axis_class_name(AxisClass c);

struct CoverEstimate {
  int n = 0;
  double log_tau = 0;
  double log_count = 0;
  double log_f_volume = 0;
  std::vector<AxisClass> breakdown;

  double tau() const;
  double count() const;
  double f_volume() const;
};

// count = ∏β_i^n ∏_{K1} β_i^-n/τ ∏_{K2} β_i^-n ψ_i(n)/τ, evaluated axis by axis
CoverEstimate cover_count(const BetaVector& betas, const ApproxTuple& psi,
                          const DimensionFunction& f, int n, double log_tau);

// min over τ ∈ A_n of cover_count(...).f_volume, in logs
double min_cover_log_volume(const BetaVector& betas, const ApproxTuple& psi,
                            const DimensionFunction& f, int n);

struct Ball {
  std::vector<double> center;
  double radius = 0;
  double diameter() const { return 2 * radius; }
};

struct BallCover {
  std::vector<Ball> balls;
  double ball_count = 0;  // may exceed balls.size() when not materialized
  double total_volume = 0;

  std::string to_csv() const;
};

constexpr double kCellCap = 1e7;

struct ScaleCover {
  double tau = 0;
  double cells = 0;  // τ-cells meeting the region
  double f_volume = 0;
  bool skipped = false;
};

struct FCoverResult {
  std::vector<ScaleCover> scales;
  double best_tau = 0;
  double best_f_volume = 0;
  BallCover cover;  // balls for the best scale when it has at most `materialize_limit` cells
};

// Grid covers by half-open τ-cells of a weighted hit region. Cell diameter τ√d is fed to f.
// Scales with more than kCellCap kept cells are skipped; ResourceError if all are.
FCoverResult brute_force_fcover(const HitRegion& region, const DimensionFunction& f,
                                const std::vector<double>& tau_grid,
                                std::size_t materialize_limit = 0);

// same over explicit axis interval lists
FCoverResult grid_fcover(const std::vector<std::vector<Interval<Real>>>& axes,
                         const DimensionFunction& f, const std::vector<double>& tau_grid,
                         std::size_t materialize_limit = 0);

struct HyperboloidCover {
  std::array<double, 2> a{};
  double delta = 0;
  double s = 0;
  BallCover cover;
  double constant = 0;  // Σ|B|^s / δ^(s-1)
  double min_diameter = 0;
};

HyperboloidCover hyperboloid_cover(const std::vector<double>& a, double delta, double s);

bool in_hyperboloid(const std::array<double, 2>& a, double delta, double x, double y);

struct CoverageCheck {
  std::size_t samples = 0;
  std::size_t escapes = 0;
};

// samples points of H(a,δ) ∩ [0,1]² and counts those outside every ball
CoverageCheck check_hyperboloid_coverage(const HyperboloidCover& hc, std::size_t samples,
                                         unsigned long long seed);

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
};

SlopeFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace betashrink
