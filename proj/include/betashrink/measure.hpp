#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "betashrink/approx.hpp"
#include "betashrink/beta_core.hpp"
#include "betashrink/dimension.hpp"
#include "betashrink/divergence.hpp"
#include "betashrink/hitset.hpp"
#include "betashrink/intervals.hpp"

namespace betashrink {

// regions E_n (or Ẽ_n under CylinderSelection::full) for N ≤ n ≤ M
struct TailSpec {
  int N = 1;
  int M = 1;
  RegionMode mode = RegionMode::weighted;
  CylinderSelection selection = CylinderSelection::all;
  BetaVector betas;
  ApproxTuple psi;  // one per axis (weighted) or a single function (multiplicative)
  std::vector<LipschitzMap> maps;

  void validate() const;
  std::size_t dimension() const { return betas.size(); }
  double rate(std::size_t axis, int n) const;
  HitRegion region(int n) const;
  std::string describe() const;
  std::uint64_t hash() const;
};

TailSpec weighted_tail(BetaVector betas, ApproxTuple psi, std::vector<LipschitzMap> maps, int N,
                       int M, CylinderSelection selection = CylinderSelection::all);

// 99% two-sided Hoeffding radius
double hoeffding_radius(std::size_t samples);

struct MeasureEstimate {
  double estimate = 0;
  double radius = 0;
  std::size_t samples = 0;
  std::size_t hits = 0;
  std::size_t ambiguous = 0;  // membership undecided after refinement, counted as misses
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;

  std::string to_json() const;
};

MeasureEstimate mc_lebesgue(const TailSpec& tail, std::size_t samples, std::uint64_t seed);

// λ(⋃_{n=N}^M E_n ∩ window) by exact merge of the hit intervals (d = 1, weighted)
Real exact_union_measure(const TailSpec& tail, const std::optional<Interval<Real>>& window = std::nullopt);

// per-n hit intervals of a d = 1 weighted tail, merged
std::vector<std::vector<Interval<Real>>> tail_intervals(const TailSpec& tail);

struct UnionBounds {
  double lower = 0;
  double upper = 0;
  int window_digits = 0;  // K in the digit-window discretisation
};

// λ(⋃_{n=N}^M E_n ∩ I(prefix)) for integer β and constant h, bracketed by a digit-window DP
UnionBounds shift_union_bounds(const TailSpec& tail, const Word& prefix = {},
                               std::size_t max_states = std::size_t(1) << 20);

struct ChungErdosReport {
  double window = 0;     // |I|
  double first = 0;      // Σ λ(A_n ∩ I)
  double second = 0;     // Σ_{n,m} λ(A_n ∩ A_m ∩ I)
  double bound = 0;      // first² / second
  double psi_sum = 0;    // Σ ψ(n)
  double correlation_constant = 0;  // second / (|I|((Σψ)² + Σψ))
};

ChungErdosReport chung_erdos_lower(const std::vector<std::vector<Interval<Real>>>& unions,
                                   const Interval<Real>& window);

// integer β, constant h, window a full cylinder of level ≤ N; pair measures in closed form
ChungErdosReport chung_erdos_shift(const TailSpec& tail, const Word& prefix);

struct TildeBand {
  std::vector<int> n;
  std::vector<double> ratio;  // λ(I_k ∩ Ẽ_n) / (|I_k| ψ(n))
  double lo = 0;
  double hi = 0;
};

TildeBand tilde_band(const Beta& beta, const ApproxFunction& psi, const LipschitzMap& h,
                     const Word& prefix, int n_lo, int n_hi);

struct FContentBound {
  double value = 0;
  double best_tau = 0;
  double single_ball = 0;  // f(diameter of the bounding box), 0 when outside f's domain
  bool single_ball_best = false;
};

FContentBound fcontent_upper(const std::vector<std::vector<Interval<Real>>>& axes,
                             const DimensionFunction& f, int scales = 48);
FContentBound fcontent_upper(const HitRegion& region, const DimensionFunction& f, int scales = 48);
FContentBound fcontent_upper(const RectFamily& fam, const DimensionFunction& f, int scales = 48);

struct MdpBound {
  double c = 0;      // sampled sup of μ(B(x,r)) / f(2r)
  double bound = 0;  // 1/c
  double r_at_sup = 0;
  std::size_t samples = 0;
};

// μ uniform on the family; sup-norm balls centred in the support, r log-uniform down to 10^-3 of the thinnest side
MdpBound mdp_lower(const RectFamily& fam, const DimensionFunction& f, std::size_t samples,
                   std::uint64_t seed);

// one axis, one interval of length ell centred at c
RectFamily interval_family(double c, double ell);

}  // namespace betashrink
