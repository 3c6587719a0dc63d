#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "betashrink/approx.hpp"
#include "betashrink/beta_core.hpp"
#include "betashrink/dimension.hpp"
#include "betashrink/hitset.hpp"

namespace betashrink {

// 0 = k_0 ≤ k_1 < … < k_s = d; block j holds axes k_{j-1}..k_j-1 (0-based)
struct BlockStructure {
  std::vector<int> cuts;
  std::vector<std::string> values;

  std::size_t blocks() const { return cuts.size() - 1; }
  // index j ≥ 1 of the block containing 0-based axis i
  std::size_t block_of(int axis) const;
};

BlockStructure block_structure(const BetaVector& betas);

// within-block order of Ψ making ψ eventually nonincreasing in each block
std::vector<int> eventual_block_order(const BetaVector& betas, const ApproxTuple& psi);
ApproxTuple permute(const ApproxTuple& psi, const std::vector<int>& order);

struct PCheck {
  int n = 0;
  bool in_P = false;
  bool sorted = false;
  bool lower_ok = false;  // s_n ∏β_i^n ≥ n^-2
  bool upper_ok = false;  // s_n ∏β_i^n ≤ 1
  double log_term = 0;
  std::string reason;
};

PCheck in_P(int n, const BetaVector& betas, const ApproxTuple& psi, const DimensionFunction& f);

struct DivergenceFrame {
  int n = 0;
  PCheck p;
  bool found_m = false;
  int m = 0;
  int kj = 0;       // block cut above m
  int kj_prev = 0;  // block cut at or below m
  double log_s = 0;
  double log_omega = 0;
  std::vector<double> log_phi;
  std::vector<double> log_A_prime;
  std::vector<double> chain;  // log of the increase chain for ℓ = m, m-1, …, k_{j-1}
  bool chain_monotone = false;
  bool omega_bound1 = false;
  bool omega_bound2 = false;
  bool omega_bound3 = false;
  double identity_rel_error = 0;
  double phi_rel_error = 0;  // ∏φ_i against 4^-d s_n ∏β_i^n

  double omega() const;
  bool bounds_hold() const { return omega_bound1 && omega_bound2 && omega_bound3 && chain_monotone; }
  double log_tau_min() const;
  double log_tau_max() const;
  std::string to_json() const;
};

// Ψ must already be in the within-block order
DivergenceFrame frame(int n, const BetaVector& betas, const ApproxTuple& psi,
                      const DimensionFunction& f);

struct ThresholdReport {
  std::vector<int> P;
  std::vector<int> failures;  // n ∈ P where an omega bound or the chain fails
  int threshold = 0;          // smallest n past which no failure occurs in range
  int n_max = 0;
  double max_identity_error = 0;
  double max_phi_error = 0;
  std::size_t checked = 0;    // frames in P ∩ [threshold, n_max]
};

ThresholdReport measure_threshold(const BetaVector& betas, const ApproxTuple& psi,
                                  const DimensionFunction& f, int n_max = 200);

struct PermutationReport {
  std::vector<int> order;
  std::size_t p_count = 0;
  double partial_sum = 0;  // Σ_{n∈P, n≤N} s_n ∏β_i^n
  bool eventually_sorted = false;
};

std::vector<PermutationReport> permutation_report(const BetaVector& betas, const ApproxTuple& psi,
                                                  const DimensionFunction& f, int n_max);

// per-axis y grid of spacing 2ω_n inside B(z_i, β_i^-n ψ_i(n)/2) for i < m, as offsets from z_i
std::vector<std::vector<double>> y_cloud_offsets(const DivergenceFrame& fr, const BetaVector& betas,
                                                 const ApproxTuple& psi, std::size_t cap = 1000000);

struct AxisFamily {
  double width = 0;
  std::vector<double> offsets;  // interval centers relative to y_i, increasing
  double separation = 0;        // minimal gap between consecutive centers
  std::string role;             // "omega", "thin", "many"
};

struct RectFamily {
  int n = 0;
  double omega = 0;
  std::vector<Real> y;
  std::vector<AxisFamily> axes;

  double count() const;
};

// z is the hit anchor of the integer cylinders with indices `cells`; y = z + y_offset
RectFamily build_rect_family(const DivergenceFrame& fr, const BetaVector& betas,
                             const ApproxTuple& psi, const std::vector<LipschitzMap>& maps,
                             const std::vector<std::uint64_t>& cells,
                             const std::vector<double>& y_offset = {},
                             std::size_t cap = 1000000);

// μ(B(x, r)) for the sup-norm ball, x given as offsets from y
double mu_ball(const RectFamily& fam, const std::vector<double>& center, double r);
// x inside rectangle idx at relative positions u ∈ [0,1] of each side
double mu_ball_local(const RectFamily& fam, const std::vector<std::size_t>& idx,
                     const std::vector<double>& u, double r);

struct BallBoundReport {
  int n = 0;
  std::size_t samples = 0;
  std::size_t per_case[3] = {0, 0, 0};
  double sup_ratio = 0;
  double sup_by_case[3] = {0, 0, 0};
  double tau_min = 0;
  double tau_max = 0;
  double omega = 0;
};

// sup of μ(B)·ω_n^d / f(r) over sampled balls centred in Δ, cycling through Cases 1–3
BallBoundReport sample_ball_bound(const RectFamily& fam, const DivergenceFrame& fr,
                                  const DimensionFunction& f, std::size_t samples,
                                  std::uint64_t seed);

}  // namespace betashrink
