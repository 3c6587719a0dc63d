#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "betashrink/approx.hpp"
#include "betashrink/beta_core.hpp"
#include "betashrink/dimension.hpp"
#include "json.hpp"

namespace betashrink {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  std::vector<std::pair<std::string, double>> measured;

  nlohmann::ordered_json to_json() const;
};

struct DivergenceConfig {
  std::string name;
  BetaVector betas;
  ApproxTuple psi;
  DimensionFunction f;
};

// the d = 1, d = 2 (distinct β) and d = 3 (tied block) configurations
std::vector<DivergenceConfig> divergence_configs();

CheckResult check_full_exactness();
CheckResult check_renyi_sandwich(const std::vector<std::string>& betas, int n_max);
CheckResult check_li_bounds(const std::vector<std::string>& betas, int n_max);
CheckResult check_hit_sandwich(std::size_t trials, std::uint64_t seed);
CheckResult check_sn_consistency(std::size_t configs, std::uint64_t seed);
CheckResult check_cover_band(int n_lo, int n_hi);
CheckResult check_verdict_agreement();
CheckResult check_divergence_frames(const std::vector<DivergenceConfig>& configs, int n_max);
CheckResult check_ball_bound(const DivergenceConfig& config, int n_lo, int n_hi, std::size_t samples,
                             std::uint64_t seed);
CheckResult check_lebesgue_trend();
CheckResult check_chung_erdos();
CheckResult check_hyperboloid_scaling(std::size_t samples, std::uint64_t seed);
CheckResult check_d1_reduction(std::size_t configs, std::uint64_t seed);
CheckResult check_concatenation(const Beta& beta, int a, int b);

// criteria 1-13 in order; the tasks are independent of each other
std::vector<std::function<CheckResult()>> acceptance_tasks(std::uint64_t seed = 1);
std::vector<CheckResult> acceptance_suite(std::uint64_t seed = 1);

std::vector<CheckResult> verify_core(const Beta& beta, int n_max);
std::vector<CheckResult> verify_divergence(const DivergenceConfig& config, int n_max, int ball_lo,
                                           int ball_hi, std::size_t samples, std::uint64_t seed);

}  // namespace betashrink
