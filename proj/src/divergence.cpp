#include "betashrink/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "betashrink/errors.hpp"
#include "betashrink/series.hpp"
#include "json.hpp"

namespace betashrink {

namespace {

constexpr double kSlack = 1e-12;

bool le(double a, double b) { return a <= b + kSlack * std::max({1.0, std::abs(a), std::abs(b)}); }

double lpsi(const ApproxFunction& p, int n) { return p.log_value(static_cast<double>(n)); }

double sum_log_beta(const BetaVector& betas, int n) {
  double s = 0;
  for (const auto& b : betas) s += n * b.log();
  return s;
}

AsymptoticForm psi_growth(const ApproxFunction& p) { return {p.a2, p.a1, p.q, 0, p.a0}; }

Cylinder integer_cylinder(const Beta& beta, int n, std::uint64_t k) {
  const int b = beta.max_digit() + 1;
  Word w(n, 0);
  for (int i = n - 1; i >= 0; --i) {
    w[i] = static_cast<std::uint8_t>(k % b);
    k /= b;
  }
  if (k != 0) throw DomainError("cylinder index out of range");
  auto c = make_cylinder(BetaShift(beta), w);
  if (!c) throw DomainError("inadmissible cylinder");
  return *c;
}

}  // namespace

std::size_t BlockStructure::block_of(int axis) const {
  for (std::size_t j = 1; j < cuts.size(); ++j) {
    if (axis < cuts[j]) return j;
  }
  throw PreconditionError("axis outside the block structure");
}

BlockStructure block_structure(const BetaVector& betas) {
  if (betas.empty()) throw DomainError("need at least one beta");
  for (std::size_t i = 1; i < betas.size(); ++i) {
    if (betas[i].value < betas[i - 1].value && !same_beta(betas[i], betas[i - 1])) {
      throw DomainError("betas must be nondecreasing");
    }
  }
  BlockStructure bs;
  bs.cuts.push_back(0);
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (i + 1 == betas.size() || !same_beta(betas[i], betas[i + 1])) {
      bs.cuts.push_back(static_cast<int>(i + 1));
      bs.values.push_back(betas[i].label);
    }
  }
  return bs;
}

std::vector<int> eventual_block_order(const BetaVector& betas, const ApproxTuple& psi) {
  if (betas.size() != psi.size()) throw PreconditionError("need one ψ per β");
  const auto bs = block_structure(betas);
  std::vector<int> order(betas.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t j = 1; j < bs.cuts.size(); ++j) {
    std::stable_sort(order.begin() + bs.cuts[j - 1], order.begin() + bs.cuts[j], [&](int a, int b) {
      return eventual_compare(psi_growth(psi[a]), psi_growth(psi[b])) > 0;
    });
  }
  return order;
}

ApproxTuple permute(const ApproxTuple& psi, const std::vector<int>& order) {
  ApproxTuple out;
  for (int i : order) out.push_back(psi.at(i));
  return out;
}

PCheck in_P(int n, const BetaVector& betas, const ApproxTuple& psi, const DimensionFunction& f) {
  PCheck c;
  c.n = n;
  const auto bs = block_structure(betas);
  c.sorted = true;
  for (std::size_t j = 1; j < bs.cuts.size(); ++j) {
    for (int i = bs.cuts[j - 1]; i + 1 < bs.cuts[j]; ++i) {
      if (lpsi(psi[i], n) < lpsi(psi[i + 1], n)) c.sorted = false;
    }
  }
  try {
    c.log_term = sn_breakdown(betas, psi, f, n).log_term;
  } catch (const DomainError& e) {
    c.reason = e.what();
    return c;
  }
  c.lower_ok = c.log_term >= -2 * std::log(static_cast<double>(n));
  c.upper_ok = c.log_term <= 0;
  c.in_P = c.sorted && c.lower_ok && c.upper_ok;
  if (!c.sorted) c.reason = "psi not sorted within a block";
  else if (!c.lower_ok) c.reason = "s_n prod beta^n < n^-2";
  else if (!c.upper_ok) c.reason = "s_n prod beta^n > 1";
  return c;
}

double DivergenceFrame::omega() const { return std::exp(log_omega); }

double DivergenceFrame::log_tau_min() const {
  return *std::min_element(log_A_prime.begin(), log_A_prime.end());
}

double DivergenceFrame::log_tau_max() const {
  return *std::max_element(log_A_prime.begin(), log_A_prime.end());
}

std::string DivergenceFrame::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["in_P"] = p.in_P;
  j["P_reason"] = p.reason;
  j["log_term"] = p.log_term;
  j["found_m"] = found_m;
  j["m"] = m;
  j["k_j"] = kj;
  j["k_j_prev"] = kj_prev;
  j["log_omega"] = log_omega;
  j["log_phi"] = log_phi;
  j["log_A_prime"] = log_A_prime;
  j["chain"] = chain;
  j["chain_monotone"] = chain_monotone;
  j["omega_bounds"] = {omega_bound1, omega_bound2, omega_bound3};
  j["identity_rel_error"] = identity_rel_error;
  j["phi_rel_error"] = phi_rel_error;
  return j.dump(2);
}

DivergenceFrame frame(int n, const BetaVector& betas, const ApproxTuple& psi,
                      const DimensionFunction& f) {
  DivergenceFrame fr;
  fr.n = n;
  fr.p = in_P(n, betas, psi, f);
  const int d = static_cast<int>(betas.size());
  const auto bs = block_structure(betas);
  SnBreakdown sb;
  try {
    sb = sn_breakdown(betas, psi, f, n);
  } catch (const DomainError&) {
    return fr;
  }
  fr.log_s = sb.log_s;
  const double total = sum_log_beta(betas, n);
  std::vector<double> lp(d), lb(d);
  for (int i = 0; i < d; ++i) {
    lp[i] = lpsi(psi[i], n);
    lb[i] = -n * betas[i].log();
  }
  // X_ℓ = log(s_n ∏_{i<ℓ} ψ_i^-1 ∏β_i^n)
  auto X = [&](int l) {
    double x = sb.log_s + total;
    for (int i = 0; i < l; ++i) x -= lp[i];
    return x;
  };
  auto cut_above = [&](int l) { return bs.cuts[bs.block_of(l)]; };
  for (int m = 0; m < d; ++m) {
    const int kj = cut_above(m);
    if (X(m) / (kj - m) >= lp[m] - kSlack * std::max(1.0, std::abs(lp[m]))) {
      fr.found_m = true;
      fr.m = m;
      fr.kj = kj;
      fr.kj_prev = bs.cuts[bs.block_of(m) - 1];
      break;
    }
  }
  if (!fr.found_m) return fr;
  const int m = fr.m, kj = fr.kj;
  fr.log_omega = lb[m] + X(m) / (kj - m);
  const double lw = fr.log_omega;

  fr.chain_monotone = true;
  for (int l = m; l >= fr.kj_prev; --l) {
    fr.chain.push_back(X(l) / (kj - l));
    if (fr.chain.size() > 1 && !le(fr.chain[fr.chain.size() - 2], fr.chain.back())) {
      fr.chain_monotone = false;
    }
  }

  fr.omega_bound1 = fr.omega_bound2 = fr.omega_bound3 = true;
  for (int l = 0; l < d; ++l) {
    if (l < m) {
      fr.omega_bound1 = fr.omega_bound1 && le(lw, lb[l] + lp[l]);
    } else if (l < kj) {
      fr.omega_bound2 = fr.omega_bound2 && le(lb[l] + lp[l], lw) && le(lw, lb[l]);
    } else {
      fr.omega_bound3 = fr.omega_bound3 && le(lb[l], lw);
    }
  }

  // (∏_{i≥k_j} ω β_i^n)·ω^m·s_n·∏_{i<m} β_i^n ψ_i^-1 against ω^d
  double lhs = m * lw + sb.log_s;
  for (int i = kj; i < d; ++i) lhs += lw - lb[i];
  for (int i = 0; i < m; ++i) lhs += -lb[i] - lp[i];
  fr.identity_rel_error = std::abs(std::expm1(lhs - d * lw));

  const double l4 = std::log(4.0);
  double phi_sum = 0;
  for (int i = 0; i < d; ++i) {
    double v;
    if (i < m) v = lp[i] - l4;
    else if (i < kj) v = -lb[m] + lw - l4;
    else v = -l4;
    fr.log_phi.push_back(v);
    phi_sum += v;
  }
  fr.phi_rel_error = std::abs(std::expm1(phi_sum - (sb.log_s + total - d * l4)));

  for (int i = kj; i < d; ++i) fr.log_A_prime.push_back(lb[i]);
  for (int i = m; i < d; ++i) fr.log_A_prime.push_back(lb[i] + lp[i]);
  return fr;
}

ThresholdReport measure_threshold(const BetaVector& betas, const ApproxTuple& psi,
                                  const DimensionFunction& f, int n_max) {
  ThresholdReport rep;
  rep.n_max = n_max;
  const int start = sn_min_index(betas, psi);
  std::vector<DivergenceFrame> frames;
  for (int n = start; n <= n_max; ++n) {
    auto fr = frame(n, betas, psi, f);
    if (!fr.p.in_P) continue;
    rep.P.push_back(n);
    if (!fr.found_m || !fr.bounds_hold()) rep.failures.push_back(n);
    frames.push_back(std::move(fr));
  }
  rep.threshold = rep.failures.empty() ? (rep.P.empty() ? n_max + 1 : rep.P.front())
                                       : rep.failures.back() + 1;
  for (const auto& fr : frames) {
    if (fr.n < rep.threshold) continue;
    ++rep.checked;
    rep.max_identity_error = std::max(rep.max_identity_error, fr.identity_rel_error);
    rep.max_phi_error = std::max(rep.max_phi_error, fr.phi_rel_error);
  }
  return rep;
}

std::vector<PermutationReport> permutation_report(const BetaVector& betas, const ApproxTuple& psi,
                                                  const DimensionFunction& f, int n_max) {
  const auto bs = block_structure(betas);
  const auto eventual = eventual_block_order(betas, psi);
  std::vector<int> order(betas.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<PermutationReport> out;
  const int start = sn_min_index(betas, psi);
  while (true) {
    PermutationReport r;
    r.order = order;
    const auto ps = permute(psi, order);
    r.eventually_sorted = true;
    for (std::size_t j = 1; j < bs.cuts.size(); ++j) {
      for (int i = bs.cuts[j - 1]; i + 1 < bs.cuts[j]; ++i) {
        if (eventual_compare(psi_growth(ps[i]), psi_growth(ps[i + 1])) < 0) r.eventually_sorted = false;
      }
    }
    for (int n = start; n <= n_max; ++n) {
      auto c = in_P(n, betas, ps, f);
      if (c.in_P) {
        ++r.p_count;
        r.partial_sum += std::exp(c.log_term);
      }
    }
    out.push_back(r);
    // next permutation within blocks, last block fastest
    std::size_t j = bs.cuts.size() - 1;
    bool advanced = false;
    while (j >= 1) {
      if (std::next_permutation(order.begin() + bs.cuts[j - 1], order.begin() + bs.cuts[j])) {
        advanced = true;
        break;
      }
      --j;
    }
    if (!advanced) break;
  }
  (void)eventual;
  return out;
}

std::vector<std::vector<double>> y_cloud_offsets(const DivergenceFrame& fr, const BetaVector& betas,
                                                 const ApproxTuple& psi, std::size_t cap) {
  std::vector<std::vector<double>> axes;
  const double w = fr.omega();
  std::size_t total = 1;
  for (int i = 0; i < fr.m; ++i) {
    const double R = std::exp(-fr.n * betas[i].log() + lpsi(psi[i], fr.n)) / 2;
    const auto k = static_cast<std::size_t>(std::ceil(R / w - 1e-12));
    total *= std::max<std::size_t>(k, 1);
    if (total > cap) throw ResourceError("y cloud exceeds the cap");
    std::vector<double> pts;
    for (std::size_t t = 0; t < std::max<std::size_t>(k, 1); ++t) pts.push_back(-R + w * (2.0 * t + 1));
    axes.push_back(std::move(pts));
  }
  return axes;
}

double RectFamily::count() const {
  double c = 1;
  for (const auto& a : axes) c *= static_cast<double>(a.offsets.size());
  return c;
}

RectFamily build_rect_family(const DivergenceFrame& fr, const BetaVector& betas,
                             const ApproxTuple& psi, const std::vector<LipschitzMap>& maps,
                             const std::vector<std::uint64_t>& cells,
                             const std::vector<double>& y_offset, std::size_t cap) {
  const int d = static_cast<int>(betas.size());
  if (!fr.found_m) throw PreconditionError("frame has no m");
  if (maps.size() != betas.size() || cells.size() != betas.size()) {
    throw PreconditionError("need one map and one cylinder index per axis");
  }
  for (const auto& b : betas) {
    if (!b.is_integer) throw UnsupportedError("the divergence construction needs integer betas");
  }
  const int n = fr.n;
  RectFamily fam;
  fam.n = n;
  fam.omega = fr.omega();
  const Real omega = exp(Real(fr.log_omega));
  for (int i = 0; i < d; ++i) {
    const Beta& beta = betas[i];
    const Cylinder cyl = integer_cylinder(beta, n, cells[i]);
    const Real z = solve_anchor(cyl, maps[i]);
    const Real R = exp(Real(-n * beta.log() + lpsi(psi[i], n))) / 2;
    AxisFamily ax;
    const double u = i < static_cast<int>(y_offset.size()) ? y_offset[i] : 0.0;
    const Real y = z + (i < fr.m ? Real(u) : Real(0));
    fam.y.push_back(y);
    if (i < fr.m) {
      // an interval of length ω inside B(y, ω) ∩ B(z, R)
      ax.role = "omega";
      ax.width = fam.omega;
      Real lo = y - omega / 2;
      lo = max(lo, z - R);
      lo = min(lo, z + R - omega);
      ax.offsets.push_back(to_double(lo + omega / 2 - y));
    } else if (i < fr.kj) {
      ax.role = "thin";
      ax.width = to_double(2 * R);
      ax.offsets.push_back(0.0);
    } else {
      ax.role = "many";
      ax.width = to_double(2 * R);
      const Real step = BetaShift(beta).inv_power(n);
      const Real span = omega / step;
      const long long reach = static_cast<long long>(to_double(ceil(span))) + 1;
      const long long top = static_cast<long long>(to_double(floor(1 / step))) - 1;
      BetaShift shift(beta);
      for (long long k = static_cast<long long>(cells[i]) - reach;
           k <= static_cast<long long>(cells[i]) + reach; ++k) {
        if (k < 0 || k > top) continue;
        const Cylinder c = integer_cylinder(beta, n, static_cast<std::uint64_t>(k));
        const Real zk = solve_anchor(c, maps[i]);
        if (abs(zk - y) + R > omega) continue;
        if (zk - R < 0 || zk + R > 1) continue;
        ax.offsets.push_back(to_double(zk - y));
        if (ax.offsets.size() > cap) throw ResourceError("rectangle family exceeds the cap");
      }
    }
    std::sort(ax.offsets.begin(), ax.offsets.end());
    ax.separation = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < ax.offsets.size(); ++k) {
      ax.separation = std::min(ax.separation, ax.offsets[k] - ax.offsets[k - 1]);
    }
    fam.axes.push_back(std::move(ax));
  }
  if (fam.count() > static_cast<double>(cap)) throw ResourceError("rectangle family exceeds the cap");
  return fam;
}

namespace {

// |[-r, r] ∩ [c - w/2, c + w/2]|, exact when either side is far below c
double overlap(double r, double c, double w) {
  if (c - w / 2 >= -r && c + w / 2 <= r) return w;
  if (c - w / 2 <= -r && c + w / 2 >= r) return 2 * r;
  return std::max(0.0, std::min(r, c + w / 2) - std::max(-r, c - w / 2));
}

// μ_i([x-r, x+r]) with x = offsets[own] + local
double axis_mass(const AxisFamily& ax, std::size_t own, double local, double r) {
  const double w = ax.width;
  const double base = ax.offsets.at(own);
  double mass = 0;
  auto first = std::lower_bound(ax.offsets.begin(), ax.offsets.end(), base + local - r - w);
  for (auto it = first; it != ax.offsets.end() && *it <= base + local + r + w; ++it) {
    const std::size_t j = static_cast<std::size_t>(it - ax.offsets.begin());
    const double D = j == own ? 0.0 : *it - base;
    mass += overlap(r, D - local, w);
  }
  return std::min(1.0, mass / (w * static_cast<double>(ax.offsets.size())));
}

}  // namespace

double mu_ball_local(const RectFamily& fam, const std::vector<std::size_t>& idx,
                     const std::vector<double>& u, double r) {
  if (!(r > 0)) throw PreconditionError("radius must be positive");
  double mu = 1;
  for (std::size_t i = 0; i < fam.axes.size(); ++i) {
    const auto& ax = fam.axes[i];
    mu *= axis_mass(ax, idx.at(i), (u.at(i) - 0.5) * ax.width, r);
    if (mu == 0) break;
  }
  return mu;
}

double mu_ball(const RectFamily& fam, const std::vector<double>& center, double r) {
  if (!(r > 0)) throw PreconditionError("radius must be positive");
  double mu = 1;
  for (std::size_t i = 0; i < fam.axes.size(); ++i) {
    const auto& ax = fam.axes[i];
    double mass = 0;
    for (double c : ax.offsets) {
      mass += overlap(r, c - center.at(i), ax.width);
    }
    mu *= std::min(1.0, mass / (ax.width * static_cast<double>(ax.offsets.size())));
  }
  return mu;
}

BallBoundReport sample_ball_bound(const RectFamily& fam, const DivergenceFrame& fr,
                                  const DimensionFunction& f, std::size_t samples,
                                  std::uint64_t seed) {
  BallBoundReport rep;
  rep.n = fr.n;
  rep.tau_min = std::exp(fr.log_tau_min());
  rep.tau_max = std::exp(fr.log_tau_max());
  rep.omega = fr.omega();
  const double d = static_cast<double>(fam.axes.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lo1 = fr.log_tau_min() - std::log(1e3);
  const double bounds[4] = {lo1, fr.log_tau_min(), fr.log_tau_max(), fr.log_omega};
  std::vector<std::size_t> idx(fam.axes.size());
  std::vector<double> u(fam.axes.size());
  std::size_t k = 0;
  while (rep.samples < samples) {
    const int c = static_cast<int>(k++ % 3);
    if (!(bounds[c + 1] > bounds[c])) {
      if (k > 3 * samples + 3) break;
      continue;
    }
    const double lr = bounds[c] + (bounds[c + 1] - bounds[c]) * unit(rng);
    const double r = std::exp(lr);
    for (std::size_t i = 0; i < fam.axes.size(); ++i) {
      idx[i] = static_cast<std::size_t>(unit(rng) * fam.axes[i].offsets.size());
      idx[i] = std::min(idx[i], fam.axes[i].offsets.size() - 1);
      u[i] = unit(rng);
    }
    const double mu = mu_ball_local(fam, idx, u, r);
    const double ratio = mu * std::exp(d * fr.log_omega - f.log_eval(std::min(lr, -1.0)));
    rep.sup_ratio = std::max(rep.sup_ratio, ratio);
    rep.sup_by_case[c] = std::max(rep.sup_by_case[c], ratio);
    ++rep.per_case[c];
    ++rep.samples;
  }
  return rep;
}

}  // namespace betashrink
