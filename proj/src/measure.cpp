#include "betashrink/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "betashrink/covering.hpp"
#include "betashrink/errors.hpp"
#include "json.hpp"

namespace betashrink {

namespace {

constexpr double kLogDomainCap = -1.0;

int ipow_states(int b, std::size_t max_states, std::size_t* states) {
  int K = 0;
  std::size_t S = 1;
  while (S * static_cast<std::size_t>(b) <= max_states) {
    S *= static_cast<std::size_t>(b);
    ++K;
  }
  *states = S;
  return K;
}

void require_shift_tail(const TailSpec& tail) {
  if (tail.dimension() != 1 || tail.mode != RegionMode::weighted) {
    throw UnsupportedError("shift backend handles d = 1 weighted tails only");
  }
  if (!tail.betas[0].is_integer) throw UnsupportedError("shift backend needs an integer beta");
  if (tail.maps[0].kind() != LipschitzMap::Kind::constant) {
    throw UnsupportedError("shift backend needs a constant target map");
  }
}

// [p, q) = (a - ψ, a + ψ) ∩ [0, 1)
std::pair<double, double> target_interval(double a, double psi) {
  return {std::max(0.0, a - psi), std::min(1.0, a + psi)};
}

}  // namespace

void TailSpec::validate() const {
  if (N < 1 || M < N) throw DomainError("need 1 <= N <= M");
  validate_betas(betas);
  if (maps.size() != betas.size()) throw PreconditionError("need one map per axis");
  const std::size_t want = mode == RegionMode::weighted ? betas.size() : 1;
  if (psi.size() != want) throw PreconditionError("wrong number of rate functions");
}

double TailSpec::rate(std::size_t axis, int n) const {
  return mode == RegionMode::weighted ? psi.at(axis).value(n) : psi.at(0).value(n);
}

HitRegion TailSpec::region(int n) const {
  if (mode == RegionMode::weighted) return build_weighted_region(betas, psi, maps, n, selection);
  return build_multiplicative_region(betas, psi.at(0), maps, n, selection);
}

std::string TailSpec::describe() const {
  std::ostringstream os;
  os << (mode == RegionMode::weighted ? "weighted" : "multiplicative") << ';'
     << (selection == CylinderSelection::full ? "full" : "all") << ";N=" << N << ";M=" << M;
  for (const auto& b : betas) os << ";beta=" << b.label;
  for (const auto& p : psi) os << ";psi=" << p.describe();
  for (const auto& h : maps) os << ";h=" << h.describe();
  return os.str();
}

std::uint64_t TailSpec::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : describe()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

TailSpec weighted_tail(BetaVector betas, ApproxTuple psi, std::vector<LipschitzMap> maps, int N,
                       int M, CylinderSelection selection) {
  TailSpec t;
  t.N = N;
  t.M = M;
  t.selection = selection;
  t.betas = std::move(betas);
  t.psi = std::move(psi);
  t.maps = std::move(maps);
  t.validate();
  return t;
}

double hoeffding_radius(std::size_t samples) {
  if (samples == 0) return 1;
  return std::sqrt(std::log(2 / 0.01) / (2.0 * static_cast<double>(samples)));
}

std::string MeasureEstimate::to_json() const {
  nlohmann::ordered_json j;
  j["estimate"] = estimate;
  j["radius"] = radius;
  j["confidence"] = 0.99;
  j["samples"] = samples;
  j["hits"] = hits;
  j["ambiguous"] = ambiguous;
  j["seed"] = seed;
  std::ostringstream h;
  h << std::hex << config_hash;
  j["config_hash"] = h.str();
  return j.dump(2);
}

namespace {

enum class Decision { in, out, unsure };

// one coordinate of a sample point and its orbit over N..M
struct AxisOrbit {
  bool integer = false;
  int base = 0;
  std::vector<int> digits;  // integer β: digits 1..L
  std::vector<double> v;     // T^n x for n = N..M (integer β, double)
  std::vector<Real> vr;      // T^n x for n = N..M (non-integer β)
  std::vector<char> full;    // cylinder of level n is full
  double x = 0;
  double hx = 0;
  Real xr;
};

class Sampler {
 public:
  Sampler(const TailSpec& tail, std::uint64_t seed) : tail_(tail), rng_(seed) {
    for (const auto& b : tail.betas) {
      if (b.is_integer) {
        const int base = b.max_digit() + 1;
        extra_.push_back(static_cast<int>(std::ceil(64 / std::log2(base))) + 1);
        fast_err_.push_back(std::pow(base, -extra_.back()) * (1 + tail.maps[fast_err_.size()].lipschitz()) +
                            4e-16);
        hi_betas_.push_back(b);
        bits_.push_back(0);
      } else {
        const int bits = static_cast<int>(std::ceil((tail.M + 2) * std::log2(b.approx()))) + 96;
        bits_.push_back(bits);
        hi_betas_.push_back(Beta::parse(b.label, bits));
        extra_.push_back(0);
        fast_err_.push_back(0);
      }
      shifts_.emplace_back(b);
    }
    for (int n = tail.N; n <= tail.M; ++n) {
      std::vector<double> row;
      for (std::size_t i = 0; i < psi_axes(); ++i) row.push_back(tail.rate(i, n));
      psi_.push_back(std::move(row));
    }
  }

  // membership of a fresh sample in ⋃ E_n
  Decision draw() {
    const std::size_t d = tail_.dimension();
    orbits_.assign(d, AxisOrbit{});
    for (std::size_t i = 0; i < d; ++i) fill(i);
    bool unsure = false;
    for (int n = tail_.N; n <= tail_.M; ++n) {
      Decision dec = decide(n, false);
      if (dec == Decision::unsure) dec = decide(n, true);
      if (dec == Decision::in) return Decision::in;
      if (dec == Decision::unsure) unsure = true;
    }
    return unsure ? Decision::unsure : Decision::out;
  }

 private:
  // unbiased: k digits at a time from a uniform draw below base^k
  void draw_digits(int base, int* out, std::size_t count) {
    std::uint64_t block = 1;
    int k = 0;
    while (block <= (std::uint64_t(1) << 62) / static_cast<std::uint64_t>(base)) {
      block *= static_cast<std::uint64_t>(base);
      ++k;
    }
    std::uniform_int_distribution<std::uint64_t> draw(0, block - 1);
    std::size_t i = 0;
    while (i < count) {
      std::uint64_t v = draw(rng_);
      for (int j = 0; j < k && i < count; ++j, ++i) {
        out[i] = static_cast<int>(v % static_cast<std::uint64_t>(base));
        v /= static_cast<std::uint64_t>(base);
      }
    }
  }

  std::size_t psi_axes() const {
    return tail_.mode == RegionMode::weighted ? tail_.dimension() : 1;
  }

  void fill(std::size_t i) {
    const Beta& beta = tail_.betas[i];
    AxisOrbit& o = orbits_[i];
    const int count = tail_.M - tail_.N + 1;
    if (beta.is_integer) {
      o.integer = true;
      o.base = beta.max_digit() + 1;
      const int L = tail_.M + extra_[i];
      o.digits.resize(L);
      draw_digits(o.base, o.digits.data(), o.digits.size());
      o.v.assign(count, 0);
      double t = 0;
      for (int pos = L; pos >= 1; --pos) {
        if (pos >= tail_.N && pos <= tail_.M) o.v[pos - tail_.N] = t;
        t = (o.digits[pos - 1] + t) / o.base;
      }
      o.x = t;
      o.hx = tail_.maps[i](t);
      o.full.assign(count, 1);
      return;
    }
    PrecisionScope scope(bits_[i]);
    Real x = 0;
    const int chunks = bits_[i] / 64 + 1;
    for (int c = chunks; c >= 1; --c) {
      x = (x + Real(static_cast<double>(rng_() >> 11))) / Real(9007199254740992.0);
    }
    o.xr = x;
    o.x = to_double(x);
    o.vr.resize(count);
    o.full.assign(count, 0);
    const Real& b = hi_betas_[i].value;
    int state = 0;
    for (int k = 1; k <= tail_.M; ++k) {
      Real y = b * x;
      Real dg = floor(y);
      x = y - dg;
      if (state >= 0) state = shifts_[i].next_state(state, dg.convert_to<int>());
      if (k >= tail_.N) {
        o.vr[k - tail_.N] = x;
        o.full[k - tail_.N] = state == 0;
      }
    }
  }

  // |T^n x_i - h_i(x_i)| with an absolute error bound
  std::pair<double, double> gap(std::size_t i, int n, bool precise) {
    const AxisOrbit& o = orbits_[i];
    const LipschitzMap& h = tail_.maps[i];
    if (!o.integer) {
      PrecisionScope scope(bits_[i]);
      Real g = abs(o.vr[n - tail_.N] - h(o.xr));
      return {to_double(g), 0.0};
    }
    if (!precise) {
      // L - n ≥ extra digits past every n ≤ M
      const double g = std::abs(o.v[n - tail_.N] - o.hx);
      return {g, fast_err_[i]};
    }
    // extend the digit stream and redo the arithmetic exactly
    AxisOrbit& w = orbits_[i];
    const std::size_t before = w.digits.size();
    w.digits.resize(before + 128);
    draw_digits(o.base, w.digits.data() + before, 128);
    const int L2 = static_cast<int>(w.digits.size());
    PrecisionScope scope(static_cast<int>(L2 * std::log2(o.base)) + 64);
    Real v = 0, x = 0;
    for (int pos = L2; pos >= 1; --pos) {
      if (pos == n) v = x;
      x = (Real(w.digits[pos - 1]) + x) / o.base;
    }
    const double err = std::pow(o.base, -(L2 - n)) + h.lipschitz() * std::pow(o.base, -L2);
    return {to_double(abs(v - h(x))), err + 1e-300};
  }

  Decision decide(int n, bool precise) {
    const std::size_t d = tail_.dimension();
    const std::size_t idx = static_cast<std::size_t>(n - tail_.N);
    if (tail_.selection == CylinderSelection::full) {
      for (std::size_t i = 0; i < d; ++i) {
        if (!orbits_[i].full[idx]) return Decision::out;
      }
    }
    if (tail_.mode == RegionMode::weighted) {
      bool unsure = false;
      for (std::size_t i = 0; i < d; ++i) {
        const double psi = psi_[idx][i];
        auto [g, e] = gap(i, n, precise);
        if (g + e < psi) continue;
        if (g - e >= psi) return Decision::out;
        unsure = true;
      }
      return unsure ? Decision::unsure : Decision::in;
    }
    const double psi = psi_[idx][0];
    double lo = 1, hi = 1;
    for (std::size_t i = 0; i < d; ++i) {
      auto [g, e] = gap(i, n, precise);
      lo *= std::max(0.0, g - e);
      hi *= g + e;
    }
    if (hi < psi) return Decision::in;
    if (lo >= psi) return Decision::out;
    return Decision::unsure;
  }

  const TailSpec& tail_;
  std::mt19937_64 rng_;
  std::vector<int> extra_;
  std::vector<double> fast_err_;
  std::vector<int> bits_;
  BetaVector hi_betas_;
  std::vector<BetaShift> shifts_;
  std::vector<AxisOrbit> orbits_;
  std::vector<std::vector<double>> psi_;
};

}  // namespace

MeasureEstimate mc_lebesgue(const TailSpec& tail, std::size_t samples, std::uint64_t seed) {
  tail.validate();
  MeasureEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.config_hash = tail.hash();
  est.radius = hoeffding_radius(samples);
  Sampler sampler(tail, seed);
  for (std::size_t k = 0; k < samples; ++k) {
    switch (sampler.draw()) {
      case Decision::in: ++est.hits; break;
      case Decision::unsure: ++est.ambiguous; break;
      case Decision::out: break;
    }
  }
  est.estimate = samples ? static_cast<double>(est.hits) / static_cast<double>(samples) : 0;
  return est;
}

std::vector<std::vector<Interval<Real>>> tail_intervals(const TailSpec& tail) {
  tail.validate();
  if (tail.dimension() != 1 || tail.mode != RegionMode::weighted) {
    throw UnsupportedError("interval merge handles d = 1 weighted tails only");
  }
  std::vector<std::vector<Interval<Real>>> out;
  for (int n = tail.N; n <= tail.M; ++n) {
    out.push_back(merge_intervals(axis_intervals(tail.region(n), 0, AxisSet::hit)));
  }
  return out;
}

Real exact_union_measure(const TailSpec& tail, const std::optional<Interval<Real>>& window) {
  std::vector<Interval<Real>> all;
  for (auto& v : tail_intervals(tail)) all.insert(all.end(), v.begin(), v.end());
  auto merged = merge_intervals(std::move(all));
  if (window) merged = intersect_merged(merged, std::vector<Interval<Real>>{*window});
  return merged_measure(merged);
}

UnionBounds shift_union_bounds(const TailSpec& tail, const Word& prefix, std::size_t max_states) {
  tail.validate();
  require_shift_tail(tail);
  const int b = tail.betas[0].max_digit() + 1;
  for (int dg : prefix) {
    if (dg < 0 || dg >= b) throw DomainError("prefix digit outside the alphabet");
  }
  std::size_t S = 0;
  const int K = ipow_states(b, max_states, &S);
  if (K < 1) throw PreconditionError("state budget below one digit");
  const double a = tail.maps[0](0.0);
  const int k = static_cast<int>(prefix.size());
  const std::size_t stride = S / static_cast<std::size_t>(b);

  auto run = [&](bool inner) {
    std::vector<double> mass(S, 0.0), next(S);
    mass[0] = 1;
    for (int t = 1; t <= tail.M + K; ++t) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t s = 0; s < S; ++s) {
        if (mass[s] == 0) continue;
        const std::size_t base = (s % stride) * static_cast<std::size_t>(b);
        if (t <= k) {
          next[base + prefix[t - 1]] += mass[s];
        } else {
          const double share = mass[s] / b;
          for (int dg = 0; dg < b; ++dg) next[base + dg] += share;
        }
      }
      mass.swap(next);
      const int n = t - K;
      if (n < tail.N || n > tail.M) continue;
      auto [p, q] = target_interval(a, tail.rate(0, n));
      const double lo = p * static_cast<double>(S), hi = q * static_cast<double>(S);
      double w0, w1;
      if (inner) {
        w0 = std::ceil(lo + 1e-9);
        w1 = std::floor(hi - 1e-9) - 1;
      } else {
        w0 = std::floor(lo - 1e-9);
        w1 = std::ceil(hi + 1e-9) - 1;
      }
      w0 = std::max(w0, 0.0);
      w1 = std::min(w1, static_cast<double>(S - 1));
      for (double w = w0; w <= w1; ++w) mass[static_cast<std::size_t>(w)] = 0;
    }
    double rest = 0;
    for (double m : mass) rest += m;
    return 1 - rest;
  };
  UnionBounds ub;
  ub.window_digits = K;
  const double I = std::pow(static_cast<double>(b), -k);
  ub.lower = std::max(0.0, run(true)) * I;
  ub.upper = std::min(1.0, run(false)) * I;
  return ub;
}

ChungErdosReport chung_erdos_lower(const std::vector<std::vector<Interval<Real>>>& unions,
                                   const Interval<Real>& window) {
  ChungErdosReport rep;
  rep.window = to_double(window.length());
  std::vector<std::vector<Interval<Real>>> sets;
  std::vector<Real> size;
  Real first = 0;
  for (const auto& u : unions) {
    sets.push_back(intersect_merged(merge_intervals(u), std::vector<Interval<Real>>{window}));
    size.push_back(merged_measure(sets.back()));
    first += size.back();
  }
  Real second = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    second += size[i];
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      second += 2 * merged_measure(intersect_merged(sets[i], sets[j]));
    }
  }
  rep.first = to_double(first);
  rep.second = to_double(second);
  rep.bound = second > 0 ? to_double(first * first / second) : 0.0;
  return rep;
}

ChungErdosReport chung_erdos_shift(const TailSpec& tail, const Word& prefix) {
  tail.validate();
  require_shift_tail(tail);
  const int k = static_cast<int>(prefix.size());
  if (tail.N < k) throw PreconditionError("need N >= level of the window");
  const int b = tail.betas[0].max_digit() + 1;
  const double a = tail.maps[0](0.0);
  PrecisionScope scope(static_cast<int>((tail.M - tail.N + 1) * std::log2(b)) + 128);
  const int count = tail.M - tail.N + 1;
  std::vector<Real> p(count), q(count);
  double psi_sum = 0;
  Real single = 0;
  for (int i = 0; i < count; ++i) {
    const double psi = tail.rate(0, tail.N + i);
    auto [lo, hi] = target_interval(a, psi);
    p[i] = lo;
    q[i] = std::max(lo, hi);
    single += q[i] - p[i];
    psi_sum += psi;
  }
  // ∫_0^u 1[frac(t) ∈ [c, e)] dt
  auto G = [](const Real& u, const Real& c, const Real& e) {
    const Real fl = floor(u);
    const Real fr = u - fl;
    Real part = fr - c;
    if (part < 0) part = 0;
    if (part > e - c) part = e - c;
    return Real(fl * (e - c) + part);
  };
  Real pairs = 0;
  Real bj = 1;
  std::vector<Real> pow_b(count);
  for (int j = 0; j < count; ++j) {
    pow_b[j] = bj;
    bj *= b;
  }
  for (int i = 0; i < count; ++i) {
    for (int m = i + 1; m < count; ++m) {
      const Real& s = pow_b[m - i];
      pairs += (G(s * q[i], p[m], q[m]) - G(s * p[i], p[m], q[m])) / s;
    }
  }
  ChungErdosReport rep;
  const double I = std::pow(static_cast<double>(b), -k);
  rep.window = I;
  rep.first = I * to_double(single);
  rep.second = I * to_double(single + 2 * pairs);
  rep.bound = rep.second > 0 ? rep.first * rep.first / rep.second : 0.0;
  rep.psi_sum = psi_sum;
  rep.correlation_constant = rep.second / (I * (psi_sum * psi_sum + psi_sum));
  return rep;
}

TildeBand tilde_band(const Beta& beta, const ApproxFunction& psi, const LipschitzMap& h,
                     const Word& prefix, int n_lo, int n_hi) {
  BetaShift shift(beta);
  auto window = make_cylinder(shift, prefix);
  if (!window || !window->is_full) throw DomainError("window word must be a full cylinder");
  if (n_lo < static_cast<int>(prefix.size()) || n_hi < n_lo) throw DomainError("need level <= n_lo <= n_hi");
  TildeBand band;
  band.lo = std::numeric_limits<double>::infinity();
  const Window w{window->left, window->left + window->length};
  for (int n = n_lo; n <= n_hi; ++n) {
    const double r = psi.value(n);
    Real total = 0;
    for (const auto& c : enumerate_full(beta, n, w)) total += hit_enclosures(c, h, r).hit.length();
    const double ratio = to_double(total / window->length) / r;
    band.n.push_back(n);
    band.ratio.push_back(ratio);
    band.lo = std::min(band.lo, ratio);
    band.hi = std::max(band.hi, ratio);
  }
  return band;
}

FContentBound fcontent_upper(const std::vector<std::vector<Interval<Real>>>& axes,
                             const DimensionFunction& f, int scales) {
  if (axes.empty()) throw PreconditionError("region has no axes");
  const double d = static_cast<double>(axes.size());
  double min_len = std::numeric_limits<double>::infinity();
  double diam2 = 0;
  bool empty = false;
  for (const auto& ax : axes) {
    if (ax.empty()) {
      empty = true;
      continue;
    }
    Real lo = ax.front().lo, hi = ax.front().hi;
    for (const auto& iv : ax) {
      lo = min(lo, iv.lo);
      hi = max(hi, iv.hi);
      const double len = to_double(iv.length());
      if (len > 0) min_len = std::min(min_len, len);
    }
    const double side = to_double(hi - lo);
    diam2 += side * side;
  }
  FContentBound out;
  if (empty) return out;
  const double diam = std::sqrt(diam2);
  if (diam > 0 && std::log(diam) <= kLogDomainCap) out.single_ball = f.eval(diam);

  const double tau_hi = std::exp(kLogDomainCap) / std::sqrt(d) * (1 - 1e-12);
  const double tau_lo = std::min(tau_hi, std::isfinite(min_len) ? min_len / 4 : tau_hi);
  std::vector<double> grid;
  for (int i = 0; i < scales; ++i) {
    const double t = scales == 1 ? 0 : static_cast<double>(i) / (scales - 1);
    grid.push_back(std::exp(std::log(tau_lo) + t * (std::log(tau_hi) - std::log(tau_lo))));
  }
  bool have_grid = false;
  try {
    auto res = grid_fcover(axes, f, grid);
    out.value = res.best_f_volume;
    out.best_tau = res.best_tau;
    have_grid = true;
  } catch (const ResourceError&) {
    if (out.single_ball == 0) throw;
  }
  if (out.single_ball > 0 && (!have_grid || out.single_ball < out.value)) {
    out.value = out.single_ball;
    out.single_ball_best = true;
  }
  return out;
}

FContentBound fcontent_upper(const HitRegion& region, const DimensionFunction& f, int scales) {
  if (region.mode != RegionMode::weighted) {
    throw UnsupportedError("content bounds need a product-shaped region");
  }
  std::vector<std::vector<Interval<Real>>> axes;
  for (std::size_t i = 0; i < region.dimension(); ++i) {
    axes.push_back(merge_intervals(axis_intervals(region, i, AxisSet::hit)));
  }
  return fcontent_upper(axes, f, scales);
}

FContentBound fcontent_upper(const RectFamily& fam, const DimensionFunction& f, int scales) {
  double min_w = 1;
  for (const auto& ax : fam.axes) min_w = std::min(min_w, ax.width);
  PrecisionScope scope(std::max(kDefaultPrecisionBits, static_cast<int>(-std::log2(min_w)) + 96));
  std::vector<std::vector<Interval<Real>>> axes;
  for (std::size_t i = 0; i < fam.axes.size(); ++i) {
    const auto& ax = fam.axes[i];
    std::vector<Interval<Real>> v;
    for (double o : ax.offsets) {
      Real c = fam.y[i] + Real(o);
      Real lo = max(Real(0), c - Real(ax.width) / 2), hi = min(Real(1), c + Real(ax.width) / 2);
      v.push_back({lo, hi});
    }
    axes.push_back(merge_intervals(std::move(v)));
  }
  return fcontent_upper(axes, f, scales);
}

MdpBound mdp_lower(const RectFamily& fam, const DimensionFunction& f, std::size_t samples,
                   std::uint64_t seed) {
  if (fam.axes.empty()) throw PreconditionError("family has no axes");
  double min_w = std::numeric_limits<double>::infinity(), extent = 0;
  for (const auto& ax : fam.axes) {
    if (ax.offsets.empty()) throw PreconditionError("family has an empty axis");
    min_w = std::min(min_w, ax.width);
    extent = std::max(extent, ax.offsets.back() - ax.offsets.front() + ax.width);
  }
  const double r_lo = min_w * 1e-3, r_hi = extent;
  if (std::log(2 * r_hi) > kLogDomainCap) {
    throw DomainError("sampled ball diameters leave the domain of the dimension function");
  }
  MdpBound out;
  out.c = 1 / f.eval(2 * r_hi);
  out.r_at_sup = r_hi;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::size_t> idx(fam.axes.size());
  std::vector<double> u(fam.axes.size());
  for (std::size_t k = 0; k < samples; ++k) {
    const double r = std::exp(std::log(r_lo) + (std::log(r_hi) - std::log(r_lo)) * unit(rng));
    for (std::size_t i = 0; i < fam.axes.size(); ++i) {
      idx[i] = std::min(static_cast<std::size_t>(unit(rng) * fam.axes[i].offsets.size()),
                        fam.axes[i].offsets.size() - 1);
      u[i] = unit(rng);
    }
    const double ratio = mu_ball_local(fam, idx, u, r) / f.eval(2 * r);
    if (ratio > out.c) {
      out.c = ratio;
      out.r_at_sup = r;
    }
  }
  out.samples = samples;
  out.bound = 1 / out.c;
  return out;
}

RectFamily interval_family(double c, double ell) {
  RectFamily fam;
  fam.omega = ell;
  fam.y.push_back(Real(c));
  AxisFamily ax;
  ax.width = ell;
  ax.offsets = {0.0};
  ax.separation = std::numeric_limits<double>::infinity();
  ax.role = "interval";
  fam.axes.push_back(ax);
  return fam;
}

}  // namespace betashrink
