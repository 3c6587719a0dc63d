#include "betashrink/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "betashrink/errors.hpp"

namespace betashrink {

const char* axis_class_name(AxisClass c) {
  switch (c) {
    case AxisClass::k1: return "K1";
    case AxisClass::k2: return "K2";
    case AxisClass::neither: return "neither";
  }
  return "?";
}

double CoverEstimate::tau() const { return std::exp(log_tau); }
double CoverEstimate::count() const { return std::exp(log_count); }
double CoverEstimate::f_volume() const { return std::exp(log_f_volume); }

CoverEstimate cover_count(const BetaVector& betas, const ApproxTuple& psi,
                          const DimensionFunction& f, int n, double log_tau) {
  if (betas.empty() || betas.size() != psi.size()) throw PreconditionError("need one ψ per β");
  if (!(log_tau < 0)) throw DomainError("tau must lie in (0,1)");
  CoverEstimate e;
  e.n = n;
  e.log_tau = log_tau;
  const double slack = 1e-12 * std::max(1.0, std::abs(log_tau));
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const double side = -n * betas[i].log();                       // log β^-n
    const double thin = side + psi[i].log_value(static_cast<double>(n));  // log β^-n ψ
    // per-axis share: β^n cylinders, each split into β^-n/τ pieces or thinned to β^-n ψ/τ
    double axis = -side;
    bool k1 = side <= log_tau + slack;
    bool k2 = thin >= log_tau - slack;
    if (k1) axis += side - log_tau;
    if (k2) axis += thin - log_tau;
    e.breakdown.push_back(k1 ? AxisClass::k1 : k2 ? AxisClass::k2 : AxisClass::neither);
    e.log_count += axis;
  }
  e.log_f_volume = e.log_count + f.log_eval(log_tau);
  return e;
}

double min_cover_log_volume(const BetaVector& betas, const ApproxTuple& psi,
                            const DimensionFunction& f, int n) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const double side = -n * betas[i].log();
    const double thin = side + psi[i].log_value(static_cast<double>(n));
    for (double lt : {side, thin}) best = std::min(best, cover_count(betas, psi, f, n, lt).log_f_volume);
  }
  return best;
}

std::string BallCover::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "cx,cy,radius\n";
  for (const auto& b : balls) {
    os << b.center.at(0) << ',' << (b.center.size() > 1 ? b.center[1] : 0.0) << ',' << b.radius
       << '\n';
  }
  return os.str();
}

namespace {

struct CellRange {
  long long lo;
  long long hi;
};

// number of half-open τ-cells of [0,1) meeting the union; ranges filled when small enough
double count_axis_cells(std::vector<Interval<Real>> ivs, const Real& tau, double cap,
                        std::vector<CellRange>* ranges) {
  std::sort(ivs.begin(), ivs.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  const Real top = ceil(Real(1) / tau) - 1;
  Real last = -1;
  Real count = 0;
  for (const auto& iv : ivs) {
    Real lo = max(iv.lo, Real(0));
    Real hi = min(iv.hi, Real(1));
    if (!(lo < hi)) continue;
    Real a = floor(lo / tau);
    Real b = ceil(hi / tau) - 1;
    if (b > top) b = top;
    if (a <= last) a = last + 1;
    if (b < a) continue;
    count += b - a + 1;
    last = b;
    if (count > cap) return std::numeric_limits<double>::infinity();
    if (ranges) ranges->push_back({a.convert_to<long long>(), b.convert_to<long long>()});
  }
  return to_double(count);
}

}  // namespace

FCoverResult grid_fcover(const std::vector<std::vector<Interval<Real>>>& axes,
                         const DimensionFunction& f, const std::vector<double>& tau_grid,
                         std::size_t materialize_limit) {
  if (axes.empty()) throw PreconditionError("region has no axes");
  if (tau_grid.empty()) throw PreconditionError("empty scale grid");
  const double d = static_cast<double>(axes.size());
  FCoverResult out;
  bool any = false;
  for (double tau : tau_grid) {
    if (!(tau > 0 && tau < 1)) throw DomainError("grid scales must lie in (0,1)");
    ScaleCover sc;
    sc.tau = tau;
    double cells = 1;
    for (const auto& ax : axes) {
      const double c = count_axis_cells(ax, Real(tau), kCellCap, nullptr);
      cells *= c;
      if (cells == 0) break;
      if (cells > kCellCap) break;
    }
    if (cells > kCellCap) {
      sc.skipped = true;
      sc.cells = cells;
      out.scales.push_back(sc);
      continue;
    }
    sc.cells = cells;
    sc.f_volume = cells == 0 ? 0 : cells * f.eval(tau * std::sqrt(d));
    if (!any || sc.f_volume < out.best_f_volume) {
      out.best_f_volume = sc.f_volume;
      out.best_tau = tau;
    }
    any = true;
    out.scales.push_back(sc);
  }
  if (!any) throw ResourceError("every grid scale exceeds the cell cap");

  auto best = std::find_if(out.scales.begin(), out.scales.end(),
                           [&](const ScaleCover& s) { return !s.skipped && s.tau == out.best_tau; });
  out.cover.ball_count = best->cells;
  out.cover.total_volume = best->f_volume;
  if (best->cells > 0 && best->cells <= static_cast<double>(materialize_limit)) {
    const Real tau(out.best_tau);
    std::vector<std::vector<CellRange>> per_axis(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) count_axis_cells(axes[i], tau, kCellCap, &per_axis[i]);
    std::vector<std::vector<long long>> idx(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) {
      for (const auto& r : per_axis[i]) {
        for (long long k = r.lo; k <= r.hi; ++k) idx[i].push_back(k);
      }
    }
    std::vector<std::size_t> pos(axes.size(), 0);
    const double radius = out.best_tau * std::sqrt(d) / 2;
    while (true) {
      Ball b;
      b.radius = radius;
      for (std::size_t i = 0; i < axes.size(); ++i) {
        b.center.push_back((static_cast<double>(idx[i][pos[i]]) + 0.5) * out.best_tau);
      }
      out.cover.balls.push_back(std::move(b));
      std::size_t i = 0;
      while (i < axes.size() && ++pos[i] == idx[i].size()) pos[i++] = 0;
      if (i == axes.size()) break;
    }
  }
  return out;
}

FCoverResult brute_force_fcover(const HitRegion& region, const DimensionFunction& f,
                                const std::vector<double>& tau_grid, std::size_t materialize_limit) {
  if (region.mode != RegionMode::weighted) {
    throw UnsupportedError("grid covers need a weighted (product) region");
  }
  std::vector<std::vector<Interval<Real>>> axes;
  for (std::size_t i = 0; i < region.dimension(); ++i) {
    axes.push_back(axis_intervals(region, i, AxisSet::hit));
  }
  return grid_fcover(axes, f, tau_grid, materialize_limit);
}

bool in_hyperboloid(const std::array<double, 2>& a, double delta, double x, double y) {
  return std::abs(x - a[0]) * std::abs(y - a[1]) < delta;
}

namespace {

// squares of side σ over [x0,x1]×[y0,y1], each inside a ball of radius σ/√2
void tile(double x0, double x1, double y0, double y1, double sigma, double s, BallCover& bc) {
  if (!(x1 > x0) || !(y1 > y0)) return;
  const long long nx = static_cast<long long>(std::ceil((x1 - x0) / sigma - 1e-12));
  const long long ny = static_cast<long long>(std::ceil((y1 - y0) / sigma - 1e-12));
  const double r = sigma / std::sqrt(2.0);
  for (long long i = 0; i < std::max(1LL, nx); ++i) {
    for (long long j = 0; j < std::max(1LL, ny); ++j) {
      bc.balls.push_back({{x0 + (i + 0.5) * sigma, y0 + (j + 0.5) * sigma}, r});
      bc.total_volume += std::pow(2 * r, s);
    }
  }
}

}  // namespace

HyperboloidCover hyperboloid_cover(const std::vector<double>& a, double delta, double s) {
  if (a.size() != 2) throw UnsupportedError("hyperboloid covers are implemented for d = 2 only");
  if (!(delta > 0 && delta <= 1)) throw DomainError("delta must lie in (0,1]");
  if (!(s > 1 && s < 2)) throw DomainError("s must lie in (d-1, d)");
  for (double x : a) {
    if (x < 0 || x > 1) throw DomainError("center must lie in [0,1]^2");
  }
  HyperboloidCover hc;
  hc.a = {a[0], a[1]};
  hc.delta = delta;
  hc.s = s;
  // annuli 2^-(k+1) ≤ |x1-a1| ≤ 2^-k for k ≤ K, core |x1-a1| < 2^-(K+1) with 2^-(K+1) ≥ δ
  const int K = static_cast<int>(std::floor(std::log2(1 / delta) + 1e-12)) - 1;
  for (int k = 0; k <= K; ++k) {
    const double w = std::ldexp(1.0, -(k + 1));
    const double half = delta * std::ldexp(1.0, k + 1);
    const double y0 = std::max(0.0, a[1] - half), y1 = std::min(1.0, a[1] + half);
    const double sigma = std::min(w, y1 - y0);
    tile(std::min(1.0, a[0] + w), std::min(1.0, a[0] + 2 * w), y0, y1, sigma, s, hc.cover);
    tile(std::max(0.0, a[0] - 2 * w), std::max(0.0, a[0] - w), y0, y1, sigma, s, hc.cover);
  }
  const double core = std::ldexp(1.0, -(K + 1));
  tile(std::max(0.0, a[0] - core), std::min(1.0, a[0] + core), 0, 1, std::min(core, 1.0), s,
       hc.cover);
  hc.cover.ball_count = static_cast<double>(hc.cover.balls.size());
  hc.constant = hc.cover.total_volume / std::pow(delta, s - 1);
  hc.min_diameter = std::numeric_limits<double>::infinity();
  for (const auto& b : hc.cover.balls) hc.min_diameter = std::min(hc.min_diameter, b.diameter());
  return hc;
}

CoverageCheck check_hyperboloid_coverage(const HyperboloidCover& hc, std::size_t samples,
                                         unsigned long long seed) {
  constexpr int G = 256;
  std::vector<std::vector<std::size_t>> grid(G * G);
  auto cell = [](double v) { return std::clamp(static_cast<int>(v * G), 0, G - 1); };
  const auto& balls = hc.cover.balls;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    const auto& b = balls[i];
    for (int gx = cell(b.center[0] - b.radius); gx <= cell(b.center[0] + b.radius); ++gx) {
      for (int gy = cell(b.center[1] - b.radius); gy <= cell(b.center[1] + b.radius); ++gy) {
        grid[gx * G + gy].push_back(i);
      }
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CoverageCheck out;
  while (out.samples < samples) {
    const double x = u(rng);
    const double dx = std::abs(x - hc.a[0]);
    const double half = dx > 0 ? hc.delta / dx : 1.0;
    const double y0 = std::max(0.0, hc.a[1] - half), y1 = std::min(1.0, hc.a[1] + half);
    const double y = y0 + (y1 - y0) * u(rng);
    if (!in_hyperboloid(hc.a, hc.delta, x, y)) continue;
    ++out.samples;
    bool covered = false;
    for (std::size_t i : grid[cell(x) * G + cell(y)]) {
      const auto& b = balls[i];
      if (std::hypot(x - b.center[0], y - b.center[1]) <= b.radius) {
        covered = true;
        break;
      }
    }
    if (!covered) ++out.escapes;
  }
  return out;
}

SlopeFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  SlopeFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

}  // namespace betashrink
