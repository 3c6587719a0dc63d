#include "betashrink/hitset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "betashrink/errors.hpp"
#include "json.hpp"

namespace betashrink {

LipschitzMap LipschitzMap::constant(double a) {
  LipschitzMap m;
  m.kind_ = Kind::constant;
  m.offset_ = a;
  return m;
}

LipschitzMap LipschitzMap::identity() {
  LipschitzMap m;
  m.kind_ = Kind::identity;
  m.slope_ = 1;
  m.lipschitz_ = 1;
  return m;
}

LipschitzMap LipschitzMap::affine(double slope, double offset) {
  LipschitzMap m;
  m.kind_ = Kind::affine;
  m.slope_ = slope;
  m.offset_ = offset;
  m.lipschitz_ = std::abs(slope);
  return m;
}

LipschitzMap LipschitzMap::tabulated(std::vector<double> xs, std::vector<double> ys,
                                     double lipschitz_bound) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw DomainError("tabulated map needs at least two matching samples");
  }
  if (xs.front() > 0 || xs.back() < 1) throw DomainError("tabulated samples must span [0,1]");
  double steepest = 0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!(xs[i] < xs[i + 1])) throw DomainError("tabulated abscissae must increase strictly");
    steepest = std::max(steepest, std::abs(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));
  }
  if (steepest > lipschitz_bound * (1 + 1e-12)) {
    throw DomainError("certified Lipschitz bound is below the interpolant's slope");
  }
  LipschitzMap m;
  m.kind_ = Kind::tabulated;
  m.xs_ = std::move(xs);
  m.ys_ = std::move(ys);
  m.lipschitz_ = lipschitz_bound;
  return m;
}

LipschitzMap LipschitzMap::parse(const std::string& text) {
  auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (head == "identity") return identity();
    if (head == "const" || head == "constant") return constant(std::stod(args));
    if (head == "affine") {
      auto comma = args.find(',');
      if (comma == std::string::npos) throw ParseError("affine map needs 'affine:S,C'");
      return affine(std::stod(args.substr(0, comma)), std::stod(args.substr(comma + 1)));
    }
  } catch (const std::invalid_argument&) {
    throw ParseError("cannot parse map '" + text + "'");
  }
  throw ParseError("unknown map '" + text + "'");
}

double LipschitzMap::operator()(double x) const {
  if (kind_ != Kind::tabulated) return slope_ * x + offset_;
  if (x <= xs_.front()) return ys_.front();
  if (x >= xs_.back()) return ys_.back();
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs_.begin());
  const double t = (x - xs_[j - 1]) / (xs_[j] - xs_[j - 1]);
  return ys_[j - 1] + t * (ys_[j] - ys_[j - 1]);
}

Real LipschitzMap::operator()(const Real& x) const {
  if (kind_ != Kind::tabulated) return Real(slope_ * x + offset_);
  if (x <= xs_.front()) return Real(ys_.front());
  if (x >= xs_.back()) return Real(ys_.back());
  const double xd = to_double(x);
  auto it = std::upper_bound(xs_.begin(), xs_.end(), xd);
  std::size_t j = static_cast<std::size_t>(it - xs_.begin());
  if (j == 0) j = 1;
  if (j >= xs_.size()) j = xs_.size() - 1;
  Real t = (x - xs_[j - 1]) / (xs_[j] - xs_[j - 1]);
  return Real(ys_[j - 1] + t * (ys_[j] - ys_[j - 1]));
}

void LipschitzMap::check_range() const {
  auto ok = [](double v) { return v >= 0 && v < 1; };
  if (kind_ == Kind::tabulated) {
    for (double y : ys_) {
      if (!ok(y)) throw DomainError("tabulated map values must lie in [0,1)");
    }
    return;
  }
  const double at0 = offset_;
  const double at1 = slope_ + offset_;
  if (!ok(at0) || !(at1 >= 0 && at1 <= 1)) {
    throw DomainError("map " + describe() + " does not send [0,1) into [0,1)");
  }
}

std::string LipschitzMap::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::constant: os << "const:" << offset_; break;
    case Kind::identity: os << "identity"; break;
    case Kind::affine: os << "affine:" << slope_ << ',' << offset_; break;
    case Kind::tabulated: os << "tabulated(" << xs_.size() << " samples, L=" << lipschitz_ << ')'; break;
  }
  return os.str();
}

namespace {

void require_expanding(const Cylinder& cyl, const LipschitzMap& h, const Real& bn) {
  if (!(Real(h.lipschitz()) < bn)) {
    throw PreconditionError("Lipschitz constant " + std::to_string(h.lipschitz()) +
                            " is not below beta^n = " + to_string(bn, 8));
  }
  (void)cyl;
}

}  // namespace

Real solve_shifted(const Cylinder& cyl, const LipschitzMap& h, double c) {
  PrecisionScope scope(cyl.precision_bits);
  Real bn = 1 / cyl.full_length;
  require_expanding(cyl, h, bn);
  if (h.is_affine()) {
    return Real((bn * cyl.left + h.offset() + c) / (bn - h.slope()));
  }
  const Real gap = bn - h.lipschitz();
  Real span = (1 + std::abs(c)) / gap;
  Real lo = cyl.left - span;
  Real hi = cyl.left + span;
  auto F = [&](const Real& x) { return Real(bn * (x - cyl.left) - h(x) - c); };
  const Real tol = Real(std::ldexp(1.0, -cyl.precision_bits / 2));
  for (int it = 0; it < 4 * cyl.precision_bits && hi - lo > tol; ++it) {
    Real mid = (lo + hi) / 2;
    if (F(mid) < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return Real((lo + hi) / 2);
}

Real solve_anchor(const Cylinder& cyl, const LipschitzMap& h) {
  PrecisionScope scope(cyl.precision_bits);
  Real z = solve_shifted(cyl, h, 0.0);
  // clamp bisection round-off into the closed extension
  Real right = cyl.left + cyl.full_length;
  if (z < cyl.left) z = cyl.left;
  if (z > right) z = right;
  return z;
}

HitEnclosure hit_enclosures(const Cylinder& cyl, const LipschitzMap& h, double r) {
  if (!(r > 0)) throw DomainError("target radius must be positive");
  PrecisionScope scope(cyl.precision_bits);
  HitEnclosure e;
  e.center = solve_anchor(cyl, h);
  Real bn = 1 / cyl.full_length;
  Real right_ext = cyl.left + cyl.full_length;
  const Real tol = Real(std::ldexp(1.0, -cyl.precision_bits / 2));
  e.boundary_anchor = abs(e.center - right_ext) <= tol;
  Real standard = 2 * r * cyl.full_length;
  Real slack = r / (bn - h.lipschitz());
  e.outer_radius = standard > slack ? standard : slack;
  Real cyl_right = cyl.left + cyl.length;
  if (cyl.is_full) {
    Real rho = r * cyl.full_length / 2;
    e.inner_radius = rho;
    Real lo = e.center - rho;
    Real hi = e.center + rho;
    e.inner_clipped = {lo > cyl.left ? lo : cyl.left, hi < cyl_right ? hi : cyl_right};
  }
  Real lo = solve_shifted(cyl, h, -r);
  Real hi = solve_shifted(cyl, h, r);
  e.hit = {lo > cyl.left ? lo : cyl.left, hi < cyl_right ? hi : cyl_right};
  return e;
}

double hit_residual(const Cylinder& cyl, const LipschitzMap& h, double x) {
  PrecisionScope scope(cyl.precision_bits);
  Real xr = x;
  Real v = (xr - cyl.left) / cyl.full_length - h(xr);
  return to_double(abs(v));
}

long HitRegion::locate(std::size_t axis, double x) const {
  const auto& es = axes.at(axis).entries;
  auto it = std::upper_bound(es.begin(), es.end(), x,
                             [](double v, const AxisEntry& e) { return v < to_double(e.left); });
  if (it == es.begin()) return -1;
  --it;
  // exact containment check at working precision
  PrecisionScope scope(axes[axis].beta.precision_bits);
  Real xr = x;
  if (xr >= it->left && xr < it->left + it->length) return static_cast<long>(it - es.begin());
  if (it != es.begin()) {
    auto prev = it - 1;
    if (xr >= prev->left && xr < prev->left + prev->length) {
      return static_cast<long>(prev - es.begin());
    }
  }
  if (it + 1 != es.end()) {
    auto next = it + 1;
    if (xr >= next->left && xr < next->left + next->length) {
      return static_cast<long>(next - es.begin());
    }
  }
  return -1;
}

bool HitRegion::membership(const std::vector<double>& x) const {
  if (x.size() != axes.size()) throw DomainError("point dimension mismatch");
  PrecisionScope scope(axes.front().beta.precision_bits);
  Real product = 1;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const long k = locate(i, x[i]);
    if (k < 0) return false;
    const auto& e = axes[i].entries[static_cast<std::size_t>(k)];
    Real xr = x[i];
    Real v = abs(axes[i].beta_pow * (xr - e.left) - axes[i].h(xr));
    if (mode == RegionMode::weighted) {
      if (!(v < axes[i].radius)) return false;
    } else {
      product *= v;
    }
  }
  return mode == RegionMode::weighted || product < psi;
}

bool HitRegion::pullback_membership(const std::vector<double>& x) const {
  if (mode != RegionMode::multiplicative) throw UnsupportedError("pullback needs multiplicative mode");
  if (x.size() != axes.size()) throw DomainError("point dimension mismatch");
  PrecisionScope scope(axes.front().beta.precision_bits);
  Real product = 1;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const long k = locate(i, x[i]);
    if (k < 0) return false;
    const auto& e = axes[i].entries[static_cast<std::size_t>(k)];
    Real xr = x[i];
    product *= abs(axes[i].beta_pow * (xr - e.left) - e.anchor_value);
  }
  return product < delta;
}

HitRegion build_hit_region(const BetaVector& betas, const std::vector<double>& rates,
                           const std::vector<LipschitzMap>& maps, int n, RegionMode mode,
                           CylinderSelection selection) {
  validate_betas(betas);
  const std::size_t d = betas.size();
  if (maps.size() != d) throw DomainError("one map per axis is required");
  if (mode == RegionMode::weighted && rates.size() != d) {
    throw DomainError("weighted mode needs one rate per axis");
  }
  if (mode == RegionMode::multiplicative && rates.size() != 1) {
    throw DomainError("multiplicative mode needs a scalar rate");
  }
  for (double r : rates) {
    if (!(r > 0)) throw DomainError("rates must be positive");
  }
  HitRegion region;
  region.n = n;
  region.mode = mode;
  region.selection = selection;
  double min_pow = INFINITY;
  double max_lip = 0;
  for (std::size_t i = 0; i < d; ++i) {
    maps[i].check_range();
    PrecisionScope scope(betas[i].precision_bits);
    RegionAxis axis;
    axis.beta = betas[i];
    axis.h = maps[i];
    axis.beta_pow = pow(betas[i].value, n);
    if (!(Real(maps[i].lipschitz()) < axis.beta_pow)) {
      throw PreconditionError("Lipschitz constant must be below beta_i^n on axis " +
                              std::to_string(i + 1));
    }
    min_pow = std::min(min_pow, to_double(axis.beta_pow));
    max_lip = std::max(max_lip, maps[i].lipschitz());
    const double r = mode == RegionMode::weighted ? rates[i] : 1.0;
    axis.radius = r;
    axis.inner_radius = r / axis.beta_pow / 2;
    auto cyls = selection == CylinderSelection::full ? enumerate_full(betas[i], n)
                                                     : enumerate_cylinders(betas[i], n);
    for (const auto& c : cyls) {
      AxisEntry e;
      e.word = c.word;
      e.left = c.left;
      e.length = c.length;
      e.full = c.is_full;
      HitEnclosure enc = hit_enclosures(c, maps[i], r);
      e.z = enc.center;
      e.anchor_value = maps[i](e.z);
      e.boundary_anchor = enc.boundary_anchor;
      e.has_inner = enc.inner_radius.has_value();
      e.inner = enc.inner_clipped;
      e.outer = {Real(e.z - enc.outer_radius), Real(e.z + enc.outer_radius)};
      e.hit = enc.hit;
      if (axis.outer_radius < enc.outer_radius) axis.outer_radius = enc.outer_radius;
      axis.entries.push_back(std::move(e));
    }
    region.axes.push_back(std::move(axis));
  }
  if (mode == RegionMode::multiplicative) {
    region.psi = rates[0];
    region.delta = std::ldexp(rates[0], static_cast<int>(d));
    region.pullback_valid = min_pow >= 2 * max_lip;
  }
  return region;
}

HitRegion build_weighted_region(const BetaVector& betas, const ApproxTuple& psi,
                                const std::vector<LipschitzMap>& maps, int n,
                                CylinderSelection selection) {
  if (psi.size() != betas.size()) throw DomainError("one rate function per axis is required");
  std::vector<double> rates;
  for (const auto& f : psi) rates.push_back(f.value(n));
  return build_hit_region(betas, rates, maps, n, RegionMode::weighted, selection);
}

HitRegion build_multiplicative_region(const BetaVector& betas, const ApproxFunction& psi,
                                      const std::vector<LipschitzMap>& maps, int n,
                                      CylinderSelection selection) {
  return build_hit_region(betas, {psi.value(n)}, maps, n, RegionMode::multiplicative, selection);
}

std::vector<Interval<Real>> axis_intervals(const HitRegion& region, std::size_t axis,
                                           AxisSet which) {
  if (region.mode != RegionMode::weighted) {
    throw UnsupportedError("axis interval lists exist only for weighted regions");
  }
  std::vector<Interval<Real>> out;
  for (const auto& e : region.axes.at(axis).entries) {
    switch (which) {
      case AxisSet::hit: out.push_back(e.hit); break;
      case AxisSet::inner:
        if (e.has_inner) out.push_back(e.inner);
        break;
      case AxisSet::outer: out.push_back(e.outer); break;
    }
  }
  return out;
}

Real region_measure_1d(const HitRegion& region, std::size_t axis, AxisSet which) {
  PrecisionScope scope(region.axes.at(axis).beta.precision_bits);
  return union_measure(axis_intervals(region, axis, which));
}

std::string region_to_json(const HitRegion& region) {
  nlohmann::json j;
  j["n"] = region.n;
  j["mode"] = region.mode == RegionMode::weighted ? "weighted" : "multiplicative";
  j["axes"] = nlohmann::json::array();
  for (const auto& a : region.axes) {
    nlohmann::json ja;
    ja["beta"] = a.beta.label;
    ja["map"] = a.h.describe();
    ja["inner_radius"] = to_double(a.inner_radius);
    ja["outer_radius"] = to_double(a.outer_radius);
    ja["entries"] = nlohmann::json::array();
    for (const auto& e : a.entries) {
      nlohmann::json je{{"word", word_string(e.word)},
                        {"center", to_string(e.z, 25)},
                        {"full", e.full},
                        {"boundary_anchor", e.boundary_anchor}};
      if (region.mode == RegionMode::multiplicative) je["anchor_value"] = to_string(e.anchor_value, 25);
      ja["entries"].push_back(je);
    }
    j["axes"].push_back(ja);
  }
  if (region.mode == RegionMode::multiplicative) {
    j["psi"] = region.psi;
    j["delta"] = region.delta;
  }
  return j.dump(2);
}

}  // namespace betashrink
