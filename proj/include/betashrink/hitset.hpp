#pragma once

#include <optional>
#include <string>
#include <vector>

#include "betashrink/approx.hpp"
#include "betashrink/beta_core.hpp"
#include "betashrink/intervals.hpp"

namespace betashrink {

class LipschitzMap {
 public:
  enum class Kind { constant, identity, affine, tabulated };

  static LipschitzMap constant(double a);
  static LipschitzMap identity();
  static LipschitzMap affine(double slope, double offset);
  // piecewise-linear through (xs, ys); xs strictly increasing and spanning [0,1]
  static LipschitzMap tabulated(std::vector<double> xs, std::vector<double> ys,
                                double lipschitz_bound);
  // "const:A", "identity", "affine:S,C"
  static LipschitzMap parse(const std::string& text);

  Kind kind() const { return kind_; }
  double lipschitz() const { return lipschitz_; }
  bool is_affine() const { return kind_ != Kind::tabulated; }
  // coefficients of h(x) = slope·x + offset for the affine kinds
  double slope() const { return slope_; }
  double offset() const { return offset_; }

  double operator()(double x) const;
  Real operator()(const Real& x) const;

  // throws DomainError unless h maps [0,1) into [0,1)
  void check_range() const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::constant;
  double slope_ = 0;
  double offset_ = 0;
  double lipschitz_ = 0;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

// z in the closed extension [x*, x* + β^-n] with β^n(z - x*) = h(z)
Real solve_anchor(const Cylinder& cyl, const LipschitzMap& h);

// root of β^n(z - x*) = h(z) + c on the real line
Real solve_shifted(const Cylinder& cyl, const LipschitzMap& h, double c);

struct HitEnclosure {
  Real center;
  Real outer_radius;
  std::optional<Real> inner_radius;  // present for full cylinders
  Interval<Real> inner_clipped{Real(0), Real(0)};
  Interval<Real> hit{Real(0), Real(0)};  // exact {x in cyl : |T^n x - h(x)| < r}
  bool boundary_anchor = false;
};

HitEnclosure hit_enclosures(const Cylinder& cyl, const LipschitzMap& h, double r);

// |T^n x - h(x)| for x inside cyl
double hit_residual(const Cylinder& cyl, const LipschitzMap& h, double x);

enum class RegionMode { weighted, multiplicative };
enum class CylinderSelection { all, full };

struct AxisEntry {
  Word word;
  Real left;
  Real length;
  bool full = false;
  Real z;
  Real anchor_value;  // h(z)
  bool boundary_anchor = false;
  bool has_inner = false;
  Interval<Real> inner{Real(0), Real(0)};
  Interval<Real> outer{Real(0), Real(0)};
  Interval<Real> hit{Real(0), Real(0)};
};

struct RegionAxis {
  Beta beta;
  LipschitzMap h;
  double radius = 0;  // ψ_i(n) in weighted mode
  Real beta_pow;      // β^n
  Real inner_radius;
  Real outer_radius;
  std::vector<AxisEntry> entries;  // sorted by left endpoint
};

struct HitRegion {
  int n = 0;
  RegionMode mode = RegionMode::weighted;
  CylinderSelection selection = CylinderSelection::all;
  std::vector<RegionAxis> axes;
  double psi = 0;  // multiplicative threshold ψ(n)
  double delta = 0;  // 2^d ψ(n)
  bool pullback_valid = false;  // min β_i^n ≥ 2 max L_i

  std::size_t dimension() const { return axes.size(); }
  // index of the entry whose cylinder contains x on the given axis, or -1
  long locate(std::size_t axis, double x) const;
  bool membership(const std::vector<double>& x) const;
  // ∏|G_i(x_i) - a_i| < δ with the extension maps of the containing cylinders
  bool pullback_membership(const std::vector<double>& x) const;
};

HitRegion build_hit_region(const BetaVector& betas, const std::vector<double>& rates,
                           const std::vector<LipschitzMap>& maps, int n, RegionMode mode,
                           CylinderSelection selection = CylinderSelection::all);

HitRegion build_weighted_region(const BetaVector& betas, const ApproxTuple& psi,
                                const std::vector<LipschitzMap>& maps, int n,
                                CylinderSelection selection = CylinderSelection::all);

HitRegion build_multiplicative_region(const BetaVector& betas, const ApproxFunction& psi,
                                      const std::vector<LipschitzMap>& maps, int n,
                                      CylinderSelection selection = CylinderSelection::all);

enum class AxisSet { hit, inner, outer };

std::vector<Interval<Real>> axis_intervals(const HitRegion& region, std::size_t axis,
                                           AxisSet which);
Real region_measure_1d(const HitRegion& region, std::size_t axis = 0,
                       AxisSet which = AxisSet::inner);

std::string region_to_json(const HitRegion& region);

}  // namespace betashrink
