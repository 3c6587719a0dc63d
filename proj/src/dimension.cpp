#include "betashrink/dimension.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "betashrink/errors.hpp"

namespace betashrink {

namespace {

double parse_double(const std::string& s, const std::string& ctx) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("cannot parse dimension function '" + ctx + "'");
  }
  if (pos != s.size()) throw ParseError("cannot parse dimension function '" + ctx + "'");
  return v;
}

std::string unparen(const std::string& s) {
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') return s.substr(1, s.size() - 2);
  return s;
}

// log(f/g) at r = e^-L is -ds·L - dp·log L
double log_ratio(double ds, double dp, double L) { return -ds * L - dp * std::log(L); }

// x < y with (f/g)(y) > (f/g)(x), searched on a geometric grid of L = -log r
std::optional<OrderWitness> find_violation(double ds, double dp) {
  double prev_L = 1.0;
  for (int k = 1; k <= 4000; ++k) {
    const double L = std::pow(10.0, k * 0.002);  // L up to 1e8
    // y has the smaller L
    if (log_ratio(ds, dp, prev_L) > log_ratio(ds, dp, L) + 1e-12) {
      return OrderWitness{std::exp(-L), std::exp(-prev_L)};
    }
    prev_L = L;
  }
  return std::nullopt;
}

}  // namespace

DimensionFunction DimensionFunction::parse(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  }
  DimensionFunction f{0, 0, 1};
  bool seen_r = false;
  std::size_t start = 0;
  while (start <= t.size()) {
    std::size_t star = t.find('*', start);
    std::string factor = t.substr(start, star == std::string::npos ? std::string::npos : star - start);
    if (factor.empty()) throw ParseError("cannot parse dimension function '" + text + "'");
    if (factor == "r") {
      f.s += 1;
      seen_r = true;
    } else if (factor.rfind("r^", 0) == 0) {
      f.s += parse_double(unparen(factor.substr(2)), text);
      seen_r = true;
    } else if (factor.rfind("log^", 0) == 0) {
      f.p -= parse_double(unparen(factor.substr(4)), text);
    } else {
      f.scale *= parse_double(factor, text);
    }
    if (star == std::string::npos) break;
    start = star + 1;
  }
  if (!seen_r) throw ParseError("dimension function needs an r^S factor: '" + text + "'");
  f.validate();
  return f;
}

void DimensionFunction::validate() const {
  if (!(scale > 0)) throw DomainError("dimension function scale must be positive");
  // d log f / d log r = s + p/L with L = -log r >= 1; f(0+) = 0
  if (s < 0 || s + p < 0 || (s == 0 && !(p > 0))) {
    throw DomainError("dimension function must be nondecreasing");
  }
}

double DimensionFunction::eval(double r) const {
  if (!(r > 0) || r > std::exp(-1.0)) {
    throw DomainError("dimension function evaluated outside (0, e^-1]");
  }
  return scale * std::pow(r, s) * std::pow(-std::log(r), -p);
}

double DimensionFunction::log_eval(double log_r) const {
  if (log_r > kDomainLogCap + 1e-12) {
    throw DomainError("dimension function evaluated outside (0, e^-1]");
  }
  return std::log(scale) + s * log_r - p * std::log(-log_r);
}

std::string DimensionFunction::describe() const {
  std::ostringstream os;
  if (scale != 1) os << scale << '*';
  os << "r^" << s;
  if (p != 0) os << "*log^" << -p;
  return os.str();
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::precsim: return "precsim";
    case Relation::strict: return "strict";
    case Relation::equivalent: return "equivalent";
    case Relation::reverse: return "reverse";
    case Relation::reverse_strict: return "reverse_strict";
    case Relation::incomparable: return "incomparable";
  }
  return "?";
}

bool precsim(const DimensionFunction& f, const DimensionFunction& g) {
  const double ds = f.s - g.s;
  const double dp = f.p - g.p;
  return (ds < 0 && ds + dp <= 0) || (ds == 0 && dp <= 0);
}

OrderVerdict compare(const DimensionFunction& f, const DimensionFunction& g) {
  const double ds = f.s - g.s;
  const double dp = f.p - g.p;
  const bool fg = precsim(f, g);
  const bool gf = precsim(g, f);
  OrderVerdict v;
  if (fg && gf) {
    v.relation = Relation::equivalent;
  } else if (fg) {
    v.relation = (ds < 0 || dp < 0) ? Relation::strict : Relation::precsim;
  } else if (gf) {
    v.relation = (ds > 0 || dp > 0) ? Relation::reverse_strict : Relation::reverse;
  } else {
    v.relation = Relation::incomparable;
    v.witness = find_violation(ds, dp);
    v.reverse_witness = find_violation(-ds, -dp);
  }
  return v;
}

OrderVerdict compare_monomial(const DimensionFunction& f, int k) {
  return compare(f, DimensionFunction::power(static_cast<double>(k)));
}

bool is_below(Relation r) {
  return r == Relation::precsim || r == Relation::strict || r == Relation::equivalent;
}

bool is_above(Relation r) {
  return r == Relation::reverse || r == Relation::reverse_strict || r == Relation::equivalent;
}

}  // namespace betashrink
