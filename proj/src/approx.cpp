#include "betashrink/approx.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <sstream>

#include "betashrink/errors.hpp"

namespace betashrink {

namespace {

using Poly = std::array<double, 3>;

std::string strip(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

bool wrapped(const std::string& s) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return false;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth == 0 && i + 1 < s.size()) return false;
  }
  return true;
}

std::string unwrap(std::string s) {
  while (wrapped(s)) s = s.substr(1, s.size() - 2);
  return s;
}

double number(const std::string& s, const std::string& ctx) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad number '" + s + "' in '" + ctx + "'");
  }
  if (pos != s.size()) throw ParseError("bad number '" + s + "' in '" + ctx + "'");
  return v;
}

// one monomial c·n^k, k ≤ 2, e.g. "-1.2n", "n^2", "3", "0.5*n"
void add_term(Poly& p, std::string t, double sign, const std::string& ctx) {
  t = unwrap(t);
  if (t.empty()) throw ParseError("empty term in '" + ctx + "'");
  const auto npos = t.find('n');
  if (npos == std::string::npos) {
    p[0] += sign * number(t, ctx);
    return;
  }
  std::string coef = t.substr(0, npos);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double c = coef.empty() ? 1.0 : (coef == "-" ? -1.0 : (coef == "+" ? 1.0 : number(coef, ctx)));
  std::string rest = t.substr(npos + 1);
  int k = 1;
  if (!rest.empty()) {
    if (rest.rfind("^", 0) != 0) throw ParseError("bad power in '" + ctx + "'");
    k = static_cast<int>(number(unwrap(rest.substr(1)), ctx));
  }
  if (k < 0 || k > 2) throw ParseError("only powers n^0..n^2 allowed in '" + ctx + "'");
  p[k] += sign * c;
}

Poly parse_poly(const std::string& text, const std::string& ctx) {
  std::string s = unwrap(text);
  Poly p{0, 0, 0};
  std::string cur;
  double sign = 1;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    const bool exponent_sign = i > 0 && (s[i - 1] == 'e' || s[i - 1] == 'E' || s[i - 1] == '^');
    if (depth == 0 && (c == '+' || c == '-') && !exponent_sign) {
      if (!cur.empty()) add_term(p, cur, sign, ctx);
      cur.clear();
      sign = (c == '-') ? -1 : 1;
      continue;
    }
    cur.push_back(c);
  }
  if (!cur.empty()) add_term(p, cur, sign, ctx);
  return p;
}

std::vector<std::pair<std::string, bool>> split_factors(const std::string& s) {
  std::vector<std::pair<std::string, bool>> out;
  std::string cur;
  bool divide = false;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && (c == '*' || c == '/')) {
      out.emplace_back(cur, divide);
      cur.clear();
      divide = (c == '/');
      continue;
    }
    cur.push_back(c);
  }
  out.emplace_back(cur, divide);
  return out;
}

}  // namespace

double ApproxFunction::log_value(double n) const {
  return a0 + a1 * n + a2 * n * n + (q != 0 ? q * std::log(n) : 0.0);
}

double ApproxFunction::value(double n) const { return std::exp(log_value(n)); }

ApproxFunction ApproxFunction::constant(double c) {
  if (!(c > 0)) throw DomainError("rate constant must be positive");
  ApproxFunction f;
  f.a0 = std::log(c);
  return f;
}

ApproxFunction ApproxFunction::parse(const std::string& text) {
  const std::string s = strip(text);
  if (s.empty()) throw ParseError("empty rate function");
  ApproxFunction f;
  for (auto [factor, divide] : split_factors(s)) {
    factor = unwrap(factor);
    const double sign = divide ? -1.0 : 1.0;
    if (factor.empty()) throw ParseError("empty factor in '" + text + "'");
    Poly p{0, 0, 0};
    if (factor.rfind("exp(", 0) == 0 && factor.back() == ')') {
      p = parse_poly(factor.substr(4, factor.size() - 5), text);
    } else if (auto caret = factor.find('^'); caret != std::string::npos) {
      const std::string base = unwrap(factor.substr(0, caret));
      const std::string expo = factor.substr(caret + 1);
      if (base == "n") {
        f.q += sign * number(unwrap(expo), text);
        continue;
      }
      const double b = base == "e" ? std::exp(1.0) : number(base, text);
      if (!(b > 0)) throw ParseError("base must be positive in '" + text + "'");
      p = parse_poly(expo, text);
      for (auto& c : p) c *= std::log(b);
    } else if (factor == "n") {
      f.q += sign;
      continue;
    } else {
      const double c = number(factor, text);
      if (!(c > 0)) throw ParseError("constant factor must be positive in '" + text + "'");
      p[0] = std::log(c);
    }
    f.a0 += sign * p[0];
    f.a1 += sign * p[1];
    f.a2 += sign * p[2];
  }
  return f;
}

long long ApproxFunction::validate() const {
  if (a2 > 0) throw DomainError("rate function must not grow like exp(n^2)");
  if (a2 == 0 && a1 > 0) throw DomainError("rate function must not grow exponentially");
  constexpr double kTol = 1e-12;
  auto L = [this](double n) { return log_value(n); };
  const double cap = 1e15;
  double nd = 1;
  if (a2 == 0 && a1 == 0) {
    if (q > 0) throw DomainError("rate function grows without bound");
    if (q == 0) {
      if (a0 > kTol) throw DomainError("constant rate exceeds 1");
      return 1;
    }
  } else if (q >= 0) {
    auto D = [this](double x) { return a1 + 2 * a2 * x + q / x; };
    double hi = 1;
    while (D(hi) > 0) {
      hi *= 2;
      if (hi > cap) throw DomainError("rate function exceeds 1 up to n = 1e15");
    }
    double lo = hi / 2 < 1 ? 1 : hi / 2;
    while (hi - lo > 1) {
      const double mid = std::floor((lo + hi) / 2);
      (D(mid) > 0 ? lo : hi) = mid;
    }
    nd = hi;
  } else if (a2 < 0) {
    nd = std::max(1.0, std::ceil(a1 / (-2 * a2)));
  }
  // L is nonincreasing on [nd, ∞)
  double hi = nd;
  while (L(hi) > kTol) {
    hi = hi * 2 + 1;
    if (hi > cap) throw DomainError("rate function exceeds 1 up to n = 1e15");
  }
  double lo = nd;
  if (L(lo) <= kTol) {
    hi = lo;
  } else {
    while (hi - lo > 1) {
      const double mid = std::floor((lo + hi) / 2);
      (L(mid) > kTol ? lo : hi) = mid;
    }
  }
  long long n0 = static_cast<long long>(hi);
  for (int steps = 0; n0 > 1 && steps < 1000000 && L(static_cast<double>(n0 - 1)) <= kTol; ++steps) {
    --n0;
  }
  return n0;
}

std::string ApproxFunction::describe() const {
  std::ostringstream os;
  os << "exp(" << a0 << " + " << a1 << "n + " << a2 << "n^2)*n^" << q;
  return os.str();
}

}  // namespace betashrink
