#include "betashrink/beta_core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <sstream>

#include "betashrink/errors.hpp"
#include "json.hpp"

namespace betashrink {

namespace {

std::string normalize(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    std::stod(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size();
}

Real parse_real(const std::string& s) {
  if (!is_number(s)) throw ParseError("cannot parse number '" + s + "'");
  return Real(s);
}

double eps_bits(int bits) { return std::ldexp(1.0, -bits); }

}  // namespace

Beta Beta::parse(const std::string& text, int bits) {
  PrecisionScope scope(bits);
  const std::string t = normalize(text);
  Real v;
  if (t == "phi" || t == "golden") {
    v = (Real(1) + sqrt(Real(5))) / 2;
  } else if (t == "pi") {
    mpfr_const_pi(v.backend().data(), MPFR_RNDN);
  } else if (t == "e") {
    v = exp(Real(1));
  } else if (t.rfind("sqrt(", 0) == 0 && t.back() == ')') {
    v = sqrt(parse_real(t.substr(5, t.size() - 6)));
  } else if (auto slash = t.find('/'); slash != std::string::npos) {
    Real den = parse_real(t.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + text + "'");
    v = parse_real(t.substr(0, slash)) / den;
  } else {
    v = parse_real(t);
  }
  if (!(v > 1)) throw DomainError("beta must exceed 1, got '" + text + "'");
  Beta b;
  b.value = v;
  b.is_integer = (floor(v) == v);
  b.precision_bits = bits;
  b.label = text;
  return b;
}

Beta Beta::from_integer(int k, int bits) {
  return parse(std::to_string(k), bits);
}

double Beta::log() const { return std::log(approx()); }

int Beta::max_digit() const {
  PrecisionScope scope(precision_bits);
  Real c = ceil(value);
  return c.convert_to<int>() - 1;
}

bool same_beta(const Beta& a, const Beta& b) { return a.value == b.value; }

void validate_betas(const BetaVector& betas) {
  if (betas.empty()) throw DomainError("at least one beta is required");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i].value > 1)) throw DomainError("betas must exceed 1");
    if (i > 0 && betas[i].value < betas[i - 1].value) {
      throw DomainError("betas must be nondecreasing");
    }
  }
}

bool all_integer(const BetaVector& betas) {
  return std::all_of(betas.begin(), betas.end(), [](const Beta& b) { return b.is_integer; });
}

BetaShift::BetaShift(Beta beta) : beta_(std::move(beta)) {
  PrecisionScope scope(beta_.precision_bits);
  image_.emplace_back(1);
  error_.push_back(0.0);
  inv_pow_.emplace_back(1);
}

void BetaShift::extend_states(int k) const {
  PrecisionScope scope(beta_.precision_bits);
  const double b = beta_.approx();
  const double unit = eps_bits(beta_.precision_bits);
  while (static_cast<int>(children_.size()) <= k) {
    const std::size_t s = children_.size();
    if (s >= image_.size()) {
      throw std::logic_error("orbit state " + std::to_string(s) + " is unreachable");
    }
    Real y = beta_.value * image_[s];
    const double err = b * error_[s] + 4 * b * unit;
    if (err > 1e-6) {
      throw IndeterminateError("orbit of 1 lost precision at step " + std::to_string(s) +
                               "; raise precision_bits");
    }
    Real m = round(y);
    const double dist = to_double(abs(y - m));
    if (dist <= err + 16 * b * unit) {
      children_.push_back(m.convert_to<int>());
      top_next_.push_back(0);
    } else {
      Real c = ceil(y);
      children_.push_back(c.convert_to<int>());
      top_next_.push_back(static_cast<int>(s) + 1);
      image_.push_back(Real(y - (c - 1)));
      error_.push_back(err);
    }
  }
}

void BetaShift::extend_powers(int n) const {
  PrecisionScope scope(beta_.precision_bits);
  while (static_cast<int>(inv_pow_.size()) <= n) {
    inv_pow_.push_back(Real(inv_pow_.back() / beta_.value));
  }
}

int BetaShift::children(int state) const {
  extend_states(state);
  return children_[state];
}

int BetaShift::top_next(int state) const {
  extend_states(state);
  return top_next_[state];
}

int BetaShift::next_state(int state, int digit) const {
  const int c = children(state);
  if (digit < 0 || digit >= c) return -1;
  return digit == c - 1 ? top_next_[state] : 0;
}

const Real& BetaShift::image(int state) const {
  if (state >= static_cast<int>(image_.size())) extend_states(state);
  return image_.at(state);
}

double BetaShift::image_error(int state) const {
  image(state);
  return error_.at(state);
}

const Real& BetaShift::inv_power(int n) const {
  extend_powers(n);
  return inv_pow_[n];
}

Word beta_digits(const Real& x, const Beta& beta, int n) {
  if (n < 1) throw DomainError("digit count must be positive");
  if (x < 0 || x >= 1) throw DomainError("beta_digits requires x in [0,1)");
  PrecisionScope scope(beta.precision_bits);
  const double b = beta.approx();
  const int top = beta.max_digit();
  double tol = std::ldexp(1.0, -beta.precision_bits + 8);
  Real y = x;
  Word out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    Real t = beta.value * y;
    Real m = round(t);
    int d;
    if (abs(t - m) <= tol) {
      d = m.convert_to<int>();
      y = 0;
    } else {
      Real f = floor(t);
      d = f.convert_to<int>();
      y = t - f;
    }
    if (d > top) d = top;  // t = ceil(β) - tiny, already excluded by x < 1
    out.push_back(static_cast<std::uint8_t>(d));
    tol *= b;
    if (tol > 1e-6) {
      throw IndeterminateError("digit extraction lost precision; raise precision_bits");
    }
  }
  return out;
}

Word beta_digits(double x, const Beta& beta, int n) {
  PrecisionScope scope(beta.precision_bits);
  return beta_digits(Real(x), beta, n);
}

Word quasi_greedy_one(const Beta& beta, int n) {
  if (n < 1) throw DomainError("length must be positive");
  BetaShift shift(beta);
  Word out;
  int state = 0;
  for (int k = 0; k < n; ++k) {
    out.push_back(static_cast<std::uint8_t>(shift.children(state) - 1));
    state = shift.top_next(state);
  }
  return out;
}

namespace {

Cylinder finish_cylinder(const BetaShift& shift, Word word, Real left, int state) {
  const int n = static_cast<int>(word.size());
  Cylinder c;
  c.word = std::move(word);
  c.left = std::move(left);
  c.full_length = shift.inv_power(n);
  c.length = c.full_length * shift.image(state);
  c.state = state;
  c.precision_bits = shift.beta().precision_bits;
  const double unit = eps_bits(shift.beta().precision_bits);
  c.length_error = to_double(c.full_length) * shift.image_error(state) + 4 * unit * (n + 1);
  c.is_full = is_full(c);
  return c;
}

}  // namespace

std::optional<Cylinder> make_cylinder(const BetaShift& shift, const Word& word) {
  PrecisionScope scope(shift.beta().precision_bits);
  int state = 0;
  Real left = 0;
  for (std::size_t k = 0; k < word.size(); ++k) {
    const int next = shift.next_state(state, word[k]);
    if (next < 0) return std::nullopt;
    left += word[k] * shift.inv_power(static_cast<int>(k) + 1);
    state = next;
  }
  return finish_cylinder(shift, word, left, state);
}

bool is_full(const Cylinder& cyl) {
  const double diff = to_double(abs(cyl.length - cyl.full_length));
  if (diff <= cyl.length_error) return true;
  if (cyl.length_error < std::ldexp(to_double(cyl.full_length), -20)) return false;
  throw IndeterminateError("cylinder length error too large to decide fullness");
}

std::vector<CylinderCounts> count_cylinders(const Beta& beta, int n) {
  if (n < 1) throw DomainError("level must be positive");
  BetaShift shift(beta);
  std::vector<std::uint64_t> cnt(1, 1);
  std::vector<CylinderCounts> out;
  for (int k = 1; k <= n; ++k) {
    std::vector<std::uint64_t> next(cnt.size() + 1, 0);
    for (std::size_t s = 0; s < cnt.size(); ++s) {
      if (cnt[s] == 0) continue;
      const std::uint64_t c = static_cast<std::uint64_t>(shift.children(static_cast<int>(s)));
      std::uint64_t bulk;
      if (__builtin_mul_overflow(cnt[s], c - 1, &bulk) ||
          __builtin_add_overflow(next[0], bulk, &next[0])) {
        throw ResourceError("cylinder count overflows 64 bits");
      }
      const int t = shift.top_next(static_cast<int>(s));
      if (__builtin_add_overflow(next[t], cnt[s], &next[t])) {
        throw ResourceError("cylinder count overflows 64 bits");
      }
    }
    while (next.size() > 1 && next.back() == 0) next.pop_back();
    cnt = std::move(next);
    CylinderCounts cc;
    cc.n = k;
    cc.full = cnt[0];
    for (auto v : cnt) {
      if (__builtin_add_overflow(cc.total, v, &cc.total)) {
        throw ResourceError("cylinder count overflows 64 bits");
      }
    }
    out.push_back(cc);
  }
  return out;
}

std::vector<Cylinder> enumerate_cylinders(const Beta& beta, int n, std::size_t cap) {
  const auto counts = count_cylinders(beta, n);
  if (counts.back().total > cap) {
    throw ResourceError("enumeration of " + std::to_string(counts.back().total) +
                        " cylinders exceeds cap " + std::to_string(cap));
  }
  PrecisionScope scope(beta.precision_bits);
  BetaShift shift(beta);
  std::vector<Cylinder> out;
  out.reserve(counts.back().total);
  Word word;
  std::function<void(const Real&, int)> rec = [&](const Real& left, int state) {
    const int k = static_cast<int>(word.size());
    if (k == n) {
      out.push_back(finish_cylinder(shift, word, left, state));
      return;
    }
    const int c = shift.children(state);
    for (int d = 0; d < c; ++d) {
      word.push_back(static_cast<std::uint8_t>(d));
      Real child_left = left + d * shift.inv_power(k + 1);
      rec(child_left, shift.next_state(state, d));
      word.pop_back();
    }
  };
  rec(Real(0), 0);
  return out;
}

std::vector<Cylinder> enumerate_full(const Beta& beta, int n, const std::optional<Window>& window,
                                     std::size_t cap) {
  const auto counts = count_cylinders(beta, n);
  if (!window && counts.back().full > cap) {
    throw ResourceError("enumeration of " + std::to_string(counts.back().full) +
                        " full cylinders exceeds cap " + std::to_string(cap));
  }
  PrecisionScope scope(beta.precision_bits);
  if (window && (window->lo < 0 || window->hi > 1 || !(window->lo < window->hi))) {
    throw DomainError("window must be a nonempty sub-interval of [0,1)");
  }
  BetaShift shift(beta);
  const Real slack = Real(std::ldexp(1.0, -beta.precision_bits + 8));
  std::vector<Cylinder> out;
  Word word;
  std::function<void(const Real&, int)> rec = [&](const Real& left, int state) {
    const int k = static_cast<int>(word.size());
    if (window) {
      Real right = left + shift.inv_power(k) * shift.image(state);
      if (right <= window->lo + slack || left >= window->hi - slack) return;
    }
    if (k == n) {
      if (state != 0) return;
      if (window) {
        Real right = left + shift.inv_power(k);
        if (left < window->lo - slack || right > window->hi + slack) return;
      }
      if (out.size() >= cap) throw ResourceError("full-cylinder enumeration exceeds cap");
      out.push_back(finish_cylinder(shift, word, left, state));
      return;
    }
    const int c = shift.children(state);
    for (int d = 0; d < c; ++d) {
      word.push_back(static_cast<std::uint8_t>(d));
      Real child_left = left + d * shift.inv_power(k + 1);
      rec(child_left, shift.next_state(state, d));
      word.pop_back();
    }
  };
  rec(Real(0), 0);
  return out;
}

CoverageReport full_cover_check(const Beta& beta, int N, int depth) {
  if (N < 1 || depth < N) throw DomainError("full_cover_check requires 1 <= N <= depth");
  PrecisionScope scope(beta.precision_bits);
  BetaShift shift(beta);
  CoverageReport rep;
  rep.N = N;
  rep.depth = depth;
  // counts of surviving (not yet covered) cylinders per orbit state
  std::vector<long double> cnt(1, 1.0L);
  for (int k = 1; k <= depth; ++k) {
    std::vector<long double> next(cnt.size() + 1, 0.0L);
    for (std::size_t s = 0; s < cnt.size(); ++s) {
      if (cnt[s] == 0) continue;
      const int c = shift.children(static_cast<int>(s));
      next[0] += cnt[s] * (c - 1);
      next[shift.top_next(static_cast<int>(s))] += cnt[s];
    }
    if (k >= N) next[0] = 0;
    while (next.size() > 1 && next.back() == 0) next.pop_back();
    cnt = std::move(next);
    if (k >= N) {
      Real residual = 0;
      for (std::size_t s = 0; s < cnt.size(); ++s) {
        if (cnt[s] != 0) {
          residual += Real(static_cast<double>(cnt[s])) * shift.image(static_cast<int>(s));
        }
      }
      residual *= shift.inv_power(k);
      rep.residual_by_level.push_back(to_double(residual));
    }
  }
  rep.uncovered = rep.residual_by_level.back();
  rep.covered = 1.0 - rep.uncovered;
  rep.geometric_bound = std::pow(1.0 - 1.0 / beta.approx(), depth - N + 1);
  rep.within_geometric_bound = rep.uncovered <= rep.geometric_bound * (1 + 1e-12);
  return rep;
}

CountBounds count_bounds(const Beta& beta, int n) {
  PrecisionScope scope(beta.precision_bits);
  CountBounds cb;
  cb.renyi_lower = pow(beta.value, n);
  cb.renyi_upper = pow(beta.value, n + 1) / (beta.value - 1);
  if (beta.is_integer) {
    cb.li_lower = cb.renyi_lower;
    cb.li_is_exact = true;
  } else if (beta.value > 2) {
    cb.li_lower = (beta.value - 2) / (beta.value - 1) * cb.renyi_lower;
  } else {
    Real prod = 1;
    Real inv = 1 / beta.value;
    Real term = inv;
    const Real stop = Real(std::ldexp(1.0, -beta.precision_bits - 8));
    while (term > stop) {
      prod *= (1 - term);
      term *= inv;
    }
    cb.li_lower = prod * cb.renyi_lower;
  }
  return cb;
}

std::string word_string(const Word& w) {
  std::string s;
  for (auto d : w) s += std::to_string(d);
  return s;
}

std::string cylinders_to_csv(const std::vector<Cylinder>& cyls) {
  std::ostringstream os;
  os << "word;left;length;is_full\n";
  for (const auto& c : cyls) {
    os << word_string(c.word) << ';' << to_string(c.left, 30) << ';' << to_string(c.length, 30)
       << ';' << (c.is_full ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string cylinders_to_json(const std::vector<Cylinder>& cyls) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : cyls) {
    arr.push_back({{"word", word_string(c.word)},
                   {"left", to_string(c.left, 30)},
                   {"length", to_string(c.length, 30)},
                   {"length_error", c.length_error},
                   {"is_full", c.is_full}});
  }
  return arr.dump(2);
}

}  // namespace betashrink
