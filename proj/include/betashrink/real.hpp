#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <string>

namespace betashrink {

using Real = boost::multiprecision::mpfr_float;

constexpr int kDefaultPrecisionBits = 128;

inline unsigned digits10_for_bits(int bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

// Sets the default precision of newly created Real values for its lifetime.
class PrecisionScope {
 public:
  explicit PrecisionScope(int bits) : saved_(Real::default_precision()) {
    Real::default_precision(digits10_for_bits(bits));
  }
  ~PrecisionScope() { Real::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

inline double to_double(const Real& x) { return x.convert_to<double>(); }

inline std::string to_string(const Real& x, int digits = 20) {
  return x.str(digits, std::ios_base::fmtflags(0));
}

}  // namespace betashrink
