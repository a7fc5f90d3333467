#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>

namespace oustat {

// Exact integer arithmetic is delegated to GMP throughout; coefficient
// growth in the counting routines is exponential in sqrt(n), so fixed-width
// integers overflow long before the ranges we care about.
using bigint = mpz_class;

inline std::string to_string(const bigint& v) { return v.get_str(); }

// Exact binomial coefficient, 0 for k out of range.
inline bigint binomial(unsigned long n, unsigned long k) {
  if (k > n) return bigint(0);
  bigint r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// Round-to-nearest conversion to double; values beyond double range give inf.
inline double to_double(const bigint& v) { return v.get_d(); }

// Natural log of a positive bigint, usable far past double overflow.
inline double log_bigint(const bigint& v) {
  long exp2 = 0;
  const double d = mpz_get_d_2exp(&exp2, v.get_mpz_t());
  return std::log(d) + static_cast<double>(exp2) * 0.6931471805599453;
}

}  // namespace oustat
