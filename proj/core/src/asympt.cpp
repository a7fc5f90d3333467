#include <oustat/asympt.hpp>

#include <oustat/errors.hpp>
#include <oustat/modular.hpp>
#include <oustat/special.hpp>

#include <quadmath.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oustat {

namespace {

constexpr double kPi = std::numbers::pi;

long long mod_reduce_ll(long long x, long long m) {
  x %= m;
  return x < 0 ? x + m : x;
}

// I_{3/2}(x) = sqrt(2/(pi x)) (cosh x - sinh x / x) in 128-bit floats: the
// rounding target p(n) quickly outgrows what double (or even the 80-bit
// extended format) can resolve to an absolute half unit.
__float128 bessel_i32_q(__float128 x) {
  const __float128 pi = acosq((__float128)-1.0);
  return sqrtq(2.0 / (pi * x)) * (coshq(x) - sinhq(x) / x);
}

__float128 rademacher_series_q(long long n, long k_max) {
  if (n < 1) throw std::invalid_argument("rademacher_p: n must be >= 1");
  if (k_max <= 0)
    k_max = static_cast<long>(std::ceil(std::sqrt(static_cast<double>(n)))) + 5;
  const __float128 pi = acosq((__float128)-1.0);
  const __float128 t = static_cast<__float128>(24 * n - 1);
  const __float128 arg = pi * sqrtq(t) / 6.0;
  if (static_cast<double>(arg) > 11000.0)
    throw resource_error("rademacher_p: series magnitude exceeds the float range");
  __float128 sum = 0;
  for (long k = 1; k <= k_max; ++k) {
    // Real part of the k-th Kloosterman sum with exact integer phases:
    // each term is sign * cos(pi (num + 6k) / 24k), the 6k folding in i^{1/2}.
    const long long r = mod_reduce_ll(24 * n - 1, 24LL * k);
    __float128 ak = 0;
    for (long h = 0; h < k; ++h) {
      if (std::gcd(h, k) != 1) continue;
      const long al = neg_inverse_mod(h, k);
      const EtaMultiplier m = eta_multiplier_parts(frame_base(h, k));
      long long num = 2LL * k * m.exponent - 2LL * r * h - 2LL * al;
      num = mod_reduce_ll(num, 48LL * k);
      ak += static_cast<__float128>(m.sign) *
            cosq(pi * static_cast<__float128>(num + 6LL * k) /
                 (24.0 * static_cast<__float128>(k)));
    }
    sum += ak / static_cast<__float128>(k) *
           bessel_i32_q(arg / static_cast<__float128>(k));
  }
  return 2.0 * pi / powq(t, 0.75) * sum;
}

}  // namespace

double rademacher_p(long long n, long k_max) {
  return static_cast<double>(rademacher_series_q(n, k_max));
}

bigint rademacher_p_rounded(long long n, long k_max) {
  __float128 v = roundq(rademacher_series_q(n, k_max));
  if (v < 0) throw std::runtime_error("rademacher_p_rounded: series went negative");
  // With a 113-bit mantissa an ulp at 2^106 is 2^-6, leaving the rounding
  // margin of half a unit intact; past that the guarantee thins out.
  const __float128 limit = ldexpq(1.0, 106);
  if (v >= limit)
    throw resource_error(
        "rademacher_p_rounded: value too large to round exactly in 128-bit floats");
  const __float128 twop62 = ldexpq(1.0, 62);
  const long hi = static_cast<long>(v / twop62);
  const long lo = static_cast<long>(v - static_cast<__float128>(hi) * twop62);
  bigint out(hi);
  out <<= 62;
  out += bigint(lo);
  return out;
}

double ou_main_term_log(double n) {
  return kPi * std::sqrt(2.0 * n / 3.0) - 3.25 * std::numbers::ln2 -
         0.25 * std::log(3.0) - 0.75 * std::log(n);
}

double ou_main_term(double n) { return std::exp(ou_main_term_log(n)); }

double moment_leading(double n, unsigned half_ell) {
  return std::pow(-6.0 * n, static_cast<double>(half_ell)) *
         euler_poly_half(half_ell).get_d() * ou_main_term(n);
}

MomentSeriesResult moment_asymptotic(long long n, unsigned ell, long k_max,
                                     QuadratureSpec quad) {
  if (n < 1) throw std::invalid_argument("moment_asymptotic: n must be >= 1");
  if (ell % 2 != 0)
    throw std::invalid_argument(
        "moment_asymptotic: odd moments vanish by rank symmetry; ell must be even");
  long kcap = static_cast<long>(std::floor(std::sqrt(static_cast<double>(n))));
  if (kcap < 1) kcap = 1;
  if (k_max > 0) kcap = std::min(kcap, k_max);
  const Quadrature gl = gauss_legendre(quad.nodes);
  const std::size_t nodes = gl.x.size();
  const double fn = 4.0 * n + 1.0;
  const double c1 = kPi * std::sqrt(fn / 6.0);
  const double two_sqrt3 = 2.0 * std::sqrt(3.0);
  std::complex<double> total = 0.0;
  std::vector<double> prof(nodes);
  for (long k = 1; k <= kcap; k += 2) {
    const auto krow = kloosterman_K1_row(k, n);
    const double ck = c1 / k;
    for (unsigned j = 0; 2 * j <= ell; ++j) {
      for (unsigned a = 0; a <= j; ++a) {
        const unsigned b = j - a;
        const double nu = a + 2.0 * b - 0.5;
        const double coef =
            binomial(ell, 2 * j).get_d() * std::pow(-0.25, static_cast<double>(j)) *
            kappa(a, b) * std::pow(6.0 * fn, 0.5 * a + b) *
            std::pow(static_cast<double>(k), static_cast<double>(a) - 2.0);
        /* Node profile w_i I_nu(z_i) / (1-x_i^2)^{nu/2}, all against the
         * dominant scale e^{c1}: with z = ck sqrt(1-x^2) the quotient is
         * ck^nu (I_nu(z)/z^nu), entire across the endpoints.
         */
        for (std::size_t i = 0; i < nodes; ++i) {
          const double om2 = 1.0 - gl.x[i] * gl.x[i];
          const double z = ck * std::sqrt(om2);
          prof[i] = gl.w[i] * std::pow(ck, nu) *
                    bessel_i_power_ratio(nu, ck * ck * om2, true) *
                    std::exp(z - c1);
        }
        for (long v = 0; v < 2 * k; ++v) {
          std::complex<double> integral = 0.0;
          for (std::size_t i = 0; i < nodes; ++i) {
            const double om =
                (gl.x[i] / two_sqrt3 - v - 0.5) / (2.0 * k);
            integral += prof[i] * cot_deriv(ell - 2 * j, om);
          }
          total += coef * krow[v] * integral;
        }
      }
    }
  }
  const double pref =
      kPi / (std::pow(2.0, 3.25) * std::pow(3.0, 0.75) * std::pow(fn, 0.25));
  const std::complex<double> val = pref * total;
  MomentSeriesResult out;
  out.imag_residue =
      std::abs(val.imag()) / std::max(std::abs(val.real()), 1e-300);
  out.imag_ok = out.imag_residue < 1e-6;
  out.log_value = c1 + std::log(std::abs(val.real()));
  out.value = std::copysign(std::exp(out.log_value), val.real());
  return out;
}

SaddleFunction saddle_function(long long n, long long m) {
  if (n < 1 || m < 0 || 2 * m + 1 > n)
    throw std::invalid_argument("saddle_function: need 1 <= 2m+1 <= n");
  const double bsn = (std::sqrt(6.0) / kPi) * std::sqrt(static_cast<double>(n));
  double sum_log = 0.0, sum1 = 0.0, sum2 = 0.0;
  for (long long k = 1; k <= m + 1; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double e = std::exp(-odd / bsn);
    sum_log += std::log1p(-e);
    sum1 += odd * e / (1.0 - e);
    sum2 += odd * odd * e / ((1.0 - e) * (1.0 - e));
  }
  SaddleFunction s;
  s.f0 = (static_cast<double>(n) - (2.0 * m + 1.0)) / bsn - 2.0 * sum_log;
  s.f1 = (2.0 * m + 1.0) - static_cast<double>(n) + 2.0 * sum1;
  s.f2 = 2.0 * sum2;
  return s;
}

double saddle_log_ou_m(long long n, long long m) {
  const SaddleFunction s = saddle_function(n, m);
  return s.f0 - 0.5 * std::log(2.0 * kPi * s.f2);
}

double saddle_ou_m(long long n, long long m) {
  return std::exp(saddle_log_ou_m(n, m));
}

double peak_density(long long n, long long m) {
  if (n < 1 || m < 0)
    throw std::invalid_argument("peak_density: need n >= 1 and m >= 0");
  const double bsn = (std::sqrt(6.0) / kPi) * std::sqrt(static_cast<double>(n));
  const double r = (2.0 * m + 1.0 - bsn * std::log(2.0 * bsn)) / bsn;
  return std::exp(-r - 0.5 * std::exp(-r)) / bsn;
}

}  // namespace oustat
