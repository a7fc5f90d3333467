#pragma once

#include <oustat/bigint.hpp>

namespace oustat {

/* Convergent Kloosterman-Bessel series for the partition number p(n),
 * truncated at k_max (0 means ceil(sqrt n) + 5).  Evaluated internally
 * in 128-bit floats so the rounded value is exact well beyond the
 * 2^63 range; the rounded form returns an exact integer.
 */
double rademacher_p(long long n, long k_max = 0);
bigint rademacher_p_rounded(long long n, long k_max = 0);

// Leading-order count of odd unimodal sequences:
// e^{pi sqrt(2n/3)} / (2^{13/4} 3^{1/4} n^{3/4}), and its natural log.
double ou_main_term_log(double n);
double ou_main_term(double n);

// Leading-order even rank moment: (-6n)^l E_{2l}(1/2) times the main
// term approximates the 2l-th moment sum.  Positive for every l.
double moment_leading(double n, unsigned half_ell);

struct QuadratureSpec {
  unsigned nodes = 64;
};

struct MomentSeriesResult {
  double value = 0.0;       // exp(log_value) with the sign of the real part
  double log_value = 0.0;   // log |real part|; always finite in range
  double imag_residue = 0.0;  // |Im| / |Re| of the assembled sum
  bool imag_ok = false;       // imag_residue < 1e-6
};

/* Full Kloosterman-Bessel series for the ell-th rank moment sum over
 * odd unimodal sequences of weight n (ell even; odd moments vanish by
 * rank symmetry and are rejected).  Sums odd k up to k_max (0 means
 * all odd k <= sqrt n); the x-integral uses Gauss-Legendre quadrature
 * with the integrand rewritten through I_nu(z)/z^nu so the endpoint
 * cancellation at x = +-1 is explicit.  Everything is accumulated
 * against the dominant scale e^{pi sqrt((4n+1)/6)} to avoid overflow.
 * The result must be essentially real; the imaginary residue is
 * reported as a correctness probe on the multiplier arithmetic.
 */
MomentSeriesResult moment_asymptotic(long long n, unsigned ell,
                                     long k_max = 0, QuadratureSpec quad = {});

/* Saddle-point approximation e^{f(0)} / sqrt(2 pi f''(0)) to the number
 * of odd unimodal sequences of weight n with peak 2m+1, where f is the
 * log of the peak-m Boltzmann coefficient integrand at the real saddle
 * q = e^{-1/(B sqrt n)}, B = sqrt(6)/pi.
 */
struct SaddleFunction {
  double f0 = 0.0;  // f(0)
  double f1 = 0.0;  // f'(0)
  double f2 = 0.0;  // f''(0), positive
};
SaddleFunction saddle_function(long long n, long long m);
double saddle_log_ou_m(long long n, long long m);
double saddle_ou_m(long long n, long long m);

/* Limiting probability that the peak equals 2m+1:
 * (1/(B sqrt n)) e^{-r - e^{-r}/2} with
 * r = (2m+1 - B sqrt n log(2B sqrt n)) / (B sqrt n).
 * Summing over m >= 0 gives 1 in the limit (lattice spacing 2/(B sqrt n)).
 */
double peak_density(long long n, long long m);

}  // namespace oustat
