#pragma once

#include <oustat/bigint.hpp>

#include <complex>
#include <vector>

namespace oustat {

/* Modified Bessel function of the first kind, I_nu(x), for nu >= -1/2 and
 * x >= 0.  Small arguments (x <= 10) use the defining power series; larger
 * arguments use the large-x expansion, which terminates (is exact) for
 * half-integer nu -- the only orders the large-x regime is used for here.
 * scaled returns e^{-x} I_nu(x).
 */
double bessel_i(double nu, double x, bool scaled = false);

// The two branches individually, for overlap consistency checks.
double bessel_i_series(double nu, double x, bool scaled = false);
double bessel_i_asymptotic(double nu, double x, bool scaled = false);

/* I_nu(z) / z^nu as a function of y = z^2, which is entire in y: the
 * explicit form of the endpoint cancellation in the moment integrals.
 * scaled multiplies by e^{-sqrt(y)}.
 */
double bessel_i_power_ratio(double nu, double y, bool scaled = false);

// Euler number E_r as an exact integer; 0 for odd r.
bigint euler_number(unsigned r);

// Euler polynomial E_r(x) from the expansion around x = 1/2.
double euler_poly(unsigned r, double x);

// E_{2b}(1/2) = E_{2b} / 2^{2b} as an exact rational.
mpq_class euler_poly_half(unsigned b);

// kappa(a, b) = (2 pi)^{-a} * (2(a+b))! / (a! (2b)!) * E_{2b}(1/2).
double kappa(unsigned a, unsigned b);

/* C_j(w) = ((1/(2 pi i)) d/dw)^j cot(pi w).  Each step maps a polynomial
 * P(c) in c = cot(pi w) to (i/2)(1 + c^2) P'(c), so C_j is a polynomial
 * in cot(pi w) with Gaussian-integer coefficients.
 */
std::complex<double> cot_deriv(unsigned j, double w);

// f_v(u; z) = e^{pi v u^2 / (2z)} / (2 cosh(pi u / (2z))) and the
// coefficients b_j(v; z) = sum_{a+b=j} v^a kappa(a,b) z^{-a-2b} of its
// Taylor expansion in u (with the (2 pi i u)^{2j} / (2j)! normalization
// and an extra (-1/4)^j; see the expansion test).
std::complex<double> gauss_sech(double u, std::complex<double> z, double v);
std::complex<double> gauss_sech_b(unsigned j, double v, std::complex<double> z);

// CDF of the hyperbolic secant law: (2/pi) arctan(e^{pi x / 2}).
double sech_cdf(double x);

// e^{-e^{-v}/2}: the doubled-scale Gumbel that shows up as the peak limit.
double gumbel_half_cdf(double v);

// 1 - e^{-x} for x >= 0, else 0.
double exp_unit_cdf(double x);

// CDF of the limiting largest side part: 2 e^{-e^{-w}/4} - e^{-e^{-w}/2}.
double side_largest_cdf(double w);

/* Probability that a free Boltzmann sample at size n has no part above
 * the peak-scale threshold: the product of (1 - e^{-(2k-1)/(B sqrt n)})
 * over odd 2k-1 > B sqrt n (v + log(B sqrt n)), truncated once factors
 * are within 1e-16 of 1.  Converges to e^{-e^{-v}/2}.
 */
double prob_no_large_parts(double n, double v);

// An evaluable limit CDF for the verification suite.
struct LimitLaw {
  enum class Kind { SechUnit, GumbelHalf, ExpUnit, GeometricCB, SideLargest };
  Kind kind = Kind::SechUnit;
  double c = 0.0;  // rate constant for GeometricCB
  double cdf(double x) const;
  // GeometricCB is supported on integers; everything else is continuous.
  bool discrete() const { return kind == Kind::GeometricCB; }
};

// Gauss-Legendre nodes and weights on [-1, 1].
struct Quadrature {
  std::vector<double> x;
  std::vector<double> w;
};
Quadrature gauss_legendre(unsigned nodes);

// Regularized lower incomplete gamma P(a, x), and the chi-square CDF
// built on it.
double gamma_p(double a, double x);
double chi_square_cdf(double x, double dof);

}  // namespace oustat
