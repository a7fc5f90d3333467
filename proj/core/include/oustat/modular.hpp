#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace oustat {

using cplx = std::complex<double>;

// Unique x in [0, k) with (-h) x == 1 (mod k); k = 1 gives 0.
long neg_inverse_mod(long h, long k);

// An element of SL2(Z) acting on the upper half plane.
struct Mobius {
  long a = 1, b = 0, c = 0, d = 1;
  long det() const { return a * d - b * c; }
  cplx apply(cplx tau) const;
};

/* The matrices that move tau = (h + iz)/k, or its double, back to the
 * large-Im regime.  frame_base sends tau to ([-h]_k^* + i/z)/k.  For the
 * doubled variable 2 tau: frame_double_odd (k odd) reaches
 * ([-2h]_k^* + i/2z)/k and frame_double_even (k even) reaches
 * 2([-h]_{k/2}^* + i/z)/k.  All have determinant 1 by construction;
 * construction throws if the divisibility that guarantees integer
 * entries fails.
 */
Mobius frame_base(long h, long k);
Mobius frame_double_odd(long h, long k);
Mobius frame_double_even(long h, long k);

/* Multiplier of Dedekind's eta function: a Kronecker-symbol sign times a
 * 24th root of unity.  The root-of-unity exponent is kept as an exact
 * integer mod 24, so products and quotients of multipliers can be
 * combined without phase drift and exponentiated once at the end.
 */
struct EtaMultiplier {
  int sign = 1;        // +1 or -1
  long exponent = 0;   // value() = sign * e^{i pi exponent / 12}
  cplx value() const;
};
EtaMultiplier eta_multiplier_parts(const Mobius& g);
cplx eta_multiplier(const Mobius& g);

/* Kloosterman-type sums.  Each term's phase is assembled as an exact
 * integer numerator over 24k, reduced mod 48k, then exponentiated once.
 * kloosterman_A feeds the convergent partition series; K1 (odd k) and
 * K2 (even k) carry the extra quadratic phase in the residue v.
 */
cplx kloosterman_A(long k, long long n);
cplx kloosterman_K1(long k, long long n, long v);
cplx kloosterman_K2(long k, long long n, long v);

// row[v] = kloosterman_K1(k, n, v) for all v in [0, 2k), sharing the
// per-h multiplier work across the v loop.
std::vector<cplx> kloosterman_K1_row(long k, long long n);

/* Direct series / product evaluations in the upper half plane.  All of
 * them require Im(tau) >= 0.05 so that truncation tails stay below
 * 1e-14, and throw resource_error otherwise.  Fractional powers of q
 * are taken as e^{2 pi i tau r}, never via a branch cut in q.
 *
 *   eval_eta            q^{1/24} prod (1 - q^n)
 *   eval_theta          i sum_{m in Z+1/2} (-1)^{m-1/2} q^{m^2/2} zeta^m
 *   eval_theta_product  -2 q^{1/8} sin(pi u) prod (1-q^n)(1-zeta q^n)(1-q^n/zeta)
 *   eval_psi            the false-theta companion whose term signs follow
 *                       sgn(j + 1/2 + Im(u/tau)); throws boundary_error
 *                       within 1e-12 of a sign flip
 *   eval_cstar          q^{-1/24} times the crank generating function,
 *                       computed as -2 sin(pi u) eta(tau)^2 / theta(u; tau)
 */
cplx eval_eta(cplx tau);
cplx eval_theta(cplx u, cplx tau);
cplx eval_theta_product(cplx u, cplx tau);
cplx eval_psi(cplx u, cplx tau);
cplx eval_cstar(cplx u, cplx tau);

/* The pole-free modular constituent of the peak-marked generating
 * function and its partial-theta correction.  With q = e^{2 pi i tau},
 * zeta = e^{2 pi i u}, u real:
 *
 *   eval_ou_modular = -(i/2) q^{-1/12} (C*(u;tau)/eta(tau))
 *                     (eta(2tau)/C*(u;2tau)) (theta(2u;2tau)+psi(2u;2tau))
 *   eval_ou_partial_theta = sum_{n>=0} (-1)^{n+1} zeta^{3n+1} q^{3n^2+2n}
 *                           (1 + zeta q^{2n+1})
 *
 * and q^{-1/4} eval_ou_modular + eval_ou_partial_theta reproduces the
 * rank-refined counting series.  That identification holds on the strip
 * |Im(u/tau)| < 1/2: the sign factors inside psi change branch at the
 * boundary, and beyond it the sum theta + psi is a different analytic
 * piece.  Both functions stay evaluable outside the strip.
 */
cplx eval_ou_modular(cplx u, cplx tau);
cplx eval_ou_partial_theta(cplx u, cplx tau);

struct TransformCheck {
  std::string identity;
  std::string parameters;
  double residual = 0.0;
  bool pass = false;
};

struct TransformReport {
  std::vector<TransformCheck> checks;
  double max_residual() const;
  bool all_pass() const;
};

/* Checks the transformation laws at the frame (h, k): the eta and theta
 * laws under frame_base, the doubled-variable eta and theta laws under
 * the parity-appropriate frame, the crank transformations implied by
 * them, plus the elliptic shift, oddness, and the series-vs-product
 * route for theta.  z must have Re z > 0; residuals are
 * |lhs - rhs| / max(1, |lhs|, |rhs|) and pass below `tol`.
 */
TransformReport verify_jacobi_transforms(long h, long k, cplx z, double u,
                                         double tol = 1e-8);

// The whole grid: every coprime (h, k) with k <= k_max, z and u drawn
// from a fixed well-conditioned set.
TransformReport verify_transform_suite(long k_max = 6, double tol = 1e-8);

/* Compares q^{-1/4} eval_ou_modular + eval_ou_partial_theta against the
 * rank-refined series sum_{n<=order} sum_m c(m,n) zeta^m q^n from exact
 * enumeration.  u must be nonzero (the constituent has a removable 0/0
 * at u = 0; the u = 0 content is covered by a coefficient-level test
 * instead) and must satisfy |Im(u/tau)| < 1/2, where the recombination
 * is valid; points outside that strip are rejected.
 */
struct DecompositionCheck {
  cplx u, tau;
  std::size_t order = 0;
  double residual = 0.0;
  bool pass = false;
};
DecompositionCheck verify_ou_decomposition(cplx u, cplx tau,
                                           std::size_t order = 40,
                                           double tol = 1e-8);

}  // namespace oustat
