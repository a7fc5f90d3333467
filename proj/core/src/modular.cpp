#include <oustat/modular.hpp>

#include <oustat/bigint.hpp>
#include <oustat/errors.hpp>
#include <oustat/exact.hpp>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace oustat {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

long long mod_reduce(long long x, long long m) {
  x %= m;
  return x < 0 ? x + m : x;
}

// e^{2 pi i tau r}: fractional q-powers on the tau branch.
cplx q_pow(cplx tau, double r) { return std::exp(2.0 * kPi * kI * tau * r); }

void require_upper(cplx tau, const char* who) {
  if (!(tau.imag() >= 0.05))
    throw resource_error(std::string(who) +
                         ": Im(tau) below 0.05, series tail would exceed 1e-14");
}

// Index bound M with |terms| < 1e-19 for all half-integers |m| >= M.
long theta_terms(cplx u, cplx tau) {
  const double y = tau.imag();
  const double uy = std::abs(u.imag());
  const double t0 = (uy + std::sqrt(uy * uy + 45.0 * y / kPi)) / y;
  const long m = static_cast<long>(t0) + 2;
  if (m > 20000)
    throw resource_error("eval_theta: truncation index exceeds 20000 terms");
  return m;
}

}  // namespace

long neg_inverse_mod(long h, long k) {
  if (k < 1) throw std::invalid_argument("neg_inverse_mod: k must be positive");
  if (k == 1) return 0;
  bigint a(static_cast<long>(mod_reduce(-static_cast<long long>(h), k))), m(k), r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::invalid_argument("neg_inverse_mod: h and k are not coprime");
  return static_cast<long>(r.get_si());
}

cplx Mobius::apply(cplx tau) const {
  return (static_cast<double>(a) * tau + static_cast<double>(b)) /
         (static_cast<double>(c) * tau + static_cast<double>(d));
}

namespace {

Mobius checked(long a, long b, long c, long d, const char* who) {
  Mobius g{a, b, c, d};
  if (g.det() != 1)
    throw std::runtime_error(std::string(who) + ": determinant is not 1");
  return g;
}

}  // namespace

Mobius frame_base(long h, long k) {
  const long al = neg_inverse_mod(h, k);
  const long long num = static_cast<long long>(h) * al + 1;
  if (num % k != 0)
    throw std::runtime_error("frame_base: divisibility failure");
  return checked(al, static_cast<long>(-(num / k)), k, -h, "frame_base");
}

Mobius frame_double_odd(long h, long k) {
  if (k % 2 == 0)
    throw std::invalid_argument("frame_double_odd: k must be odd");
  const long be = neg_inverse_mod(static_cast<long>((2LL * h) % k), k);
  const long long num = 2LL * h * be + 1;
  if (num % k != 0)
    throw std::runtime_error("frame_double_odd: divisibility failure");
  return checked(be, static_cast<long>(-(num / k)), k, -2 * h,
                 "frame_double_odd");
}

Mobius frame_double_even(long h, long k) {
  if (k % 2 != 0)
    throw std::invalid_argument("frame_double_even: k must be even");
  const long kk = k / 2;
  const long al = neg_inverse_mod(h, kk);
  const long long num = static_cast<long long>(h) * al + 1;
  if (num % kk != 0)
    throw std::runtime_error("frame_double_even: divisibility failure");
  return checked(al, static_cast<long>(-(num / kk)), kk, -h,
                 "frame_double_even");
}

cplx EtaMultiplier::value() const {
  return static_cast<double>(sign) *
         std::exp(kI * (kPi * static_cast<double>(exponent) / 12.0));
}

EtaMultiplier eta_multiplier_parts(const Mobius& g) {
  if (g.det() != 1)
    throw std::invalid_argument("eta_multiplier: matrix must have determinant 1");
  const long long a = g.a, b = g.b, c = g.c, d = g.d;
  EtaMultiplier m;
  if (c % 2 != 0) {
    bigint top(static_cast<long>(d)), bot(static_cast<long>(std::llabs(c)));
    m.sign = mpz_kronecker(top.get_mpz_t(), bot.get_mpz_t());
    m.exponent = static_cast<long>(
        mod_reduce((a + d) * c - b * d * (c * c - 1) - 3 * c, 24));
  } else {
    bigint top(static_cast<long>(c)), bot(static_cast<long>(d));
    m.sign = mpz_kronecker(top.get_mpz_t(), bot.get_mpz_t());
    m.exponent = static_cast<long>(
        mod_reduce(a * c * (1 - d * d) + d * (b - c + 3) - 3, 24));
  }
  if (m.sign == 0)
    throw std::invalid_argument("eta_multiplier: Kronecker symbol vanished");
  return m;
}

cplx eta_multiplier(const Mobius& g) { return eta_multiplier_parts(g).value(); }

cplx kloosterman_A(long k, long long n) {
  if (k < 1) throw std::invalid_argument("kloosterman_A: k must be positive");
  // Only e^{-pi i (24n - 1) h / 12k} depends on n, so 24n - 1 enters mod 24k.
  const long long r = mod_reduce(24 * n - 1, 24LL * k);
  cplx sum = 0.0;
  for (long h = 0; h < k; ++h) {
    if (std::gcd(h, k) != 1) continue;
    const long al = neg_inverse_mod(h, k);
    const EtaMultiplier m = eta_multiplier_parts(frame_base(h, k));
    long long num = 2LL * k * m.exponent - 2LL * r * h - 2LL * al;
    num = mod_reduce(num, 48LL * k);
    sum += static_cast<double>(m.sign) *
           std::exp(kI * (kPi * static_cast<double>(num) / (24.0 * k)));
  }
  return std::exp(kI * (kPi / 4.0)) * sum;
}

cplx kloosterman_K1(long k, long long n, long v) {
  if (k < 1 || k % 2 == 0)
    throw std::invalid_argument("kloosterman_K1: k must be odd and positive");
  if (v < 0 || v >= 2 * k)
    throw std::invalid_argument("kloosterman_K1: v out of range [0, 2k)");
  const long long r = mod_reduce(4 * n + 1, 4LL * k);
  cplx sum = 0.0;
  for (long h = 0; h < k; ++h) {
    if (std::gcd(h, k) != 1) continue;
    const long al = neg_inverse_mod(h, k);
    const long be = neg_inverse_mod(static_cast<long>((2LL * h) % k), k);
    const EtaMultiplier m1 = eta_multiplier_parts(frame_base(h, k));
    const EtaMultiplier m2 = eta_multiplier_parts(frame_double_odd(h, k));
    // chi(g1)^2 / chi(g2)^5: signs square away on top, survive below.
    const long long e = 2LL * m1.exponent - 5LL * m2.exponent;
    long long num = 2LL * k * e +
                    2LL * (12LL * v * (v + 1) * be + 5LL * be - 2LL * al) -
                    12LL * r * h;
    num = mod_reduce(num, 48LL * k);
    sum += static_cast<double>(m2.sign) *
           std::exp(kI * (kPi * static_cast<double>(num) / (24.0 * k)));
  }
  const double vsign = (v % 2 == 0) ? 1.0 : -1.0;
  return std::exp(kI * (kPi / 4.0)) * vsign * sum;
}

std::vector<cplx> kloosterman_K1_row(long k, long long n) {
  if (k < 1 || k % 2 == 0)
    throw std::invalid_argument("kloosterman_K1_row: k must be odd and positive");
  const long long r = mod_reduce(4 * n + 1, 4LL * k);
  std::vector<cplx> row(2 * k, cplx(0.0, 0.0));
  for (long h = 0; h < k; ++h) {
    if (std::gcd(h, k) != 1) continue;
    const long al = neg_inverse_mod(h, k);
    const long be = neg_inverse_mod(static_cast<long>((2LL * h) % k), k);
    const EtaMultiplier m1 = eta_multiplier_parts(frame_base(h, k));
    const EtaMultiplier m2 = eta_multiplier_parts(frame_double_odd(h, k));
    const long long e = 2LL * m1.exponent - 5LL * m2.exponent;
    const long long base = 2LL * k * e - 12LL * r * h;
    for (long v = 0; v < 2 * k; ++v) {
      long long num =
          base + 2LL * (12LL * v * (v + 1) * be + 5LL * be - 2LL * al);
      num = mod_reduce(num, 48LL * k);
      row[v] += static_cast<double>(m2.sign) *
                std::exp(kI * (kPi * static_cast<double>(num) / (24.0 * k)));
    }
  }
  const cplx front = std::exp(kI * (kPi / 4.0));
  for (long v = 0; v < 2 * k; ++v) row[v] *= (v % 2 == 0) ? front : -front;
  return row;
}

cplx kloosterman_K2(long k, long long n, long v) {
  if (k < 2 || k % 2 != 0)
    throw std::invalid_argument("kloosterman_K2: k must be even and positive");
  if (v < 0 || v >= k)
    throw std::invalid_argument("kloosterman_K2: v out of range [0, k)");
  const long long r = mod_reduce(4 * n + 1, 4LL * k);
  cplx sum = 0.0;
  for (long h = 0; h < k; ++h) {
    if (std::gcd(h, k) != 1) continue;
    const long al = neg_inverse_mod(h, k);
    const long ah = neg_inverse_mod(h, k / 2);
    const EtaMultiplier m1 = eta_multiplier_parts(frame_base(h, k));
    const EtaMultiplier m3 = eta_multiplier_parts(frame_double_even(h, k));
    const long long e = 2LL * m1.exponent - 5LL * m3.exponent;
    long long num = 2LL * k * e +
                    4LL * (12LL * v * (v + 1) * ah + 5LL * ah - al) -
                    12LL * r * h;
    num = mod_reduce(num, 48LL * k);
    sum += static_cast<double>(m3.sign) *
           std::exp(kI * (kPi * static_cast<double>(num) / (24.0 * k)));
  }
  const double vsign = (v % 2 == 0) ? 1.0 : -1.0;
  return std::exp(kI * (kPi / 4.0)) * vsign * sum;
}

cplx eval_eta(cplx tau) {
  require_upper(tau, "eval_eta");
  const cplx q = q_pow(tau, 1.0);
  const double mag = std::abs(q);
  cplx prod = 1.0, qn = 1.0;
  double magn = 1.0;
  for (int n = 1; n < 4000; ++n) {
    qn *= q;
    magn *= mag;
    prod *= 1.0 - qn;
    if (magn < 1e-19) break;
  }
  return q_pow(tau, 1.0 / 24.0) * prod;
}

cplx eval_theta(cplx u, cplx tau) {
  require_upper(tau, "eval_theta");
  const long m = theta_terms(u, tau);
  cplx acc = 0.0;
  for (long j = -m; j < m; ++j) {
    const double half = j + 0.5;
    cplx term =
        std::exp(kPi * kI * tau * (half * half) + 2.0 * kPi * kI * u * half);
    acc += (j & 1L) ? -term : term;
  }
  return kI * acc;
}

cplx eval_theta_product(cplx u, cplx tau) {
  require_upper(tau, "eval_theta_product");
  if (std::abs(u.imag()) >= tau.imag())
    throw resource_error(
        "eval_theta_product: needs |Im u| < Im tau for convergence");
  const cplx q = q_pow(tau, 1.0);
  const cplx zeta = std::exp(2.0 * kPi * kI * u);
  const cplx izeta = 1.0 / zeta;
  const double mag = std::abs(q);
  const double zm = std::max({1.0, std::abs(zeta), std::abs(izeta)});
  cplx prod = 1.0, qn = 1.0;
  double magn = 1.0;
  for (int n = 1; n < 8000; ++n) {
    qn *= q;
    magn *= mag;
    prod *= (1.0 - qn) * (1.0 - zeta * qn) * (1.0 - izeta * qn);
    if (magn * zm < 1e-19) break;
  }
  return -2.0 * q_pow(tau, 0.125) * std::sin(kPi * u) * prod;
}

cplx eval_psi(cplx u, cplx tau) {
  require_upper(tau, "eval_psi");
  const double s = (u / tau).imag();
  const long m = theta_terms(u, tau);
  cplx acc = 0.0;
  for (long j = -m; j < m; ++j) {
    const double half = j + 0.5;
    const double offset = half + s;
    if (std::abs(offset) < 1e-12)
      throw boundary_error(
          "eval_psi: sign factor sits on the boundary m + Im(u/tau) = 0");
    cplx term =
        std::exp(kPi * kI * tau * (half * half) + 2.0 * kPi * kI * u * half);
    if (offset < 0) term = -term;
    acc += (j & 1L) ? -term : term;
  }
  return kI * acc;
}

cplx eval_cstar(cplx u, cplx tau) {
  require_upper(tau, "eval_cstar");
  const cplx th = eval_theta(u, tau);
  if (std::abs(th) < 1e-250)
    throw std::domain_error("eval_cstar: theta vanishes at a lattice point");
  const cplx et = eval_eta(tau);
  return -2.0 * std::sin(kPi * u) * et * et / th;
}

cplx eval_ou_modular(cplx u, cplx tau) {
  if (std::abs(std::sin(kPi * u)) < 1e-14)
    throw std::domain_error(
        "eval_ou_modular: removable singularity at integer u; use the "
        "coefficient route instead");
  const cplx cs1 = eval_cstar(u, tau);
  const cplx cs2 = eval_cstar(u, 2.0 * tau);
  const cplx e1 = eval_eta(tau);
  const cplx e2 = eval_eta(2.0 * tau);
  const cplx tp = eval_theta(2.0 * u, 2.0 * tau) + eval_psi(2.0 * u, 2.0 * tau);
  return -0.5 * kI * q_pow(tau, -1.0 / 12.0) * (cs1 / e1) * (e2 / cs2) * tp;
}

cplx eval_ou_partial_theta(cplx u, cplx tau) {
  require_upper(tau, "eval_ou_partial_theta");
  const cplx q = q_pow(tau, 1.0);
  const cplx zeta = std::exp(2.0 * kPi * kI * u);
  const double magq = std::abs(q);
  const double magz = std::max(std::abs(zeta), 1.0);
  cplx acc = 0.0;
  for (long n = 0; n < 400; ++n) {
    const double w = 3.0 * n * n + 2.0 * n;
    if (std::pow(magq, w) * std::pow(magz, 3.0 * n + 2.0) < 1e-19 && n > 0)
      break;
    const cplx zp = std::pow(zeta, 3.0 * n + 1.0);
    const cplx term = zp * std::pow(q, w) *
                      (1.0 + zeta * std::pow(q, 2.0 * n + 1.0));
    acc += (n % 2 == 0) ? -term : term;
  }
  return acc;
}

double TransformReport::max_residual() const {
  double r = 0.0;
  for (const auto& c : checks) r = std::max(r, c.residual);
  return r;
}

bool TransformReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

namespace {

double rel_residual(cplx lhs, cplx rhs) {
  return std::abs(lhs - rhs) /
         std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

void push_check(TransformReport& rep, const std::string& identity,
                const std::string& params, cplx lhs, cplx rhs, double tol) {
  const double r = rel_residual(lhs, rhs);
  rep.checks.push_back({identity, params, r, r < tol});
}

std::string param_string(long h, long k, cplx z, double u) {
  std::ostringstream os;
  os << "h=" << h << " k=" << k << " z=" << z.real();
  if (z.imag() >= 0)
    os << "+" << z.imag() << "i";
  else
    os << z.imag() << "i";
  os << " u=" << u;
  return os.str();
}

}  // namespace

TransformReport verify_jacobi_transforms(long h, long k, cplx z, double u,
                                         double tol) {
  if (!(z.real() > 0))
    throw std::invalid_argument("verify_jacobi_transforms: need Re z > 0");
  if (k < 1 || h < 0 || h >= std::max(k, 1L) || std::gcd(h, k) != 1)
    throw std::invalid_argument(
        "verify_jacobi_transforms: (h, k) must be coprime with 0 <= h < k");
  TransformReport rep;
  const std::string ps = param_string(h, k, z, u);
  const double kk = static_cast<double>(k);
  const cplx tau = (static_cast<double>(h) + kI * z) / kk;
  const cplx iz = kI * z;
  const cplx root_iz = std::sqrt(iz);
  const cplx root_2iz = std::sqrt(2.0 * iz);
  const cplx uc(u, 0.0);

  // Identities of the theta function itself, independent of the frame.
  push_check(rep, "theta_shift", ps, eval_theta(uc + tau, tau),
             -std::exp(-kPi * kI * tau - 2.0 * kPi * kI * uc) *
                 eval_theta(uc, tau),
             tol);
  push_check(rep, "theta_odd", ps, eval_theta(-uc, tau),
             -eval_theta(uc, tau), tol);
  push_check(rep, "theta_product_route", ps, eval_theta(uc, tau),
             eval_theta_product(uc, tau), tol);

  // Base frame: tau -> tau1* = ([-h]_k^* + i/z)/k.
  const Mobius g1 = frame_base(h, k);
  const cplx chi1 = eta_multiplier(g1);
  const cplx tau1 = (static_cast<double>(g1.a) + kI / z) / kk;
  push_check(rep, "frame_base_maps_tau", ps, g1.apply(tau), tau1, tol);
  const cplx chi1_inv3 = 1.0 / (chi1 * chi1 * chi1);
  push_check(rep, "eta_base", ps, eval_eta(tau),
             (1.0 / chi1) / root_iz * eval_eta(tau1), tol);
  push_check(rep, "theta_base", ps, eval_theta(uc, tau),
             chi1_inv3 / root_iz * std::exp(-kPi * kk * uc * uc / z) *
                 eval_theta(uc / iz, tau1),
             tol);
  push_check(rep, "crank_base", ps, eval_cstar(uc, tau),
             std::sin(kPi * uc) / std::sin(kPi * uc / iz) * chi1 / root_iz *
                 std::exp(kPi * kk * uc * uc / z) * eval_cstar(uc / iz, tau1),
             tol);

  if (k % 2 != 0) {
    // Doubled variable, odd k: 2 tau -> tau2* = ([-2h]_k^* + i/2z)/k.
    const Mobius g2 = frame_double_odd(h, k);
    const cplx chi2 = eta_multiplier(g2);
    const cplx tau2 = (static_cast<double>(g2.a) + kI / (2.0 * z)) / kk;
    push_check(rep, "frame_double_odd_maps_2tau", ps, g2.apply(2.0 * tau),
               tau2, tol);
    push_check(rep, "eta_double_odd", ps, eval_eta(2.0 * tau),
               (1.0 / chi2) / root_2iz * eval_eta(tau2), tol);
    push_check(rep, "theta_double_odd", ps, eval_theta(2.0 * uc, 2.0 * tau),
               1.0 / (chi2 * chi2 * chi2) / root_2iz *
                   std::exp(-2.0 * kPi * kk * uc * uc / z) *
                   eval_theta(uc / iz, tau2),
               tol);
    push_check(rep, "crank_double_odd", ps, eval_cstar(uc, 2.0 * tau),
               std::sin(kPi * uc) / std::sin(kPi * uc / (2.0 * iz)) * chi2 /
                   root_2iz * std::exp(kPi * kk * uc * uc / (2.0 * z)) *
                   eval_cstar(uc / (2.0 * iz), tau2),
               tol);
  } else {
    // Doubled variable, even k: 2 tau -> 2 tau3*, tau3* = ([-h]_{k/2}^* + i/z)/k.
    const Mobius g3 = frame_double_even(h, k);
    const cplx chi3 = eta_multiplier(g3);
    const cplx tau3 = (static_cast<double>(neg_inverse_mod(h, k / 2)) +
                       kI / z) /
                      kk;
    push_check(rep, "frame_double_even_maps_2tau", ps, g3.apply(2.0 * tau),
               2.0 * tau3, tol);
    push_check(rep, "eta_double_even", ps, eval_eta(2.0 * tau),
               (1.0 / chi3) / root_iz * eval_eta(2.0 * tau3), tol);
    push_check(rep, "theta_double_even", ps, eval_theta(2.0 * uc, 2.0 * tau),
               1.0 / (chi3 * chi3 * chi3) / root_iz *
                   std::exp(-2.0 * kPi * kk * uc * uc / z) *
                   eval_theta(2.0 * uc / iz, 2.0 * tau3),
               tol);
    push_check(rep, "crank_double_even", ps, eval_cstar(uc, 2.0 * tau),
               std::sin(kPi * uc) / std::sin(kPi * uc / iz) * chi3 / root_iz *
                   std::exp(kPi * kk * uc * uc / (2.0 * z)) *
                   eval_cstar(uc / iz, 2.0 * tau3),
               tol);
  }
  return rep;
}

TransformReport verify_transform_suite(long k_max, double tol) {
  const cplx zs[] = {{1.0, 0.0}, {0.8, 0.3}, {1.2, -0.4}};
  const double us[] = {0.07, 0.13};
  TransformReport rep;
  for (long k = 1; k <= k_max; ++k) {
    for (long h = 0; h < k; ++h) {
      if (std::gcd(h, k) != 1) continue;
      for (const cplx& z : zs) {
        for (const double u : us) {
          TransformReport one = verify_jacobi_transforms(h, k, z, u, tol);
          rep.checks.insert(rep.checks.end(), one.checks.begin(),
                            one.checks.end());
        }
      }
    }
  }
  return rep;
}

DecompositionCheck verify_ou_decomposition(cplx u, cplx tau,
                                           std::size_t order, double tol) {
  // The decomposition identifies the two routes only inside the strip
  // |Im(u/tau)| < 1/2; refuse points where the comparison is meaningless.
  if (std::abs((u / tau).imag()) >= 0.5)
    throw std::invalid_argument(
        "verify_ou_decomposition: |Im(u/tau)| must be below 1/2");
  DecompositionCheck out;
  out.u = u;
  out.tau = tau;
  out.order = order;
  const cplx q = q_pow(tau, 1.0);

  // Exact route: the rank-refined counting series through q^order.
  const auto table = rank_distribution_table(order);
  cplx exact = 0.0;
  cplx qn = 1.0;
  for (std::size_t n = 1; n <= order; ++n) {
    qn *= q;
    cplx inner = 0.0;
    for (const auto& [rank, count] : table[n].counts)
      inner += to_double(count) *
               std::exp(2.0 * kPi * kI * u * static_cast<double>(rank));
    exact += inner * qn;
  }

  // Analytic route: the modular constituent plus its partial theta tail.
  const cplx analytic = q_pow(tau, -0.25) * eval_ou_modular(u, tau) +
                        eval_ou_partial_theta(u, tau);
  out.residual = rel_residual(exact, analytic);
  out.pass = out.residual < tol;
  return out;
}

}  // namespace oustat
