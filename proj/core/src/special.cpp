#include <oustat/special.hpp>

#include <oustat/errors.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oustat {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_half_integer(double nu) {
  const double t = 2.0 * nu;
  return std::abs(t - std::llround(t)) < 1e-9 &&
         std::llround(t) % 2 != 0;
}

}  // namespace

double bessel_i_series(double nu, double x, bool scaled) {
  if (nu < -0.5) throw std::invalid_argument("bessel_i: order below -1/2");
  if (x < 0) throw std::invalid_argument("bessel_i: negative argument");
  if (x == 0) {
    if (nu == 0) return 1.0;
    return nu > 0 ? 0.0 : HUGE_VAL;
  }
  double term = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
  double sum = term;
  const double x2 = 0.25 * x * x;
  for (unsigned m = 0; m < 2000; ++m) {
    term *= x2 / ((m + 1.0) * (m + 1.0 + nu));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return scaled ? sum * std::exp(-x) : sum;
}

double bessel_i_asymptotic(double nu, double x, bool scaled) {
  if (!is_half_integer(nu))
    throw std::invalid_argument(
        "bessel_i_asymptotic: only half-integer orders terminate exactly");
  if (x <= 0) throw std::invalid_argument("bessel_i_asymptotic: need x > 0");
  // a_k = prod_{j<=k} (4 nu^2 - (2j-1)^2) / (8^k k!); zero once 2j-1 = 2|nu|,
  // so the expansion is a finite (exact) sum here.
  const double fournu2 = 4.0 * nu * nu;
  double ak = 1.0, grow = 0.0, decay = 0.0, xp = 1.0;
  for (unsigned k = 0; k <= 64; ++k) {
    grow += (k % 2 ? -ak : ak) * xp;
    decay += ak * xp;
    if (ak == 0) break;
    const double odd = 2.0 * k + 1.0;
    ak *= (fournu2 - odd * odd) / (8.0 * (k + 1.0));
    xp /= x;
  }
  const long s = std::llround(nu - 0.5);
  const double reflect = (s % 2 == 0) ? -1.0 : 1.0;  // cos((nu + 1/2) pi)
  const double norm = 1.0 / std::sqrt(2.0 * kPi * x);
  if (scaled) return norm * (grow + reflect * std::exp(-2.0 * x) * decay);
  return norm * (std::exp(x) * grow + reflect * std::exp(-x) * decay);
}

double bessel_i(double nu, double x, bool scaled) {
  if (x > 10.0 && is_half_integer(nu)) return bessel_i_asymptotic(nu, x, scaled);
  return bessel_i_series(nu, x, scaled);
}

double bessel_i_power_ratio(double nu, double y, bool scaled) {
  if (y < 0) throw std::invalid_argument("bessel_i_power_ratio: negative y");
  const double z = std::sqrt(y);
  if (z > 10.0) {
    return bessel_i(nu, z, scaled) * std::exp(-nu * std::log(z));
  }
  double term = std::exp(-std::lgamma(nu + 1.0));
  double sum = term;
  const double y4 = 0.25 * y;
  for (unsigned m = 0; m < 2000; ++m) {
    term *= y4 / ((m + 1.0) * (m + 1.0 + nu));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  sum *= std::exp(-nu * std::log(2.0));
  return scaled ? sum * std::exp(-z) : sum;
}

namespace {

// E_0, E_2, E_4, ... up to E_{2*max_n} from the defining recurrence
// sum_k C(2n, 2k) E_{2k} = 0.
std::vector<bigint> build_euler_numbers(unsigned max_n) {
  std::vector<bigint> e(max_n + 1);
  e[0] = 1;
  for (unsigned n = 1; n <= max_n; ++n) {
    bigint acc = 0;
    for (unsigned k = 0; k < n; ++k) acc += binomial(2 * n, 2 * k) * e[k];
    e[n] = -acc;
  }
  return e;
}

const std::vector<bigint>& euler_table() {
  static const std::vector<bigint> table = build_euler_numbers(48);
  return table;
}

}  // namespace

bigint euler_number(unsigned r) {
  if (r % 2 == 1) return bigint(0);
  const auto& tab = euler_table();
  if (r / 2 >= tab.size())
    throw resource_error("euler_number: order beyond the cached table");
  return tab[r / 2];
}

mpq_class euler_poly_half(unsigned b) {
  mpq_class q(euler_number(2 * b), bigint(1) << (2 * b));
  q.canonicalize();
  return q;
}

double euler_poly(unsigned r, double x) {
  // E_r(x) = sum_{k even} C(r,k) (E_k / 2^k) (x - 1/2)^{r-k}
  const double t = x - 0.5;
  double sum = 0.0;
  for (unsigned k = 0; k <= r; k += 2) {
    mpq_class ek(euler_number(k), bigint(1) << k);
    ek.canonicalize();
    sum += binomial(r, k).get_d() * ek.get_d() * std::pow(t, r - k);
  }
  return sum;
}

double kappa(unsigned a, unsigned b) {
  const unsigned j = a + b;
  bigint num, da, db;
  mpz_fac_ui(num.get_mpz_t(), 2 * j);
  mpz_fac_ui(da.get_mpz_t(), a);
  mpz_fac_ui(db.get_mpz_t(), 2 * b);
  mpq_class q(num * euler_number(2 * b), da * db * (bigint(1) << (2 * b)));
  q.canonicalize();
  return q.get_d() * std::pow(2.0 * kPi, -static_cast<double>(a));
}

namespace {

// Coefficient lists of the polynomials P_j with C_j(w) = P_j(cot(pi w)).
const std::vector<std::complex<double>>& cot_poly(unsigned j) {
  static std::vector<std::vector<std::complex<double>>> polys = {
      {{0.0, 0.0}, {1.0, 0.0}}};
  while (polys.size() <= j) {
    const auto& p = polys.back();
    // (i/2) (1 + c^2) p'(c)
    std::vector<std::complex<double>> d(p.size() >= 2 ? p.size() - 1 : 1,
                                        0.0);
    for (std::size_t i = 1; i < p.size(); ++i)
      d[i - 1] = p[i] * static_cast<double>(i);
    std::vector<std::complex<double>> next(d.size() + 2, 0.0);
    const std::complex<double> half_i(0.0, 0.5);
    for (std::size_t i = 0; i < d.size(); ++i) {
      next[i] += half_i * d[i];
      next[i + 2] += half_i * d[i];
    }
    polys.push_back(std::move(next));
  }
  return polys[j];
}

}  // namespace

std::complex<double> cot_deriv(unsigned j, double w) {
  const double s = std::sin(kPi * w);
  if (std::abs(s) < 1e-12)
    throw std::domain_error("cot_deriv: pole at integer argument");
  const double c = std::cos(kPi * w) / s;
  const auto& p = cot_poly(j);
  std::complex<double> val = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) val = val * c + p[i];
  return val;
}

std::complex<double> gauss_sech(double u, std::complex<double> z, double v) {
  const std::complex<double> w = kPi * u / (2.0 * z);
  const std::complex<double> ch = std::cosh(w);
  if (std::abs(ch) < 1e-12)
    throw std::domain_error("gauss_sech: cosh vanishes at this argument");
  return std::exp(kPi * v * u * u / (2.0 * z)) / (2.0 * ch);
}

std::complex<double> gauss_sech_b(unsigned j, double v,
                                  std::complex<double> z) {
  std::complex<double> sum = 0.0;
  for (unsigned a = 0; a <= j; ++a) {
    const unsigned b = j - a;
    sum += std::pow(v, static_cast<double>(a)) * kappa(a, b) *
           std::pow(z, -static_cast<double>(a) - 2.0 * static_cast<double>(b));
  }
  return sum;
}

double sech_cdf(double x) {
  return (2.0 / kPi) * std::atan(std::exp(0.5 * kPi * x));
}

double gumbel_half_cdf(double v) { return std::exp(-0.5 * std::exp(-v)); }

double exp_unit_cdf(double x) { return x <= 0 ? 0.0 : -std::expm1(-x); }

double side_largest_cdf(double w) {
  const double a = std::exp(-w);
  return 2.0 * std::exp(-0.25 * a) - std::exp(-0.5 * a);
}

double prob_no_large_parts(double n, double v) {
  const double bsn = (std::sqrt(6.0) / kPi) * std::sqrt(n);
  const double threshold = bsn * (v + std::log(bsn));
  long long s = threshold < 1.0 ? 1 : static_cast<long long>(threshold) + 1;
  if (s % 2 == 0) ++s;
  double logp = 0.0;
  for (;; s += 2) {
    const double t = std::exp(-static_cast<double>(s) / bsn);
    if (t < 1e-16) break;
    logp += std::log1p(-t);
  }
  return std::exp(logp);
}

double LimitLaw::cdf(double x) const {
  switch (kind) {
    case Kind::SechUnit:
      return sech_cdf(x);
    case Kind::GumbelHalf:
      return gumbel_half_cdf(x);
    case Kind::ExpUnit:
      return exp_unit_cdf(x);
    case Kind::GeometricCB: {
      if (x < 0) return 0.0;
      const double B = std::sqrt(6.0) / kPi;
      return -std::expm1(-c * (std::floor(x) + 1.0) / B);
    }
    case Kind::SideLargest:
      return side_largest_cdf(x);
  }
  return 0.0;
}

Quadrature gauss_legendre(unsigned nodes) {
  if (nodes < 8)
    throw std::invalid_argument("gauss_legendre: need at least 8 nodes");
  Quadrature q;
  q.x.resize(nodes);
  q.w.resize(nodes);
  const unsigned half = (nodes + 1) / 2;
  for (unsigned i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (nodes + 0.5));
    double dp = 0.0;
    for (unsigned it = 0; it < 100; ++it) {
      // Legendre recurrence for P_n(x) and its derivative.
      double p0 = 1.0, p1 = x;
      for (unsigned k = 2; k <= nodes; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = nodes * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.x[i] = -x;
    q.x[nodes - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.w[i] = w;
    q.w[nodes - 1 - i] = w;
  }
  return q;
}

double gamma_p(double a, double x) {
  if (a <= 0 || x < 0) throw std::invalid_argument("gamma_p: bad arguments");
  if (x == 0) return 0.0;
  const double lpre = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    // Series for P(a, x).
    double term = 1.0 / a, sum = term;
    for (unsigned k = 1; k < 10000; ++k) {
      term *= x / (a + k);
      sum += term;
      if (term < sum * 1e-16) break;
    }
    return sum * std::exp(lpre);
  }
  // Lentz continued fraction for Q(a, x).
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (unsigned i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(lpre) * h;
}

double chi_square_cdf(double x, double dof) {
  return gamma_p(0.5 * dof, 0.5 * x);
}

}  // namespace oustat
