/* End-to-end acceptance battery.  Each criterion prints one PASS/FAIL line
 * with its measured quantities and elapsed time; the process exits with the
 * number of failed criteria.  Tolerances and grids are pinned here on
 * purpose: they are the contract, not knobs.
 */
#include <oustat/asympt.hpp>
#include <oustat/bigint.hpp>
#include <oustat/boltzmann.hpp>
#include <oustat/exact.hpp>
#include <oustat/modular.hpp>
#include <oustat/special.hpp>
#include <oustat/stats.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace oustat;

namespace {

int g_failures = 0;

void criterion(int index, const std::string& name, double budget_seconds,
               const std::function<bool(std::string&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (elapsed > budget_seconds) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
  }
  std::printf("%s: %2d %-34s [%6.1fs] %s\n", ok ? "PASS" : "FAIL", index,
              name.c_str(), elapsed, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double ratio_to(const bigint& exact, double log_value) {
  return std::exp(log_value - log_bigint(exact));
}

const CheckResult* find(const SuiteReport& rep, const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name) return &c;
  return nullptr;
}

char buf_scratch[256];
std::string fmt(const char* pattern, double a, double b = 0.0,
                double c = 0.0, double d = 0.0) {
  std::snprintf(buf_scratch, sizeof buf_scratch, pattern, a, b, c, d);
  return buf_scratch;
}

}  // namespace

int main() {
  // 1. the generating-series counts match full enumeration
  criterion(1, "counts vs enumeration", 10.0, [](std::string& detail) {
    const auto ou = ou_counts(25);
    const long first[] = {0, 1, 2, 4, 6, 9, 14, 20};
    for (std::size_t n = 0; n <= 7; ++n)
      if (ou[n] != first[n]) return false;
    for (std::size_t n = 1; n <= 25; ++n)
      if (ou[n] != bigint(long(brute_force_enumerate(n).size()))) {
        detail = "mismatch at n=" + std::to_string(n);
        return false;
      }
    detail = "n <= 25, ou(25)=" + to_string(ou[25]);
    return true;
  });

  // 2. rank symmetry, vanishing odd moments, one pinned even moment
  criterion(2, "rank symmetry and moments", 10.0, [](std::string& detail) {
    const auto table = rank_distribution_table(100);
    for (std::size_t n = 1; n <= 100; ++n)
      for (const auto& [m, c] : table[n].counts)
        if (table[n].counts.at(-m) != c) {
          detail = "asymmetry at n=" + std::to_string(n);
          return false;
        }
    const auto mom = rank_moments(100, 3);
    for (std::size_t n = 0; n <= 100; ++n)
      if (mom[n][1] != 0 || mom[n][3] != 0) {
        detail = "odd moment nonzero at n=" + std::to_string(n);
        return false;
      }
    if (mom[3][2] != 8) {
      detail = "mu_2(3) != 8";
      return false;
    }
    detail = "n <= 100";
    return true;
  });

  // 3. the convergent partition series rounds to the exact integers
  criterion(3, "partition series exactness", 60.0, [](std::string& detail) {
    const auto p = partition_count(500);
    if (p[0] != 1) return false;
    for (long long n = 1; n <= 500; ++n)
      if (rademacher_p_rounded(n) != p[n]) {
        detail = "mismatch at n=" + std::to_string(n);
        return false;
      }
    detail = "n <= 500, p(500)=" + to_string(p[500]);
    return true;
  });

  // 4. transformation laws and the series decomposition
  criterion(4, "transformation residuals", 60.0, [](std::string& detail) {
    const TransformReport rep = verify_transform_suite(6, 1e-8);
    if (!rep.all_pass()) {
      detail = "transform grid failed";
      return false;
    }
    double worst = rep.max_residual();
    const cplx tau(0.06, 0.25);
    const struct {
      cplx u;
      std::size_t order;
    } grid[] = {{{0.13, 0.00}, 60}, {{0.07, 0.03}, 60}, {{0.13, 0.21}, 80}};
    for (const auto& g : grid) {
      const DecompositionCheck c = verify_ou_decomposition(g.u, tau, g.order,
                                                           1e-8);
      worst = std::max(worst, c.residual);
      if (!c.pass) {
        detail = "decomposition residual " + fmt("%.2e", c.residual);
        return false;
      }
    }
    detail = std::to_string(rep.checks.size() + 3) + " checks, worst " +
             fmt("%.2e", worst);
    return true;
  });

  // 5. the leading term approaches the counts from below
  criterion(5, "leading-order count", 300.0, [](std::string& detail) {
    const auto ou = ou_counts(2000);
    double prev = 1e9;
    for (long long n : {250, 500, 1000, 2000}) {
      const double gap =
          std::abs(ratio_to(ou[n], ou_main_term_log(double(n))) - 1.0);
      if (gap >= prev) {
        detail = "|ratio-1| not shrinking at n=" + std::to_string(n);
        return false;
      }
      prev = gap;
    }
    if (prev >= 0.10) {
      detail = fmt("final gap %.3f >= 0.10", prev);
      return false;
    }
    detail = fmt("|ratio-1| at n=2000: %.4f", prev);
    return true;
  });

  // 6. leading moment factors (3/2) n and (45/4) n^2
  criterion(6, "leading moment ratios", 600.0, [](std::string& detail) {
    const auto mom = rank_moments(2000, 4);
    double prev2 = 1e9, prev4 = 1e9;
    for (long long n : {250, 500, 1000, 2000}) {
      const double nn = double(n);
      const double r2 = std::exp(log_bigint(mom[n][2]) - log_bigint(mom[n][0])) /
                        (1.5 * nn);
      const double r4 = std::exp(log_bigint(mom[n][4]) - log_bigint(mom[n][0])) /
                        (11.25 * nn * nn);
      if (std::abs(r2 - 1.0) >= prev2 || std::abs(r4 - 1.0) >= prev4) {
        detail = "ratio gap not shrinking at n=" + std::to_string(n);
        return false;
      }
      prev2 = std::abs(r2 - 1.0);
      prev4 = std::abs(r4 - 1.0);
    }
    detail = fmt("gaps at n=2000: %.4f (ell=2), %.4f (ell=4)", prev2, prev4);
    return true;
  });

  // 7. the full moment series converges toward the exact moments
  criterion(7, "moment series convergence", 600.0, [](std::string& detail) {
    const auto mom = rank_moments(1000, 2);
    for (unsigned ell : {0u, 2u}) {
      double prev = 1e9;
      for (long long n : {200, 500, 1000}) {
        const MomentSeriesResult r = moment_asymptotic(n, ell);
        if (!r.imag_ok) {
          detail = "imaginary residue too large at n=" + std::to_string(n);
          return false;
        }
        const double gap = std::abs(ratio_to(mom[n][ell], r.log_value) - 1.0);
        if (gap >= prev) {
          detail = "relative error not shrinking at n=" + std::to_string(n);
          return false;
        }
        prev = gap;
      }
      if (ell == 0) detail = fmt("final gaps: %.4f (ell=0)", prev);
      else detail += fmt(", %.4f (ell=2)", prev);
    }
    return true;
  });

  // 8. saddle-point peak counts, curvature scale, density normalization
  criterion(8, "saddle approximation", 300.0, [](std::string& detail) {
    const long long n = 2000;
    const auto row = ou_by_peak_row(n);
    const double bsn = (std::sqrt(6.0) / 3.14159265358979323846) *
                       std::sqrt(double(n));
    int covered = 0;
    for (long long m = 0; 2 * m + 1 <= n; ++m) {
      const double r = (2.0 * m + 1.0 - bsn * std::log(2.0 * bsn)) / bsn;
      if (std::abs(r) > 1.0) continue;
      const double ratio = ratio_to(row[m], saddle_log_ou_m(n, m));
      if (std::abs(ratio - 1.0) > 0.15) {
        detail = fmt("ratio %.3f at m=%g", ratio, double(m));
        return false;
      }
      ++covered;
    }
    double prev = 1e9;
    const double kB = std::sqrt(6.0) / 3.14159265358979323846;
    for (long long nn : {1'000, 10'000, 100'000}) {
      const double bs = kB * std::sqrt(double(nn));
      const long long mode = std::llround(0.5 * (bs * std::log(2.0 * bs) - 1.0));
      const double f2 = saddle_function(nn, mode).f2;
      const double target = 2.0 * kB * std::pow(double(nn), 1.5);
      const double gap = std::abs(f2 / target - 1.0);
      if (gap >= prev) {
        detail = "curvature ratio not converging";
        return false;
      }
      prev = gap;
    }
    double density = 0.0;
    for (long long m = 0; 2 * m + 1 <= 40'000'000; ++m) {
      const double d = peak_density(1'000'000, m);
      density += d;
      if (2 * m + 1 > 10'000 && d < 1e-18) break;
    }
    if (std::abs(density - 1.0) > 1e-3) {
      detail = fmt("density sum %.6f", density);
      return false;
    }
    detail = fmt("%g peaks within 15%%, curvature gap %.3f, mass %.5f",
                 double(covered), prev, density);
    return true;
  });

  /* The sampled criteria run on one full-scale suite invocation; seeds are
   * fixed so the whole battery is reproducible.
   */
  LimitSuiteConfig lim_cfg;
  lim_cfg.seed = 2026;
  SuiteReport lim;

  criterion(9, "rank law convergence", 600.0, [&](std::string& detail) {
    lim = limit_suite(lim_cfg);
    const CheckResult* c = find(lim, "rank_sech_ks_strictly_decreasing");
    if (!c) return false;
    detail = c->detail + fmt(", final KS %.4f", c->value);
    return c->pass;
  });

  criterion(10, "peak limit law", 60.0, [&](std::string& detail) {
    const CheckResult* ks = find(lim, "peak_gumbel_ks");
    const CheckResult* mean = find(lim, "peak_mean_sigma_dev");
    if (!ks || !mean) return false;
    detail = fmt("KS %.4f (tol 0.02), mean dev %.2f sigma", ks->value,
                 mean->value);
    return ks->pass && mean->pass;
  });

  criterion(11, "small and large part laws", 300.0, [&](std::string& detail) {
    const char* names[] = {"smallpart_exp_ks_left", "smallpart_geometric_ks_left",
                           "smallpart_total_factorization_dev",
                           "no_large_parts_product_dev"};
    for (const char* name : names) {
      const CheckResult* c = find(lim, name);
      if (!c || !c->pass) {
        detail = std::string("failed: ") + name;
        return false;
      }
    }
    detail = fmt("exp KS %.4f, geo KS %.4f, factor dev %.4f, product dev %.2e",
                 find(lim, names[0])->value, find(lim, names[1])->value,
                 find(lim, names[2])->value, find(lim, names[3])->value);
    return true;
  });

  criterion(12, "exact-size sampler uniformity", 600.0,
            [](std::string& detail) {
    UniformityConfig cfg;
    cfg.seed = 2026;
    const SuiteReport rep = uniformity_suite(cfg);
    const CheckResult* chi = find(rep, "exact_sampler_chi_square");
    const CheckResult* rate = find(rep, "exact_sampler_acceptance_rate");
    if (!chi || !rate) return false;
    detail = fmt("chi-square position %.3f, rate factor %.3f", chi->value,
                 rate->value);
    return rep.mandatory_pass();
  });

  std::printf("%d of 12 criteria passed\n", 12 - g_failures);
  return g_failures;
}
