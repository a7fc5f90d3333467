#include <oustat/asympt.hpp>
#include <oustat/boltzmann.hpp>
#include <oustat/errors.hpp>
#include <oustat/exact.hpp>
#include <oustat/io.hpp>
#include <oustat/modular.hpp>
#include <oustat/stats.hpp>
#include <oustat/version.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <exception>
#include <random>
#include <string>
#include <thread>
#include <vector>

using json = nlohmann::json;
using namespace oustat;

namespace {

std::string joined_command(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    const std::string a = argv[i];
    out += a.find(' ') == std::string::npos ? a : "'" + a + "'";
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/* Seed policy: randomized commands must be given --seed with either an
 * explicit value or "auto"; auto draws entropy once and the value is
 * logged in the output metadata so any run can be reproduced.
 */
struct SeedChoice {
  std::uint64_t value = 0;
  bool automatic = false;

  std::string note() const {
    return std::to_string(value) + (automatic ? " (auto)" : "");
  }
};

SeedChoice resolve_seed(const std::string& arg) {
  if (arg.empty())
    throw std::invalid_argument(
        "this command is randomized: pass --seed <value> or --seed auto");
  SeedChoice s;
  if (arg == "auto") {
    std::random_device rd;
    s.value = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    s.automatic = true;
    return s;
  }
  try {
    std::size_t pos = 0;
    s.value = std::stoull(arg, &pos);
    if (pos != arg.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("--seed expects an unsigned integer or 'auto'");
  }
  return s;
}

json check_to_json(const CheckResult& c) {
  json j{{"name", c.name},
         {"value", c.value},
         {"pass", c.pass},
         {"mandatory", c.mandatory},
         {"detail", c.detail}};
  if (std::isfinite(c.threshold)) j["threshold"] = c.threshold;
  return j;
}

void emit_report(OutputSink& sink, const std::string& command,
                 const std::string& seed_note, bool stamp, const json& body) {
  json doc = body;
  doc["version"] = version_string;
  doc["command"] = command;
  if (!seed_note.empty()) doc["seed"] = seed_note;
  if (stamp) {
    for (const auto& line : metadata_lines("", "", true))
      if (line.rfind("# generated: ", 0) == 0)
        doc["generated"] = line.substr(13);
  }
  sink.write_line(doc.dump(2));
  sink.close();
}

int run_exact(long long n_max, std::vector<unsigned> moments,
              const std::string& out, const std::string& command, bool stamp) {
  if (moments.empty()) moments = {0};
  unsigned max_moment = 0;
  for (unsigned m : moments) max_moment = std::max(max_moment, m);
  const auto table = rank_moments(static_cast<std::size_t>(n_max), max_moment);
  OutputSink sink(out);
  for (const auto& line : metadata_lines(command, "", stamp))
    sink.write_line(line);
  std::vector<std::string> head{"n"};
  for (unsigned m : moments)
    head.push_back(m == 0 ? "ou" : "ou_" + std::to_string(m));
  sink.write_line(csv_row(head));
  for (long long n = 0; n <= n_max; ++n) {
    std::vector<std::string> row{std::to_string(n)};
    for (unsigned m : moments) row.push_back(to_string(table[n][m]));
    sink.write_line(csv_row(row));
  }
  sink.close();
  return 0;
}

int run_rankdist(long long n, const std::string& out,
                 const std::string& command, bool stamp) {
  const RankDistribution rd = rank_distribution(static_cast<std::size_t>(n));
  OutputSink sink(out);
  for (const auto& line : metadata_lines(command, "", stamp))
    sink.write_line(line);
  sink.write_line("n,m,count");
  for (const auto& [m, count] : rd.counts)
    sink.write_line(csv_row(
        {std::to_string(n), std::to_string(m), to_string(count)}));
  sink.close();
  return 0;
}

int run_asympt(std::vector<long long> n_list, std::vector<unsigned> ells,
               long k_max, unsigned nodes, const std::string& out,
               const std::string& command, bool stamp) {
  if (n_list.empty())
    throw std::invalid_argument("asympt: pass at least one n via --n-list");
  if (ells.empty()) ells = {0};
  unsigned max_ell = 0;
  long long max_n = 0;
  for (unsigned l : ells) {
    if (l % 2 != 0)
      throw std::invalid_argument(
          "asympt: odd moments vanish by rank symmetry; use even ell");
    max_ell = std::max(max_ell, l);
  }
  for (long long n : n_list) max_n = std::max(max_n, n);
  const auto table = rank_moments(static_cast<std::size_t>(max_n), max_ell);
  OutputSink sink(out);
  for (const auto& line : metadata_lines(command, "", stamp))
    sink.write_line(line);
  sink.write_line("# quadrature: gauss-legendre nodes=" +
                  std::to_string(nodes));
  sink.write_line("# k-max: " + (k_max > 0 ? std::to_string(k_max)
                                           : std::string("sqrt(n)")));
  sink.write_line("n,ell,exact,asymptotic,ratio");
  for (long long n : n_list) {
    for (unsigned l : ells) {
      const MomentSeriesResult r =
          moment_asymptotic(n, l, k_max, QuadratureSpec{nodes});
      const bigint& exact = table[n][l];
      const double ratio =
          exact == 0 ? HUGE_VAL : std::exp(r.log_value - log_bigint(exact));
      sink.write_line(csv_row({std::to_string(n), std::to_string(l),
                               to_string(exact), fmt(r.value), fmt(ratio)}));
    }
  }
  sink.close();
  return 0;
}

int run_saddle(long long n, double r_abs_max, const std::string& out,
               const std::string& command, bool stamp) {
  const auto row = ou_by_peak_row(static_cast<std::size_t>(n));
  const double bsn =
      (std::sqrt(6.0) / 3.14159265358979323846) * std::sqrt(double(n));
  OutputSink sink(out);
  for (const auto& line : metadata_lines(command, "", stamp))
    sink.write_line(line);
  sink.write_line("n,m,r,exact,saddle,ratio,peak_density");
  for (long long m = 0; 2 * m + 1 <= n; ++m) {
    const double r = (2.0 * m + 1.0 - bsn * std::log(2.0 * bsn)) / bsn;
    if (std::abs(r) > r_abs_max) continue;
    const bigint& exact = row[m];
    const double lsp = saddle_log_ou_m(n, m);
    const double ratio =
        exact == 0 ? HUGE_VAL : std::exp(lsp - log_bigint(exact));
    sink.write_line(csv_row({std::to_string(n), std::to_string(m), fmt(r),
                             to_string(exact), fmt(std::exp(lsp)), fmt(ratio),
                             fmt(peak_density(n, m))}));
  }
  sink.close();
  return 0;
}

json record_to_json(const BoltzmannParams& p, const SampleRecord& rec,
                    long long k_limit) {
  json j;
  j["m"] = rec.m;
  j["peak"] = rec.peak();
  if (rec.full) {
    j["N"] = rec.total;
    j["rank"] = rec.rank();
  } else {
    j["N"] = nullptr;
    j["rank"] = nullptr;
  }
  auto side = [&](const std::vector<long long>& x) {
    json arr = json::array();
    const long long kk =
        std::min<long long>(k_limit, static_cast<long long>(x.size()));
    for (long long k = 0; k < kk; ++k) arr.push_back(x[k]);
    return arr;
  };
  if (!rec.x_left.empty() || rec.full) {
    j["x_small"] = {{"left", side(rec.x_left)}, {"right", side(rec.x_right)}};
  } else {
    j["x_small"] = nullptr;
  }
  j["y_left"] = rec.y1_left == -2 ? json(nullptr)
                                  : json(rec.y1_left);
  j["y_right"] = rec.y1_right == -2 ? json(nullptr)
                                    : json(rec.y1_right);
  (void)p;
  return j;
}

int run_sample(long long n, long long count, const std::string& mode,
               long long k_limit, long long max_attempts,
               const SeedChoice& seed, int threads, const std::string& out,
               const std::string& command, bool stamp) {
  if (count < 1) throw std::invalid_argument("sample: --count must be >= 1");
  if (threads < 1) throw std::invalid_argument("sample: --threads must be >= 1");
  // Reject bad modes here, before any worker thread could trip on them.
  if (mode != "free" && mode != "peak" && mode != "small" && mode != "side" &&
      mode != "exact")
    throw std::invalid_argument("sample: unknown --mode " + mode);
  const BoltzmannParams params = make_params(n);

  auto one = [&](SplitMix64& rng) -> std::string {
    SampleRecord rec;
    json extra;
    if (mode == "free") {
      rec = sample_free(params, rng);
    } else if (mode == "peak") {
      rec = sample_peak_only(params, rng);
    } else if (mode == "small") {
      rec = sample_small_parts(params, rng, k_limit);
    } else if (mode == "side") {
      rec = sample_side_largest(params, rng);
    } else if (mode == "exact") {
      ExactSample ex = sample_exact(params, rng, max_attempts);
      rec = std::move(ex.record);
      extra["attempts"] = ex.attempts;
    } else {
      throw std::invalid_argument("sample: unknown --mode " + mode);
    }
    json j = record_to_json(params, rec, k_limit);
    for (auto& [k, v] : extra.items()) j[k] = v;
    return j.dump();
  };

  // Contiguous per-worker blocks on disjoint streams: output depends only
  // on (seed, thread count), not on scheduling.
  if (threads > count) threads = static_cast<int>(count);
  std::vector<std::vector<std::string>> blocks(threads);
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](int w) {
    try {
      SplitMix64 rng = stream_for(seed.value, static_cast<std::uint64_t>(w));
      const long long b = count * w / threads, e = count * (w + 1) / threads;
      blocks[w].reserve(static_cast<std::size_t>(e - b));
      for (long long i = b; i < e; ++i) blocks[w].push_back(one(rng));
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  // A worker that died (say, an exhausted rejection budget) reports through
  // the normal error path instead of taking the process down.
  for (const auto& ep : errors)
    if (ep) std::rethrow_exception(ep);

  OutputSink sink(out);
  for (const auto& line : metadata_lines(command, seed.note(), stamp))
    sink.write_line(line);
  for (const auto& block : blocks)
    for (const auto& line : block) sink.write_line(line);
  sink.close();
  return 0;
}

int run_verify(const std::string& suite, const std::string& seed_arg,
               long long draws, int threads, double tol, long k_max,
               const std::string& out, const std::string& command,
               bool stamp) {
  const bool wants_modular = suite == "modular" || suite == "all";
  const bool wants_limits = suite == "limits" || suite == "all";
  const bool wants_sampler = suite == "sampler" || suite == "all";
  if (!wants_modular && !wants_limits && !wants_sampler)
    throw std::invalid_argument(
        "verify: --suite must be modular, limits, sampler, or all");

  SeedChoice seed;
  if (wants_limits || wants_sampler) seed = resolve_seed(seed_arg);

  json body;
  body["suite"] = suite;
  json checks = json::array();
  bool pass = true;

  if (wants_modular) {
    const TransformReport rep = verify_transform_suite(k_max, tol);
    for (const auto& c : rep.checks) {
      if (!c.pass)
        checks.push_back({{"name", c.identity},
                          {"detail", c.parameters},
                          {"value", c.residual},
                          {"threshold", tol},
                          {"pass", false},
                          {"mandatory", true}});
    }
    checks.push_back({{"name", "transform_suite_max_residual"},
                      {"detail", std::to_string(rep.checks.size()) +
                                     " identities over the (h,k,z,u) grid"},
                      {"value", rep.max_residual()},
                      {"threshold", tol},
                      {"pass", rep.all_pass()},
                      {"mandatory", true}});
    pass = pass && rep.all_pass();

    // Decomposition spot grid, inside the validity strip with enough
    // series order that truncation sits far below the tolerance.
    const struct {
      cplx u, tau;
      std::size_t order;
    } grid[] = {
        {{0.13, 0.0}, {0.06, 0.25}, 60},
        {{0.07, 0.03}, {0.06, 0.25}, 60},
        {{0.11, 0.0}, {-0.08, 0.22}, 60},
        {{0.13, 0.21}, {0.06, 0.25}, 80},
    };
    double worst = 0.0;
    bool dec_pass = true;
    for (const auto& g : grid) {
      const DecompositionCheck c =
          verify_ou_decomposition(g.u, g.tau, g.order, tol);
      worst = std::max(worst, c.residual);
      dec_pass = dec_pass && c.pass;
    }
    checks.push_back({{"name", "ou_decomposition_max_residual"},
                      {"detail", "4-point (u, tau) grid"},
                      {"value", worst},
                      {"threshold", tol},
                      {"pass", dec_pass},
                      {"mandatory", true}});
    pass = pass && dec_pass;
  }

  if (wants_limits) {
    LimitSuiteConfig cfg;
    cfg.seed = seed.value;
    cfg.threads = threads;
    cfg.peak_draws = cfg.mean_draws = cfg.side_draws = cfg.small_draws = draws;
    const SuiteReport rep = limit_suite(cfg);
    for (const auto& c : rep.checks) checks.push_back(check_to_json(c));
    pass = pass && rep.mandatory_pass();
  }

  if (wants_sampler) {
    UniformityConfig cfg;
    cfg.seed = seed.value;
    cfg.threads = threads;
    const SuiteReport rep = uniformity_suite(cfg);
    for (const auto& c : rep.checks) checks.push_back(check_to_json(c));
    pass = pass && rep.mandatory_pass();
  }

  body["checks"] = checks;
  body["pass"] = pass;
  OutputSink sink(out);
  emit_report(sink, command,
              (wants_limits || wants_sampler) ? seed.note() : "", stamp, body);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string command = joined_command(argc, argv);
  CLI::App app{"odd unimodal sequence statistics"};
  app.require_subcommand(1);

  // exact
  auto* c_exact = app.add_subcommand(
      "exact", "exact counts and rank moments as CSV");
  long long ex_nmax = 100;
  std::vector<unsigned> ex_moments;
  std::string ex_out = "-";
  bool ex_stamp = false;
  c_exact->add_option("--n-max", ex_nmax, "largest weight")
      ->required()
      ->check(CLI::NonNegativeNumber);
  c_exact->add_option("--moments", ex_moments, "moment orders (default {0})")
      ->delimiter(',');
  c_exact->add_option("-o,--out", ex_out, "output path, - or *.gz");
  c_exact->add_flag("--stamp", ex_stamp, "add a timestamp line");

  // rankdist
  auto* c_rank = app.add_subcommand(
      "rankdist", "exact rank distribution at one weight as CSV");
  long long rd_n = 0;
  std::string rd_out = "-";
  bool rd_stamp = false;
  c_rank->add_option("--n", rd_n, "weight")
      ->required()
      ->check(CLI::NonNegativeNumber);
  c_rank->add_option("-o,--out", rd_out, "output path, - or *.gz");
  c_rank->add_flag("--stamp", rd_stamp, "add a timestamp line");

  // asympt
  auto* c_asym = app.add_subcommand(
      "asympt", "moment series vs exact values as CSV");
  std::vector<long long> as_n;
  std::vector<unsigned> as_ell;
  long as_kmax = 0;
  unsigned as_nodes = 64;
  std::string as_out = "-";
  bool as_stamp = false;
  c_asym->add_option("--n-list", as_n, "weights to evaluate")
      ->delimiter(',')
      ->required()
      ->check(CLI::PositiveNumber);
  c_asym->add_option("--ell", as_ell, "even moment orders (default {0})")
      ->delimiter(',');
  c_asym->add_option("--k-max", as_kmax, "cap on the modulus sum");
  c_asym->add_option("--nodes", as_nodes, "quadrature nodes");
  c_asym->add_option("-o,--out", as_out, "output path, - or *.gz");
  c_asym->add_flag("--stamp", as_stamp, "add a timestamp line");

  // saddle
  auto* c_sad = app.add_subcommand(
      "saddle", "peak-resolved counts vs the saddle approximation as CSV");
  long long sd_n = 0;
  double sd_rmax = 1.0;
  std::string sd_out = "-";
  bool sd_stamp = false;
  c_sad->add_option("--n", sd_n, "weight")
      ->required()
      ->check(CLI::PositiveNumber);
  c_sad->add_option("--r-abs-max", sd_rmax, "peak window in r units");
  c_sad->add_option("-o,--out", sd_out, "output path, - or *.gz");
  c_sad->add_flag("--stamp", sd_stamp, "add a timestamp line");

  // sample
  auto* c_smp = app.add_subcommand(
      "sample", "draw random sequences as JSON lines");
  long long sm_n = 0, sm_count = 1, sm_klimit = 8,
            sm_attempts = 10'000'000;
  std::string sm_mode = "free", sm_seed, sm_out = "-";
  int sm_threads = 1;
  bool sm_stamp = false;
  c_smp->add_option("--n", sm_n, "weight target")
      ->required()
      ->check(CLI::PositiveNumber);
  c_smp->add_option("--count", sm_count, "number of records")
      ->required()
      ->check(CLI::PositiveNumber);
  c_smp->add_option("--mode", sm_mode,
                    "free | exact | peak | small | side");
  c_smp->add_option("--k-limit", sm_klimit,
                    "part sizes kept in x_small (and sampled in small mode)")
      ->check(CLI::PositiveNumber);
  c_smp->add_option("--max-attempts", sm_attempts,
                    "rejection budget per record in exact mode")
      ->check(CLI::PositiveNumber);
  c_smp->add_option("--seed", sm_seed, "unsigned integer or 'auto'");
  c_smp->add_option("--threads", sm_threads, "worker count")
      ->check(CLI::PositiveNumber);
  c_smp->add_option("-o,--out", sm_out, "output path, - or *.gz");
  c_smp->add_flag("--stamp", sm_stamp, "add a timestamp line");

  // verify
  auto* c_ver = app.add_subcommand(
      "verify", "run a verification suite, JSON report");
  std::string ve_suite = "all", ve_seed, ve_out = "-";
  long long ve_draws = 100'000;
  int ve_threads = 1;
  double ve_tol = 1e-8;
  long ve_kmax = 6;
  bool ve_stamp = false;
  c_ver->add_option("--suite", ve_suite, "modular | limits | sampler | all");
  c_ver->add_option("--seed", ve_seed, "unsigned integer or 'auto'");
  c_ver->add_option("--draws", ve_draws, "draws per sampled check")
      ->check(CLI::PositiveNumber);
  c_ver->add_option("--threads", ve_threads, "worker count")
      ->check(CLI::PositiveNumber);
  c_ver->add_option("--tol", ve_tol, "residual tolerance, modular suite");
  c_ver->add_option("--k-max", ve_kmax, "largest modulus, modular suite");
  c_ver->add_option("-o,--out", ve_out, "output path, - or *.gz");
  c_ver->add_flag("--stamp", ve_stamp, "add a timestamp line");

  try {
    app.parse(argc, argv);
    if (*c_exact)
      return run_exact(ex_nmax, ex_moments, ex_out, command, ex_stamp);
    if (*c_rank) return run_rankdist(rd_n, rd_out, command, rd_stamp);
    if (*c_asym)
      return run_asympt(as_n, as_ell, as_kmax, as_nodes, as_out, command,
                        as_stamp);
    if (*c_sad) return run_saddle(sd_n, sd_rmax, sd_out, command, sd_stamp);
    if (*c_smp)
      return run_sample(sm_n, sm_count, sm_mode, sm_klimit, sm_attempts,
                        resolve_seed(sm_seed), sm_threads, sm_out, command,
                        sm_stamp);
    if (*c_ver)
      return run_verify(ve_suite, ve_seed, ve_draws, ve_threads, ve_tol,
                        ve_kmax, ve_out, command, ve_stamp);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const resource_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
