#include <doctest.h>

#include <json.hpp>
#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

// Path to the built binary, injected by the build.
#ifndef OUSTAT_CLI_PATH
#error "OUSTAT_CLI_PATH must be defined"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string(OUSTAT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Output with the metadata comments stripped, for comparisons that should
// not depend on the exact command line.
std::string data_lines(const std::string& text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    if (!line.empty() && line[0] != '#') out += line + "\n";
    pos = end + 1;
  }
  return out;
}

std::string gunzip_file(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  REQUIRE(f != nullptr);
  std::string out;
  char buf[4096];
  int got = 0;
  while ((got = gzread(f, buf, sizeof buf)) > 0)
    out.append(buf, std::size_t(got));
  gzclose(f);
  return out;
}

}  // namespace

TEST_CASE("cli: exact counts and moments") {
  const RunResult r = run_cli("exact --n-max 7 --moments 0,2");
  CHECK(r.exit_code == 0);
  CHECK(data_lines(r.out) ==
        "n,ou,ou_2\n"
        "0,0,0\n"
        "1,1,0\n"
        "2,2,2\n"
        "3,4,8\n"
        "4,6,22\n"
        "5,9,48\n"
        "6,14,94\n"
        "7,20,168\n");
  CHECK(r.out.find("# oustat ") != std::string::npos);
  CHECK(r.out.find("# command: ") != std::string::npos);
}

TEST_CASE("cli: reruns are byte-identical") {
  const RunResult a = run_cli("exact --n-max 40 --moments 0,2,4");
  const RunResult b = run_cli("exact --n-max 40 --moments 0,2,4");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);

  // a timestamp is strictly opt-in
  CHECK(a.out.find("# generated:") == std::string::npos);
  const RunResult c = run_cli("exact --n-max 5 --stamp");
  CHECK(c.out.find("# generated: ") != std::string::npos);
}

TEST_CASE("cli: rank distribution") {
  const RunResult r = run_cli("rankdist --n 4");
  CHECK(r.exit_code == 0);
  CHECK(data_lines(r.out) ==
        "n,m,count\n"
        "4,-3,1\n"
        "4,-1,2\n"
        "4,1,2\n"
        "4,3,1\n");
}

TEST_CASE("cli: saddle table shape") {
  const RunResult r = run_cli("saddle --n 300 --r-abs-max 0.3");
  CHECK(r.exit_code == 0);
  const std::string data = data_lines(r.out);
  CHECK(data.rfind("n,m,r,exact,saddle,ratio,peak_density\n", 0) == 0);
  // every data row carries exactly seven fields
  std::size_t pos = data.find('\n') + 1;
  int rows = 0;
  while (pos < data.size()) {
    const std::size_t end = data.find('\n', pos);
    const std::string row = data.substr(pos, end - pos);
    CHECK(std::count(row.begin(), row.end(), ',') == 6);
    CHECK(row.rfind("300,", 0) == 0);
    ++rows;
    pos = end + 1;
  }
  CHECK(rows >= 3);
}

TEST_CASE("cli: asymptotic table") {
  const RunResult r = run_cli("asympt --n-list 200 --ell 0,2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("# quadrature: gauss-legendre nodes=64") !=
        std::string::npos);
  const std::string data = data_lines(r.out);
  CHECK(data.rfind("n,ell,exact,asymptotic,ratio\n", 0) == 0);
  CHECK(data.find("200,0,8891189461160,") != std::string::npos);
  CHECK(data.find("200,2,2615905474871688,") != std::string::npos);
}

TEST_CASE("cli: usage errors exit with 2") {
  CHECK(run_cli("bogus").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("exact").exit_code == 2);               // missing --n-max
  CHECK(run_cli("exact --n-max -3").exit_code == 2);    // negative weight
  CHECK(run_cli("sample --n 100 --count 2").exit_code == 2);  // no seed
  CHECK(run_cli("sample --n 100 --count 2 --seed 1.5").exit_code == 2);
  CHECK(run_cli("asympt --n-list 100 --ell 1").exit_code == 2);  // odd moment
  CHECK(run_cli("verify --suite nonsense").exit_code == 2);
  CHECK(run_cli("sample --n 100 --count 1 --seed 1 --mode warp").exit_code ==
        2);
  // Bad mode with a worker pool must still be a usage error, not an abort.
  CHECK(run_cli("sample --n 100 --count 8 --seed 1 --mode warp --threads 4")
            .exit_code == 2);
}

TEST_CASE("cli: help exits cleanly") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("sample --help").exit_code == 0);
}

TEST_CASE("cli: unwritable output exits with 3") {
  CHECK(run_cli("exact --n-max 3 -o no_such_dir/x.csv").exit_code == 3);
}

TEST_CASE("cli: exhausted rejection budget in a worker exits with 3") {
  // max-attempts 1 at this weight cannot succeed; the failure must surface
  // through the normal error path even when it happens off the main thread.
  const RunResult r = run_cli(
      "sample --n 20000 --count 8 --mode exact --max-attempts 1 --seed 5 "
      "--threads 4");
  CHECK(r.exit_code == 3);
}

TEST_CASE("cli: sampling is seeded and reproducible") {
  const std::string args = "sample --n 500 --count 5 --mode free --seed 42";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("# seed: 42\n") != std::string::npos);

  const RunResult c = run_cli("sample --n 500 --count 5 --mode free --seed 43");
  CHECK(data_lines(c.out) != data_lines(a.out));

  const RunResult d =
      run_cli("sample --n 500 --count 2 --mode free --seed auto");
  CHECK(d.exit_code == 0);
  CHECK(d.out.find("(auto)") != std::string::npos);
}

TEST_CASE("cli: sample records parse as JSON with the expected fields") {
  const RunResult r =
      run_cli("sample --n 200 --count 4 --mode exact --seed 7 --k-limit 3");
  CHECK(r.exit_code == 0);
  int records = 0;
  for (std::size_t pos = 0; pos < r.out.size();) {
    std::size_t end = r.out.find('\n', pos);
    if (end == std::string::npos) end = r.out.size();
    const std::string line = r.out.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty() || line[0] == '#') continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    CHECK(j.at("N").get<long long>() == 200);
    CHECK(j.at("peak").get<long long>() ==
          2 * j.at("m").get<long long>() + 1);
    CHECK(j.contains("rank"));
    CHECK(j.at("attempts").get<long long>() >= 1);
    CHECK(j.at("x_small").at("left").size() == 3);
    CHECK(j.at("y_left").is_number());
    ++records;
  }
  CHECK(records == 4);
}

TEST_CASE("cli: peak mode leaves unsampled fields null") {
  const RunResult r = run_cli("sample --n 300 --count 2 --mode peak --seed 9");
  CHECK(r.exit_code == 0);
  for (std::size_t pos = 0; pos < r.out.size();) {
    std::size_t end = r.out.find('\n', pos);
    if (end == std::string::npos) end = r.out.size();
    const std::string line = r.out.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty() || line[0] == '#') continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    CHECK(j.at("N").is_null());
    CHECK(j.at("rank").is_null());
    CHECK(j.at("x_small").is_null());
    CHECK(j.at("y_left").is_null());
    CHECK(j.at("m").is_number());
  }
}

TEST_CASE("cli: gzip output holds the same rows") {
  const std::string path = "cli_test_out.csv.gz";
  const RunResult gz =
      run_cli("exact --n-max 30 --moments 0,2 -o " + path);
  CHECK(gz.exit_code == 0);
  const RunResult direct = run_cli("exact --n-max 30 --moments 0,2");
  CHECK(data_lines(gunzip_file(path)) == data_lines(direct.out));
  std::remove(path.c_str());
}

TEST_CASE("cli: verify modular reports and passes") {
  const RunResult r = run_cli("verify --suite modular");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("pass").get<bool>());
  CHECK(j.at("suite").get<std::string>() == "modular");
  CHECK(j.at("checks").size() >= 2);
  for (const auto& c : j.at("checks")) {
    CHECK(c.at("pass").get<bool>());
    CHECK(c.at("value").get<double>() < 1e-8);
  }
}

TEST_CASE("cli: verify exits 1 when a check fails") {
  // an impossible tolerance forces the residual checks to fail
  const RunResult r = run_cli("verify --suite modular --tol 1e-20");
  CHECK(r.exit_code == 1);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK_FALSE(j.at("pass").get<bool>());
}

TEST_CASE("cli: verify limits at smoke scale") {
  const RunResult r = run_cli("verify --suite limits --seed 1 --draws 2000");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("pass").get<bool>());
  CHECK(j.at("seed").get<std::string>() == "1");
  bool saw_peak = false;
  for (const auto& c : j.at("checks"))
    if (c.at("name").get<std::string>() == "peak_gumbel_ks") saw_peak = true;
  CHECK(saw_peak);
  // randomized suites refuse to run unseeded
  CHECK(run_cli("verify --suite limits --draws 2000").exit_code == 2);
}
