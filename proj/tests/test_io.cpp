#include <oustat/errors.hpp>
#include <oustat/io.hpp>

#include <doctest.h>

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

using namespace oustat;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string gunzip(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  REQUIRE(f != nullptr);
  std::string out;
  char buf[4096];
  int got = 0;
  while ((got = gzread(f, buf, sizeof buf)) > 0) out.append(buf, size_t(got));
  gzclose(f);
  return out;
}
}  // namespace

TEST_CASE("csv quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("") == "");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("line\nbreak") == "\"line\nbreak\"");
  CHECK(csv_row({"a", "b,c", "d"}) == "a,\"b,c\",d");
  CHECK(csv_row({}) == "");
}

TEST_CASE("metadata lines") {
  const auto plain = metadata_lines("tool exact --n-max 5", "", false);
  REQUIRE(plain.size() == 2);
  CHECK(plain[0].rfind("# oustat ", 0) == 0);
  CHECK(plain[1] == "# command: tool exact --n-max 5");

  const auto seeded = metadata_lines("tool sample", "42 (auto)", false);
  REQUIRE(seeded.size() == 3);
  CHECK(seeded[2] == "# seed: 42 (auto)");

  const auto stamped = metadata_lines("tool", "", true);
  REQUIRE(stamped.size() == 3);
  CHECK(stamped[2].rfind("# generated: ", 0) == 0);
  CHECK(stamped[2].back() == 'Z');
}

TEST_CASE("plain file sink") {
  const std::string path = "io_test_plain.txt";
  {
    OutputSink sink(path);
    sink.write_line("one");
    sink.write_line("two,2");
    sink.close();
  }
  CHECK(slurp(path) == "one\ntwo,2\n");
  std::remove(path.c_str());
}

TEST_CASE("gzip sink round trip") {
  const std::string path = "io_test_gz.csv.gz";
  {
    OutputSink sink(path);
    for (int i = 0; i < 1000; ++i)
      sink.write_line("row," + std::to_string(i));
    sink.close();
  }
  const std::string raw = slurp(path);
  REQUIRE(raw.size() > 2);
  CHECK((unsigned char)raw[0] == 0x1f);  // gzip magic
  CHECK((unsigned char)raw[1] == 0x8b);
  const std::string text = gunzip(path);
  CHECK(text.rfind("row,0\n", 0) == 0);
  CHECK(text.find("row,999\n") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("unwritable path surfaces as a resource error") {
  CHECK_THROWS_AS(OutputSink("no_such_dir/out.csv"), resource_error);
}
