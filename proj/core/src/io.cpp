#include <oustat/io.hpp>

#include <oustat/errors.hpp>
#include <oustat/version.hpp>

#include <zlib.h>

#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>

namespace oustat {

struct OutputSink::Impl {
  bool to_stdout = false;
  std::ofstream file;
  gzFile gz = nullptr;
  std::string path;
};

OutputSink::OutputSink(const std::string& path) : impl_(new Impl) {
  impl_->path = path;
  if (path == "-") {
    impl_->to_stdout = true;
    return;
  }
  if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) {
    impl_->gz = gzopen(path.c_str(), "wb");
    if (!impl_->gz)
      throw resource_error("cannot open output file: " + path);
    return;
  }
  impl_->file.open(path, std::ios::binary);
  if (!impl_->file)
    throw resource_error("cannot open output file: " + path);
}

OutputSink::~OutputSink() {
  try {
    close();
  } catch (...) {
    // Destructors must not throw; explicit close() reports the failure.
  }
}

void OutputSink::write_line(const std::string& line) {
  if (impl_->to_stdout) {
    std::cout << line << '\n';
    return;
  }
  if (impl_->gz) {
    if (gzwrite(impl_->gz, line.data(), static_cast<unsigned>(line.size())) !=
            static_cast<int>(line.size()) ||
        gzwrite(impl_->gz, "\n", 1) != 1)
      throw resource_error("write failed: " + impl_->path);
    return;
  }
  impl_->file << line << '\n';
  if (!impl_->file) throw resource_error("write failed: " + impl_->path);
}

void OutputSink::close() {
  if (impl_->gz) {
    const int rc = gzclose(impl_->gz);
    impl_->gz = nullptr;
    if (rc != Z_OK) throw resource_error("close failed: " + impl_->path);
  } else if (impl_->file.is_open()) {
    impl_->file.close();
    if (impl_->file.fail())
      throw resource_error("close failed: " + impl_->path);
  } else if (impl_->to_stdout) {
    std::cout.flush();
  }
}

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out;
}

std::vector<std::string> metadata_lines(const std::string& command_line,
                                        const std::string& seed_note,
                                        bool stamp) {
  std::vector<std::string> out;
  out.push_back(std::string("# oustat ") + version_string);
  out.push_back("# command: " + command_line);
  if (!seed_note.empty()) out.push_back("# seed: " + seed_note);
  if (stamp) {
    char buf[64];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    out.push_back(std::string("# generated: ") + buf);
  }
  return out;
}

}  // namespace oustat
