#pragma once

#include <memory>
#include <string>
#include <vector>

namespace oustat {

/* Line-oriented output sink: "-" writes to stdout, a path ending in .gz
 * writes a gzip stream, anything else a plain file.  Each line gets a
 * trailing newline.  Write and close failures surface as resource errors;
 * call close() directly to observe them instead of losing them in the
 * destructor.
 */
class OutputSink {
 public:
  explicit OutputSink(const std::string& path);
  ~OutputSink();
  OutputSink(const OutputSink&) = delete;
  OutputSink& operator=(const OutputSink&) = delete;

  void write_line(const std::string& line);
  void close();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// RFC-4180-style quoting: a field is quoted when it contains a comma, a
// quote, or a line break; embedded quotes are doubled.
std::string csv_field(const std::string& field);
std::string csv_row(const std::vector<std::string>& fields);

/* Standard output header as comment lines: tool version and the exact
 * command line always, the seed when the command is randomized, and a
 * timestamp only on request so that reruns stay byte-identical by default.
 */
std::vector<std::string> metadata_lines(const std::string& command_line,
                                        const std::string& seed_note,
                                        bool stamp);

}  // namespace oustat
