#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace abmc::io {

/// Minimal CSV writer. Doubles are written with %.17g so files round-trip
/// exactly; output is byte-stable across runs.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  CsvWriter& field(const std::string& s);
  CsvWriter& field(double v);
  CsvWriter& field(long v);
  void end_row();
  void close();

 private:
  std::ofstream out_;
  bool row_started_ = false;
};

class CsvReader {
 public:
  explicit CsvReader(const std::string& path);

  bool has_next();
  std::vector<std::string> read_row();

 private:
  std::ifstream in_;
  std::string pending_;
  bool have_pending_ = false;
};

std::string format_double(double v);

}  // namespace abmc::io
