#include "abmc/io/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace abmc::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
}

CsvWriter& CsvWriter::field(const std::string& s) {
  if (row_started_) out_ << ',';
  out_ << s;
  row_started_ = true;
  return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(format_double(v)); }

CsvWriter& CsvWriter::field(long v) { return field(std::to_string(v)); }

void CsvWriter::end_row() {
  out_ << '\n';
  row_started_ = false;
}

void CsvWriter::close() {
  out_.close();
  if (out_.fail()) throw std::runtime_error("CsvWriter: write failure on close");
}

CsvReader::CsvReader(const std::string& path) : in_(path) {
  if (!in_) throw std::runtime_error("CsvReader: cannot open " + path);
}

bool CsvReader::has_next() {
  if (have_pending_) return true;
  if (!std::getline(in_, pending_)) return false;
  have_pending_ = true;
  return true;
}

std::vector<std::string> CsvReader::read_row() {
  if (!has_next()) throw std::runtime_error("CsvReader: past end of file");
  have_pending_ = false;
  std::string line = pending_;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

}  // namespace abmc::io
