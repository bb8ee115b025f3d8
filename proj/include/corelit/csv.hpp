#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace corelit {

// Minimal RFC-4180-style CSV support: quoted fields, doubled quotes, LF or
// CRLF input. Output is always UTF-8 with LF terminators and quotes only
// where needed.

class CsvReader {
 public:
  explicit CsvReader(const std::string& path);

  // Reads the next record into `fields`. Returns false at end of file.
  bool next(std::vector<std::string>& fields);

  // 1-based line number of the record last returned by next().
  std::size_t line() const { return record_line_; }

 private:
  std::ifstream in_;
  std::string path_;
  std::size_t line_ = 0;
  std::size_t record_line_ = 0;
};

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::ofstream out_;
  std::string path_;
};

std::string csv_escape(std::string_view field);

// Fixed-precision formatting used by every CSV/JSON writer, so identical runs
// produce identical bytes.
std::string format_double(double value);

}  // namespace corelit
