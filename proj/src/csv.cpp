#include "corelit/csv.hpp"

#include <cstdio>

#include "corelit/errors.hpp"

namespace corelit {

CsvReader::CsvReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
  if (!in_) throw io_error("cannot open " + path);
}

bool CsvReader::next(std::vector<std::string>& fields) {
  fields.clear();
  int c = in_.get();
  if (c == EOF) return false;
  ++line_;
  record_line_ = line_;

  std::string field;
  bool quoted = false;
  while (true) {
    if (c == EOF) {
      fields.push_back(std::move(field));
      return true;
    }
    if (quoted) {
      if (c == '"') {
        int peek = in_.get();
        if (peek == '"') {
          field.push_back('"');
        } else {
          quoted = false;
          c = peek;
          continue;
        }
      } else {
        if (c == '\n') ++line_;
        field.push_back(static_cast<char>(c));
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(static_cast<char>(c));
    }
    c = in_.get();
  }
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary), path_(path) {
  if (!out_) throw io_error("cannot open " + path + " for writing");
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << csv_escape(fields[i]);
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (out_.fail()) throw io_error("write to " + path_ + " failed");
}

std::string csv_escape(std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

}  // namespace corelit
