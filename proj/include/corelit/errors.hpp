#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corelit {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file. Carries the 1-based line number of the offending row.
struct parse_error : error {
  parse_error(const std::string& msg, std::size_t line)
      : error(msg + " (line " + std::to_string(line) + ")"), line(line) {}
  std::size_t line;
};

// Parameter outside its documented range, or an operation asked to run on
// data that lacks a required attribute.
struct config_error : error {
  using error::error;
};

// Input produced a network with no edges.
struct empty_network_error : error {
  using error::error;
};

// Unknown document id.
struct lookup_error : error {
  using error::error;
};

// Two values that must describe the same source/partition do not.
struct contract_error : error {
  using error::error;
};

// Modularity requested on a network with zero total edge weight.
struct modularity_undefined_error : error {
  using error::error;
};

// Summary statistics requested over records that are all undefined.
struct empty_summary_error : error {
  using error::error;
};

struct io_error : error {
  using error::error;
};

}  // namespace corelit
