#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corelit/citation_network.hpp"
#include "corelit/coupling.hpp"
#include "corelit/indicators.hpp"

namespace corelit {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr double kDefaultDedupThreshold = 0.84;

// Everything a run needs; serialized losslessly into the run manifest.
struct RunConfig {
  std::string edges_path;
  std::string metadata_path;  // empty = edge-csv format
  double quantile = 0.995;
  std::size_t partitions = 10;
  std::size_t null_samples = 100;
  double resolution = 1.0;
  Weighting weighting = Weighting::raw;
  std::optional<double> dedup_threshold;  // reference dedup off unless set
  ReferenceNormalization dedup_normalization =
      ReferenceNormalization::strip_pagination_and_lowercase;
  bool dedup_block_on_first_token = false;
  bool drop_references_without_author = false;
  std::uint64_t master_seed = kDefaultSeed;
  std::string out_dir;
  unsigned workers = 0;  // 0 = hardware concurrency
  bool share_null_across_partitions = false;
  bool export_coupling = false;
  bool export_partitions = true;
  std::size_t top_k = 5;
  std::optional<std::pair<std::uint32_t, std::uint32_t>> dump_null_sample;  // (partition, sample)

  void validate() const;  // throws config_error on out-of-range parameters
};

struct IngestSummary {
  std::size_t citing = 0;
  std::size_t cited = 0;
  std::size_t edges = 0;
  std::size_t core_count = 0;
  std::uint32_t core_threshold = 0;
  LoadReport load;
  std::size_t merge_groups = 0;
  std::size_t merged_members = 0;
};

// Loads (and optionally dedups) the network and reports headline counts.
// When out_dir is set, writes ingest.json and, with dedup enabled,
// merge_report.csv.
IngestSummary run_ingest(const RunConfig& config);

struct AnalyzeResult {
  IngestSummary ingest;
  CouplingNetwork::ComponentStats components;
  double coupling_density = 0.0;
  std::size_t coupling_vertices = 0;
  std::size_t coupling_edges = 0;
  double modularity_mean = 0.0;
  std::vector<IndicatorRecord> records;
  std::vector<std::string> artifacts;  // paths written, relative to out_dir
};

// Full pipeline: ingest -> projection -> partition ensemble -> core selection
// -> indicators -> report artifacts. Identical config and seed produce
// byte-identical outputs.
AnalyzeResult run_analyze(const RunConfig& config);

struct ReportOptions {
  std::string run_dir;
  std::size_t bins = 20;
  std::optional<std::uint32_t> min_community_size;
  std::optional<double> trim_weight;
};

// Renders SVG plots and derived CSVs from a completed run directory; numbers
// are read back from the CSVs, never recomputed.
std::vector<std::string> run_report(const ReportOptions& options);

}  // namespace corelit
