#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corelit/string_similarity.hpp"

namespace corelit {

using DocumentId = std::string;

enum class Typology { monograph, article, reference_work, primary_source, other };

std::string_view typology_name(Typology t);
std::optional<Typology> parse_typology(std::string_view name);

struct DocumentRecord {
  DocumentId id;
  std::string label;                         // free author/title text
  std::optional<int> year;                   // 1-4 digit positive integer
  std::optional<Typology> typology;
  bool is_citing = false;
  std::optional<std::string> raw_reference;  // original reference string
};

// Directed citing -> cited graph. Simple (no duplicate edges, no self-loops);
// a document may appear on both sides. Immutable once built, so it can be
// shared read-only across threads.
class CitationNetwork {
 public:
  struct BuildCounts {
    std::size_t duplicate_rows = 0;
    std::size_t self_loops = 0;
  };

  CitationNetwork() = default;

  // Rows are (citing id, cited id) pairs, already whitespace-trimmed.
  // Duplicate rows collapse to one edge, rows with citing == cited are
  // dropped; both are tallied in `counts` when given.
  static CitationNetwork build(const std::vector<std::pair<DocumentId, DocumentId>>& rows,
                               BuildCounts* counts = nullptr);

  std::size_t citing_count() const { return citing_ids_.size(); }
  std::size_t cited_count() const { return cited_ids_.size(); }
  std::size_t edge_count() const { return edge_citing_.size(); }

  const std::vector<DocumentId>& citing_ids() const { return citing_ids_; }
  const std::vector<DocumentId>& cited_ids() const { return cited_ids_; }

  std::optional<std::uint32_t> citing_index(std::string_view id) const;
  std::optional<std::uint32_t> cited_index(std::string_view id) const;

  // Parallel per-edge-slot arrays; slots are sorted by (citing, cited) index.
  std::span<const std::uint32_t> edge_citing() const { return edge_citing_; }
  std::span<const std::uint32_t> edge_cited() const { return edge_cited_; }

  std::uint32_t in_degree(std::uint32_t cited_idx) const { return in_degree_[cited_idx]; }
  std::uint32_t out_degree(std::uint32_t citing_idx) const { return out_degree_[citing_idx]; }

  // Citing vertices referencing the given cited source, ascending.
  std::span<const std::uint32_t> citers_of(std::uint32_t cited_idx) const;

  // Index of the citing vertex carrying the same DocumentId as this cited
  // source, or -1. Needed to spot self-loops after endpoint permutation.
  std::int32_t citing_twin(std::uint32_t cited_idx) const { return citing_twin_[cited_idx]; }

  const DocumentRecord* record(std::string_view id) const;
  void attach_records(std::vector<DocumentRecord> records);
  const std::vector<DocumentRecord>& records() const { return records_; }

 private:
  std::vector<DocumentId> citing_ids_;
  std::vector<DocumentId> cited_ids_;
  std::unordered_map<std::string, std::uint32_t> citing_index_;
  std::unordered_map<std::string, std::uint32_t> cited_index_;

  std::vector<std::uint32_t> edge_citing_;
  std::vector<std::uint32_t> edge_cited_;
  std::vector<std::uint32_t> in_degree_;
  std::vector<std::uint32_t> out_degree_;
  std::vector<std::int32_t> citing_twin_;

  // CSR: citers of each cited source.
  std::vector<std::size_t> citer_offsets_;
  std::vector<std::uint32_t> citer_list_;

  std::vector<DocumentRecord> records_;
  std::unordered_map<std::string, std::size_t> record_index_;
};

enum class InputFormat { edge_csv, edge_csv_with_metadata };

struct LoadOptions {
  // Drops edges whose cited document has a metadata row with an empty label.
  // Off by default: removing author-less references is a dataset-cleaning
  // choice, not part of the method.
  bool drop_references_without_author = false;
};

struct LoadReport {
  std::size_t rows = 0;
  std::size_t duplicate_rows_dropped = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t no_author_dropped = 0;
};

CitationNetwork load_citations(const std::string& edges_path, InputFormat format,
                               const std::string& metadata_path = {},
                               const LoadOptions& options = {}, LoadReport* report = nullptr);

// One merged group of cited sources. `similarity` per member is the maximum
// pairwise similarity linking it to any other member of the group.
struct MergeGroup {
  std::uint32_t group_id = 0;
  DocumentId canonical;
  struct Member {
    DocumentId id;
    double similarity;
  };
  std::vector<Member> members;
};

struct MergeReport {
  std::vector<MergeGroup> groups;          // only groups of size >= 2
  std::size_t merged_members() const;      // members folded into canonicals
  void write_csv(const std::string& path) const;
};

struct DedupOptions {
  double similarity_threshold = 0.84;
  ReferenceNormalization normalization = ReferenceNormalization::strip_pagination_and_lowercase;
  // Compare only references sharing their first whitespace-delimited token.
  // Cheaper on large inputs; may miss merges across diverging first tokens.
  bool block_on_first_token = false;
};

struct DedupResult {
  CitationNetwork network;
  MergeReport report;
};

// Groups cited documents whose normalized raw_reference strings reach the
// similarity threshold, collapses each group onto its lexicographically
// smallest id, and rebuilds the network with re-targeted, re-deduplicated
// edges.
DedupResult dedup_references(const CitationNetwork& network, const DedupOptions& options);

struct CoreSet {
  double quantile = 0.0;
  std::uint32_t threshold = 0;  // minimum in-degree of a core source
  struct Member {
    DocumentId id;
    std::uint32_t in_degree;
    std::uint32_t cited_index;  // into the network the set was selected from
  };
  std::vector<Member> members;  // in-degree descending, then id ascending
};

// Top in-degree quantile of the cited sources, nearest-rank convention with
// tie inclusion: threshold = value at rank ceil(q * n) of the ascending
// in-degree list, members = every source at or above it.
CoreSet select_core(const CitationNetwork& network, double quantile);

}  // namespace corelit
