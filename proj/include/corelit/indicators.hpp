#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "corelit/citation_network.hpp"
#include "corelit/community.hpp"
#include "corelit/coupling.hpp"

namespace corelit {

// Raw per-source, per-partition statistics: alpha = contributed weight on
// within-community coupled pairs, beta = on between-community pairs, gamma =
// the largest single-community share of alpha, delta = the largest
// single-community-pair share of beta.
struct RawIndicatorSet {
  DocumentId source;
  std::uint64_t partition_seed = 0;  // identifies the partition it was computed against
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double pair_weight = 1.0;
  std::vector<std::pair<std::uint32_t, double>> within_by_community;  // label ascending
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> between_by_pair;  // (l1<l2) ascending
  double total() const { return alpha + beta; }
};

// Configuration-model counterparts, summed over N samples against the same
// partition: chi/phi sum the per-sample alpha/beta, psi/omega sum the
// per-sample maxima.
struct NullIndicatorSet {
  DocumentId source;
  std::uint64_t partition_seed = 0;
  double chi = 0.0;
  double phi = 0.0;
  double psi = 0.0;
  double omega = 0.0;
  std::size_t sample_count = 0;
};

struct IndicatorValue {
  double value = 0.0;
  bool defined = false;
};

struct FinalIndicators {
  IndicatorValue within;      // a_c = alpha/(alpha+beta) - chi/(chi+phi)
  IndicatorValue between;     // b_c = -a_c
  IndicatorValue topicality;  // c_c = gamma/alpha - psi/chi
  IndicatorValue bridging;    // d_c = delta/beta - omega/phi
};

struct IndicatorOptions {
  Weighting weighting = Weighting::raw;
  // Bridging maxima over single-community marginals m_l * (T - m_l) instead
  // of community pairs; kept for comparison with the one-index reading.
  bool bridging_single_community = false;
};

struct FinalOptions {
  // Topicality denominators exactly as printed (gamma over the final within
  // indicator) rather than the weight ratio gamma/alpha. Results whose
  // denominator is within 1e-9 of zero are flagged undefined.
  bool literal_denominators = false;
};

RawIndicatorSet raw_indicators(const SourceContribution& contribution, const Partition& partition,
                               const IndicatorOptions& options = {});

// Per-sample seeds derive from (master_seed, sample index); the partition is
// held fixed while the citation network is resampled.
NullIndicatorSet null_indicators(const CitationNetwork& network, std::string_view source_id,
                                 const Partition& partition, std::size_t sample_count,
                                 std::uint64_t master_seed, const IndicatorOptions& options = {});

// Throws contract_error if raw and null describe different sources or
// partitions. Undefined components carry an explicit flag, never a silent
// zero.
FinalIndicators final_indicators(const RawIndicatorSet& raw, const NullIndicatorSet& null_set,
                                 const FinalOptions& options = {});

// Modularity of the partition restricted to the pairs coupled by one source;
// degrees and total weight come from the full coupling network.
struct ModularityWithin {
  double value = 0.0;
  bool defined = false;           // false when the source contributes no pairs
  bool has_within_pairs = false;  // false leaves only the empty sum, value 0
};

ModularityWithin modularity_within_indicator(const SourceContribution& contribution,
                                             const CouplingNetwork& coupling,
                                             const Partition& partition);

struct PartitionIndicators {
  FinalIndicators final;
  ModularityWithin a_star;
};

struct IndicatorRecord {
  DocumentId source;
  std::uint32_t in_degree = 0;
  std::vector<PartitionIndicators> per_partition;
  // Arithmetic means over the partitions where each indicator is defined.
  IndicatorValue within, between, topicality, bridging, a_star;
  std::uint32_t within_defined = 0;  // partitions contributing to the within mean
  std::uint32_t topicality_defined = 0;
  std::uint32_t bridging_defined = 0;
  std::uint32_t a_star_defined = 0;
};

struct EnsembleOptions {
  IndicatorOptions indicators;
  FinalOptions final;
  // Fresh null samples per partition (seeds derived from (master, partition,
  // sample)); sharing one stream across partitions trades fidelity for speed.
  bool share_null_across_partitions = false;
  unsigned workers = 0;
};

// Full per-core-source indicator table, averaged over the partition ensemble.
std::vector<IndicatorRecord> ensemble_indicators(const CitationNetwork& network,
                                                 const CouplingNetwork& coupling,
                                                 const CoreSet& core,
                                                 const PartitionEnsemble& ensemble,
                                                 std::size_t sample_count,
                                                 std::uint64_t master_seed,
                                                 const EnsembleOptions& options = {});

enum class IndicatorKind { within, between, topicality, bridging };

std::string_view indicator_name(IndicatorKind kind);
IndicatorValue indicator_of(const IndicatorRecord& record, IndicatorKind kind);

struct IndicatorSummary {
  struct Stat {
    double mean = 0.0;
    double median = 0.0;
    std::size_t count = 0;
  };
  Stat within, between, topicality, bridging;
  double modularity_mean = 0.0;
};

// Mean and median over defined records. Throws empty_summary_error when every
// indicator of every record is undefined.
IndicatorSummary indicator_summary(const std::vector<IndicatorRecord>& records,
                                   double modularity_mean);

// Pearson and Spearman correlations among within, topicality, bridging and
// in-degree (between omitted, it is the mirror of within). Spearman uses
// average ranks for ties. Pairs are computed over records where both
// variables are defined; zero variance flags the pair undefined.
struct CorrelationMatrix {
  static constexpr std::size_t kVariables = 4;
  static const char* variable_name(std::size_t i);
  struct Cell {
    double value = 0.0;
    bool defined = false;
  };
  Cell pearson[kVariables][kVariables];
  Cell spearman[kVariables][kVariables];
};

CorrelationMatrix indicator_correlations(const std::vector<IndicatorRecord>& records);

struct TopEntry {
  const IndicatorRecord* record = nullptr;
  double value = 0.0;
  bool defined = false;
};

// Records ranked by one indicator, descending; undefined last; ties broken by
// in-degree descending then id ascending.
std::vector<TopEntry> top_k(const std::vector<IndicatorRecord>& records, IndicatorKind kind,
                            std::size_t k);

}  // namespace corelit
