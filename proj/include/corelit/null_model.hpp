#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corelit/citation_network.hpp"

namespace corelit {

// One degree-preserving randomization of a citation network: the cited
// endpoint array permuted against the fixed citing array, then simplified.
struct ConfigurationSample {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  // Pre-simplification permuted cited endpoint per edge slot. Citing
  // out-degrees and cited in-degrees are exactly preserved at this stage.
  std::vector<std::uint32_t> permuted_cited;
  // Post-simplification edges (citing, cited); duplicates and self-loops
  // removed, first occurrence kept.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::uint32_t dropped = 0;

  void write_csv(const CitationNetwork& network, const std::string& path) const;
};

ConfigurationSample configuration_sample(const CitationNetwork& network, std::uint64_t seed);

// `count` samples with seeds derived from the master seed.
std::vector<ConfigurationSample> null_ensemble(const CitationNetwork& network, std::size_t count,
                                               std::uint64_t master_seed);

}  // namespace corelit
