#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corelit/citation_network.hpp"

namespace corelit {

enum class PlantedRole { local, global, pair_bridge };

std::string_view planted_role_name(PlantedRole role);

struct PlantedCore {
  PlantedRole role = PlantedRole::local;
  std::uint32_t community_a = 0;  // local target, or first bridge endpoint
  std::uint32_t community_b = 0;  // second bridge endpoint
  std::uint32_t citer_count = 30;
};

// Synthetic citation network with planted community structure: citing
// documents cite mostly from their own community's source pool, plus a small
// cross-community noise fraction, plus engineered core sources with known
// structural roles.
struct SynthSpec {
  std::uint32_t communities = 4;
  std::uint32_t citing_per_community = 100;
  std::uint32_t background_pool_per_community = 1000;
  double mean_citations = 20.0;
  double noise_fraction = 0.05;
  std::vector<PlantedCore> planted;
  std::uint64_t seed = 0;
};

struct SynthResult {
  CitationNetwork network;
  // Planted community per citing vertex, aligned with network.citing_ids().
  std::vector<std::uint32_t> citing_community;
  struct CoreTruth {
    DocumentId id;
    PlantedCore core;
  };
  std::vector<CoreTruth> cores;

  void write_truth_csv(const std::string& path) const;
};

SynthResult generate(const SynthSpec& spec);

}  // namespace corelit
