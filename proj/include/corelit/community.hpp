#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "corelit/coupling.hpp"

namespace corelit {

// Hard partition of a coupling network's vertices. Labels are dense 0..K-1
// with no empty community; `modularity` is recomputed from scratch on the
// final assignment.
struct Partition {
  std::vector<std::uint32_t> assignment;
  std::uint32_t community_count = 0;
  double modularity = 0.0;
  double resolution = 1.0;
  std::uint64_t seed = 0;
};

// Weighted modularity at resolution one:
//   Q = (1/2w) sum_{i,j} [W_ij - W_i* W_j* / 2w] delta(l_i, l_j)
// over ordered pairs with W_ii = 0. Throws modularity_undefined_error when
// the network has zero total weight.
double modularity(const CouplingNetwork& coupling, std::span<const std::uint32_t> assignment);

// Seeded Louvain: repeated local-move passes over a shuffled vertex order,
// then aggregation, until no move improves modularity. Equal-gain targets tie
// toward the lowest community label and zero-gain moves are rejected, so a
// fixed seed fully determines the result. Isolated vertices stay singletons.
Partition louvain(const CouplingNetwork& coupling, double resolution, std::uint64_t seed);

struct PartitionEnsemble {
  std::vector<Partition> partitions;
  double resolution = 1.0;
  std::uint64_t master_seed = 0;

  double mean_modularity() const;
};

// `count` Louvain runs with per-run seeds derived from the master seed. Runs
// are independent, so they execute in parallel (bounded by `workers`; zero
// means hardware concurrency).
PartitionEnsemble partition_ensemble(const CouplingNetwork& coupling, std::size_t count,
                                     double resolution, std::uint64_t master_seed,
                                     unsigned workers = 0);

void write_partition_csv(const CouplingNetwork& coupling, const Partition& partition,
                         std::size_t partition_index, const std::string& path);

}  // namespace corelit
