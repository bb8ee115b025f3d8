#include "corelit/community.hpp"

#include <algorithm>
#include <numeric>

#include "corelit/csv.hpp"
#include "corelit/errors.hpp"
#include "corelit/parallel.hpp"
#include "corelit/rng.hpp"

namespace corelit {

double modularity(const CouplingNetwork& coupling, std::span<const std::uint32_t> assignment) {
  if (assignment.size() != coupling.vertex_count()) {
    throw contract_error("assignment must cover every vertex of the coupling network");
  }
  const double w = coupling.total_weight();
  if (!(w > 0.0)) throw modularity_undefined_error("modularity undefined for zero total weight");

  std::uint32_t max_label = 0;
  for (std::uint32_t l : assignment) max_label = std::max(max_label, l);

  // Q = sum_C [ W_in(C)/w - (S_C / 2w)^2 ], the per-community form of the
  // ordered-pair definition.
  std::vector<double> within(max_label + 1, 0.0);
  std::vector<double> strength_sum(max_label + 1, 0.0);
  for (const auto& e : coupling.edges()) {
    if (assignment[e.i] == assignment[e.j]) within[assignment[e.i]] += e.weight;
  }
  for (std::uint32_t v = 0; v < assignment.size(); ++v) {
    strength_sum[assignment[v]] += coupling.strength(v);
  }
  double q = 0.0;
  for (std::size_t c = 0; c < within.size(); ++c) {
    double share = strength_sum[c] / (2.0 * w);
    q += within[c] / w - share * share;
  }
  return q;
}

namespace {

// Working graph for the aggregation levels. Self-loop weight holds the full
// internal weight of the collapsed community (both edge directions), so
// strengths keep summing to 2w.
struct LevelGraph {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> neighbors;
  std::vector<double> weights;
  std::vector<double> self_loop;
  std::vector<double> strength;
  double two_w = 0.0;

  std::size_t size() const { return self_loop.size(); }
};

LevelGraph level_from_coupling(const CouplingNetwork& coupling) {
  LevelGraph g;
  const std::size_t n = coupling.vertex_count();
  g.offsets.assign(n + 1, 0);
  for (const auto& e : coupling.edges()) {
    ++g.offsets[e.i + 1];
    ++g.offsets[e.j + 1];
  }
  for (std::size_t i = 1; i <= n; ++i) g.offsets[i] += g.offsets[i - 1];
  g.neighbors.resize(g.offsets[n]);
  g.weights.resize(g.offsets[n]);
  std::vector<std::size_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
  for (const auto& e : coupling.edges()) {
    g.neighbors[cursor[e.i]] = e.j;
    g.weights[cursor[e.i]++] = e.weight;
    g.neighbors[cursor[e.j]] = e.i;
    g.weights[cursor[e.j]++] = e.weight;
  }
  g.self_loop.assign(n, 0.0);
  g.strength.assign(n, 0.0);
  for (std::uint32_t v = 0; v < n; ++v) g.strength[v] = coupling.strength(v);
  g.two_w = 2.0 * coupling.total_weight();
  return g;
}

// One round of local moves; returns true if any vertex changed community.
bool move_phase(const LevelGraph& g, std::vector<std::uint32_t>& comm, double resolution,
                Rng& rng) {
  const std::size_t n = g.size();
  std::vector<double> community_strength(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) community_strength[comm[v]] += g.strength[v];

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  shuffle(order, rng);

  std::vector<double> weight_to(n, 0.0);
  std::vector<std::uint32_t> touched;
  touched.reserve(64);

  bool any_move = false;
  bool moved_this_pass = true;
  std::size_t pass = 0;
  // A strictly improving move raises Q every time, so this terminates; the
  // cap only guards against floating-point pathologies.
  const std::size_t max_passes = 10 * n + 100;
  while (moved_this_pass && pass++ < max_passes) {
    moved_this_pass = false;
    for (std::uint32_t v : order) {
      if (g.strength[v] == 0.0) continue;  // isolated: every move has gain <= 0
      const std::uint32_t old_comm = comm[v];

      touched.clear();
      for (std::size_t k = g.offsets[v]; k < g.offsets[v + 1]; ++k) {
        std::uint32_t c = comm[g.neighbors[k]];
        if (weight_to[c] == 0.0) touched.push_back(c);
        weight_to[c] += g.weights[k];
      }

      community_strength[old_comm] -= g.strength[v];
      const double scale = resolution * g.strength[v] / g.two_w;
      double best_gain = weight_to[old_comm] - scale * community_strength[old_comm];
      std::uint32_t best_comm = old_comm;
      for (std::uint32_t c : touched) {
        if (c == old_comm) continue;
        double gain = weight_to[c] - scale * community_strength[c];
        if (gain > best_gain || (gain == best_gain && best_comm != old_comm && c < best_comm)) {
          best_gain = gain;
          best_comm = c;
        }
      }
      community_strength[best_comm] += g.strength[v];
      comm[v] = best_comm;
      if (best_comm != old_comm) {
        moved_this_pass = true;
        any_move = true;
      }
      for (std::uint32_t c : touched) weight_to[c] = 0.0;
    }
  }
  return any_move;
}

// Relabels communities densely in order of first appearance.
std::uint32_t compact_labels(std::vector<std::uint32_t>& comm) {
  std::vector<std::uint32_t> remap(comm.size(), UINT32_MAX);
  std::uint32_t next = 0;
  for (auto& c : comm) {
    if (remap[c] == UINT32_MAX) remap[c] = next++;
    c = remap[c];
  }
  return next;
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<std::uint32_t>& comm,
                     std::uint32_t communities) {
  LevelGraph agg;
  agg.self_loop.assign(communities, 0.0);
  agg.strength.assign(communities, 0.0);
  agg.two_w = g.two_w;

  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(communities);
  for (std::uint32_t v = 0; v < g.size(); ++v) {
    std::uint32_t cv = comm[v];
    agg.self_loop[cv] += g.self_loop[v];
    agg.strength[cv] += g.strength[v];
    for (std::size_t k = g.offsets[v]; k < g.offsets[v + 1]; ++k) {
      std::uint32_t cu = comm[g.neighbors[k]];
      if (cu == cv) {
        agg.self_loop[cv] += g.weights[k];  // both directions pass through here
      } else {
        rows[cv].emplace_back(cu, g.weights[k]);
      }
    }
  }

  agg.offsets.assign(communities + 1, 0);
  for (std::uint32_t c = 0; c < communities; ++c) {
    auto& row = rows[c];
    std::sort(row.begin(), row.end());
    std::size_t out = 0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (out > 0 && row[out - 1].first == row[k].first) {
        row[out - 1].second += row[k].second;
      } else {
        row[out++] = row[k];
      }
    }
    row.resize(out);
    agg.offsets[c + 1] = agg.offsets[c] + out;
  }
  agg.neighbors.resize(agg.offsets[communities]);
  agg.weights.resize(agg.offsets[communities]);
  for (std::uint32_t c = 0; c < communities; ++c) {
    std::size_t base = agg.offsets[c];
    for (std::size_t k = 0; k < rows[c].size(); ++k) {
      agg.neighbors[base + k] = rows[c][k].first;
      agg.weights[base + k] = rows[c][k].second;
    }
  }
  return agg;
}

}  // namespace

Partition louvain(const CouplingNetwork& coupling, double resolution, std::uint64_t seed) {
  if (coupling.vertex_count() == 0) throw contract_error("louvain requires at least one vertex");
  if (!(resolution > 0.0)) throw config_error("resolution must be positive");

  const std::size_t n = coupling.vertex_count();
  Partition result;
  result.resolution = resolution;
  result.seed = seed;
  result.assignment.resize(n);
  std::iota(result.assignment.begin(), result.assignment.end(), 0u);

  if (coupling.total_weight() > 0.0) {
    Rng rng(seed);
    LevelGraph level = level_from_coupling(coupling);
    std::vector<std::uint32_t> comm(level.size());
    std::iota(comm.begin(), comm.end(), 0u);

    while (true) {
      bool improved = move_phase(level, comm, resolution, rng);
      if (!improved) break;
      std::uint32_t communities = compact_labels(comm);
      for (auto& a : result.assignment) a = comm[a];
      if (communities == level.size()) break;
      level = aggregate(level, comm, communities);
      comm.resize(communities);
      std::iota(comm.begin(), comm.end(), 0u);
    }
  }

  result.community_count = compact_labels(result.assignment);
  result.modularity =
      coupling.total_weight() > 0.0 ? modularity(coupling, result.assignment) : 0.0;
  return result;
}

double PartitionEnsemble::mean_modularity() const {
  if (partitions.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : partitions) sum += p.modularity;
  return sum / static_cast<double>(partitions.size());
}

PartitionEnsemble partition_ensemble(const CouplingNetwork& coupling, std::size_t count,
                                     double resolution, std::uint64_t master_seed,
                                     unsigned workers) {
  if (count < 1) throw config_error("partition ensemble needs count >= 1");
  PartitionEnsemble ensemble;
  ensemble.resolution = resolution;
  ensemble.master_seed = master_seed;
  ensemble.partitions.resize(count);
  parallel_for(count, workers, [&](std::size_t k) {
    ensemble.partitions[k] = louvain(coupling, resolution, derive_seed(master_seed, k));
  });
  return ensemble;
}

void write_partition_csv(const CouplingNetwork& coupling, const Partition& partition,
                         std::size_t partition_index, const std::string& path) {
  CsvWriter out(path);
  out.row({"vertex_id", "partition_index", "community_label"});
  for (std::uint32_t v = 0; v < coupling.vertex_count(); ++v) {
    out.row({coupling.vertices()[v], std::to_string(partition_index),
             std::to_string(partition.assignment[v])});
  }
  out.close();
}

}  // namespace corelit
