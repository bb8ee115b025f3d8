#include "corelit/coupling.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <unordered_map>

#include "corelit/csv.hpp"
#include "corelit/errors.hpp"

namespace corelit {

std::string_view weighting_name(Weighting w) {
  return w == Weighting::raw ? "raw" : "fractional";
}

CouplingNetwork::CouplingNetwork(std::vector<DocumentId> vertices, std::vector<CouplingEdge> edges,
                                 Weighting weighting)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), weighting_(weighting) {
  for (auto& e : edges_) {
    if (e.i == e.j) throw contract_error("coupling network may not contain self-pairs");
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.j >= vertices_.size()) throw contract_error("coupling edge endpoint out of range");
    if (!(e.weight > 0.0)) throw contract_error("coupling edge weights must be positive");
  }
  std::sort(edges_.begin(), edges_.end(), [](const CouplingEdge& a, const CouplingEdge& b) {
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].i == edges_[k - 1].i && edges_[k].j == edges_[k - 1].j) {
      throw contract_error("duplicate coupling edge");
    }
  }
  strength_.assign(vertices_.size(), 0.0);
  for (const auto& e : edges_) {
    strength_[e.i] += e.weight;
    strength_[e.j] += e.weight;
    total_weight_ += e.weight;
  }
}

double CouplingNetwork::density() const {
  std::size_t n = vertices_.size();
  if (n < 2) return 0.0;
  double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return static_cast<double>(edges_.size()) / pairs;
}

CouplingNetwork::ComponentStats CouplingNetwork::component_stats() const {
  std::vector<std::uint32_t> parent(vertices_.size());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges_) {
    auto a = find(e.i), b = find(e.j);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::unordered_map<std::uint32_t, std::size_t> sizes;
  for (std::uint32_t v = 0; v < parent.size(); ++v) ++sizes[find(v)];
  ComponentStats stats;
  stats.components = sizes.size();
  for (const auto& [root, size] : sizes) stats.giant_size = std::max(stats.giant_size, size);
  stats.giant_fraction =
      vertices_.empty() ? 0.0
                        : static_cast<double>(stats.giant_size) / static_cast<double>(vertices_.size());
  return stats;
}

void CouplingNetwork::write_csv(const std::string& path) const {
  std::vector<std::tuple<std::string_view, std::string_view, double>> rows;
  rows.reserve(edges_.size());
  for (const auto& e : edges_) {
    std::string_view a = vertices_[e.i], b = vertices_[e.j];
    if (b < a) std::swap(a, b);
    rows.emplace_back(a, b, e.weight);
  }
  std::sort(rows.begin(), rows.end());
  CsvWriter out(path);
  out.row({"source_i", "source_j", "weight"});
  for (const auto& [a, b, w] : rows) {
    out.row({std::string(a), std::string(b), format_double(w)});
  }
  out.close();
}

CouplingNetwork project_coupling(const CitationNetwork& network, const ProjectionOptions& options) {
  if (network.edge_count() == 0) throw empty_network_error("cannot project an empty network");

  auto warn = options.warn ? options.warn : [](const std::string& msg) {
    std::cerr << "warning: " << msg << "\n";
  };

  std::unordered_map<std::uint64_t, double> weights;
  for (std::uint32_t s = 0; s < network.cited_count(); ++s) {
    auto citers = network.citers_of(s);
    const std::size_t n = citers.size();
    if (n < 2) continue;
    std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (pairs > options.pair_budget) {
      warn("source '" + network.cited_ids()[s] + "' emits " + std::to_string(pairs) +
           " coupled pairs, over the configured budget of " + std::to_string(options.pair_budget));
    }
    double w = options.weighting == Weighting::raw ? 1.0 : 1.0 / static_cast<double>(n - 1);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        weights[(static_cast<std::uint64_t>(citers[a]) << 32) | citers[b]] += w;
      }
    }
  }

  std::vector<CouplingEdge> edges;
  edges.reserve(weights.size());
  for (const auto& [key, w] : weights) {
    edges.push_back({static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key), w});
  }
  return CouplingNetwork(network.citing_ids(), std::move(edges), options.weighting);
}

CouplingNetwork project_coupling(const CitationNetwork& network, Weighting weighting) {
  ProjectionOptions options;
  options.weighting = weighting;
  return project_coupling(network, options);
}

SourceContribution source_contribution(const CitationNetwork& network, std::string_view source_id,
                                       Weighting weighting) {
  auto idx = network.cited_index(source_id);
  if (!idx) throw lookup_error("unknown cited source '" + std::string(source_id) + "'");

  auto citers = network.citers_of(*idx);
  SourceContribution contribution;
  contribution.source = std::string(source_id);
  const std::size_t n = citers.size();
  contribution.pair_weight =
      (weighting == Weighting::raw || n < 2) ? 1.0 : 1.0 / static_cast<double>(n - 1);
  contribution.pairs.reserve(n < 2 ? 0 : n * (n - 1) / 2);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      contribution.pairs.emplace_back(citers[a], citers[b]);
    }
  }
  return contribution;
}

}  // namespace corelit
