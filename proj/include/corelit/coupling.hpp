#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corelit/citation_network.hpp"

namespace corelit {

enum class Weighting { raw, fractional };

std::string_view weighting_name(Weighting w);

struct CouplingEdge {
  std::uint32_t i;  // i < j, indices into vertices()
  std::uint32_t j;
  double weight;
};

// Weighted undirected projection of a citation network onto its citing
// publications. Vertices keep the citing set's order, so a citing index in
// the source network addresses the same document here. Immutable.
class CouplingNetwork {
 public:
  CouplingNetwork() = default;
  CouplingNetwork(std::vector<DocumentId> vertices, std::vector<CouplingEdge> edges,
                  Weighting weighting);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<DocumentId>& vertices() const { return vertices_; }
  std::span<const CouplingEdge> edges() const { return edges_; }
  Weighting weighting() const { return weighting_; }

  double total_weight() const { return total_weight_; }          // w
  double strength(std::uint32_t v) const { return strength_[v]; }  // W_{v,*}
  std::span<const double> strengths() const { return strength_; }

  double density() const;  // |E| / C(|V|, 2)

  struct ComponentStats {
    std::size_t components = 0;
    std::size_t giant_size = 0;
    double giant_fraction = 0.0;
  };
  ComponentStats component_stats() const;

  void write_csv(const std::string& path) const;  // source_i,source_j,weight, id-lexicographic

 private:
  std::vector<DocumentId> vertices_;
  std::vector<CouplingEdge> edges_;  // sorted by (i, j)
  std::vector<double> strength_;
  double total_weight_ = 0.0;
  Weighting weighting_ = Weighting::raw;
};

struct ProjectionOptions {
  Weighting weighting = Weighting::raw;
  // A single source citing n publications emits C(n,2) pair increments; warn
  // before a degenerate source blows the projection up.
  std::uint64_t pair_budget = 100'000'000;
  std::function<void(const std::string&)> warn;  // defaults to stderr
};

// W_{i,j} = number of cited sources shared by i and j (raw), or the sum of
// 1/(n_c - 1) over shared sources c (fractional).
CouplingNetwork project_coupling(const CitationNetwork& network,
                                 const ProjectionOptions& options = {});
CouplingNetwork project_coupling(const CitationNetwork& network, Weighting weighting);

// The coupled pairs one cited source contributes to the projection.
struct SourceContribution {
  DocumentId source;
  double pair_weight = 1.0;  // 1 raw, 1/(n_c - 1) fractional
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;  // citing indices, first < second
  double total_weight() const { return pair_weight * static_cast<double>(pairs.size()); }
};

SourceContribution source_contribution(const CitationNetwork& network, std::string_view source_id,
                                       Weighting weighting = Weighting::raw);

}  // namespace corelit
