#include "corelit/null_model.hpp"

#include <unordered_set>

#include "corelit/csv.hpp"
#include "corelit/errors.hpp"
#include "corelit/rng.hpp"

namespace corelit {

ConfigurationSample configuration_sample(const CitationNetwork& network, std::uint64_t seed) {
  if (network.edge_count() == 0) {
    throw empty_network_error("configuration model requires at least one edge");
  }

  ConfigurationSample sample;
  sample.seed = seed;
  sample.permuted_cited.assign(network.edge_cited().begin(), network.edge_cited().end());
  Rng rng(seed);
  shuffle(sample.permuted_cited, rng);

  auto citing = network.edge_citing();
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(citing.size() * 2);
  sample.edges.reserve(citing.size());
  for (std::size_t e = 0; e < citing.size(); ++e) {
    std::uint32_t s = sample.permuted_cited[e];
    if (network.citing_twin(s) == static_cast<std::int32_t>(citing[e])) {
      ++sample.dropped;  // self-loop: the citing document is the cited one
      continue;
    }
    std::uint64_t key = (static_cast<std::uint64_t>(citing[e]) << 32) | s;
    if (!seen.insert(key).second) {
      ++sample.dropped;
      continue;
    }
    sample.edges.emplace_back(citing[e], s);
  }
  return sample;
}

std::vector<ConfigurationSample> null_ensemble(const CitationNetwork& network, std::size_t count,
                                               std::uint64_t master_seed) {
  if (count < 1) throw config_error("null ensemble needs count >= 1");
  std::vector<ConfigurationSample> samples;
  samples.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    samples.push_back(configuration_sample(network, derive_seed(master_seed, n)));
    samples.back().index = n;
  }
  return samples;
}

void ConfigurationSample::write_csv(const CitationNetwork& network, const std::string& path) const {
  CsvWriter out(path);
  out.row({"citing_id", "cited_id"});
  for (const auto& [citing, cited] : edges) {
    out.row({network.citing_ids()[citing], network.cited_ids()[cited]});
  }
  out.close();
}

}  // namespace corelit
