#include "corelit/synth.hpp"

#include <algorithm>
#include <cmath>

#include "corelit/csv.hpp"
#include "corelit/errors.hpp"
#include "corelit/rng.hpp"

namespace corelit {

std::string_view planted_role_name(PlantedRole role) {
  switch (role) {
    case PlantedRole::local: return "local";
    case PlantedRole::global: return "global";
    case PlantedRole::pair_bridge: return "pair-bridge";
  }
  return "local";
}

namespace {

std::string padded(std::uint32_t value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

// Knuth's Poisson sampler; means here stay small.
std::uint32_t poisson(Rng& rng, double mean) {
  double limit = std::exp(-mean);
  double product = rng.uniform();
  std::uint32_t count = 0;
  while (product > limit) {
    ++count;
    product *= rng.uniform();
  }
  return count;
}

// First `count` elements of a seeded partial shuffle of [0, n).
std::vector<std::uint32_t> sample_without_replacement(Rng& rng, std::uint32_t n,
                                                      std::uint32_t count) {
  std::vector<std::uint32_t> pool(n);
  for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint32_t j = i + static_cast<std::uint32_t>(rng.bounded(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace

SynthResult generate(const SynthSpec& spec) {
  if (spec.communities == 0 || spec.citing_per_community == 0 ||
      spec.background_pool_per_community == 0) {
    throw config_error("synth spec sizes must be positive");
  }
  if (spec.noise_fraction < 0.0 || spec.noise_fraction > 1.0) {
    throw config_error("noise fraction must lie in [0,1]");
  }
  if (!(spec.mean_citations > 0.0)) throw config_error("mean citations must be positive");
  for (const auto& core : spec.planted) {
    switch (core.role) {
      case PlantedRole::local:
        if (core.community_a >= spec.communities) throw config_error("planted community out of range");
        if (core.citer_count > spec.citing_per_community) {
          throw config_error("local core citer count exceeds its community size");
        }
        break;
      case PlantedRole::pair_bridge: {
        if (core.community_a >= spec.communities || core.community_b >= spec.communities ||
            core.community_a == core.community_b) {
          throw config_error("pair-bridge core needs two distinct communities");
        }
        std::uint32_t half = (core.citer_count + 1) / 2;
        if (half > spec.citing_per_community) {
          throw config_error("pair-bridge core citer count exceeds its community sizes");
        }
        break;
      }
      case PlantedRole::global: {
        std::uint32_t share = (core.citer_count + spec.communities - 1) / spec.communities;
        if (share > spec.citing_per_community) {
          throw config_error("global core citer count exceeds the community sizes");
        }
        break;
      }
    }
  }

  const std::uint32_t k = spec.communities;
  const std::uint32_t per = spec.citing_per_community;
  const std::uint32_t citing_total = k * per;

  SynthResult result;
  std::vector<DocumentId> citing_ids(citing_total);
  result.citing_community.resize(citing_total);
  for (std::uint32_t c = 0; c < k; ++c) {
    for (std::uint32_t i = 0; i < per; ++i) {
      std::uint32_t v = c * per + i;
      citing_ids[v] = "p" + padded(c, 2) + "_" + padded(i, 4);
      result.citing_community[v] = c;
    }
  }
  auto pool_id = [&](std::uint32_t community, std::uint32_t index) {
    return "b" + padded(community, 2) + "_" + padded(index, 5);
  };

  Rng rng(spec.seed);
  std::vector<std::pair<DocumentId, DocumentId>> rows;
  rows.reserve(static_cast<std::size_t>(citing_total * spec.mean_citations));

  for (std::uint32_t v = 0; v < citing_total; ++v) {
    std::uint32_t home = result.citing_community[v];
    std::uint32_t references = poisson(rng, spec.mean_citations);
    for (std::uint32_t r = 0; r < references; ++r) {
      std::uint32_t community = home;
      if (k > 1 && rng.uniform() < spec.noise_fraction) {
        std::uint32_t other = static_cast<std::uint32_t>(rng.bounded(k - 1));
        community = other >= home ? other + 1 : other;
      }
      std::uint32_t s = static_cast<std::uint32_t>(rng.bounded(spec.background_pool_per_community));
      rows.emplace_back(citing_ids[v], pool_id(community, s));
    }
  }

  for (std::size_t n = 0; n < spec.planted.size(); ++n) {
    const PlantedCore& core = spec.planted[n];
    DocumentId id = "core" + padded(static_cast<std::uint32_t>(n), 2) + "_" +
                    std::string(planted_role_name(core.role));
    std::vector<std::uint32_t> citers;
    switch (core.role) {
      case PlantedRole::local: {
        auto picks = sample_without_replacement(rng, per, core.citer_count);
        for (std::uint32_t p : picks) citers.push_back(core.community_a * per + p);
        break;
      }
      case PlantedRole::pair_bridge: {
        std::uint32_t first_half = core.citer_count / 2 + core.citer_count % 2;
        auto picks_a = sample_without_replacement(rng, per, first_half);
        auto picks_b = sample_without_replacement(rng, per, core.citer_count - first_half);
        for (std::uint32_t p : picks_a) citers.push_back(core.community_a * per + p);
        for (std::uint32_t p : picks_b) citers.push_back(core.community_b * per + p);
        break;
      }
      case PlantedRole::global: {
        // Round-robin across communities, as even as the count allows.
        for (std::uint32_t c = 0; c < k; ++c) {
          std::uint32_t share = core.citer_count / k + (c < core.citer_count % k ? 1 : 0);
          auto picks = sample_without_replacement(rng, per, share);
          for (std::uint32_t p : picks) citers.push_back(c * per + p);
        }
        break;
      }
    }
    for (std::uint32_t v : citers) rows.emplace_back(citing_ids[v], id);
    result.cores.push_back({std::move(id), core});
  }

  result.network = CitationNetwork::build(rows);

  // Citing docs that drew zero references never enter the network, so the
  // community labels are re-aligned to the built citing order.
  std::vector<std::uint32_t> aligned(result.network.citing_count());
  for (std::uint32_t c = 0; c < k; ++c) {
    for (std::uint32_t i = 0; i < per; ++i) {
      auto idx = result.network.citing_index(citing_ids[c * per + i]);
      if (idx) aligned[*idx] = c;
    }
  }
  result.citing_community = std::move(aligned);
  return result;
}

void SynthResult::write_truth_csv(const std::string& path) const {
  CsvWriter out(path);
  out.row({"id", "role", "community"});
  for (std::uint32_t v = 0; v < network.citing_count(); ++v) {
    out.row({network.citing_ids()[v], "citing", std::to_string(citing_community[v])});
  }
  for (const auto& truth : cores) {
    std::string community;
    switch (truth.core.role) {
      case PlantedRole::local: community = std::to_string(truth.core.community_a); break;
      case PlantedRole::pair_bridge:
        community = std::to_string(truth.core.community_a) + "|" +
                    std::to_string(truth.core.community_b);
        break;
      case PlantedRole::global: community = ""; break;
    }
    out.row({truth.id, std::string(planted_role_name(truth.core.role)), community});
  }
  out.close();
}

}  // namespace corelit
