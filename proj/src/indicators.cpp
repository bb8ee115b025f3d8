#include "corelit/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "corelit/errors.hpp"
#include "corelit/parallel.hpp"
#include "corelit/rng.hpp"

namespace corelit {

namespace {

double pair_count(std::uint64_t n) {
  return 0.5 * static_cast<double>(n) * static_cast<double>(n > 0 ? n - 1 : 0);
}

// Pair statistics of a citer multiplicity vector: m_l citers per community l.
struct LabelPairStats {
  std::uint64_t total_citers = 0;
  double total_pairs = 0.0;
  double within_pairs = 0.0;   // sum_l C(m_l, 2)
  double max_within = 0.0;     // C(max_l m_l, 2)
  double max_between = 0.0;    // max over community pairs (or marginals)
};

// Scratch for repeated per-source label counting; avoids reallocating in the
// null-sample loop.
struct LabelCounter {
  std::vector<std::uint32_t> count;
  std::vector<std::uint32_t> touched;

  void init(std::uint32_t communities) { count.assign(communities, 0); }

  void add(std::uint32_t label) {
    if (count[label]++ == 0) touched.push_back(label);
  }

  LabelPairStats stats(bool bridging_single_community) {
    LabelPairStats s;
    std::uint64_t top1 = 0, top2 = 0;
    for (std::uint32_t l : touched) {
      std::uint64_t m = count[l];
      s.total_citers += m;
      s.within_pairs += pair_count(m);
      if (m >= top1) {
        top2 = top1;
        top1 = m;
      } else if (m > top2) {
        top2 = m;
      }
    }
    s.total_pairs = pair_count(s.total_citers);
    s.max_within = pair_count(top1);
    if (bridging_single_community) {
      for (std::uint32_t l : touched) {
        std::uint64_t m = count[l];
        double marginal = static_cast<double>(m) * static_cast<double>(s.total_citers - m);
        s.max_between = std::max(s.max_between, marginal);
      }
    } else {
      s.max_between = static_cast<double>(top1) * static_cast<double>(top2);
    }
    return s;
  }

  void reset() {
    for (std::uint32_t l : touched) count[l] = 0;
    touched.clear();
  }
};

FinalIndicators finalize(double alpha, double beta, double gamma, double delta, double chi,
                         double phi, double psi, double omega, const FinalOptions& options) {
  FinalIndicators f;
  const double raw_total = alpha + beta;
  const double null_total = chi + phi;
  if (raw_total > 0.0 && null_total > 0.0) {
    f.within = {alpha / raw_total - chi / null_total, true};
    f.between = {-f.within.value, true};
  }
  if (!options.literal_denominators) {
    if (alpha > 0.0 && chi > 0.0) f.topicality = {gamma / alpha - psi / chi, true};
    if (beta > 0.0 && phi > 0.0) f.bridging = {delta / beta - omega / phi, true};
  } else {
    // Printed form: gamma over the final within indicator (and delta over
    // between). Degenerate near zero, hence the explicit undefined flag.
    if (f.within.defined && std::abs(f.within.value) >= 1e-9 && chi > 0.0) {
      f.topicality = {gamma / f.within.value - psi / chi, true};
    }
    if (f.between.defined && std::abs(f.between.value) >= 1e-9 && phi > 0.0) {
      f.bridging = {delta / f.between.value - omega / phi, true};
    }
  }
  return f;
}

void validate_partition_labels(const Partition& partition) {
  for (std::uint32_t l : partition.assignment) {
    if (l >= partition.community_count) {
      throw contract_error("partition label exceeds its community count");
    }
  }
}

}  // namespace

RawIndicatorSet raw_indicators(const SourceContribution& contribution, const Partition& partition,
                               const IndicatorOptions& options) {
  RawIndicatorSet raw;
  raw.source = contribution.source;
  raw.partition_seed = partition.seed;
  raw.pair_weight = contribution.pair_weight;

  std::map<std::uint32_t, double> within;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> between;
  for (const auto& [i, j] : contribution.pairs) {
    if (i >= partition.assignment.size() || j >= partition.assignment.size()) {
      throw contract_error("coupled pair outside the partitioned vertex set");
    }
    std::uint32_t li = partition.assignment[i], lj = partition.assignment[j];
    if (li == lj) {
      within[li] += contribution.pair_weight;
    } else {
      between[{std::min(li, lj), std::max(li, lj)}] += contribution.pair_weight;
    }
  }

  for (const auto& [label, weight] : within) {
    raw.within_by_community.emplace_back(label, weight);
    raw.alpha += weight;
    raw.gamma = std::max(raw.gamma, weight);
  }
  if (options.bridging_single_community) {
    std::map<std::uint32_t, double> marginal;
    for (const auto& [labels, weight] : between) {
      marginal[labels.first] += weight;
      marginal[labels.second] += weight;
    }
    for (const auto& [label, weight] : marginal) raw.delta = std::max(raw.delta, weight);
  }
  for (const auto& [labels, weight] : between) {
    raw.between_by_pair.emplace_back(labels.first, labels.second, weight);
    raw.beta += weight;
    if (!options.bridging_single_community) raw.delta = std::max(raw.delta, weight);
  }
  return raw;
}

namespace {

// Accumulates chi/phi/psi/omega for a set of tracked cited sources over
// seeded configuration samples. Never materializes the sampled coupling
// network: only the tracked sources' citer lists are needed.
class NullSampler {
 public:
  NullSampler(const CitationNetwork& network, const std::vector<std::uint32_t>& tracked_cited,
              const Partition& partition, IndicatorOptions options)
      : network_(network), tracked_(tracked_cited), options_(options), partition_(partition) {
    slot_of_.assign(network.cited_count(), -1);
    for (std::size_t t = 0; t < tracked_.size(); ++t) {
      slot_of_[tracked_[t]] = static_cast<std::int32_t>(t);
    }
    buckets_.resize(tracked_.size());
    counter_.init(partition.community_count);
    scratch_.assign(network.edge_cited().begin(), network.edge_cited().end());
  }

  struct Sums {
    double chi = 0.0, phi = 0.0, psi = 0.0, omega = 0.0;
  };

  void run_sample(std::uint64_t seed, std::vector<Sums>& acc) {
    std::copy(network_.edge_cited().begin(), network_.edge_cited().end(), scratch_.begin());
    Rng rng(seed);
    shuffle(scratch_, rng);

    auto citing = network_.edge_citing();
    for (std::size_t e = 0; e < scratch_.size(); ++e) {
      std::int32_t slot = slot_of_[scratch_[e]];
      if (slot >= 0) buckets_[slot].push_back(citing[e]);
    }

    for (std::size_t t = 0; t < tracked_.size(); ++t) {
      auto& bucket = buckets_[t];
      std::sort(bucket.begin(), bucket.end());
      bucket.erase(std::unique(bucket.begin(), bucket.end()), bucket.end());
      std::int32_t twin = network_.citing_twin(tracked_[t]);
      if (twin >= 0) {
        auto it = std::lower_bound(bucket.begin(), bucket.end(), static_cast<std::uint32_t>(twin));
        if (it != bucket.end() && *it == static_cast<std::uint32_t>(twin)) bucket.erase(it);
      }
      if (bucket.size() >= 2) {
        for (std::uint32_t v : bucket) counter_.add(partition_.assignment[v]);
        LabelPairStats s = counter_.stats(options_.bridging_single_community);
        counter_.reset();
        double w = options_.weighting == Weighting::raw
                       ? 1.0
                       : 1.0 / static_cast<double>(s.total_citers - 1);
        acc[t].chi += w * s.within_pairs;
        acc[t].phi += w * (s.total_pairs - s.within_pairs);
        acc[t].psi += w * s.max_within;
        acc[t].omega += w * s.max_between;
      }
      bucket.clear();
    }
  }

 private:
  const CitationNetwork& network_;
  std::vector<std::uint32_t> tracked_;
  IndicatorOptions options_;
  const Partition& partition_;
  std::vector<std::int32_t> slot_of_;
  std::vector<std::vector<std::uint32_t>> buckets_;
  LabelCounter counter_;
  std::vector<std::uint32_t> scratch_;
};

}  // namespace

NullIndicatorSet null_indicators(const CitationNetwork& network, std::string_view source_id,
                                 const Partition& partition, std::size_t sample_count,
                                 std::uint64_t master_seed, const IndicatorOptions& options) {
  auto idx = network.cited_index(source_id);
  if (!idx) throw lookup_error("unknown cited source '" + std::string(source_id) + "'");
  if (partition.assignment.size() != network.citing_count()) {
    throw contract_error("partition does not cover the network's citing set");
  }
  validate_partition_labels(partition);

  NullIndicatorSet result;
  result.source = std::string(source_id);
  result.partition_seed = partition.seed;
  result.sample_count = sample_count;

  NullSampler sampler(network, {*idx}, partition, options);
  std::vector<NullSampler::Sums> acc(1);
  for (std::size_t n = 0; n < sample_count; ++n) {
    sampler.run_sample(derive_seed(master_seed, n), acc);
  }
  result.chi = acc[0].chi;
  result.phi = acc[0].phi;
  result.psi = acc[0].psi;
  result.omega = acc[0].omega;
  return result;
}

FinalIndicators final_indicators(const RawIndicatorSet& raw, const NullIndicatorSet& null_set,
                                 const FinalOptions& options) {
  if (raw.source != null_set.source) {
    throw contract_error("raw and null indicator sets describe different sources");
  }
  if (raw.partition_seed != null_set.partition_seed) {
    throw contract_error("raw and null indicator sets were computed against different partitions");
  }
  return finalize(raw.alpha, raw.beta, raw.gamma, raw.delta, null_set.chi, null_set.phi,
                  null_set.psi, null_set.omega, options);
}

ModularityWithin modularity_within_indicator(const SourceContribution& contribution,
                                             const CouplingNetwork& coupling,
                                             const Partition& partition) {
  ModularityWithin result;
  if (contribution.pairs.empty()) return result;  // zero contributed weight: flagged undefined
  if (partition.assignment.size() != coupling.vertex_count()) {
    throw contract_error("partition does not cover the coupling network");
  }

  const double two_w = 2.0 * coupling.total_weight();
  double sum = 0.0;
  for (const auto& [i, j] : contribution.pairs) {
    if (partition.assignment[i] != partition.assignment[j]) continue;
    result.has_within_pairs = true;
    sum += 1.0 - coupling.strength(i) * coupling.strength(j) / two_w;
  }
  result.value = sum / contribution.total_weight();
  result.defined = true;
  return result;
}

namespace {

struct CiterProfile {
  std::vector<std::uint32_t> citers;  // original, distinct, ascending
  double pair_weight = 1.0;
};

// Raw alpha/beta/gamma/delta plus the a* closed form, all from per-community
// counts of the source's citers.
PartitionIndicators raw_cell(const CiterProfile& profile, const Partition& partition,
                             const CouplingNetwork& coupling, LabelCounter& counter,
                             const IndicatorOptions& options,
                             double* out_alpha, double* out_beta, double* out_gamma,
                             double* out_delta) {
  for (std::uint32_t v : profile.citers) counter.add(partition.assignment[v]);

  LabelPairStats s = counter.stats(options.bridging_single_community);
  const double w = profile.pair_weight;
  *out_alpha = w * s.within_pairs;
  *out_beta = w * (s.total_pairs - s.within_pairs);
  *out_gamma = w * s.max_within;
  *out_delta = w * s.max_between;

  PartitionIndicators cell;
  if (s.total_pairs > 0.0) {
    const double two_w = 2.0 * coupling.total_weight();
    double within_sum = 0.0;
    bool has_within = false;
    for (std::uint32_t l : counter.touched) {
      std::uint64_t m = counter.count[l];
      if (m < 2) continue;
      has_within = true;
      double strength_sum = 0.0, strength_sq = 0.0;
      for (std::uint32_t v : profile.citers) {
        if (partition.assignment[v] == l) {
          double k = coupling.strength(v);
          strength_sum += k;
          strength_sq += k * k;
        }
      }
      within_sum += pair_count(m) - (strength_sum * strength_sum - strength_sq) / (2.0 * two_w);
    }
    cell.a_star.value = within_sum / (w * s.total_pairs);
    cell.a_star.defined = true;
    cell.a_star.has_within_pairs = has_within;
  }
  counter.reset();
  return cell;
}

}  // namespace

std::vector<IndicatorRecord> ensemble_indicators(const CitationNetwork& network,
                                                 const CouplingNetwork& coupling,
                                                 const CoreSet& core,
                                                 const PartitionEnsemble& ensemble,
                                                 std::size_t sample_count,
                                                 std::uint64_t master_seed,
                                                 const EnsembleOptions& options) {
  if (coupling.vertex_count() != network.citing_count()) {
    throw contract_error("coupling network does not match the citation network's citing set");
  }
  if (ensemble.partitions.empty()) throw config_error("partition ensemble is empty");
  for (const auto& p : ensemble.partitions) {
    if (p.assignment.size() != coupling.vertex_count()) {
      throw contract_error("ensemble partition does not cover the coupling network");
    }
    validate_partition_labels(p);
  }

  const std::size_t n_sources = core.members.size();
  const std::size_t n_partitions = ensemble.partitions.size();

  std::vector<CiterProfile> profiles(n_sources);
  std::vector<std::uint32_t> tracked(n_sources);
  for (std::size_t s = 0; s < n_sources; ++s) {
    const auto& member = core.members[s];
    if (member.cited_index >= network.cited_count() ||
        network.cited_ids()[member.cited_index] != member.id) {
      throw contract_error("core set does not belong to this network");
    }
    auto citers = network.citers_of(member.cited_index);
    profiles[s].citers.assign(citers.begin(), citers.end());
    std::size_t n = profiles[s].citers.size();
    profiles[s].pair_weight = (options.indicators.weighting == Weighting::raw || n < 2)
                                  ? 1.0
                                  : 1.0 / static_cast<double>(n - 1);
    tracked[s] = member.cited_index;
  }

  // cells[p][s], filled independently per partition so the parallel schedule
  // cannot affect results.
  std::vector<std::vector<PartitionIndicators>> cells(
      n_partitions, std::vector<PartitionIndicators>(n_sources));

  parallel_for(n_partitions, options.workers, [&](std::size_t p) {
    const Partition& partition = ensemble.partitions[p];
    LabelCounter counter;
    counter.init(partition.community_count);

    std::vector<NullSampler::Sums> null_sums(n_sources);
    NullSampler sampler(network, tracked, partition, options.indicators);
    const std::uint64_t stream_seed =
        options.share_null_across_partitions ? master_seed : derive_seed(master_seed, p);
    for (std::size_t n = 0; n < sample_count; ++n) {
      sampler.run_sample(derive_seed(stream_seed, n), null_sums);
    }

    for (std::size_t s = 0; s < n_sources; ++s) {
      double alpha, beta, gamma, delta;
      PartitionIndicators cell = raw_cell(profiles[s], partition, coupling, counter,
                                          options.indicators, &alpha, &beta, &gamma, &delta);
      cell.final = finalize(alpha, beta, gamma, delta, null_sums[s].chi, null_sums[s].phi,
                            null_sums[s].psi, null_sums[s].omega, options.final);
      cells[p][s] = cell;
    }
  });

  std::vector<IndicatorRecord> records(n_sources);
  for (std::size_t s = 0; s < n_sources; ++s) {
    IndicatorRecord& rec = records[s];
    rec.source = core.members[s].id;
    rec.in_degree = core.members[s].in_degree;
    rec.per_partition.reserve(n_partitions);
    double within_sum = 0.0, topicality_sum = 0.0, bridging_sum = 0.0, a_star_sum = 0.0;
    for (std::size_t p = 0; p < n_partitions; ++p) {
      const PartitionIndicators& cell = cells[p][s];
      rec.per_partition.push_back(cell);
      if (cell.final.within.defined) {
        within_sum += cell.final.within.value;
        ++rec.within_defined;
      }
      if (cell.final.topicality.defined) {
        topicality_sum += cell.final.topicality.value;
        ++rec.topicality_defined;
      }
      if (cell.final.bridging.defined) {
        bridging_sum += cell.final.bridging.value;
        ++rec.bridging_defined;
      }
      if (cell.a_star.defined) {
        a_star_sum += cell.a_star.value;
        ++rec.a_star_defined;
      }
    }
    if (rec.within_defined > 0) {
      rec.within = {within_sum / rec.within_defined, true};
      rec.between = {-rec.within.value, true};
    }
    if (rec.topicality_defined > 0) rec.topicality = {topicality_sum / rec.topicality_defined, true};
    if (rec.bridging_defined > 0) rec.bridging = {bridging_sum / rec.bridging_defined, true};
    if (rec.a_star_defined > 0) rec.a_star = {a_star_sum / rec.a_star_defined, true};
  }
  return records;
}

std::string_view indicator_name(IndicatorKind kind) {
  switch (kind) {
    case IndicatorKind::within: return "within";
    case IndicatorKind::between: return "between";
    case IndicatorKind::topicality: return "topicality";
    case IndicatorKind::bridging: return "bridging";
  }
  return "within";
}

IndicatorValue indicator_of(const IndicatorRecord& record, IndicatorKind kind) {
  switch (kind) {
    case IndicatorKind::within: return record.within;
    case IndicatorKind::between: return record.between;
    case IndicatorKind::topicality: return record.topicality;
    case IndicatorKind::bridging: return record.bridging;
  }
  return record.within;
}

namespace {

IndicatorSummary::Stat stat_of(std::vector<double> values) {
  IndicatorSummary::Stat stat;
  stat.count = values.size();
  if (values.empty()) return stat;
  stat.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  std::sort(values.begin(), values.end());
  std::size_t mid = values.size() / 2;
  stat.median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return stat;
}

}  // namespace

IndicatorSummary indicator_summary(const std::vector<IndicatorRecord>& records,
                                   double modularity_mean) {
  std::vector<double> within, between, topicality, bridging;
  for (const auto& rec : records) {
    if (rec.within.defined) within.push_back(rec.within.value);
    if (rec.between.defined) between.push_back(rec.between.value);
    if (rec.topicality.defined) topicality.push_back(rec.topicality.value);
    if (rec.bridging.defined) bridging.push_back(rec.bridging.value);
  }
  if (within.empty() && between.empty() && topicality.empty() && bridging.empty()) {
    throw empty_summary_error("no record has a defined indicator");
  }
  IndicatorSummary summary;
  summary.within = stat_of(std::move(within));
  summary.between = stat_of(std::move(between));
  summary.topicality = stat_of(std::move(topicality));
  summary.bridging = stat_of(std::move(bridging));
  summary.modularity_mean = modularity_mean;
  return summary;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based average rank
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

CorrelationMatrix::Cell pearson_cell(const std::vector<double>& x, const std::vector<double>& y) {
  CorrelationMatrix::Cell cell;
  const std::size_t n = x.size();
  if (n < 3) return cell;
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return cell;  // zero variance
  cell.value = sxy / std::sqrt(sxx * syy);
  cell.defined = true;
  return cell;
}

}  // namespace

const char* CorrelationMatrix::variable_name(std::size_t i) {
  static const char* names[kVariables] = {"within", "topicality", "bridging", "in_degree"};
  return names[i];
}

CorrelationMatrix indicator_correlations(const std::vector<IndicatorRecord>& records) {
  std::size_t defined_records = 0;
  for (const auto& rec : records) {
    if (rec.within.defined || rec.topicality.defined || rec.bridging.defined) ++defined_records;
  }
  if (defined_records < 3) {
    throw config_error("correlations need at least 3 records with defined indicators");
  }

  auto value_of = [](const IndicatorRecord& rec, std::size_t var) -> IndicatorValue {
    switch (var) {
      case 0: return rec.within;
      case 1: return rec.topicality;
      case 2: return rec.bridging;
      default: return {static_cast<double>(rec.in_degree), true};
    }
  };

  CorrelationMatrix matrix;
  for (std::size_t a = 0; a < CorrelationMatrix::kVariables; ++a) {
    matrix.pearson[a][a] = {1.0, true};
    matrix.spearman[a][a] = {1.0, true};
    for (std::size_t b = a + 1; b < CorrelationMatrix::kVariables; ++b) {
      std::vector<double> x, y;
      for (const auto& rec : records) {
        IndicatorValue va = value_of(rec, a), vb = value_of(rec, b);
        if (va.defined && vb.defined) {
          x.push_back(va.value);
          y.push_back(vb.value);
        }
      }
      auto p = pearson_cell(x, y);
      matrix.pearson[a][b] = p;
      matrix.pearson[b][a] = p;
      CorrelationMatrix::Cell s;
      if (x.size() >= 3) s = pearson_cell(average_ranks(x), average_ranks(y));
      matrix.spearman[a][b] = s;
      matrix.spearman[b][a] = s;
    }
  }
  return matrix;
}

std::vector<TopEntry> top_k(const std::vector<IndicatorRecord>& records, IndicatorKind kind,
                            std::size_t k) {
  if (k < 1) throw config_error("top_k needs k >= 1");
  std::vector<TopEntry> entries;
  entries.reserve(records.size());
  for (const auto& rec : records) {
    IndicatorValue v = indicator_of(rec, kind);
    entries.push_back({&rec, v.value, v.defined});
  }
  std::sort(entries.begin(), entries.end(), [](const TopEntry& a, const TopEntry& b) {
    if (a.defined != b.defined) return a.defined;
    if (a.defined && a.value != b.value) return a.value > b.value;
    if (a.record->in_degree != b.record->in_degree) return a.record->in_degree > b.record->in_degree;
    return a.record->source < b.record->source;
  });
  if (entries.size() > k) entries.resize(k);
  return entries;
}

}  // namespace corelit
