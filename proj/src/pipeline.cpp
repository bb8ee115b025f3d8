#include "corelit/pipeline.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "corelit/community.hpp"
#include "corelit/csv.hpp"
#include "corelit/errors.hpp"
#include "corelit/null_model.hpp"
#include "corelit/rng.hpp"

namespace corelit {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
  if (edges_path.empty()) throw config_error("an edges file is required");
  if (!(quantile > 0.0 && quantile < 1.0)) throw config_error("quantile must lie in (0,1)");
  if (partitions < 1) throw config_error("partitions must be >= 1");
  if (null_samples < 1) throw config_error("null samples must be >= 1");
  if (!(resolution > 0.0)) throw config_error("resolution must be positive");
  if (dedup_threshold && (*dedup_threshold < 0.0 || *dedup_threshold > 1.0)) {
    throw config_error("dedup threshold must lie in [0,1]");
  }
  if (top_k < 1) throw config_error("top_k must be >= 1");
  if (dump_null_sample) {
    if (dump_null_sample->first >= partitions || dump_null_sample->second >= null_samples) {
      throw config_error("dump_null_sample indices exceed the configured run");
    }
  }
}

namespace {

json config_to_json(const RunConfig& c) {
  json j;
  j["edges_path"] = c.edges_path;
  j["metadata_path"] = c.metadata_path;
  j["quantile"] = c.quantile;
  j["partitions"] = c.partitions;
  j["null_samples"] = c.null_samples;
  j["resolution"] = c.resolution;
  j["weighting"] = std::string(weighting_name(c.weighting));
  if (c.dedup_threshold) {
    j["dedup_threshold"] = *c.dedup_threshold;
  } else {
    j["dedup_threshold"] = nullptr;
  }
  j["dedup_normalization"] =
      c.dedup_normalization == ReferenceNormalization::none ? "none" : "strip-pagination-and-lowercase";
  j["dedup_block_on_first_token"] = c.dedup_block_on_first_token;
  j["drop_references_without_author"] = c.drop_references_without_author;
  j["master_seed"] = c.master_seed;
  j["out_dir"] = c.out_dir;
  j["workers"] = c.workers;
  j["share_null_across_partitions"] = c.share_null_across_partitions;
  j["export_coupling"] = c.export_coupling;
  j["export_partitions"] = c.export_partitions;
  j["top_k"] = c.top_k;
  if (c.dump_null_sample) {
    j["dump_null_sample"] = {c.dump_null_sample->first, c.dump_null_sample->second};
  } else {
    j["dump_null_sample"] = nullptr;
  }
  return j;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw io_error("write to " + path.string() + " failed");
}

struct StageGuard {
  // Wraps a pipeline stage so failures carry the stage name.
  template <typename Fn>
  static auto run(const char* stage, Fn&& fn) {
    try {
      return fn();
    } catch (const std::exception& e) {
      throw error("stage '" + std::string(stage) + "': " + e.what());
    }
  }
};

std::pair<CitationNetwork, IngestSummary> load_stage(const RunConfig& config,
                                                     MergeReport* merge_report) {
  LoadOptions load_options;
  load_options.drop_references_without_author = config.drop_references_without_author;
  LoadReport load_report;
  InputFormat format =
      config.metadata_path.empty() ? InputFormat::edge_csv : InputFormat::edge_csv_with_metadata;
  CitationNetwork network =
      load_citations(config.edges_path, format, config.metadata_path, load_options, &load_report);

  IngestSummary summary;
  summary.load = load_report;
  if (config.dedup_threshold) {
    DedupOptions dedup;
    dedup.similarity_threshold = *config.dedup_threshold;
    dedup.normalization = config.dedup_normalization;
    dedup.block_on_first_token = config.dedup_block_on_first_token;
    DedupResult result = dedup_references(network, dedup);
    network = std::move(result.network);
    summary.merge_groups = result.report.groups.size();
    summary.merged_members = result.report.merged_members();
    if (merge_report) *merge_report = std::move(result.report);
  }
  summary.citing = network.citing_count();
  summary.cited = network.cited_count();
  summary.edges = network.edge_count();
  return {std::move(network), summary};
}

std::string indicator_cell(const IndicatorValue& v) {
  return v.defined ? format_double(v.value) : std::string();
}

void write_indicators_csv(const fs::path& path, const std::vector<IndicatorRecord>& records) {
  CsvWriter out(path.string());
  out.row({"source_id", "in_degree", "within", "between", "topicality", "bridging", "a_star",
           "defined_partitions"});
  for (const auto& rec : records) {
    out.row({rec.source, std::to_string(rec.in_degree), indicator_cell(rec.within),
             indicator_cell(rec.between), indicator_cell(rec.topicality),
             indicator_cell(rec.bridging), indicator_cell(rec.a_star),
             std::to_string(rec.within_defined)});
  }
  out.close();
}

void write_distributions_csv(const fs::path& path, const std::vector<IndicatorRecord>& records,
                             const CitationNetwork& network) {
  CsvWriter out(path.string());
  out.row({"source_id", "indicator", "value", "typology"});
  for (const auto& rec : records) {
    std::string typology;
    if (const DocumentRecord* doc = network.record(rec.source); doc && doc->typology) {
      typology = std::string(typology_name(*doc->typology));
    }
    auto emit = [&](std::string_view name, const IndicatorValue& v) {
      if (v.defined) out.row({rec.source, std::string(name), format_double(v.value), typology});
    };
    emit("within", rec.within);
    emit("between", rec.between);
    emit("topicality", rec.topicality);
    emit("bridging", rec.bridging);
    emit("a_star", rec.a_star);
  }
  out.close();
}

void write_topk_csv(const fs::path& path, const std::vector<IndicatorRecord>& records,
                    IndicatorKind kind, std::size_t k, const CitationNetwork& network) {
  auto top = top_k(records, kind, k);
  CsvWriter out(path.string());
  out.row({"rank", "source_id", "value", "in_degree", "label", "year"});
  for (std::size_t i = 0; i < top.size(); ++i) {
    std::string label, year;
    if (const DocumentRecord* doc = network.record(top[i].record->source)) {
      label = doc->label;
      if (doc->year) year = std::to_string(*doc->year);
    }
    out.row({std::to_string(i + 1), top[i].record->source,
             top[i].defined ? format_double(top[i].value) : std::string(),
             std::to_string(top[i].record->in_degree), label, year});
  }
  out.close();
}

void write_correlations_csv(const fs::path& path, const std::vector<IndicatorRecord>& records) {
  // Table-5 layout: Pearson upper-right, Spearman lower-left, unit diagonal.
  std::optional<CorrelationMatrix> matrix;
  try {
    matrix = indicator_correlations(records);
  } catch (const config_error&) {
    // Too few defined records: keep the layout, leave every cell empty.
  }
  CsvWriter out(path.string());
  std::vector<std::string> header = {"indicator"};
  for (std::size_t i = 0; i < CorrelationMatrix::kVariables; ++i) {
    header.emplace_back(CorrelationMatrix::variable_name(i));
  }
  out.row(header);
  for (std::size_t r = 0; r < CorrelationMatrix::kVariables; ++r) {
    std::vector<std::string> row = {CorrelationMatrix::variable_name(r)};
    for (std::size_t c = 0; c < CorrelationMatrix::kVariables; ++c) {
      if (!matrix) {
        row.emplace_back(r == c ? "1" : "");
        continue;
      }
      const CorrelationMatrix::Cell& cell =
          r < c ? matrix->pearson[r][c] : matrix->spearman[r][c];
      if (r == c) {
        row.emplace_back("1");
      } else {
        row.emplace_back(cell.defined ? format_double(cell.value) : std::string());
      }
    }
    out.row(row);
  }
  out.close();
}

json summary_to_json(const IngestSummary& ingest, const AnalyzeResult& result,
                     const IndicatorSummary* indicators) {
  json j;
  j["citing"] = ingest.citing;
  j["cited"] = ingest.cited;
  j["edges"] = ingest.edges;
  j["core_count"] = ingest.core_count;
  j["core_threshold"] = ingest.core_threshold;
  j["coupling"] = {{"vertices", result.coupling_vertices},
                   {"edges", result.coupling_edges},
                   {"components", result.components.components},
                   {"giant_fraction", result.components.giant_fraction},
                   {"density", result.coupling_density}};
  j["modularity_mean"] = result.modularity_mean;
  auto stat_json = [](const IndicatorSummary::Stat& s) -> json {
    if (s.count == 0) return {{"mean", nullptr}, {"median", nullptr}};
    return {{"mean", s.mean}, {"median", s.median}};
  };
  if (indicators) {
    j["indicators"] = {{"within", stat_json(indicators->within)},
                       {"between", stat_json(indicators->between)},
                       {"topicality", stat_json(indicators->topicality)},
                       {"bridging", stat_json(indicators->bridging)}};
  } else {
    j["indicators"] = nullptr;
  }
  return j;
}

}  // namespace

IngestSummary run_ingest(const RunConfig& config) {
  config.validate();
  MergeReport merge_report;
  auto [network, summary] = load_stage(config, &merge_report);

  CoreSet core = select_core(network, config.quantile);
  summary.core_count = core.members.size();
  summary.core_threshold = core.threshold;

  if (!config.out_dir.empty()) {
    fs::create_directories(config.out_dir);
    json j;
    j["citing"] = summary.citing;
    j["cited"] = summary.cited;
    j["edges"] = summary.edges;
    j["core_count"] = summary.core_count;
    j["core_threshold"] = summary.core_threshold;
    j["rows"] = summary.load.rows;
    j["duplicate_rows_dropped"] = summary.load.duplicate_rows_dropped;
    j["self_loops_dropped"] = summary.load.self_loops_dropped;
    j["no_author_dropped"] = summary.load.no_author_dropped;
    j["merge_groups"] = summary.merge_groups;
    j["merged_members"] = summary.merged_members;
    write_json(fs::path(config.out_dir) / "ingest.json", j);
    if (config.dedup_threshold) {
      merge_report.write_csv((fs::path(config.out_dir) / "merge_report.csv").string());
    }
  }
  return summary;
}

AnalyzeResult run_analyze(const RunConfig& config) {
  config.validate();
  if (config.out_dir.empty()) throw config_error("analyze requires an output directory");
  fs::path out(config.out_dir);
  fs::create_directories(out);

  AnalyzeResult result;
  auto track = [&](const fs::path& path) {
    result.artifacts.push_back(fs::relative(path, out).string());
  };

  // Manifest goes out first, marked incomplete, and is rewritten on success;
  // a crash mid-run leaves the marker in place.
  json manifest;
  manifest["version"] = std::string(kVersion);
  manifest["config"] = config_to_json(config);
  manifest["complete"] = false;
  write_json(out / "manifest.json", manifest);

  MergeReport merge_report;
  CitationNetwork network;
  IngestSummary ingest;
  std::tie(network, ingest) = StageGuard::run("ingest", [&] { return load_stage(config, &merge_report); });
  if (config.dedup_threshold) {
    merge_report.write_csv((out / "merge_report.csv").string());
    track(out / "merge_report.csv");
  }

  CouplingNetwork coupling = StageGuard::run("projection", [&] {
    ProjectionOptions options;
    options.weighting = config.weighting;
    return project_coupling(network, options);
  });
  result.coupling_vertices = coupling.vertex_count();
  result.coupling_edges = coupling.edge_count();
  result.coupling_density = coupling.density();
  result.components = coupling.component_stats();
  if (config.export_coupling) {
    coupling.write_csv((out / "coupling.csv").string());
    track(out / "coupling.csv");
  }

  PartitionEnsemble ensemble = StageGuard::run("partition", [&] {
    return partition_ensemble(coupling, config.partitions, config.resolution,
                              derive_seed(config.master_seed, 1), config.workers);
  });
  result.modularity_mean = ensemble.mean_modularity();
  if (config.export_partitions) {
    fs::create_directories(out / "partitions");
    for (std::size_t p = 0; p < ensemble.partitions.size(); ++p) {
      std::string name = "partition_" + std::string(p < 10 ? "0" : "") + std::to_string(p) + ".csv";
      write_partition_csv(coupling, ensemble.partitions[p], p, (out / "partitions" / name).string());
      track(out / "partitions" / name);
    }
  }

  CoreSet core = StageGuard::run("core-selection", [&] { return select_core(network, config.quantile); });
  ingest.core_count = core.members.size();
  ingest.core_threshold = core.threshold;
  result.ingest = ingest;

  const std::uint64_t null_master = derive_seed(config.master_seed, 2);
  result.records = StageGuard::run("indicators", [&] {
    EnsembleOptions options;
    options.indicators.weighting = config.weighting;
    options.share_null_across_partitions = config.share_null_across_partitions;
    options.workers = config.workers;
    return ensemble_indicators(network, coupling, core, ensemble, config.null_samples, null_master,
                               options);
  });

  if (config.dump_null_sample) {
    auto [p, n] = *config.dump_null_sample;
    std::uint64_t stream =
        config.share_null_across_partitions ? null_master : derive_seed(null_master, p);
    ConfigurationSample sample = configuration_sample(network, derive_seed(stream, n));
    sample.index = n;
    std::string name =
        "null_sample_p" + std::to_string(p) + "_n" + std::to_string(n) + ".csv";
    sample.write_csv(network, (out / name).string());
    track(out / name);
  }

  StageGuard::run("reporting", [&] {
    write_indicators_csv(out / "indicators.csv", result.records);
    track(out / "indicators.csv");
    write_distributions_csv(out / "distributions.csv", result.records, network);
    track(out / "distributions.csv");
    write_correlations_csv(out / "correlations.csv", result.records);
    track(out / "correlations.csv");
    for (IndicatorKind kind : {IndicatorKind::within, IndicatorKind::between,
                               IndicatorKind::topicality, IndicatorKind::bridging}) {
      fs::path path = out / ("topk_" + std::string(indicator_name(kind)) + ".csv");
      write_topk_csv(path, result.records, kind, config.top_k, network);
      track(path);
    }

    IndicatorSummary summary = indicator_summary(result.records, result.modularity_mean);
    write_json(out / "summary.json", summary_to_json(ingest, result, &summary));
    track(out / "summary.json");
    return 0;
  });

  manifest["complete"] = true;
  json seeds;
  seeds["master"] = config.master_seed;
  json partition_seeds = json::array();
  for (const auto& p : ensemble.partitions) partition_seeds.push_back(p.seed);
  seeds["partition_seeds"] = partition_seeds;
  seeds["null_master"] = null_master;
  manifest["seeds"] = seeds;
  json artifacts = json::array();
  for (const auto& a : result.artifacts) artifacts.push_back(a);
  artifacts.push_back("manifest.json");
  manifest["artifacts"] = artifacts;
  write_json(out / "manifest.json", manifest);
  return result;
}

}  // namespace corelit
