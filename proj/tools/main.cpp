#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "corelit/csv.hpp"
#include "corelit/errors.hpp"
#include "corelit/pipeline.hpp"
#include "corelit/synth.hpp"

namespace {

using namespace corelit;

void add_common_flags(CLI::App* cmd, RunConfig& config, bool& dedup_flag) {
  cmd->add_option("--edges", config.edges_path, "edge CSV (citing_id,cited_id)")->required();
  cmd->add_option("--metadata", config.metadata_path,
                  "sidecar CSV (id,label,year,typology,raw_reference)");
  cmd->add_option("--quantile", config.quantile, "core in-degree quantile")
      ->capture_default_str();
  cmd->add_flag("--dedup", dedup_flag, "merge similar references before analysis");
  cmd->add_option("--dedup-threshold", config.dedup_threshold,
                  "Jaro-Winkler merge threshold (implies --dedup)");
  cmd->add_option_function<std::string>(
         "--dedup-normalization",
         [&config](const std::string& v) {
           config.dedup_normalization = v == "none"
                                            ? ReferenceNormalization::none
                                            : ReferenceNormalization::strip_pagination_and_lowercase;
         },
         "reference normalization: strip-pagination-and-lowercase | none")
      ->check(CLI::IsMember({"strip-pagination-and-lowercase", "none"}));
  cmd->add_flag("--dedup-block-first-token", config.dedup_block_on_first_token,
                "compare only references sharing their first token");
  cmd->add_flag("--drop-no-author", config.drop_references_without_author,
                "drop cited references whose metadata label is empty");
  cmd->add_option("--seed", config.master_seed, "master seed")->capture_default_str();
  cmd->add_option("--workers", config.workers, "worker threads (0 = hardware)")
      ->capture_default_str();
}

int cmd_ingest(RunConfig config) {
  IngestSummary summary = run_ingest(config);
  std::printf("citing publications: %zu\n", summary.citing);
  std::printf("cited sources:       %zu\n", summary.cited);
  std::printf("edges:               %zu\n", summary.edges);
  std::printf("core sources:        %zu (threshold %u at quantile %s)\n", summary.core_count,
              summary.core_threshold, format_double(config.quantile).c_str());
  std::printf("rows read:           %zu (%zu duplicates, %zu self-loops dropped)\n",
              summary.load.rows, summary.load.duplicate_rows_dropped,
              summary.load.self_loops_dropped);
  if (config.drop_references_without_author) {
    std::printf("no-author refs dropped: %zu\n", summary.load.no_author_dropped);
  }
  if (config.dedup_threshold) {
    std::printf("merge groups:        %zu (%zu references merged)\n", summary.merge_groups,
                summary.merged_members);
  }
  return 0;
}

int cmd_analyze(RunConfig config) {
  AnalyzeResult result = run_analyze(config);
  std::printf("analyze complete: %zu core sources over %zu partitions\n", result.records.size(),
              config.partitions);
  std::printf("coupling: %zu vertices, %zu edges, %zu components, giant %.1f%%, density %s\n",
              result.coupling_vertices, result.coupling_edges, result.components.components,
              100.0 * result.components.giant_fraction,
              format_double(result.coupling_density).c_str());
  std::printf("mean modularity: %s\n", format_double(result.modularity_mean).c_str());
  std::printf("artifacts written to %s (%zu files)\n", config.out_dir.c_str(),
              result.artifacts.size() + 1);
  return 0;
}

int cmd_report(const ReportOptions& options) {
  auto written = run_report(options);
  for (const auto& name : written) std::printf("wrote %s\n", name.c_str());
  return 0;
}

struct SynthCli {
  SynthSpec spec;
  std::string out_dir;
  std::vector<std::string> planted;
};

int cmd_synth(SynthCli cli) {
  for (const auto& text : cli.planted) {
    // local:<community>:<citers> | global:<citers> | bridge:<a>:<b>:<citers>
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t colon = text.find(':', start);
      parts.push_back(text.substr(start, colon - start));
      if (colon == std::string::npos) break;
      start = colon + 1;
    }
    PlantedCore core;
    try {
      if (parts.size() == 3 && parts[0] == "local") {
        core.role = PlantedRole::local;
        core.community_a = static_cast<std::uint32_t>(std::stoul(parts[1]));
        core.citer_count = static_cast<std::uint32_t>(std::stoul(parts[2]));
      } else if (parts.size() == 2 && parts[0] == "global") {
        core.role = PlantedRole::global;
        core.citer_count = static_cast<std::uint32_t>(std::stoul(parts[1]));
      } else if (parts.size() == 4 && parts[0] == "bridge") {
        core.role = PlantedRole::pair_bridge;
        core.community_a = static_cast<std::uint32_t>(std::stoul(parts[1]));
        core.community_b = static_cast<std::uint32_t>(std::stoul(parts[2]));
        core.citer_count = static_cast<std::uint32_t>(std::stoul(parts[3]));
      } else {
        throw config_error("unrecognized planted core spec '" + text + "'");
      }
    } catch (const std::logic_error&) {
      throw config_error("unrecognized planted core spec '" + text + "'");
    }
    cli.spec.planted.push_back(core);
  }

  SynthResult result = generate(cli.spec);
  std::filesystem::create_directories(cli.out_dir);
  std::filesystem::path out(cli.out_dir);

  CsvWriter edges((out / "edges.csv").string());
  edges.row({"citing_id", "cited_id"});
  auto citing = result.network.edge_citing();
  auto cited = result.network.edge_cited();
  for (std::size_t e = 0; e < citing.size(); ++e) {
    edges.row({result.network.citing_ids()[citing[e]], result.network.cited_ids()[cited[e]]});
  }
  edges.close();
  result.write_truth_csv((out / "truth.csv").string());

  std::printf("synth network: %zu citing, %zu cited, %zu edges, %zu planted cores\n",
              result.network.citing_count(), result.network.cited_count(),
              result.network.edge_count(), result.cores.size());
  std::printf("wrote %s and %s\n", (out / "edges.csv").c_str(), (out / "truth.csv").c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structural-role indicators for core sources in bibliographic coupling networks"};
  app.set_version_flag("--version", std::string(corelit::kVersion));
  app.require_subcommand(1);

  RunConfig config;
  bool dedup_flag = false;

  CLI::App* ingest = app.add_subcommand("ingest", "load a citation network and report its shape");
  add_common_flags(ingest, config, dedup_flag);
  ingest->add_option("--out", config.out_dir, "directory for ingest.json and merge_report.csv");

  CLI::App* analyze = app.add_subcommand("analyze", "run the full indicator pipeline");
  add_common_flags(analyze, config, dedup_flag);
  analyze->add_option("--out", config.out_dir, "run output directory")->required();
  analyze->add_option("--partitions", config.partitions, "Louvain runs to average")
      ->capture_default_str();
  analyze->add_option("--null-samples", config.null_samples,
                      "configuration-model samples per partition")
      ->capture_default_str();
  analyze->add_option("--resolution", config.resolution, "Louvain resolution")
      ->capture_default_str();
  analyze->add_option_function<std::string>(
             "--weighting",
             [&config](const std::string& v) {
               config.weighting = v == "fractional" ? Weighting::fractional : Weighting::raw;
             },
             "coupling weighting scheme: raw | fractional")
      ->check(CLI::IsMember({"raw", "fractional"}));
  analyze->add_option("--top-k", config.top_k, "entries per top-k table")->capture_default_str();
  analyze->add_flag("--share-null", config.share_null_across_partitions,
                    "share one null-sample stream across partitions");
  analyze->add_flag("--export-coupling", config.export_coupling,
                    "write the coupling network as coupling.csv");
  analyze->add_flag("!--no-partitions", config.export_partitions,
                    "skip per-partition CSV exports");
  std::vector<std::uint32_t> dump_sample;
  analyze
      ->add_option("--dump-null-sample", dump_sample,
                   "write one configuration sample as edge CSV: <partition> <sample>")
      ->expected(2);

  ReportOptions report_options;
  CLI::App* report = app.add_subcommand("report", "render plots from a completed run directory");
  report->add_option("--run", report_options.run_dir, "run directory from analyze")->required();
  report->add_option("--bins", report_options.bins, "histogram bin count")->capture_default_str();
  report->add_option("--min-community-size", report_options.min_community_size,
                     "keep only communities larger than this in community_sizes.csv");
  report->add_option("--trim-weight", report_options.trim_weight,
                     "write coupling_trimmed.csv keeping edges with weight >= this");

  SynthCli synth_cli;
  CLI::App* synth = app.add_subcommand("synth", "generate a planted-structure citation network");
  synth->add_option("--out", synth_cli.out_dir, "output directory")->required();
  synth->add_option("--communities", synth_cli.spec.communities)->capture_default_str();
  synth->add_option("--citing-per-community", synth_cli.spec.citing_per_community)
      ->capture_default_str();
  synth->add_option("--pool", synth_cli.spec.background_pool_per_community,
                    "background sources per community")
      ->capture_default_str();
  synth->add_option("--mean-citations", synth_cli.spec.mean_citations)->capture_default_str();
  synth->add_option("--noise", synth_cli.spec.noise_fraction, "cross-community citation fraction")
      ->capture_default_str();
  synth->add_option("--planted", synth_cli.planted,
                    "planted cores: local:<community>:<citers> global:<citers> "
                    "bridge:<a>:<b>:<citers>");
  synth->add_option("--seed", synth_cli.spec.seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      if (dedup_flag && !config.dedup_threshold) config.dedup_threshold = kDefaultDedupThreshold;
      return cmd_ingest(config);
    }
    if (*analyze) {
      if (dedup_flag && !config.dedup_threshold) config.dedup_threshold = kDefaultDedupThreshold;
      if (!dump_sample.empty()) {
        config.dump_null_sample = {dump_sample[0], dump_sample[1]};
      }
      return cmd_analyze(config);
    }
    if (*report) return cmd_report(report_options);
    if (*synth) return cmd_synth(synth_cli);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
