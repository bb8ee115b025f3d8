#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "corelit/citation_network.hpp"
#include "corelit/community.hpp"
#include "corelit/coupling.hpp"
#include "corelit/errors.hpp"
#include "corelit/indicators.hpp"
#include "corelit/null_model.hpp"
#include "corelit/pipeline.hpp"
#include "corelit/rng.hpp"
#include "corelit/string_similarity.hpp"
#include "corelit/synth.hpp"

namespace py = pybind11;
using namespace corelit;

namespace {

Weighting parse_weighting(const std::string& name) {
  if (name == "raw") return Weighting::raw;
  if (name == "fractional") return Weighting::fractional;
  throw config_error("unknown weighting '" + name + "'");
}

py::dict record_to_dict(const IndicatorRecord& rec) {
  py::dict d;
  d["source"] = rec.source;
  d["in_degree"] = rec.in_degree;
  auto set = [&](const char* key, const IndicatorValue& v) {
    d[key] = v.defined ? py::object(py::float_(v.value)) : py::object(py::none());
  };
  set("within", rec.within);
  set("between", rec.between);
  set("topicality", rec.topicality);
  set("bridging", rec.bridging);
  set("a_star", rec.a_star);
  d["defined_partitions"] = rec.within_defined;
  return d;
}

}  // namespace

PYBIND11_MODULE(_corelit, m) {
  m.doc() = "Structural-role indicators for core sources in bibliographic coupling networks";

  py::register_exception<error>(m, "CorelitError");

  py::class_<CitationNetwork>(m, "CitationNetwork")
      .def_property_readonly("citing_count", &CitationNetwork::citing_count)
      .def_property_readonly("cited_count", &CitationNetwork::cited_count)
      .def_property_readonly("edge_count", &CitationNetwork::edge_count)
      .def_property_readonly("citing_ids", &CitationNetwork::citing_ids)
      .def_property_readonly("cited_ids", &CitationNetwork::cited_ids)
      .def("in_degree",
           [](const CitationNetwork& net, const std::string& id) {
             auto idx = net.cited_index(id);
             if (!idx) throw lookup_error("unknown cited source '" + id + "'");
             return net.in_degree(*idx);
           })
      .def("edges", [](const CitationNetwork& net) {
        std::vector<std::pair<std::string, std::string>> out;
        auto citing = net.edge_citing();
        auto cited = net.edge_cited();
        for (std::size_t e = 0; e < citing.size(); ++e) {
          out.emplace_back(net.citing_ids()[citing[e]], net.cited_ids()[cited[e]]);
        }
        return out;
      });

  py::class_<CouplingNetwork>(m, "CouplingNetwork")
      .def_property_readonly("vertex_count", &CouplingNetwork::vertex_count)
      .def_property_readonly("edge_count", &CouplingNetwork::edge_count)
      .def_property_readonly("total_weight", &CouplingNetwork::total_weight)
      .def_property_readonly("density", &CouplingNetwork::density)
      .def_property_readonly("vertices", &CouplingNetwork::vertices)
      .def("components",
           [](const CouplingNetwork& b) {
             auto stats = b.component_stats();
             return py::make_tuple(stats.components, stats.giant_fraction);
           })
      .def("edges", [](const CouplingNetwork& b) {
        std::vector<std::tuple<std::string, std::string, double>> out;
        for (const auto& e : b.edges()) {
          out.emplace_back(b.vertices()[e.i], b.vertices()[e.j], e.weight);
        }
        return out;
      });

  py::class_<Partition>(m, "Partition")
      .def_readonly("assignment", &Partition::assignment)
      .def_readonly("community_count", &Partition::community_count)
      .def_readonly("modularity", &Partition::modularity)
      .def_readonly("resolution", &Partition::resolution)
      .def_readonly("seed", &Partition::seed);

  m.def("network_from_edges",
        [](const std::vector<std::pair<std::string, std::string>>& rows) {
          return CitationNetwork::build(rows);
        },
        py::arg("rows"), "Build a citation network from (citing, cited) id pairs.");

  m.def("load_citations",
        [](const std::string& edges_path, const std::string& metadata_path) {
          return load_citations(edges_path,
                                metadata_path.empty() ? InputFormat::edge_csv
                                                      : InputFormat::edge_csv_with_metadata,
                                metadata_path);
        },
        py::arg("edges_path"), py::arg("metadata_path") = std::string());

  m.def("dedup_references",
        [](const CitationNetwork& net, double threshold, const std::string& normalization) {
          DedupOptions options;
          options.similarity_threshold = threshold;
          options.normalization = normalization == "none"
                                      ? ReferenceNormalization::none
                                      : ReferenceNormalization::strip_pagination_and_lowercase;
          DedupResult result = dedup_references(net, options);
          py::list groups;
          for (const auto& g : result.report.groups) {
            py::dict d;
            d["canonical"] = g.canonical;
            std::vector<std::pair<std::string, double>> members;
            for (const auto& mbr : g.members) members.emplace_back(mbr.id, mbr.similarity);
            d["members"] = members;
            groups.append(d);
          }
          return py::make_tuple(result.network, groups);
        },
        py::arg("network"), py::arg("threshold") = kDefaultDedupThreshold,
        py::arg("normalization") = "strip-pagination-and-lowercase");

  m.def("select_core",
        [](const CitationNetwork& net, double quantile) {
          CoreSet core = select_core(net, quantile);
          std::vector<std::pair<std::string, std::uint32_t>> members;
          for (const auto& mbr : core.members) members.emplace_back(mbr.id, mbr.in_degree);
          return py::make_tuple(core.threshold, members);
        },
        py::arg("network"), py::arg("quantile") = 0.995);

  m.def("project_coupling",
        [](const CitationNetwork& net, const std::string& weighting) {
          return project_coupling(net, parse_weighting(weighting));
        },
        py::arg("network"), py::arg("weighting") = "raw");

  m.def("modularity",
        [](const CouplingNetwork& b, const std::vector<std::uint32_t>& assignment) {
          return modularity(b, assignment);
        },
        py::arg("coupling"), py::arg("assignment"));

  m.def("louvain", &louvain, py::arg("coupling"), py::arg("resolution") = 1.0,
        py::arg("seed") = 0);

  m.def("partition_ensemble",
        [](const CouplingNetwork& b, std::size_t count, double resolution, std::uint64_t seed,
           unsigned workers) { return partition_ensemble(b, count, resolution, seed, workers).partitions; },
        py::arg("coupling"), py::arg("count") = 10, py::arg("resolution") = 1.0,
        py::arg("seed") = kDefaultSeed, py::arg("workers") = 0);

  m.def("configuration_sample",
        [](const CitationNetwork& net, std::uint64_t seed) {
          ConfigurationSample sample = configuration_sample(net, seed);
          std::vector<std::pair<std::string, std::string>> edges;
          for (const auto& [citing, cited] : sample.edges) {
            edges.emplace_back(net.citing_ids()[citing], net.cited_ids()[cited]);
          }
          return py::make_tuple(edges, sample.dropped);
        },
        py::arg("network"), py::arg("seed"));

  m.def("compute_indicators",
        [](const CitationNetwork& net, double quantile, std::size_t partitions,
           std::size_t null_samples, double resolution, std::uint64_t seed, unsigned workers,
           const std::string& weighting) {
          Weighting scheme = parse_weighting(weighting);
          CouplingNetwork coupling = project_coupling(net, scheme);
          PartitionEnsemble ensemble =
              partition_ensemble(coupling, partitions, resolution, derive_seed(seed, 1), workers);
          CoreSet core = select_core(net, quantile);
          EnsembleOptions options;
          options.indicators.weighting = scheme;
          options.workers = workers;
          auto records = ensemble_indicators(net, coupling, core, ensemble, null_samples,
                                             derive_seed(seed, 2), options);
          py::list out;
          for (const auto& rec : records) out.append(record_to_dict(rec));
          return py::make_tuple(out, ensemble.mean_modularity());
        },
        py::arg("network"), py::arg("quantile") = 0.995, py::arg("partitions") = 10,
        py::arg("null_samples") = 100, py::arg("resolution") = 1.0,
        py::arg("seed") = kDefaultSeed, py::arg("workers") = 0, py::arg("weighting") = "raw");

  m.def("generate_synth",
        [](std::uint32_t communities, std::uint32_t citing_per_community, std::uint32_t pool,
           double mean_citations, double noise,
           const std::vector<std::tuple<std::string, std::uint32_t, std::uint32_t, std::uint32_t>>&
               planted,
           std::uint64_t seed) {
          SynthSpec spec;
          spec.communities = communities;
          spec.citing_per_community = citing_per_community;
          spec.background_pool_per_community = pool;
          spec.mean_citations = mean_citations;
          spec.noise_fraction = noise;
          spec.seed = seed;
          for (const auto& [role, a, b, citers] : planted) {
            PlantedCore core;
            if (role == "local") {
              core.role = PlantedRole::local;
            } else if (role == "global") {
              core.role = PlantedRole::global;
            } else if (role == "pair-bridge" || role == "bridge") {
              core.role = PlantedRole::pair_bridge;
            } else {
              throw config_error("unknown planted role '" + role + "'");
            }
            core.community_a = a;
            core.community_b = b;
            core.citer_count = citers;
            spec.planted.push_back(core);
          }
          SynthResult result = generate(spec);
          py::dict truth;
          for (std::uint32_t v = 0; v < result.network.citing_count(); ++v) {
            truth[py::str(result.network.citing_ids()[v])] = result.citing_community[v];
          }
          std::vector<std::pair<std::string, std::string>> cores;
          for (const auto& core : result.cores) {
            cores.emplace_back(core.id, std::string(planted_role_name(core.core.role)));
          }
          return py::make_tuple(result.network, truth, cores);
        },
        py::arg("communities") = 4, py::arg("citing_per_community") = 100, py::arg("pool") = 1000,
        py::arg("mean_citations") = 20.0, py::arg("noise") = 0.05,
        py::arg("planted") =
            std::vector<std::tuple<std::string, std::uint32_t, std::uint32_t, std::uint32_t>>{},
        py::arg("seed") = 0);

  m.def("analyze_file",
        [](const std::string& edges_path, const std::string& out_dir,
           const std::string& metadata_path, double quantile, std::size_t partitions,
           std::size_t null_samples, double resolution, std::uint64_t seed, unsigned workers) {
          RunConfig config;
          config.edges_path = edges_path;
          config.metadata_path = metadata_path;
          config.out_dir = out_dir;
          config.quantile = quantile;
          config.partitions = partitions;
          config.null_samples = null_samples;
          config.resolution = resolution;
          config.master_seed = seed;
          config.workers = workers;
          AnalyzeResult result = run_analyze(config);
          py::dict d;
          d["records"] = static_cast<std::size_t>(result.records.size());
          d["modularity_mean"] = result.modularity_mean;
          d["artifacts"] = result.artifacts;
          return d;
        },
        py::arg("edges_path"), py::arg("out_dir"), py::arg("metadata_path") = std::string(),
        py::arg("quantile") = 0.995, py::arg("partitions") = 10, py::arg("null_samples") = 100,
        py::arg("resolution") = 1.0, py::arg("seed") = kDefaultSeed, py::arg("workers") = 0);

  m.def("jaro_winkler", &jaro_winkler_similarity, py::arg("a"), py::arg("b"));
  m.def("normalize_reference",
        [](const std::string& raw) {
          return normalize_reference(raw, ReferenceNormalization::strip_pagination_and_lowercase);
        },
        py::arg("raw"));

  m.attr("__version__") = std::string(kVersion);
  m.attr("DEFAULT_SEED") = kDefaultSeed;
  m.attr("DEFAULT_DEDUP_THRESHOLD") = kDefaultDedupThreshold;
}
