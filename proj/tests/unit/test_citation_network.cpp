#include <doctest.h>

#include <set>

#include "corelit/citation_network.hpp"
#include "corelit/errors.hpp"
#include "corelit/rng.hpp"
#include "support/helpers.hpp"

using namespace corelit;
using testutil::TempDir;
using testutil::write_file;

TEST_SUITE_BEGIN("citation network");

TEST_CASE("load_citations builds a simple directed graph") {
  TempDir dir("load");
  write_file(dir.str("edges.csv"), "citing_id,cited_id\np1,s1\np2,s1\np2,s2\np3,s2\n");
  LoadReport report;
  CitationNetwork net = load_citations(dir.str("edges.csv"), InputFormat::edge_csv, {}, {}, &report);
  CHECK(net.citing_count() == 3);
  CHECK(net.cited_count() == 2);
  CHECK(net.edge_count() == 4);
  CHECK(report.rows == 4);
  CHECK(report.duplicate_rows_dropped == 0);
  CHECK(report.self_loops_dropped == 0);
}

TEST_CASE("duplicate rows collapse to one edge") {
  TempDir dir("dup");
  write_file(dir.str("edges.csv"), "citing_id,cited_id\np1,s1\np1,s1\n");
  LoadReport report;
  CitationNetwork net = load_citations(dir.str("edges.csv"), InputFormat::edge_csv, {}, {}, &report);
  CHECK(net.edge_count() == 1);
  CHECK(report.duplicate_rows_dropped == 1);
}

TEST_CASE("self-loops are dropped") {
  TempDir dir("loop");
  write_file(dir.str("edges.csv"), "citing_id,cited_id\np1,p1\np2,s1\n");
  LoadReport report;
  CitationNetwork net = load_citations(dir.str("edges.csv"), InputFormat::edge_csv, {}, {}, &report);
  CHECK(net.edge_count() == 1);
  CHECK(report.self_loops_dropped == 1);
}

TEST_CASE("load errors") {
  TempDir dir("err");
  SUBCASE("empty file") {
    write_file(dir.str("edges.csv"), "");
    CHECK_THROWS_AS(load_citations(dir.str("edges.csv"), InputFormat::edge_csv),
                    empty_network_error);
  }
  SUBCASE("header only") {
    write_file(dir.str("edges.csv"), "citing_id,cited_id\n");
    CHECK_THROWS_AS(load_citations(dir.str("edges.csv"), InputFormat::edge_csv),
                    empty_network_error);
  }
  SUBCASE("malformed row carries its line number") {
    write_file(dir.str("edges.csv"), "citing_id,cited_id\np1,s1\np2,s2,extra\n");
    try {
      load_citations(dir.str("edges.csv"), InputFormat::edge_csv);
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      CHECK(e.line == 3);
    }
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_citations(dir.str("nope.csv"), InputFormat::edge_csv), io_error);
  }
}

TEST_CASE("metadata sidecar") {
  TempDir dir("meta");
  write_file(dir.str("edges.csv"), "citing_id,cited_id\np1,s1\np1,s2\np2,s1\n");
  write_file(dir.str("meta.csv"),
             "id,label,year,typology,raw_reference\n"
             "s1,\"Gaskell, Philip\",1972,monograph,\"Gaskell, A New Introduction\"\n"
             "s2,,,,\n"
             "p1,Some Monograph,1999,monograph,\n");
  CitationNetwork net = load_citations(dir.str("edges.csv"), InputFormat::edge_csv_with_metadata,
                                       dir.str("meta.csv"));
  const DocumentRecord* rec = net.record("s1");
  REQUIRE(rec != nullptr);
  CHECK(rec->label == "Gaskell, Philip");
  CHECK(rec->year == 1972);
  CHECK(rec->typology == Typology::monograph);
  CHECK(rec->raw_reference == "Gaskell, A New Introduction");
  CHECK_FALSE(rec->is_citing);
  CHECK(net.record("p1")->is_citing);

  SUBCASE("bad year rejected") {
    write_file(dir.str("meta.csv"), "id,label,year,typology,raw_reference\ns1,x,19999,,\n");
    CHECK_THROWS_AS(load_citations(dir.str("edges.csv"), InputFormat::edge_csv_with_metadata,
                                   dir.str("meta.csv")),
                    parse_error);
  }
  SUBCASE("unknown typology rejected") {
    write_file(dir.str("meta.csv"), "id,label,year,typology,raw_reference\ns1,x,,novel,\n");
    CHECK_THROWS_AS(load_citations(dir.str("edges.csv"), InputFormat::edge_csv_with_metadata,
                                   dir.str("meta.csv")),
                    parse_error);
  }
  SUBCASE("no-author filter drops flagged references") {
    LoadOptions options;
    options.drop_references_without_author = true;
    LoadReport report;
    CitationNetwork filtered =
        load_citations(dir.str("edges.csv"), InputFormat::edge_csv_with_metadata,
                       dir.str("meta.csv"), options, &report);
    CHECK(report.no_author_dropped == 1);  // s2 has an empty label
    CHECK(filtered.cited_count() == 1);
  }
}

TEST_CASE("degree sums equal the edge count") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<std::string, std::string>> rows;
    for (int e = 0; e < 60; ++e) {
      rows.emplace_back("p" + std::to_string(rng.bounded(12)), "s" + std::to_string(rng.bounded(30)));
    }
    CitationNetwork net = testutil::make_network(rows);
    std::size_t in_sum = 0, out_sum = 0;
    for (std::uint32_t i = 0; i < net.cited_count(); ++i) in_sum += net.in_degree(i);
    for (std::uint32_t i = 0; i < net.citing_count(); ++i) out_sum += net.out_degree(i);
    CHECK(in_sum == net.edge_count());
    CHECK(out_sum == net.edge_count());
  }
}

namespace {

CitationNetwork with_references(const std::vector<std::pair<std::string, std::string>>& edges,
                                const std::vector<std::pair<std::string, std::string>>& refs) {
  CitationNetwork net = testutil::make_network(edges);
  std::vector<DocumentRecord> records;
  for (const auto& [id, reference] : refs) {
    DocumentRecord rec;
    rec.id = id;
    rec.raw_reference = reference;
    records.push_back(rec);
  }
  net.attach_records(std::move(records));
  return net;
}

}  // namespace

TEST_CASE("dedup_references merges similar references") {
  CitationNetwork net = with_references(
      {{"p1", "g1"}, {"p2", "g2"}, {"p3", "x1"}},
      {{"g1", "Gaskell, New Introduction to Bibliography"},
       {"g2", "Gaskell, A New Introduction to Bibliography"},
       {"x1", "Completely Different Title About Ships"}});
  DedupOptions options;
  options.similarity_threshold = 0.84;
  DedupResult result = dedup_references(net, options);
  CHECK(result.network.cited_count() == 2);
  REQUIRE(result.report.groups.size() == 1);
  CHECK(result.report.groups[0].canonical == "g1");  // lexicographically smallest id
  CHECK(result.report.groups[0].members.size() == 2);
  CHECK(result.report.merged_members() == 1);
  // Edges re-targeted: p2 now cites g1.
  auto idx = result.network.cited_index("g1");
  REQUIRE(idx);
  CHECK(result.network.in_degree(*idx) == 2);
  CHECK_FALSE(result.network.cited_index("g2"));
}

TEST_CASE("dedup threshold extremes") {
  CitationNetwork net = with_references(
      {{"p1", "a"}, {"p1", "b"}, {"p2", "c"}},
      {{"a", "alpha title"}, {"b", "beta title"}, {"c", "gamma title"}});
  SUBCASE("threshold 1.0 with distinct strings merges nothing") {
    DedupOptions options;
    options.similarity_threshold = 1.0;
    DedupResult result = dedup_references(net, options);
    CHECK(result.report.groups.empty());
    CHECK(result.network.cited_count() == 3);
    CHECK(result.network.edge_count() == net.edge_count());
  }
  SUBCASE("threshold 0.0 merges everything") {
    DedupOptions options;
    options.similarity_threshold = 0.0;
    DedupResult result = dedup_references(net, options);
    REQUIRE(result.report.groups.size() == 1);
    CHECK(result.report.groups[0].members.size() == 3);
    CHECK(result.network.cited_count() == 1);
  }
}

TEST_CASE("dedup is idempotent") {
  CitationNetwork net = with_references(
      {{"p1", "r1"}, {"p2", "r2"}, {"p3", "r3"}, {"p3", "r4"}},
      {{"r1", "Venice and its lagoon, p. 12"},
       {"r2", "Venice and its lagoons"},
       {"r3", "The printing press as an agent of change"},
       {"r4", "Printing press as an agent of change"}});
  DedupOptions options;
  options.similarity_threshold = 0.84;
  DedupResult once = dedup_references(net, options);
  DedupResult twice = dedup_references(once.network, options);
  CHECK(twice.report.groups.empty());
  CHECK(twice.network.cited_ids() == once.network.cited_ids());
  CHECK(twice.network.edge_count() == once.network.edge_count());
}

TEST_CASE("raising the threshold never merges more members") {
  Rng rng(23);
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::pair<std::string, std::string>> refs;
  const char* stems[] = {"history of venice", "history of venise", "printing in england",
                         "printing in englande", "annales school", "annaless school",
                         "economic history", "economics history"};
  for (int i = 0; i < 8; ++i) {
    std::string id = "r" + std::to_string(i);
    edges.emplace_back("p" + std::to_string(i % 3), id);
    refs.emplace_back(id, stems[i]);
  }
  CitationNetwork net = with_references(edges, refs);
  std::size_t previous = SIZE_MAX;
  for (double threshold : {0.5, 0.7, 0.84, 0.95, 1.0}) {
    DedupOptions options;
    options.similarity_threshold = threshold;
    DedupResult result = dedup_references(net, options);
    std::size_t merged = result.report.merged_members();
    CHECK(merged <= previous);
    previous = merged;
  }
}

TEST_CASE("dedup configuration errors") {
  CitationNetwork net = testutil::make_network({{"p1", "s1"}});
  SUBCASE("missing raw_reference") {
    DedupOptions options;
    CHECK_THROWS_AS(dedup_references(net, options), config_error);
  }
  SUBCASE("normalization none falls back to ids") {
    DedupOptions options;
    options.normalization = ReferenceNormalization::none;
    options.similarity_threshold = 1.0;
    CHECK_NOTHROW(dedup_references(net, options));
  }
  SUBCASE("threshold out of range") {
    DedupOptions options;
    options.similarity_threshold = 1.5;
    CHECK_THROWS_AS(dedup_references(net, options), config_error);
  }
}

TEST_CASE("first-token blocking compares only within blocks") {
  CitationNetwork net = with_references(
      {{"p1", "a1"}, {"p2", "a2"}, {"p3", "b1"}},
      {{"a1", "gaskell new introduction"}, {"a2", "gaskell new introductions"},
       {"b1", "zaskell new introduction"}});
  DedupOptions options;
  options.similarity_threshold = 0.8;
  options.block_on_first_token = true;
  DedupResult result = dedup_references(net, options);
  REQUIRE(result.report.groups.size() == 1);
  CHECK(result.report.groups[0].members.size() == 2);  // b1 sits in another block
}

TEST_CASE("select_core nearest rank with tie inclusion") {
  SUBCASE("tied threshold keeps every tied source") {
    // in-degrees [1,1,1,1,1,1,1,1,1,10], q=0.9: rank 9 -> threshold 1 -> all core.
    std::vector<std::pair<std::string, std::string>> rows;
    for (int s = 0; s < 9; ++s) rows.emplace_back("p" + std::to_string(s), "s" + std::to_string(s));
    for (int p = 0; p < 10; ++p) rows.emplace_back("q" + std::to_string(p), "hub");
    CitationNetwork net = testutil::make_network(rows);
    CoreSet core = select_core(net, 0.9);
    CHECK(core.threshold == 1);
    CHECK(core.members.size() == 10);
  }
  SUBCASE("1..100 degrees at q=0.95 keep six members") {
    std::vector<std::pair<std::string, std::string>> rows;
    for (int s = 1; s <= 100; ++s) {
      for (int k = 0; k < s; ++k) {
        rows.emplace_back("p" + std::to_string(k), "s" + std::to_string(s));
      }
    }
    CitationNetwork net = testutil::make_network(rows);
    CoreSet core = select_core(net, 0.95);
    CHECK(core.threshold == 95);
    CHECK(core.members.size() == 6);
    CHECK(core.members.front().id == "s100");  // sorted by in-degree descending
  }
  SUBCASE("single cited source is always core") {
    CitationNetwork net = testutil::make_network({{"p1", "s1"}, {"p2", "s1"}});
    CoreSet core = select_core(net, 0.995);
    REQUIRE(core.members.size() == 1);
    CHECK(core.members[0].id == "s1");
  }
  SUBCASE("quantile out of range") {
    CitationNetwork net = testutil::make_network({{"p1", "s1"}});
    CHECK_THROWS_AS(select_core(net, 0.0), config_error);
    CHECK_THROWS_AS(select_core(net, 1.0), config_error);
  }
}

TEST_CASE("lower quantiles select supersets") {
  Rng rng(31);
  std::vector<std::pair<std::string, std::string>> rows;
  for (int e = 0; e < 400; ++e) {
    rows.emplace_back("p" + std::to_string(rng.bounded(40)), "s" + std::to_string(rng.bounded(80)));
  }
  CitationNetwork net = testutil::make_network(rows);
  CoreSet coarse = select_core(net, 0.5);
  CoreSet fine = select_core(net, 0.9);
  std::set<std::string> coarse_ids, fine_ids;
  for (const auto& m : coarse.members) coarse_ids.insert(m.id);
  for (const auto& m : fine.members) fine_ids.insert(m.id);
  for (const auto& id : fine_ids) CHECK(coarse_ids.count(id) == 1);
  // Every member clears the threshold, every non-member falls below it.
  for (const auto& m : fine.members) CHECK(m.in_degree >= fine.threshold);
  std::size_t below = 0;
  for (std::uint32_t s = 0; s < net.cited_count(); ++s) {
    if (net.in_degree(s) < fine.threshold) ++below;
  }
  CHECK(below + fine.members.size() == net.cited_count());
}

TEST_SUITE_END();
