#include <doctest.h>

#include <algorithm>

#include "corelit/community.hpp"
#include "corelit/errors.hpp"
#include "corelit/rng.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace corelit;

namespace {

CouplingNetwork make_coupling(std::size_t n, std::vector<CouplingEdge> edges,
                              Weighting weighting = Weighting::raw) {
  std::vector<DocumentId> vertices(n);
  for (std::size_t i = 0; i < n; ++i) vertices[i] = "v" + std::to_string(i);
  return CouplingNetwork(std::move(vertices), std::move(edges), weighting);
}

CouplingNetwork two_triangles() {
  return make_coupling(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}});
}

std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edge_tuples(
    const CouplingNetwork& b) {
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> out;
  for (const auto& e : b.edges()) out.emplace_back(e.i, e.j, e.weight);
  return out;
}

CouplingNetwork random_weighted_graph(Rng& rng, std::size_t n, double p, bool integer_weights) {
  std::vector<CouplingEdge> edges;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) {
        double w = integer_weights ? 1.0 + static_cast<double>(rng.bounded(5))
                                   : 0.1 + rng.uniform() * 3.0;
        edges.push_back({i, j, w});
      }
    }
  }
  if (edges.empty()) edges.push_back({0, 1, 1.0});
  return make_coupling(n, std::move(edges));
}

}  // namespace

TEST_SUITE_BEGIN("community detection");

TEST_CASE("modularity of two disjoint triangles is exactly 1/2") {
  CouplingNetwork b = two_triangles();
  std::vector<std::uint32_t> byTriangle = {0, 0, 0, 1, 1, 1};
  CHECK(modularity(b, byTriangle) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("single community collapses to zero for a single edge") {
  CouplingNetwork b = make_coupling(2, {{0, 1, 1}});
  std::vector<std::uint32_t> one = {0, 0};
  CHECK(modularity(b, one) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("singleton partition is negative without self-loops") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    CouplingNetwork b = random_weighted_graph(rng, 8, 0.4, false);
    std::vector<std::uint32_t> singletons(b.vertex_count());
    for (std::uint32_t v = 0; v < singletons.size(); ++v) singletons[v] = v;
    CHECK(modularity(b, singletons) < 0.0);
  }
}

TEST_CASE("modularity matches the term-by-term oracle") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 3 + rng.bounded(18);
    CouplingNetwork b = random_weighted_graph(rng, n, 0.3 + 0.4 * rng.uniform(), false);
    std::vector<std::uint32_t> labels(n);
    for (auto& l : labels) l = static_cast<std::uint32_t>(rng.bounded(4));
    double expected = oracle::modularity(n, edge_tuples(b), labels);
    CHECK(modularity(b, labels) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("modularity properties") {
  Rng rng(29);
  CouplingNetwork b = random_weighted_graph(rng, 12, 0.4, true);
  std::vector<std::uint32_t> labels(12);
  for (auto& l : labels) l = static_cast<std::uint32_t>(rng.bounded(3));
  double q = modularity(b, labels);

  SUBCASE("bounded") {
    CHECK(q >= -0.5);
    CHECK(q <= 1.0);
  }
  SUBCASE("invariant under relabeling") {
    std::vector<std::uint32_t> relabeled(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) relabeled[i] = 7 - labels[i];
    CHECK(modularity(b, relabeled) == doctest::Approx(q).epsilon(1e-13));
  }
  SUBCASE("invariant under uniform weight scaling") {
    std::vector<CouplingEdge> scaled(b.edges().begin(), b.edges().end());
    for (auto& e : scaled) e.weight *= 3.5;
    CouplingNetwork sb = make_coupling(12, std::move(scaled));
    CHECK(modularity(sb, labels) == doctest::Approx(q).epsilon(1e-12));
  }
}

TEST_CASE("modularity errors") {
  CouplingNetwork empty = make_coupling(3, {});
  std::vector<std::uint32_t> labels = {0, 0, 0};
  CHECK_THROWS_AS(modularity(empty, labels), modularity_undefined_error);
  CouplingNetwork b = make_coupling(2, {{0, 1, 1}});
  std::vector<std::uint32_t> short_labels = {0};
  CHECK_THROWS_AS(modularity(b, short_labels), contract_error);
}

TEST_CASE("louvain recovers the two triangles") {
  CouplingNetwork b = two_triangles();
  Partition p = louvain(b, 1.0, 42);
  CHECK(p.community_count == 2);
  CHECK(p.modularity == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(p.assignment[0] == p.assignment[1]);
  CHECK(p.assignment[1] == p.assignment[2]);
  CHECK(p.assignment[3] == p.assignment[4]);
  CHECK(p.assignment[4] == p.assignment[5]);
  CHECK(p.assignment[0] != p.assignment[3]);

  // Brute force over all 203 partitions of 6 vertices confirms the optimum.
  double best = -1.0;
  oracle::enumerate_partitions(6, [&](const std::vector<std::uint32_t>& labels) {
    best = std::max(best, oracle::modularity(6, edge_tuples(b), labels));
  });
  CHECK(p.modularity == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("louvain merges a complete graph into one community") {
  std::vector<CouplingEdge> edges;
  for (std::uint32_t i = 0; i < 5; ++i) {
    for (std::uint32_t j = i + 1; j < 5; ++j) edges.push_back({i, j, 1.0});
  }
  CouplingNetwork b = make_coupling(5, std::move(edges));
  Partition p = louvain(b, 1.0, 7);
  CHECK(p.community_count == 1);

  double best = -1.0;
  std::vector<std::uint32_t> best_labels;
  oracle::enumerate_partitions(5, [&](const std::vector<std::uint32_t>& labels) {
    double q = oracle::modularity(5, edge_tuples(b), labels);
    if (q > best) {
      best = q;
      best_labels = labels;
    }
  });
  CHECK(*std::max_element(best_labels.begin(), best_labels.end()) == 0);  // one block is optimal
  CHECK(p.modularity == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("louvain determinism and the singleton lower bound") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    CouplingNetwork b = random_weighted_graph(rng, 14, 0.3, true);
    Partition p1 = louvain(b, 1.0, 1000 + trial);
    Partition p2 = louvain(b, 1.0, 1000 + trial);
    CHECK(p1.assignment == p2.assignment);
    CHECK(p1.modularity == p2.modularity);
    // Recorded Q matches a from-scratch recomputation.
    CHECK(p1.modularity == doctest::Approx(modularity(b, p1.assignment)).epsilon(1e-13));

    std::vector<std::uint32_t> singletons(b.vertex_count());
    for (std::uint32_t v = 0; v < singletons.size(); ++v) singletons[v] = v;
    CHECK(p1.modularity >= modularity(b, singletons));

    // Labels are dense 0..K-1.
    std::vector<bool> seen(p1.community_count, false);
    for (std::uint32_t l : p1.assignment) {
      REQUIRE(l < p1.community_count);
      seen[l] = true;
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](bool s) { return s; }));
  }
}

TEST_CASE("isolated vertices stay in singleton communities") {
  CouplingNetwork b = make_coupling(5, {{0, 1, 2.0}, {1, 2, 2.0}, {0, 2, 2.0}});
  Partition p = louvain(b, 1.0, 5);
  CHECK(p.community_count == 3);  // triangle + two isolated singletons
  CHECK(p.assignment[3] != p.assignment[4]);
  CHECK(p.assignment[3] != p.assignment[0]);
}

TEST_CASE("louvain recovers planted partitions") {
  // 4 blocks x 25 vertices, p_in 0.5, p_out 0.01; NMI >= 0.9 in >= 95/100 seeds.
  int recovered = 0;
  for (int seed = 0; seed < 100; ++seed) {
    Rng rng(9000 + seed);
    std::vector<std::uint32_t> truth(100);
    for (std::size_t v = 0; v < 100; ++v) truth[v] = static_cast<std::uint32_t>(v / 25);
    std::vector<CouplingEdge> edges;
    for (std::uint32_t i = 0; i < 100; ++i) {
      for (std::uint32_t j = i + 1; j < 100; ++j) {
        double p = truth[i] == truth[j] ? 0.5 : 0.01;
        if (rng.uniform() < p) edges.push_back({i, j, 1.0});
      }
    }
    CouplingNetwork b = make_coupling(100, std::move(edges));
    Partition part = louvain(b, 1.0, 777 + seed);
    if (oracle::nmi(truth, part.assignment) >= 0.9) ++recovered;
  }
  CHECK(recovered >= 95);
}

TEST_CASE("partition ensembles") {
  CouplingNetwork b = two_triangles();
  SUBCASE("count one wraps a single run") {
    PartitionEnsemble e = partition_ensemble(b, 1, 1.0, 123);
    REQUIRE(e.partitions.size() == 1);
    Partition direct = louvain(b, 1.0, derive_seed(123, 0));
    CHECK(e.partitions[0].assignment == direct.assignment);
  }
  SUBCASE("same master seed reproduces the ensemble") {
    PartitionEnsemble e1 = partition_ensemble(b, 6, 1.0, 99, 2);
    PartitionEnsemble e2 = partition_ensemble(b, 6, 1.0, 99, 1);
    REQUIRE(e1.partitions.size() == e2.partitions.size());
    for (std::size_t k = 0; k < e1.partitions.size(); ++k) {
      CHECK(e1.partitions[k].assignment == e2.partitions[k].assignment);
    }
  }
  SUBCASE("a unique optimum makes the ensemble degenerate") {
    PartitionEnsemble e = partition_ensemble(b, 10, 1.0, 4242);
    for (const auto& p : e.partitions) {
      CHECK(p.modularity == doctest::Approx(0.5).epsilon(1e-13));
      CHECK(p.community_count == 2);
    }
    CHECK(e.mean_modularity() == doctest::Approx(0.5).epsilon(1e-13));
  }
  SUBCASE("count must be positive") {
    CHECK_THROWS_AS(partition_ensemble(b, 0, 1.0, 1), config_error);
  }
}

TEST_SUITE_END();
