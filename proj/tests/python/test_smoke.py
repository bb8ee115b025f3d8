"""Smoke tests for the _corelit extension module.

Run directly (PYTHONPATH must point at the built module):
    python3 tests/python/test_smoke.py
"""

import math
import sys
import tempfile

import _corelit as m


def two_triangle_network():
    rows = []
    for a, b, s in [(1, 2, "s12"), (1, 3, "s13"), (2, 3, "s23"),
                    (4, 5, "s45"), (4, 6, "s46"), (5, 6, "s56")]:
        rows.append((f"p{a}", s))
        rows.append((f"p{b}", s))
    return m.network_from_edges(rows)


def test_network_shape():
    net = two_triangle_network()
    assert net.citing_count == 6
    assert net.cited_count == 6
    assert net.edge_count == 12
    assert net.in_degree("s12") == 2


def test_projection_and_modularity():
    net = two_triangle_network()
    b = m.project_coupling(net)
    assert b.vertex_count == 6
    assert b.edge_count == 6
    labels = [0 if v in ("p1", "p2", "p3") else 1 for v in b.vertices]
    q = m.modularity(b, labels)
    assert abs(q - 0.5) < 1e-12
    components, giant = b.components()
    assert components == 2
    assert abs(giant - 0.5) < 1e-12


def test_louvain_determinism():
    net = two_triangle_network()
    b = m.project_coupling(net)
    p1 = m.louvain(b, 1.0, 42)
    p2 = m.louvain(b, 1.0, 42)
    assert p1.assignment == p2.assignment
    assert p1.community_count == 2
    assert abs(p1.modularity - 0.5) < 1e-12


def test_core_selection():
    net = two_triangle_network()
    threshold, members = m.select_core(net, 0.995)
    assert threshold == 2
    assert len(members) == 6


def test_indicators():
    net = two_triangle_network()
    records, modularity_mean = m.compute_indicators(
        net, quantile=0.995, partitions=3, null_samples=25, seed=11)
    assert abs(modularity_mean - 0.5) < 1e-12
    assert len(records) == 6
    for rec in records:
        if rec["within"] is not None:
            assert abs(rec["within"] + rec["between"]) < 1e-12
            assert -1.0 <= rec["within"] <= 1.0


def test_configuration_sample():
    net = m.network_from_edges([("p1", "s1"), ("p2", "s2")])
    edges, dropped = m.configuration_sample(net, seed=3)
    assert len(edges) == 2
    assert dropped == 0


def test_jaro_winkler():
    assert abs(m.jaro_winkler("DWAYNE", "DUANE") - 0.84) < 1e-12
    normalized = m.normalize_reference("Gaskell, A New Introduction, pp. 12-13")
    assert normalized == "gaskell, a new introduction"


def test_synth_and_analyze(tmp_dir):
    net, truth, cores = m.generate_synth(
        communities=3, citing_per_community=20, pool=80, mean_citations=8.0,
        planted=[("local", 0, 0, 8), ("global", 0, 0, 8)], seed=5)
    assert len(cores) == 2
    assert net.citing_count <= 60
    assert set(truth.values()) == {0, 1, 2}

    import csv
    import os
    edges_path = os.path.join(tmp_dir, "edges.csv")
    with open(edges_path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["citing_id", "cited_id"])
        writer.writerows(net.edges())
    out = m.analyze_file(edges_path, os.path.join(tmp_dir, "run"),
                         partitions=2, null_samples=10, seed=9, quantile=0.99)
    assert out["records"] > 0
    assert os.path.exists(os.path.join(tmp_dir, "run", "summary.json"))


def main():
    failures = 0
    with tempfile.TemporaryDirectory() as tmp_dir:
        tests = [
            test_network_shape,
            test_projection_and_modularity,
            test_louvain_determinism,
            test_core_selection,
            test_indicators,
            test_configuration_sample,
            test_jaro_winkler,
            lambda: test_synth_and_analyze(tmp_dir),
        ]
        for test in tests:
            name = getattr(test, "__name__", "test_synth_and_analyze")
            try:
                test()
                print(f"ok   {name}")
            except AssertionError as exc:
                print(f"FAIL {name}: {exc}")
                failures += 1
    if not math.isclose(m.jaro_winkler("abc", "abc"), 1.0):
        failures += 1
    return failures


if __name__ == "__main__":
    sys.exit(min(main(), 1))
