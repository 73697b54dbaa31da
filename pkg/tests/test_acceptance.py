"""Acceptance gate: one PASS/FAIL line per criterion.

Slow: the exhaustive n = 7 sweeps dominate (roughly half an hour on one core).
"""

import statistics
import time

import pytest

from dhkit import oracles, patterns
from dhkit.classifier import certify, fast_recognize, verify_certificate
from dhkit.graph import Graph, is_connected, to_graph6
from dhkit.iso import canonical_form, is_isomorphic
from dhkit.pruning import prune_dh
from dhkit.workbench import bench, census, cross_validate, enumerate_labeled, gen_instance, read_graph6

from .conftest import record


@pytest.fixture(scope="module")
def reports():
    return {n: cross_validate(n) for n in range(1, 8)}


def failing(reports, checks):
    out = {}
    for n, rep in reports.items():
        for c in checks:
            if rep.failures[c]:
                out[(n, c)] = rep.failures[c]
    return out


def test_criterion_1_definition_agreement():
    t0 = time.perf_counter()
    bad = []
    dh_count = 0
    for code in range(1 << 21):
        g = Graph.from_code(7, code)
        a = oracles.is_dh_by_distances(g)
        b = oracles.is_dh_by_forbidden(g)
        dh_count += b
        if a != b:
            bad.append(code)
        elif is_connected(g) and (prune_dh(g) is not None) != b:
            bad.append(code)
    secs = time.perf_counter() - t0
    ok = not bad and secs < 900
    record(1, ok, f"2^21 graphs, {dh_count} DH, {len(bad)} discrepancies, {secs:.0f}s (target < 900s)")
    assert not bad, [to_graph6(Graph.from_code(7, c)) for c in bad[:5]]
    assert secs < 900


def test_criterion_2_four_routes(reports):
    checks = ["four-routes", "class-by-complement", "twin-elim", "modular", "split-tree",
              "fast-recognize", "embedding-vs-scan"]
    bad = failing(reports, checks)
    graphs = sum(r.graphs for r in reports.values())
    record(2, not bad and reports[7].graphs == 1 << 21,
           f"cross_validate n=1..7 over {graphs} labelled graphs, failures {bad or 'none'}")
    assert not bad
    assert all(r.empty for r in reports.values()), {n: dict(r.failures) for n, r in reports.items()}


def _n8_file(tmp_path, reps7):
    # every 8-vertex graph minus its last vertex is some 7-vertex graph
    seen = {}
    for g in reps7:
        base = g.edges()
        for nb in range(1 << 7):
            h = Graph(8, base + [(v, 7) for v in range(7) if nb >> v & 1])
            seen.setdefault(canonical_form(h), h)
    path = tmp_path / "graphs8.g6"
    path.write_text("".join(to_graph6(h) + "\n" for h in seen.values()))
    return path


def test_criterion_3_prime_census(tmp_path):
    rows = {}
    reps7 = {}
    for g in enumerate_labeled(7):
        reps7.setdefault(canonical_form(g), g)
    for n in range(1, 8):
        rows[n] = census(n, reps7.values() if n == 7 else None)
    path = _n8_file(tmp_path, reps7.values())
    with open(path, encoding="ascii") as fh:
        rows[8] = census(8, read_graph6(fh))
    counts = {n: r.prime_dh_co_dh for n, r in rows.items()}
    members = [(n, m) for n, r in rows.items() for m in r.prime_members]
    from dhkit.graph import parse_graph6
    shapes_ok = sorted(
        "P4" if is_isomorphic(parse_graph6(m), patterns.P4)
        else "Bull" if is_isomorphic(parse_graph6(m), patterns.BULL) else m
        for _, m in members) == ["Bull", "P4"]
    expected = {1: 0, 2: 0, 3: 0, 4: 1, 5: 1, 6: 0, 7: 0, 8: 0}
    sizes = {n: r.graphs for n, r in rows.items()}
    ok = counts == expected and shapes_ok and sizes[7] == 1044 and sizes[8] == 12346
    record(3, ok, f"prime in-class counts {counts}; graphs per n {sizes}; members P4 and Bull: {shapes_ok}")
    assert sizes[7] == 1044 and sizes[8] == 12346
    assert counts == expected and shapes_ok
    assert all(r.chain_ok() for r in rows.values())


def test_criterion_4_small_census():
    r4, r5 = census(4), census(5)
    excluded = sorted(
        name for name in patterns.CLASS_OBSTRUCTIONS
        if not oracles.in_class_by_forbidden(patterns.CATALOG[name]))
    ok = (r4.dh_co_dh, r4.graphs, r5.dh_co_dh, r5.graphs) == (11, 11, 29, 34) and len(excluded) == 5
    record(4, ok, f"n=4 {r4.dh_co_dh}/{r4.graphs}, n=5 {r5.dh_co_dh}/{r5.graphs}")
    assert (r4.dh_co_dh, r4.graphs) == (11, 11)
    assert (r5.dh_co_dh, r5.graphs) == (29, 34)


def test_criterion_5_decomposition_validity(reports):
    checks = ["split-tree", "split-cograph", "split-atfree", "split-cutvertex", "modular",
              "module-families", "replay"]
    bad = failing(reports, checks)
    trees = sum(r.evaluated["split-tree"] for r in reports.values())
    mds = sum(r.evaluated["modular"] for r in reports.values())
    record(5, not bad, f"{trees} split trees and {mds} modular trees validated, failures {bad or 'none'}")
    assert not bad
    assert mds == sum(r.graphs for r in reports.values())


def test_criterion_6_lemma_suite(reports):
    bad = failing(reports, ["lemma-audit", "containment"])
    audits = sum(r.evaluated["lemma-audit"] for r in reports.values())
    record(6, not bad, f"{audits} lemma audits, failures {bad or 'none'}")
    assert not bad
    assert audits == sum(r.graphs for r in reports.values())


def test_criterion_7_certificates():
    total = bad = 0
    for n in range(0, 7):
        for g in enumerate_labeled(n) if n else [Graph(0)]:
            c = certify(g)
            total += 1
            if c.in_class != oracles.in_class_by_forbidden(g) or not verify_certificate(g, c):
                bad += 1
    record(7, bad == 0, f"{total - bad}/{total} certificates verified for n <= 6")
    assert bad == 0


def test_criterion_8_generator_soundness():
    bad = []
    checked = 0
    for i in range(10_000):
        n = 1 + i % 50
        g = gen_instance(n, i)
        ok = g.n == n and fast_recognize(g)
        if ok and n <= 14:
            checked += 1
            ok = oracles.in_class_by_forbidden(g)
        if not ok:
            bad.append((n, i))
    record(8, not bad, f"10000 instances (n = 1 + i mod 50, seed i), {checked} also checked by "
                       f"the forbidden oracle, {len(bad)} failures")
    assert not bad, bad[:5]


def test_criterion_9_performance():
    t100, t200, ratios = [], [], []
    for seed in range(5):
        rows = bench([100_000, 200_000], seed, repeats=3)
        assert all(r.in_class for r in rows)
        t100.append(rows[0].seconds)
        t200.append(rows[1].seconds)
        ratios.append(rows[1].seconds / rows[0].seconds)
    ratio = statistics.mean(t200) / statistics.mean(t100)
    ok = max(t100) < 5 and ratio <= 2.5
    record(9, ok, f"n=100000 max {max(t100):.2f}s; mean-time ratio {ratio:.2f} "
                  f"(mean of per-seed ratios {statistics.mean(ratios):.2f}) over 5 seeds")
    assert max(t100) < 5
    assert ratio <= 2.5
