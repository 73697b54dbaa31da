import pytest

from dhkit import oracles, patterns
from dhkit.classifier import fast_recognize
from dhkit.iso import is_isomorphic
from dhkit.oracles import SizeLimitError
from dhkit.workbench import (
    bench, census, cross_validate, enumerate_labeled, gen_instance, perturb, worker_count,
)


def test_enumeration_counts():
    assert sum(1 for _ in enumerate_labeled(3)) == 8
    assert sum(1 for _ in enumerate_labeled(4)) == 64
    with pytest.raises(SizeLimitError):
        next(enumerate_labeled(8))
    codes = [g.code for g in enumerate_labeled(4)]
    assert codes == list(range(64))


def test_small_census():
    rows = [census(n) for n in range(1, 6)]
    assert [r.graphs for r in rows] == [1, 2, 4, 11, 34]
    assert rows[3].dh_co_dh == 11
    assert rows[4].dh_co_dh == 29
    assert [r.prime_dh_co_dh for r in rows] == [0, 0, 0, 1, 1]
    assert all(r.chain_ok() for r in rows)


def test_census_excludes_exactly_the_five_obstructions_at_n5():
    excluded = []
    seen = set()
    from dhkit.iso import canonical_form
    for g in enumerate_labeled(5):
        cf = canonical_form(g)
        if cf in seen:
            continue
        seen.add(cf)
        if not oracles.in_class_by_forbidden(g):
            excluded.append(g)
    assert len(excluded) == 5
    for name in patterns.CLASS_OBSTRUCTIONS:
        assert sum(is_isomorphic(g, patterns.CATALOG[name]) for g in excluded) == 1


def test_census_from_graph_list_deduplicates():
    graphs = [patterns.BULL, patterns.BULL.complement(), patterns.P5]
    row = census(5, graphs)
    assert row.graphs == 2 and row.dh_co_dh == 1 and row.prime_dh_co_dh == 1
    with pytest.raises(ValueError):
        census(4, graphs)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_cross_validate_small(n):
    rep = cross_validate(n, threads=1)
    assert rep.empty, rep.lines()[:5]
    assert rep.graphs == 1 << (n * (n - 1) // 2)


def test_cross_validate_parallel_matches_serial():
    a = cross_validate(5, threads=1, fault=True)
    b = cross_validate(5, threads=2, fault=True)
    assert a.failures == b.failures
    assert [(d.code, d.check) for d in a.discrepancies] == [(d.code, d.check) for d in b.discrepancies]


def test_fault_injection_names_a_witness():
    rep = cross_validate(5, fault=True, threads=1)
    assert not rep.empty
    d = rep.discrepancies[0]
    assert d.check == "fast-recognize" and d.graph6
    from dhkit.graph import parse_graph6
    assert not oracles.in_class_by_forbidden(parse_graph6(d.graph6))
    assert [x.code for x in rep.discrepancies] == sorted(x.code for x in rep.discrepancies)


def test_gen_instance_examples():
    assert gen_instance(1, 0) == patterns.K1
    bulls = [s for s in range(200) if is_isomorphic(gen_instance(5, s), patterns.BULL)]
    assert bulls
    assert gen_instance(30, 7) == gen_instance(30, 7)
    with pytest.raises(ValueError):
        gen_instance(0, 1)


def test_gen_instance_soundness_sample():
    for seed in range(300):
        n = 1 + seed % 30
        g = gen_instance(n, seed)
        assert g.n == n
        assert fast_recognize(g)
        if n <= 14:
            assert oracles.in_class_by_forbidden(g)


def test_perturb_adds_one_edge():
    g = gen_instance(50, 1)
    h = perturb(g, 1)
    assert h.m == g.m + 1
    assert perturb(patterns.clique(4), 0) == patterns.clique(4)


def test_bench_rows():
    rows = bench([1, 200, 400], seed=3)
    assert [r.n for r in rows] == [1, 200, 400]
    assert rows[0].seconds < 1e-3 and rows[0].in_class
    assert rows[0].n_ratio is None and rows[2].n_ratio == 2
    assert all(r.in_class for r in rows)


def test_worker_count_reads_env(monkeypatch):
    monkeypatch.setenv("DHKIT_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.delenv("DHKIT_THREADS")
    assert worker_count() >= 1
