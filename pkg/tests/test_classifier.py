import json

import pytest
from hypothesis import given, settings

from dhkit import oracles, patterns
from dhkit.classifier import (
    ROUTES, Certificate, certify, classify, fast_recognize, lemma_audit, verify_certificate,
)
from dhkit.graph import Graph
from dhkit.pruning import EliminationSequence, EliminationStep, StepKind
from dhkit.workbench import gen_instance

from .test_graph import graphs


def test_classify_examples():
    r = classify(patterns.C5)
    assert not r.is_dh and not r.in_class and not any(r.route_results.values())
    r = classify(patterns.P5)
    assert r.is_dh and not r.is_co_dh and not r.in_class and r.routes_agree
    r = classify(patterns.BULL)
    assert r.in_class and r.is_at_free and all(r.route_results.values())
    assert set(r.route_results) == set(ROUTES)
    d = r.to_dict()
    assert json.loads(json.dumps(d)) == d


def test_disconnected_graphs_need_cograph_components():
    r = classify(patterns.COGEM)
    assert not r.in_class and r.routes_agree
    two_p3 = Graph(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    assert classify(two_p3).in_class and classify(two_p3).routes_agree


def test_certify_examples():
    c = certify(patterns.clique(5))
    assert c.in_class and len(c.seq) == 4 and c.seq.residual == (4,)
    c = certify(patterns.GEM)
    assert not c.in_class and c.pattern == "Gem" and c.embedding == (0, 1, 2, 3, 4)
    c = certify(patterns.cycle(6))
    assert c.pattern == "P5" and verify_certificate(patterns.cycle(6), c)


def test_certificate_json_roundtrip():
    for g in (patterns.BULL, patterns.GEM, gen_instance(20, 2), patterns.cycle(7)):
        c = certify(g)
        d = c.to_dict()
        assert set(d) <= {"verdict", "kind", "steps", "residual", "embedding", "pattern"}
        back = Certificate.from_dict(json.loads(json.dumps(d)))
        assert back.to_dict() == d
        assert verify_certificate(g, back)


def test_tampered_certificates_fail():
    g = patterns.P4
    c = certify(g)
    assert verify_certificate(g, c)
    assert not verify_certificate(patterns.P5, Certificate(False, None, (0, 1, 2, 3, 4), "C5"))
    assert not verify_certificate(patterns.P5, Certificate(False, None, (0, 1, 2, 3, 4), "Bull"))
    pendant = EliminationSequence((EliminationStep(StepKind.PENDANT, 0, 1),), (1, 2, 3))
    assert not verify_certificate(g, Certificate(True, pendant, (0, 1, 2)))
    assert not verify_certificate(g, Certificate(True, c.seq, (4, 3, 2, 1)))
    bad_step = EliminationSequence((EliminationStep(StepKind.TRUE_TWIN, 0, 3),), (1, 2, 3))
    assert not verify_certificate(g, Certificate(True, bad_step, (0, 1, 2)))


def test_fast_recognize_examples():
    assert not fast_recognize(patterns.P5)
    assert fast_recognize(patterns.BULL) and fast_recognize(patterns.K1) and fast_recognize(Graph(0))
    big = gen_instance(100_000, 0)
    assert fast_recognize(big)


@given(graphs(max_n=10))
@settings(max_examples=300, deadline=None)
def test_fast_recognize_matches_oracle(g):
    assert fast_recognize(g) == oracles.in_class_by_forbidden(g)


def test_fast_recognize_survives_fingerprint_collisions(monkeypatch):
    # force every fingerprint to collide: the exact confirmation must still decide
    import dhkit.classifier as cl

    class Zero:
        def __init__(self, seed):
            pass

        def getrandbits(self, k):
            return 0

    big = gen_instance(40, 5)
    monkeypatch.setattr(cl.random, "Random", Zero)
    for code in range(0, 1 << 10, 7):
        g = Graph.from_code(5, code)
        assert cl.fast_recognize(g) == oracles.in_class_by_forbidden(g)
    assert cl.fast_recognize(big)


def test_lemma_audit_examples():
    a = lemma_audit(patterns.BULL)
    assert a.ok and a.cutvertices == [1, 3] and a.in_class
    a = lemma_audit(patterns.P4)
    assert a.ok and a.connected_dh
    assert oracles.is_prime(patterns.P4)


@given(graphs(max_n=9))
@settings(max_examples=150, deadline=None)
def test_lemma_audit_has_no_violations(g):
    assert lemma_audit(g).ok


@pytest.mark.parametrize("n", range(1, 6))
def test_certificates_exhaustive_small(n):
    for code in range(1 << (n * (n - 1) // 2)):
        g = Graph.from_code(n, code)
        c = certify(g)
        assert c.in_class == oracles.in_class_by_forbidden(g)
        assert verify_certificate(g, c)
