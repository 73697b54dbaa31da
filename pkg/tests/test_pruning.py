import json

import pytest
from hypothesis import given, settings

from dhkit import oracles, patterns
from dhkit.graph import Graph, is_connected
from dhkit.pruning import (
    EliminationSequence, EliminationStep, ReplayError, StepKind, prune_dh,
    reduce_to_bull_check, replay, twin_eliminate,
)
from dhkit.workbench import enumerate_labeled

from .test_graph import graphs


def test_prune_examples():
    seq = prune_dh(patterns.P4)
    assert len(seq) == 3 and len(seq.residual) == 1
    assert all(s.kind is StepKind.PENDANT for s in seq.steps)
    assert prune_dh(patterns.C5) is None
    assert prune_dh(patterns.HOUSE) is None
    with pytest.raises(ValueError):
        prune_dh(patterns.COGEM)


def test_twin_elimination_examples():
    res, seq = twin_eliminate(patterns.clique(5))
    assert res == patterns.K1 and len(seq) == 4
    assert all(s.kind is StepKind.TRUE_TWIN for s in seq.steps)
    res, seq = twin_eliminate(patterns.BULL)
    assert res == patterns.BULL and len(seq) == 0
    res, seq = twin_eliminate(patterns.GEM)
    assert res == patterns.GEM and len(seq) == 0


def test_reduce_to_bull_examples():
    assert reduce_to_bull_check(patterns.P5) is None
    seq, emb = reduce_to_bull_check(patterns.BULL)
    assert len(seq) == 0 and emb == (0, 1, 2, 3, 4)
    c4 = patterns.cycle(4)
    seq, emb = reduce_to_bull_check(c4)
    assert len(seq.residual) == len(emb) == 1


def test_cographs_reduce_by_twins_to_one_vertex():
    for n in range(1, 6):
        for g in enumerate_labeled(n):
            if oracles.is_cograph(g):
                res, _ = twin_eliminate(g)
                assert res.n == 1


def test_replay_examples():
    seq = prune_dh(patterns.P4)
    assert replay(patterns.P4, seq) == patterns.K1
    res, seq = twin_eliminate(patterns.clique(5))
    assert replay(res, seq, reversed=True) == patterns.clique(5)


@pytest.mark.parametrize("n", range(2, 7))
def test_prune_roundtrip_on_all_dh_graphs(n):
    for g in enumerate_labeled(n):
        if not is_connected(g):
            continue
        seq = prune_dh(g)
        assert (seq is not None) == oracles.is_dh_by_forbidden(g)
        if seq is not None:
            assert replay(replay(g, seq), seq, reversed=True) == g


def test_replay_rejects_bad_steps():
    g = patterns.P4
    bad = EliminationSequence((EliminationStep(StepKind.TRUE_TWIN, 0, 1),), (1, 2, 3))
    with pytest.raises(ReplayError) as info:
        replay(g, bad)
    assert info.value.index == 0
    missing = EliminationSequence(
        (EliminationStep(StepKind.PENDANT, 0, 1), EliminationStep(StepKind.PENDANT, 0, 1)), (1, 2, 3))
    with pytest.raises(ReplayError) as info:
        replay(g, missing)
    assert info.value.index == 1
    with pytest.raises(ReplayError):
        replay(patterns.K1, EliminationSequence((EliminationStep(StepKind.PENDANT, 1, 5),), (0,)),
               reversed=True)


@given(graphs(max_n=9))
@settings(max_examples=200, deadline=None)
def test_sequence_invariants_and_json(g):
    res, seq = twin_eliminate(g)
    removed = [s.removed for s in seq.steps]
    assert len(set(removed)) == len(removed)
    assert sorted(removed + list(seq.residual)) == list(range(g.n))
    assert replay(g, seq) == res
    assert replay(res, seq, reversed=True) == g
    assert EliminationSequence.from_dict(json.loads(seq.to_json())) == seq
    assert not oracles.local_features(res).truetwins
    assert not oracles.local_features(res).falsetwins


def test_step_json_shape():
    seq = prune_dh(Graph(3, [(0, 1), (1, 2)]))
    d = json.loads(seq.to_json())
    assert d == {"steps": [{"kind": "Pendant", "removed": 0, "witness": 1},
                           {"kind": "Pendant", "removed": 1, "witness": 2}], "residual": [2]}
