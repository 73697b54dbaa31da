"""Twin and pendant elimination sequences.

A connected graph is distance-hereditary exactly when it can be pruned to a
single vertex by removing pendant vertices and twins.  Restricting to twin
removals only, a graph lies in DH ∩ co-DH exactly when the twin-free residual
is an induced subgraph of the Bull.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .graph import Graph, is_connected, iter_bits
from .iso import Embedding, find_induced_embedding
from .patterns import BULL


class StepKind(str, Enum):
    PENDANT = "Pendant"
    TRUE_TWIN = "TrueTwin"
    FALSE_TWIN = "FalseTwin"


@dataclass(frozen=True)
class EliminationStep:
    kind: StepKind
    removed: int
    witness: int

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "removed": self.removed, "witness": self.witness}


@dataclass(frozen=True)
class EliminationSequence:
    steps: tuple[EliminationStep, ...]
    residual: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def order(self) -> int:
        """Vertex count of the graph the sequence was produced on."""
        return len(self.steps) + len(self.residual)

    def to_dict(self) -> dict:
        return {"steps": [s.to_dict() for s in self.steps], "residual": list(self.residual)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> EliminationSequence:
        steps = tuple(
            EliminationStep(StepKind(s["kind"]), int(s["removed"]), int(s["witness"]))
            for s in data["steps"]
        )
        return cls(steps, tuple(int(v) for v in data["residual"]))


class ReplayError(ValueError):
    def __init__(self, index: int, message: str):
        super().__init__(f"step {index}: {message}")
        self.index = index


def _twin_key_tables(masks, alive: int):
    closed: dict[int, list[int]] = {}
    open_: dict[int, list[int]] = {}
    for v in iter_bits(alive):
        a = masks[v] & alive
        closed.setdefault(a | (1 << v), []).append(v)
        open_.setdefault(a, []).append(v)
    return closed, open_


def _next_twin(masks, alive: int) -> EliminationStep | None:
    """Smallest vertex with a true twin, else smallest with a false twin."""
    closed, open_ = _twin_key_tables(masks, alive)
    for table, kind in ((closed, StepKind.TRUE_TWIN), (open_, StepKind.FALSE_TWIN)):
        best = None
        for group in table.values():
            if len(group) > 1 and (best is None or group[0] < best[0]):
                best = group
        if best is not None:
            return EliminationStep(kind, best[0], best[1])
    return None


def prune_dh(g: Graph) -> EliminationSequence | None:
    """Greedy pendant/twin pruning of a connected graph down to one vertex.

    Each step removes the smallest eligible vertex of the highest-priority
    kind (pendant, then true twin, then false twin).  Returns ``None`` when the
    pruning stalls, which happens exactly when ``g`` is not distance-hereditary.
    """
    if not is_connected(g):
        raise ValueError("prune_dh requires a connected graph")
    return _prune(g.masks)


# sequences are immutable, and exhaustive runs ask several routes about one graph
@lru_cache(maxsize=64)
def _prune(masks: tuple[int, ...]) -> EliminationSequence | None:
    alive = (1 << len(masks)) - 1
    steps = []
    while alive & (alive - 1):
        step = None
        for v in iter_bits(alive):
            a = masks[v] & alive
            if a & (a - 1) == 0:
                step = EliminationStep(StepKind.PENDANT, v, a.bit_length() - 1)
                break
        if step is None:
            step = _next_twin(masks, alive)
            if step is None:
                return None
        steps.append(step)
        alive &= ~(1 << step.removed)
    return EliminationSequence(tuple(steps), tuple(iter_bits(alive)))


def twin_eliminate(g: Graph) -> tuple[Graph, EliminationSequence]:
    """Remove twins (true twins first, smallest id first) until none remain."""
    seq = _twin_sequence(g.masks)
    return g.subgraph(seq.residual), seq


@lru_cache(maxsize=64)
def _twin_sequence(masks: tuple[int, ...]) -> EliminationSequence:
    alive = (1 << len(masks)) - 1
    steps = []
    while True:
        step = _next_twin(masks, alive)
        if step is None:
            break
        steps.append(step)
        alive &= ~(1 << step.removed)
    return EliminationSequence(tuple(steps), tuple(iter_bits(alive)))


def reduce_to_bull_check(g: Graph) -> tuple[EliminationSequence, Embedding] | None:
    """Twin-eliminate and embed the residual into the Bull.

    The embedding is aligned with ``seq.residual``: residual vertex
    ``seq.residual[i]`` maps to Bull vertex ``emb[i]``.
    """
    residual, seq = twin_eliminate(g)
    if residual.n > BULL.n:
        return None
    emb = find_induced_embedding(BULL, residual)
    if emb is None:
        return None
    return seq, emb


def _check_step(masks, alive: int, step: EliminationStep, index: int) -> None:
    r, w = step.removed, step.witness
    if r == w:
        raise ReplayError(index, "removed vertex equals its witness")
    if not (alive >> r) & 1:
        raise ReplayError(index, f"vertex {r} is not present")
    if not (alive >> w) & 1:
        raise ReplayError(index, f"witness {w} is not present")
    nr = masks[r] & alive
    nw = masks[w] & alive
    if step.kind is StepKind.PENDANT:
        ok = nr == 1 << w
    else:
        adjacent = bool((nr >> w) & 1)
        ok = nr & ~(1 << w) == nw & ~(1 << r) and adjacent == (step.kind is StepKind.TRUE_TWIN)
    if not ok:
        raise ReplayError(index, f"{step.kind.value} condition fails for {r} with witness {w}")


def replay(base: Graph, seq: EliminationSequence, reversed: bool = False) -> Graph:
    """Apply ``seq`` to ``base``.

    Forward: ``base`` is the original graph; the steps are removed in order,
    each re-verified, and the residual induced subgraph (relabelled densely in
    increasing order) is returned.

    Reverse: ``base`` is that residual graph; steps are undone from last to
    first (pendants re-attached to their witness, twins duplicated from their
    witness) and the original graph, with its original vertex ids, is returned.
    """
    steps = seq.steps
    if not reversed:
        masks = base.masks
        alive = (1 << base.n) - 1
        for i, step in enumerate(steps):
            _check_step(masks, alive, step, i)
            alive &= ~(1 << step.removed)
        if tuple(iter_bits(alive)) != seq.residual:
            raise ReplayError(len(steps), "residual does not match the vertices left")
        return base.subgraph(seq.residual)

    if base.n != len(seq.residual):
        raise ReplayError(len(steps), "base graph size differs from the residual")
    total = seq.order
    masks = [0] * total
    present = 0
    for v in seq.residual:
        if not 0 <= v < total or (present >> v) & 1:
            raise ReplayError(len(steps), f"bad residual vertex {v}")
        present |= 1 << v
    for i, j in base.edges():
        u, v = seq.residual[i], seq.residual[j]
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    for idx in range(len(steps) - 1, -1, -1):
        step = steps[idx]
        r, w = step.removed, step.witness
        if not 0 <= r < total or (present >> r) & 1:
            raise ReplayError(idx, f"vertex {r} already present")
        if not (present >> w) & 1:
            raise ReplayError(idx, f"witness {w} is not present")
        if step.kind is StepKind.PENDANT:
            new = 1 << w
        elif step.kind is StepKind.TRUE_TWIN:
            new = masks[w] | (1 << w)
        else:
            new = masks[w]
        masks[r] = new
        for u in iter_bits(new):
            masks[u] |= 1 << r
        present |= 1 << r
    return Graph._raw(tuple(masks))
