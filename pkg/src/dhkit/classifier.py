"""Multi-route classification, certificates, and the near-linear recognizer."""

from __future__ import annotations

import gc
import random
from dataclasses import dataclass, field

from . import oracles, patterns
from .graph import Graph, components, is_connected
from .iso import find_induced_embedding, is_induced_embedding
from .modular import class_condition_md, modular_decomposition
from .pruning import EliminationSequence, ReplayError, prune_dh, reduce_to_bull_check, replay
from .splittree import Fail, build_split_tree, class_condition, cograph_condition

ROUTES = ("forbidden", "twin-elim", "modular", "split")


class InvariantViolation(RuntimeError):
    """Two routes that must agree did not; always a bug."""


@dataclass
class ClassReport:
    is_cograph: bool
    is_dh: bool
    is_co_dh: bool
    is_at_free: bool
    in_class: bool
    route_results: dict[str, bool]
    routes_agree: bool

    def to_dict(self) -> dict:
        return {
            "is_cograph": self.is_cograph,
            "is_dh": self.is_dh,
            "is_co_dh": self.is_co_dh,
            "is_at_free": self.is_at_free,
            "in_class": self.in_class,
            "route_results": dict(self.route_results),
            "routes_agree": self.routes_agree,
        }


def split_route(g: Graph) -> bool:
    """Class membership read off split trees.

    A disconnected member must be a cograph, so each component is tested with
    the cograph condition; a connected graph must be DH and satisfy the
    star-pair condition.
    """
    if g.n <= 1:
        return True
    if not is_connected(g):
        for comp in components(g):
            if len(comp) == 1:
                continue
            sub = g.subgraph(comp)
            seq = prune_dh(sub)
            if seq is None or cograph_condition(build_split_tree(sub, seq)) is None:
                return False
        return True
    seq = prune_dh(g)
    if seq is None:
        return False
    return not isinstance(class_condition(build_split_tree(g, seq)), Fail)


def route_forbidden(g: Graph) -> bool:
    return oracles.in_class_by_forbidden(g)


def route_twin_elim(g: Graph) -> bool:
    return reduce_to_bull_check(g) is not None


def route_modular(g: Graph) -> bool:
    return g.n == 0 or class_condition_md(modular_decomposition(g))


ROUTE_FUNCS = {
    "forbidden": route_forbidden,
    "twin-elim": route_twin_elim,
    "modular": route_modular,
    "split": split_route,
}


def classify(g: Graph) -> ClassReport:
    is_dh = oracles.is_dh_by_forbidden(g)
    is_co_dh = oracles.is_dh_by_forbidden(g.complement())
    in_class = is_dh and is_co_dh
    routes = {name: ROUTE_FUNCS[name](g) for name in ROUTES}
    return ClassReport(
        is_cograph=oracles.is_cograph(g),
        is_dh=is_dh,
        is_co_dh=is_co_dh,
        is_at_free=not oracles.has_asteroidal_triple(g),
        in_class=in_class,
        route_results=routes,
        routes_agree=all(r == in_class for r in routes.values()),
    )


# -- certificates ------------------------------------------------------------

@dataclass
class Certificate:
    """Positive: twin eliminations to a residual embedded in the Bull.
    Negative: an induced copy of one of the five obstructions."""

    in_class: bool
    seq: EliminationSequence | None = None
    embedding: tuple[int, ...] = ()
    pattern: str | None = None

    @property
    def kind(self) -> str:
        return "positive" if self.in_class else "negative"

    def to_dict(self) -> dict:
        d: dict = {"verdict": "in" if self.in_class else "out", "kind": self.kind,
                   "embedding": list(self.embedding)}
        if self.in_class:
            d["steps"] = [s.to_dict() for s in self.seq.steps]
            d["residual"] = list(self.seq.residual)
        else:
            d["pattern"] = self.pattern
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Certificate:
        if d["kind"] == "positive":
            seq = EliminationSequence.from_dict(d)
            return cls(True, seq, tuple(d["embedding"]))
        return cls(False, None, tuple(d["embedding"]), d["pattern"])


def certify(g: Graph) -> Certificate:
    fast = fast_recognize(g)
    if fast:
        found = reduce_to_bull_check(g)
        if found is None:
            raise InvariantViolation("fast recognizer accepts but twin elimination does not reach the Bull")
        seq, emb = found
        return Certificate(True, seq, tuple(emb))
    for name in patterns.CLASS_OBSTRUCTIONS:
        emb = find_induced_embedding(g, patterns.CATALOG[name])
        if emb is not None:
            return Certificate(False, None, emb, name)
    raise InvariantViolation("fast recognizer rejects but no obstruction is present")


def verify_certificate(g: Graph, cert: Certificate) -> bool:
    """Re-check a certificate from scratch."""
    if not cert.in_class:
        if cert.pattern not in patterns.CLASS_OBSTRUCTIONS:
            return False
        return is_induced_embedding(g, patterns.CATALOG[cert.pattern], cert.embedding)
    seq = cert.seq
    if seq is None or seq.order != g.n:
        return False
    if any(s.kind.value == "Pendant" for s in seq.steps):
        return False
    try:
        residual = replay(g, seq)
    except ReplayError:
        return False
    return is_induced_embedding(patterns.BULL, residual, cert.embedding)


# -- fast recognition --------------------------------------------------------

def fast_recognize(g: Graph) -> bool:
    """Membership in DH ∩ co-DH by greedy twin elimination.

    Open and closed neighbourhoods are fingerprinted by sums of per-vertex
    random 64-bit keys, which update in O(1) per deleted neighbour; vertices
    are bucketed by fingerprint and each candidate pair is confirmed by an
    exact neighbourhood comparison before removal.  Any maximal sequence of
    twin removals works because the class is hereditary and closed under
    adding twins, so the twin-free residual decides membership.
    """
    if g.n <= 1:
        return True
    # millions of short-lived sets and no cycles: collector passes only add
    # time proportional to the live heap
    enabled = gc.isenabled()
    gc.disable()
    try:
        return _fast_recognize(g)
    finally:
        if enabled:
            gc.enable()


def _fast_recognize(g: Graph) -> bool:
    n = g.n
    rng = random.Random(0x5EED)
    key = [rng.getrandbits(64) for _ in range(n)]
    adj = [set(g.neighbors(v)) for v in range(n)]
    fo = [sum(key[u] for u in adj[v]) for v in range(n)]
    fc = [fo[v] + key[v] for v in range(n)]
    bo: dict[int, set[int]] = {}
    bc: dict[int, set[int]] = {}
    for v in range(n):
        bo.setdefault(fo[v], set()).add(v)
        bc.setdefault(fc[v], set()).add(v)
    pending = [(bc, h) for h, b in bc.items() if len(b) > 1]
    pending += [(bo, h) for h, b in bo.items() if len(b) > 1]
    alive = n
    while pending and alive > 1:
        table, h = pending.pop()
        bucket = table.get(h)
        if not bucket or len(bucket) < 2:
            continue
        pair = _confirmed_pair(adj, bucket)
        if pair is None:
            continue
        x = pair[0]
        for table2, f in ((bo, fo), (bc, fc)):
            b = table2[f[x]]
            b.discard(x)
            if not b:
                del table2[f[x]]
        kx = key[x]
        for w in adj[x]:
            adj[w].discard(x)
            for table2, f in ((bo, fo), (bc, fc)):
                old = f[w]
                b = table2[old]
                b.discard(w)
                if not b:
                    del table2[old]
                new = old - kx
                f[w] = new
                nb = table2.get(new)
                if nb is None:
                    table2[new] = {w}
                else:
                    nb.add(w)
                    pending.append((table2, new))
        adj[x] = None
        alive -= 1
        if len(bucket) > 1:
            pending.append((table, h))
    if alive > patterns.BULL.n:
        return False
    rest = [v for v in range(n) if adj[v] is not None]
    return find_induced_embedding(patterns.BULL, g.subgraph(rest)) is not None


def _confirmed_pair(adj, bucket) -> tuple[int, int] | None:
    it = iter(bucket)
    u = next(it)
    v = next(it)
    if adj[u] - {v} == adj[v] - {u}:
        return u, v
    # fingerprint collision: exhaustive pair check over the bucket
    members = sorted(bucket)
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            if adj[a] - {b} == adj[b] - {a}:
                return a, b
    return None


# -- lemma audit -------------------------------------------------------------

@dataclass
class AuditReport:
    in_class: bool
    connected_dh: bool
    violations: list[str] = field(default_factory=list)
    cutvertices: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def lemma_audit(g: Graph, in_class: bool | None = None, is_dh: bool | None = None) -> AuditReport:
    """Check the structural consequences of class membership on ``g``.

    In-class graphs: every neighbourhood and every non-neighbourhood induces
    a cograph, no component holds three cutvertices, and no asteroidal
    triple exists.  Connected DH graphs on at least three vertices: twin-free
    exactly when prime.
    """
    if in_class is None:
        in_class = oracles.in_class_by_forbidden(g)
    if is_dh is None:
        is_dh = oracles.is_dh_by_forbidden(g)
    connected_dh = is_dh and is_connected(g)
    rep = AuditReport(in_class, connected_dh)
    feats = oracles.local_features(g)
    rep.cutvertices = feats.cutvertices
    if in_class:
        masks = g.masks
        for v in range(g.n):
            nv = [u for u in range(g.n) if (masks[v] >> u) & 1]
            if not oracles.is_cograph(g.subgraph(nv)):
                rep.violations.append(f"subcographs: G[N({v})] contains an induced P4")
            far = [u for u in range(g.n) if not ((masks[v] | (1 << v)) >> u) & 1]
            if not oracles.is_cograph(g.subgraph(far)):
                rep.violations.append(f"subcographs: G - N[{v}] contains an induced P4")
        cut = set(feats.cutvertices)
        for comp in components(g):
            inside = [v for v in comp if v in cut]
            if len(inside) > 2:
                rep.violations.append(f"cutvertices: component {comp} has cutvertices {inside}")
        at = oracles.find_asteroidal_triple(g)
        if at is not None:
            rep.violations.append(f"AT-free: asteroidal triple {at}")
    if connected_dh and g.n >= 3:
        twin_free = not feats.truetwins and not feats.falsetwins
        prime = oracles.is_prime(g)
        if twin_free != prime:
            rep.violations.append(f"twin-free: twin-free={twin_free} but prime={prime}")
    return rep
