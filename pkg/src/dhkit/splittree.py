"""Canonical split decomposition of connected distance-hereditary graphs.

The tree is grown by undoing a pendant/twin pruning sequence: start from the
last surviving vertex and re-insert removed vertices one at a time.  All
labels are cliques or stars, so a label is fully described by its kind and,
for a star, by which incident tree edge carries the centre.

Node ids: leaves are ``0..n-1`` and coincide with graph vertex ids; internal
nodes are numbered ``n, n+1, ...`` in a construction-independent order.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .graph import Graph
from .oracles import strong_split_masks
from .pruning import EliminationSequence, StepKind, prune_dh

LEAF, CLIQUE, STAR = "leaf", "clique", "star"


class SplitTreeError(ValueError):
    pass


@dataclass
class ValidationReport:
    failures: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok


class SplitTree:
    """Frozen split tree with star/clique labels."""

    __slots__ = ("n", "kind", "nbrs", "center", "_parent", "_depth")

    def __init__(self, n: int, kind, nbrs, center: dict[int, int]):
        self.n = n
        self.kind: tuple[str, ...] = tuple(kind)
        self.nbrs: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(x)) for x in nbrs)
        self.center = dict(center)
        self._parent = None
        self._depth = None

    @property
    def size(self) -> int:
        return len(self.kind)

    def internal_nodes(self) -> range:
        return range(self.n, len(self.kind))

    def stars(self) -> list[int]:
        return [t for t in self.internal_nodes() if self.kind[t] == STAR]

    def edges(self) -> list[tuple[int, int]]:
        return sorted((a, b) for a in range(self.size) for b in self.nbrs[a] if a < b)

    def internal_edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a, b in self.edges() if a >= self.n and b >= self.n]

    def is_interface(self, t: int, slot: int) -> bool:
        """Whether the label vertex of ``t`` for edge ``t-slot`` is an interface vertex."""
        return slot >= self.n

    def _rooted(self):
        if self._parent is None:
            parent = [-1] * self.size
            depth = [0] * self.size
            if self.size:
                seen = [False] * self.size
                seen[0] = True
                queue = deque([0])
                while queue:
                    a = queue.popleft()
                    for b in self.nbrs[a]:
                        if not seen[b]:
                            seen[b] = True
                            parent[b] = a
                            depth[b] = depth[a] + 1
                            queue.append(b)
            self._parent, self._depth = parent, depth
        return self._parent, self._depth

    def path(self, a: int, b: int) -> list[int]:
        """Node sequence of the tree path from ``a`` to ``b``."""
        parent, depth = self._rooted()
        left, right = [a], [b]
        while depth[a] > depth[b]:
            a = parent[a]
            left.append(a)
        while depth[b] > depth[a]:
            b = parent[b]
            right.append(b)
        while a != b:
            a, b = parent[a], parent[b]
            left.append(a)
            right.append(b)
        right.pop()
        return left + right[::-1]

    def first_hops(self, targets) -> list[int]:
        """For every node outside ``targets`` (a connected node set), the next
        node on its path toward ``targets``; ``-1`` for the targets themselves."""
        hop = [-2] * self.size
        queue = deque()
        for t in targets:
            hop[t] = -1
            queue.append(t)
        while queue:
            a = queue.popleft()
            for b in self.nbrs[a]:
                if hop[b] == -2:
                    hop[b] = a
                    queue.append(b)
        return hop

    def leaf_side(self, a: int, b: int) -> frozenset[int]:
        """Leaves in the component of ``T - ab`` that contains ``b``."""
        out = []
        stack = [(b, a)]
        while stack:
            x, frm = stack.pop()
            if x < self.n:
                out.append(x)
            stack.extend((y, x) for y in self.nbrs[x] if y != frm)
        return frozenset(out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SplitTree):
            return NotImplemented
        return (self.n, self.kind, self.nbrs, self.center) == (
            other.n, other.kind, other.nbrs, other.center)

    def __repr__(self) -> str:
        labels = "".join("K" if k == CLIQUE else "S" for k in self.kind[self.n:])
        return f"SplitTree(n={self.n}, nodes={labels or '-'})"


# -- construction ------------------------------------------------------------

class _Builder:
    """Mutable tree; leaves keyed by vertex id, internal nodes by negative ids."""

    def __init__(self, root: int):
        self.nbrs: dict[int, list[int]] = {root: []}
        self.kind: dict[int, str] = {root: LEAF}
        self.center: dict[int, int] = {}
        self._next = -1

    def _new(self, kind: str, nbrs: list[int]) -> int:
        t = self._next
        self._next -= 1
        self.kind[t] = kind
        self.nbrs[t] = nbrs
        return t

    def _replace(self, node: int, old: int, new: int) -> None:
        lst = self.nbrs[node]
        lst[lst.index(old)] = new
        if self.center.get(node) == old:
            self.center[node] = new

    def insert(self, x: int, y: int, kind: StepKind) -> None:
        """Add leaf ``x`` as a pendant or twin of the existing leaf ``y``.

        The leaf edge of ``y`` (to node ``t``) is replaced by a fresh node
        ``s`` with slots toward ``t``, ``y`` and ``x``:

        ========== ========================================
        step       label of ``s``
        ========== ========================================
        TrueTwin   clique
        FalseTwin  star, centre on the ``t`` slot
        Pendant    star, centre on the ``y`` slot
        ========== ========================================

        ``s`` is then merged into ``t`` when the edge ``st`` violates a
        canonical reduction: clique next to clique, or a star centre next
        to an extremity of another star.  Only this one edge can be new, so
        a single merge test keeps the tree reduced.
        """
        nb = self.nbrs
        self.kind[x] = LEAF
        if not nb[y]:
            if kind is StepKind.FALSE_TWIN:
                raise SplitTreeError("a false twin of the only vertex disconnects the graph")
            t = self._new(CLIQUE, [y, x])
            nb[y] = [t]
            nb[x] = [t]
            return
        t = nb[y][0]
        if kind is StepKind.TRUE_TWIN:
            s = self._new(CLIQUE, [t, y, x])
        else:
            s = self._new(STAR, [t, y, x])
            self.center[s] = t if kind is StepKind.FALSE_TWIN else y
        self._replace(t, y, s)
        nb[y] = [s]
        nb[x] = [s]
        if len(nb[t]) == 2:
            # t is the two-vertex node: it is only an edge, so drop it
            z = nb[t][0] if nb[t][1] == s else nb[t][1]
            self._replace(s, t, z)
            self._replace(z, t, s)
            del nb[t], self.kind[t]
            self.center.pop(t, None)
            return
        self._merge(s, t)

    def _merge(self, s: int, t: int) -> None:
        ks, kt = self.kind[s], self.kind[t]
        new_center = None
        if ks == kt == CLIQUE:
            pass
        elif ks == kt == STAR:
            cs, ct = self.center[s], self.center[t]
            if cs == t and ct != s:
                new_center = ct
            elif ct == s and cs != t:
                new_center = cs
            else:
                return
        else:
            return
        others = [u for u in self.nbrs[s] if u != t]
        lst = self.nbrs[t]
        lst.remove(s)
        lst.extend(others)
        for u in others:
            self._replace(u, s, t)
        del self.nbrs[s], self.kind[s]
        self.center.pop(s, None)
        if new_center is not None:
            self.center[t] = new_center

    def freeze(self, n: int) -> SplitTree:
        nb = self.nbrs
        internal = [t for t in nb if t < 0]
        # order internal nodes by the sorted minimum leaves of their branches
        # below leaf 0; this depends only on the tree, not on insertion order
        submin: dict[int, int] = {}
        parent = {0: None}
        order = [0]
        for a in order:
            for b in nb[a]:
                if b not in parent:
                    parent[b] = a
                    order.append(b)
        for a in reversed(order):
            mins = [submin[b] for b in nb[a] if b != parent[a]]
            submin[a] = a if a >= 0 else min(mins)
        key = {
            t: tuple(sorted(submin[b] for b in nb[t] if b != parent[t]))
            for t in internal
        }
        internal.sort(key=key.__getitem__)
        ids = {v: v for v in range(n)}
        for i, t in enumerate(internal):
            ids[t] = n + i
        size = n + len(internal)
        kind = [LEAF] * size
        nbrs: list[list[int]] = [[] for _ in range(size)]
        for a, lst in nb.items():
            kind[ids[a]] = self.kind[a]
            nbrs[ids[a]] = [ids[b] for b in lst]
        center = {ids[t]: ids[c] for t, c in self.center.items()}
        return SplitTree(n, kind, nbrs, center)


def build_split_tree(g: Graph, seq: EliminationSequence | None = None) -> SplitTree:
    """Canonical split tree of a connected distance-hereditary graph."""
    if g.n == 0:
        raise SplitTreeError("empty graph has no split tree")
    if seq is None:
        seq = prune_dh(g)
        if seq is None:
            raise SplitTreeError("graph is not distance-hereditary: pruning stalls")
    if len(seq.residual) != 1 or seq.order != g.n:
        raise SplitTreeError("sequence does not prune the graph to one vertex")
    b = _Builder(seq.residual[0])
    for step in reversed(seq.steps):
        b.insert(step.removed, step.witness, step.kind)
    return b.freeze(g.n)


# -- adjacency ---------------------------------------------------------------

def _passes(t: SplitTree, node: int, a: int, b: int) -> bool:
    """Whether label vertices of ``node`` for edges toward ``a`` and ``b`` are adjacent."""
    if t.kind[node] == CLIQUE:
        return True
    c = t.center[node]
    return c == a or c == b


def realize_adjacent(t: SplitTree, u: int, v: int) -> bool:
    """Adjacency of leaves ``u`` and ``v`` read off the tree path between them."""
    p = t.path(u, v)
    return all(_passes(t, p[i], p[i - 1], p[i + 1]) for i in range(1, len(p) - 1))


def realized_graph(t: SplitTree) -> Graph:
    """The whole graph encoded by ``t`` (one tree walk per leaf)."""
    edges = []
    for u in range(t.n):
        if not t.nbrs[u]:
            continue
        stack = [(t.nbrs[u][0], u)]
        while stack:
            node, frm = stack.pop()
            if node < t.n:
                if u < node:
                    edges.append((u, node))
                continue
            for nxt in t.nbrs[node]:
                if nxt != frm and _passes(t, node, frm, nxt):
                    stack.append((nxt, node))
    return Graph(t.n, edges)


# -- validation --------------------------------------------------------------

def check_invariants(t: SplitTree) -> list[str]:
    out = []
    if t.n == 1 and t.size == 1:
        return out
    if t.size and len(t.edges()) != t.size - 1:
        out.append("not a tree: edge count differs from node count - 1")
    for v in range(t.n):
        if t.kind[v] != LEAF or len(t.nbrs[v]) != 1:
            out.append(f"leaf {v} must have exactly one neighbour")
    for x in t.internal_nodes():
        k = t.kind[x]
        if k not in (CLIQUE, STAR):
            out.append(f"node {x} has label {k!r}, not a star or clique")
            continue
        if len(t.nbrs[x]) < 3 and not (t.n == 2 and t.size == 3):
            out.append(f"node {x} has degree {len(t.nbrs[x])} < 3")
        if k == STAR and t.center.get(x) not in t.nbrs[x]:
            out.append(f"star {x} has no centre among its tree neighbours")
    for a, b in t.internal_edges():
        ka, kb = t.kind[a], t.kind[b]
        if ka == kb == CLIQUE:
            out.append(f"reduction (a): clique nodes {a} and {b} are adjacent")
        if ka == kb == STAR and (t.center[a] == b) != (t.center[b] == a):
            out.append(f"reduction (b): edge {a}-{b} joins a star centre to a star extremity")
    return out


def validate_split_tree(t: SplitTree, g: Graph, strong_limit: int = 10) -> ValidationReport:
    """Cross-check ``t`` against ``g``: adjacency, strong splits, invariants."""
    rep = ValidationReport()
    if t.n != g.n:
        rep.failures.append(f"tree has {t.n} leaves, graph has {g.n} vertices")
        return rep
    rep.failures.extend(check_invariants(t))
    for u, v in combinations(range(g.n), 2):
        if realize_adjacent(t, u, v) != g.has_edge(u, v):
            rep.failures.append(f"adjacency of {u},{v} not reproduced")
    if g.n > strong_limit:
        rep.skipped.append(f"strong-split cross-check skipped for n={g.n} > {strong_limit}")
        return rep
    full = (1 << g.n) - 1
    tree_splits = {}
    for a, b in t.internal_edges():
        side = sum(1 << v for v in t.leaf_side(a, b))
        tree_splits[frozenset((side, full & ~side))] = (a, b)
    oracle = strong_split_masks(g) if g.n >= 4 else set()
    for key, (a, b) in sorted(tree_splits.items(), key=lambda kv: kv[1]):
        if key not in oracle:
            rep.failures.append(f"tree edge {a}-{b} is not a strong split")
    missing = oracle - set(tree_splits)
    for key in sorted(missing, key=lambda k: sorted(k)):
        rep.failures.append(f"strong split {sorted(key)} has no tree edge")
    return rep


# -- structural conditions ---------------------------------------------------

def _points_to_edge(t: SplitTree, s: int, a: int, b: int, hop: list[int]) -> bool:
    if s == a:
        return t.center[s] == b
    if s == b:
        return t.center[s] == a
    return t.center[s] == hop[s]


def cograph_condition(t: SplitTree) -> tuple[int, int] | None:
    """Least tree edge toward which every star points, or ``None``.

    A lone leaf (one-vertex graph) has no edges; the condition holds
    vacuously and ``(0, 0)`` is returned as a degenerate witness.
    """
    if t.size == 1:
        return (0, 0)
    stars = t.stars()
    for a, b in t.edges():
        hop = t.first_hops((a, b))
        if all(_points_to_edge(t, s, a, b, hop) for s in stars):
            return (a, b)
    return None


def atfree_condition(t: SplitTree) -> list[int] | None:
    """A tree path such that every star off the path points toward it.

    Extending a path never hurts, so only leaf-to-leaf paths are tried.
    """
    if t.size == 1:
        return [0]
    stars = t.stars()
    for u, v in combinations(range(t.n), 2):
        p = t.path(u, v)
        on = set(p)
        hop = t.first_hops(p)
        if all(t.center[s] == hop[s] for s in stars if s not in on):
            return p
    return None


@dataclass(frozen=True)
class CographEdge:
    edge: tuple[int, int]


@dataclass(frozen=True)
class StarPair:
    s: int
    s2: int
    clique: int | None = None


@dataclass(frozen=True)
class Fail:
    reason: str


ConditionWitness = CographEdge | StarPair | Fail


def class_condition(t: SplitTree) -> ConditionWitness:
    """Split-tree test for DH ∩ co-DH on a connected DH graph's tree.

    Holds via a cograph edge, or via two stars ``s, s2`` not pointing toward
    each other that are adjacent or separated by exactly one clique node,
    with every other star pointing toward that short path.
    """
    e = cograph_condition(t)
    if e is not None:
        return CographEdge(e)
    stars = t.stars()
    offender = None
    for s, s2 in combinations(stars, 2):
        p = t.path(s, s2)
        if len(p) == 2:
            mid = None
        elif len(p) == 3 and t.kind[p[1]] == CLIQUE:
            mid = p[1]
        else:
            continue
        if t.center[s] == p[1] or t.center[s2] == p[-2]:
            continue
        hop = t.first_hops(p)
        bad = [r for r in stars if r not in p and t.center[r] != hop[r]]
        if not bad:
            return StarPair(s, s2, mid)
        if offender is None:
            offender = (bad[0], s, s2)
    if offender is None:
        return Fail("no two stars, adjacent or joined through one clique, avoid pointing at each other")
    r, s, s2 = offender
    return Fail(f"star {r} does not point toward the pair ({s}, {s2})")


def is_cutvertex_leaf(t: SplitTree, v: int) -> bool:
    """Leaf ``v`` hangs off a star whose centre is ``v``'s own edge."""
    if not t.nbrs[v]:
        return False
    x = t.nbrs[v][0]
    return t.kind[x] == STAR and t.center[x] == v


# -- serialisation -----------------------------------------------------------

def tree_to_dict(t: SplitTree) -> dict:
    nodes = []
    for x in range(t.size):
        if t.kind[x] == LEAF:
            nodes.append({"id": x, "kind": LEAF, "vertex": x, "neighbors": list(t.nbrs[x])})
        else:
            d = {"id": x, "kind": t.kind[x], "slots": list(t.nbrs[x])}
            if t.kind[x] == STAR:
                d["center"] = t.center[x]
            nodes.append(d)
    return {"n": t.n, "nodes": nodes}


def tree_from_dict(data: dict) -> SplitTree:
    n = int(data["n"])
    nodes = sorted(data["nodes"], key=lambda d: d["id"])
    kind, nbrs, center = [], [], {}
    for i, d in enumerate(nodes):
        if d["id"] != i:
            raise SplitTreeError(f"node ids must be dense; missing {i}")
        kind.append(d["kind"])
        if d["kind"] == LEAF:
            if d["vertex"] != i:
                raise SplitTreeError(f"leaf {i} maps to vertex {d['vertex']}")
            nbrs.append(d["neighbors"])
        else:
            nbrs.append(d["slots"])
            if d["kind"] == STAR:
                center[i] = d["center"]
    return SplitTree(n, kind, nbrs, center)


def serialize_tree(t: SplitTree, format: str = "json") -> str:
    if format == "json":
        return json.dumps(tree_to_dict(t), sort_keys=True, separators=(",", ":"))
    if format == "dot":
        return _tree_dot(t)
    raise ValueError(f"unknown format {format!r}")


def parse_tree(text: str) -> SplitTree:
    return tree_from_dict(json.loads(text))


def _tree_dot(t: SplitTree) -> str:
    lines = ["graph split_tree {"]
    for x in range(t.size):
        if t.kind[x] == LEAF:
            lines.append(f'  {x} [shape=box, label="{x}"];')
        else:
            lab = "K" if t.kind[x] == CLIQUE else "S"
            lines.append(f'  {x} [shape=circle, label="{lab}"];')
    for a, b in t.edges():
        fwd = t.kind[a] == STAR and t.center[a] == b
        back = t.kind[b] == STAR and t.center[b] == a
        attr = ""
        if fwd and back:
            attr = " [dir=both]"
        elif fwd:
            attr = " [dir=forward]"
        elif back:
            attr = " [dir=back]"
        lines.append(f"  {a} -- {b}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
