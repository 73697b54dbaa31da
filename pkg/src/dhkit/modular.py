"""Rooted modular decomposition with series / parallel / prime nodes."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .graph import Graph, component_masks, iter_bits, parse_graph6, to_graph6
from .iso import canonical_form
from .oracles import is_prime, strong_module_masks
from .patterns import BULL, P4
from .splittree import ValidationReport

LEAF, SERIES, PARALLEL, PRIME = "leaf", "series", "parallel", "prime"


class ModuleViolation(ValueError):
    def __init__(self, part: Iterable[int], vertex: int):
        super().__init__(f"part {sorted(part)} is not a module: vertex {vertex} splits it")
        self.vertex = vertex


@dataclass(frozen=True)
class MDNode:
    kind: str
    vertices: frozenset[int]
    children: tuple[MDNode, ...] = ()
    quotient: Graph | None = None

    @property
    def vertex(self) -> int:
        (v,) = self.vertices
        return v

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass(frozen=True)
class ModularTree:
    n: int
    root: MDNode

    def nodes(self):
        return self.root.walk()

    def internal_nodes(self):
        return (x for x in self.root.walk() if x.kind != LEAF)


def _mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def quotient(g: Graph, parts: Sequence[Iterable[int]]) -> Graph:
    """Quotient graph: one vertex per part, adjacent when the parts are."""
    masks = g.masks
    pm = [_mask(p) for p in parts]
    cover = 0
    for m in pm:
        if not m or cover & m:
            raise ValueError("parts must be non-empty and pairwise disjoint")
        cover |= m
    if cover != (1 << g.n) - 1:
        raise ValueError("parts must cover every vertex")
    for m in pm:
        for z in iter_bits(cover & ~m):
            x = masks[z] & m
            if x and x != m:
                raise ModuleViolation(iter_bits(m), z)
    reps = [(m & -m).bit_length() - 1 for m in pm]
    k = len(pm)
    edges = [(i, j) for j in range(k) for i in range(j) if pm[j] & masks[reps[i]]]
    return Graph(k, edges)


def _closure(masks, m: int, within: int) -> int:
    """Smallest module of ``g[within]`` containing ``m``."""
    while True:
        grow = 0
        for z in iter_bits(within & ~m):
            x = masks[z] & m
            if x and x != m:
                grow |= 1 << z
        if not grow:
            return m
        m |= grow


def _maximal_modules(masks, within: int) -> list[int]:
    """Maximal proper modules of a connected, co-connected ``g[within]``.

    Two vertices share a maximal proper module exactly when the smallest
    module containing both is proper.
    """
    parts = []
    rest = within
    while rest:
        u = rest & -rest
        group = u
        for w in iter_bits(rest & ~u):
            if (group >> w) & 1:
                continue
            m = _closure(masks, u | (1 << w), within)
            if m != within:
                group |= m
        parts.append(group)
        rest &= ~group
    return parts


def _build(masks, n: int, within: int) -> MDNode:
    verts = frozenset(iter_bits(within))
    if within & (within - 1) == 0:
        return MDNode(LEAF, verts)
    parts = component_masks(masks, within)
    if len(parts) > 1:
        kind = PARALLEL
    else:
        comasks = [0] * n
        for v in iter_bits(within):
            comasks[v] = within & ~masks[v] & ~(1 << v)
        parts = component_masks(comasks, within)
        if len(parts) > 1:
            kind = SERIES
        else:
            kind = PRIME
            parts = _maximal_modules(masks, within)
    parts.sort(key=lambda m: m & -m)
    children = tuple(_build(masks, n, m) for m in parts)
    reps = [(m & -m).bit_length() - 1 for m in parts]
    k = len(parts)
    q = Graph(k, [(i, j) for j in range(k) for i in range(j) if parts[j] & masks[reps[i]]])
    return MDNode(kind, verts, children, q)


def modular_decomposition(g: Graph) -> ModularTree:
    if g.n < 1:
        raise ValueError("modular decomposition needs at least one vertex")
    return _decompose(g.masks)


@lru_cache(maxsize=64)
def _decompose(masks: tuple[int, ...]) -> ModularTree:
    n = len(masks)
    return ModularTree(n, _build(masks, n, (1 << n) - 1))


_ROOT_PRIME_OK = {canonical_form(P4), canonical_form(BULL)}


def class_condition_md(t: ModularTree) -> bool:
    """Root degenerate or a prime P4/Bull; every other internal node degenerate.

    A degenerate root (e.g. the clique quotient of K5) is always accepted:
    the only prime induced subgraphs of the Bull are P4 and the Bull itself.
    """
    root = t.root
    if root.kind == PRIME and canonical_form(root.quotient) not in _ROOT_PRIME_OK:
        return False
    return all(c.kind != PRIME for child in root.children for c in child.walk())


def reconstruct(t: ModularTree) -> Graph:
    masks = [0] * t.n
    for node in t.internal_nodes():
        kids = [_mask(c.vertices) for c in node.children]
        q = node.quotient
        for i, j in q.edges():
            for u in iter_bits(kids[i]):
                masks[u] |= kids[j]
            for u in iter_bits(kids[j]):
                masks[u] |= kids[i]
    return Graph._raw(tuple(masks))


def validate_md(t: ModularTree, g: Graph, oracle_limit: int = 14) -> ValidationReport:
    rep = ValidationReport()
    if t.n != g.n:
        rep.failures.append(f"tree covers {t.n} vertices, graph has {g.n}")
        return rep
    if t.root.vertices != frozenset(range(g.n)):
        rep.failures.append("root does not span every vertex")
    for node in t.internal_nodes():
        label = sorted(node.vertices)
        if len(node.children) < 2:
            rep.failures.append(f"node {label} has fewer than two children")
        union = frozenset().union(*(c.vertices for c in node.children))
        if union != node.vertices or sum(len(c.vertices) for c in node.children) != len(union):
            rep.failures.append(f"children of {label} do not partition it")
            continue
        sub, relabel = g.subgraph(node.vertices), sorted(node.vertices)
        pos = {v: i for i, v in enumerate(relabel)}
        try:
            q = quotient(sub, [[pos[v] for v in c.vertices] for c in node.children])
        except ModuleViolation as exc:
            rep.failures.append(f"child of {label} is not a module: {exc}")
            continue
        if q != node.quotient:
            rep.failures.append(f"stored quotient of {label} is wrong")
        k = q.n
        if node.kind == SERIES and q.m != k * (k - 1) // 2:
            rep.failures.append(f"series node {label} quotient is not a clique")
        elif node.kind == PARALLEL and q.m != 0:
            rep.failures.append(f"parallel node {label} quotient is not edgeless")
        elif node.kind == PRIME and k <= oracle_limit and not is_prime(q):
            rep.failures.append(f"prime node {label} quotient is not prime")
        for c in node.children:
            if c.kind == node.kind and c.kind in (SERIES, PARALLEL):
                rep.failures.append(f"{c.kind} node {sorted(c.vertices)} under a {node.kind} node")
    if reconstruct(t) != g:
        rep.failures.append("reconstruction from the tree differs from the graph")
    if g.n > oracle_limit:
        rep.skipped.append(f"strong-module cross-check skipped for n={g.n} > {oracle_limit}")
        return rep
    tree_sets = {_mask(x.vertices) for x in t.nodes()}
    oracle = set(strong_module_masks(g))
    for m in sorted(tree_sets - oracle):
        rep.failures.append(f"subtree {sorted(iter_bits(m))} is not a strong module")
    for m in sorted(oracle - tree_sets):
        rep.failures.append(f"strong module {sorted(iter_bits(m))} has no subtree")
    return rep


# -- serialisation -----------------------------------------------------------

def _node_dict(node: MDNode) -> dict:
    if node.kind == LEAF:
        return {"kind": LEAF, "vertex": node.vertex}
    d = {"kind": node.kind, "vertices": sorted(node.vertices),
         "children": [_node_dict(c) for c in node.children]}
    if node.kind == PRIME:
        d["quotient"] = to_graph6(node.quotient)
    return d


def md_to_dict(t: ModularTree) -> dict:
    return {"n": t.n, "root": _node_dict(t.root)}


def _node_from(d: dict) -> MDNode:
    if d["kind"] == LEAF:
        return MDNode(LEAF, frozenset([d["vertex"]]))
    children = tuple(_node_from(c) for c in d["children"])
    k = len(children)
    if d["kind"] == PRIME:
        q = parse_graph6(d["quotient"])
    elif d["kind"] == SERIES:
        q = Graph(k, [(i, j) for j in range(k) for i in range(j)])
    else:
        q = Graph(k)
    return MDNode(d["kind"], frozenset(d["vertices"]), children, q)


def md_from_dict(data: dict) -> ModularTree:
    return ModularTree(int(data["n"]), _node_from(data["root"]))


def serialize_md(t: ModularTree, format: str = "json") -> str:
    if format == "json":
        return json.dumps(md_to_dict(t), sort_keys=True, separators=(",", ":"))
    if format == "dot":
        return _md_dot(t)
    raise ValueError(f"unknown format {format!r}")


def _md_dot(t: ModularTree) -> str:
    lines = ["digraph modular_tree {"]
    counter = [t.n]

    def emit(node: MDNode) -> str:
        if node.kind == LEAF:
            return str(node.vertex)
        name = str(counter[0])
        counter[0] += 1
        label = {SERIES: "S", PARALLEL: "P", PRIME: "Prime"}[node.kind]
        lines.append(f'  {name} [shape=ellipse, label="{label}"];')
        for c in node.children:
            lines.append(f"  {name} -> {emit(c)};")
        return name

    for v in range(t.n):
        lines.append(f'  {v} [shape=box, label="{v}"];')
    emit(t.root)
    lines.append("}")
    return "\n".join(lines) + "\n"
