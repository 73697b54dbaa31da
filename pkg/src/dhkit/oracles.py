"""Definition-level ground truth.

Every function here follows the textbook definition as literally as is
practical: subset scans, pairwise overlap tests, pattern searches.  They are
deliberately naive and carry hard size limits instead of silently truncating.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .graph import Graph, component_masks, is_connected, iter_bits
from .iso import find_induced_embedding
from . import patterns

__all__ = [
    "SizeLimitError",
    "SplitBipartition",
    "ModuleSet",
    "LocalFeatures",
    "is_dh_by_distances",
    "find_hole",
    "is_dh_by_forbidden",
    "dh_obstruction",
    "in_class_by_forbidden",
    "class_obstruction",
    "is_cograph",
    "all_splits",
    "all_modules",
    "is_module",
    "is_prime",
    "has_asteroidal_triple",
    "find_asteroidal_triple",
    "local_features",
    "cutvertices",
]


class SizeLimitError(ValueError):
    """Input larger than an oracle's subset-scan limit."""


@dataclass(frozen=True)
class SplitBipartition:
    a: frozenset[int]
    b: frozenset[int]
    strong: bool


@dataclass(frozen=True)
class ModuleSet:
    m: frozenset[int]
    strong: bool


@dataclass(frozen=True)
class LocalFeatures:
    truetwins: list[tuple[int, int]]
    falsetwins: list[tuple[int, int]]
    pendants: list[int]
    cutvertices: list[int]


def _check_size(g: Graph, limit: int, what: str) -> None:
    if g.n > limit:
        raise SizeLimitError(f"{what} scans subsets and is limited to n <= {limit} (got {g.n})")


def _mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


# -- distance-hereditary -----------------------------------------------------

def _bfs_layers(masks, src: int, within: int) -> list[int]:
    layers = [1 << src]
    seen = 1 << src
    frontier = layers[0]
    while True:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= masks[v]
        nxt &= within & ~seen
        if not nxt:
            return layers
        layers.append(nxt)
        seen |= nxt
        frontier = nxt


def is_dh_by_distances(g: Graph) -> bool:
    """Every connected induced subgraph keeps the distances of ``g``."""
    _check_size(g, 10, "is_dh_by_distances")
    n = g.n
    masks = g.masks
    full = (1 << n) - 1
    glayers = [_bfs_layers(masks, u, full) for u in range(n)]
    for s in range(1, full):
        if s & (s - 1) == 0 or s.bit_count() < 3:
            continue
        low = (s & -s).bit_length() - 1
        first = _bfs_layers(masks, low, s)
        reach = 0
        for layer in first:
            reach |= layer
        if reach != s:
            continue
        for u in iter_bits(s):
            layers = first if u == low else _bfs_layers(masks, u, s)
            ref = glayers[u]
            if len(layers) > len(ref):
                return False
            for i, layer in enumerate(layers):
                if layer != ref[i] & s:
                    return False
    return True


def find_hole(g: Graph, min_len: int = 5) -> list[int] | None:
    """An induced cycle of length ``>= min_len``, as a vertex list, or ``None``.

    Grows induced paths from their smallest vertex; a path closes into an
    induced cycle when the new vertex also sees the start.
    """
    masks = g.masks
    n = g.n
    for s in range(n):
        allowed = ((1 << n) - 1) & ~((1 << (s + 1)) - 1)
        stack = [[s, x] for x in iter_bits(masks[s] & allowed)]
        while stack:
            p = stack.pop()
            onpath = inner = 0
            for v in p:
                onpath |= 1 << v
            for v in p[1:-1]:
                inner |= masks[v]
            for x in iter_bits(masks[p[-1]] & allowed & ~onpath & ~inner):
                if (masks[s] >> x) & 1:
                    if len(p) + 1 >= min_len and len(p) >= 2:
                        return p + [x]
                    continue
                stack.append(p + [x])
    return None


def dh_obstruction(g: Graph) -> tuple[str, tuple[int, ...]] | None:
    """First induced hole, House, Domino or Gem found, with its vertices."""
    h = find_hole(g)
    if h is not None:
        return f"C{len(h)}", tuple(h)
    for name in patterns.DH_OBSTRUCTIONS:
        emb = find_induced_embedding(g, patterns.CATALOG[name])
        if emb is not None:
            return name, emb
    return None


def is_dh_by_forbidden(g: Graph) -> bool:
    return dh_obstruction(g) is None


def class_obstruction(g: Graph) -> tuple[str, tuple[int, ...]] | None:
    """First of C5, House, P5, Gem, CoGem found as an induced subgraph."""
    for name in patterns.CLASS_OBSTRUCTIONS:
        emb = find_induced_embedding(g, patterns.CATALOG[name])
        if emb is not None:
            return name, emb
    return None


def in_class_by_forbidden(g: Graph) -> bool:
    """Membership in DH ∩ co-DH via its five 5-vertex obstructions."""
    return class_obstruction(g) is None


def is_cograph(g: Graph) -> bool:
    return find_induced_embedding(g, patterns.P4) is None


# -- splits and modules ------------------------------------------------------

def _overlap_split(a1: int, b1: int, a2: int, b2: int) -> bool:
    return bool(a1 & a2 and a1 & b2 and b1 & a2 and b1 & b2)


def split_masks(g: Graph) -> list[tuple[int, int]]:
    """All splits as ``(A, B)`` bitmask pairs, ``A`` holding vertex 0."""
    return list(_split_masks(g.masks))


@lru_cache(maxsize=256)
def _split_masks(masks: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    n = len(masks)
    full = (1 << n) - 1
    out = []
    # A always contains vertex 0, so each bipartition is visited once
    for rest in range(1 << (n - 1)):
        a = (rest << 1) | 1
        size = a.bit_count()
        if size < 2 or n - size < 2:
            continue
        b = full & ~a
        border_b = 0
        for v in iter_bits(a):
            border_b |= masks[v]
        border_b &= b
        ok = True
        for v in iter_bits(a):
            x = masks[v] & b
            if x and x != border_b:
                ok = False
                break
        if ok:
            out.append((a, b))
    return tuple(out)


def all_splits(g: Graph) -> list[SplitBipartition]:
    """Every split of a connected graph, each flagged strong or not.

    Sides are normalised smaller-first (the side holding vertex 0 on ties)
    and the list is sorted by that first side.
    """
    _check_size(g, 14, "all_splits")
    if not is_connected(g):
        raise ValueError("all_splits requires a connected graph")
    found = split_masks(g)
    out = []
    for a, b in found:
        strong = not any(_overlap_split(a, b, a2, b2) for a2, b2 in found)
        first, second = (a, b) if a.bit_count() <= b.bit_count() else (b, a)
        out.append(SplitBipartition(_mask_to_set(first), _mask_to_set(second), strong))
    out.sort(key=lambda s: sorted(s.a))
    return out


def strong_split_masks(g: Graph) -> set[frozenset[int]]:
    """Strong splits as unordered pairs of side bitmasks (for set comparison)."""
    found = split_masks(g)
    return {
        frozenset((a, b))
        for a, b in found
        if not any(_overlap_split(a, b, a2, b2) for a2, b2 in found)
    }


def is_module(g: Graph, m: int) -> bool:
    """``m`` (a bitmask) is a module: every outside vertex sees all of it or none."""
    masks = g.masks
    outside = ((1 << g.n) - 1) & ~m
    for v in iter_bits(outside):
        x = masks[v] & m
        if x and x != m:
            return False
    return True


def module_masks(g: Graph) -> list[int]:
    return list(_module_masks(g.masks))


@lru_cache(maxsize=256)
def _module_masks(masks: tuple[int, ...]) -> tuple[int, ...]:
    n = len(masks)
    full = (1 << n) - 1
    out = []
    for m in range(1, full + 1):
        ok = True
        for v in iter_bits(full & ~m):
            x = masks[v] & m
            if x and x != m:
                ok = False
                break
        if ok:
            out.append(m)
    return tuple(out)


def _overlap_module(m1: int, m2: int) -> bool:
    return bool(m1 & m2 and m1 & ~m2 and m2 & ~m1)


def strong_module_masks(g: Graph) -> list[int]:
    return list(_strong_module_masks(g.masks))


@lru_cache(maxsize=256)
def _strong_module_masks(masks: tuple[int, ...]) -> tuple[int, ...]:
    found = _module_masks(masks)
    return tuple(m for m in found if not any(_overlap_module(m, m2) for m2 in found))


def all_modules(g: Graph) -> list[ModuleSet]:
    """Every non-empty module (trivial ones included) with its strong flag."""
    _check_size(g, 14, "all_modules")
    found = module_masks(g)
    out = [
        ModuleSet(_mask_to_set(m), not any(_overlap_module(m, m2) for m2 in found))
        for m in found
    ]
    out.sort(key=lambda s: (len(s.m), sorted(s.m)))
    return out


def is_prime(g: Graph) -> bool:
    """At least three vertices and only trivial modules.

    Graphs on one or two vertices only have trivial modules but are
    degenerate (they are series or parallel nodes in a modular decomposition),
    so they are not counted as prime.
    """
    _check_size(g, 14, "is_prime")
    n = g.n
    if n < 3:
        return False
    full = (1 << n) - 1
    for m in module_masks(g):
        if m != full and m & (m - 1):
            return False
    return True


# -- asteroidal triples ------------------------------------------------------

def find_asteroidal_triple(g: Graph) -> tuple[int, int, int] | None:
    n = g.n
    masks = g.masks
    full = (1 << n) - 1
    # label[c][x]: component of x in g - N[c], or -1 when x is in N[c]
    label = []
    for c in range(n):
        within = full & ~(masks[c] | (1 << c))
        lab = [-1] * n
        for k, comp in enumerate(component_masks(masks, within)):
            for x in iter_bits(comp):
                lab[x] = k
        label.append(lab)
    for a, b, c in combinations(range(n), 3):
        la, lb, lc = label[a], label[b], label[c]
        if (
            lc[a] >= 0 and lc[a] == lc[b]
            and lb[a] >= 0 and lb[a] == lb[c]
            and la[b] >= 0 and la[b] == la[c]
        ):
            return a, b, c
    return None


def has_asteroidal_triple(g: Graph) -> bool:
    return find_asteroidal_triple(g) is not None


# -- local features ----------------------------------------------------------

def cutvertices(g: Graph) -> list[int]:
    masks = g.masks
    full = (1 << g.n) - 1
    base = len(component_masks(masks, full))
    return [v for v in range(g.n) if len(component_masks(masks, full & ~(1 << v))) > base]


def local_features(g: Graph) -> LocalFeatures:
    masks = g.masks
    tt, ft = [], []
    for u, v in combinations(range(g.n), 2):
        if masks[u] & ~(1 << v) == masks[v] & ~(1 << u):
            (tt if (masks[u] >> v) & 1 else ft).append((u, v))
    pendants = [v for v in range(g.n) if masks[v].bit_count() == 1]
    return LocalFeatures(tt, ft, pendants, cutvertices(g))
