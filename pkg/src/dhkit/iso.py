"""Induced-subgraph search and canonical forms for small graphs."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .graph import Graph, iter_bits

Embedding = tuple[int, ...]
"""``emb[i]`` is the host vertex that pattern vertex ``i`` maps to."""


def find_induced_embedding(host: Graph, pattern: Graph) -> Embedding | None:
    """Lexicographically smallest induced embedding of ``pattern`` into ``host``.

    Pattern vertices are placed in id order and host candidates tried in
    increasing order, so the first complete assignment found is the
    lexicographically smallest one.
    """
    if host.n <= _MEMO_LIMIT:
        return _find_memo(host.masks, pattern.masks)
    return _find(host.masks, pattern.masks)


_MEMO_LIMIT = 16


@lru_cache(maxsize=1 << 12)
def _find_memo(hm: tuple[int, ...], pm: tuple[int, ...]) -> Embedding | None:
    return _find(hm, pm)


def _find(hm: Sequence[int], pm: Sequence[int]) -> Embedding | None:
    k, n = len(pm), len(hm)
    if k == 0:
        return ()
    if k > n:
        return None
    hdeg = [a.bit_count() for a in hm]
    # degree filter: host vertex needs enough neighbours and non-neighbours
    degok = []
    for i in range(k):
        d = pm[i].bit_count()
        nd = k - 1 - d
        c = 0
        for h in range(n):
            if hdeg[h] >= d and n - 1 - hdeg[h] >= nd:
                c |= 1 << h
        if not c:
            return None
        degok.append(c)

    images = [0] * k
    rem = [0] * k
    used = 0
    rem[0] = degok[0]
    i = 0
    while True:
        r = rem[i]
        if not r:
            i -= 1
            if i < 0:
                return None
            used ^= 1 << images[i]
            continue
        low = r & -r
        rem[i] = r ^ low
        images[i] = low.bit_length() - 1
        used |= low
        i += 1
        if i == k:
            return tuple(images)
        c = degok[i] & ~used
        row = pm[i]
        for j in range(i):
            if (row >> j) & 1:
                c &= hm[images[j]]
            else:
                c &= ~hm[images[j]]
        rem[i] = c


def is_induced_embedding(host: Graph, pattern: Graph, emb: Sequence[int]) -> bool:
    """Check the embedding invariant directly: injective, adjacency and non-adjacency kept."""
    if len(emb) != pattern.n or len(set(emb)) != len(emb):
        return False
    if any(not 0 <= h < host.n for h in emb):
        return False
    for j in range(pattern.n):
        for i in range(j):
            if pattern.has_edge(i, j) != host.has_edge(emb[i], emb[j]):
                return False
    return True


def contains_induced(host: Graph, pattern: Graph) -> bool:
    return find_induced_embedding(host, pattern) is not None


def brute_force_contains(host: Graph, pattern: Graph) -> bool:
    """Scan every ``|pattern|``-subset of the host and compare canonical forms."""
    target = canonical_form(pattern)
    hm = host.masks
    for sub in combinations(range(host.n), pattern.n):
        if _canonical_masks(_restrict(hm, sub)) == target:
            return True
    return False


def induced_forms(host: Graph, k: int) -> set[bytes]:
    """Canonical forms of every induced ``k``-vertex subgraph of ``host``."""
    hm = host.masks
    return {_canonical_masks(_restrict(hm, sub)) for sub in combinations(range(host.n), k)}


def _restrict(masks: Sequence[int], verts: Sequence[int]) -> tuple[int, ...]:
    out = []
    for v in verts:
        a = masks[v]
        b = 0
        for i, u in enumerate(verts):
            if (a >> u) & 1:
                b |= 1 << i
        out.append(b)
    return tuple(out)


# -- canonical form ----------------------------------------------------------

def _refine(masks: Sequence[int], cells: list[int]) -> list[int]:
    """Equitable refinement of an ordered partition (cells as bitmasks)."""
    cells = list(cells)
    changed = True
    while changed:
        changed = False
        for splitter in cells:
            for idx, cell in enumerate(cells):
                if cell & (cell - 1) == 0:
                    continue
                groups: dict[int, int] = {}
                for v in iter_bits(cell):
                    c = (masks[v] & splitter).bit_count()
                    groups[c] = groups.get(c, 0) | (1 << v)
                if len(groups) > 1:
                    cells[idx:idx + 1] = [groups[c] for c in sorted(groups)]
                    changed = True
                    break
            if changed:
                break
    return cells


def _certificate(masks: Sequence[int], order: Sequence[int]) -> tuple[int, ...]:
    pos = {v: p for p, v in enumerate(order)}
    rows = []
    for v in order:
        r = 0
        for u in iter_bits(masks[v]):
            r |= 1 << pos[u]
        rows.append(r)
    return tuple(rows)


@lru_cache(maxsize=1 << 17)
def _canonical_masks(masks: tuple[int, ...]) -> bytes:
    n = len(masks)
    if n == 0:
        return b"\x00"
    # twins are swapped by an automorphism fixing every refined partition
    # that does not individualise either of them, so one branch per class
    twin_rep = list(range(n))
    for v in range(n):
        for u in range(v):
            if twin_rep[u] == u and masks[u] & ~(1 << v) == masks[v] & ~(1 << u):
                twin_rep[v] = u
                break
    best: tuple[int, ...] | None = None

    def search(cells: list[int]) -> None:
        nonlocal best
        cells = _refine(masks, cells)
        for idx, cell in enumerate(cells):
            if cell & (cell - 1):
                break
        else:
            cert = _certificate(masks, [c.bit_length() - 1 for c in cells])
            if best is None or cert > best:
                best = cert
            return
        seen = set()
        for v in iter_bits(cell):
            r = twin_rep[v]
            if r in seen:
                continue
            seen.add(r)
            search(cells[:idx] + [1 << v, cell & ~(1 << v)] + cells[idx + 1:])

    search([(1 << n) - 1])
    width = (n + 7) // 8
    return n.to_bytes(2, "big") + b"".join(r.to_bytes(width, "big") for r in best)


def canonical_form(g: Graph) -> bytes:
    """Byte string equal for two graphs exactly when they are isomorphic."""
    return _canonical_masks(g.masks)


def canonical_graph(g: Graph) -> Graph:
    """The canonical representative itself, rebuilt from :func:`canonical_form`."""
    data = canonical_form(g)
    n = int.from_bytes(data[:2], "big")
    width = (n + 7) // 8
    rows = [int.from_bytes(data[2 + i * width: 2 + (i + 1) * width], "big") for i in range(n)]
    return Graph._raw(tuple(rows))


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.m == h.m and canonical_form(g) == canonical_form(h)
