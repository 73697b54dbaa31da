"""Graph representation, graph6 I/O and elementary operations.

Vertices are the dense ids ``0..n-1``.  Small graphs are handled through
per-vertex adjacency bitmasks (Python ints); large sparse graphs keep
neighbour sets instead, since an int bitset per vertex is quadratic in memory.
Both views are derived lazily from whichever one the graph was built with.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "Graph",
    "Graph6Error",
    "UNREACHABLE",
    "parse_graph6",
    "to_graph6",
    "complement",
    "induced_subgraph",
    "components",
    "is_connected",
    "distance_matrix",
    "iter_bits",
    "pair_index",
]

UNREACHABLE = None
"""Distance sentinel for vertex pairs in different components (JSON ``null``)."""


class Graph6Error(ValueError):
    """Malformed graph6 input; ``offset`` is the byte position of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def _bits_of(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


_SMALL_BITS = 12
_BITS_TABLE = tuple(_bits_of(m) for m in range(1 << _SMALL_BITS))


def iter_bits(mask: int):
    """Positions of the set bits of ``mask`` in increasing order."""
    if mask < 1 << _SMALL_BITS:
        return _BITS_TABLE[mask]
    return _iter_bits_large(mask)


def _iter_bits_large(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@lru_cache(maxsize=None)
def pair_index(n: int) -> tuple[tuple[int, int], ...]:
    """Vertex pairs in graph6 (column-major upper-triangle) order."""
    return tuple((i, j) for j in range(1, n) for i in range(j))


class Graph:
    """Immutable simple undirected graph on ``0..n-1``."""

    __slots__ = ("n", "_masks", "_nbrs", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise IndexError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self._nbrs = tuple(frozenset(s) for s in nbrs)
        self._masks = None
        self._hash = None

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> Graph:
        """Build from adjacency bitmasks; symmetry and irreflexivity are checked."""
        masks = tuple(masks)
        n = len(masks)
        full = (1 << n) - 1
        for v, a in enumerate(masks):
            if a & ~full or (a >> v) & 1:
                raise ValueError(f"invalid adjacency mask at vertex {v}")
            for u in iter_bits(a):
                if not (masks[u] >> v) & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {v}")
        return cls._raw(masks)

    @classmethod
    def _raw(cls, masks: tuple[int, ...]) -> Graph:
        g = object.__new__(cls)
        g.n = len(masks)
        g._masks = masks
        g._nbrs = None
        g._hash = None
        return g

    @classmethod
    def from_code(cls, n: int, code: int) -> Graph:
        """Graph whose edge set is the bit pattern ``code`` over ``pair_index(n)``."""
        masks = [0] * n
        pairs = pair_index(n)
        while code:
            low = code & -code
            i, j = pairs[low.bit_length() - 1]
            masks[i] |= 1 << j
            masks[j] |= 1 << i
            code ^= low
        return cls._raw(tuple(masks))

    @classmethod
    def from_neighbor_sets(cls, nbrs: Sequence[Iterable[int]]) -> Graph:
        g = cls(len(nbrs), ((u, v) for u, s in enumerate(nbrs) for v in s))
        return g

    # -- views ---------------------------------------------------------------

    @property
    def masks(self) -> tuple[int, ...]:
        if self._masks is None:
            self._masks = tuple(sum(1 << u for u in s) for s in self._nbrs)
        return self._masks

    def neighbors(self, v: int) -> frozenset[int]:
        if self._nbrs is None:
            self._nbrs = tuple(frozenset(iter_bits(a)) for a in self._masks)
        return self._nbrs[v]

    def degree(self, v: int) -> int:
        if self._nbrs is not None:
            return len(self._nbrs[v])
        return self._masks[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        if self._masks is not None:
            return bool((self._masks[u] >> v) & 1)
        return v in self._nbrs[u]

    @property
    def m(self) -> int:
        return sum(self.degree(v) for v in range(self.n)) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.neighbors(u)) if u < v]

    @property
    def code(self) -> int:
        """Inverse of :meth:`from_code`."""
        masks = self.masks
        code = 0
        for k, (i, j) in enumerate(pair_index(self.n)):
            if (masks[j] >> i) & 1:
                code |= 1 << k
        return code

    # -- derived graphs ------------------------------------------------------

    def complement(self) -> Graph:
        full = (1 << self.n) - 1
        return Graph._raw(tuple(full & ~(a | (1 << v)) for v, a in enumerate(self.masks)))

    def subgraph(self, vertices: Iterable[int]) -> Graph:
        """Induced subgraph, relabelled densely in increasing vertex order."""
        return induced_subgraph(self, vertices)[0]

    # -- dunder --------------------------------------------------------------

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        if self.n != other.n:
            return False
        if self._masks is not None and other._masks is not None:
            return self._masks == other._masks
        return all(self.neighbors(v) == other.neighbors(v) for v in range(self.n))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, tuple(sorted(self.edges()))))
        return self._hash

    def __repr__(self) -> str:
        if self.n <= 62:
            return f"Graph({to_graph6(self)!r})"
        return f"Graph(n={self.n}, m={self.m})"


# -- graph6 ------------------------------------------------------------------

_HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise ValueError("graph too large for graph6")


def to_graph6(g: Graph) -> str:
    """Encode ``g`` in graph6 (no header, no trailing newline)."""
    out = [_encode_n(g.n)]
    acc = nbits = 0
    for i, j in pair_index(g.n):
        acc = (acc << 1) | g.has_edge(i, j)
        nbits += 1
        if nbits == 6:
            out.append(chr(acc + 63))
            acc = nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def parse_graph6(line: str | bytes) -> Graph:
    """Decode one graph6 string.  Raises :class:`Graph6Error` on malformed input."""
    if isinstance(line, bytes):
        line = line.decode("ascii", errors="replace")
    line = line.rstrip("\r\n")
    base = 0
    if line.startswith(_HEADER):
        base = len(_HEADER)
    data = line[base:]
    for k, ch in enumerate(data):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"character {ch!r} outside the graph6 range", base + k)
    if not data:
        raise Graph6Error("missing vertex count", base)
    vals = [ord(ch) - 63 for ch in data]
    if vals[0] != 63:
        n, pos = vals[0], 1
    elif len(vals) >= 2 and vals[1] == 63:
        if len(vals) < 8:
            raise Graph6Error("truncated 8-byte vertex count", base + len(vals))
        n = 0
        for x in vals[2:8]:
            n = (n << 6) | x
        pos = 8
    else:
        if len(vals) < 4:
            raise Graph6Error("truncated 4-byte vertex count", base + len(vals))
        n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
        pos = 4
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(vals) < pos + nbytes:
        raise Graph6Error(f"expected {nbytes} adjacency bytes", base + len(vals))
    if len(vals) > pos + nbytes:
        raise Graph6Error("trailing garbage", base + pos + nbytes)
    nbrs: list[list[int]] = [[] for _ in range(n)]
    k = 0
    j, i = 1, 0
    for b in range(nbytes):
        x = vals[pos + b]
        for s in range(5, -1, -1):
            if k >= nbits:
                if (x >> s) & 1:
                    raise Graph6Error("non-zero padding bits", base + pos + b)
                continue
            if (x >> s) & 1:
                nbrs[i].append(j)
                nbrs[j].append(i)
            k += 1
            i += 1
            if i == j:
                i, j = 0, j + 1
    g = object.__new__(Graph)
    g.n = n
    g._nbrs = tuple(frozenset(s) for s in nbrs)
    g._masks = None
    g._hash = None
    return g


# -- elementary operations ---------------------------------------------------

def complement(g: Graph) -> Graph:
    return g.complement()


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Return ``(g[s], relabel)`` where ``relabel[i]`` is the original id of new vertex ``i``."""
    verts = tuple(sorted(set(s)))
    for v in verts:
        if not 0 <= v < g.n:
            raise IndexError(f"vertex {v} out of range for n={g.n}")
    pos = {v: i for i, v in enumerate(verts)}
    if g._masks is not None or g.n <= 64:
        masks = g.masks
        sub = []
        for v in verts:
            a = 0
            for u in iter_bits(masks[v]):
                i = pos.get(u)
                if i is not None:
                    a |= 1 << i
            sub.append(a)
        return Graph._raw(tuple(sub)), verts
    edges = [(pos[v], pos[u]) for v in verts for u in g.neighbors(v) if u in pos and v < u]
    return Graph(len(verts), edges), verts


def components(g: Graph) -> list[list[int]]:
    """Connected components, each sorted, ordered by their minimum vertex."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def component_masks(masks: Sequence[int], within: int) -> list[int]:
    """Components of the subgraph induced by bitmask ``within``, as bitmasks."""
    out = []
    rest = within
    while rest:
        comp = frontier = rest & -rest
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= masks[v]
            frontier = nxt & within & ~comp
            comp |= frontier
        out.append(comp)
        rest &= ~comp
    return out


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return False
    if g._masks is not None:
        return component_masks(g._masks, (1 << g.n) - 1)[0] == (1 << g.n) - 1
    return len(components(g)) == 1


def distance_matrix(g: Graph) -> list[list[int | None]]:
    """All-pairs BFS hop counts; :data:`UNREACHABLE` across components."""
    dist = []
    for s in range(g.n):
        row: list[int | None] = [UNREACHABLE] * g.n
        row[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if row[w] is None:
                    row[w] = row[u] + 1
                    queue.append(w)
        dist.append(row)
    return dist
