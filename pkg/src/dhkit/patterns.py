"""Named small graphs: the obstruction sets and the prime members of the class."""

from __future__ import annotations

from .graph import Graph


def path(k: int) -> Graph:
    return Graph(k, [(i, i + 1) for i in range(k - 1)])


def cycle(k: int) -> Graph:
    if k < 3:
        raise ValueError("cycles need at least 3 vertices")
    return Graph(k, [(i, (i + 1) % k) for i in range(k)])


def hole(k: int) -> Graph:
    """Induced cycle of length ``k >= 5``."""
    if k < 5:
        raise ValueError("holes have length at least 5")
    return cycle(k)


def clique(k: int) -> Graph:
    return Graph(k, [(i, j) for j in range(k) for i in range(j)])


def empty(k: int) -> Graph:
    return Graph(k)


K1 = clique(1)
P4 = path(4)
P5 = path(5)
C5 = cycle(5)
# triangle 1-2-3 with pendants 0 (on 1) and 4 (on 3)
BULL = Graph(5, [(0, 1), (1, 2), (1, 3), (2, 3), (3, 4)])
# square 0-1-2-3 with roof vertex 4 over the edge 0-1
HOUSE = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 4)])
# rim path 0-1-2-3 plus hub 4
GEM = Graph(5, [(0, 1), (1, 2), (2, 3)] + [(i, 4) for i in range(4)])
# K1 + P4: path 0-1-2-3 and isolated 4
COGEM = Graph(5, [(0, 1), (1, 2), (2, 3)])
# two 4-cycles sharing the edge 1-4
DOMINO = Graph(6, [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)])
PAW = Graph(4, [(0, 1), (0, 2), (1, 2), (2, 3)])

CATALOG: dict[str, Graph] = {
    "K1": K1,
    "P4": P4,
    "Bull": BULL,
    "C5": C5,
    "P5": P5,
    "House": HOUSE,
    "Gem": GEM,
    "CoGem": COGEM,
    "Domino": DOMINO,
}

# obstruction order used for negative certificates
CLASS_OBSTRUCTIONS: tuple[str, ...] = ("C5", "House", "P5", "Gem", "CoGem")
DH_OBSTRUCTIONS: tuple[str, ...] = ("House", "Domino", "Gem")


def by_name(name: str) -> Graph:
    if name.startswith("C") and name[1:].isdigit():
        return cycle(int(name[1:]))
    if name.startswith("hole") and name[4:].isdigit():
        return hole(int(name[4:]))
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown pattern {name!r}") from None
