"""Exhaustive enumeration, cross-validation gates, census, generation, benchmarks."""

from __future__ import annotations

import logging
import os
import random
import time
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Iterator, TextIO

from . import classifier, oracles, patterns
from .graph import Graph, component_masks, is_connected, iter_bits, parse_graph6, to_graph6
from .iso import canonical_form, find_induced_embedding, induced_forms, is_induced_embedding
from .modular import PRIME, class_condition_md, modular_decomposition, validate_md
from .pruning import ReplayError, prune_dh, reduce_to_bull_check, replay
from .splittree import (
    Fail, atfree_condition, build_split_tree, class_condition, cograph_condition,
    is_cutvertex_leaf, validate_split_tree,
)

log = logging.getLogger(__name__)

MAX_ENUM = 7
KEEP = 20  # witnesses kept per failing check


def worker_count() -> int:
    env = os.environ.get("DHKIT_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def enumerate_labeled(n: int) -> Iterator[Graph]:
    """All labelled graphs on ``n`` vertices, in edge-bitmask order."""
    if n > MAX_ENUM:
        raise oracles.SizeLimitError(
            f"labelled enumeration is limited to n <= {MAX_ENUM}; supply a graph6 file instead")
    for code in range(1 << (n * (n - 1) // 2)):
        yield Graph.from_code(n, code)


def read_graph6(stream: TextIO) -> Iterator[Graph]:
    for line in stream:
        line = line.strip()
        if line:
            yield parse_graph6(line)


# -- census ------------------------------------------------------------------

CENSUS_FIELDS = ("n", "graphs", "dh", "co_dh", "dh_co_dh", "cograph", "at_free_dh", "prime_dh_co_dh")


@dataclass
class CensusRow:
    n: int
    graphs: int = 0
    dh: int = 0
    co_dh: int = 0
    dh_co_dh: int = 0
    cograph: int = 0
    at_free_dh: int = 0
    prime_dh_co_dh: int = 0
    prime_members: list[str] = field(default_factory=list)

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(getattr(self, f) for f in CENSUS_FIELDS)

    def chain_ok(self) -> bool:
        """cograph <= class <= DH ∩ AT-free <= DH, and class <= co-DH."""
        return (self.cograph <= self.dh_co_dh <= self.at_free_dh <= self.dh
                and self.dh_co_dh <= self.co_dh)


def census(n: int, graphs: Iterable[Graph] | None = None) -> CensusRow:
    """Class counts up to isomorphism, each class evaluated once by the oracles."""
    if graphs is None:
        graphs = enumerate_labeled(n)
    row = CensusRow(n)
    seen = set()
    for g in graphs:
        if g.n != n:
            raise ValueError(f"census for n={n} got a graph on {g.n} vertices")
        cf = canonical_form(g)
        if cf in seen:
            continue
        seen.add(cf)
        dh = oracles.is_dh_by_forbidden(g)
        co_dh = oracles.is_dh_by_forbidden(g.complement())
        in_class = oracles.in_class_by_forbidden(g)
        row.graphs += 1
        row.dh += dh
        row.co_dh += co_dh
        row.dh_co_dh += in_class
        row.cograph += oracles.is_cograph(g)
        row.at_free_dh += dh and not oracles.has_asteroidal_triple(g)
        if in_class and n <= 14 and oracles.is_prime(g):
            row.prime_dh_co_dh += 1
            row.prime_members.append(to_graph6(g))
    return row


# -- cross-validation --------------------------------------------------------

@dataclass
class Discrepancy:
    check: str
    code: int
    graph6: str
    detail: str


@dataclass
class CrossReport:
    n: int
    graphs: int = 0
    discrepancies: list[Discrepancy] = field(default_factory=list)
    failures: Counter = field(default_factory=Counter)
    evaluated: Counter = field(default_factory=Counter)
    seconds: defaultdict = field(default_factory=lambda: defaultdict(float))

    @property
    def empty(self) -> bool:
        return not self.failures

    def merge(self, other: CrossReport) -> None:
        self.graphs += other.graphs
        self.discrepancies.extend(other.discrepancies)
        self.failures.update(other.failures)
        self.evaluated.update(other.evaluated)
        for k, v in other.seconds.items():
            self.seconds[k] += v

    def lines(self) -> list[str]:
        return [f"{d.check}\t{d.graph6}\t{d.detail}" for d in self.discrepancies]


# cheap stand-in used to prove the gate can fail
def _broken_fast_recognize(g: Graph) -> bool:
    return True


class _Checker:
    """Runs every agreement invariant on one graph, accumulating into a report."""

    def __init__(self, report: CrossReport, fault: bool = False, keep: int = KEEP):
        self.rep = report
        self.keep = keep
        self.fast = _broken_fast_recognize if fault else classifier.fast_recognize
        self._g = None
        self._code = 0

    def fail(self, check: str, detail: str) -> None:
        self.rep.failures[check] += 1
        if self.rep.failures[check] <= self.keep:
            self.rep.discrepancies.append(Discrepancy(check, self._code, to_graph6(self._g), detail))

    def timed(self, check: str, fn: Callable, *args):
        t0 = time.perf_counter()
        out = fn(*args)
        self.rep.seconds[check] += time.perf_counter() - t0
        self.rep.evaluated[check] += 1
        return out

    def run(self, g: Graph, code: int) -> None:
        self._g, self._code = g, code
        self.rep.graphs += 1
        T = self.timed
        n = g.n
        connected = n > 0 and is_connected(g)
        co = g.complement()

        # graph core
        if T("graph6-roundtrip", lambda: parse_graph6(to_graph6(g)) == g) is False:
            self.fail("graph6-roundtrip", "decode(encode(g)) != g")
        if n and T("complement", _complement_ok, g, co) is False:
            self.fail("complement", "involution or induced-subgraph commutation fails")

        # definitions of distance-hereditary
        dh_dist = T("dh-definitions", oracles.is_dh_by_distances, g)
        dh = T("dh-definitions", oracles.is_dh_by_forbidden, g)
        if dh_dist != dh:
            self.fail("dh-definitions", f"distances={dh_dist} forbidden={dh}")
        seq = None
        if connected:
            seq = T("dh-definitions", prune_dh, g)
            if (seq is not None) != dh:
                self.fail("dh-definitions", f"prune_dh={'ok' if seq else 'stalls'} forbidden={dh}")
            if seq is not None:
                T("replay", self._replay, g, seq, "prune_dh")

        co_dh = T("class-by-complement", oracles.is_dh_by_forbidden, co)
        in_class = T("class-by-complement", oracles.in_class_by_forbidden, g)
        if in_class != (dh and co_dh):
            self.fail("class-by-complement", f"forbidden={in_class} dh={dh} co_dh={co_dh}")

        T("embedding-vs-scan", self._embedding_scan, g)
        T("module-families", self._modules, g)

        cograph = oracles.is_cograph(g)
        at = oracles.find_asteroidal_triple(g)

        # split decomposition
        split_ok = None
        if connected and seq is not None:
            split_ok = T("split-tree", self._split, g, seq, cograph, at)
        elif connected:
            split_ok = False
            if cograph:
                self.fail("split-cograph", "connected cograph that is not DH")
        else:
            split_ok = T("split-tree", classifier.split_route, g)

        # twin elimination
        found = T("twin-elim", reduce_to_bull_check, g)
        if (found is not None) != in_class:
            self.fail("twin-elim", f"reduce_to_bull={found is not None} forbidden={in_class}")
        T("twin-elim", self._twin_details, g, found)

        # modular decomposition
        md_ok = T("modular", self._modular, g, in_class, cograph)

        # classifier
        fast = T("fast-recognize", self.fast, g)
        if fast != in_class:
            self.fail("fast-recognize", f"fast_recognize={fast} forbidden={in_class}")
        rep = T("classify", classifier.classify, g)
        expected = {"forbidden": in_class, "twin-elim": found is not None,
                    "modular": md_ok, "split": split_ok}
        if rep.route_results != expected or not rep.routes_agree or rep.in_class != in_class:
            self.fail("four-routes", f"classify={rep.route_results} independent={expected}")
        if (rep.is_dh, rep.is_co_dh, rep.is_cograph, rep.is_at_free) != (dh, co_dh, cograph, at is None):
            self.fail("four-routes", "classify flags differ from the oracles")
        if in_class and at is not None:
            self.fail("containment", f"in-class graph has asteroidal triple {at}")

        audit = T("lemma-audit", classifier.lemma_audit, g, in_class, dh)
        for v in audit.violations:
            self.fail("lemma-audit", v)

        cert = T("certificate", classifier.certify, g)
        if cert.in_class != in_class or not classifier.verify_certificate(g, cert):
            self.fail("certificate", f"certificate {cert.to_dict()} does not verify")

    # -- individual checks ---------------------------------------------------

    def _replay(self, g: Graph, seq, label: str) -> None:
        try:
            residual = replay(g, seq)
            back = replay(residual, seq, reversed=True)
        except ReplayError as exc:
            self.fail("replay", f"{label}: {exc}")
            return
        if back != g:
            self.fail("replay", f"{label}: reverse replay does not rebuild the graph")

    def _embedding_scan(self, g: Graph) -> None:
        forms = induced_forms(g, 5)
        for name in patterns.CLASS_OBSTRUCTIONS:
            pat = patterns.CATALOG[name]
            emb = find_induced_embedding(g, pat)
            if (emb is not None) != (canonical_form(pat) in forms):
                self.fail("embedding-vs-scan", f"{name}: search={emb} scan disagrees")
            elif emb is not None and not is_induced_embedding(g, pat, emb):
                self.fail("embedding-vs-scan", f"{name}: returned embedding {emb} is not induced")

    def _modules(self, g: Graph) -> None:
        present = set(oracles.module_masks(g))
        for a, b in combinations(oracles.strong_module_masks(g), 2):
            if oracles._overlap_module(a, b):
                self.fail("module-families", f"strong modules {a:b} and {b:b} overlap")
        for comp in component_masks(g.masks, (1 << g.n) - 1):
            if comp not in present:
                self.fail("module-families", f"component {sorted(iter_bits(comp))} missing")
        feats = oracles.local_features(g)
        for u, v in feats.truetwins + feats.falsetwins:
            if (1 << u) | (1 << v) not in present:
                self.fail("module-families", f"twin pair {u},{v} missing")
        if g.n >= 4 and is_connected(g):
            for s, t in combinations(oracles.strong_split_masks(g), 2):
                if oracles._overlap_split(*s, *t):
                    self.fail("module-families", "two strong splits overlap")

    def _split(self, g: Graph, seq, cograph: bool, at) -> bool:
        tree = build_split_tree(g, seq)
        rep = validate_split_tree(tree, g)
        for f in rep.failures:
            self.fail("split-tree", f)
        if (cograph_condition(tree) is not None) != cograph:
            self.fail("split-cograph", f"cograph_condition disagrees with P4-freeness ({cograph})")
        if (atfree_condition(tree) is not None) != (at is None):
            self.fail("split-atfree", f"atfree_condition disagrees with AT search ({at})")
        cuts = set(oracles.cutvertices(g))
        for v in range(g.n):
            if is_cutvertex_leaf(tree, v) != (v in cuts):
                self.fail("split-cutvertex", f"vertex {v}: leaf test disagrees with cutvertex oracle")
        return not isinstance(class_condition(tree), Fail)

    def _twin_details(self, g: Graph, found) -> None:
        from .pruning import twin_eliminate

        residual, seq = twin_eliminate(g)
        self._replay(g, seq, "twin_eliminate")
        ob = oracles.class_obstruction(residual)
        if ob is not None:
            name, emb = ob
            lifted = tuple(seq.residual[i] for i in emb)
            if not is_induced_embedding(g, patterns.CATALOG[name], lifted):
                self.fail("twin-elim", f"{name} in residual does not lift to the input")
        if found is not None and found[0] != seq:
            self.fail("twin-elim", "reduce_to_bull_check sequence differs from twin_eliminate")

    def _modular(self, g: Graph, in_class: bool, cograph: bool) -> bool:
        if g.n == 0:
            return True
        md = modular_decomposition(g)
        for f in validate_md(md, g).failures:
            self.fail("modular", f)
        ok = class_condition_md(md)
        if ok != in_class:
            self.fail("modular", f"class_condition_md={ok} forbidden={in_class}")
        has_prime = any(x.kind == PRIME for x in md.nodes())
        if has_prime == cograph:
            self.fail("modular", f"prime node present={has_prime} but cograph={cograph}")
        return ok


def _complement_ok(g: Graph, co: Graph) -> bool:
    if co.complement() != g:
        return False
    s = list(range(g.n - 1)) if g.n > 1 else [0]
    return co.subgraph(s) == g.subgraph(s).complement()


def _validate_range(n: int, lo: int, hi: int, fault: bool) -> CrossReport:
    rep = CrossReport(n)
    checker = _Checker(rep, fault)
    for code in range(lo, hi):
        checker.run(Graph.from_code(n, code), code)
    return rep


def cross_validate(n: int, fault: bool = False, threads: int | None = None,
                   progress: Callable[[int, int], None] | None = None) -> CrossReport:
    """Run every agreement invariant over all labelled graphs on ``n`` vertices.

    An empty report (``report.empty``) means every route agreed everywhere.
    With ``fault=True`` a deliberately broken recognizer is substituted so the
    gate can be seen to fail.
    """
    if n > MAX_ENUM:
        raise oracles.SizeLimitError(f"cross_validate enumerates labelled graphs; n <= {MAX_ENUM}")
    total = 1 << (n * (n - 1) // 2)
    threads = threads or worker_count()
    chunk = max(1, min(1 << 14, total // max(1, threads * 8)))
    bounds = [(lo, min(total, lo + chunk)) for lo in range(0, total, chunk)]
    report = CrossReport(n)
    if threads == 1:
        for lo, hi in bounds:
            report.merge(_validate_range(n, lo, hi, fault))
            if progress:
                progress(hi, total)
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futs = [pool.submit(_validate_range, n, lo, hi, fault) for lo, hi in bounds]
            for (lo, hi), fut in zip(bounds, futs):
                report.merge(fut.result())
                if progress:
                    progress(hi, total)
    # chunks each keep their own witnesses; trim to the lowest codes per check
    report.discrepancies.sort(key=lambda d: (d.code, d.check))
    kept: Counter = Counter()
    trimmed = []
    for d in report.discrepancies:
        kept[d.check] += 1
        if kept[d.check] <= KEEP:
            trimmed.append(d)
    report.discrepancies = trimmed
    return report


# -- generation --------------------------------------------------------------

def gen_instance(n: int, seed: int, sample: int = 8) -> Graph:
    """Random member of DH ∩ co-DH on ``n`` vertices.

    Uses Python's Mersenne Twister (``random.Random(seed)``).  Starts from a
    uniformly chosen induced subgraph of the Bull (size uniform in
    ``1..min(5, n)``), then repeatedly picks a vertex and adds a true or false
    twin of it (fair coin) until there are ``n`` vertices, and finally
    relabels by a uniform random permutation.  The vertex to duplicate is the
    lowest-degree of ``sample`` uniform draws; uniform choice would make the
    edge count grow quadratically.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = random.Random(seed)
    k = rng.randint(1, min(5, n))
    start = sorted(rng.sample(range(5), k))
    pos = {v: i for i, v in enumerate(start)}
    adj: list[set[int]] = [
        {pos[u] for u in patterns.BULL.neighbors(v) if u in pos} for v in start
    ]
    while len(adj) < n:
        v = min((rng.randrange(len(adj)) for _ in range(sample)), key=lambda x: len(adj[x]))
        u = len(adj)
        nb = set(adj[v])
        if rng.random() < 0.5:
            nb.add(v)
            adj[v].add(u)
        for w in adj[v]:
            if w != u:
                adj[w].add(u)
        adj.append(nb)
    perm = list(range(n))
    rng.shuffle(perm)
    edges = [(perm[a], perm[b]) for a in range(n) for b in adj[a] if a < b]
    return Graph(n, edges)


def perturb(g: Graph, seed: int) -> Graph:
    """``g`` plus one random non-edge (unchanged if ``g`` is complete)."""
    rng = random.Random(seed)
    if g.m == g.n * (g.n - 1) // 2:
        return g
    while True:
        u, v = rng.randrange(g.n), rng.randrange(g.n)
        if u != v and not g.has_edge(u, v):
            return Graph(g.n, g.edges() + [(u, v)])


# -- benchmarking ------------------------------------------------------------

BENCH_FIELDS = ("n", "m", "seconds", "in_class", "perturbed_seconds", "perturbed_in_class",
                "n_ratio", "time_ratio", "us_per_n_plus_m")


@dataclass
class BenchRow:
    n: int
    m: int
    seconds: float
    in_class: bool
    perturbed_seconds: float
    perturbed_in_class: bool
    n_ratio: float | None = None
    time_ratio: float | None = None

    @property
    def us_per_n_plus_m(self) -> float:
        return 1e6 * self.seconds / max(1, self.n + self.m)

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, f) for f in BENCH_FIELDS)


def _timed(fn, g, repeats: int):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(g)
        best = min(best, time.perf_counter() - t0)
    return out, best


def bench(sizes: Iterable[int], seed: int, repeats: int = 1) -> list[BenchRow]:
    """Time ``fast_recognize`` on generated instances and a perturbed copy of each.

    With ``repeats > 1`` the minimum wall time is kept.
    """
    rows = []
    prev = None
    for n in sizes:
        g = gen_instance(n, seed)
        verdict, secs = _timed(classifier.fast_recognize, g, repeats)
        g2 = perturb(g, seed)
        verdict2, secs2 = _timed(classifier.fast_recognize, g2, repeats)
        row = BenchRow(n, g.m, secs, verdict, secs2, verdict2)
        if prev is not None:
            row.n_ratio = n / prev.n
            row.time_ratio = secs / prev.seconds if prev.seconds > 0 else None
        rows.append(row)
        prev = row
        log.info("bench n=%d m=%d %.3fs", n, g.m, secs)
    return rows
