"""Exhaustive extremal functions for forbidden-minor and forbidden-
topological-minor classes, periodicity detection for the shifted values
f(n) = ex(n) - delta*n, pruned-graph machinery, and the factorial
subset-sum subroutine."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .canon import (
    automorphism_generators,
    canonical_form,
    subset_orbit_representatives,
)
from .errors import CapExceeded
from .graphs import Graph
from .minors import find_minor_model, has_minor, has_topo_minor
from .patchwork import graph_phi


@lru_cache(maxsize=None)
def _vertex_orbit_reps(f: Graph) -> tuple[int, ...]:
    """One vertex per automorphism orbit, ascending."""
    gens = automorphism_generators(f)
    reps = []
    seen: set[int] = set()
    for v in range(f.n):
        if v in seen:
            continue
        reps.append(v)
        queue = [v]
        seen.add(v)
        while queue:
            u = queue.pop()
            for p in gens:
                if p[u] not in seen:
                    seen.add(p[u])
                    queue.append(p[u])
    return tuple(reps)


@dataclass(frozen=True)
class ClassSpec:
    """A class given by forbidden patterns under one containment relation."""

    forbidden: tuple[Graph, ...]
    relation: str  # "minor" or "topo"

    def __post_init__(self):
        object.__setattr__(self, "forbidden", tuple(self.forbidden))
        if not self.forbidden:
            raise ValueError("at least one forbidden graph is required")
        if any(f.n == 0 for f in self.forbidden):
            raise ValueError("forbidden graphs must be non-null")
        if self.relation not in ("minor", "topo"):
            raise ValueError("relation must be 'minor' or 'topo'")

    def admits(self, g: Graph) -> bool:
        """Whether the graph belongs to the class."""
        test = has_minor if self.relation == "minor" else has_topo_minor
        return not any(test(g, f) for f in self.forbidden)

    def admits_child(self, h: Graph, new_vertex: int) -> bool:
        """Membership of a member graph extended by one vertex.

        Any forbidden pattern in the extension must touch the new vertex
        (the rest was already clean), so the minor search is anchored there,
        once per orbit of the pattern's vertices.
        """
        if self.relation != "minor":
            return self.admits(h)
        anchor = frozenset({new_vertex})
        for f in self.forbidden:
            for v in _vertex_orbit_reps(f):
                if find_minor_model(h, f, {v: anchor}) is not None:
                    return False
        return True


@dataclass(frozen=True)
class ExtremalTable:
    """ex(n) with an edge-maximum witness, for n = 1..n_max."""

    spec: ClassSpec
    rows: tuple[tuple[int, int, Graph], ...]  # (n, ex, witness)


@dataclass(frozen=True)
class PeriodReport:
    """Eventual periodicity of f(n) = ex(n) - delta*n on the tabulated
    range: f(n) = residues[n mod P] for all tabulated n > M."""

    delta: Fraction
    period: int
    onset: int
    residues: tuple[Fraction, ...]


EXTREMAL_CAP = 9


def ex_table(spec: ClassSpec, n_max: int, cap: int = EXTREMAL_CAP) -> ExtremalTable:
    """Exact extremal values by isomorphism-free exhaustive enumeration.

    Levels are built by vertex augmentation; the class is closed under
    vertex deletion for both relations, so every n-vertex member extends
    some (n-1)-vertex member and pruning failed intermediate graphs is
    sound.  Deterministic: the witness is the edge-maximum member of least
    canonical form.
    """
    if n_max > cap:
        raise CapExceeded("extremal_n", cap, n_max)
    if n_max < 1:
        raise ValueError("n_max must be positive")
    rows: list[tuple[int, int, Graph]] = []
    level = [g for g in [Graph(1)] if spec.admits(g)]
    for n in range(1, n_max + 1):
        if n > 1:
            members: dict[bytes, Graph] = {}
            rejected: set[bytes] = set()
            for g in level:
                k = n - 1
                # one neighborhood per parent-automorphism orbit
                gens = automorphism_generators(g)
                for nbhd in subset_orbit_representatives(k, gens):
                    h = Graph(
                        k + 1,
                        g.edges | {(u, k) for u in range(k) if (nbhd >> u) & 1},
                    )
                    form = canonical_form(h)
                    if form in members or form in rejected:
                        continue
                    if spec.admits_child(h, k):
                        members[form] = h
                    else:
                        rejected.add(form)
            level = [members[f] for f in sorted(members)]
        if not level:
            raise ValueError(f"the class has no member on {n} vertices")
        witness = max(level, key=lambda g: (g.m, canonical_form(g)))
        witness = min(
            (g for g in level if g.m == witness.m), key=canonical_form
        )
        rows.append((n, witness.m, witness))
    return ExtremalTable(spec, tuple(rows))


def ex_table_bruteforce(spec: ClassSpec, n: int) -> int:
    """Unpruned oracle: the maximum over every labeled graph on n vertices."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    best = 0
    for mask in range(1 << len(pairs)):
        g = Graph(n, frozenset(p for i, p in enumerate(pairs) if (mask >> i) & 1))
        if g.m > best and spec.admits(g):
            best = g.m
    return best


def f_values(table: ExtremalTable, delta: Fraction) -> tuple[Fraction, ...]:
    """f(n) = ex(n) - delta*n, exact, in table order."""
    delta = Fraction(delta)
    ns = [n for n, _, _ in table.rows]
    if ns != list(range(ns[0], ns[0] + len(ns))):
        raise ValueError("table rows must be contiguous")
    return tuple(Fraction(ex) - delta * n for n, ex, _ in table.rows)


def detect_period(
    f: Sequence[Fraction],
    delta: Fraction = Fraction(0),
    search_limit: int = 4,
    first_n: int = 1,
) -> Optional[PeriodReport]:
    """The smallest (P, M) with f(n) = residues[n mod P] for tabulated n > M.

    ``f`` holds f(first_n), f(first_n + 1), ...  A candidate period needs at
    least 2P values after the onset; None means inconclusive (the table may
    simply be too short), never a refutation.
    """
    values = list(f)
    last_n = first_n + len(values) - 1
    for P in range(1, search_limit + 1):
        for M in range(first_n - 1, last_n - 2 * P + 1):
            if all(
                values[n - first_n] == values[n + P - first_n]
                for n in range(M + 1, last_n - P + 1)
            ):
                residues = [Fraction(0)] * P
                for n in range(last_n - P + 1, last_n + 1):
                    residues[n % P] = values[n - first_n]
                return PeriodReport(Fraction(delta), P, M, tuple(residues))
    return None


# -- pruned graphs ---------------------------------------------------------

PRUNE_STATE_CAP = 20000


def _minor_closure(g: Graph, max_drop: int, floor: int = 0) -> list[Graph]:
    """One representative of every minor of ``g`` reachable by at most
    ``max_drop`` vertex-removing steps (vertex deletions and edge
    contractions), keeping at least ``floor`` vertices.

    Edge deletions are omitted on purpose: they lower the edge count at
    equal vertex count, so they never help maximize |E| - delta*|V|.
    """
    seen: dict[bytes, Graph] = {canonical_form(g): g}
    frontier = [g]
    for _ in range(max_drop):
        nxt = []
        for h in frontier:
            if h.n <= max(floor, 1):
                continue
            children = [h.delete_vertex(v) for v in range(h.n)]
            children += [h.contract_edge(u, v) for u, v in h.edges]
            for c in children:
                form = canonical_form(c)
                if form not in seen:
                    if len(seen) >= PRUNE_STATE_CAP:
                        raise CapExceeded(
                            "prune_states", PRUNE_STATE_CAP, len(seen) + 1
                        )
                    seen[form] = c
                    nxt.append(c)
        frontier = nxt
    return [h for h in seen.values() if h.n >= floor]


def is_pruned(g: Graph, p: int, delta: Fraction) -> bool:
    """Whether |E| - delta*|V| is maximized by ``g`` among its own minors
    with at least |V(g)| - p vertices."""
    delta = Fraction(delta)
    base = graph_phi(g, delta)
    for h in _minor_closure(g, p, g.n - p):
        if graph_phi(h, delta) > base:
            return False
    return True


@dataclass(frozen=True)
class PruneResult:
    graph: Graph
    outcome: str  # "P1" (pruned, no phi loss) or "P2" (density gain)
    epsilon: Fraction


def prune_search(
    g: Graph, p: int, delta: Fraction, n0: int, epsilon: Fraction | None = None
) -> PruneResult:
    """Among the minors of ``g`` on at least ``n0`` vertices satisfying
    phi(G') >= phi(G) + 2*epsilon*(|V(G)| - |V(G')|), take one of minimum
    vertex count (ties: maximum phi, then least canonical form).

    The default epsilon is 1/(2*p*denominator(delta)): phi values live in
    (1/denominator)-steps, so any strict phi gain is at least p-fold the
    per-step rate, matching the choice in the source argument.  The result
    is p-pruned with phi(G') >= phi(G) ("P1") or has edge density at least
    delta + epsilon ("P2"); if neither certificate holds the input was too
    small for the guarantee and a ValueError is raised.
    """
    delta = Fraction(delta)
    if epsilon is None:
        epsilon = Fraction(1, 2 * p * delta.denominator) if p > 0 else Fraction(1)
    if n0 > g.n:
        raise ValueError("n0 exceeds the vertex count")
    base = graph_phi(g, delta)
    candidates = [
        h
        for h in _minor_closure(g, g.n - n0, n0)
        if graph_phi(h, delta) >= base + 2 * epsilon * (g.n - h.n)
    ]
    best = min(
        candidates,
        key=lambda h: (h.n, -graph_phi(h, delta), canonical_form(h)),
    )
    if is_pruned(best, p, delta) and graph_phi(best, delta) >= base:
        return PruneResult(best, "P1", epsilon)
    if best.n > 0 and Fraction(best.m, best.n) >= delta + epsilon:
        return PruneResult(best, "P2", epsilon)
    raise ValueError("graph too small for the pruning guarantee")


# -- factorial subset sums -------------------------------------------------


def subset_sum_factorial(c: Sequence[int], p: int) -> frozenset[int]:
    """Indices I with sum of c[i] over I equal to p!.

    Mirrors the pigeonhole argument: with at least p * p! entries from
    {1, ..., p}, some value v occurs at least p! times; p!/v of those
    indices sum to p!.  Indices are 0-based positions in ``c``.
    """
    fact = math.factorial(p)
    if p < 1:
        raise ValueError("p must be positive")
    if len(c) < p * fact:
        raise ValueError(f"need at least {p * fact} entries")
    if any(not 1 <= x <= p for x in c):
        raise ValueError("entries must lie in 1..p")
    positions: dict[int, list[int]] = {}
    for i, x in enumerate(c):
        positions.setdefault(x, []).append(i)
        if len(positions[x]) == fact:
            need = fact // x
            return frozenset(positions[x][:need])
    raise AssertionError("pigeonhole failed")  # unreachable by counting
