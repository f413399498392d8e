"""Vertex connectivity between vertex sets: Menger via vertex-capacitated
augmenting paths, plus complete prescribed-ends disjoint-path search."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graphs import Graph, bits, mask_of


@dataclass(frozen=True)
class Separation:
    """(A, B) with A ∪ B = V and no edge between A−B and B−A."""

    A: frozenset[int]
    B: frozenset[int]

    @property
    def order(self) -> int:
        return len(self.A & self.B)


@dataclass(frozen=True)
class Linkage:
    """Pairwise vertex-disjoint paths."""

    paths: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.paths)


def validate_separation(g: Graph, sep: Separation) -> list[str]:
    out = []
    if sep.A | sep.B != set(range(g.n)):
        out.append("A ∪ B is not the whole vertex set")
    a_only = sep.A - sep.B
    b_only = sep.B - sep.A
    for u, v in g.edges:
        if (u in a_only and v in b_only) or (v in a_only and u in b_only):
            out.append(f"edge ({u},{v}) crosses the separation")
    return out


def validate_linkage(g: Graph, linkage: Linkage) -> list[str]:
    out = []
    seen: set[int] = set()
    for p in linkage.paths:
        if not p:
            out.append("empty path")
            continue
        if len(set(p)) != len(p):
            out.append("path repeats a vertex")
        if any(not g.has_edge(a, b) for a, b in zip(p, p[1:])):
            out.append("path uses a non-edge")
        if seen & set(p):
            out.append("paths are not vertex-disjoint")
        seen |= set(p)
    return out


def max_linkage(
    g: Graph, X: Iterable[int], Y: Iterable[int]
) -> tuple[int, Linkage, Separation]:
    """kappa(X, Y): a maximum (X,Y)-linkage and a minimum separation.

    Vertex capacities one, realized by vertex splitting; augmenting paths are
    found by BFS with smallest-vertex tie-break, so the result is
    deterministic.  Menger: the returned separation has order kappa.
    """
    X = sorted(set(X))
    Y = sorted(set(Y))
    n = g.n
    if any(not 0 <= v < n for v in X + Y):
        raise ValueError("X or Y leaves the graph")
    # node ids: 2v = v_in, 2v+1 = v_out, source = 2n, sink = 2n+1
    S, T = 2 * n, 2 * n + 1
    inf = n + 1
    cap: dict[tuple[int, int], int] = {}
    adj: dict[int, list[int]] = {i: [] for i in range(2 * n + 2)}

    def add_arc(a: int, b: int, c: int) -> None:
        if (a, b) not in cap:
            cap[(a, b)] = 0
            cap[(b, a)] = cap.get((b, a), 0)
            adj[a].append(b)
            adj[b].append(a)
        cap[(a, b)] += c

    for v in range(n):
        add_arc(2 * v, 2 * v + 1, 1)
    for u, v in g.sorted_edges():
        add_arc(2 * u + 1, 2 * v, inf)
        add_arc(2 * v + 1, 2 * u, inf)
    for x in X:
        add_arc(S, 2 * x, 1)
    for y in Y:
        add_arc(2 * y + 1, T, 1)
    for node in adj:
        adj[node].sort()

    flow: dict[tuple[int, int], int] = {k: 0 for k in cap}

    def bfs_augment() -> bool:
        prev: dict[int, int] = {S: S}
        q = deque([S])
        while q:
            a = q.popleft()
            if a == T:
                break
            for b in adj[a]:
                if b not in prev and cap[(a, b)] - flow[(a, b)] > 0:
                    prev[b] = a
                    q.append(b)
        if T not in prev:
            return False
        b = T
        while b != S:
            a = prev[b]
            flow[(a, b)] += 1
            flow[(b, a)] -= 1
            b = a
        return True

    k = 0
    while bfs_augment():
        k += 1

    # decompose into host paths
    fl = {e: f for e, f in flow.items() if f > 0}
    paths = []
    for x in X:
        if fl.get((S, 2 * x), 0) <= 0:
            continue
        fl[(S, 2 * x)] -= 1
        node = 2 * x
        p = []
        while node != T:
            if node % 2 == 0:
                p.append(node // 2)
            nxt = None
            for b in adj[node]:
                if fl.get((node, b), 0) > 0:
                    nxt = b
                    break
            assert nxt is not None, "flow decomposition failed"
            fl[(node, nxt)] -= 1
            node = nxt
        paths.append(tuple(p))
    assert len(paths) == k

    # residual reachability for the Menger certificate
    reach: set[int] = set()
    q = deque([S])
    reach.add(S)
    while q:
        a = q.popleft()
        for b in adj[a]:
            if b not in reach and cap[(a, b)] - flow[(a, b)] > 0:
                reach.add(b)
                q.append(b)
    A = {v for v in range(n) if 2 * v in reach}
    cut = {v for v in A if 2 * v + 1 not in reach}
    B = (set(range(n)) - A) | cut
    A |= set(X)
    sep = Separation(frozenset(A), frozenset(B))
    return k, Linkage(tuple(paths)), sep


def kappa(g: Graph, X: Iterable[int], Y: Iterable[int]) -> int:
    return max_linkage(g, X, Y)[0]


def separates(g: Graph, Y: Iterable[int], X: Iterable[int], Z: Iterable[int]) -> bool:
    """True iff no (X,Z)-path survives deleting Y; X, Y, Z pairwise disjoint."""
    X, Y, Z = set(X), set(Y), set(Z)
    if X & Y or X & Z or Y & Z:
        raise ValueError("X, Y, Z must be pairwise disjoint")
    if not X or not Z:
        return True
    allowed = mask_of(set(range(g.n)) - Y)
    for x in X:
        comp = g.component_mask(x, allowed)
        if comp & mask_of(Z):
            return False
    return True


def min_separation_bruteforce(
    g: Graph, X: Iterable[int], Y: Iterable[int]
) -> int:
    """Minimum order over all separations (A,B) with X ⊆ A, Y ⊆ B.

    Independent oracle for Menger duality: enumerates every A ⊇ X whose
    complement-closure yields a valid separation.
    """
    X, Y = set(X), set(Y)
    n = g.n
    best = n
    rest = sorted(set(range(n)) - X)
    # A ranges over all supersets of X; B forced to V − (A − boundary(A)).
    for mask in range(1 << len(rest)):
        A = set(X) | {rest[i] for i in range(len(rest)) if (mask >> i) & 1}
        boundary = {u for u in A if any(w not in A for w in g.neighbors(u))}
        # moving extra A-vertices into B never creates a crossing edge, so
        # forcing in Y ∩ A keeps the separation valid and minimal for this A
        B = (set(range(n)) - A) | boundary | (Y & A)
        if not Y <= B:
            continue
        order = len(A & B)
        if order < best:
            best = order
    return best


@dataclass(frozen=True)
class PathSpec:
    """One path request: fixed start, admissible end set, vertices its
    interior must avoid (endpoints may touch them)."""

    start: int
    targets: frozenset[int]
    interior_forbidden: frozenset[int] = frozenset()


def find_disjoint_paths(g: Graph, specs: Sequence[PathSpec]) -> Linkage | None:
    """Pairwise vertex-disjoint paths satisfying the specs, or None.

    Complete backtracking search with a reachability prune; deterministic
    (specs in order, neighbors ascending).  A spec whose start lies in its
    target set is satisfied by the one-vertex path.
    """
    n = g.n
    full = (1 << n) - 1

    def reachable_ok(used: int, idx: int) -> bool:
        for spec in specs[idx:]:
            if (used >> spec.start) & 1:
                return False
            free = full & ~used
            comp = g.component_mask(spec.start, free | (1 << spec.start))
            if not comp & mask_of(spec.targets):
                return False
        return True

    result: list[tuple[int, ...]] = []

    def route(idx: int, used: int) -> bool:
        if idx == len(specs):
            return True
        spec = specs[idx]
        if (used >> spec.start) & 1:
            return False
        tmask = mask_of(spec.targets) & ~used
        if not tmask:
            return False
        forb = mask_of(spec.interior_forbidden)

        def dfs(v: int, path: list[int], seen: int) -> bool:
            if (tmask >> v) & 1:
                result.append(tuple(path))
                if reachable_ok(used | seen, idx + 1) and route(idx + 1, used | seen):
                    return True
                result.pop()
            # the interior constraint exempts the two ends: the start, and
            # any target vertex at which the path stops (handled above)
            if (forb >> v) & 1 and v != spec.start:
                return False
            for w in g.neighbors(v):
                if (seen >> w) & 1 or (used >> w) & 1:
                    continue
                # prune: the target must stay reachable through free vertices
                blocked = used | seen
                free = (full & ~blocked) | (1 << w)
                if not g.component_mask(w, free) & tmask & ~blocked:
                    continue
                path.append(w)
                if dfs(w, path, seen | (1 << w)):
                    return True
                path.pop()
            return False

        return dfs(spec.start, [spec.start], 1 << spec.start)

    if not reachable_ok(0, 0):
        return None
    if route(0, 0):
        return Linkage(tuple(result))
    return None


def patch_linkage_specs(
    pairs: Sequence[tuple[int, int]]
) -> list[PathSpec]:
    """Specs for the prescribed-ends linkage a(i) -> b(i)."""
    return [PathSpec(a, frozenset({b})) for a, b in pairs]
