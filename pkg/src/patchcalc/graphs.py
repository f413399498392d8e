"""Finite simple graphs on vertex set 0..n-1 and the standard generators."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise ValueError(f"loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph. Vertices are 0..n-1, edges are sorted pairs."""

    n: int
    edges: frozenset[tuple[int, int]] = frozenset()
    _adj: tuple[int, ...] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative vertex count")
        edges = frozenset(_norm_edge(u, v) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        adj = [0] * self.n
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        object.__setattr__(self, "_adj", tuple(adj))

    # -- basic accessors -------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def adj_mask(self, v: int) -> int:
        return self._adj[v]

    def neighbors(self, v: int) -> list[int]:
        return _bits(self._adj[v])

    def degree(self, v: int) -> int:
        return self._adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    # -- derived graphs --------------------------------------------------

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self.n, self.edges | {_norm_edge(u, v) for u, v in extra})

    def without_edges(self, gone: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self.n, self.edges - {_norm_edge(u, v) for u, v in gone})

    def induced(self, keep: Iterable[int]) -> "Graph":
        """Induced subgraph on ``keep``, relabeled to 0..k-1 in sorted order."""
        order = sorted(set(keep))
        pos = {v: i for i, v in enumerate(order)}
        edges = {(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos}
        return Graph(len(order), frozenset(edges))

    def delete_vertex(self, v: int) -> "Graph":
        return self.induced(set(range(self.n)) - {v})

    def contract_edge(self, u: int, v: int) -> "Graph":
        """Contract edge uv into u (simple result), then compact labels."""
        if not self.has_edge(u, v):
            raise ValueError(f"({u},{v}) is not an edge")
        edges = set()
        for a, b in self.edges:
            a2 = u if a == v else a
            b2 = u if b == v else b
            if a2 != b2:
                edges.add(_norm_edge(a2, b2))
        return Graph(self.n, frozenset(edges)).delete_vertex(v)

    def relabel(self, perm: dict[int, int] | list[int]) -> "Graph":
        """Apply vertex bijection old -> new."""
        if isinstance(perm, list):
            perm = dict(enumerate(perm))
        edges = {_norm_edge(perm[u], perm[v]) for u, v in self.edges}
        return Graph(self.n, frozenset(edges))

    def complement_edges(self) -> list[tuple[int, int]]:
        return [
            (u, v)
            for u in range(self.n)
            for v in range(u + 1, self.n)
            if (u, v) not in self.edges
        ]

    # -- connectivity ----------------------------------------------------

    def component_mask(self, start: int, allowed: int | None = None) -> int:
        """Bitmask of the component of ``start`` within ``allowed`` vertices."""
        if allowed is None:
            allowed = (1 << self.n) - 1
        if not (allowed >> start) & 1:
            raise ValueError("start not in allowed set")
        seen = 1 << start
        frontier = seen
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= self._adj[v] & allowed & ~seen
            seen |= nxt
            frontier = nxt
        return seen

    def components(self) -> list[frozenset[int]]:
        out = []
        left = (1 << self.n) - 1
        while left:
            v = (left & -left).bit_length() - 1
            comp = self.component_mask(v, left)
            out.append(frozenset(_bits(comp)))
            left &= ~comp
        return out

    def is_connected_subset(self, vs: Iterable[int]) -> bool:
        vs = set(vs)
        if not vs:
            return False
        mask = sum(1 << v for v in vs)
        return self.component_mask(min(vs), mask) == mask

    def is_connected(self) -> bool:
        return self.n == 0 or self.is_connected_subset(range(self.n))

    def is_tree(self) -> bool:
        return self.n > 0 and self.m == self.n - 1 and self.is_connected()

    # -- serialization ---------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "edges": self.sorted_edges()})

    @staticmethod
    def from_json(text: str) -> "Graph":
        obj = json.loads(text)
        return Graph(int(obj["n"]), frozenset((int(u), int(v)) for u, v in obj["edges"]))


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def bits(mask: int) -> list[int]:
    """Indices of set bits, ascending."""
    return _bits(mask)


def mask_of(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


# -- generators ------------------------------------------------------------


def _require_positive(name: str, value: int) -> None:
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")


def complete(t: int) -> Graph:
    _require_positive("t", t)
    return Graph(t, frozenset((u, v) for u in range(t) for v in range(u + 1, t)))


def complete_bipartite(s: int, t: int) -> Graph:
    _require_positive("s", s)
    _require_positive("t", t)
    return Graph(s + t, frozenset((u, s + v) for u in range(s) for v in range(t)))


def path(n: int) -> Graph:
    _require_positive("n", n)
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"cycle needs at least 3 vertices, got {n}")
    return Graph(n, frozenset((i, (i + 1) % n) for i in range(n)))


def grid(n: int, s: int) -> Graph:
    """Cartesian product of a path on s vertices and a path on n vertices.

    Vertex (x, y) with x in 0..n-1, y in 0..s-1 is numbered x*s + y.
    """
    _require_positive("n", n)
    _require_positive("s", s)
    edges = set()
    for x in range(n):
        for y in range(s):
            if y + 1 < s:
                edges.add((x * s + y, x * s + y + 1))
            if x + 1 < n:
                edges.add((x * s + y, (x + 1) * s + y))
    return Graph(n * s, frozenset(edges))


def robertson_chain(k: int) -> Graph:
    """k triangles glued linearly along one-vertex cutsets.

    A path 0..k plus, for each path edge (i, i+1), a degree-two vertex
    adjacent to both of its ends.
    """
    _require_positive("k", k)
    edges = set()
    for i in range(k):
        v = k + 1 + i
        edges.add((i, i + 1))
        edges.add((i, v))
        edges.add((i + 1, v))
    return Graph(2 * k + 1, frozenset(edges))


def fan(t: int) -> Graph:
    """Path on t-1 vertices plus an apex adjacent to the whole path."""
    if t < 2:
        raise ValueError(f"fan needs at least 2 vertices, got {t}")
    edges = {(i, i + 1) for i in range(t - 2)}
    edges |= {(i, t - 1) for i in range(t - 1)}
    return Graph(t, frozenset(edges))


_GENERATORS = {
    "complete": complete,
    "complete_bipartite": complete_bipartite,
    "grid": grid,
    "path": path,
    "cycle": cycle,
    "robertson_chain": robertson_chain,
    "fan": fan,
}


def generate(kind: str, *params: int) -> Graph:
    """Dispatch by family name; see ``_GENERATORS`` for the accepted kinds."""
    try:
        gen = _GENERATORS[kind]
    except KeyError:
        raise ValueError(f"unknown graph family {kind!r}") from None
    return gen(*params)


def disjoint_union(g: Graph, h: Graph) -> Graph:
    edges = set(g.edges) | {(u + g.n, v + g.n) for u, v in h.edges}
    return Graph(g.n + h.n, frozenset(edges))


def all_paths_between(g: Graph, s: int, t: int, forbidden: int = 0) -> Iterator[list[int]]:
    """All simple s-t paths avoiding ``forbidden`` vertices (bitmask), DFS order."""
    if (forbidden >> s) & 1 or (forbidden >> t) & 1:
        return
    stack = [(s, [s], (1 << s) | forbidden)]
    while stack:
        v, p, used = stack.pop()
        if v == t:
            yield p
            continue
        for w in reversed(g.neighbors(v)):
            if not (used >> w) & 1:
                stack.append((w, p + [w], used | (1 << w)))
