"""The q-patch monoid: boundaried graphs, the gluing product and its powers,
the boundary-adjusted edge count e(H), the weight function, classification,
the minor and topological-minor orders, and exact limiting power density."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .canon import canonical_form
from .connectivity import find_disjoint_paths, patch_linkage_specs
from .errors import CapExceeded
from .graphs import Graph
from .minors import (
    Embedding,
    Model,
    find_minor_model,
    find_topo_embedding,
)


@dataclass(frozen=True)
class Patch:
    """A graph with two injective boundary maps of common arity q.

    ``a`` lists the left boundary vertices, ``b`` the right; the same vertex
    may appear on both sides (and in the identity patch it always does).
    """

    graph: Graph
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        object.__setattr__(self, "b", tuple(self.b))
        if len(self.a) != len(self.b):
            raise ValueError("boundary maps have different arity")
        for name, side in (("a", self.a), ("b", self.b)):
            if len(set(side)) != len(side):
                raise ValueError(f"boundary map {name} is not injective")
            if any(not 0 <= v < self.graph.n for v in side):
                raise ValueError(f"boundary map {name} leaves the vertex set")

    @property
    def q(self) -> int:
        return len(self.a)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def left_boundary(self) -> frozenset[int]:
        return frozenset(self.a)

    @property
    def right_boundary(self) -> frozenset[int]:
        return frozenset(self.b)

    @property
    def boundary(self) -> frozenset[int]:
        return self.left_boundary | self.right_boundary

    @property
    def interior(self) -> frozenset[int]:
        return frozenset(range(self.n)) - self.boundary

    # -- serialization ---------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {
                "q": self.q,
                "n": self.n,
                "edges": self.graph.sorted_edges(),
                "a": list(self.a),
                "b": list(self.b),
            }
        )

    @staticmethod
    def from_json(text: str) -> "Patch":
        obj = json.loads(text)
        g = Graph(int(obj["n"]), frozenset((int(u), int(v)) for u, v in obj["edges"]))
        a = tuple(int(v) for v in obj["a"])
        b = tuple(int(v) for v in obj["b"])
        if len(a) != int(obj["q"]) or len(b) != int(obj["q"]):
            raise ValueError("q does not match the boundary maps")
        return Patch(g, a, b)


@dataclass(frozen=True)
class PatchClass:
    """Classification flags; refined means linked and non-degenerate."""

    degenerate: bool
    linked: bool
    refined: bool
    fan: bool


def identity_patch(q: int) -> Patch:
    """q isolated vertices with a(i) = b(i) = i; the product identity."""
    if q < 0:
        raise ValueError("q must be non-negative")
    ident = tuple(range(q))
    return Patch(Graph(q), ident, ident)


def graph_as_patch(g: Graph) -> Patch:
    """View a plain graph as the 0-patch with empty boundaries."""
    return Patch(g, (), ())


def patch_product(h1: Patch, h2: Patch) -> Patch:
    """Glue b of ``h1`` to a of ``h2`` index by index.

    The first factor keeps its vertex labels; the second factor's remaining
    vertices get fresh labels in ascending original order, so powers are
    reproducible.  The vertex count of the result is |V1| + |V2| - q.
    """
    if h1.q != h2.q:
        raise ValueError(f"arity mismatch: {h1.q} vs {h2.q}")
    glue = {h2.a[i]: h1.b[i] for i in range(h1.q)}
    relabel: dict[int, int] = dict(glue)
    nxt = h1.n
    for v in range(h2.n):
        if v not in relabel:
            relabel[v] = nxt
            nxt += 1
    edges = set(h1.graph.edges)
    for u, v in h2.graph.edges:
        x, y = relabel[u], relabel[v]
        edges.add((x, y) if x < y else (y, x))
    g = Graph(nxt, frozenset(edges))
    return Patch(g, h1.a, tuple(relabel[v] for v in h2.b))


def patch_power(h: Patch, n: int) -> Patch:
    """Left-associated n-fold product of ``h`` with itself."""
    if n < 1:
        raise ValueError("power exponent must be positive")
    out = h
    for _ in range(n - 1):
        out = patch_product(out, h)
    return out


def e_value(h: Patch) -> int:
    """|E(H)| minus the number of edges induced by the left boundary."""
    left = h.left_boundary
    induced = sum(1 for u, v in h.graph.edges if u in left and v in left)
    return h.m - induced


def phi(h: Patch, delta: Fraction) -> tuple[Fraction, str]:
    """The weight e(H) - delta * (|V| - q) with its sign tag.

    Returns (value, tag) where tag is "heavy", "balanced" or "light" for
    positive, zero or negative weight.
    """
    delta = Fraction(delta)
    value = e_value(h) - delta * (h.n - h.q)
    tag = "heavy" if value > 0 else ("light" if value < 0 else "balanced")
    return value, tag


def is_linked(h: Patch) -> bool:
    """Whether vertex-disjoint a(i)-b(i) paths exist for all i at once."""
    specs = patch_linkage_specs(list(zip(h.a, h.b)))
    return find_disjoint_paths(h.graph, specs) is not None


def is_fan_patch(h: Patch) -> bool:
    """Equal boundaries, connected non-empty interior, and every boundary
    vertex adjacent to the interior."""
    if h.a != h.b:
        return False
    interior = h.interior
    if not interior or not h.graph.is_connected_subset(interior):
        return False
    for v in h.boundary:
        if not any(w in interior for w in h.graph.neighbors(v)):
            return False
    return True


def classify(h: Patch) -> PatchClass:
    degenerate = h.n == h.q
    linked = is_linked(h)
    return PatchClass(
        degenerate=degenerate,
        linked=linked,
        refined=linked and not degenerate,
        fan=is_fan_patch(h),
    )


def patch_minor(h: Patch, g: Patch) -> Optional[Model]:
    """A minor model of ``h`` in ``g`` whose branch sets absorb the matching
    boundary vertices: a_g(i) lands in the branch set of a_h(i) and likewise
    on the right.  None when no such model exists (search is complete)."""
    if h.q != g.q:
        raise ValueError(f"arity mismatch: {h.q} vs {g.q}")
    required: dict[int, set[int]] = {}
    for i in range(h.q):
        required.setdefault(h.a[i], set()).add(g.a[i])
        required.setdefault(h.b[i], set()).add(g.b[i])
    return find_minor_model(
        g.graph, h.graph, {v: frozenset(r) for v, r in required.items()}
    )


def patch_topo_minor(h: Patch, g: Patch) -> Optional[Embedding]:
    """A subdivision embedding of ``h`` in ``g`` with boundary vertices
    anchored exactly: a_h(i) maps onto a_g(i), b_h(i) onto b_g(i)."""
    if h.q != g.q:
        raise ValueError(f"arity mismatch: {h.q} vs {g.q}")
    fixed: dict[int, int] = {}
    for i in range(h.q):
        for pv, gv in ((h.a[i], g.a[i]), (h.b[i], g.b[i])):
            if fixed.setdefault(pv, gv) != gv:
                return None
    return find_topo_embedding(g.graph, h.graph, fixed)


DENSITY_HORIZON = 64


def power_density_limit(h: Patch, horizon: int = DENSITY_HORIZON) -> Fraction:
    """Exact limit of |E(H^n)| / |V(H^n)| as n grows.

    |E(H^n)| is eventually linear in n with slope delta; the limit is then
    delta / (|V(H)| - q) since each product adds |V(H)| - q vertices.  The
    slope is certified by two consecutive equal increments together with
    stabilization of the edge pattern induced on the right boundary (under
    the boundary indexing), which is the interface all later gluings see.
    """
    if h.n == h.q:
        raise ValueError("degenerate patch has no power density limit")

    def right_pattern(p: Patch) -> frozenset[tuple[int, int]]:
        pos = {v: i for i, v in enumerate(p.b)}
        return frozenset(
            (min(pos[u], pos[v]), max(pos[u], pos[v]))
            for u, v in p.graph.edges
            if u in pos and v in pos
        )

    power = h
    prev_m = h.m
    prev_delta: int | None = None
    prev_pattern = right_pattern(h)
    for _ in range(1, horizon):
        power = patch_product(power, h)
        delta = power.m - prev_m
        pattern = right_pattern(power)
        if delta == prev_delta and pattern == prev_pattern:
            return Fraction(delta, h.n - h.q)
        prev_m, prev_delta, prev_pattern = power.m, delta, pattern
    raise CapExceeded("density_horizon", horizon, horizon + 1)


def z_extension(t: Graph, z: int) -> Patch:
    """The refined patch grown from a tree on the boundary.

    ``t`` is a tree on vertices 0..q-1; vertices 0..z-1 each receive a
    pendant twin i+q with a(i) = i and b(i) = i+q, while the remaining tree
    vertices (which must be leaves of ``t``) keep a(i) = b(i) = i.
    """
    q = t.n
    if not t.is_tree():
        raise ValueError("boundary graph must be a tree")
    if not 1 <= z <= q:
        raise ValueError("z must satisfy 1 <= z <= q")
    for v in range(z, q):
        if t.degree(v) != 1:
            raise ValueError(f"vertex {v} outside the extended set is not a leaf")
    edges = set(t.edges) | {(i, i + q) for i in range(z)}
    g = Graph(q + z, frozenset(edges))
    a = tuple(range(q))
    b = tuple(i + q if i < z else i for i in range(q))
    return Patch(g, a, b)


def patch_canonical_form(h: Patch) -> bytes:
    """Byte string equal for two patches iff a boundary-respecting
    isomorphism exists (same q, a and b indices preserved)."""
    apos = {v: i for i, v in enumerate(h.a)}
    bpos = {v: i for i, v in enumerate(h.b)}
    colors = [(apos.get(v, -1), bpos.get(v, -1)) for v in range(h.n)]
    return canonical_form(h.graph, colors)


def patch_isomorphic(h1: Patch, h2: Patch) -> bool:
    if h1.q != h2.q or h1.n != h2.n or h1.m != h2.m:
        return False
    return patch_canonical_form(h1) == patch_canonical_form(h2)
