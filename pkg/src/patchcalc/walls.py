"""Wall graphs drawn on the integer grid, their boundary anatomy (outer
cycle, sides, corners, pegs), subwalls, embeddings into host graphs, the
compass of a cycle, cross detection, cycle filters, and diamond patches."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence

from .connectivity import PathSpec, find_disjoint_paths, separates
from .errors import CapExceeded
from .graphs import Graph, bits, mask_of
from .minors import Embedding, validate_embedding
from .patches import Patch
from .patchwork import validate_embedded_patch


# -- the infinite hexagonal grid pattern ----------------------------------


def _wall_edge(p: tuple[int, int], q: tuple[int, int]) -> bool:
    """Adjacency rule of the ambient infinite wall on Z x Z."""
    (x1, y1), (x2, y2) = p, q
    if y1 == y2 and abs(x1 - x2) == 1:
        return True
    if x1 == x2 and abs(y1 - y2) == 1:
        return x1 % 2 == max(y1, y2) % 2
    return False


@dataclass(frozen=True)
class Wall:
    """An (l, h)-wall with its grid drawing and boundary anatomy.

    Vertices are indexed 0..n-1; ``coords[v]`` is the grid point of v.  The
    vertex set is the grid rectangle [x0+1, x0+2l] x [y0+1, y0+h] with the
    two degree-one corners removed.
    """

    l: int
    h: int
    x0: int
    y0: int
    graph: Graph
    coords: tuple[tuple[int, int], ...]
    outer_cycle: tuple[int, ...]
    bottom: tuple[int, ...]
    top: tuple[int, ...]
    left: tuple[int, ...]
    right: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def index(self) -> dict[tuple[int, int], int]:
        return {c: v for v, c in enumerate(self.coords)}

    # corners: ends of the bottom and top paths, smaller x first
    @property
    def corner_bl(self) -> int:
        return self.bottom[0]

    @property
    def corner_br(self) -> int:
        return self.bottom[-1]

    @property
    def corner_tl(self) -> int:
        return self.top[0]

    @property
    def corner_tr(self) -> int:
        return self.top[-1]

    @property
    def pegs_left(self) -> tuple[int, ...]:
        """Interior vertices of the left side path having degree two."""
        return tuple(
            v for v in self.left[1:-1] if self.graph.degree(v) == 2
        )

    @property
    def pegs_right(self) -> tuple[int, ...]:
        return tuple(
            v for v in self.right[1:-1] if self.graph.degree(v) == 2
        )


def _outer_face(coords: Sequence[tuple[int, int]], g: Graph) -> tuple[int, ...]:
    """The outer face walk of a 2-connected straight-line plane graph.

    Uses the rotation system induced by the drawing; the outer face is the
    one of maximum enclosed area.  Each vertex appears once since the graph
    is 2-connected.
    """
    rotation: dict[int, list[int]] = {}
    for v in range(g.n):
        x, y = coords[v]
        nbrs = sorted(
            g.neighbors(v),
            key=lambda w: math.atan2(coords[w][1] - y, coords[w][0] - x),
        )
        rotation[v] = nbrs

    def next_edge(u: int, v: int) -> tuple[int, int]:
        rot = rotation[v]
        i = rot.index(u)
        return v, rot[(i - 1) % len(rot)]

    visited: set[tuple[int, int]] = set()
    best_walk: list[int] = []
    best_area = -1.0
    for start_u in range(g.n):
        for start_v in g.neighbors(start_u):
            if (start_u, start_v) in visited:
                continue
            walk = []
            u, v = start_u, start_v
            while (u, v) not in visited:
                visited.add((u, v))
                walk.append(u)
                u, v = next_edge(u, v)
            area = 0.0
            for a, b in zip(walk, walk[1:] + walk[:1]):
                (x1, y1), (x2, y2) = coords[a], coords[b]
                area += x1 * y2 - x2 * y1
            if abs(area) / 2 > best_area:
                best_area = abs(area) / 2
                best_walk = walk
    return tuple(best_walk)


def _side_path(
    cycle: tuple[int, ...], end1: int, end2: int, avoid: set[int]
) -> tuple[int, ...]:
    """The arc of the cycle between the two ends internally avoiding a set."""
    k = len(cycle)
    i = cycle.index(end1)
    for step in (1, -1):
        path = [end1]
        j = i
        while True:
            j = (j + step) % k
            path.append(cycle[j])
            if cycle[j] == end2:
                break
        if not (set(path[1:-1]) & avoid):
            return tuple(path)
    raise ValueError("no side path avoids the other sides")


def build_wall(l: int, h: int, x0: int = 0, y0: int = 0) -> Wall:
    """The (l, h)-wall: the ambient pattern induced on the rectangle
    [x0+1, x0+2l] x [y0+1, y0+h] with degree-one vertices removed.

    Requires l >= 2 and h >= 2; smaller parameters leave no cycle after the
    degree-one cleanup, so there is no wall to return.
    """
    if l < 2 or h < 2:
        raise ValueError("wall parameters must satisfy l >= 2 and h >= 2")
    pts = [
        (x, y)
        for x in range(x0 + 1, x0 + 2 * l + 1)
        for y in range(y0 + 1, y0 + h + 1)
    ]
    pset = set(pts)
    degree = {
        p: sum(1 for q in pset if _wall_edge(p, q) and q != p) for p in pts
    }
    # the ambient rule gives each rectangle point degree <= 3; the cleanup
    # needs one pass because neighbors of degree-one points have degree >= 2
    kept = sorted(p for p in pts if degree[p] > 1)
    coords = tuple(kept)
    idx = {p: i for i, p in enumerate(coords)}
    edges = frozenset(
        (idx[p], idx[q]) for p, q in combinations(kept, 2) if _wall_edge(p, q)
    )
    g = Graph(len(kept), edges)
    assert all(g.degree(v) >= 2 for v in range(g.n))
    cyc = _outer_face(coords, g)

    bottom_row = sorted(
        (v for v in cyc if coords[v][1] == y0 + 1), key=lambda v: coords[v][0]
    )
    top_row = sorted(
        (v for v in cyc if coords[v][1] == y0 + h), key=lambda v: coords[v][0]
    )
    bottom, top = tuple(bottom_row), tuple(top_row)
    avoid = set(bottom[1:-1]) | set(top[1:-1])
    left = _side_path(cyc, bottom[0], top[0], avoid | {bottom[-1], top[-1]})
    right = _side_path(cyc, bottom[-1], top[-1], avoid | {bottom[0], top[0]})
    return Wall(l, h, x0, y0, g, coords, cyc, bottom, top, left, right)


def subwall(w: Wall, l: int, h: int, x0: int, y0: int) -> Wall:
    """The wall on the stated parameters, verified to sit inside ``w``.

    Vertex containment is by grid coordinates; every edge of the result must
    be an edge of ``w``.
    """
    sub = build_wall(l, h, x0, y0)
    outer = w.index
    for p in sub.coords:
        if p not in outer:
            raise ValueError(f"subwall vertex {p} is not in the wall")
    for u, v in sub.graph.edges:
        if not w.graph.has_edge(outer[sub.coords[u]], outer[sub.coords[v]]):
            raise ValueError("subwall edge is not a wall edge")
    return sub


def is_proper_subwall(sub: Wall, w: Wall) -> bool:
    """Contained in ``w`` (coordinates and edges) and disjoint from its
    outer cycle."""
    outer = w.index
    try:
        for p in sub.coords:
            if p not in outer:
                return False
        for u, v in sub.graph.edges:
            if not w.graph.has_edge(outer[sub.coords[u]], outer[sub.coords[v]]):
                return False
    except KeyError:
        return False
    border = {w.coords[v] for v in w.outer_cycle}
    return not (set(sub.coords) & border)


def nested_subwalls(w: Wall) -> list[Wall]:
    """The standard nested family: step i shrinks the column range by two
    bricks on each side and the row range by one on each side."""
    out = []
    i = 1
    while w.l - 2 * i >= 2 and w.h - 2 * i >= 2:
        out.append(
            subwall(w, w.l - 2 * i, w.h - 2 * i, w.x0 + 2 * i, w.y0 + i)
        )
        i += 1
    return out


# -- wall embeddings -------------------------------------------------------


@dataclass(frozen=True)
class WallEmbedding:
    """A subdivision embedding of a wall in a host graph."""

    wall: Wall
    host: Graph
    emb: Embedding

    def side_image(self, side: tuple[int, ...]) -> frozenset[int]:
        """All host vertices on the image of a wall path."""
        out = {self.emb.vertex_map[v] for v in side}
        for u, v in zip(side, side[1:]):
            key = (u, v) if u < v else (v, u)
            out.update(self.emb.edge_paths[key])
        return frozenset(out)

    @property
    def bottom_image(self) -> frozenset[int]:
        return self.side_image(self.wall.bottom)

    @property
    def top_image(self) -> frozenset[int]:
        return self.side_image(self.wall.top)

    @property
    def left_image(self) -> frozenset[int]:
        return self.side_image(self.wall.left)

    @property
    def right_image(self) -> frozenset[int]:
        return self.side_image(self.wall.right)

    @property
    def boundary_image(self) -> frozenset[int]:
        return self.side_image(self.wall.outer_cycle + self.wall.outer_cycle[:1])

    @property
    def image_vertices(self) -> frozenset[int]:
        out = set(self.emb.vertex_map.values())
        for p in self.emb.edge_paths.values():
            out.update(p)
        return frozenset(out)

    @property
    def pegs_left(self) -> tuple[int, ...]:
        return tuple(self.emb.vertex_map[v] for v in self.wall.pegs_left)

    @property
    def pegs_right(self) -> tuple[int, ...]:
        return tuple(self.emb.vertex_map[v] for v in self.wall.pegs_right)


def validate_wall_embedding(we: WallEmbedding) -> list[str]:
    return validate_embedding(we.host, we.wall.graph, we.emb)


def identity_embedding(w: Wall, host: Graph | None = None) -> WallEmbedding:
    """The wall embedded in itself (or in a host containing it verbatim)."""
    host = host if host is not None else w.graph
    emb = Embedding(
        {v: v for v in range(w.n)},
        {(u, v): (u, v) for u, v in w.graph.edges},
    )
    we = WallEmbedding(w, host, emb)
    bad = validate_wall_embedding(we)
    if bad:
        raise ValueError("; ".join(bad))
    return we


def restrict_embedding(we: WallEmbedding, sub: Wall) -> WallEmbedding:
    """The embedding of a subwall obtained by forgetting the rest."""
    outer = we.wall.index
    vm = {}
    for v, p in enumerate(sub.coords):
        if p not in outer:
            raise ValueError(f"subwall vertex {p} is not in the wall")
        vm[v] = we.emb.vertex_map[outer[p]]
    ep = {}
    for u, v in sub.graph.edges:
        wu, wv = outer[sub.coords[u]], outer[sub.coords[v]]
        key = (wu, wv) if wu < wv else (wv, wu)
        path = we.emb.edge_paths[key]
        if (wu, wv) != key:
            path = tuple(reversed(path))
        if u > v:
            u, v, path = v, u, tuple(reversed(path))
        ep[(u, v)] = path
    out = WallEmbedding(sub, we.host, Embedding(vm, ep))
    bad = validate_wall_embedding(out)
    if bad:
        raise ValueError("; ".join(bad))
    return out


def _cycle_image(we: WallEmbedding, cyc: Sequence[int]) -> frozenset[int]:
    """Host vertices on the image of a wall cycle."""
    out = {we.emb.vertex_map[v] for v in cyc}
    for u, v in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
        key = (u, v) if u < v else (v, u)
        out.update(we.emb.edge_paths[key])
    return frozenset(out)


def _strictly_inside(
    point: tuple[int, int], polygon: Sequence[tuple[int, int]]
) -> bool:
    """Ray casting on a rectilinear integer polygon; boundary points are
    not inside (the caller excludes them)."""
    x, y = point
    inside = False
    k = len(polygon)
    for i in range(k):
        (x1, y1), (x2, y2) = polygon[i], polygon[(i + 1) % k]
        if (y1 > y) != (y2 > y):
            xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xc > x:
                inside = not inside
    return inside


def compass_vertices(we: WallEmbedding, cyc: Sequence[int]) -> frozenset[int]:
    """The compass of a wall cycle under the embedding, as host vertices.

    ``cyc`` lists wall vertices of a cycle in cyclic order.  The compass is
    the cycle image together with every host vertex that shares a component
    of host minus the image with the image of a wall vertex drawn strictly
    inside the cycle.
    """
    cyc = tuple(cyc)
    if len(cyc) < 3 or any(
        not we.wall.graph.has_edge(u, v)
        for u, v in zip(cyc, cyc[1:] + cyc[:1])
    ):
        raise ValueError("not a cycle of the wall")
    dimg = _cycle_image(we, cyc)
    polygon = [we.wall.coords[v] for v in cyc]
    on_cycle = set(cyc)
    inner = [
        v
        for v in range(we.wall.n)
        if v not in on_cycle and _strictly_inside(we.wall.coords[v], polygon)
    ]
    allowed = mask_of(set(range(we.host.n)) - dimg)
    inner_comps = 0
    for v in inner:
        hv = we.emb.vertex_map[v]
        if not (inner_comps >> hv) & 1:
            inner_comps |= we.host.component_mask(hv, allowed)
    return dimg | frozenset(bits(inner_comps))


def compass(we: WallEmbedding, cyc: Sequence[int]) -> Graph:
    """The compass as an induced host subgraph (host labels forgotten)."""
    return we.host.induced(sorted(compass_vertices(we, cyc)))


# -- crosses ---------------------------------------------------------------

CROSS_CAP = 64


def find_cross(we: WallEmbedding, cap: int = CROSS_CAP):
    """Two disjoint host paths joining the images of the two opposite corner
    pairs inside the compass of the outer cycle, or None.

    The search is complete, so None certifies the embedding is crossless.
    """
    comp = compass_vertices(we, we.wall.outer_cycle)
    if len(comp) > cap:
        raise CapExceeded("cross_search", cap, len(comp))
    verts = sorted(comp)
    pos = {v: i for i, v in enumerate(verts)}
    sub = we.host.induced(verts)
    vm = we.emb.vertex_map
    pairs = (
        (vm[we.wall.corner_bl], vm[we.wall.corner_tr]),
        (vm[we.wall.corner_tl], vm[we.wall.corner_br]),
    )
    specs = [PathSpec(pos[s], frozenset({pos[t]})) for s, t in pairs]
    linkage = find_disjoint_paths(sub, specs)
    if linkage is None:
        return None
    return tuple(tuple(verts[i] for i in p) for p in linkage.paths)


def is_crossless(we: WallEmbedding, cap: int = CROSS_CAP) -> bool:
    return find_cross(we, cap) is None


# -- filters ---------------------------------------------------------------


def is_filter(
    g: Graph,
    cycles: Sequence[Sequence[int]],
    X: Iterable[int],
    Z: Iterable[int],
) -> bool:
    """Whether the cycles are pairwise disjoint and each one separates X
    from Z in ``g``."""
    X, Z = set(X), set(Z)
    seen: set[int] = set()
    for cyc in cycles:
        cyc = tuple(cyc)
        if len(cyc) < 3 or len(set(cyc)) != len(cyc):
            raise ValueError("not a cycle")
        if any(not g.has_edge(u, v) for u, v in zip(cyc, cyc[1:] + cyc[:1])):
            raise ValueError("not a cycle")
        if seen & set(cyc):
            return False
        seen |= set(cyc)
    for cyc in cycles:
        Y = set(cyc)
        if (X & Y) or (Z & Y) or (X & Z):
            return False
        if not separates(g, Y, X, Z):
            return False
    return True


# -- diamond patches -------------------------------------------------------


def _connected_subsets_with(
    g: Graph, anchor: int, allowed: int, limit: int
):
    """All connected vertex sets containing the anchor inside ``allowed``,
    as masks, up to the size limit, smallest first."""
    start = 1 << anchor
    out = [start]
    frontier = [start]
    for _ in range(limit - 1):
        nxt = []
        seen = set()
        for mask in frontier:
            grow = 0
            for v in bits(mask):
                grow |= g.adj_mask(v)
            grow &= allowed & ~mask
            for w in bits(grow):
                m2 = mask | (1 << w)
                if m2 not in seen:
                    seen.add(m2)
                    nxt.append(m2)
        out.extend(sorted(seen))
        frontier = nxt
    return out


def is_diamond_patch(h: Patch) -> Optional[tuple[frozenset[int], ...]]:
    """A witness that the patch has the diamond shape, or None.

    Requirements: arity between one and three; connected underlying graph;
    a(i) = b(i) exactly for indices other than the first; and disjoint
    connected vertex sets S1, T1, S2, ..., Sq with a(i) in Si, b(1) in T1,
    an S1-T1 edge, and for each i >= 2 edges S1-Si and T1-Si.  The witness
    is (S1, T1, S2, ..., Sq).
    """
    q = h.q
    if not 1 <= q <= 3:
        return None
    if not h.graph.is_connected_subset(range(h.n)):
        return None
    if h.a[0] == h.b[0]:
        return None
    if any(h.a[i] != h.b[i] for i in range(1, q)):
        return None
    g = h.graph
    full = (1 << h.n) - 1

    def touches(m1: int, m2: int) -> bool:
        reach = 0
        for v in bits(m1):
            reach |= g.adj_mask(v)
        return bool(reach & m2)

    others = [h.a[i] for i in range(1, q)]
    for s1 in _connected_subsets_with(g, h.a[0], full & ~(1 << h.b[0]), h.n):
        rest1 = full & ~s1
        if any((s1 >> v) & 1 for v in others):
            continue
        for t1 in _connected_subsets_with(g, h.b[0], rest1, h.n):
            if any((t1 >> v) & 1 for v in others):
                continue
            if not touches(s1, t1):
                continue
            rest2 = rest1 & ~t1
            sets = [s1, t1]
            ok = True
            for v in others:
                # a one-vertex Si suffices whenever any Si works: edges to
                # S1 and T1 only get easier for supersets, so try it alone
                si = 1 << v
                if not (touches(s1, si) and touches(t1, si)):
                    grown = None
                    for cand in _connected_subsets_with(g, v, rest2, h.n):
                        if touches(s1, cand) and touches(t1, cand):
                            grown = cand
                            break
                    if grown is None:
                        ok = False
                        break
                    si = grown
                rest2 &= ~si
                sets.append(si)
            if ok:
                return tuple(frozenset(bits(m)) for m in sets)
    return None


def is_properly_set(
    we: WallEmbedding,
    h: Patch,
    placement: Sequence[int],
) -> bool:
    """Whether the diamond patch sits properly over the wall embedding.

    The placement maps patch vertices to host vertices.  Checks: the patch
    is embedded in the host under the placement; its vertices avoid the
    boundary image and lie in the compass; and a disjoint linkage exists
    taking a(1) to a left peg, b(1) to a right peg, a(2) to the bottom image
    and a(3) to the top image, with path interiors avoiding the bottom and
    top images.
    """
    placement = tuple(placement)
    if validate_embedded_patch(we.host, h, placement):
        return False
    comp = compass_vertices(we, we.wall.outer_cycle)
    boundary = we.boundary_image
    pverts = set(placement)
    if not pverts <= comp - boundary:
        return False
    bottom, top = we.bottom_image, we.top_image
    pegs_l, pegs_r = set(we.pegs_left), set(we.pegs_right)
    if not pegs_l or not pegs_r:
        return False
    avoid = frozenset(bottom | top)
    specs = [
        PathSpec(placement[h.a[0]], frozenset(pegs_l), avoid),
        PathSpec(placement[h.b[0]], frozenset(pegs_r), avoid),
    ]
    if h.q >= 2:
        specs.append(PathSpec(placement[h.a[1]], frozenset(bottom), avoid))
    if h.q >= 3:
        specs.append(PathSpec(placement[h.a[2]], frozenset(top), avoid))
    sub = we.host.induced(sorted(comp))
    pos = {v: i for i, v in enumerate(sorted(comp))}
    mapped = [
        PathSpec(
            pos[s.start],
            frozenset(pos[t] for t in s.targets if t in pos),
            frozenset(pos[t] for t in s.interior_forbidden if t in pos),
        )
        for s in specs
    ]
    if any(not s.targets for s in mapped):
        return False
    return find_disjoint_paths(sub, mapped) is not None


DIAMOND_SIZE_CAP = 4


def find_diamond_patch(
    we: WallEmbedding,
    max_size: int = 2,
    require_crossless: bool = True,
    cap: int = CROSS_CAP,
) -> Optional[tuple[Patch, tuple[int, ...]]]:
    """A properly set diamond patch over the embedding, or None.

    Exhausts connected host vertex sets of the compass (away from the
    boundary image) up to ``max_size`` with every admissible boundary
    assignment, in deterministic order; the patch graph is the induced host
    subgraph on the set.  Returns (patch, placement).
    """
    if max_size > DIAMOND_SIZE_CAP:
        raise CapExceeded("diamond_patch_size", DIAMOND_SIZE_CAP, max_size)
    if require_crossless and not is_crossless(we, cap):
        raise ValueError("the wall embedding has a cross")
    comp = compass_vertices(we, we.wall.outer_cycle)
    inner = sorted(comp - we.boundary_image)
    allowed = mask_of(inner)
    g = we.host
    seen: set[int] = set()
    masks: list[int] = []
    for v in inner:
        for m in _connected_subsets_with(g, v, allowed, max_size):
            if m not in seen:
                seen.add(m)
                masks.append(m)
    masks.sort(key=lambda m: (m.bit_count(), m))
    for m in masks:
        verts = sorted(bits(m))
        pos = {v: i for i, v in enumerate(verts)}
        hg = g.induced(verts)
        for q in range(1, min(3, len(verts)) + 1):
            for chosen in permutations(verts, q + 1):
                a0, b0, *rest = chosen
                a = (pos[a0],) + tuple(pos[v] for v in rest)
                b = (pos[b0],) + tuple(pos[v] for v in rest)
                patch = Patch(hg, a, b)
                if is_diamond_patch(patch) is None:
                    continue
                if is_properly_set(we, patch, verts):
                    return patch, tuple(verts)
    return None
