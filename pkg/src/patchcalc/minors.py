"""Exhaustive minor-model and subdivision-embedding search, desk scale.

Both searches are complete: absence of a returned witness certifies absence
of the containment, for any input size the caller is willing to wait for.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterator, Mapping

from .graphs import Graph, all_paths_between, bits, mask_of


@dataclass(frozen=True)
class Model:
    """Branch sets witnessing a minor: pattern vertex -> host vertex set."""

    branch_sets: Mapping[int, frozenset[int]]

    def branch_of(self, v: int) -> frozenset[int]:
        return self.branch_sets[v]


@dataclass(frozen=True)
class Embedding:
    """Subdivision embedding: injective vertex map plus internally disjoint
    edge paths, keyed by sorted pattern edge and oriented small-end first."""

    vertex_map: Mapping[int, int]
    edge_paths: Mapping[tuple[int, int], tuple[int, ...]]


def validate_model(
    host: Graph,
    pattern: Graph,
    model: Model,
    required: Mapping[int, frozenset[int]] | None = None,
) -> list[str]:
    """All Model invariant violations, empty if the model is valid."""
    out = []
    if set(model.branch_sets) != set(range(pattern.n)):
        out.append("branch sets do not cover the pattern vertex set")
        return out
    seen: set[int] = set()
    for v in range(pattern.n):
        bs = model.branch_sets[v]
        if not bs:
            out.append(f"branch set of {v} is empty")
            continue
        if not bs.isdisjoint(seen):
            out.append(f"branch set of {v} overlaps another branch set")
        seen |= bs
        if any(not 0 <= x < host.n for x in bs):
            out.append(f"branch set of {v} leaves the host")
            continue
        if not host.is_connected_subset(bs):
            out.append(f"branch set of {v} is not connected")
    for u, v in pattern.edges:
        bu, bv = model.branch_sets[u], model.branch_sets[v]
        if not any(host.has_edge(x, y) for x in bu for y in bv if x != y):
            out.append(f"pattern edge ({u},{v}) has no host edge between branch sets")
    if required:
        for v, req in required.items():
            if not req <= model.branch_sets[v]:
                out.append(f"branch set of {v} misses required vertices {sorted(req)}")
    return out


def validate_embedding(
    host: Graph,
    pattern: Graph,
    emb: Embedding,
    fixed: Mapping[int, int] | None = None,
) -> list[str]:
    out = []
    vm = emb.vertex_map
    if set(vm) != set(range(pattern.n)):
        out.append("vertex map does not cover the pattern vertex set")
        return out
    if len(set(vm.values())) != pattern.n:
        out.append("vertex map is not injective")
    mapped = set(vm.values())
    if set(emb.edge_paths) != set(pattern.edges):
        out.append("edge paths do not match the pattern edge set")
        return out
    interiors: set[int] = set()
    for (u, v), p in emb.edge_paths.items():
        if len(p) < 2 or p[0] != vm[u] or p[-1] != vm[v]:
            out.append(f"path for edge ({u},{v}) has wrong ends")
            continue
        if len(set(p)) != len(p):
            out.append(f"path for edge ({u},{v}) repeats a vertex")
        if any(not host.has_edge(a, b) for a, b in zip(p, p[1:])):
            out.append(f"path for edge ({u},{v}) uses a non-edge")
        inner = set(p[1:-1])
        if inner & mapped:
            out.append(f"path for edge ({u},{v}) passes through a mapped vertex")
        if inner & interiors:
            out.append(f"path for edge ({u},{v}) shares an interior vertex")
        interiors |= inner
    if fixed:
        for v, x in fixed.items():
            if vm.get(v) != x:
                out.append(f"pattern vertex {v} not anchored at host vertex {x}")
    return out


def _connected_sets(
    adj: tuple[int, ...], root: int, allowed: int, max_size: int,
    enforce_min: bool = True,
) -> Iterator[int]:
    """All connected subsets (bitmasks) S of ``allowed`` with root in S.

    Adjacency is given as per-vertex neighbor bitmasks.  With
    ``enforce_min`` only sets whose minimum allowed vertex is ``root`` are
    produced, so iterating roots in ascending order enumerates every
    connected subset exactly once.
    """
    if enforce_min:
        allowed &= ~((1 << root) - 1)

    def rec(cur: int, ext: int, forb: int) -> Iterator[int]:
        yield cur
        if cur.bit_count() >= max_size:
            return
        excluded = 0
        while ext:
            low = ext & -ext
            ext ^= low
            new_ext = (
                (ext | (adj[low.bit_length() - 1] & allowed))
                & ~cur & ~forb & ~excluded & ~low
            )
            yield from rec(cur | low, new_ext, forb | excluded)
            excluded |= low

    yield from rec(1 << root, adj[root] & allowed & ~(1 << root), 0)


def _size(mask: int) -> int:
    return mask.bit_count()


def find_minor_model(
    host: Graph,
    pattern: Graph,
    required: Mapping[int, frozenset[int]] | None = None,
) -> Model | None:
    """A model of ``pattern`` in ``host``, or None if no minor exists.

    ``required`` optionally forces host vertices into given branch sets
    (used for boundary-anchored patch minors).  Deterministic: pattern
    vertices are placed in descending degree, branch sets grown from the
    smallest admissible root.
    """
    if pattern.n == 0:
        return Model({})
    if host.n < pattern.n or host.m < pattern.m:
        return None
    required = {v: frozenset(r) for v, r in (required or {}).items()}
    for v, req in required.items():
        if any(not 0 <= x < host.n for x in req):
            raise ValueError(f"required vertices for {v} outside host")

    order = sorted(
        range(pattern.n),
        key=lambda v: (-len(required.get(v, ())), -pattern.degree(v), v),
    )
    full = (1 << host.n) - 1
    adj = tuple(host.adj_mask(v) for v in range(host.n))
    branch: dict[int, int] = {}
    # neighborhood mask of each placed branch set; a later set touches it
    # iff the two masks intersect
    nbhd: dict[int, int] = {}

    def candidates(pv: int, free: int, max_size: int) -> Iterator[int]:
        req = required.get(pv)
        if req:
            rmask = mask_of(req)
            if rmask & ~free:
                return
            root = min(req)
            for s in _connected_sets(adj, root, free, max_size, enforce_min=False):
                if s & rmask == rmask:
                    yield s
        else:
            for root in bits(free):
                yield from _connected_sets(adj, root, free, max_size)

    def place(k: int, free: int) -> bool:
        if k == len(order):
            return True
        pv = order[k]
        remaining_after = len(order) - k - 1
        max_size = _size(free) - remaining_after
        if max_size < 1:
            return False
        prior = [nbhd[u] for u in pattern.neighbors(pv) if u in branch]
        for s in candidates(pv, free, max_size):
            ok = True
            for nb in prior:
                if not nb & s:
                    ok = False
                    break
            if not ok:
                continue
            ns = 0
            rest = s
            while rest:
                low = rest & -rest
                rest ^= low
                ns |= adj[low.bit_length() - 1]
            branch[pv] = s
            nbhd[pv] = ns
            if place(k + 1, free & ~s):
                return True
            del branch[pv]
            del nbhd[pv]
        return False

    if place(0, full):
        return Model({v: frozenset(bits(m)) for v, m in branch.items()})
    return None


def has_minor(host: Graph, pattern: Graph) -> bool:
    return find_minor_model(host, pattern) is not None


def _route_edges(
    host: Graph,
    edges: list[tuple[int, int]],
    vm: dict[int, int],
    mapped_mask: int,
) -> dict[tuple[int, int], tuple[int, ...]] | None:
    paths: dict[tuple[int, int], tuple[int, ...]] = {}

    def rec(k: int, used_interiors: int) -> bool:
        if k == len(edges):
            return True
        u, v = edges[k]
        s, t = vm[u], vm[v]
        forbidden = (used_interiors | mapped_mask) & ~(1 << s) & ~(1 << t)
        for p in all_paths_between(host, s, t, forbidden):
            if len(p) < 2:
                continue
            inner = mask_of(p[1:-1])
            paths[(u, v)] = tuple(p)
            if rec(k + 1, used_interiors | inner):
                return True
            del paths[(u, v)]
        return False

    return paths if rec(0, 0) else None


def find_topo_embedding(
    host: Graph,
    pattern: Graph,
    fixed: Mapping[int, int] | None = None,
) -> Embedding | None:
    """A subdivision embedding of ``pattern`` in ``host``, or None.

    ``fixed`` pins pattern vertices to prescribed host vertices (boundary
    anchoring for patch topological minors).
    """
    if host.n < pattern.n or host.m < pattern.m:
        return None
    fixed = dict(fixed or {})
    if len(set(fixed.values())) != len(fixed):
        return None
    free_pvs = [v for v in range(pattern.n) if v not in fixed]
    taken = set(fixed.values())
    cands = []
    for pv in free_pvs:
        c = [hv for hv in range(host.n) if host.degree(hv) >= pattern.degree(pv)]
        cands.append(c)
    for pv, hv in fixed.items():
        if host.degree(hv) < pattern.degree(pv):
            return None

    edges = sorted(pattern.edges)

    def assign(idx: int, vm: dict[int, int], used: set[int]) -> Embedding | None:
        if idx == len(free_pvs):
            mapped_mask = mask_of(vm.values())
            paths = _route_edges(host, edges, vm, mapped_mask)
            if paths is not None:
                return Embedding(dict(vm), paths)
            return None
        pv = free_pvs[idx]
        for hv in cands[idx]:
            if hv in used:
                continue
            vm[pv] = hv
            used.add(hv)
            result = assign(idx + 1, vm, used)
            if result is not None:
                return result
            used.discard(hv)
            del vm[pv]
        return None

    return assign(0, dict(fixed), set(taken))


def has_topo_minor(host: Graph, pattern: Graph) -> bool:
    return find_topo_embedding(host, pattern) is not None


def all_topo_minor_counts(g: Graph) -> set[tuple[int, int]]:
    """(vertex count, edge count) pairs over all topological minors of g with
    at least 2 vertices, by direct definition: every subgraph, then every
    sequence of simple degree-2 suppressions.  Brute-force oracle."""
    out: set[tuple[int, int]] = set()
    seen: set[tuple[int, frozenset[tuple[int, int]]]] = set()
    edge_list = g.sorted_edges()

    def close_under_suppression(h: Graph) -> None:
        key = (h.n, h.edges)
        if key in seen:
            return
        seen.add(key)
        if h.n >= 2:
            out.add((h.n, h.m))
        for v in range(h.n):
            if h.degree(v) == 2:
                a, b = h.neighbors(v)
                if not h.has_edge(a, b):
                    close_under_suppression(h.contract_edge(min(a, v), max(a, v)))

    for mask in range(1 << len(edge_list)):
        chosen = [edge_list[i] for i in range(len(edge_list)) if (mask >> i) & 1]
        vs = sorted({x for e in chosen for x in e})
        sub = Graph(g.n, frozenset(chosen)).induced(vs) if vs else Graph(0)
        # isolated-vertex variants: add back any subset of untouched vertices
        spare = g.n - len(vs)
        for extra in range(spare + 1):
            h = Graph(sub.n + extra, sub.edges)
            close_under_suppression(h)
    return out


def permuted_copies(g: Graph) -> Iterator[Graph]:
    """All relabelings of g (testing helper, factorial blowup)."""
    for perm in permutations(range(g.n)):
        yield g.relabel(list(perm))
