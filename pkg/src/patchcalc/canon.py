"""Canonical forms by individualization-refinement, and isomorphism-free
enumeration of small graphs via vertex augmentation."""

from __future__ import annotations

from typing import Callable, Iterator

from .errors import CapExceeded
from .graphs import Graph, mask_of


def _refine(adj: tuple[int, ...], cells: list[list[int]]) -> list[list[int]]:
    """Stabilize an ordered partition under neighbor-count signatures."""
    while True:
        masks = [sum(1 << v for v in cell) for cell in cells]
        new_cells: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            by_sig: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                sig = tuple((adj[v] & m).bit_count() for m in masks)
                by_sig.setdefault(sig, []).append(v)
            if len(by_sig) > 1:
                changed = True
            for sig in sorted(by_sig):
                new_cells.append(sorted(by_sig[sig]))
        cells = new_cells
        if not changed:
            return cells


def _canonical(g: Graph, colors: list | None = None) -> tuple[list[int], tuple]:
    """The canonical order (position -> old vertex) together with the
    invariant key (color ranks, lower-triangular adjacency rows) that the
    order realizes."""
    n = g.n
    if n == 0:
        return [], ((), ())
    adj = tuple(g.adj_mask(v) for v in range(n))
    if colors is None:
        rank = [0] * n
    else:
        palette = sorted(set(colors))
        index = {c: i for i, c in enumerate(palette)}
        rank = [index[c] for c in colors]
    by_class: dict[tuple[int, int], list[int]] = {}
    for v in range(n):
        by_class.setdefault((rank[v], adj[v].bit_count()), []).append(v)
    start = [sorted(by_class[k]) for k in sorted(by_class)]

    best_key: tuple | None = None
    best_order: list[int] | None = None
    automorphisms: list[list[int]] = []

    def key_of(order: list[int]) -> tuple:
        pos = [0] * n
        for i, v in enumerate(order):
            pos[v] = i
        rows = []
        for i, v in enumerate(order):
            row = 0
            rest = adj[v]
            while rest:
                low = rest & -rest
                rest ^= low
                p = pos[low.bit_length() - 1]
                if p < i:
                    row |= 1 << p
            rows.append(row)
        return (tuple(rank[v] for v in order), tuple(rows))

    def orbit_of(v: int, perms: list[list[int]]) -> set[int]:
        out = {v}
        queue = [v]
        while queue:
            u = queue.pop()
            for perm in perms:
                w = perm[u]
                if w not in out:
                    out.add(w)
                    queue.append(w)
        return out

    def search(cells: list[list[int]]) -> None:
        nonlocal best_key, best_order
        cells = _refine(adj, cells)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            order = [c[0] for c in cells]
            key = key_of(order)
            if best_key is None or key < best_key:
                best_key, best_order = key, order
            elif key == best_key:
                # an automorphism: same canonical image via two labelings
                perm = [0] * n
                for bo, o in zip(best_order, order):
                    perm[bo] = o
                automorphisms.append(perm)
            return
        cell = cells[target]
        # branches related by an automorphism fixing everything already
        # individualized (the singleton cells) yield the same key sets
        fixed = [c[0] for c in cells if len(c) == 1]
        tried: set[int] = set()
        for v in cell:
            if v in tried:
                continue
            usable = [
                p for p in automorphisms if all(p[u] == u for u in fixed)
            ]
            tried |= orbit_of(v, usable)
            rest = [w for w in cell if w != v]
            search(cells[:target] + [[v], rest] + cells[target + 1 :])

    search(start)
    assert best_order is not None and best_key is not None
    return best_order, best_key


def canonical_labeling(g: Graph, colors: list | None = None) -> list[int]:
    """A permutation (position -> old vertex) whose relabeling is canonical.

    Optional ``colors`` (orderable values, one per vertex) seed the initial
    partition, so only color-preserving relabelings compete; two colored
    graphs get equal canonical forms iff a color-preserving isomorphism
    exists.
    """
    return _canonical(g, colors)[0]


def canonical_graph(g: Graph, colors: list | None = None) -> Graph:
    order = canonical_labeling(g, colors)
    pos = {v: i for i, v in enumerate(order)}
    return g.relabel(pos)


def canonical_form(g: Graph, colors: list | None = None) -> bytes:
    """Byte string equal for two graphs iff they are isomorphic (respecting
    ``colors`` when given)."""
    order, key = _canonical(g, colors)
    form = repr((g.n, key[1])).encode("ascii")
    if colors is not None:
        form += b"|" + repr([colors[v] for v in order]).encode("ascii")
    return form


def automorphism_generators(g: Graph) -> list[list[int]]:
    """A generating set for the automorphism group.

    One coset representative is collected for every point in the orbit of
    each vertex under the stabilizer of the earlier vertices; transversals
    of the stabilizer chain generate the whole group.
    """
    n = g.n
    adj = [g.adj_mask(v) for v in range(n)]
    deg = [a.bit_count() for a in adj]
    gens: list[list[int]] = []

    def extend(perm: list[int], used: int, i: int) -> list[int] | None:
        if i == n:
            return perm[:]
        for w in range(n):
            if (used >> w) & 1 or deg[w] != deg[i]:
                continue
            ok = True
            for j in range(i):
                if ((adj[i] >> j) & 1) != ((adj[w] >> perm[j]) & 1):
                    ok = False
                    break
            if not ok:
                continue
            perm.append(w)
            found = extend(perm, used | (1 << w), i + 1)
            if found is not None:
                return found
            perm.pop()
        return None

    def orbit(v: int, perms: list[list[int]]) -> set[int]:
        out = {v}
        queue = [v]
        while queue:
            u = queue.pop()
            for p in perms:
                if p[u] not in out:
                    out.add(p[u])
                    queue.append(p[u])
        return out

    for k in range(n - 1):
        stab = [p for p in gens if all(p[i] == i for i in range(k))]
        reached = orbit(k, stab)
        for v in range(k + 1, n):
            if v in reached or deg[v] != deg[k]:
                continue
            prefix = list(range(k)) + [v]
            if any(
                ((adj[k] >> j) & 1) != ((adj[v] >> j) & 1) for j in range(k)
            ):
                continue
            found = extend(prefix, mask_of(prefix), k + 1)
            if found is not None:
                gens.append(found)
                reached = orbit(k, stab + [found])
    return gens


def subset_orbit_representatives(k: int, gens: list[list[int]]) -> Iterator[int]:
    """One bitmask per orbit of vertex subsets of {0..k-1} under the given
    permutations (the smallest mask of each orbit, ascending)."""
    if not gens or k == 0:
        yield from range(1 << k)
        return
    seen = bytearray(1 << k)
    for m in range(1 << k):
        if seen[m]:
            continue
        yield m
        queue = [m]
        seen[m] = 1
        while queue:
            cur = queue.pop()
            for p in gens:
                pm = 0
                rest = cur
                while rest:
                    low = rest & -rest
                    rest ^= low
                    pm |= 1 << p[low.bit_length() - 1]
                if not seen[pm]:
                    seen[pm] = 1
                    queue.append(pm)


def are_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.m != h.m:
        return False
    return canonical_form(g) == canonical_form(h)


ENUMERATION_CAP = 10


def enumerate_graphs(
    n: int,
    keep: Callable[[Graph], bool] | None = None,
    *,
    hereditary: bool = False,
    cap: int = 9,
) -> Iterator[Graph]:
    """One representative per isomorphism class on n vertices passing ``keep``.

    With ``hereditary=True`` the filter must define a class closed under
    vertex deletion; intermediate levels are then pruned by it, which is what
    makes forbidden-minor enumeration feasible at n >= 8.  Output is sorted by
    canonical form, hence deterministic.
    """
    if n > min(cap, ENUMERATION_CAP):
        raise CapExceeded("enumeration_n", min(cap, ENUMERATION_CAP), n)
    if n < 1:
        raise ValueError("n must be positive")

    level = [Graph(1)]
    if hereditary and keep is not None:
        level = [g for g in level if keep(g)]
    for k in range(1, n):
        seen: dict[bytes, Graph] = {}
        for g in level:
            # neighborhoods in the same parent-automorphism orbit yield
            # isomorphic extensions, so one representative suffices
            gens = automorphism_generators(g)
            for nbhd in subset_orbit_representatives(k, gens):
                h = Graph(k + 1, g.edges | {(u, k) for u in range(k) if (nbhd >> u) & 1})
                if hereditary and keep is not None and not keep(h):
                    continue
                form = canonical_form(h)
                if form not in seen:
                    seen[form] = h
        level = [seen[f] for f in sorted(seen)]
    if keep is not None and not hereditary:
        level = [g for g in level if keep(g)]
    if n == 1:
        level.sort(key=canonical_form)
    yield from level
