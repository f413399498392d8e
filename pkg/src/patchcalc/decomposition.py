"""Tree and path decompositions: validators and exact metrics, exact
treewidth at desk scale, bounded-adhesion treewidth, extraction of long
proper path decompositions, and the construction of a stitched refined
patchwork from a well-behaved path decomposition."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .connectivity import max_linkage
from .errors import CapExceeded
from .graphs import Graph, bits, mask_of, path as path_graph
from .patches import Patch, classify
from .patchwork import (
    EmbeddedPatchwork,
    Patchwork,
    embed_patchwork,
    validate_stitched,
)


@dataclass(frozen=True)
class TreeDecomposition:
    """A tree together with one vertex bag per tree node."""

    tree: Graph
    bags: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "bags", tuple(frozenset(b) for b in self.bags)
        )
        if len(self.bags) != self.tree.n:
            raise ValueError("one bag per tree node required")

    @property
    def order(self) -> int:
        return self.tree.n

    @property
    def width(self) -> int:
        """Maximum bag size (one more than the common treewidth measure)."""
        return max((len(b) for b in self.bags), default=0)

    @property
    def adhesion(self) -> int:
        return max(
            (len(self.bags[s] & self.bags[t]) for s, t in self.tree.edges),
            default=0,
        )

    def edge_bag(self, s: int, t: int) -> frozenset[int]:
        return self.bags[s] & self.bags[t]

    def to_json(self) -> str:
        return json.dumps(
            {
                "tree_edges": sorted(self.tree.edges),
                "bags": {str(t): sorted(b) for t, b in enumerate(self.bags)},
            }
        )

    @staticmethod
    def from_json(text: str) -> "TreeDecomposition":
        obj = json.loads(text)
        bags_raw = {int(k): v for k, v in obj["bags"].items()}
        k = len(bags_raw)
        if sorted(bags_raw) != list(range(k)):
            raise ValueError("bag keys must be 0..k-1")
        tree = Graph(k, frozenset((int(s), int(t)) for s, t in obj["tree_edges"]))
        return TreeDecomposition(
            tree, tuple(frozenset(int(v) for v in bags_raw[t]) for t in range(k))
        )


@dataclass(frozen=True)
class PathDecomposition:
    """Bags along a path, listed in path order."""

    bags: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "bags", tuple(frozenset(b) for b in self.bags)
        )
        if not self.bags:
            raise ValueError("path decomposition must be non-empty")

    @property
    def order(self) -> int:
        return len(self.bags)

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags)

    @property
    def adhesion(self) -> int:
        return max(
            (len(a & b) for a, b in zip(self.bags, self.bags[1:])), default=0
        )

    def as_tree(self) -> TreeDecomposition:
        if len(self.bags) == 1:
            return TreeDecomposition(Graph(1), self.bags)
        return TreeDecomposition(path_graph(len(self.bags)), self.bags)


def validate_tree_decomposition(g: Graph, td: TreeDecomposition) -> list[str]:
    """Violations of the tree decomposition conditions, empty when valid."""
    out = []
    if not td.tree.is_tree():
        out.append("decomposition tree is not a tree")
        return out
    for b in td.bags:
        if any(not 0 <= v < g.n for v in b):
            out.append("a bag leaves the graph")
            return out
    for u, v in g.edges:
        if not any(u in b and v in b for b in td.bags):
            out.append(f"edge ({u},{v}) is in no bag")
    for v in range(g.n):
        holders = [t for t in range(td.order) if v in td.bags[t]]
        if not holders:
            out.append(f"vertex {v} is in no bag")
        elif not td.tree.is_connected_subset(holders):
            out.append(f"bags of vertex {v} are not connected in the tree")
    return out


def validate_path_decomposition(g: Graph, pd: PathDecomposition) -> list[str]:
    return validate_tree_decomposition(g, pd.as_tree())


def is_proper(td: TreeDecomposition) -> bool:
    """No bag contains a neighboring bag."""
    return all(
        not td.bags[s] <= td.bags[t] and not td.bags[t] <= td.bags[s]
        for s, t in td.tree.edges
    )


def is_appearance_universal(pd: PathDecomposition) -> bool:
    """Every vertex is in all bags, or in at most two consecutive bags."""
    k = pd.order
    seen: dict[int, list[int]] = {}
    for t, b in enumerate(pd.bags):
        for v in b:
            seen.setdefault(v, []).append(t)
    for ts in seen.values():
        if len(ts) == k:
            continue
        if len(ts) > 2 or (len(ts) == 2 and ts[1] != ts[0] + 1):
            return False
    return True


def check_perfectly_linked(g: Graph, td: TreeDecomposition) -> bool:
    """All adhesion sets have equal size q and any two are joined by a
    linkage of order q."""
    edges = td.tree.sorted_edges()
    if not edges:
        return True
    sizes = {len(td.edge_bag(s, t)) for s, t in edges}
    if len(sizes) != 1:
        return False
    q = sizes.pop()
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            x = td.edge_bag(*edges[i])
            y = td.edge_bag(*edges[j])
            if max_linkage(g, x, y)[0] < q:
                return False
    return True


TREEWIDTH_CAP = 12
THETA_TREEWIDTH_CAP = 8


def exact_treewidth(g: Graph, cap: int = TREEWIDTH_CAP) -> int:
    """Minimum width (max bag size) over all tree decompositions.

    Dynamic programming over elimination prefixes; the reported value is one
    more than the usual bag-size-minus-one treewidth measure.
    """
    n = g.n
    if n > cap:
        raise CapExceeded("treewidth_n", cap, n)
    if n == 0:
        return 0

    def back_degree(done: int, v: int) -> int:
        # vertices outside done+{v} adjacent to v or connected to it through done
        comp = g.component_mask(v, done | (1 << v))
        nbhd = 0
        for w in bits(comp):
            nbhd |= g.adj_mask(w)
        return (nbhd & ~done & ~(1 << v)).bit_count()

    full = (1 << n) - 1
    best = {0: 0}
    for mask in range(1, full + 1):
        value = n
        for v in bits(mask):
            prev = mask & ~(1 << v)
            value = min(value, max(best[prev], back_degree(prev, v)))
        best[mask] = value
    return best[full] + 1


def theta_treewidth(
    g: Graph, theta: int, cap: int = THETA_TREEWIDTH_CAP
) -> int:
    """Minimum width over tree decompositions of adhesion less than theta.

    Exhaustive rooted search: a bag covering a component's whole
    neighborhood is chosen, and the leftover components recurse, each
    required to attach through fewer than theta vertices.  Returns the
    max-bag-size width; raises when no such decomposition exists
    only if theta < 1 (adhesion 0 is always available at forest scale).
    """
    n = g.n
    if n > cap:
        raise CapExceeded("theta_treewidth_n", cap, n)
    if theta < 1:
        raise ValueError("theta must be at least 1")
    if n == 0:
        return 0
    INF = n + 1

    nbhd_cache: dict[int, int] = {}

    def neighborhood(comp: int) -> int:
        if comp not in nbhd_cache:
            m = 0
            for v in bits(comp):
                m |= g.adj_mask(v)
            nbhd_cache[comp] = m & ~comp
        return nbhd_cache[comp]

    memo: dict[int, int] = {}

    def solve(comp: int) -> int:
        """Min width decomposing G[comp ∪ N(comp)] rooted at a bag ⊇ N(comp)."""
        if comp in memo:
            return memo[comp]
        s_mask = neighborhood(comp)
        verts = bits(comp)
        best_w = INF
        for sub in range(1, 1 << len(verts)):
            extra = mask_of(verts[i] for i in range(len(verts)) if (sub >> i) & 1)
            bag = s_mask | extra
            w = bag.bit_count()
            if w >= best_w:
                continue
            rest = comp & ~extra
            ok = True
            while rest:
                v = (rest & -rest).bit_length() - 1
                child = g.component_mask(v, rest)
                rest &= ~child
                if neighborhood(child).bit_count() >= theta:
                    ok = False
                    break
                w = max(w, solve(child))
                if w >= best_w:
                    ok = False
                    break
            if ok:
                best_w = w
        memo[comp] = best_w
        return best_w

    width = 0
    for component in g.components():
        width = max(width, solve(mask_of(component)))
    return width


def extract_path_decomposition(
    g: Graph, td: TreeDecomposition, l: int, theta: int
) -> Optional[PathDecomposition]:
    """A proper path decomposition of adhesion at most theta with at least
    l bags, extracted from a proper tree decomposition of adhesion at most
    theta, or None when neither extraction branch yields one.

    Two branches: a long path of the tree turned into bags of hanging
    subtree unions, or a high-degree node whose subtrees pigeonhole into
    l - 1 equal attachment sets.
    """
    errs = validate_tree_decomposition(g, td)
    if errs:
        raise ValueError("; ".join(errs))
    if not is_proper(td) or td.adhesion > theta:
        raise ValueError("input decomposition must be proper with adhesion <= theta")

    tree = td.tree

    def subtree_union(nodes: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for t in nodes:
            out |= td.bags[t]
        return frozenset(out)

    def finish(bags: list[frozenset[int]]) -> Optional[PathDecomposition]:
        pd = PathDecomposition(tuple(bags))
        if validate_path_decomposition(g, pd):
            return None
        if not is_proper(pd.as_tree()) or pd.adhesion > theta or pd.order < l:
            return None
        return pd

    # long-path branch
    spine = _longest_path(tree)
    if len(spine) >= l:
        on_spine = set(spine)
        bags = []
        for z in spine:
            allowed = mask_of(set(range(tree.n)) - (on_spine - {z}))
            comp = tree.component_mask(z, allowed) if tree.n else 0
            bags.append(subtree_union(bits(comp)))
        pd = finish(bags)
        if pd is not None:
            return pd

    # high-degree branch
    for z in range(tree.n):
        comps = []
        rest = mask_of(set(range(tree.n)) - {z})
        while rest:
            v = (rest & -rest).bit_length() - 1
            c = tree.component_mask(v, rest)
            rest &= ~c
            comps.append(bits(c))
        groups: dict[frozenset[int], list[list[int]]] = {}
        for c in comps:
            attach = td.bags[z] & subtree_union(c)
            groups.setdefault(attach, []).append(c)
        for attach in sorted(groups, key=sorted):
            group = groups[attach]
            if len(group) < l - 1:
                continue
            chosen = group[: l - 1]
            chosen_nodes = {t for c in chosen for t in c}
            bags = [subtree_union(c) for c in chosen]
            bags.append(subtree_union(set(range(tree.n)) - chosen_nodes))
            pd = finish(bags)
            if pd is not None:
                return pd
    return None


def _longest_path(tree: Graph) -> list[int]:
    """Vertices of a longest path in a tree (double sweep)."""
    if tree.n == 1:
        return [0]

    def farthest(src: int) -> tuple[int, dict[int, int]]:
        parent = {src: src}
        frontier = [src]
        last = src
        while frontier:
            nxt = []
            for v in frontier:
                for w in tree.neighbors(v):
                    if w not in parent:
                        parent[w] = v
                        nxt.append(w)
            if nxt:
                last = nxt[-1]
            frontier = nxt
        return last, parent

    a, _ = farthest(0)
    b, parent = farthest(a)
    out = [b]
    while out[-1] != a:
        out.append(parent[out[-1]])
    return out


def patchwork_from_path_decomposition(
    g: Graph, pd: PathDecomposition, spacing: int = 3
) -> tuple[int, EmbeddedPatchwork, dict[tuple[int, int], tuple[int, ...]]]:
    """Build a stitched refined patchwork out of every ``spacing``-th bag.

    Requires a proper, perfectly-linked, appearance-universal path
    decomposition with at least three bags.  A linkage of full order joins
    the first and last adhesion sets; each selected bag becomes a patch
    whose boundary maps pick out the linkage's crossing vertices, and the
    linkage subpaths between selected bags become the stitch paths.  The
    returned embedding and stitching are revalidated before returning.

    Spacing 3 suffices only when no vertex between two selected bags
    neighbors both; a vertex adjacent to the right boundary of one patch
    and the left boundary of the next violates the fourth embedding
    condition, and spacing 4 always avoids this for appearance-universal
    inputs.  Callers get a ValueError and can widen the spacing.
    """
    errs = validate_path_decomposition(g, pd)
    if errs:
        raise ValueError("; ".join(errs))
    k = pd.order
    if k < 3:
        raise ValueError("need at least three bags")
    if not is_proper(pd.as_tree()):
        raise ValueError("decomposition is not proper")
    if not is_appearance_universal(pd):
        raise ValueError("decomposition is not appearance-universal")
    if not check_perfectly_linked(g, pd.as_tree()):
        raise ValueError("decomposition is not perfectly linked")

    if spacing < 1:
        raise ValueError("spacing must be positive")
    seps = [pd.bags[t] & pd.bags[t + 1] for t in range(k - 1)]
    q = len(seps[0])
    positions = list(range(1, k - 1, spacing))
    l = len(positions)
    count, linkage, _ = max_linkage(g, seps[0], seps[-1])
    if count < q:
        raise ValueError("no linkage of full order despite the linked flag")
    paths = sorted(linkage.paths, key=lambda p: p[0])[:q]

    # crossing vertex of each path in each adhesion set
    cross: list[list[int]] = []
    for p in paths:
        row = []
        for sep in seps:
            hits = [v for v in p if v in sep]
            if len(hits) != 1:
                raise ValueError("linkage path crosses an adhesion set twice")
            row.append(hits[0])
        cross.append(row)

    patches = []
    placements = []
    for j in range(l):
        t = positions[j]
        bag = sorted(pd.bags[t])
        pos = {v: i for i, v in enumerate(bag)}
        pg = g.induced(bag)
        a = tuple(pos[cross[i][t - 1]] for i in range(q))
        b = tuple(pos[cross[i][t]] for i in range(q))
        patch = Patch(pg, a, b)
        if not classify(patch).refined:
            raise ValueError(f"patch {j} is not refined")
        patches.append(patch)
        placements.append(tuple(bag))

    stitches: dict[tuple[int, int], tuple[int, ...]] = {}
    for j in range(l - 1):
        for i in range(q):
            p = paths[i]
            x = p.index(cross[i][positions[j]])
            y = p.index(cross[i][positions[j + 1] - 1])
            lo, hi = (x, y) if x <= y else (y, x)
            stitches[(i, j)] = tuple(p[lo : hi + 1])

    emb = embed_patchwork(g, Patchwork(tuple(patches)), placements)
    errs = validate_stitched(emb, stitches)
    if errs:
        raise ValueError("; ".join(errs))
    return q, emb, stitches
