"""Ordered patch sequences placed inside a host graph: embedding and
stitching validators, boundary contraction with exact edge bookkeeping,
respectful restriction, and the minor model extracted from a stitching."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .graphs import Graph
from .minors import Model
from .patches import Patch, classify, e_value, patch_product


@dataclass(frozen=True)
class Patchwork:
    """A non-empty ordered sequence of patches of one arity."""

    patches: tuple[Patch, ...]

    def __post_init__(self):
        object.__setattr__(self, "patches", tuple(self.patches))
        if not self.patches:
            raise ValueError("patchwork must be non-empty")
        q = self.patches[0].q
        if any(p.q != q for p in self.patches):
            raise ValueError("patches have mixed arities")

    @property
    def q(self) -> int:
        return self.patches[0].q

    def __len__(self) -> int:
        return len(self.patches)

    def restrict(self, indices: Iterable[int]) -> "Patchwork":
        keep = sorted(set(indices))
        if any(not 0 <= i < len(self.patches) for i in keep):
            raise ValueError("restriction index out of range")
        return Patchwork(tuple(self.patches[i] for i in keep))

    def product_graph(self) -> Graph:
        out = self.patches[0]
        for p in self.patches[1:]:
            out = patch_product(out, p)
        return out.graph


@dataclass(frozen=True)
class EmbeddedPatchwork:
    """A patchwork realized inside a host graph.

    ``placements[j][v]`` is the host vertex carrying vertex v of patch j.
    Construct through :func:`embed_patchwork`, which checks the four
    embedding conditions; ``globals_`` is the set of host vertices shared
    by two or more patches.
    """

    host: Graph
    patchwork: Patchwork
    placements: tuple[tuple[int, ...], ...]
    globals_: frozenset[int]

    def patch_vertices(self, j: int) -> frozenset[int]:
        return frozenset(self.placements[j])

    def left_image(self, j: int) -> frozenset[int]:
        pl = self.placements[j]
        return frozenset(pl[v] for v in self.patchwork.patches[j].a)

    def right_image(self, j: int) -> frozenset[int]:
        pl = self.placements[j]
        return frozenset(pl[v] for v in self.patchwork.patches[j].b)

    def covered_vertices(self) -> frozenset[int]:
        out: set[int] = set()
        for pl in self.placements:
            out |= set(pl)
        return frozenset(out)


def validate_embedded_patch(
    host: Graph, patch: Patch, placement: Sequence[int]
) -> list[str]:
    """Violations of the single-patch embedding conditions.

    The patch graph must be the host subgraph induced on the image, and
    every outside vertex with neighbors in the image must see only the left
    boundary or only the right boundary.
    """
    out = []
    pl = tuple(placement)
    if len(pl) != patch.n:
        return [f"placement has {len(pl)} entries for {patch.n} vertices"]
    if len(set(pl)) != len(pl):
        return ["placement is not injective"]
    if any(not 0 <= x < host.n for x in pl):
        return ["placement leaves the host"]
    image = set(pl)
    for u in range(patch.n):
        for v in range(u + 1, patch.n):
            pe = patch.graph.has_edge(u, v)
            he = host.has_edge(pl[u], pl[v])
            if pe and not he:
                out.append(f"patch edge ({u},{v}) missing in host")
            if he and not pe:
                out.append(f"host edge ({pl[u]},{pl[v]}) not induced by the patch")
    left = {pl[v] for v in patch.a}
    right = {pl[v] for v in patch.b}
    for w in range(host.n):
        if w in image:
            continue
        nbrs = [x for x in host.neighbors(w) if x in image]
        if not nbrs:
            continue
        if not (all(x in left for x in nbrs) or all(x in right for x in nbrs)):
            out.append(
                f"outside vertex {w} sees both boundaries through {sorted(nbrs)}"
            )
    return out


def validate_embedded_patchwork(
    host: Graph, pw: Patchwork, placements: Sequence[Sequence[int]]
) -> list[str]:
    """Violations of the four patchwork embedding conditions, tagged
    (E1)-(E4); empty when the embedding is valid."""
    out = []
    l = len(pw)
    if len(placements) != l:
        return [f"{len(placements)} placements for {l} patches"]
    pls = [tuple(p) for p in placements]
    for j, (patch, pl) in enumerate(zip(pw.patches, pls)):
        for msg in validate_embedded_patch(host, patch, pl):
            out.append(f"(E1) patch {j}: {msg}")
    if out:
        return out
    images = [set(pl) for pl in pls]
    both = []
    for j, patch in enumerate(pw.patches):
        pl = pls[j]
        both.append({pl[v] for v in patch.a} & {pl[v] for v in patch.b})
    covered: set[int] = set().union(*images)
    for v in covered:
        holders = [j for j in range(l) if v in images[j]]
        if len(holders) >= 2 and any(v not in both[k] for k in range(l)):
            out.append(
                f"(E2) shared vertex {v} is not on both boundaries of every patch"
            )
    for v in covered:
        for j in range(l):
            if v in images[j]:
                continue
            if any(w in images[j] for w in host.neighbors(v)):
                out.append(
                    f"(E3) covered vertex {v} has a neighbor in patch {j} "
                    "but lies outside it"
                )
    lefts = [frozenset(pls[j][v] for v in pw.patches[j].a) for j in range(l)]
    rights = [frozenset(pls[j][v] for v in pw.patches[j].b) for j in range(l)]
    for v in range(host.n):
        if v in covered:
            continue
        nbrs = {w for w in host.neighbors(v) if w in covered}
        if not nbrs:
            continue
        if not any(nbrs <= lefts[j] or nbrs <= rights[j] for j in range(l)):
            out.append(
                f"(E4) outside vertex {v} sees no single boundary: {sorted(nbrs)}"
            )
    return out


def embed_patchwork(
    host: Graph, pw: Patchwork, placements: Sequence[Sequence[int]]
) -> EmbeddedPatchwork:
    """Validated constructor; raises on any embedding violation."""
    violations = validate_embedded_patchwork(host, pw, placements)
    if violations:
        raise ValueError("; ".join(violations))
    pls = tuple(tuple(p) for p in placements)
    counts: dict[int, int] = {}
    for pl in pls:
        for v in set(pl):
            counts[v] = counts.get(v, 0) + 1
    globals_ = frozenset(v for v, c in counts.items() if c >= 2)
    return EmbeddedPatchwork(host, pw, pls, globals_)


def validate_stitched(
    embedded: EmbeddedPatchwork, stitches: Mapping[tuple[int, int], Sequence[int]]
) -> list[str]:
    """Violations of the stitching conditions, tagged (S1)-(S3).

    ``stitches[(i, j)]`` is the host path joining the right boundary vertex i
    of patch j to the left boundary vertex i of patch j+1, for j in
    0..l-2.  Paths may be given in either direction.  Two consecutive paths
    of the same index may overlap only in a common subpath ending at the
    middle patch's boundary vertex, and only when that patch has a(i) = b(i)
    there.
    """
    host = embedded.host
    pw = embedded.patchwork
    q, l = pw.q, len(pw)
    out = []
    expected = {(i, j) for i in range(q) for j in range(l - 1)}
    if set(stitches) != expected:
        return [f"(S1) stitch keys {sorted(stitches)} do not match (i, j) grid"]
    covered = embedded.covered_vertices()
    norm: dict[tuple[int, int], tuple[int, ...]] = {}
    for (i, j), raw in sorted(stitches.items()):
        p = tuple(raw)
        start = embedded.placements[j][pw.patches[j].b[i]]
        end = embedded.placements[j + 1][pw.patches[j + 1].a[i]]
        if p and p[0] == end and p[-1] == start:
            p = p[::-1]
        if not p or p[0] != start or p[-1] != end:
            out.append(f"(S2) path ({i},{j}) does not join the prescribed ends")
            continue
        if len(set(p)) != len(p):
            out.append(f"(S2) path ({i},{j}) repeats a vertex")
        if any(not host.has_edge(a, b) for a, b in zip(p, p[1:])):
            out.append(f"(S2) path ({i},{j}) uses a non-edge")
        inner = set(p) - {start, end}
        if inner & covered:
            out.append(f"(S2) path ({i},{j}) meets the patchwork off its ends")
        norm[(i, j)] = p
    if out:
        return out
    keys = sorted(norm)
    for x in range(len(keys)):
        for y in range(x + 1, len(keys)):
            (i1, j1), (i2, j2) = keys[x], keys[y]
            shared = set(norm[keys[x]]) & set(norm[keys[y]])
            if not shared:
                continue
            if i1 != i2 or abs(j1 - j2) > 1:
                out.append(f"(S3) paths ({i1},{j1}) and ({i2},{j2}) intersect")
                continue
            # consecutive same-index paths: overlap must be a common subpath
            # hanging off the middle boundary vertex, which must satisfy
            # a(i) = b(i) in the middle patch
            first, second = ((i1, j1), (i2, j2)) if j1 < j2 else ((i2, j2), (i1, j1))
            i, jm = second
            mid = pw.patches[jm]
            if mid.a[i] != mid.b[i]:
                out.append(
                    f"(S3) paths ({i},{first[1]}) and ({i},{jm}) overlap but "
                    f"patch {jm} has a({i}) != b({i})"
                )
                continue
            pa, pb = norm[first], norm[second]
            k = len(shared)
            tail, head = pa[-k:], pb[:k]
            if set(tail) != shared or set(head) != shared or tail != head[::-1]:
                out.append(
                    f"(S3) overlap of paths ({i},{first[1]}) and ({i},{jm}) "
                    "is not a common end subpath"
                )
    return out


def contract_patch(
    host: Graph, patch: Patch, placement: Sequence[int]
) -> tuple[Graph, dict[int, int]]:
    """Contract an embedded linked patch out of the host.

    Deletes the interior, deletes the patch edges except those induced by
    the left boundary image, and identifies the two boundary images index by
    index (the left vertex survives).  Returns the compacted graph and the
    map from surviving old host vertices to new labels.  The result has
    exactly e(patch) fewer edges than the host; this is asserted.
    """
    errs = validate_embedded_patch(host, patch, placement)
    if errs:
        raise ValueError("; ".join(errs))
    if not classify(patch).linked:
        raise ValueError("patch is not linked")
    pl = tuple(placement)
    image = set(pl)
    left = {pl[v] for v in patch.a}
    right = {pl[v] for v in patch.b}
    interior = image - left - right

    rep = {v: v for v in range(host.n)}

    def find(v: int) -> int:
        while rep[v] != v:
            rep[v] = rep[rep[v]]
            v = rep[v]
        return v

    for i in range(patch.q):
        av, bv = find(pl[patch.a[i]]), find(pl[patch.b[i]])
        if av != bv:
            rep[bv] = av

    edges = set()
    for u, v in host.edges:
        if u in image and v in image and not (u in left and v in left):
            continue
        x, y = find(u), find(v)
        if x != y:
            edges.add((min(x, y), max(x, y)))
    survivors = sorted(
        {find(v) for v in range(host.n) if v not in interior} - interior
    )
    relabel = {v: i for i, v in enumerate(survivors)}
    g = Graph(len(survivors), frozenset((relabel[u], relabel[v]) for u, v in edges))
    assert g.m == host.m - e_value(patch), "edge bookkeeping failed"
    mapping = {
        v: relabel[find(v)] for v in range(host.n) if v not in interior
    }
    return g, mapping


def contract_many(embedded: EmbeddedPatchwork, indices: Iterable[int]) -> Graph:
    """Contract the indexed patches (each must be refined) in ascending
    order; the summed edge identity is asserted."""
    pw = embedded.patchwork
    idx = sorted(set(indices))
    if any(not 0 <= i < len(pw) for i in idx):
        raise ValueError("contraction index out of range")
    for i in idx:
        if not classify(pw.patches[i]).refined:
            raise ValueError(f"patch {i} is not refined")
    g = embedded.host
    placements = [list(pl) for pl in embedded.placements]
    removed = 0
    done: set[int] = set()
    for i in idx:
        g, mapping = contract_patch(g, pw.patches[i], placements[i])
        removed += e_value(pw.patches[i])
        done.add(i)
        # placements of contracted patches are stale and never read again,
        # so only the remaining ones are carried through the relabeling
        for j in range(len(placements)):
            if j in done:
                continue
            placements[j] = [mapping[v] for v in placements[j]]
    assert g.m == embedded.host.m - removed, "summed edge bookkeeping failed"
    return g


def graph_phi(g: Graph, delta: Fraction) -> Fraction:
    """|E| - delta * |V|, the whole-graph weight."""
    return g.m - Fraction(delta) * g.n


def respectful_restriction(
    embedded: EmbeddedPatchwork, s: Iterable[int]
) -> EmbeddedPatchwork:
    """Drop every patch whose image contains a non-global vertex of ``s``.

    Each such vertex lies in at most one patch, so at least l - |s| patches
    survive; the survivors meet ``s`` only in shared boundary vertices.
    Requires more patches than |s|.
    """
    s = set(s)
    pw = embedded.patchwork
    if len(pw) <= len(s):
        raise ValueError("need more patches than dropped vertices")
    bad = s - embedded.globals_
    keep = [
        j
        for j in range(len(pw))
        if not (bad & embedded.patch_vertices(j))
    ]
    counts: dict[int, int] = {}
    for j in keep:
        for v in embedded.patch_vertices(j):
            counts[v] = counts.get(v, 0) + 1
    return EmbeddedPatchwork(
        embedded.host,
        pw.restrict(keep),
        tuple(embedded.placements[j] for j in keep),
        frozenset(v for v, c in counts.items() if c >= 2),
    )


def is_respectful(embedded: EmbeddedPatchwork, s: Iterable[int]) -> bool:
    covered = embedded.covered_vertices()
    return all(v in embedded.globals_ for v in set(s) & covered)


def stitched_minor_model(
    embedded: EmbeddedPatchwork,
    stitches: Mapping[tuple[int, int], Sequence[int]],
) -> Model:
    """A minor model of the patchwork's product graph in the host.

    Each stitch path collapses into the branch set of the product vertex
    where the two boundary vertices it joins are glued; every other product
    vertex is carried by its single host preimage.  Validates the stitching
    first.
    """
    errs = validate_stitched(embedded, stitches)
    if errs:
        raise ValueError("; ".join(errs))
    pw = embedded.patchwork
    q, l = pw.q, len(pw)

    # rebuild the product, tracking each factor vertex's product label
    maps: list[dict[int, int]] = [dict(enumerate(range(pw.patches[0].n)))]
    acc = pw.patches[0]
    for j in range(1, l):
        nxt = pw.patches[j]
        relabel = {nxt.a[i]: acc.b[i] for i in range(q)}
        fresh = acc.n
        for v in range(nxt.n):
            if v not in relabel:
                relabel[v] = fresh
                fresh += 1
        maps.append(relabel)
        acc = patch_product(acc, nxt)

    branch: dict[int, set[int]] = {v: set() for v in range(acc.n)}
    for j in range(l):
        pl = embedded.placements[j]
        for v in range(pw.patches[j].n):
            branch[maps[j][v]].add(pl[v])
    for (i, j), raw in stitches.items():
        target = maps[j][pw.patches[j].b[i]]
        branch[target] |= set(raw)
    return Model({v: frozenset(bs) for v, bs in branch.items()})


def patchwork_to_json(
    pw: Patchwork,
    host: Optional[Graph] = None,
    placements: Optional[Sequence[Sequence[int]]] = None,
    stitches: Optional[Mapping[tuple[int, int], Sequence[int]]] = None,
) -> str:
    obj: dict = {
        "q": pw.q,
        "patches": [json.loads(p.to_json()) for p in pw.patches],
    }
    if host is not None:
        obj["host"] = json.loads(host.to_json())
    if placements is not None:
        obj["placements"] = [list(p) for p in placements]
    if stitches is not None:
        obj["stitches"] = [
            {"i": i, "j": j, "path": list(p)} for (i, j), p in sorted(stitches.items())
        ]
    return json.dumps(obj)


def patchwork_from_json(text: str) -> tuple[
    Patchwork,
    Optional[Graph],
    Optional[list[list[int]]],
    Optional[dict[tuple[int, int], list[int]]],
]:
    obj = json.loads(text)
    pw = Patchwork(tuple(Patch.from_json(json.dumps(p)) for p in obj["patches"]))
    if pw.q != int(obj["q"]):
        raise ValueError("q does not match the patches")
    host = Graph.from_json(json.dumps(obj["host"])) if "host" in obj else None
    placements = (
        [[int(v) for v in pl] for pl in obj["placements"]]
        if "placements" in obj
        else None
    )
    stitches = (
        {(int(s["i"]), int(s["j"])): [int(v) for v in s["path"]] for s in obj["stitches"]}
        if "stitches" in obj
        else None
    )
    return pw, host, placements, stitches
