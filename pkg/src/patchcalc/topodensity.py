"""Topological-minor excess, the paired dense/sparse 1-patch constructors
for rational densities delta >= 3/2, controlled sequences, their glued
product graphs, and the class upper bound check."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import CapExceeded
from .graphs import Graph, complete, fan
from .patches import Patch, patch_product

PSI_VERTEX_CAP = 10
PSI_EDGE_CAP = 16


def _suppression_states(vertices: frozenset[int], edges: frozenset[tuple[int, int]]):
    """Every state reachable by simple degree-2 suppressions (remove a
    degree-2 vertex with non-adjacent neighbors, join its neighbors)."""
    seen = {(vertices, edges)}
    stack = [(vertices, edges)]
    while stack:
        vs, es = stack.pop()
        yield vs, es
        inc: dict[int, list[tuple[int, int]]] = {v: [] for v in vs}
        for e in es:
            inc[e[0]].append(e)
            inc[e[1]].append(e)
        for v in vs:
            if len(inc[v]) != 2:
                continue
            (a1, b1), (a2, b2) = inc[v]
            u = a1 if b1 == v else b1
            w = a2 if b2 == v else b2
            joint = (u, w) if u < w else (w, u)
            if joint in es:
                continue
            state = (
                vs - {v},
                (es - set(inc[v])) | {joint},
            )
            if state not in seen:
                seen.add(state)
                stack.append(state)


def psi_excess(g: Graph, delta: Fraction) -> Fraction:
    """Exact maximum of |E(H)| - delta*(|V(H)| - 1) over all topological
    minors H of ``g`` with at least two vertices.

    Enumerates every edge subset on its support, closed under simple
    suppressions; extra isolated vertices only lower the objective for
    positive delta, so the edgeless two-vertex minor is the only extra
    candidate.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if g.n < 2:
        raise ValueError("the graph needs at least two vertices")
    if g.n > PSI_VERTEX_CAP:
        raise CapExceeded("psi_vertices", PSI_VERTEX_CAP, g.n)
    if g.m > PSI_EDGE_CAP:
        raise CapExceeded("psi_edges", PSI_EDGE_CAP, g.m)
    best = -delta  # two isolated vertices
    all_edges = g.sorted_edges()
    for mask in range(1, 1 << len(all_edges)):
        es = frozenset(e for i, e in enumerate(all_edges) if (mask >> i) & 1)
        vs = frozenset(v for e in es for v in e)
        for svs, ses in _suppression_states(vs, es):
            value = len(ses) - delta * (len(svs) - 1)
            if value > best:
                best = value
    return best


def _as_one_patch(g: Graph) -> Patch:
    """Boundary rule: the two lowest-index vertices of maximum degree."""
    md = max(g.degree(v) for v in range(g.n))
    picks = [v for v in range(g.n) if g.degree(v) == md][:2]
    if len(picks) < 2:
        picks = [picks[0], next(v for v in range(g.n) if v != picks[0])]
    return Patch(g, (picks[0],), (picks[1],))


def construct_h_pm(delta: Fraction) -> tuple[Patch, Patch]:
    """The dense/sparse 1-patch pair (H+, H-) for a rational delta >= 3/2.

    For delta >= 2: t = ceil(2*delta), H+ is the complete graph on t
    vertices minus its s lexicographically smallest edges where s is the
    floor of its excess, H- minus one more.  For 3/2 <= delta < 2: H+ is
    the fan on the least t with 2t - 3 >= delta*(t - 1) (a path plus a
    vertex joined to all of it), H- the fan one smaller.

    Postconditions re-verified by psi_excess: psi(H+) >= 0 > psi(H-),
    psi(H+) - psi(H-) <= delta - 1, and each graph attains its own excess.
    """
    delta = Fraction(delta)
    if delta < Fraction(3, 2):
        raise ValueError("delta must be at least 3/2")
    if delta >= 2:
        t = math.ceil(2 * delta)
        kt = complete(t)
        s = math.floor(psi_excess(kt, delta))
        lex = kt.sorted_edges()
        h_plus = kt.without_edges(lex[:s])
        h_minus = kt.without_edges(lex[: s + 1])
    else:
        t = 3
        while 2 * t - 3 < delta * (t - 1):
            t += 1
        h_plus = fan(t)
        h_minus = fan(t - 1)
    alpha = psi_excess(h_plus, delta)
    beta = psi_excess(h_minus, delta)
    if not (
        h_plus.n >= 2
        and h_minus.n >= 2
        and alpha >= 0
        and beta < 0
        and alpha - beta <= delta - 1
        and Fraction(h_plus.m) == delta * (h_plus.n - 1) + alpha
        and Fraction(h_minus.m) == delta * (h_minus.n - 1) + beta
    ):
        raise AssertionError("constructed pair fails its postconditions")
    return _as_one_patch(h_plus), _as_one_patch(h_minus)


@dataclass(frozen=True)
class ControlledSequence:
    """A +/- choice sequence with its exact running excess totals."""

    delta: Fraction
    h_plus: Patch
    h_minus: Patch
    psi_plus: Fraction
    psi_minus: Fraction
    choices: tuple[str, ...]  # "+" or "-"
    prefix_sums: tuple[Fraction, ...]

    def patch(self, i: int) -> Patch:
        return self.h_plus if self.choices[i] == "+" else self.h_minus

    def psi(self, i: int) -> Fraction:
        return self.psi_plus if self.choices[i] == "+" else self.psi_minus


def validate_controlled(seq: ControlledSequence) -> list[str]:
    """Violations of the two controlled-sequence conditions: every interval
    excess sum at most delta - 1, and distinct boundary ends per patch."""
    out = []
    bound = seq.delta - 1
    l = len(seq.choices)
    for lo in range(l):
        total = Fraction(0)
        for hi in range(lo, l):
            total += seq.psi(hi)
            if total > bound:
                out.append(f"interval [{lo},{hi}] excess {total} > {bound}")
    for h, name in ((seq.h_plus, "H+"), (seq.h_minus, "H-")):
        if h.a[0] == h.b[0]:
            out.append(f"{name} has equal boundary ends")
    return out


def build_controlled_sequence(delta: Fraction, l: int) -> ControlledSequence:
    """Greedy rule: start sparse; go sparse again whenever the running
    excess is non-negative, dense otherwise.  The running total then stays
    within [psi(H-), psi(H+)] at every prefix, which is asserted, as is the
    interval condition for the whole sequence."""
    if l < 1:
        raise ValueError("l must be positive")
    delta = Fraction(delta)
    h_plus, h_minus = construct_h_pm(delta)
    alpha = psi_excess(h_plus.graph, delta)
    beta = psi_excess(h_minus.graph, delta)
    choices: list[str] = []
    sums: list[Fraction] = []
    total = Fraction(0)
    for _ in range(l):
        pick = "-" if total >= 0 else "+"
        total += beta if pick == "-" else alpha
        assert beta <= total <= alpha
        choices.append(pick)
        sums.append(total)
    seq = ControlledSequence(
        delta, h_plus, h_minus, alpha, beta, tuple(choices), tuple(sums)
    )
    bad = validate_controlled(seq)
    assert not bad, bad
    return seq


PRODUCT_CAP = 2000


def controlled_product_graph(
    seq: ControlledSequence, l: int | None = None
) -> tuple[Graph, int, int, Fraction]:
    """The glued product of the first l patches with its exact statistics.

    Returns (graph, |V|, |E|, density).  One-point gluing creates no edge
    overlap, so the edge count is the plain sum, which is asserted, as is
    the lower bound |E| >= delta*(|V| - 1) + psi(H-).
    """
    l = len(seq.choices) if l is None else l
    if not 1 <= l <= len(seq.choices):
        raise ValueError("l out of range")
    expected_n = sum(seq.patch(i).n for i in range(l)) - (l - 1)
    if expected_n > PRODUCT_CAP:
        raise CapExceeded("product_vertices", PRODUCT_CAP, expected_n)
    out = seq.patch(0)
    for i in range(1, l):
        out = patch_product(out, seq.patch(i))
    g = out.graph
    assert g.m == sum(seq.patch(i).m for i in range(l))
    assert g.n == expected_n
    assert Fraction(g.m) >= seq.delta * (g.n - 1) + seq.psi_minus
    return g, g.n, g.m, Fraction(g.m, g.n)


def sample_topological_minor(g: Graph, rng: random.Random) -> tuple[int, int]:
    """(|V|, |E|) of a random topological minor: random edge subset on its
    support followed by a random run of simple suppressions."""
    es = {e for e in g.sorted_edges() if rng.random() < 0.7}
    vs = {v for e in es for v in e}
    if not vs:
        return (1, 0)
    while True:
        inc: dict[int, list[tuple[int, int]]] = {v: [] for v in vs}
        for e in es:
            inc[e[0]].append(e)
            inc[e[1]].append(e)
        options = []
        for v in vs:
            if len(inc[v]) != 2:
                continue
            (a1, b1), (a2, b2) = inc[v]
            u = a1 if b1 == v else b1
            w = a2 if b2 == v else b2
            if not ((u, w) in es or (w, u) in es):
                options.append((v, u, w))
        if not options or rng.random() < 0.2:
            return (len(vs), len(es))
        v, u, w = rng.choice(options)
        vs.discard(v)
        es -= set(inc[v])
        es.add((u, w) if u < w else (w, u))


def check_class_upper_bound(
    seq: ControlledSequence,
    l: int | None = None,
    samples: int = 100,
    seed: int = 0,
) -> bool:
    """Whether |E| <= delta*|V| - 1 holds for the product graph and for
    ``samples`` random topological minors of it."""
    g, n, m, _ = controlled_product_graph(seq, l)
    if Fraction(m) > seq.delta * n - 1:
        return False
    rng = random.Random(seed)
    for _ in range(samples):
        sn, sm = sample_topological_minor(g, rng)
        if sn >= 1 and Fraction(sm) > seq.delta * sn - 1:
            return False
    return True
