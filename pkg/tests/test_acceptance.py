"""Acceptance gate: ten exact criteria covering the whole library.

Each test prints a single PASS or FAIL line; every comparison is exact
(integers and Fractions), with zero tolerance.
"""

import random
import sys
import time
from fractions import Fraction

from patchcalc.canon import enumerate_graphs
from patchcalc.connectivity import kappa, min_separation_bruteforce
from patchcalc.decomposition import (
    PathDecomposition,
    check_perfectly_linked,
    is_appearance_universal,
    patchwork_from_path_decomposition,
    validate_stitched,
)
from patchcalc.extremal import (
    ClassSpec,
    detect_period,
    ex_table,
    ex_table_bruteforce,
    f_values,
    subset_sum_factorial,
)
from patchcalc.graphs import Graph, complete, disjoint_union
from patchcalc.minors import all_topo_minor_counts, find_minor_model, validate_model
from patchcalc.patches import (
    Patch,
    classify,
    e_value,
    is_linked,
    patch_power,
    patch_product,
    phi,
    power_density_limit,
)
from patchcalc.patchwork import (
    Patchwork,
    contract_many,
    contract_patch,
    embed_patchwork,
    graph_phi,
    stitched_minor_model,
)
from patchcalc.topodensity import (
    build_controlled_sequence,
    check_class_upper_bound,
    construct_h_pm,
    controlled_product_graph,
    psi_excess,
    validate_controlled,
)
from patchcalc.walls import (
    build_wall,
    identity_embedding,
    is_crossless,
    is_filter,
    is_proper_subwall,
    nested_subwalls,
    restrict_embedding,
)

from test_graphs import random_graph
from test_patches import strip_patch


def report(num: int, desc: str):
    # one verdict line per criterion, on the real stdout so it survives
    # output capture
    def wrap(fn):
        def inner():
            try:
                fn()
            except BaseException:
                print(f"FAIL criterion {num}: {desc}", file=sys.__stdout__)
                raise
            print(f"PASS criterion {num}: {desc}", file=sys.__stdout__)

        inner.__name__ = fn.__name__
        return inner

    return wrap


# -- helpers ----------------------------------------------------------------


def random_linked_patch(rng: random.Random, refined: bool = True) -> Patch:
    """A random linked patch with q in {1, 2} and at most 5 vertices."""
    while True:
        q = rng.randint(1, 2)
        n = rng.randint(q + (1 if refined else 0), 5)
        if n < q or (refined and n == q):
            continue
        g = random_graph(rng, n, 0.4 + 0.4 * rng.random())
        a = tuple(rng.sample(range(n), q))
        b = tuple(rng.sample(range(n), q))
        h = Patch(g, a, b)
        if is_linked(h) and (not refined or classify(h).refined):
            return h


def random_embedded_patchwork(rng: random.Random, l: int):
    """Refined patches placed on disjoint host islands, with a few pendant
    vertices each attached to one boundary side of one patch."""
    patches = []
    q = rng.randint(1, 2)
    while len(patches) < l:
        h = random_linked_patch(rng)
        if h.q == q:
            patches.append(h)
    blocks = [p.graph for p in patches]
    host = blocks[0]
    offsets = [0]
    for b in blocks[1:]:
        offsets.append(host.n)
        host = disjoint_union(host, b)
    # pendant vertices seeing a single boundary side
    extra_edges = set(host.edges)
    n = host.n
    for _ in range(rng.randint(0, 2)):
        j = rng.randrange(l)
        side = patches[j].a if rng.random() < 0.5 else patches[j].b
        targets = rng.sample(side, rng.randint(1, len(side)))
        for t in targets:
            extra_edges.add((offsets[j] + t, n))
        n += 1
    host = Graph(n, frozenset(extra_edges))
    placements = [
        tuple(offsets[j] + v for v in range(patches[j].n)) for j in range(l)
    ]
    return embed_patchwork(host, Patchwork(tuple(patches)), placements)


# -- the ten criteria --------------------------------------------------------


@report(1, "extremal tables with oracle agreement and period detection")
def test_criterion_01():
    t0 = time.monotonic()
    forests = ClassSpec((complete(3),), "minor")
    sp = ClassSpec((complete(4),), "minor")

    table3 = ex_table(forests, 9)
    assert [(n, ex) for n, ex, _ in table3.rows] == [
        (n, n - 1) for n in range(1, 10)
    ]
    table4 = ex_table(sp, 8)
    for n, ex, _ in table4.rows:
        if n >= 2:
            assert ex == 2 * n - 3

    for spec, table in ((forests, table3), (sp, table4)):
        for n, ex, _ in table.rows:
            if n <= 6:
                assert ex == ex_table_bruteforce(spec, n)

    report3 = detect_period(f_values(table3, Fraction(1)))
    assert report3 is not None
    assert report3.period == 1 and report3.residues == (Fraction(-1),)
    report4 = detect_period(f_values(table4, Fraction(2))[1:], first_n=2)
    assert report4 is not None
    assert report4.period == 1 and report4.residues == (Fraction(-3),)

    assert time.monotonic() - t0 < 60


@report(2, "strip patch power density limit is exactly 3, stable by n = 3")
def test_criterion_02():
    assert power_density_limit(strip_patch()) == Fraction(3)
    assert power_density_limit(strip_patch(), horizon=3) == Fraction(3)


@report(3, "exact identity suite on 1000 randomized instances each")
def test_criterion_03():
    rng = random.Random(20260823)
    deltas = [Fraction(3, 2), Fraction(5, 3), Fraction(2)]

    # product vertex count and boundary-adjusted edge superadditivity
    for _ in range(1000):
        h1 = random_linked_patch(rng, refined=False)
        h2 = random_linked_patch(rng, refined=False)
        while h2.q != h1.q:
            h2 = random_linked_patch(rng, refined=False)
        prod = patch_product(h1, h2)
        assert prod.n == h1.n + h2.n - h1.q
        assert e_value(prod) >= e_value(h1) + e_value(h2)

    # single contraction, summed contraction, and phi additivity
    for _ in range(1000):
        embedded = random_embedded_patchwork(rng, rng.randint(1, 3))
        pw = embedded.patchwork
        j = rng.randrange(len(pw))
        g1, _ = contract_patch(
            embedded.host, pw.patches[j], embedded.placements[j]
        )
        assert g1.m == embedded.host.m - e_value(pw.patches[j])

        idx = [i for i in range(len(pw)) if rng.random() < 0.7] or [0]
        g2 = contract_many(embedded, idx)
        assert g2.m == embedded.host.m - sum(
            e_value(pw.patches[i]) for i in idx
        )
        assert g2.n == embedded.host.n - sum(
            pw.patches[i].n - pw.q for i in idx
        )
        for delta in deltas:
            lhs = graph_phi(g2, delta)
            rhs = graph_phi(embedded.host, delta) - sum(
                phi(pw.patches[i], delta)[0] for i in idx
            )
            assert lhs == rhs


@report(4, "set connectivity equals brute-force minimum separation, n <= 6")
def test_criterion_04():
    t0 = time.monotonic()
    rng = random.Random(4)
    for n in range(1, 7):
        for g in enumerate_graphs(n):
            for _ in range(20):
                X = set(rng.sample(range(n), rng.randint(1, max(1, n // 2))))
                Y = set(rng.sample(range(n), rng.randint(1, max(1, n // 2))))
                assert kappa(g, X, Y) == min_separation_bruteforce(g, X, Y)
    assert time.monotonic() - t0 < 120


@report(5, "restricted patchwork products are minors of the full product")
def test_criterion_05():
    rng = random.Random(5)
    done = 0
    while done < 100:
        l = rng.randint(2, 3)
        patches = []
        q = rng.randint(1, 2)
        while len(patches) < l:
            h = random_linked_patch(rng)
            if h.q == q:
                patches.append(h)
        pw = Patchwork(tuple(patches))
        full = pw.product_graph()
        if full.n > 14:
            continue
        j_size = rng.randint(1, l - 1)
        sub = pw.restrict(rng.sample(range(l), j_size))
        pattern = sub.product_graph()
        model = find_minor_model(full, pattern)
        assert model is not None
        assert not validate_model(full, pattern, model)
        done += 1


@report(6, "controlled sequences: pair construction, bounds, and sampling")
def test_criterion_06():
    t0 = time.monotonic()
    deltas = [
        Fraction(3, 2), Fraction(5, 3), Fraction(7, 4),
        Fraction(2), Fraction(5, 2), Fraction(3),
    ]
    for delta in deltas:
        h_plus, h_minus = construct_h_pm(delta)
        alpha = psi_excess(h_plus.graph, delta)
        beta = psi_excess(h_minus.graph, delta)
        # the four pair conditions, certified by the brute-force excess
        assert alpha >= 0 > beta
        assert alpha - beta <= delta - 1
        assert Fraction(h_plus.m) == delta * (h_plus.n - 1) + alpha
        assert Fraction(h_minus.m) == delta * (h_minus.n - 1) + beta

        seq = build_controlled_sequence(delta, 50)
        # every prefix stays inside [beta, alpha]; every interval sum is
        # at most delta - 1
        assert all(beta <= s <= alpha for s in seq.prefix_sums)
        assert not validate_controlled(seq)

        # edge bounds for every prefix product, by exact bookkeeping
        nv, ne = 0, 0
        l0 = None
        for k in range(50):
            p = seq.patch(k)
            nv += p.n - (1 if k else 0)
            ne += p.m
            assert delta * (nv - 1) + beta <= Fraction(ne) <= delta * nv - 1
            if l0 is None and abs(Fraction(ne, nv) - delta) < Fraction(5, 100):
                l0 = k + 1
        assert l0 is not None
        g, n, m, d = controlled_product_graph(seq, l0)
        assert abs(d - delta) < Fraction(5, 100)
        g, n, m, _ = controlled_product_graph(seq)
        assert (n, m) == (nv, ne)

        # sampled topological minors respect the class upper bound
        assert check_class_upper_bound(seq, samples=100, seed=6)
    assert time.monotonic() - t0 < 300


@report(7, "suppression-state excess equals topological-minor enumeration")
def test_criterion_07():
    t0 = time.monotonic()
    deltas = [Fraction(3, 2), Fraction(2), Fraction(5, 2)]
    for n in range(2, 7):
        for g in enumerate_graphs(n):
            counts = all_topo_minor_counts(g)
            for delta in deltas:
                expected = max(
                    [Fraction(m) - delta * (k - 1) for k, m in counts if k >= 2],
                    default=-delta,
                )
                expected = max(expected, -delta)
                assert psi_excess(g, delta) == expected
    assert time.monotonic() - t0 < 600


@report(8, "factorial subset sums: exhaustive p = 2, 10^5 random p = 3")
def test_criterion_08():
    from itertools import product as iproduct

    for c in iproduct((1, 2), repeat=4):
        assert sum(c[i] for i in subset_sum_factorial(c, 2)) == 2
    rng = random.Random(8)
    for _ in range(100_000):
        c = [rng.randint(1, 3) for _ in range(18)]
        assert sum(c[i] for i in subset_sum_factorial(c, 3)) == 6


@report(9, "wall suite: crosses, corner chords, filters, and restrictions")
def test_criterion_09():
    for size in (2, 3, 4):
        w = build_wall(size, size)
        we = identity_embedding(w)
        assert is_crossless(we)
        # adding both opposite-corner chords creates a cross
        chords = Graph(w.n, w.graph.edges | {
            tuple(sorted((w.corner_bl, w.corner_tr))),
            tuple(sorted((w.corner_tl, w.corner_br))),
        })
        assert not is_crossless(identity_embedding(w, chords))

    # the nested subwall cycles are disjoint and each separates a vertex
    # strictly inside the innermost cycle from the rim
    w7 = build_wall(7, 7)
    subs = nested_subwalls(w7)
    assert len(subs) == 2 and all(is_proper_subwall(s, w7) for s in subs)
    idx = w7.index
    cycles = [[idx[s.coords[v]] for v in s.outer_cycle] for s in subs]
    inner = subs[-1]
    skip = set(inner.outer_cycle) | set(inner.pegs_left) | set(inner.pegs_right)
    core = [idx[inner.coords[v]] for v in range(inner.n) if v not in skip]
    rim = list(w7.outer_cycle)
    assert is_filter(w7.graph, cycles, core[:1], rim)
    # a set meeting one of the cycles is rejected
    assert not is_filter(w7.graph, cycles, set(cycles[-1][:1]), rim)

    # restriction to a proper subwall preserves crosslessness
    for base in (5, 6):
        w = build_wall(base, base)
        we = identity_embedding(w)
        for sub in nested_subwalls(w):
            assert is_crossless(restrict_embedding(we, sub))


@report(10, "path decomposition pipeline emits a valid stitched patchwork")
def test_criterion_10():
    g = patch_power(strip_patch(), 9).graph
    k = g.n // 3 - 1
    pd = PathDecomposition(
        tuple(frozenset(range(3 * t, 3 * t + 6)) for t in range(k))
    )
    assert is_appearance_universal(pd)
    assert check_perfectly_linked(g, pd.as_tree())
    q, emb, stitches = patchwork_from_path_decomposition(g, pd)
    assert q == 3
    assert all(classify(p).refined for p in emb.patchwork.patches)
    assert not validate_stitched(emb, stitches)
    model = stitched_minor_model(emb, stitches)
    product = emb.patchwork.product_graph()
    assert not validate_model(g, product, model)
