"""Extremal tables, periodicity of the shifted values, pruned graphs, and
the factorial subset-sum subroutine."""

import math
import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from patchcalc.errors import CapExceeded
from patchcalc.extremal import (
    ClassSpec,
    ExtremalTable,
    detect_period,
    ex_table,
    ex_table_bruteforce,
    f_values,
    is_pruned,
    prune_search,
    subset_sum_factorial,
)
from patchcalc.graphs import Graph, complete, cycle, path
from patchcalc.patchwork import graph_phi

from test_graphs import random_graph

FORESTS = ClassSpec((complete(3),), "minor")
SERIES_PARALLEL = ClassSpec((complete(4),), "minor")
MATCHINGS = ClassSpec((path(3),), "topo")


def test_class_spec_validation():
    with pytest.raises(ValueError):
        ClassSpec((), "minor")
    with pytest.raises(ValueError):
        ClassSpec((complete(3),), "subgraph")
    with pytest.raises(ValueError):
        ClassSpec((Graph(0),), "minor")
    assert FORESTS.admits(path(5))
    assert not FORESTS.admits(cycle(5))
    assert MATCHINGS.admits(Graph(4, frozenset({(0, 1), (2, 3)})))
    assert not MATCHINGS.admits(path(3))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**28 - 1))
def test_admits_child_matches_admits(seed):
    rng = random.Random(seed)
    spec = rng.choice([FORESTS, SERIES_PARALLEL])
    # grow a member by one vertex; the anchored check must agree with the
    # unanchored one on such extensions
    g = random_graph(rng, 4, rng.random())
    while not spec.admits(g):
        g = random_graph(rng, 4, rng.random())
    child = Graph(5, g.edges | {(u, 4) for u in range(4) if rng.random() < 0.5})
    assert spec.admits_child(child, 4) == spec.admits(child)


def test_ex_table_forests():
    table = ex_table(FORESTS, 6)
    assert [(n, ex) for n, ex, _ in table.rows] == [
        (1, 0), (2, 1), (3, 2), (4, 3), (5, 4), (6, 5),
    ]
    for n, ex, witness in table.rows:
        assert witness.n == n and witness.m == ex
        assert FORESTS.admits(witness)


def test_ex_table_series_parallel():
    table = ex_table(SERIES_PARALLEL, 6)
    assert [ex for _, ex, _ in table.rows] == [0, 1, 3, 5, 7, 9]


def test_ex_table_matchings():
    table = ex_table(MATCHINGS, 6)
    assert [ex for _, ex, _ in table.rows] == [0, 1, 1, 2, 2, 3]


def test_ex_table_caps_and_errors():
    with pytest.raises(CapExceeded):
        ex_table(FORESTS, 10)
    with pytest.raises(ValueError):
        ex_table(FORESTS, 0)
    # forbidding a single vertex empties the class immediately
    with pytest.raises(ValueError):
        ex_table(ClassSpec((Graph(1),), "minor"), 2)


def test_ex_table_matches_bruteforce():
    for spec in (FORESTS, SERIES_PARALLEL, MATCHINGS):
        table = ex_table(spec, 5)
        for n, ex, _ in table.rows:
            assert ex == ex_table_bruteforce(spec, n)


def test_f_values():
    table = ex_table(FORESTS, 5)
    assert f_values(table, Fraction(1)) == (Fraction(-1),) * 5
    bad = ExtremalTable(FORESTS, (table.rows[0], table.rows[2]))
    with pytest.raises(ValueError):
        f_values(bad, Fraction(1))


def test_detect_period_constant():
    report = detect_period([Fraction(-1)] * 6, Fraction(1))
    assert report is not None
    assert report.period == 1 and report.onset == 0
    assert report.residues == (Fraction(-1),)


def test_detect_period_two():
    f = [Fraction(x) for x in (0, 1, 0, 1, 0, 1)]
    report = detect_period(f)
    assert report is not None
    assert report.period == 2 and report.onset == 0
    assert report.residues == (Fraction(1), Fraction(0))
    # every tabulated value matches its residue class
    for n, v in enumerate(f, start=1):
        assert v == report.residues[n % 2]


def test_detect_period_with_onset_and_inconclusive():
    f = [Fraction(x) for x in (5, -1, -1, -1, -1)]
    report = detect_period(f)
    assert report is not None
    assert report.period == 1 and report.onset == 1
    assert detect_period([Fraction(n * n) for n in range(6)]) is None
    assert detect_period([Fraction(0)]) is None  # too short for any period


def test_is_pruned():
    assert is_pruned(complete(4), 2, Fraction(2))
    # a pendant vertex costs more than it brings at delta = 3/2
    g = Graph(4, complete(3).edges | {(2, 3)})
    assert not is_pruned(g, 1, Fraction(3, 2))
    assert is_pruned(complete(3), 1, Fraction(3, 2))


def test_prune_search_p1():
    g = Graph(4, complete(3).edges | {(2, 3)})
    result = prune_search(g, 1, Fraction(3, 2), 3)
    assert result.outcome == "P1"
    assert result.graph == complete(3)
    assert result.epsilon == Fraction(1, 4)
    assert is_pruned(result.graph, 1, Fraction(3, 2))
    assert graph_phi(result.graph, Fraction(3, 2)) >= graph_phi(g, Fraction(3, 2))


def test_prune_search_guarantee_failure():
    # the isolated vertex cannot be dropped below n0, so the only candidate
    # is unpruned and too sparse for the density certificate
    g = Graph(4, complete(3).edges)
    with pytest.raises(ValueError):
        prune_search(g, 1, Fraction(3, 2), 4)
    with pytest.raises(ValueError):
        prune_search(path(2), 1, Fraction(2), 5)  # n0 exceeds |V|


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**28 - 1))
def test_prune_search_certificates(seed):
    rng = random.Random(seed)
    g = random_graph(rng, 5, 0.6)
    delta = Fraction(rng.randint(1, 3), rng.randint(1, 2))
    p = rng.randint(1, 2)
    try:
        result = prune_search(g, p, delta, rng.randint(1, 3))
    except ValueError:
        return
    if result.outcome == "P1":
        assert is_pruned(result.graph, p, delta)
        assert graph_phi(result.graph, delta) >= graph_phi(g, delta)
    else:
        assert result.outcome == "P2"
        assert Fraction(result.graph.m, result.graph.n) >= delta + result.epsilon


def test_subset_sum_factorial_exhaustive_p2():
    for c in product((1, 2), repeat=4):
        picked = subset_sum_factorial(c, 2)
        assert sum(c[i] for i in picked) == 2


def test_subset_sum_factorial_random_p3():
    rng = random.Random(0)
    for _ in range(200):
        c = [rng.randint(1, 3) for _ in range(18)]
        picked = subset_sum_factorial(c, 3)
        assert sum(c[i] for i in picked) == math.factorial(3)
        assert all(0 <= i < len(c) for i in picked)


def test_subset_sum_factorial_validation():
    with pytest.raises(ValueError):
        subset_sum_factorial([1, 2], 2)  # too short
    with pytest.raises(ValueError):
        subset_sum_factorial([1, 2, 3, 1], 2)  # entry out of range
    with pytest.raises(ValueError):
        subset_sum_factorial([], 0)
