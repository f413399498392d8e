"""Set-to-set connectivity, Menger duality, and disjoint-path search."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from patchcalc.connectivity import (
    Linkage,
    PathSpec,
    Separation,
    find_disjoint_paths,
    kappa,
    max_linkage,
    min_separation_bruteforce,
    patch_linkage_specs,
    separates,
    validate_linkage,
    validate_separation,
)
from patchcalc.graphs import Graph, complete, cycle, disjoint_union, grid, path

from test_graphs import random_graph


def test_known_kappas():
    assert kappa(complete(5), {0, 1}, {3, 4}) == 2
    assert kappa(cycle(6), {0}, {3}) == 1  # capped by |X|
    assert kappa(cycle(6), {0, 3}, {1, 4}) == 2
    assert kappa(path(5), {0}, {4}) == 1
    assert kappa(grid(3, 3), {0, 2}, {6, 8}) == 2
    # X and Y intersecting: the shared vertex is a one-vertex path
    assert kappa(cycle(4), {0, 1}, {1, 2}) == 2
    assert kappa(disjoint_union(path(2), path(2)), {0}, {2}) == 0


def test_max_linkage_certificates():
    g = grid(3, 3)
    X, Y = {0, 1, 2}, {6, 7, 8}
    k, linkage, sep = max_linkage(g, X, Y)
    assert k == 3 and len(linkage) == 3
    assert not validate_linkage(g, linkage)
    assert not validate_separation(g, sep)
    assert X <= sep.A and Y <= sep.B
    assert sep.order == k
    for p, x in zip(linkage.paths, sorted(X)):
        assert p[0] == x and p[-1] in Y


def test_max_linkage_rejects_foreign_vertices():
    with pytest.raises(ValueError):
        max_linkage(path(3), {0}, {5})


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**28 - 1), st.integers(2, 6))
def test_menger_duality_against_bruteforce(seed, n):
    rng = random.Random(seed)
    g = random_graph(rng, n, rng.random())
    X = {rng.randrange(n) for _ in range(rng.randint(1, 2))}
    Y = {rng.randrange(n) for _ in range(rng.randint(1, 2))}
    k, linkage, sep = max_linkage(g, X, Y)
    assert k == min_separation_bruteforce(g, X, Y)
    assert not validate_linkage(g, linkage)
    assert not validate_separation(g, sep)
    assert X <= sep.A and Y <= sep.B and sep.order == k


def test_separates():
    g = path(5)
    assert separates(g, {2}, {0, 1}, {3, 4})
    assert not separates(g, {3}, {0}, {2})
    assert separates(g, set(), {0}, set())
    with pytest.raises(ValueError):
        separates(g, {1}, {1}, {3})


def test_separation_validator_flags_crossing_edge():
    g = path(3)
    bad = Separation(frozenset({0}), frozenset({1, 2}))
    assert validate_separation(g, bad)


def test_linkage_validator():
    g = cycle(4)
    assert not validate_linkage(g, Linkage(((0, 1), (3, 2))))
    assert validate_linkage(g, Linkage(((0, 2),)))  # non-edge
    assert validate_linkage(g, Linkage(((0, 1), (1, 2))))  # shared vertex
    assert validate_linkage(g, Linkage(((),)))


def test_find_disjoint_paths_basics():
    g = cycle(6)
    specs = [
        PathSpec(0, frozenset({3})),
        PathSpec(1, frozenset({2})),
    ]
    lk = find_disjoint_paths(g, specs)
    assert lk is not None
    assert lk.paths == ((0, 5, 4, 3), (1, 2))
    # three disjoint paths cannot leave vertex 0's two neighbors
    assert find_disjoint_paths(
        path(5), [PathSpec(0, frozenset({4})), PathSpec(2, frozenset({3}))]
    ) is None


def test_find_disjoint_paths_interior_constraint():
    g = cycle(6)
    spec = PathSpec(0, frozenset({3}), interior_forbidden=frozenset({1, 2}))
    lk = find_disjoint_paths(g, [spec])
    assert lk is not None and lk.paths == ((0, 5, 4, 3),)
    # forbidding both arcs leaves nothing
    spec = PathSpec(0, frozenset({3}), interior_forbidden=frozenset({1, 4}))
    assert find_disjoint_paths(g, [spec]) is None
    # a start inside its own target set is a one-vertex path
    lk = find_disjoint_paths(g, [PathSpec(2, frozenset({2, 5}))])
    assert lk is not None and lk.paths == ((2,),)


def test_patch_linkage_specs():
    specs = patch_linkage_specs([(0, 3), (1, 2)])
    assert [s.start for s in specs] == [0, 1]
    assert specs[0].targets == frozenset({3})


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**28 - 1))
def test_find_disjoint_paths_completeness(seed):
    """Cross-check against kappa: k prescribed-end pairs route exactly when
    a size-k linkage exists for matched endpoints on a random graph."""
    rng = random.Random(seed)
    g = random_graph(rng, 6, 0.5)
    xs = rng.sample(range(6), 2)
    ys = rng.sample([v for v in range(6) if v not in xs], 2)
    lk = find_disjoint_paths(g, [
        PathSpec(xs[0], frozenset(ys)),
        PathSpec(xs[1], frozenset(ys)),
    ])
    expected = kappa(g, xs, ys) >= 2
    assert (lk is not None) == expected
    if lk is not None:
        assert not validate_linkage(g, lk)
        assert {p[-1] for p in lk.paths} == set(ys)
