"""Tree and path decompositions, exact treewidth, bounded-adhesion
treewidth, path extraction, and the decomposition-to-patchwork pipeline."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from patchcalc.decomposition import (
    PathDecomposition,
    TreeDecomposition,
    check_perfectly_linked,
    exact_treewidth,
    extract_path_decomposition,
    is_appearance_universal,
    is_proper,
    patchwork_from_path_decomposition,
    theta_treewidth,
    validate_path_decomposition,
    validate_tree_decomposition,
)
from patchcalc.errors import CapExceeded
from patchcalc.graphs import Graph, complete, cycle, grid, path
from patchcalc.minors import validate_model
from patchcalc.patches import patch_power
from patchcalc.patchwork import stitched_minor_model

from test_graphs import random_graph
from test_patches import strip_patch


def path_td(n: int) -> tuple[Graph, TreeDecomposition]:
    g = path(n)
    bags = tuple(frozenset({i, i + 1}) for i in range(n - 1))
    return g, TreeDecomposition(path(n - 1), bags)


def strip_power_pd(exponent: int) -> tuple[Graph, PathDecomposition]:
    """The natural sliding-window decomposition of a strip patch power."""
    g = patch_power(strip_patch(), exponent).graph
    k = g.n // 3 - 1
    return g, PathDecomposition(
        tuple(frozenset(range(3 * t, 3 * t + 6)) for t in range(k))
    )


def test_tree_decomposition_metrics():
    g, td = path_td(5)
    assert td.order == 4 and td.width == 2 and td.adhesion == 1
    assert td.edge_bag(0, 1) == {1}
    assert not validate_tree_decomposition(g, td)
    assert is_proper(td)
    with pytest.raises(ValueError):
        TreeDecomposition(path(3), (frozenset({0}),))


def test_tree_decomposition_validator_flags():
    g = path(3)
    # missing edge coverage
    td = TreeDecomposition(path(2), (frozenset({0, 1}), frozenset({2})))
    assert any("in no bag" in v for v in validate_tree_decomposition(g, td))
    # disconnected appearance
    td = TreeDecomposition(
        path(3), (frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 1}))
    )
    assert any("not connected" in v for v in validate_tree_decomposition(g, td))
    # not a tree
    td = TreeDecomposition(
        cycle(3), (frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 2}))
    )
    assert any("not a tree" in v for v in validate_tree_decomposition(g, td))


def test_tree_decomposition_json():
    _, td = path_td(4)
    assert TreeDecomposition.from_json(td.to_json()) == td
    with pytest.raises(ValueError):
        TreeDecomposition.from_json('{"tree_edges": [], "bags": {"1": [0]}}')


def test_path_decomposition():
    g, pd = strip_power_pd(9)
    assert pd.order == 3 and pd.width == 6 and pd.adhesion == 3
    assert not validate_path_decomposition(g, pd)
    assert is_appearance_universal(pd)
    assert is_proper(pd.as_tree())
    with pytest.raises(ValueError):
        PathDecomposition(())
    single = PathDecomposition((frozenset({0}),))
    assert single.as_tree().order == 1


def test_appearance_universal():
    assert is_appearance_universal(
        PathDecomposition((frozenset({0, 1}), frozenset({1, 2})))
    )
    # vertex 0 in bags 0 and 2 but not 1
    assert not is_appearance_universal(
        PathDecomposition((frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 2})))
    )
    # a vertex in every bag is allowed
    assert is_appearance_universal(
        PathDecomposition(
            (frozenset({0, 1}), frozenset({0, 2}), frozenset({0, 3}))
        )
    )


def test_perfectly_linked():
    g, pd = strip_power_pd(9)
    assert check_perfectly_linked(g, pd.as_tree())
    td = TreeDecomposition(
        path(2), (frozenset({0, 1, 2}), frozenset({2, 3}))
    )
    assert check_perfectly_linked(path(4), td)  # single adhesion set
    # mixed adhesion sizes fail immediately
    assert not check_perfectly_linked(
        path(4),
        TreeDecomposition(
            path(3),
            (frozenset({0, 1}), frozenset({1, 2, 3}), frozenset({2, 3})),
        ),
    )


def test_exact_treewidth_known_values():
    assert exact_treewidth(Graph(0)) == 0
    assert exact_treewidth(Graph(3)) == 1
    assert exact_treewidth(path(6)) == 2
    assert exact_treewidth(cycle(6)) == 3
    assert exact_treewidth(complete(5)) == 5
    assert exact_treewidth(grid(3, 3)) == 4
    assert exact_treewidth(grid(4, 3)) == 4
    with pytest.raises(CapExceeded):
        exact_treewidth(grid(4, 4))


def test_theta_treewidth_known_values():
    assert theta_treewidth(path(4), 2) == 2
    assert theta_treewidth(path(3), 1) == 3  # adhesion 0 forces one bag
    assert theta_treewidth(cycle(4), 2) == 4
    assert theta_treewidth(cycle(4), 3) == 3
    with pytest.raises(ValueError):
        theta_treewidth(path(3), 0)
    with pytest.raises(CapExceeded):
        theta_treewidth(grid(3, 3), 3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**28 - 1), st.integers(1, 6))
def test_theta_treewidth_unconstrained_equals_exact(seed, n):
    rng = random.Random(seed)
    g = random_graph(rng, n, rng.random())
    assert theta_treewidth(g, n + 1) == exact_treewidth(g)


def test_extract_path_decomposition_long_path():
    g, td = path_td(8)
    pd = extract_path_decomposition(g, td, 7, theta=1)
    assert pd is not None
    assert pd.order >= 7 and pd.adhesion <= 1
    assert not validate_path_decomposition(g, pd)
    assert is_proper(pd.as_tree())


def test_extract_path_decomposition_high_degree():
    # a star with an extra pendant: the decomposition tree is a star, so
    # only the pigeonhole branch can reach four bags
    g = Graph(6, frozenset({(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)}))
    tree = Graph(5, frozenset({(0, 1), (0, 2), (0, 3), (0, 4)}))
    td = TreeDecomposition(
        tree,
        (
            frozenset({0, 5}),
            frozenset({0, 1}),
            frozenset({0, 2}),
            frozenset({0, 3}),
            frozenset({0, 4}),
        ),
    )
    pd = extract_path_decomposition(g, td, 4, theta=1)
    assert pd is not None
    assert pd.order >= 4 and pd.adhesion <= 1
    assert not validate_path_decomposition(g, pd)


def test_extract_rejects_bad_input():
    g, td = path_td(4)
    with pytest.raises(ValueError):
        extract_path_decomposition(g, td, 3, theta=0)  # adhesion exceeds theta


def test_pipeline_single_patch():
    g, pd = strip_power_pd(9)
    q, emb, stitches = patchwork_from_path_decomposition(g, pd)
    assert q == 3
    assert len(emb.patchwork) == 1
    assert stitches == {}
    from patchcalc.patches import classify

    assert all(classify(p).refined for p in emb.patchwork.patches)


def test_pipeline_multiple_patches():
    g, pd = strip_power_pd(27)
    q, emb, stitches = patchwork_from_path_decomposition(g, pd, spacing=4)
    assert q == 3
    assert len(emb.patchwork) >= 2
    assert set(stitches) == {
        (i, j) for i in range(q) for j in range(len(emb.patchwork) - 1)
    }
    model = stitched_minor_model(emb, stitches)
    product = emb.patchwork.product_graph()
    assert not validate_model(g, product, model)


def test_pipeline_input_checks():
    g, pd = strip_power_pd(9)
    with pytest.raises(ValueError):
        patchwork_from_path_decomposition(g, PathDecomposition(pd.bags[:2]))
    with pytest.raises(ValueError):
        patchwork_from_path_decomposition(g, pd, spacing=0)
    # a decomposition that is not appearance-universal is rejected
    bad = PathDecomposition(
        (
            frozenset(range(0, 6)),
            frozenset(range(3, 9)),
            frozenset(range(6, 12)) | {0},
        )
    )
    with pytest.raises(ValueError):
        patchwork_from_path_decomposition(g, bad)
