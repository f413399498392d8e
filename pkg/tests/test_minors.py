"""Minor-model and subdivision-embedding search with validator cross-checks."""

import random

from hypothesis import given, settings, strategies as st

from patchcalc.graphs import (
    Graph,
    complete,
    complete_bipartite,
    cycle,
    grid,
    path,
    robertson_chain,
)
from patchcalc.minors import (
    Model,
    all_topo_minor_counts,
    find_minor_model,
    find_topo_embedding,
    has_minor,
    has_topo_minor,
    validate_embedding,
    validate_model,
)

from test_graphs import random_graph


def test_known_minors():
    assert has_minor(grid(3, 3), complete(4))
    assert not has_minor(grid(3, 3), complete(5))
    assert has_minor(complete(5), complete(5))
    assert has_minor(cycle(6), complete(3))  # contract the cycle down
    assert not has_minor(cycle(6), complete(4))
    assert has_minor(complete_bipartite(3, 3), cycle(6))
    assert not has_minor(complete_bipartite(3, 3), complete(5))
    assert has_minor(robertson_chain(4), complete(3))
    assert not has_minor(path(6), cycle(3))


def test_model_is_validated():
    host, pattern = grid(3, 3), complete(4)
    model = find_minor_model(host, pattern)
    assert model is not None
    assert not validate_model(host, pattern, model)


def test_required_anchoring():
    host = grid(3, 3)
    req = {0: frozenset({4})}
    model = find_minor_model(host, complete(4), required=req)
    assert model is not None
    assert not validate_model(host, complete(4), model, required=req)
    assert 4 in model.branch_sets[0]
    # anchoring two pattern vertices at the same host vertex is impossible
    assert find_minor_model(
        host, complete(4), required={0: frozenset({4}), 1: frozenset({4})}
    ) is None


def test_validate_model_flags_defects():
    host = path(4)
    bad = Model({0: frozenset({0, 2}), 1: frozenset({3})})
    assert any("not connected" in v for v in validate_model(host, path(2), bad))
    bad = Model({0: frozenset({0}), 1: frozenset({3})})
    assert any("no host edge" in v for v in validate_model(host, path(2), bad))
    bad = Model({0: frozenset({0, 1}), 1: frozenset({1, 2})})
    assert any("overlaps" in v for v in validate_model(host, path(2), bad))


def test_known_topo_minors():
    assert has_topo_minor(grid(3, 3), complete(4))
    # K5 is a minor of a big enough wall-like graph but degrees cap subdivisions
    assert not has_topo_minor(grid(4, 4), complete(5))
    assert has_topo_minor(complete(5), complete(4))
    assert has_topo_minor(cycle(7), cycle(3))
    assert not has_topo_minor(path(7), cycle(3))


def test_topo_embedding_is_validated():
    host, pattern = grid(3, 3), complete(4)
    emb = find_topo_embedding(host, pattern)
    assert emb is not None
    assert not validate_embedding(host, pattern, emb)
    fixed = {0: 4}
    emb = find_topo_embedding(host, pattern, fixed=fixed)
    assert emb is not None
    assert not validate_embedding(host, pattern, emb, fixed=fixed)


def minor_by_closure(host: Graph, pattern: Graph) -> bool:
    """Independent oracle: breadth-first closure under single vertex
    deletions, edge deletions, and edge contractions, checking isomorphism
    by sorted degree refinement via canonical forms."""
    from patchcalc.canon import canonical_form

    target = canonical_form(pattern)
    seen = set()
    stack = [host]
    while stack:
        g = stack.pop()
        form = canonical_form(g)
        if form in seen:
            continue
        seen.add(form)
        if form == target:
            return True
        if g.n < pattern.n:
            continue
        for v in range(g.n):
            stack.append(g.delete_vertex(v))
        for u, v in g.edges:
            stack.append(g.without_edges([(u, v)]))
            stack.append(g.contract_edge(u, v))
    return False


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**28 - 1))
def test_minor_search_matches_closure_oracle(seed):
    rng = random.Random(seed)
    host = random_graph(rng, 5, 0.5)
    pattern = random_graph(rng, rng.randint(2, 4), 0.6)
    assert has_minor(host, pattern) == minor_by_closure(host, pattern)


def test_all_topo_minor_counts():
    counts = all_topo_minor_counts(cycle(4))
    # every cycle length 3..4 plus all forests that arise
    assert (4, 4) in counts and (3, 3) in counts
    assert (2, 1) in counts and (2, 0) in counts
    assert all(n >= 2 for n, _ in counts)
    assert (3, 2) in all_topo_minor_counts(path(3))
