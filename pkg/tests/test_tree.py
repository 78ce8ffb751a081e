"""Core metric-tree behavior: geodesics, betweenness, orders, hulls."""

from fractions import Fraction

import pytest

from dendrolab import (
    Dendrite,
    DendrolabError,
    InvalidPointError,
    Subdendrite,
    arc,
    between,
    branch_points,
    components_at,
    distance,
    endpoints,
    first_point_map,
    median,
    order_of,
)
from conftest import random_point


def test_distance_examples(y3):
    a, b, c, d = (y3.point(x) for x in "abcd")
    m = y3.point_on_edge("a", "b", Fraction(1, 2))
    assert distance(y3, a, c) == 2
    assert distance(y3, b, b) == 0
    assert distance(y3, m, d) == Fraction(3, 2)


def test_point_canonicalization(y3):
    assert y3.point_on_edge("a", "b", 0) == y3.point("a")
    assert y3.point_on_edge("a", "b", 1) == y3.point("b")
    # orientation-independent
    assert y3.point_on_edge("a", "b", Fraction(1, 4)) == y3.point_on_edge(
        "b", "a", Fraction(3, 4)
    )
    with pytest.raises(InvalidPointError):
        y3.point_on_edge("a", "c", Fraction(1, 2))


def test_metric_axioms_random(w3_depth2, rng):
    tree = w3_depth2
    for _ in range(300):
        p, q, r = (random_point(tree, rng) for _ in range(3))
        dpq = distance(tree, p, q)
        assert dpq == distance(tree, q, p)
        assert (dpq == 0) == (p == q)
        assert distance(tree, p, r) <= dpq + distance(tree, q, r)


def test_betweenness_axioms(w3_depth2, rng):
    tree = w3_depth2
    for _ in range(200):
        x, y, z, w = (random_point(tree, rng) for _ in range(4))
        if between(tree, x, y, z) and between(tree, x, z, w):
            assert between(tree, x, y, w)
        assert between(tree, x, y, z) == between(tree, y, x, z)


def test_between_examples(y3):
    a, b, c, d = (y3.point(x) for x in "abcd")
    assert between(y3, a, c, b)
    assert not between(y3, a, d, c)
    assert between(y3, a, a, a)


def test_arc_realizes_between(y3, rng):
    pts = [y3.point(n) for n in y3.node_ids]
    for key in y3.edge_keys:
        for i in range(1, 4):
            pts.append(y3.point_on_edge(key[0], key[1], Fraction(i, 4)))
    for p in pts:
        for q in pts:
            hull = arc(y3, p, q)
            for z in pts:
                assert hull.contains_point(z) == between(y3, p, q, z)


def test_arc_examples(y3):
    a, b, c = (y3.point(x) for x in "abc")
    assert arc(y3, a, c).contains_point(b)
    assert arc(y3, a, a).extremes == (a,)
    m = y3.point_on_edge("a", "b", Fraction(1, 2))
    assert arc(y3, m, y3.point("d")).contains_point(b)


def test_order_of(y3):
    a, b, c = (y3.point(x) for x in "abc")
    whole = y3.whole()
    assert order_of(y3, b, whole) == 3
    assert order_of(y3, b, arc(y3, a, c)) == 2
    assert order_of(y3, a, whole) == 1
    assert order_of(y3, b, Subdendrite(y3, [b])) == 1
    with pytest.raises(InvalidPointError):
        order_of(y3, y3.point("d"), arc(y3, a, c))


def test_endpoints_branch_points(y3):
    a, b, c, d = (y3.point(x) for x in "abcd")
    whole = y3.whole()
    assert endpoints(y3, whole) == {a, c, d}
    assert branch_points(y3, whole) == {b}
    assert endpoints(y3, arc(y3, a, c)) == {a, c}
    assert branch_points(y3, arc(y3, a, c)) == set()
    assert endpoints(y3, Subdendrite(y3, [b])) == {b}


def test_first_point_map(y3):
    a, b, c, d = (y3.point(x) for x in "abcd")
    x = arc(y3, a, b)
    assert first_point_map(y3, x, c) == b
    assert first_point_map(y3, x, a) == a
    assert first_point_map(y3, Subdendrite(y3, [d]), a) == d
    # idempotent
    for y in (a, b, c, d):
        r = first_point_map(y3, x, y)
        assert first_point_map(y3, x, r) == r


def test_first_point_fiber_is_component_union(w3_depth2, rng):
    """The fiber minus its point opens into whole components: every node of
    the fiber stays in the fiber until the path to the subtree hits it."""
    tree = w3_depth2
    from conftest import random_node_subtree

    for _ in range(40):
        sub = random_node_subtree(tree, rng)
        fibers = {}
        for n in tree.node_ids:
            r = first_point_map(tree, sub, tree.point(n))
            fibers.setdefault(r, set()).add(n)
        for r, members in fibers.items():
            for n in members:
                if tree.point(n) == r:
                    continue
                # walking from n toward the subtree stays in the fiber
                steps = tree.path_steps(tree.point(n), r)
                for step in steps:
                    if step[0] == "node" and tree.point(step[1]) != r:
                        assert step[1] in members


def test_hull_canonical_extremes(y3):
    a, b, c, d = (y3.point(x) for x in "abcd")
    # a point between two others is dropped
    sub = Subdendrite(y3, [a, b, c])
    assert sub.extremes == tuple(sorted((a, c)))
    sub2 = Subdendrite(y3, [a, c, d])
    assert set(sub2.extremes) == {a, c, d}
    with pytest.raises(DendrolabError):
        Subdendrite(y3, [])


def test_invalid_trees():
    with pytest.raises(DendrolabError):
        Dendrite([("a", 1)], [("a", "a", 1)])
    with pytest.raises(DendrolabError):  # cycle
        Dendrite(
            [("a", 2), ("b", 2), ("c", 2)],
            [("a", "b", 1), ("b", "c", 1), ("a", "c", 1)],
        )
    with pytest.raises(DendrolabError):  # disconnected
        Dendrite([("a", 1), ("b", 1), ("c", 1), ("d", 1)], [("a", "b", 1)])
    with pytest.raises(DendrolabError):  # degree above finite target order
        Dendrite(
            [("a", 1), ("b", 2), ("c", 1), ("d", 1)],
            [("a", "b", 1), ("b", "c", 1), ("b", "d", 1)],
        )
    with pytest.raises(DendrolabError):  # nonpositive length
        Dendrite([("a", 1), ("b", 1)], [("a", "b", 0)])


def test_median(y3):
    a, b, c, d = (y3.point(x) for x in "abcd")
    assert median(y3, a, c, d) == b
    assert median(y3, a, b, c) == b
    m = y3.point_on_edge("a", "b", Fraction(1, 2))
    assert median(y3, a, m, c) == m


def test_components(y3):
    b = y3.point("b")
    comps = components_at(y3, b)
    assert len(comps) == 3
    node_sets = sorted(tuple(sorted(c.node_set(y3))) for c in comps)
    assert node_sets == [("a",), ("c",), ("d",)]
    for i, c1 in enumerate(comps):
        for c2 in comps[i + 1 :]:
            assert not c1.intersects(y3, c2)
    m = y3.point_on_edge("a", "b", Fraction(1, 2))
    side_a, side_rest = components_at(y3, m)
    # the two sides partition the nodes
    assert side_a.node_set(y3) | side_rest.node_set(y3) == set(y3.node_ids)
