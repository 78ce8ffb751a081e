import random
from fractions import Fraction

import pytest

from dendrolab import (
    OMEGA,
    Dendrite,
    RefinementSchedule,
    Subdendrite,
    build_wm,
)


@pytest.fixture(scope="session")
def y3():
    return Dendrite(
        [("a", 1), ("b", 3), ("c", 1), ("d", 1)],
        [("a", "b", 1), ("b", "c", 1), ("b", "d", 1)],
    )


@pytest.fixture(scope="session")
def path5():
    # a-b-c-e path with d hanging off b
    return Dendrite(
        [("a", 1), ("b", 3), ("c", 2), ("e", 1), ("d", 1)],
        [("a", "b", 1), ("b", "c", 1), ("c", "e", 1), ("b", "d", 1)],
    )


@pytest.fixture(scope="session")
def w3_depth2():
    return build_wm(RefinementSchedule((3,), 1, Fraction(1, 2), 2))


@pytest.fixture(scope="session")
def w3_depth3():
    return build_wm(RefinementSchedule((3,), 1, Fraction(1, 2), 3))


@pytest.fixture(scope="session")
def w3omega_depth3():
    return build_wm(RefinementSchedule((3, OMEGA), 1, Fraction(1, 2), 3))


def random_node_subtree(tree, rng, max_nodes=6):
    ids = list(tree.node_ids)
    k = rng.randrange(1, min(max_nodes, len(ids)) + 1)
    picks = [ids[rng.randrange(len(ids))] for _ in range(k)]
    return Subdendrite(tree, [tree.point(n) for n in picks])


def random_point(tree, rng):
    if rng.random() < 0.5:
        ids = tree.node_ids
        return tree.point(ids[rng.randrange(len(ids))])
    keys = tree.edge_keys
    key = keys[rng.randrange(len(keys))]
    t = Fraction(rng.randrange(1, 16), 16)
    return tree.point_on_edge(key[0], key[1], t)


@pytest.fixture
def rng():
    return random.Random(20240817)
