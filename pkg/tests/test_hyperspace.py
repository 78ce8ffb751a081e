"""Hausdorff metric on subtrees: examples, axioms, grid oracle, Vietoris."""

from fractions import Fraction

import pytest

from dendrolab import (
    AmbientMismatchError,
    Chain,
    OpenBall,
    Subdendrite,
    VietorisBasic,
    arc,
    directed_hausdorff,
    hausdorff,
    hausdorff2,
    perturb_to_full,
    vietoris_member,
)
from conftest import random_node_subtree


def grid_oracle(tree, a, b, step):
    """Independent max-min oracle over dense point samples."""
    pa = a.region.sample_points(tree, step)
    pb = b.region.sample_points(tree, step)
    da = {p: min(float(tree.distance(p, q)) for q in pb) for p in pa}
    db = {q: min(float(tree.distance(p, q)) for p in pa) for q in pb}
    return max(max(da.values()), max(db.values()))


def test_directed_examples(y3):
    a, b, c = (y3.point(x) for x in "abc")
    whole = y3.whole()
    ab, bc = arc(y3, a, b), arc(y3, b, c)
    assert directed_hausdorff(ab, whole) == 0
    # farthest points of Y3 from [a,b] are c and d, both at distance 1 of b
    assert directed_hausdorff(whole, ab) == 1
    assert directed_hausdorff(ab, bc) == 1


def test_hausdorff_examples(y3):
    a, b, c = (y3.point(x) for x in "abc")
    k = arc(y3, a, c)
    assert hausdorff(k, k) == 0
    assert hausdorff(arc(y3, a, b), arc(y3, b, c)) == 1


def test_hausdorff_metric_axioms(w3_depth2, rng):
    tree = w3_depth2
    for _ in range(150):
        a = random_node_subtree(tree, rng)
        b = random_node_subtree(tree, rng)
        c = random_node_subtree(tree, rng)
        hab = hausdorff(a, b)
        assert hab == hausdorff(b, a)
        assert (hab == 0) == (a == b)
        assert hausdorff(a, c) <= hab + hausdorff(b, c)


def test_exact_matches_grid_oracle(w3_depth3, rng):
    tree = w3_depth3
    step = Fraction(1, 64)
    for _ in range(50):
        a = random_node_subtree(tree, rng)
        b = random_node_subtree(tree, rng)
        exact = hausdorff(a, b)
        approx = grid_oracle(tree, a, b, step)
        assert approx <= float(exact) + 1e-12
        assert float(exact) <= approx + float(step)


def test_directed_antitone_in_subset(w3_depth2, rng):
    tree = w3_depth2
    for _ in range(40):
        a = random_node_subtree(tree, rng)
        b = Subdendrite(tree, list(a.extremes) + [tree.point(tree.node_ids[rng.randrange(len(tree.node_ids))])])
        c = tree.whole()
        assert directed_hausdorff(c, a) >= directed_hausdorff(c, b)


def test_ambient_mismatch(y3, w3_depth2):
    with pytest.raises(AmbientMismatchError):
        hausdorff(y3.whole(), w3_depth2.whole())


def test_hausdorff2(y3):
    a, b, c, d = (y3.point(x) for x in "abcd")
    whole = y3.whole()
    c1 = Chain(y3, [Subdendrite(y3, [a]), arc(y3, a, b), whole])
    assert hausdorff2(c1, c1) == 0
    # replace an element by a small enlargement
    eps = Fraction(1, 8)
    mid = y3.point_on_edge("b", "c", eps)
    c2 = Chain(y3, [Subdendrite(y3, [a]), Subdendrite(y3, [a, mid]), whole])
    assert hausdorff2(c1, c2) <= eps
    # disjoint middles: equals brute-force set distance
    c3 = Chain(y3, [Subdendrite(y3, [a]), arc(y3, a, d), whole])
    brute = max(
        max(min(hausdorff(x, y) for y in c3.elements) for x in c1.elements),
        max(min(hausdorff(x, y) for x in c1.elements) for y in c3.elements),
    )
    assert hausdorff2(c1, c3) == brute > 0


def test_vietoris_member(y3):
    a, b, d = (y3.point(x) for x in "abd")
    whole = y3.whole()
    assert vietoris_member(Subdendrite(y3, [b]), VietorisBasic([OpenBall(b, Fraction(1))]))
    assert not vietoris_member(whole, VietorisBasic([OpenBall(b, Fraction(1, 2))]))
    assert not vietoris_member(
        arc(y3, a, b), VietorisBasic([OpenBall(a, Fraction(2)), OpenBall(d, Fraction(1, 2))])
    )
    # boundary is genuinely open: a ball of radius exactly 1 around b
    # does not contain the leaves at distance 1
    assert not vietoris_member(whole, VietorisBasic([OpenBall(b, Fraction(1))]))
    assert vietoris_member(whole, VietorisBasic([OpenBall(b, Fraction(9, 8))]))


def test_vietoris_matches_hausdorff_convergence(w3_depth2):
    """Shrinking Hausdorff distance to K means eventually entering every
    basic neighborhood of K built from open balls."""
    tree = w3_depth2
    p, q = tree.point(0), tree.point(2)
    k = arc(tree, p, q)
    basics = [
        VietorisBasic([OpenBall(p, Fraction(3, 2)), OpenBall(q, Fraction(3, 2))]),
        VietorisBasic([OpenBall(p, Fraction(9, 8)), OpenBall(q, Fraction(1))]),
    ]
    assert all(vietoris_member(k, v) for v in basics)
    # approximations: k plus a shrinking whisker out of an edge at q
    key = next(
        (u, v)
        for u, v in tree.edge_keys
        if 2 in (u, v) and not k.region.covers_edge_end((u, v), 2)
    )
    seq = []
    for denom in (3, 6, 12, 24, 48):
        t = Fraction(1, denom)
        extra = tree.point_on_edge(key[0], key[1], t if key[0] == 2 else 1 - t)
        kn = Subdendrite(tree, list(k.extremes) + [extra])
        seq.append(kn)
    dists = [hausdorff(k, kn) for kn in seq]
    assert all(x > y for x, y in zip(dists, dists[1:]))
    for v in basics:
        tail_member = [vietoris_member(kn, v) for kn in seq]
        # eventually inside every basic neighborhood of k
        assert tail_member[-1]


def test_arc_survival_under_perturbation(w3_depth2, rng):
    """Small Hausdorff perturbations keep a nondegenerate piece of any
    interior sub-arc (delta = eps/2 suffices)."""
    from dendrolab import point_along_path

    tree = w3_depth2
    k = tree.whole()
    x, y = tree.point(0), tree.point(1)  # ends of the original arc, distance 1
    a1 = point_along_path(tree, x, y, Fraction(1, 3))
    a2 = point_along_path(tree, x, y, Fraction(2, 3))
    seg = arc(tree, a1, a2)
    eps = Fraction(1, 8)
    delta = eps / 2
    for seed in range(30):
        kp = random_node_subtree(tree, rng)
        kp = perturb_to_full(kp, Fraction(1, 16)) if not kp.is_degenerate() else kp
        if hausdorff(k, kp) >= delta:
            continue
        inter = kp.region.intersect(seg.region)
        width = sum(
            (hi - lo) * tree.edge_length(key) for key, (lo, hi) in inter.spans.items()
        )
        assert width > 0
