"""Refinement builder and inverse-limit stages against hand expansions."""

from fractions import Fraction

import pytest

from dendrolab import (
    OMEGA,
    BondingFunction,
    DendrolabError,
    PreconditionError,
    RefinementSchedule,
    build_wm,
    check_generic_conditions,
    gamma_chain,
    hausdorff,
    inverse_limit_stage,
    rational_branch_endpoints,
)


def test_depth0_is_unit_arc():
    w = build_wm(RefinementSchedule((3,), 1, Fraction(1, 2), 0))
    assert len(w.node_ids) == 2
    assert w.total_length() == 1


def test_depth1_hand_expansion():
    # one refinement: one interior order-3 node, one sprout
    w = build_wm(RefinementSchedule((3,), 1, Fraction(1, 2), 1))
    assert len(w.node_ids) == 4 and len(w.edge_keys) == 3
    orders = sorted(
        (w.target_order(n) for n in w.node_ids), key=lambda o: (o is OMEGA, o)
    )
    assert orders == [1, 1, 1, 3]
    lengths = sorted(w.edge_length(k) for k in w.edge_keys)
    assert lengths == [Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)]


def test_depth2_hand_expansion():
    w = build_wm(RefinementSchedule((3,), 1, Fraction(1, 2), 2))
    assert len(w.node_ids) == 10


def test_monotone_embedding(w3_depth2, w3_depth3):
    for u in w3_depth2.node_ids:
        assert u in w3_depth3.node_ids
        assert w3_depth2.target_order(u) == w3_depth3.target_order(u) or (
            w3_depth2.degree(u) == 1
        )
        for v in w3_depth2.node_ids:
            assert w3_depth2.node_distance(u, v) == w3_depth3.node_distance(u, v)


def test_arcwise_density_at_scale(w3_depth2, w3_depth3):
    """Every depth-2 edge carries, at depth 3, an interior node of each
    scheduled order."""
    from dendrolab import point_along_path

    for u, v in w3_depth2.edge_keys:
        pu, pv = w3_depth3.point(u), w3_depth3.point(v)
        interior = [
            n
            for n in w3_depth3.path_region(pu, pv).nodes
            if n not in (u, v) and w3_depth3.target_order(n) == 3
        ]
        assert interior


def test_omega_degrees_grow():
    w2 = build_wm(RefinementSchedule((OMEGA,), 1, Fraction(1, 2), 2))
    w3 = build_wm(RefinementSchedule((OMEGA,), 1, Fraction(1, 2), 3))
    omegas2 = [n for n in w2.node_ids if w2.target_order(n) is OMEGA]
    assert omegas2
    for n in omegas2:
        assert w3.degree(n) > w2.degree(n)


def test_schedule_validation():
    with pytest.raises(DendrolabError):
        RefinementSchedule((), 1, Fraction(1, 2), 1)
    with pytest.raises(DendrolabError):
        RefinementSchedule((2,), 1, Fraction(1, 2), 1)
    with pytest.raises(DendrolabError):
        RefinementSchedule((3,), 0, Fraction(1, 2), 1)
    with pytest.raises(DendrolabError):
        RefinementSchedule((3,), 1, Fraction(3, 2), 1)


def test_inverse_limit_examples():
    f = BondingFunction([(Fraction(1, 2), Fraction(3, 4))])
    t1 = inverse_limit_stage(f, 1, 1)
    assert len(t1.node_ids) == 2 and t1.total_length() == 1
    t2 = inverse_limit_stage(f, 1, 2)
    assert len(t2.node_ids) == 4
    assert sorted(t2.edge_length(k) for k in t2.edge_keys) == [
        Fraction(1, 4),
        Fraction(1, 2),
        Fraction(1, 2),
    ]
    # attachment at t = a is degenerate and skipped
    th = inverse_limit_stage(f, Fraction(1, 2), 2)
    assert len(th.node_ids) == 2 and th.total_length() == Fraction(1, 2)


def test_inverse_limit_empty_pairs_is_segment():
    f = BondingFunction([])
    for k in (1, 2, 3):
        seg = inverse_limit_stage(f, 1, k)
        assert len(seg.node_ids) == 2
        assert seg.total_length() == 1


def test_inverse_limit_validation():
    f = BondingFunction([(Fraction(1, 2), Fraction(3, 4))])
    with pytest.raises(PreconditionError):
        inverse_limit_stage(f, 1, 0)
    with pytest.raises(PreconditionError):
        inverse_limit_stage(f, Fraction(3, 2), 1)
    with pytest.raises(DendrolabError):
        BondingFunction([(Fraction(3, 4), Fraction(1, 2))])
    with pytest.raises(DendrolabError):
        BondingFunction([(Fraction(1, 2), Fraction(3, 4)), (Fraction(1, 2), Fraction(7, 8))])


def test_rational_branch_endpoints():
    f1 = BondingFunction([(Fraction(1, 2), Fraction(3, 4))])
    assert rational_branch_endpoints(f1, 1, 2) == set()  # 3/4 is no branch parameter
    assert rational_branch_endpoints(f1, 1, 1) == set()
    f2 = BondingFunction([(Fraction(1, 2), Fraction(3, 4)), (Fraction(3, 4), Fraction(7, 8))])
    tips = rational_branch_endpoints(f2, 1, 2)
    assert len(tips) == 1  # the tip of the branch at 1/2 rests on a_2 = 3/4


def test_gamma_chain_nesting_and_shape():
    f = BondingFunction([(Fraction(1, 2), Fraction(3, 4))])
    c = gamma_chain(f, 2, [Fraction(1)])
    assert len(c.elements) == 2
    c2 = gamma_chain(f, 2, [Fraction(1, 2), Fraction(1)])
    assert len(c2.elements) == 3
    for a, b in zip(c2.elements, c2.elements[1:]):
        assert b.contains(a) and not a.contains(b)
    with pytest.raises(PreconditionError):
        gamma_chain(f, 2, [Fraction(1, 2)])
    with pytest.raises(PreconditionError):
        gamma_chain(f, 2, [Fraction(3, 4), Fraction(1, 2), Fraction(1)])


def test_gamma_chain_gap_bound():
    f = BondingFunction([(Fraction(1, 2), Fraction(3, 4)), (Fraction(1, 4), Fraction(3, 8))])
    step = Fraction(1, 8)
    grid = [Fraction(i, 8) for i in range(1, 9)]
    c = gamma_chain(f, 3, grid)
    max_sprout = max(b - a for a, b in f.pairs)
    for x, y in zip(c.elements, c.elements[1:]):
        assert hausdorff(x, y) <= step + max_sprout


def test_gamma_chain_generic_conditions():
    f = BondingFunction([(Fraction(1, 2), Fraction(3, 4)), (Fraction(1, 4), Fraction(3, 8))])
    grid = [Fraction(i, 8) for i in range(1, 9)]
    c = gamma_chain(f, 3, grid)
    eps = 2 * max(b - a for a, b in f.pairs)
    report = check_generic_conditions(c, eps)
    assert report.root_is_endpoint
    assert report.steps_nowhere_dense
    assert report.willful
