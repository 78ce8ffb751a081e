"""Classification predicates on subcontinua: branching-point maximality,
fullness, nowhere-density at a resolution, endpoint comparison, and the
constructive repair that perturbs a subtree into a full one."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DendrolabError, InvalidPointError, PreconditionError
from .tree import (
    Component,
    Dendrite,
    Point,
    Subdendrite,
    _edge_key,
    components_at,
    first_point_map,
    node_point,
    order_at_least,
    order_of,
)

FIBER = "FIBER"
ARC = "ARC"
COMPONENT = "COMPONENT"


def is_maximal_branch(k: Subdendrite, b: Point, mode: str = COMPONENT) -> bool:
    """Does the subtree meet every ambient direction at the node ``b``?

    Three independent formulations that must agree: COMPONENT checks each
    component of ambient-minus-b directly, FIBER asks whether the first
    point map fiber of b over the subtree is just {b}, ARC looks for an arc
    from an outside node to b meeting the subtree only at b.
    """
    tree = k.ambient
    if not b.is_node():
        raise InvalidPointError("maximality is defined at ambient nodes")
    if not k.contains_point(b):
        raise InvalidPointError("the node is not in the subdendrite")
    if mode == COMPONENT:
        return all(
            k.region.covers_edge_end(_edge_key(b.node, nbr), b.node)
            for nbr, _ in tree.neighbors(b.node)
        )
    if mode == FIBER:
        return not any(
            first_point_map(tree, k, node_point(n)) == b
            for n in tree.node_ids
            if n not in k.region.nodes
        )
    if mode == ARC:
        for n in tree.node_ids:
            if n in k.region.nodes:
                continue
            meet = tree.path_region(node_point(n), b).intersect(k.region)
            if meet.nodes == frozenset({b.node}) and not meet.spans:
                return False
        return True
    raise DendrolabError(f"unknown maximality mode {mode!r}")


def is_full(k: Subdendrite) -> bool:
    """True iff the subtree is nondegenerate and every ambient branching
    node it contains branches maximally inside it."""
    if k.is_degenerate():
        return False
    tree = k.ambient
    return all(
        is_maximal_branch(k, node_point(n), COMPONENT)
        for n in k.region.nodes
        if tree.is_branching_node(n)
    )


def perturb_to_full(k: Subdendrite, epsilon: Fraction) -> Subdendrite:
    """Grow a short initial segment into every unmet direction at every
    violating branching node; the result is full and within epsilon."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise PreconditionError("epsilon must be positive")
    if k.is_degenerate():
        raise PreconditionError("cannot repair a degenerate subdendrite")
    tree = k.ambient
    new_points = list(k.extremes)
    changed = False
    for n in sorted(k.region.nodes, key=repr):
        if not tree.is_branching_node(n):
            continue
        for nbr, length in tree.neighbors(n):
            key = _edge_key(n, nbr)
            if k.region.covers_edge_end(key, n):
                continue
            step = min(epsilon / 2, length / 2)
            t = step / length
            new_points.append(tree.point_on_edge(n, nbr, t))
            changed = True
    if not changed:
        return k
    return Subdendrite(tree, new_points)


def is_nowhere_dense(k: Subdendrite, epsilon: Fraction) -> bool:
    """No open epsilon-ball at an ambient branching node fits inside the
    subtree (the resolution-parameterized finite reading)."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise PreconditionError("epsilon must be positive")
    tree = k.ambient
    return not any(
        ball_inside_region(tree, node_point(b), epsilon, k.region)
        for b in tree.branching_nodes()
    )


def ball_inside_region(tree: Dendrite, center: Point, radius: Fraction, region) -> bool:
    """Is the open ball entirely contained in the region?  True iff the
    region's complement comes no closer than ``radius`` to the center."""
    if not region.contains_point(center):
        return False
    for n in tree.node_ids:
        if n not in region.nodes and tree.distance(center, tree.point(n)) < radius:
            return False
    for key in tree.edge_keys:
        u, v = key
        span = region.spans.get(key)
        gaps = []
        if span is None:
            gaps.append((Fraction(0), Fraction(1)))
        else:
            lo, hi = span
            if lo > 0:
                gaps.append((Fraction(0), lo))
            if hi < 1:
                gaps.append((hi, Fraction(1)))
        for glo, ghi in gaps:
            if glo >= ghi:
                continue
            # distance to the center is concave along the edge, so the gap's
            # nearest approach is at one of its ends
            d = min(
                tree.distance(center, tree.point_on_edge(u, v, glo)),
                tree.distance(center, tree.point_on_edge(u, v, ghi)),
            )
            if d < radius:
                return False
    return True


@dataclass
class EndpointWitness:
    point: Point
    component: Component


def endpoint_diff(k: Subdendrite) -> list[EndpointWitness]:
    """Endpoints of the subtree that are not endpoints of the ambient, each
    with a component of ambient-minus-point disjoint from the subtree; the
    returned witness components are pairwise disjoint."""
    tree = k.ambient
    out = []
    for p in k.extremes:
        # every degree-1 node counts as an endpoint of the ambient; at
        # finite depth truncated growth sites are endpoints too
        if p.is_node() and tree.degree(p.node) == 1:
            continue
        witness = None
        for comp in components_at(tree, p):
            probe = comp
            # disjoint from k iff the component's first direction is uncovered
            if p.is_node():
                covered = k.region.covers_edge_end(probe.edge, p.node)
            else:
                lo, hi = k.region.spans.get(p.edge, (p.t, p.t))
                covered = (hi > p.t) if probe.toward_high else (lo < p.t)
            if not covered:
                witness = probe
                break
        if witness is not None:
            out.append(EndpointWitness(p, witness))
    return out


@dataclass
class FullCopyReport:
    """Finite witness that a full subtree looks like the ambient: no extreme
    sits at an ambient branching node, and along every maximal arc the
    branching orders inside the subtree match the ambient's."""

    passes: bool
    endpoint_violations: list = field(default_factory=list)
    order_mismatches: list = field(default_factory=list)


def full_copy_diagnostics(k: Subdendrite) -> FullCopyReport:
    if not is_full(k):
        raise PreconditionError("diagnostics are defined for full subdendrites only")
    tree = k.ambient
    report = FullCopyReport(passes=True)
    for p in k.extremes:
        if p.is_node() and tree.is_branching_node(p.node):
            report.endpoint_violations.append(p)
    exts = list(k.extremes)
    for i, p in enumerate(exts):
        for q in exts[i + 1 :]:
            path = tree.path_region(p, q)
            for n in sorted(path.nodes, key=repr):
                np = node_point(n)
                if np == p or np == q or not tree.is_branching_node(n):
                    continue
                inner = order_of(tree, np, k)
                if inner != tree.target_order(n):
                    report.order_mismatches.append((np, inner, tree.target_order(n)))
    if report.endpoint_violations or report.order_mismatches:
        report.passes = False
    return report
