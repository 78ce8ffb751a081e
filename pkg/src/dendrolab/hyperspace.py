"""Exact Hausdorff distances and Vietoris membership on subtrees.

The distance from a point to a subtree is concave and piecewise linear
along every edge, so directed suprema are attained at nodes, at span
boundaries, or at tent peaks; all are enumerated exactly.  Vietoris
membership reduces to probing finitely many breakpoints and midpoints,
since coverage by open balls is constant between breakpoints.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import AmbientMismatchError, DendrolabError
from .tree import Dendrite, Point, Region, Subdendrite, _id_key


def _check_shared_ambient(a: Subdendrite, b: Subdendrite) -> Dendrite:
    if a.ambient is not b.ambient:
        raise AmbientMismatchError("subdendrites live in different ambient trees")
    return a.ambient


def node_distances_to_region(tree: Dendrite, region: Region) -> dict:
    """Exact distance from every node to a nonempty region (tree Dijkstra)."""
    if region.is_empty():
        raise DendrolabError("distance to the empty region is undefined")
    init: dict = {n: Fraction(0) for n in region.nodes}
    for key, (lo, hi) in region.spans.items():
        u, v = key
        length = tree.edge_length(key)
        if lo * length < init.get(u, lo * length + 1):
            init[u] = lo * length
        if (1 - hi) * length < init.get(v, (1 - hi) * length + 1):
            init[v] = (1 - hi) * length
    dist: dict = {}
    heap = [(d, _id_key(n), n) for n, d in init.items()]
    heapq.heapify(heap)
    while heap:
        d, _, n = heapq.heappop(heap)
        if n in dist:
            continue
        dist[n] = d
        for nbr, length in tree.neighbors(n):
            if nbr not in dist:
                heapq.heappush(heap, (d + length, _id_key(nbr), nbr))
    return dist


def point_to_region_distance(tree: Dendrite, p: Point, region: Region, ndist: dict) -> Fraction:
    """Distance from a point to a region, given node distances to it."""
    if region.contains_point(p):
        return Fraction(0)
    if p.is_node():
        return ndist[p.node]
    u, v = p.edge
    length = tree.edge_length(p.edge)
    best = min(p.t * length + ndist[u], (1 - p.t) * length + ndist[v])
    span = region.spans.get(p.edge)
    if span is not None:
        lo, hi = span
        if p.t < lo:
            best = min(best, (lo - p.t) * length)
        else:
            best = min(best, (p.t - hi) * length)
    return best


def _max_over_span(tree, key, alo, ahi, region, ndist):
    """Max distance to ``region`` over the sub-span [alo, ahi] of one edge."""
    u, v = key
    length = tree.edge_length(key)
    du, dv = ndist[u], ndist[v]
    candidates = {alo, ahi}
    span = region.spans.get(key)
    peaks = [(length + dv - du) / (2 * length)]
    if span is not None:
        lo, hi = span
        candidates.update(c for c in (lo, hi) if alo < c < ahi)
        # tents against the in-edge portion of the region
        peaks.append((lo * length - du) / (2 * length))
        peaks.append((length + hi * length + dv) / (2 * length))
    candidates.update(t for t in peaks if alo < t < ahi)
    best = Fraction(0)
    for t in candidates:
        d = point_to_region_distance(tree, tree.point_on_edge(u, v, t), region, ndist)
        if d > best:
            best = d
    return best


def directed_region_hausdorff(tree: Dendrite, areg: Region, breg: Region) -> Fraction:
    """sup over points of one region of the distance to another (exact)."""
    ndist = node_distances_to_region(tree, breg)
    best = Fraction(0)
    for n in areg.nodes:
        if ndist[n] > best:
            best = ndist[n]
    for key, (lo, hi) in areg.spans.items():
        d = _max_over_span(tree, key, lo, hi, breg, ndist)
        if d > best:
            best = d
    return best


def directed_hausdorff(a: Subdendrite, b: Subdendrite) -> Fraction:
    """sup over points of ``a`` of the distance to ``b`` (exact)."""
    tree = _check_shared_ambient(a, b)
    return directed_region_hausdorff(tree, a.region, b.region)


def hausdorff(a: Subdendrite, b: Subdendrite) -> Fraction:
    """Hausdorff distance: max of the two directed distances."""
    return max(directed_hausdorff(a, b), directed_hausdorff(b, a))


def hausdorff2(chain1, chain2) -> Fraction:
    """Hausdorff distance between two finite families of subdendrites,
    with ``hausdorff`` as the ground metric."""
    elems1 = list(chain1.elements) if hasattr(chain1, "elements") else list(chain1)
    elems2 = list(chain2.elements) if hasattr(chain2, "elements") else list(chain2)
    if not elems1 or not elems2:
        raise DendrolabError("empty chain")
    if elems1[0].ambient is not elems2[0].ambient:
        raise AmbientMismatchError("chains live in different ambient trees")
    cache: dict = {}

    def ground(i, j):
        if (i, j) not in cache:
            cache[(i, j)] = hausdorff(elems1[i], elems2[j])
        return cache[(i, j)]

    d12 = max(min(ground(i, j) for j in range(len(elems2))) for i in range(len(elems1)))
    d21 = max(min(ground(i, j) for i in range(len(elems1))) for j in range(len(elems2)))
    return max(d12, d21)


# -- Vietoris basic sets -------------------------------------------------------


@dataclass(frozen=True)
class OpenBall:
    center: Point
    radius: Fraction


class VietorisBasic:
    """A basic Vietoris set described by finitely many open balls."""

    __slots__ = ("opens",)

    def __init__(self, opens: Iterable[OpenBall]):
        self.opens = tuple(opens)
        if not self.opens:
            raise DendrolabError("a Vietoris basic set needs at least one open")
        if any(o.radius <= 0 for o in self.opens):
            raise DendrolabError("ball radii must be positive")


def ball_contains_point(tree: Dendrite, ball: OpenBall, p: Point) -> bool:
    return tree.distance(ball.center, p) < ball.radius


def _ball_breakpoints(tree: Dendrite, ball: OpenBall, key) -> list:
    """Edge parameters where membership in the open ball can flip."""
    u, v = key
    length = tree.edge_length(key)
    r = ball.radius
    du = tree.distance(ball.center, tree.point(u))
    dv = tree.distance(ball.center, tree.point(v))
    ts = []
    if du < r:
        ts.append((r - du) / length)
    if dv < r:
        ts.append(1 - (r - dv) / length)
    if not ball.center.is_node() and ball.center.edge == key:
        ts.append(ball.center.t - r / length)
        ts.append(ball.center.t + r / length)
    return [t for t in ts if 0 < t < 1]


def _probe_params(lo, hi, breaks) -> list:
    """Points of the closed [lo, hi] where coverage must be checked: both
    ends, every breakpoint inside, and a midpoint of every gap."""
    marks = sorted({lo, hi, *[t for t in breaks if lo < t < hi]})
    probes = list(marks)
    probes.extend((a + b) / 2 for a, b in zip(marks, marks[1:]))
    return probes


def vietoris_member(k: Subdendrite, basic: VietorisBasic) -> bool:
    """True iff the subdendrite lies in the union of the opens and meets
    every listed open (exact: probes all breakpoints and gap midpoints)."""
    tree = k.ambient
    for ball in basic.opens:
        tree.check_point(ball.center)
    region = k.region

    def in_some_ball(p: Point) -> bool:
        return any(ball_contains_point(tree, ball, p) for ball in basic.opens)

    # covered by the union
    for n in region.nodes:
        if not in_some_ball(tree.point(n)):
            return False
    for key, (lo, hi) in region.spans.items():
        breaks: list = []
        for ball in basic.opens:
            breaks.extend(_ball_breakpoints(tree, ball, key))
        for t in _probe_params(lo, hi, breaks):
            if not in_some_ball(tree.point_on_edge(key[0], key[1], t)):
                return False
    # meets every open
    for ball in basic.opens:
        hit = any(ball_contains_point(tree, ball, tree.point(n)) for n in region.nodes)
        if not hit:
            for key, (lo, hi) in region.spans.items():
                breaks = _ball_breakpoints(tree, ball, key)
                if any(
                    ball_contains_point(tree, ball, tree.point_on_edge(key[0], key[1], t))
                    for t in _probe_params(lo, hi, breaks)
                ):
                    hit = True
                    break
        if not hit:
            return False
    return True
