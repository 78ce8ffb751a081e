"""Construction of finite approximations of generalized Ważewski dendrites.

Two constructions are provided: iterated refinement (insert branching
nodes of the scheduled orders on every edge, sprout accordingly) and the
finite stages of the set-valued inverse limit of the unit interval, with
the canonical chain it induces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .chains import Chain
from .errors import DendrolabError, PreconditionError
from .tree import OMEGA, Dendrite, Point, Subdendrite, node_point


@dataclass(frozen=True)
class RefinementSchedule:
    """Orders to realize, insertions per order per edge per level, sprout
    length ratio, and the number of refinement levels."""

    orders: tuple
    count: int = 1
    ratio: Fraction = Fraction(1, 2)
    depth: int = 0

    def __post_init__(self):
        orders = tuple(sorted(set(self.orders), key=lambda o: (o is OMEGA, o if o is not OMEGA else 0)))
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "ratio", Fraction(self.ratio))
        if not orders:
            raise DendrolabError("the order set must be nonempty")
        for o in orders:
            if o is not OMEGA and (not isinstance(o, int) or o < 3):
                raise DendrolabError("orders are integers >= 3 or OMEGA")
        if self.count < 1:
            raise DendrolabError("insertion count must be >= 1")
        if not 0 < self.ratio < 1:
            raise DendrolabError("sprout ratio must lie in (0, 1)")
        if self.depth < 0:
            raise DendrolabError("depth must be >= 0")


def build_wm(schedule: RefinementSchedule) -> Dendrite:
    """Iterated refinement approximation of the dendrite with arcwise dense
    branching of every scheduled order.

    Level 0 is a unit arc.  Each level inserts, on every existing edge,
    ``count`` nodes per scheduled order at equal spacing (cycling through
    the orders), sprouting order-2 new edges per finite order; OMEGA nodes
    get level+1 sprouts at insertion, and every pre-existing OMEGA node
    gains level+1 more sprouts per level so its degree grows without bound.
    """
    orders: dict = {0: 1, 1: 1}
    edges: dict = {(0, 1): Fraction(1)}
    next_id = 2

    def fresh():
        nonlocal next_id
        next_id += 1
        return next_id - 1

    for level in range(1, schedule.depth + 1):
        old_edges = sorted(edges)
        old_omegas = sorted(n for n, o in orders.items() if o is OMEGA)
        per_edge = schedule.count * len(schedule.orders)
        for u, v in old_edges:
            length = edges.pop((u, v))
            piece = length / (per_edge + 1)
            sprout_len = length * schedule.ratio
            prev = u
            for i in range(1, per_edge + 1):
                order = schedule.orders[(i - 1) % len(schedule.orders)]
                mid = fresh()
                orders[mid] = order
                edges[(prev, mid)] = piece
                n_sprouts = level + 1 if order is OMEGA else order - 2
                for _ in range(n_sprouts):
                    tip = fresh()
                    orders[tip] = 1
                    edges[(mid, tip)] = sprout_len
                prev = mid
            edges[(prev, v)] = piece
        # pre-existing OMEGA nodes keep growing
        adj_len: dict = {}
        for (u, v), length in edges.items():
            adj_len[u] = min(adj_len.get(u, length), length)
            adj_len[v] = min(adj_len.get(v, length), length)
        for n in old_omegas:
            sprout_len = adj_len[n] * schedule.ratio
            for _ in range(level + 1):
                tip = fresh()
                orders[tip] = 1
                edges[(n, tip)] = sprout_len
    return Dendrite(
        sorted(orders.items()),
        [(u, v, length) for (u, v), length in sorted(edges.items())],
        depth=schedule.depth,
    )


@dataclass(frozen=True)
class BondingFunction:
    """A finite list of interval pairs (a_n, b_n) describing the set-valued
    bonding relation: the graph is the diagonal with an arc from (a_n, a_n)
    to (b_n, a_n) attached for every pair."""

    pairs: tuple

    def __init__(self, pairs: Iterable):
        pairs = tuple((Fraction(a), Fraction(b)) for a, b in pairs)
        seen = set()
        for a, b in pairs:
            if not 0 < a < b <= 1:
                raise DendrolabError("pairs must satisfy 0 < a < b <= 1")
            if a in seen:
                raise DendrolabError("the a-parameters must be pairwise distinct")
            seen.add(a)
        object.__setattr__(self, "pairs", pairs)

    def branch_parameters(self) -> frozenset:
        return frozenset(a for a, _ in self.pairs)


@dataclass
class _Segment:
    index: int
    parent: int | None  # segment index
    attach: Fraction | None  # coordinate on the parent where it attaches
    start: Fraction  # its own starting coordinate value
    pair: tuple | None  # (a, b) for attached segments, None for the base
    stage: int

    def end_at(self, t: Fraction) -> Fraction:
        if self.pair is None:
            return t
        a, b = self.pair
        return a + (t - a) * (b - a) / (1 - a)


def _stage_segments(f: BondingFunction, t: Fraction, k: int) -> list[_Segment]:
    """Segments of the k-stage inverse-limit tree of [0, t].

    Stage i+1 attaches, at every point of the current tree whose running
    coordinate equals a_n (excluding each segment's own starting point,
    which belongs to its parent), a new segment for the pair (a_n, b_n).
    """
    segments = [_Segment(0, None, None, Fraction(0), None, 1)]
    for stage in range(2, k + 1):
        new = []
        for seg in segments:
            lo = seg.start
            hi = seg.end_at(t)
            for a, b in f.pairs:
                if a >= t:
                    continue  # degenerate attachment interval: skipped
                include_start = seg.parent is None  # base owns its own start
                if (lo < a or (include_start and lo <= a)) and a <= hi:
                    new.append(
                        _Segment(len(segments) + len(new), seg.index, a, a, (a, b), stage)
                    )
        segments.extend(new)
    return segments


class _StageTree:
    """A realized k-stage inverse-limit tree with segment geometry kept
    around so chain elements can be located exactly."""

    def __init__(self, f: BondingFunction, t: Fraction, k: int):
        t = Fraction(t)
        if not 0 < t <= 1:
            raise PreconditionError("t must lie in (0, 1]")
        if k < 1:
            raise PreconditionError("the stage count must be >= 1")
        self.t = t
        self.segments = _stage_segments(f, t, k)
        branch_params = f.branch_parameters()

        marks: dict[int, set] = {s.index: {s.start, s.end_at(t)} for s in self.segments}
        for s in self.segments:
            if s.parent is not None:
                marks[s.parent].add(s.attach)
        self.marks = {i: sorted(ms) for i, ms in marks.items()}

        node_ids: dict[tuple, int] = {}
        orders: dict[int, object] = {}
        counter = 0

        def node_for(seg: _Segment, coord: Fraction) -> int:
            nonlocal counter
            while seg.parent is not None and coord == seg.start:
                coord = seg.attach
                seg = self.segments[seg.parent]
            key = (seg.index, coord)
            if key not in node_ids:
                node_ids[key] = counter
                orders[counter] = 1
                counter += 1
            return node_ids[key]

        edges = []
        for seg in self.segments:
            coords = self.marks[seg.index]
            for c0, c1 in zip(coords, coords[1:]):
                edges.append((node_for(seg, c0), node_for(seg, c1), c1 - c0))
        # attachment junctions have unbounded order in the limit, and so do
        # tips of attached segments resting on a branch parameter
        for seg in self.segments:
            if seg.parent is not None:
                orders[node_for(self.segments[seg.parent], seg.attach)] = OMEGA
            tip = seg.end_at(t)
            if seg.parent is not None and tip in branch_params:
                orders[node_for(seg, tip)] = OMEGA

        self._node_ids = node_ids
        self.tree = Dendrite(sorted(orders.items()), edges, depth=k)

    def point_at(self, seg: _Segment, coord: Fraction) -> Point:
        while seg.parent is not None and coord == seg.start:
            coord = seg.attach
            seg = self.segments[seg.parent]
        nid = self._node_ids.get((seg.index, coord))
        if nid is not None:
            return node_point(nid)
        coords = self.marks[seg.index]
        below = max(c for c in coords if c < coord)
        above = min(c for c in coords if c > coord)
        u = self._node_ids_resolved(seg, below)
        v = self._node_ids_resolved(seg, above)
        return self.tree.point_on_edge(u, v, (coord - below) / (above - below))

    def _node_ids_resolved(self, seg: _Segment, coord: Fraction) -> int:
        while seg.parent is not None and coord == seg.start:
            coord = seg.attach
            seg = self.segments[seg.parent]
        return self._node_ids[(seg.index, coord)]


def inverse_limit_stage(f: BondingFunction, t, k: int) -> Dendrite:
    """The k-stage inverse limit of [0, t] under the truncated bonding
    relation, realized as a finite metric tree."""
    return _StageTree(f, Fraction(t), k).tree


def rational_branch_endpoints(f: BondingFunction, t, k: int) -> set:
    """Stage-tree endpoints that are latent branching points: tips of
    attached segments whose stabilized coordinate is itself a branch
    parameter."""
    tree = _StageTree(f, Fraction(t), k).tree
    return {
        node_point(n)
        for n in tree.node_ids
        if tree.degree(n) == 1 and tree.target_order(n) is OMEGA
    }


def gamma_chain(f: BondingFunction, k: int, grid) -> Chain:
    """The canonical chain of stage-k trees over a parameter grid ending at
    1, each embedded in the full-parameter stage tree, prefixed with the
    singleton at coordinate zero."""
    grid = [Fraction(g) for g in grid]
    if not grid or grid[-1] != 1:
        raise PreconditionError("the grid must end at 1")
    if any(not 0 < g <= 1 for g in grid):
        raise PreconditionError("grid values must lie in (0, 1]")
    if any(a >= b for a, b in zip(grid, grid[1:])):
        raise PreconditionError("the grid must be strictly increasing")
    if k < 1:
        raise PreconditionError("the stage count must be >= 1")

    stage = _StageTree(f, Fraction(1), k)
    tree, segments = stage.tree, stage.segments
    zero = stage.point_at(segments[0], Fraction(0))

    def alive(seg: _Segment, t: Fraction) -> bool:
        while seg.parent is not None:
            if seg.pair[0] >= t or seg.attach > segments[seg.parent].end_at(t):
                return False
            seg = segments[seg.parent]
        return True

    def element(t: Fraction) -> Subdendrite:
        tips = [zero]
        for seg in segments:
            if alive(seg, t):
                tips.append(stage.point_at(seg, seg.end_at(t)))
        return Subdendrite(tree, tips)

    elements = [Subdendrite(tree, [zero])]
    for t in grid:
        elements.append(element(t))
    cleaned = [elements[0]]
    for e in elements[1:]:
        if not e.region.equals(cleaned[-1].region):
            cleaned.append(e)
    return Chain(tree, cleaned)
