"""Finite metric trees: the substrate for every other module.

A :class:`Dendrite` is a finite tree with positive rational edge lengths
and a *target order* attached to every node (the order the node is meant
to have in the idealized limit object; ``OMEGA`` for unbounded).  Points
live on nodes or in edge interiors, subtrees are stored canonically as
geodesic hulls of their extreme points, and all arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Hashable, Iterable, Mapping

from .errors import AmbientMismatchError, DendrolabError, InvalidPointError


class _Omega:
    """Sentinel for the unbounded order; compares above every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "OMEGA"

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __hash__(self):
        return hash("__omega__")


OMEGA = _Omega()

NodeId = Hashable
EdgeKey = tuple  # (u, v) with u < v


def order_at_least(order, k: int) -> bool:
    """True when a (possibly OMEGA) order is >= k."""
    return order is OMEGA or order >= k


def _id_key(x):
    return (x.__class__.__name__, x)


@total_ordering
@dataclass(frozen=True)
class Point:
    """A location on a dendrite: a node, or an interior position on an edge.

    ``edge`` is None for node points.  Edge points are canonical: the edge
    key is oriented (small id, large id) and ``t`` lies strictly in (0, 1);
    boundary parameters are normalized to the node form on construction.
    """

    node: NodeId | None
    edge: EdgeKey | None
    t: Fraction | None

    def is_node(self) -> bool:
        return self.edge is None

    def _key(self):
        if self.edge is None:
            return (0, _id_key(self.node), 0)
        return (1, tuple(_id_key(n) for n in self.edge), self.t)

    def __lt__(self, other):
        return self._key() < other._key()

    def __repr__(self):
        if self.edge is None:
            return f"Point({self.node!r})"
        return f"Point({self.edge[0]!r}~{self.edge[1]!r}@{self.t})"


def node_point(n: NodeId) -> Point:
    return Point(node=n, edge=None, t=None)


def _edge_key(u: NodeId, v: NodeId) -> EdgeKey:
    return (u, v) if _id_key(u) <= _id_key(v) else (v, u)


class Dendrite:
    """A finite metric tree with per-node target orders.

    ``nodes`` is an iterable of ``(node_id, target_order)`` pairs where the
    order is an integer >= 1 or ``OMEGA``; ``edges`` an iterable of
    ``(u, v, length)`` with strictly positive rational lengths.  The edge
    graph must be connected and acyclic.
    """

    def __init__(self, nodes: Iterable, edges: Iterable, depth: int | None = None):
        self._orders: dict[NodeId, object] = {}
        for nid, order in nodes:
            if nid in self._orders:
                raise DendrolabError(f"duplicate node id {nid!r}")
            if order is not OMEGA and (not isinstance(order, int) or order < 1):
                raise DendrolabError(f"target order of {nid!r} must be >= 1 or OMEGA")
            self._orders[nid] = order
        self._lengths: dict[EdgeKey, Fraction] = {}
        adj: dict[NodeId, list] = {n: [] for n in self._orders}
        for u, v, length in edges:
            length = Fraction(length)
            if length <= 0:
                raise DendrolabError(f"edge ({u!r},{v!r}) must have positive length")
            if u not in self._orders or v not in self._orders or u == v:
                raise DendrolabError(f"edge ({u!r},{v!r}) does not join two distinct nodes")
            key = _edge_key(u, v)
            if key in self._lengths:
                raise DendrolabError(f"duplicate edge {key!r}")
            self._lengths[key] = length
            adj[u].append((v, length))
            adj[v].append((u, length))
        self._adj = {n: tuple(sorted(nbrs, key=lambda p: _id_key(p[0]))) for n, nbrs in adj.items()}
        self.depth = depth

        if self._orders:
            if len(self._lengths) != len(self._orders) - 1:
                raise DendrolabError("edge count must be node count - 1")
            self._index_from_root()
        else:
            raise DendrolabError("a dendrite has at least one node")

        for n, order in self._orders.items():
            if order is not OMEGA and self.degree(n) > order:
                raise DendrolabError(f"node {n!r} has degree above its target order")

        self._dist_cache: dict[NodeId, dict[NodeId, Fraction]] = {}
        self._whole: Subdendrite | None = None

    def _index_from_root(self):
        root = min(self._orders, key=_id_key)
        parent: dict[NodeId, NodeId | None] = {root: None}
        depth = {root: 0}
        dist = {root: Fraction(0)}
        stack = [root]
        seen = 1
        while stack:
            n = stack.pop()
            for nbr, length in self._adj[n]:
                if nbr not in parent:
                    parent[nbr] = n
                    depth[nbr] = depth[n] + 1
                    dist[nbr] = dist[n] + length
                    stack.append(nbr)
                    seen += 1
        if seen != len(self._orders):
            raise DendrolabError("edge graph is not connected")
        self._bfs_root = root
        self._parent = parent
        self._depth = depth
        self._distroot = dist

    # -- basic structure ---------------------------------------------------

    @property
    def node_ids(self) -> tuple:
        return tuple(sorted(self._orders, key=_id_key))

    @property
    def edge_keys(self) -> tuple:
        return tuple(sorted(self._lengths, key=lambda k: (_id_key(k[0]), _id_key(k[1]))))

    def target_order(self, n: NodeId):
        return self._orders[n]

    def degree(self, n: NodeId) -> int:
        return len(self._adj[n])

    def neighbors(self, n: NodeId):
        return self._adj[n]

    def edge_length(self, key: EdgeKey) -> Fraction:
        return self._lengths[key]

    def is_branching_node(self, n: NodeId) -> bool:
        """Branching in the limit semantics: target order >= 3 (or OMEGA)."""
        return order_at_least(self._orders[n], 3)

    def branching_nodes(self) -> tuple:
        return tuple(n for n in self.node_ids if self.is_branching_node(n))

    def leaf_nodes(self) -> tuple:
        return tuple(n for n in self.node_ids if self.degree(n) == 1)

    def mesh(self) -> Fraction:
        """Scale of the approximation: twice the longest edge.

        Within this radius of any node the tree is fully refined, which is
        the resolution at which the chain and fullness machinery operates.
        """
        if not self._lengths:
            return Fraction(0)
        return 2 * max(self._lengths.values())

    def total_length(self) -> Fraction:
        return sum(self._lengths.values(), Fraction(0))

    def diameter(self) -> Fraction:
        ids = self.node_ids
        if len(ids) == 1:
            return Fraction(0)
        far = max(ids, key=lambda n: (self._distroot[n], _id_key(n)))
        d = self.node_distances(far)
        return max(d.values())

    # -- points ------------------------------------------------------------

    def point(self, n: NodeId) -> Point:
        if n not in self._orders:
            raise InvalidPointError(f"unknown node {n!r}")
        return node_point(n)

    def point_on_edge(self, u: NodeId, v: NodeId, t) -> Point:
        """Point at parameter ``t`` (measured from ``u``) on edge (u, v)."""
        key = _edge_key(u, v)
        if key not in self._lengths:
            raise InvalidPointError(f"unknown edge ({u!r},{v!r})")
        t = Fraction(t)
        if key[0] != u:
            t = 1 - t
        if t == 0:
            return node_point(key[0])
        if t == 1:
            return node_point(key[1])
        if not 0 < t < 1:
            raise InvalidPointError("edge parameter outside [0, 1]")
        return Point(node=None, edge=key, t=t)

    def check_point(self, p: Point):
        if p.is_node():
            if p.node not in self._orders:
                raise InvalidPointError(f"unknown node {p.node!r}")
        else:
            if p.edge not in self._lengths:
                raise InvalidPointError(f"unknown edge {p.edge!r}")
            if p.t is None or not 0 < p.t < 1:
                raise InvalidPointError("edge point must have parameter in (0, 1)")

    # -- metric ------------------------------------------------------------

    def node_distances(self, source: NodeId) -> Mapping[NodeId, Fraction]:
        """Exact distances from ``source`` to every node (cached)."""
        cached = self._dist_cache.get(source)
        if cached is None:
            dist = {source: Fraction(0)}
            stack = [source]
            while stack:
                n = stack.pop()
                for nbr, length in self._adj[n]:
                    if nbr not in dist:
                        dist[nbr] = dist[n] + length
                        stack.append(nbr)
            self._dist_cache[source] = dist
            cached = dist
        return cached

    def node_distance(self, u: NodeId, v: NodeId) -> Fraction:
        if u in self._dist_cache:
            return self._dist_cache[u][v]
        if v in self._dist_cache:
            return self._dist_cache[v][u]
        # LCA walk on the BFS index; cheaper than materializing a row.
        a, b, extra = u, v, Fraction(0)
        da, db = self._depth[a], self._depth[b]
        while da > db:
            p = self._parent[a]
            extra += self._lengths[_edge_key(a, p)]
            a, da = p, da - 1
        while db > da:
            p = self._parent[b]
            extra += self._lengths[_edge_key(b, p)]
            b, db = p, db - 1
        while a != b:
            pa, pb = self._parent[a], self._parent[b]
            extra += self._lengths[_edge_key(a, pa)] + self._lengths[_edge_key(b, pb)]
            a, b = pa, pb
        return extra

    def _ends(self, p: Point):
        """(node, offset) pairs from which the geodesic can leave ``p``."""
        if p.is_node():
            return ((p.node, Fraction(0)),)
        u, v = p.edge
        length = self._lengths[p.edge]
        return ((u, p.t * length), (v, (1 - p.t) * length))

    def distance(self, p: Point, q: Point) -> Fraction:
        """Length of the unique tree path between two points."""
        self.check_point(p)
        self.check_point(q)
        if p == q:
            return Fraction(0)
        if not p.is_node() and not q.is_node() and p.edge == q.edge:
            return abs(p.t - q.t) * self._lengths[p.edge]
        return min(
            off_p + self.node_distance(a, b) + off_q
            for a, off_p in self._ends(p)
            for b, off_q in self._ends(q)
        )

    def between(self, x: Point, y: Point, z: Point) -> bool:
        """True iff ``z`` lies on the path from ``x`` to ``y`` (inclusive)."""
        return self.distance(x, z) + self.distance(z, y) == self.distance(x, y)

    # -- paths as regions ----------------------------------------------------

    def _node_path(self, a: NodeId, b: NodeId) -> list:
        ra, rb = [a], [b]
        x, y = a, b
        dx, dy = self._depth[x], self._depth[y]
        while dx > dy:
            x = self._parent[x]
            ra.append(x)
            dx -= 1
        while dy > dx:
            y = self._parent[y]
            rb.append(y)
            dy -= 1
        while x != y:
            x, y = self._parent[x], self._parent[y]
            ra.append(x)
            rb.append(y)
        return ra[:-1] + rb[::-1]

    def path_steps(self, p: Point, q: Point) -> list:
        """The geodesic from p to q as ordered primitive steps.

        Each step is ``("node", n)`` or ``("seg", edge_key, t0, t1)`` where
        the segment is traversed from parameter t0 to t1 (either direction).
        Steps are emitted in travel order, starting at p and ending at q.
        """
        self.check_point(p)
        self.check_point(q)
        if p == q:
            return [("node", p.node)] if p.is_node() else [("seg", p.edge, p.t, p.t)]
        if not p.is_node() and not q.is_node() and p.edge == q.edge:
            return [("seg", p.edge, p.t, q.t)]

        best = None
        for a, off_p in self._ends(p):
            for b, off_q in self._ends(q):
                total = off_p + self.node_distance(a, b) + off_q
                if best is None or total < best[0]:
                    best = (total, a, b)
        _, a, b = best
        steps = []
        if not p.is_node():
            u, v = p.edge
            steps.append(("seg", p.edge, p.t, Fraction(0) if a == u else Fraction(1)))
        for i, n in enumerate(path := self._node_path(a, b)):
            steps.append(("node", n))
            if i + 1 < len(path):
                key = _edge_key(n, path[i + 1])
                t0 = Fraction(0) if key[0] == n else Fraction(1)
                steps.append(("seg", key, t0, 1 - t0))
        if not q.is_node():
            u, v = q.edge
            steps.append(("seg", q.edge, Fraction(0) if b == u else Fraction(1), q.t))
        return steps

    def path_region(self, p: Point, q: Point) -> "Region":
        nodes = set()
        spans: dict[EdgeKey, tuple] = {}
        for step in self.path_steps(p, q):
            if step[0] == "node":
                nodes.add(step[1])
            else:
                _, key, t0, t1 = step
                lo, hi = (t0, t1) if t0 <= t1 else (t1, t0)
                if key in spans:
                    plo, phi = spans[key]
                    lo, hi = min(lo, plo), max(hi, phi)
                spans[key] = (lo, hi)
        return Region.build(self, nodes, spans)

    # -- whole space ---------------------------------------------------------

    def whole(self) -> "Subdendrite":
        if self._whole is None:
            ids = self.node_ids
            if len(ids) == 1:
                pts = [node_point(ids[0])]
            else:
                pts = [node_point(n) for n in ids if self.degree(n) == 1]
            self._whole = Subdendrite(self, pts)
        return self._whole

    def __repr__(self):
        return f"Dendrite({len(self._orders)} nodes, {len(self._lengths)} edges)"


class Region:
    """Exact point set of a subtree: covered nodes plus one closed interval
    per edge.  Connectedness is the caller's responsibility; every operation
    here is plain segment arithmetic."""

    __slots__ = ("nodes", "spans")

    def __init__(self, nodes: frozenset, spans: dict):
        self.nodes = nodes
        self.spans = spans

    @classmethod
    def build(cls, tree: Dendrite, nodes: Iterable, spans: Mapping) -> "Region":
        node_set = set(nodes)
        clean = {}
        for key, (lo, hi) in spans.items():
            if lo > hi:
                raise DendrolabError("inverted span")
            if lo == 0:
                node_set.add(key[0])
            if hi == 1:
                node_set.add(key[1])
            if lo == hi and (lo == 0 or lo == 1):
                continue  # degenerate span at a node: node set already has it
            clean[key] = (lo, hi)
        return cls(frozenset(node_set), clean)

    def is_empty(self) -> bool:
        return not self.nodes and not self.spans

    def contains_point(self, p: Point) -> bool:
        if p.is_node():
            return p.node in self.nodes
        span = self.spans.get(p.edge)
        return span is not None and span[0] <= p.t <= span[1]

    def covers_edge_end(self, key: EdgeKey, node: NodeId) -> bool:
        """True when the region covers a nondegenerate initial piece of the
        edge from the given endpoint."""
        span = self.spans.get(key)
        if span is None:
            return False
        lo, hi = span
        if lo == hi:
            return False
        return lo == 0 if key[0] == node else hi == 1

    def direction_count(self, tree: Dendrite, n: NodeId) -> int:
        return sum(
            1 for nbr, _ in tree.neighbors(n) if self.covers_edge_end(_edge_key(n, nbr), n)
        )

    def subset_of(self, other: "Region") -> bool:
        if not self.nodes <= other.nodes:
            return False
        for key, (lo, hi) in self.spans.items():
            ospan = other.spans.get(key)
            if ospan is None or ospan[0] > lo or ospan[1] < hi:
                return False
        return True

    def equals(self, other: "Region") -> bool:
        return self.nodes == other.nodes and self.spans == other.spans

    def intersect(self, other: "Region") -> "Region":
        nodes = self.nodes & other.nodes
        spans = {}
        for key, (lo, hi) in self.spans.items():
            ospan = other.spans.get(key)
            if ospan is None:
                continue
            l, h = max(lo, ospan[0]), min(hi, ospan[1])
            if l < h:
                spans[key] = (l, h)
            elif l == h and 0 < l < 1:
                spans[key] = (l, l)
        return Region(frozenset(nodes), spans)

    def union(self, other: "Region") -> "Region":
        """Envelope union; exact when the result is a subtree."""
        nodes = self.nodes | other.nodes
        spans = dict(self.spans)
        for key, (lo, hi) in other.spans.items():
            if key in spans:
                plo, phi = spans[key]
                spans[key] = (min(lo, plo), max(hi, phi))
            else:
                spans[key] = (lo, hi)
        return Region(frozenset(nodes), spans)

    def boundary_extremes(self, tree: Dendrite) -> list:
        """Points of the region with at most one outgoing direction in it.

        For a connected region this is its canonical set of extreme points
        (a single point for degenerate regions).
        """
        out = []
        for n in self.nodes:
            if self.direction_count(tree, n) <= 1:
                out.append(node_point(n))
        for key, (lo, hi) in self.spans.items():
            if 0 < lo:
                if lo != hi or lo < 1:
                    out.append(Point(node=None, edge=key, t=lo))
            if hi < 1 and hi != lo:
                out.append(Point(node=None, edge=key, t=hi))
        return sorted(set(out))

    def sample_points(self, tree: Dendrite, max_gap: Fraction) -> list:
        """Points of the region at spacing <= max_gap: nodes, span endpoints
        and evenly spaced interior samples (used by grid oracles and nets)."""
        pts = [node_point(n) for n in self.nodes]
        for key, (lo, hi) in self.spans.items():
            length = tree.edge_length(key) * (hi - lo)
            pts.append(tree.point_on_edge(key[0], key[1], lo))
            if hi != lo:
                pts.append(tree.point_on_edge(key[0], key[1], hi))
                k = int(length / max_gap) + 1
                for i in range(1, k):
                    pts.append(tree.point_on_edge(key[0], key[1], lo + (hi - lo) * Fraction(i, k)))
        return sorted(set(pts))


class Subdendrite:
    """A subcontinuum of a dendrite, stored as the geodesic hull of its
    canonical extreme points (no extreme lies between two others)."""

    __slots__ = ("ambient", "extremes", "_region")

    def __init__(self, ambient: Dendrite, points: Iterable[Point]):
        pts = sorted(set(points))
        if not pts:
            raise DendrolabError("a subdendrite needs at least one extreme point")
        for p in pts:
            ambient.check_point(p)
        self.ambient = ambient
        if len(pts) == 1:
            self.extremes = tuple(pts)
            self._region = None
            return
        # Canonical generators are the leaves of the geodesic hull: no
        # extreme lies between two others by construction.
        base = pts[0]
        reg = ambient.path_region(base, base)
        for p in pts[1:]:
            reg = reg.union(ambient.path_region(base, p))
        reg = Region.build(ambient, reg.nodes, reg.spans)
        self.extremes = tuple(reg.boundary_extremes(ambient))
        self._region = reg

    @classmethod
    def from_region(cls, ambient: Dendrite, region: Region) -> "Subdendrite":
        if region.is_empty():
            raise DendrolabError("empty region")
        sub = cls(ambient, region.boundary_extremes(ambient))
        sub._region = region
        return sub

    @property
    def region(self) -> Region:
        if self._region is None:
            base = self.extremes[0]
            reg = self.ambient.path_region(base, base)
            for p in self.extremes[1:]:
                reg = reg.union(self.ambient.path_region(base, p))
            self._region = Region.build(self.ambient, reg.nodes, reg.spans)
        return self._region

    def is_degenerate(self) -> bool:
        return len(self.extremes) == 1

    def contains_point(self, p: Point) -> bool:
        return self.region.contains_point(p)

    def contains(self, other: "Subdendrite") -> bool:
        self._check_ambient(other)
        return other.region.subset_of(self.region)

    def _check_ambient(self, other: "Subdendrite"):
        if other.ambient is not self.ambient:
            raise AmbientMismatchError("subdendrites live in different ambient trees")

    def node_set(self) -> frozenset:
        return self.region.nodes

    def __eq__(self, other):
        return (
            isinstance(other, Subdendrite)
            and self.ambient is other.ambient
            and self.extremes == other.extremes
        )

    def __hash__(self):
        return hash((id(self.ambient), self.extremes))

    def __repr__(self):
        return f"Subdendrite({list(self.extremes)!r})"


# -- the module operations ---------------------------------------------------


def distance(tree: Dendrite, p: Point, q: Point) -> Fraction:
    """Geodesic distance between two points of the tree."""
    return tree.distance(p, q)


def arc(tree: Dendrite, p: Point, q: Point) -> Subdendrite:
    """The unique arc between two points, as a subdendrite."""
    tree.check_point(p)
    tree.check_point(q)
    return Subdendrite(tree, [p, q])


def between(tree: Dendrite, x: Point, y: Point, z: Point) -> bool:
    """True iff z lies on the arc from x to y (endpoints included)."""
    return tree.between(x, y, z)


def order_of(tree: Dendrite, p: Point, sub: Subdendrite):
    """Order of a point inside a subdendrite.

    Counts arc directions at the point within the subtree.  At a node where
    the subtree meets every ambient direction, reports the node's target
    order instead: this is the one place where the finite tree stands in
    for the limit object.
    """
    if sub.ambient is not tree:
        raise AmbientMismatchError("subdendrite belongs to a different tree")
    if not sub.contains_point(p):
        raise InvalidPointError(f"{p!r} is not in the subdendrite")
    if sub.is_degenerate():
        return 1
    if not p.is_node():
        span = sub.region.spans[p.edge]
        return (1 if span[0] < p.t else 0) + (1 if p.t < span[1] else 0) or 1
    dirs = sub.region.direction_count(tree, p.node)
    if dirs == tree.degree(p.node):
        return tree.target_order(p.node)
    return max(dirs, 1)


def first_point_map(tree: Dendrite, sub: Subdendrite, y: Point) -> Point:
    """The unique point of the subdendrite lying on every arc from y into it."""
    if sub.ambient is not tree:
        raise AmbientMismatchError("subdendrite belongs to a different tree")
    tree.check_point(y)
    if sub.contains_point(y):
        return y
    region = sub.region
    for step in tree.path_steps(y, sub.extremes[0]):
        if step[0] == "node":
            if step[1] in region.nodes:
                return node_point(step[1])
        else:
            _, key, t0, t1 = step
            span = region.spans.get(key)
            if span is None:
                continue
            lo, hi = span
            if t0 <= t1:
                if hi < t0 or lo > t1:
                    continue
                hit = max(lo, t0)
            else:
                if hi < t1 or lo > t0:
                    continue
                hit = min(hi, t0)
            return tree.point_on_edge(key[0], key[1], hit)
    raise DendrolabError("first point not found; subdendrite region inconsistent")


def endpoints(tree: Dendrite, sub: Subdendrite) -> set:
    """Points of order one in the subdendrite (its canonical extremes)."""
    if sub.ambient is not tree:
        raise AmbientMismatchError("subdendrite belongs to a different tree")
    return set(sub.extremes)


def branch_points(tree: Dendrite, sub: Subdendrite) -> set:
    """Points of order >= 3 in the subdendrite."""
    if sub.ambient is not tree:
        raise AmbientMismatchError("subdendrite belongs to a different tree")
    if sub.is_degenerate():
        return set()
    out = set()
    for n in sub.region.nodes:
        if order_at_least(order_of(tree, node_point(n), sub), 3):
            out.add(node_point(n))
    return out


@dataclass(frozen=True)
class Component:
    """A connected component of ``ambient minus {cut}``.

    Identified by the cut point and the first step away from it: the
    incident edge for a node cut, or a side flag for an edge-interior cut.
    """

    cut: Point
    edge: EdgeKey
    toward_high: bool  # for edge cuts: the t > cut.t side; for node cuts: away from the node

    def contains_point(self, tree: Dendrite, p: Point) -> bool:
        if p == self.cut:
            return False
        if self.cut.is_node():
            # p is in this component iff the path from cut to p starts into self.edge.
            steps = tree.path_steps(self.cut, p)
            for step in steps:
                if step[0] == "seg":
                    return step[1] == self.edge
                if step[0] == "node" and step[1] != self.cut.node:
                    return False
            return False
        if not p.is_node() and p.edge == self.edge:
            return p.t > self.cut.t if self.toward_high else p.t < self.cut.t
        u, v = self.edge
        exit_node = node_point(v if self.toward_high else u)
        # p lies beyond the exit node iff the geodesic from p to the cut passes it.
        return tree.between(p, self.cut, exit_node)

    def node_set(self, tree: Dendrite) -> frozenset:
        return frozenset(n for n in tree.node_ids if self.contains_point(tree, node_point(n)))

    def intersects(self, tree: Dendrite, other: "Component") -> bool:
        if self.node_set(tree) & other.node_set(tree):
            return True
        # A node-free intersection piece is bounded by the two cut points on
        # a single edge; probe midpoints between all landmarks there.
        for key in tree.edge_keys:
            landmarks = {Fraction(0), Fraction(1)}
            for comp in (self, other):
                if not comp.cut.is_node() and comp.cut.edge == key:
                    landmarks.add(comp.cut.t)
            marks = sorted(landmarks)
            for a, b in zip(marks, marks[1:]):
                if a == b:
                    continue
                mid = tree.point_on_edge(key[0], key[1], (a + b) / 2)
                if self.contains_point(tree, mid) and other.contains_point(tree, mid):
                    return True
        return False


def point_along_path(tree: Dendrite, p: Point, q: Point, x: Fraction) -> Point:
    """The point at arclength ``x`` along the geodesic from p to q."""
    if x < 0:
        raise InvalidPointError("negative arclength")
    if x == 0:
        return p
    acc = Fraction(0)
    for step in tree.path_steps(p, q):
        if step[0] != "seg":
            continue
        _, key, t0, t1 = step
        length = abs(t1 - t0) * tree.edge_length(key)
        if acc + length >= x:
            frac = (x - acc) / length
            t = t0 + (t1 - t0) * frac
            return tree.point_on_edge(key[0], key[1], t)
        acc += length
    if acc == x:
        return q
    raise InvalidPointError("arclength exceeds the path length")


def median(tree: Dendrite, a: Point, b: Point, c: Point) -> Point:
    """The unique point lying on all three pairwise geodesics."""
    dab = tree.distance(a, b)
    dac = tree.distance(a, c)
    dbc = tree.distance(b, c)
    return point_along_path(tree, a, b, (dab + dac - dbc) / 2)


def components_at(tree: Dendrite, cut: Point) -> list[Component]:
    """All connected components of the ambient minus a point."""
    tree.check_point(cut)
    if cut.is_node():
        return [
            Component(cut, _edge_key(cut.node, nbr), True)
            for nbr, _ in tree.neighbors(cut.node)
        ]
    return [Component(cut, cut.edge, False), Component(cut, cut.edge, True)]
