"""Nerves of finite ball covers on metric graphs, the tree-nerve test, and
the constructive tree approximation of connected subspaces.

This is the one module that admits cycles: spaces are finite metric graphs
with positive rational edge lengths.  Everything is exact; ball membership
along an edge flips only at finitely many breakpoints, which are probed.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DendrolabError, PreconditionError
from .tree import Dendrite, Subdendrite, _id_key


class MetricGraph:
    """A finite connected metric graph (cycles allowed, simple edges)."""

    def __init__(self, nodes: Iterable, edges: Iterable):
        self.node_ids = tuple(sorted(set(nodes), key=_id_key))
        if not self.node_ids:
            raise DendrolabError("a graph needs at least one node")
        known = set(self.node_ids)
        self.lengths: dict = {}
        adj: dict = {n: [] for n in self.node_ids}
        for u, v, length in edges:
            length = Fraction(length)
            if length <= 0 or u == v or u not in known or v not in known:
                raise DendrolabError(f"bad edge ({u!r},{v!r})")
            key = (u, v) if _id_key(u) <= _id_key(v) else (v, u)
            if key in self.lengths:
                raise DendrolabError(f"duplicate edge {key!r}")
            self.lengths[key] = length
            adj[u].append((v, length))
            adj[v].append((u, length))
        self.adj = {n: tuple(sorted(a, key=lambda p: _id_key(p[0]))) for n, a in adj.items()}
        self._dist_cache: dict = {}
        if len(self._components()) != 1:
            raise DendrolabError("the graph must be connected")

    def _components(self):
        seen = set()
        comps = []
        for n in self.node_ids:
            if n in seen:
                continue
            comp = {n}
            stack = [n]
            while stack:
                m = stack.pop()
                for nbr, _ in self.adj[m]:
                    if nbr not in comp:
                        comp.add(nbr)
                        stack.append(nbr)
            seen |= comp
            comps.append(comp)
        return comps

    @property
    def edge_keys(self):
        return tuple(sorted(self.lengths, key=lambda k: (_id_key(k[0]), _id_key(k[1]))))

    def edge_length(self, key):
        return self.lengths[key]

    def node_distances(self, source) -> Mapping:
        cached = self._dist_cache.get(source)
        if cached is None:
            dist = {}
            heap = [(Fraction(0), _id_key(source), source)]
            while heap:
                d, _, n = heapq.heappop(heap)
                if n in dist:
                    continue
                dist[n] = d
                for nbr, length in self.adj[n]:
                    if nbr not in dist:
                        heapq.heappush(heap, (d + length, _id_key(nbr), nbr))
            self._dist_cache[source] = dist
            cached = dist
        return cached

    def distance(self, p, q) -> Fraction:
        """Distance between graph points ('node', n) or ('edge', key, t)."""
        if p == q:
            return Fraction(0)
        if p[0] == "edge" and q[0] == "edge" and p[1] == q[1]:
            length = self.lengths[p[1]]
            direct = abs(p[2] - q[2]) * length
            around = min(
                off_p + self.node_distances(a)[b] + off_q
                for a, off_p in self._ends(p)
                for b, off_q in self._ends(q)
            )
            return min(direct, around)
        return min(
            off_p + self.node_distances(a)[b] + off_q
            for a, off_p in self._ends(p)
            for b, off_q in self._ends(q)
        )

    def _ends(self, p):
        if p[0] == "node":
            return ((p[1], Fraction(0)),)
        key, t = p[1], p[2]
        length = self.lengths[key]
        return ((key[0], t * length), (key[1], (1 - t) * length))

    def point(self, n):
        return ("node", n)

    def point_on_edge(self, key, t):
        t = Fraction(t)
        if t == 0:
            return ("node", key[0])
        if t == 1:
            return ("node", key[1])
        return ("edge", key, t)

    def diameter(self) -> Fraction:
        return max(
            self.node_distances(n)[m] for n in self.node_ids for m in self.node_ids
        ) if len(self.node_ids) > 1 else Fraction(0)

    def total_length(self) -> Fraction:
        return sum(self.lengths.values(), Fraction(0))


def graph_from_dendrite(tree: Dendrite) -> MetricGraph:
    return MetricGraph(tree.node_ids, [(u, v, tree.edge_length((u, v))) for u, v in tree.edge_keys])


def graph_from_subdendrite(sub: Subdendrite) -> MetricGraph:
    """The realized set of a subdendrite as a standalone metric graph.
    Span boundary points become fresh nodes."""
    tree = sub.ambient
    region = sub.region
    nodes = set(region.nodes)
    edges = []
    for key, (lo, hi) in region.spans.items():
        length = tree.edge_length(key)
        a = key[0] if lo == 0 else ("cut", key, lo)
        b = key[1] if hi == 1 else ("cut", key, hi)
        if lo != hi:
            nodes.update(x for x in (a, b) if not isinstance(x, tuple) or x[0] == "cut")
            nodes.add(a)
            nodes.add(b)
            edges.append((a, b, (hi - lo) * length))
        else:
            nodes.add(a)
    if not nodes:
        raise DendrolabError("empty subspace")
    return MetricGraph(nodes, edges)


@dataclass(frozen=True)
class GraphBall:
    center: tuple
    radius: Fraction


@dataclass
class Cover:
    ambient: MetricGraph
    opens: list

    def __post_init__(self):
        if any(b.radius <= 0 for b in self.opens):
            raise DendrolabError("ball radii must be positive")

    def mesh(self) -> Fraction:
        return max(2 * b.radius for b in self.opens) if self.opens else Fraction(0)


@dataclass
class NerveGraph:
    vertex_count: int
    edges: frozenset  # of frozensets {i, j}

    def neighbors(self, i):
        return sorted(j for e in self.edges for j in e if i in e and j != i)


def _ball_breakpoints(g: MetricGraph, ball: GraphBall, key) -> list:
    u, v = key
    length = g.edge_length(key)
    r = ball.radius
    du = g.distance(ball.center, ("node", u))
    dv = g.distance(ball.center, ("node", v))
    ts = []
    if du < r:
        ts.append((r - du) / length)
    if dv < r:
        ts.append(1 - (r - dv) / length)
    if ball.center[0] == "edge" and ball.center[1] == key:
        ts.append(ball.center[2] - r / length)
        ts.append(ball.center[2] + r / length)
    return [t for t in ts if 0 < t < 1]


def _balls_meet(g: MetricGraph, b1: GraphBall, b2: GraphBall) -> bool:
    def inside(p, ball):
        return g.distance(ball.center, p) < ball.radius

    for n in g.node_ids:
        p = ("node", n)
        if inside(p, b1) and inside(p, b2):
            return True
    for key in g.edge_keys:
        marks = sorted(
            {Fraction(0), Fraction(1), *_ball_breakpoints(g, b1, key), *_ball_breakpoints(g, b2, key)}
        )
        for a, b in zip(marks, marks[1:]):
            p = g.point_on_edge(key, (a + b) / 2)
            if inside(p, b1) and inside(p, b2):
                return True
    return False


def nerve(cover: Cover) -> NerveGraph:
    """One vertex per open; an edge whenever two opens intersect (exact)."""
    n = len(cover.opens)
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            if _balls_meet(cover.ambient, cover.opens[i], cover.opens[j]):
                edges.add(frozenset((i, j)))
    return NerveGraph(n, frozenset(edges))


def is_tree_nerve(g: NerveGraph) -> bool:
    """Connected and acyclic."""
    if g.vertex_count == 0:
        return False
    if len(g.edges) != g.vertex_count - 1:
        return False
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in g.neighbors(i):
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == g.vertex_count


def _find_cycle(g: NerveGraph):
    parent = {0: None}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in g.neighbors(i):
            if j not in parent:
                parent[j] = i
                stack.append(j)
            elif parent.get(i) != j:
                # walk both ancestries to the meeting point
                anc_i = []
                a = i
                while a is not None:
                    anc_i.append(a)
                    a = parent[a]
                path_j = [j]
                a = j
                while a not in anc_i:
                    a = parent[a]
                    path_j.append(a)
                cut = anc_i.index(path_j[-1])
                return anc_i[: cut + 1] + path_j[-2::-1]
    return None


def _canonical_cover(g: MetricGraph, scale: Fraction) -> Cover:
    """Node balls capped by local edge lengths plus chained segment balls.

    Ball radii are chosen so that on a tree the only intersections are
    consecutive-along-an-edge and node-to-first-segment, making the nerve
    the subdivided graph itself.
    """
    rho = {
        n: min(scale, min((l for _, l in g.adj[n]), default=scale) / 3) for n in g.node_ids
    }
    pieces = []  # (key, t_lo, t_hi)
    for key in g.edge_keys:
        u, v = key
        length = g.edge_length(key)
        lo, hi = rho[u] / length, 1 - rho[v] / length
        k = max(1, -(-((hi - lo) * length) // scale))  # ceil
        for i in range(int(k)):
            pieces.append((key, lo + (hi - lo) * Fraction(i, int(k)), lo + (hi - lo) * Fraction(i + 1, int(k))))
    min_piece = min(
        ((t1 - t0) * g.edge_length(key) for key, t0, t1 in pieces), default=scale
    )
    delta = min(min(rho.values()), min_piece) / 8
    opens = [GraphBall(("node", n), rho[n]) for n in g.node_ids]
    for key, t0, t1 in pieces:
        length = g.edge_length(key)
        mid = (t0 + t1) / 2
        opens.append(GraphBall(g.point_on_edge(key, mid), (t1 - t0) * length / 2 + delta))
    return Cover(g, opens)


def _cover_covers(cover: Cover) -> bool:
    g = cover.ambient

    def covered(p):
        return any(g.distance(b.center, p) < b.radius for b in cover.opens)

    for n in g.node_ids:
        if not covered(("node", n)):
            return False
    for key in g.edge_keys:
        marks = {Fraction(0), Fraction(1)}
        for b in cover.opens:
            marks.update(_ball_breakpoints(g, b, key))
        ms = sorted(marks)
        for t in ms:
            if 0 < t < 1 and not covered(g.point_on_edge(key, t)):
                return False
        for a, b in zip(ms, ms[1:]):
            if not covered(g.point_on_edge(key, (a + b) / 2)):
                return False
    return True


def tree_like_check(space: MetricGraph | Dendrite, epsilon) -> tuple:
    """Try canonical ball covers of mesh below epsilon with a tree nerve.

    Success is conclusive; on failure a small family of net scales is tried
    before reporting the obstructing nerve cycle.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise PreconditionError("epsilon must be positive")
    g = graph_from_dendrite(space) if isinstance(space, Dendrite) else space
    if g.diameter() < epsilon:
        cover = Cover(g, [GraphBall(("node", g.node_ids[0]), g.diameter() + epsilon)])
        return True, cover
    first_cycle = None
    for denom in (4, 5, 6):
        cover = _canonical_cover(g, epsilon / denom)
        if not _cover_covers(cover):
            continue
        nrv = nerve(cover)
        if is_tree_nerve(nrv):
            return True, cover
        if first_cycle is None:
            first_cycle = _find_cycle(nrv)
    return False, first_cycle


# -- tree approximation ----------------------------------------------------------


class Subspace:
    """A closed subspace of a metric graph: node set plus, per edge, a list
    of disjoint closed parameter intervals."""

    def __init__(self, graph: MetricGraph, nodes: Iterable, spans: Mapping | None = None):
        self.graph = graph
        self.nodes = frozenset(nodes)
        clean: dict = {}
        for key, intervals in (spans or {}).items():
            merged = sorted((Fraction(a), Fraction(b)) for a, b in intervals)
            out = []
            for lo, hi in merged:
                if out and lo <= out[-1][1]:
                    out[-1] = (out[-1][0], max(out[-1][1], hi))
                else:
                    out.append((lo, hi))
            if out:
                clean[key] = tuple(out)
        self.spans = clean

    @classmethod
    def of_nodes(cls, graph: MetricGraph, nodes: Iterable) -> "Subspace":
        """Node-induced subspace: the nodes plus every edge joining two."""
        nodes = set(nodes)
        spans = {
            key: [(Fraction(0), Fraction(1))]
            for key in graph.edge_keys
            if key[0] in nodes and key[1] in nodes
        }
        return cls(graph, nodes, spans)

    def contains(self, p) -> bool:
        if p[0] == "node":
            return p[1] in self.nodes
        for lo, hi in self.spans.get(p[1], ()):
            if lo <= p[2] <= hi:
                return True
        return False

    def is_connected(self) -> bool:
        aux = _AuxGraph(self.graph, [self])
        verts = [v for v in aux.vertices if aux.in_subspace(v, self)]
        if not verts:
            return False
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            v = stack.pop()
            for w, _ in aux.adj[v]:
                if w not in seen and aux.in_subspace(w, self) and aux.edge_in(v, w, self):
                    seen.add(w)
                    stack.append(w)
        return all(v in seen for v in verts)


class _AuxGraph:
    """Refinement of a metric graph whose vertices are the graph nodes plus
    all span boundaries (and any extra points); edges are atomic segments."""

    def __init__(self, graph: MetricGraph, subspaces, extra_points=()):
        self.graph = graph
        marks: dict = {key: {Fraction(0), Fraction(1)} for key in graph.edge_keys}
        for sub in subspaces:
            for key, intervals in sub.spans.items():
                for lo, hi in intervals:
                    marks[key].update((lo, hi))
        for p in extra_points:
            if p[0] == "edge":
                marks[p[1]].add(p[2])
        self.vertices = [("node", n) for n in graph.node_ids]
        self.adj: dict = {v: [] for v in self.vertices}
        self.segment: dict = {}  # frozenset pair -> (key, lo, hi)
        for key, ms in marks.items():
            ms = sorted(ms)
            pts = [graph.point_on_edge(key, t) for t in ms]
            for p in pts:
                if p not in self.adj:
                    self.vertices.append(p)
                    self.adj[p] = []
            length = graph.edge_length(key)
            for (t0, p0), (t1, p1) in zip(zip(ms, pts), zip(ms[1:], pts[1:])):
                w = (t1 - t0) * length
                self.adj[p0].append((p1, w))
                self.adj[p1].append((p0, w))
                self.segment[frozenset((p0, p1))] = (key, t0, t1)

    def in_subspace(self, v, sub: Subspace) -> bool:
        return sub.contains(v)

    def edge_in(self, v, w, sub: Subspace) -> bool:
        key, t0, t1 = self.segment[frozenset((v, w))]
        mid = (t0 + t1) / 2
        return sub.contains(("edge", key, mid) if 0 < mid < 1 else ("node", key[0]))

    def dijkstra(self, sources, allowed=None) -> dict:
        dist: dict = {}
        heap = [(Fraction(0), repr(s), s) for s in sources]
        heapq.heapify(heap)
        while heap:
            d, _, v = heapq.heappop(heap)
            if v in dist:
                continue
            dist[v] = d
            for w, weight in self.adj[v]:
                if w in dist:
                    continue
                if allowed is not None and not allowed(v, w):
                    continue
                heapq.heappush(heap, (d + weight, repr(w), w))
        return dist


def tree_approximation(space, region, epsilon) -> tuple:
    """A tree inside a connected subspace within Hausdorff distance epsilon.

    Selects an epsilon/3-net of the subspace and joins each net point to the
    growing tree by a shortest in-subspace path trimmed at its first contact
    (so each attachment meets the tree in exactly one point).  Returns
    (tree subspace, exact Hausdorff distance to the region).
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise PreconditionError("epsilon must be positive")
    if isinstance(region, Subspace):
        space = region.graph
    elif isinstance(space, Dendrite) and isinstance(region, Subdendrite):
        graph = graph_from_dendrite(space)
        reg = region.region
        spans = {key: [span] for key, span in reg.spans.items()}
        region = Subspace(graph, reg.nodes, spans)
        space = graph
    else:
        raise PreconditionError("the region must be a Subspace or a Subdendrite")

    net = _net_points(space, region, epsilon / 3)
    aux = _AuxGraph(space, [region], extra_points=net)
    in_k = lambda v, w: aux.edge_in(v, w, region)

    tree_vertices = {net[0]}
    tree_edges: set = set()
    for a in net[1:]:
        if a in tree_vertices:
            continue
        dist = aux.dijkstra([a], allowed=in_k)
        target = min(
            (v for v in tree_vertices if v in dist),
            key=lambda v: (dist[v], repr(v)),
            default=None,
        )
        if target is None:
            raise PreconditionError("the subspace is not connected")
        # rebuild one shortest path a -> target, then trim at first tree hit
        path = _shortest_path(aux, a, target, in_k, dist)
        cut = next(i for i, v in enumerate(path) if v in tree_vertices)
        path = path[: cut + 1]
        tree_vertices.update(path)
        tree_edges.update(frozenset(e) for e in zip(path, path[1:]))

    spans: dict = {}
    nodes = {v[1] for v in tree_vertices if v[0] == "node"}
    for e in tree_edges:
        key, t0, t1 = aux.segment[e]
        spans.setdefault(key, []).append((t0, t1))
    tree_sub = Subspace(space, nodes, spans)
    defect = subspace_hausdorff_within(space, tree_sub, region, aux)
    return tree_sub, defect


def _net_points(space: MetricGraph, region: Subspace, gap: Fraction) -> list:
    pts = [("node", n) for n in sorted(region.nodes, key=_id_key)]
    for key in sorted(region.spans, key=lambda k: (_id_key(k[0]), _id_key(k[1]))):
        for lo, hi in region.spans[key]:
            length = (hi - lo) * space.edge_length(key)
            pts.append(space.point_on_edge(key, lo))
            if hi > lo:
                pts.append(space.point_on_edge(key, hi))
                k = int(length / gap) + 1
                for i in range(1, k):
                    pts.append(space.point_on_edge(key, lo + (hi - lo) * Fraction(i, k)))
    seen = []
    for p in pts:
        if p not in seen:
            seen.append(p)
    return seen


def _shortest_path(aux: _AuxGraph, a, target, allowed, dist_from_a):
    """One exact shortest path recovered by walking distances backwards."""
    path = [target]
    cur = target
    while cur != a:
        for w, weight in sorted(aux.adj[cur], key=lambda x: repr(x[0])):
            if not allowed(cur, w):
                continue
            if w in dist_from_a and dist_from_a[w] + weight == dist_from_a[cur]:
                path.append(w)
                cur = w
                break
        else:
            raise DendrolabError("path reconstruction failed")
    return path[::-1]


def subspace_hausdorff_within(space, small: Subspace, big: Subspace, aux=None) -> Fraction:
    """Hausdorff distance for small inside big: the directed distance from
    big to small, exact via the auxiliary refinement."""
    if aux is None:
        aux = _AuxGraph(space, [small, big])
    sources = [v for v in aux.vertices if small.contains(v)]
    if not sources:
        raise DendrolabError("empty tree subspace")
    dist = aux.dijkstra(sources)
    best = Fraction(0)
    for v in aux.vertices:
        if big.contains(v) and dist.get(v, Fraction(0)) > best:
            best = dist[v]
    for e, (key, t0, t1) in aux.segment.items():
        v, w = tuple(e)
        mid = (t0 + t1) / 2
        if not big.contains(("edge", key, mid) if 0 < mid < 1 else ("node", key[0])):
            continue
        if small.contains(("edge", key, mid)):
            continue
        peak = (dist[v] + dist[w] + (t1 - t0) * space.edge_length(key)) / 2
        if peak > best:
            best = peak
    return best
