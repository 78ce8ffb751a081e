"""Maximal order arcs at finite resolution.

A chain is a strictly nested finite sequence of subdendrites from a
singleton root to the whole space.  This module provides the root and
hitting machinery, willfulness, the four generic-chain conditions, a
constructive generator for generic chains, and the root-continuity probe.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DendrolabError, PreconditionError, RefineNeeded
from .hyperspace import hausdorff, hausdorff2
from .tree import (
    Dendrite,
    Point,
    Region,
    Subdendrite,
    _edge_key,
    _id_key,
    node_point,
)

ALL_ARCS = "ALL_ARCS"
ROOT_ARCS = "ROOT_ARCS"


class Chain:
    """A finite maximal order arc: K_0 = {root} strictly up to the whole
    space, with the largest consecutive Hausdorff gap recorded as mesh."""

    def __init__(self, ambient: Dendrite, elements):
        elements = tuple(elements)
        if len(elements) < 2:
            raise DendrolabError("a chain needs at least the root and the whole space")
        for e in elements:
            if e.ambient is not ambient:
                raise DendrolabError("chain elements must share the ambient tree")
        if not elements[0].is_degenerate():
            raise DendrolabError("a chain starts at a singleton")
        if not elements[-1].region.equals(ambient.whole().region):
            raise DendrolabError("a chain ends at the whole space")
        for a, b in zip(elements, elements[1:]):
            if not (a.region.subset_of(b.region) and not a.region.equals(b.region)):
                raise DendrolabError("chain elements must be strictly nested")
        self.ambient = ambient
        self.elements = elements
        self.mesh = max(hausdorff(a, b) for a, b in zip(elements, elements[1:]))
        self._hit_cache: dict = {}

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"Chain({len(self.elements)} elements, mesh={self.mesh})"


def root(chain: Chain) -> Point:
    """The unique point of the chain's first element."""
    return chain.elements[0].extremes[0]


def hitting_time(chain: Chain, x: Point) -> int:
    """Least index i with x in K_i."""
    chain.ambient.check_point(x)
    cached = chain._hit_cache.get(x)
    if cached is not None:
        return cached
    for i, k in enumerate(chain.elements):
        if k.contains_point(x):
            chain._hit_cache[x] = i
            return i
    raise DendrolabError("point not in the final element; chain is inconsistent")


def hitting_level(chain: Chain, x: Point, edge_samples: int = 0) -> set:
    """All ambient nodes sharing x's hitting index.  With edge_samples > 0,
    also that many evenly spaced interior probes per edge (sampling only;
    edge-interior levels have no exact finite description)."""
    idx = hitting_time(chain, x)
    tree = chain.ambient
    level = {node_point(n) for n in tree.node_ids if hitting_time(chain, node_point(n)) == idx}
    if edge_samples > 0:
        for key in tree.edge_keys:
            for i in range(1, edge_samples + 1):
                p = tree.point_on_edge(key[0], key[1], Fraction(i, edge_samples + 1))
                if hitting_time(chain, p) == idx:
                    level.add(p)
    return level


# -- willfulness ---------------------------------------------------------------


@dataclass
class WillfulnessWitness:
    arc_ends: tuple
    i: int
    j: int


def _arc_cover_interval(tree, steps, prefix, region):
    """The (arclength) interval in which the region meets the path, or None.

    ``steps`` are path steps, ``prefix`` the arclength at each step start.
    Intersections of subtrees with paths are connected, so min/max suffice.
    """
    lo = hi = None

    def see(a, b=None):
        nonlocal lo, hi
        b = a if b is None else b
        if lo is None or a < lo:
            lo = a
        if hi is None or b > hi:
            hi = b

    for (step, x0) in zip(steps, prefix):
        if step[0] == "node":
            if step[1] in region.nodes:
                see(x0)
        else:
            _, key, t0, t1 = step
            span = region.spans.get(key)
            if span is None:
                continue
            slo, shi = span
            length = tree.edge_length(key)
            if t0 <= t1:
                a, b = max(slo, t0), min(shi, t1)
                if a <= b:
                    see(x0 + (a - t0) * length, x0 + (b - t0) * length)
            else:
                a, b = max(slo, t1), min(shi, t0)
                if a <= b:
                    see(x0 + (t0 - b) * length, x0 + (t0 - a) * length)
    return None if lo is None else (lo, hi)


def _steps_with_prefix(tree, p, q):
    steps = tree.path_steps(p, q)
    prefix = []
    x = Fraction(0)
    for step in steps:
        prefix.append(x)
        if step[0] == "seg":
            _, key, t0, t1 = step
            x += abs(t1 - t0) * tree.edge_length(key)
    return steps, prefix, x


def _willful_on_arc(chain: Chain, p: Point, q: Point):
    """None if the chain is willful along the arc [p, q], else a witness.

    Checking consecutive elements suffices: nested intersections grow
    transitively, so any stalled pair yields a stalled consecutive pair.
    """
    tree = chain.ambient
    steps, prefix, total = _steps_with_prefix(tree, p, q)
    if total == 0:
        return None
    prev = None
    for i, elem in enumerate(chain.elements):
        cur = _arc_cover_interval(tree, steps, prefix, elem.region)
        if prev is not None and prev != (Fraction(0), total) and prev == cur:
            return WillfulnessWitness((p, q), i - 1, i)
        prev = cur
    return None


def is_willful(chain: Chain, mode: str = ALL_ARCS):
    """True, or a witness (arc, i, j) with stalled partial coverage.

    ALL_ARCS quantifies over arcs between all node pairs; ROOT_ARCS over
    arcs from the root to every node (nodes stand in for the dense set of
    branching points of the limit object).
    """
    tree = chain.ambient
    ids = tree.node_ids
    if mode == ROOT_ARCS:
        r = root(chain)
        pairs = [(r, node_point(n)) for n in ids if node_point(n) != r]
    elif mode == ALL_ARCS:
        pts = [node_point(n) for n in ids]
        pairs = [(pts[i], pts[j]) for i in range(len(pts)) for j in range(i + 1, len(pts))]
    else:
        raise DendrolabError(f"unknown willfulness mode {mode!r}")
    for p, q in pairs:
        witness = _willful_on_arc(chain, p, q)
        if witness is not None:
            return witness
    return True


# -- generic-chain conditions --------------------------------------------------


def _region_distance(tree, center: Point, region: Region) -> Fraction:
    if region.contains_point(center):
        return Fraction(0)
    best = None
    for n in region.nodes:
        d = tree.distance(center, node_point(n))
        if best is None or d < best:
            best = d
    for key, (lo, hi) in region.spans.items():
        for t in (lo, hi):
            d = tree.distance(center, tree.point_on_edge(key[0], key[1], t))
            if best is None or d < best:
                best = d
    if best is None:
        raise DendrolabError("empty region")
    return best


def _ball_meets_difference(tree, center, radius, small: Region, big: Region) -> bool:
    """Does the open ball meet big-minus-small?  Exact: node probes plus the
    concavity argument on uncovered edge pieces."""
    for n in big.nodes:
        if n not in small.nodes and tree.distance(center, node_point(n)) < radius:
            return True
    for key, (blo, bhi) in big.spans.items():
        pieces = []
        sspan = small.spans.get(key)
        if sspan is None:
            pieces.append((blo, bhi))
        else:
            slo, shi = sspan
            if blo < slo:
                pieces.append((blo, slo))
            if shi < bhi:
                pieces.append((shi, bhi))
        for plo, phi in pieces:
            if plo >= phi:
                continue
            d = min(
                tree.distance(center, tree.point_on_edge(key[0], key[1], plo)),
                tree.distance(center, tree.point_on_edge(key[0], key[1], phi)),
            )
            if d < radius:
                return True
    return False


@dataclass
class GenericConditionsReport:
    root_is_endpoint: bool
    steps_nowhere_dense: bool
    at_most_one_branch_extreme: bool
    willful: bool
    nowhere_dense_witness: tuple | None = None
    branch_extreme_witness: tuple | None = None
    willfulness_witness: WillfulnessWitness | None = None

    @property
    def passes(self) -> bool:
        return (
            self.root_is_endpoint
            and self.steps_nowhere_dense
            and self.at_most_one_branch_extreme
            and self.willful
        )

    def as_dict(self) -> dict:
        return {
            "root_is_endpoint": self.root_is_endpoint,
            "steps_nowhere_dense": self.steps_nowhere_dense,
            "at_most_one_branch_extreme": self.at_most_one_branch_extreme,
            "willful": self.willful,
            "passes": self.passes,
        }


def check_generic_conditions(chain: Chain, epsilon: Fraction) -> GenericConditionsReport:
    """The four conditions a generic chain satisfies, at resolution epsilon:
    root at a degree-1 node, epsilon-nowhere-dense steps, at most one extreme
    per element at an ambient branching node, and root-arc willfulness."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise PreconditionError("epsilon must be positive")
    tree = chain.ambient
    r = root(chain)
    root_ok = r.is_node() and tree.degree(r.node) == 1

    # (ii): a pair (K_i, K_j) fails iff some branching-node ball meets K_j
    # but gains nothing over K_i.  Checking consecutive pairs suffices: a
    # stalled pair (i, j) makes the step (j-1, j) stall inside the ball too.
    nd_ok, nd_witness = True, None
    for b in tree.branching_nodes():
        center = node_point(b)
        first = None
        for j, elem in enumerate(chain.elements):
            if _region_distance(tree, center, elem.region) < epsilon:
                first = j
                break
        if first is None:
            continue
        for j in range(max(first, 1), len(chain.elements)):
            if not _ball_meets_difference(
                tree, center, epsilon, chain.elements[j - 1].region, chain.elements[j].region
            ):
                nd_ok, nd_witness = False, (center, j - 1, j)
                break
        if not nd_ok:
            break

    one_ok, one_witness = True, None
    for i, elem in enumerate(chain.elements):
        hits = [p for p in elem.extremes if p.is_node() and tree.is_branching_node(p.node)]
        if len(hits) > 1:
            one_ok, one_witness = False, (i, tuple(hits))
            break

    will = is_willful(chain, ROOT_ARCS)
    return GenericConditionsReport(
        root_is_endpoint=root_ok,
        steps_nowhere_dense=nd_ok,
        at_most_one_branch_extreme=one_ok,
        willful=will is True,
        nowhere_dense_witness=nd_witness,
        branch_extreme_witness=one_witness,
        willfulness_witness=None if will is True else will,
    )


def check_full_chain(chain: Chain) -> bool:
    """True iff every nondegenerate element is full."""
    from .fullness import is_full

    return all(is_full(k) for k in chain.elements if not k.is_degenerate())


# -- generator -----------------------------------------------------------------


@dataclass
class _Front:
    anchor: object  # node the coverage enters from
    other: object  # node the edge leads to
    key: tuple
    length: Fraction
    covered: Fraction
    terminal: bool
    ceiling: Fraction


def generate_generic_chain(ambient: Dendrite, seed: int, delta: Fraction) -> Chain:
    """Grow a chain passing the generic conditions at resolution delta.

    All growth fronts advance each round (one recorded element per round),
    fronts on leaf-terminal edges approach a ceiling below delta/2 and
    never land before the final element (those tails are the reserves that
    keep every branching-node ball gaining), and at most one front lands on
    a branching node per round.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise PreconditionError("delta must be positive")
    if len(ambient.node_ids) < 2:
        raise PreconditionError("the ambient must have at least one edge")
    if delta >= ambient.diameter():
        raise RefineNeeded("delta is at least the diameter; the chain would be degenerate")

    branching_leaves = [
        n for n in ambient.leaf_nodes() if ambient.is_branching_node(n)
    ]
    if len(branching_leaves) > 1:
        raise RefineNeeded("more than one branching leaf; the whole space violates (iii)")

    terminal_edges = [
        key for key in ambient.edge_keys if ambient.degree(key[0]) == 1 or ambient.degree(key[1]) == 1
    ]
    for b in ambient.branching_nodes():
        ok = False
        for key in terminal_edges:
            u, v = key
            anchor = u if ambient.degree(v) == 1 else v
            reach = ambient.node_distance(b, anchor) + min(ambient.edge_length(key), delta / 2)
            if reach <= delta:
                ok = True
                break
        if not ok:
            raise RefineNeeded(
                f"no terminal branch within delta of node {b!r}; refine the ambient"
            )

    rng = random.Random(seed)
    roots = [n for n in ambient.leaf_nodes() if not ambient.is_branching_node(n)]
    if not roots:
        raise RefineNeeded("no degree-1 node of order <= 2 to root the chain at")
    start = roots[rng.randrange(len(roots))]

    covered_nodes = {start}
    fronts: list[_Front] = []

    def spawn(node):
        for nbr, length in ambient.neighbors(node):
            key = _edge_key(node, nbr)
            if key in done_edges or nbr in covered_nodes:
                continue
            if any(g.key == key for g in fronts):
                continue
            terminal = ambient.degree(nbr) == 1
            ceiling = min(length, delta / 2) if terminal else length
            fronts.append(_Front(node, nbr, key, length, Fraction(0), terminal, ceiling))

    def snapshot() -> Subdendrite:
        span_map = {}
        for f in fronts:
            if f.covered == 0:
                continue
            t = f.covered / f.length
            span_map[f.key] = (Fraction(0), t) if f.key[0] == f.anchor else (1 - t, Fraction(1))
        for key in done_edges:
            span_map[key] = (Fraction(0), Fraction(1))
        region = Region.build(ambient, set(covered_nodes), span_map)
        return Subdendrite.from_region(ambient, region)

    done_edges: set = set()
    spawn(start)
    elements = [Subdendrite(ambient, [node_point(start)])]

    max_rounds = 10000
    for _ in range(max_rounds):
        landed = False
        order = list(range(len(fronts)))
        rng.shuffle(order)
        new_fronts: list[_Front] = []
        remove: set = set()
        for idx in order:
            f = fronts[idx]
            if f.terminal:
                f.covered += min(delta / 2, (f.ceiling - f.covered) / 2)
                continue
            remaining = f.length - f.covered
            step = min(delta / 2, remaining)
            if step < remaining:
                f.covered += step
                continue
            if ambient.is_branching_node(f.other) and landed:
                f.covered += remaining / 2
                continue
            # land on the far node and open its other directions
            if ambient.is_branching_node(f.other):
                landed = True
            covered_nodes.add(f.other)
            done_edges.add(f.key)
            remove.add(idx)
            for nbr, length in ambient.neighbors(f.other):
                key = _edge_key(f.other, nbr)
                if key in done_edges or key == f.key or nbr in covered_nodes:
                    continue
                if any(g.key == key for g in fronts) or any(g.key == key for g in new_fronts):
                    continue
                terminal = ambient.degree(nbr) == 1
                ceiling = min(length, delta / 2) if terminal else length
                new_fronts.append(_Front(f.other, nbr, key, length, Fraction(0), terminal, ceiling))
        fronts = [f for i, f in enumerate(fronts) if i not in remove] + new_fronts
        elements.append(snapshot())
        if all(f.terminal for f in fronts) and all(
            f.ceiling - f.covered < delta / 16 for f in fronts
        ):
            break
    else:
        raise DendrolabError("chain generation did not terminate")

    elements.append(ambient.whole())
    # drop accidental duplicates (zero-step rounds cannot happen, but be safe)
    cleaned = [elements[0]]
    for e in elements[1:]:
        if not e.region.equals(cleaned[-1].region):
            cleaned.append(e)
    return Chain(ambient, cleaned)


# -- root continuity -----------------------------------------------------------


def root_continuity_probe(chain: Chain, epsilon: Fraction) -> bool:
    """Build root-shifted perturbations of the chain; whenever the perturbed
    chain is epsilon-close in the level-two metric, its root must be
    epsilon-close to the original root."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise PreconditionError("epsilon must be positive")
    tree = chain.ambient
    r = root(chain)
    targets = []
    for n in tree.node_ids:
        p = node_point(n)
        if p != r and tree.distance(r, p) <= 2 * epsilon:
            targets.append(p)
    for key in tree.edge_keys:
        p = tree.point_on_edge(key[0], key[1], Fraction(1, 2))
        if p != r and tree.distance(r, p) <= 2 * epsilon:
            targets.append(p)
    for y in targets:
        shifted = _shift_root(chain, y)
        if shifted is None:
            continue
        if hausdorff2(chain, shifted) < epsilon:
            if tree.distance(r, root(shifted)) >= epsilon:
                return False
    return True


def _shift_root(chain: Chain, y: Point):
    tree = chain.ambient
    r = root(chain)
    connector = Subdendrite(tree, [y, r])
    elements = [Subdendrite(tree, [y]), connector]
    for k in chain.elements[1:]:
        elements.append(Subdendrite(tree, list(k.extremes) + [y]))
    cleaned = [elements[0]]
    for e in elements[1:]:
        if cleaned[-1].region.subset_of(e.region) and not cleaned[-1].region.equals(e.region):
            cleaned.append(e)
    if len(cleaned) < 2 or not cleaned[-1].region.equals(tree.whole().region):
        return None
    return Chain(tree, cleaned)
