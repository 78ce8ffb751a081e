"""Back-and-forth construction of order-, betweenness- and membership-
preserving partial bijections between branching-point sets, plus the
extension of an accepted bijection to an isomorphism of induced trees.

The search is a deterministic lexicographic depth-first search over the
constraint space (lowest admissible node id first); when it exhausts the
space, the finite approximation cannot realize the next constraint and a
REFINE_NEEDED error carries the failing constraint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .chains import Chain, check_generic_conditions, hitting_time, is_willful, root
from .errors import DendrolabError, PreconditionError, RefineNeeded
from .fullness import is_full, is_nowhere_dense
from .hyperspace import directed_region_hausdorff
from .tree import (
    OMEGA,
    Dendrite,
    Point,
    Region,
    Subdendrite,
    first_point_map,
    median,
    node_point,
)


@dataclass(frozen=True)
class SubcontinuaContext:
    k1: Subdendrite
    k2: Subdendrite


@dataclass(frozen=True)
class ChainsContext:
    c1: Chain
    c2: Chain
    omega: bool = False


@dataclass
class PartialIso:
    """A finite partial bijection between ambient branching nodes, with the
    base points it is anchored at and the context it must respect."""

    pairs: tuple
    base: tuple  # (source base point, target base point)
    context: object

    @property
    def source_ambient(self) -> Dendrite:
        ctx = self.context
        return ctx.k1.ambient if isinstance(ctx, SubcontinuaContext) else ctx.c1.ambient

    @property
    def target_ambient(self) -> Dendrite:
        ctx = self.context
        return ctx.k2.ambient if isinstance(ctx, SubcontinuaContext) else ctx.c2.ambient

    def source_tree(self) -> Subdendrite:
        pts = [self.base[0]] + [s for s, _ in self.pairs]
        return Subdendrite(self.source_ambient, pts)

    def target_tree(self) -> Subdendrite:
        pts = [self.base[1]] + [t for _, t in self.pairs]
        return Subdendrite(self.target_ambient, pts)


def verify_invariants(iso: PartialIso) -> list:
    """Re-check all type invariants independently of how the iso was built.
    Returns a list of violation descriptions (empty when valid)."""
    src, tgt = iso.source_ambient, iso.target_ambient
    ctx = iso.context
    x, y = iso.base
    out = []
    sources = [s for s, _ in iso.pairs]
    targets = [t for _, t in iso.pairs]
    if len(set(sources)) != len(sources) or len(set(targets)) != len(targets):
        out.append("not injective")
    for s, t in iso.pairs:
        if not (s.is_node() and src.is_branching_node(s.node)):
            out.append(f"source {s!r} is not an ambient branching node")
        if not (t.is_node() and tgt.is_branching_node(t.node)):
            out.append(f"target {t!r} is not an ambient branching node")
    for s, t in iso.pairs:
        if s.is_node() and t.is_node() and src.target_order(s.node) != tgt.target_order(t.node):
            out.append(f"order mismatch at {s!r}")
    all_pairs = list(iso.pairs) + [(x, y)]
    for i, (s1, t1) in enumerate(all_pairs):
        for j, (s2, t2) in enumerate(all_pairs):
            for k, (s3, t3) in enumerate(all_pairs):
                if i == j or j == k or i == k:
                    continue
                if src.between(s1, s2, s3) != tgt.between(t1, t2, t3):
                    out.append(f"betweenness broken on ({s1!r},{s2!r},{s3!r})")
    if isinstance(ctx, SubcontinuaContext):
        for s, t in iso.pairs:
            if ctx.k1.contains_point(s) != ctx.k2.contains_point(t):
                out.append(f"membership broken at {s!r}")
    else:
        hs = {s: hitting_time(ctx.c1, s) for s, _ in iso.pairs}
        ht = {t: hitting_time(ctx.c2, t) for _, t in iso.pairs}
        for s1, t1 in iso.pairs:
            for s2, t2 in iso.pairs:
                if (hs[s1] <= hs[s2]) != (ht[t1] <= ht[t2]):
                    out.append(f"hitting order broken on ({s1!r},{s2!r})")
    # tree closure: meets toward the base are themselves mapped consistently
    smap = dict(iso.pairs)
    for i, (s1, t1) in enumerate(iso.pairs):
        for s2, t2 in iso.pairs[i + 1 :]:
            ms = median(src, s1, s2, x)
            mt = median(tgt, t1, t2, y)
            if ms == x:
                if mt != y:
                    out.append(f"closure broken at base for ({s1!r},{s2!r})")
            elif ms in smap:
                if mt != smap[ms]:
                    out.append(f"closure image mismatch at {ms!r}")
            else:
                out.append(f"meet {ms!r} of ({s1!r},{s2!r}) is not mapped")
    return sorted(set(out))


# -- the search ----------------------------------------------------------------


class _Side:
    """One direction of the construction: map nodes of ``tree`` to nodes of
    ``other`` respecting the context seen from this side."""

    def __init__(self, tree, other, base, obase, member, omember, hit, ohit):
        self.tree = tree
        self.other = other
        self.base = base
        self.obase = obase
        self.member = member
        self.omember = omember
        self.hit = hit
        self.ohit = ohit


class _SearchState:
    def __init__(self, fwd: _Side, bwd: _Side, goal: int):
        self.fwd = fwd
        self.bwd = bwd
        self.goal = goal
        self.pairs: list = []  # (source, target) in insertion order
        self.smap: dict = {}
        self.tmap: dict = {}
        self.note: str | None = None

    def size(self) -> int:
        return len(self.pairs)


def _hull(tree, base, points) -> Subdendrite:
    return Subdendrite(tree, [base] + points)


def _minimal_interval(tree, vertices, z):
    """The two vertices whose open interval contains z, none between."""
    best1 = None
    for w in vertices:
        if w == z:
            continue
        d = tree.distance(z, w)
        if best1 is None or (d, w) < (best1[0], best1[1]):
            if best1 is None or d < best1[0]:
                best1 = (d, w)
    u1 = best1[1]
    best2 = None
    for w in vertices:
        if w == z or w == u1:
            continue
        if not tree.between(w, u1, z):
            continue  # same side as u1
        d = tree.distance(z, w)
        if best2 is None or d < best2[0]:
            best2 = (d, w)
    if best2 is None:
        return None
    return u1, best2[1]


def _image_of(state, side, v):
    if v == side.base:
        return side.obase
    return state.smap[v] if side is state.fwd else state.tmap[v]


def _admissible(state, side, s, c) -> bool:
    """Full constraint check for adding the pair s -> c on this side."""
    tree, other = side.tree, side.other
    used = state.tmap if side is state.fwd else state.smap
    if c in used:
        return False
    if not (c.is_node() and other.is_branching_node(c.node)):
        return False
    if tree.target_order(s.node) != other.target_order(c.node):
        return False
    if side.member is not None and side.member(s) != side.omember(c):
        return False
    existing = state.pairs if side is state.fwd else [(t, s2) for s2, t in state.pairs]
    if side.hit is not None:
        hs, hc = side.hit(s), side.ohit(c)
        for s2, t2 in existing:
            if (hs <= side.hit(s2)) != (hc <= side.ohit(t2)):
                return False
            if (side.hit(s2) <= hs) != (side.ohit(t2) <= hc):
                return False
    geo = existing + [(side.base, side.obase)]
    for i, (p1, q1) in enumerate(geo):
        for p2, q2 in geo[i + 1 :]:
            if tree.between(p1, p2, s) != other.between(q1, q2, c):
                return False
            if tree.between(s, p2, p1) != other.between(c, q2, q1):
                return False
            if tree.between(p1, s, p2) != other.between(q1, c, q2):
                return False
    # closure toward the base
    for p1, q1 in existing:
        ms = median(tree, s, p1, side.base)
        mt = median(other, c, q1, side.obase)
        if ms == side.base:
            if mt != side.obase:
                return False
        elif ms == s:
            if mt != c:
                return False
        elif ms == p1:
            if mt != q1:
                return False
        else:
            img = (state.smap if side is state.fwd else state.tmap).get(ms)
            if img is None or mt != img:
                return False
    return True


def _add_pair(state, side, s, c):
    if side is state.fwd:
        state.pairs.append((s, c))
        state.smap[s] = c
        state.tmap[c] = s
    else:
        state.pairs.append((c, s))
        state.smap[c] = s
        state.tmap[s] = c


def _pop_pair(state, side, s, c):
    state.pairs.pop()
    if side is state.fwd:
        del state.smap[s]
        del state.tmap[c]
    else:
        del state.smap[c]
        del state.tmap[s]


def _candidates(state, side, s, kind, anchor_image):
    """Admissible-by-structure candidate images of s, lowest node id first."""
    other = side.other
    if kind == "interval":
        u1, u2 = anchor_image
        cands = [
            node_point(n)
            for n in other.branching_nodes()
            if other.between(u1, u2, node_point(n)) and node_point(n) not in (u1, u2)
        ]
    else:  # fiber beyond the image tree
        t2 = anchor_image[0]
        proj = anchor_image[1]
        cands = []
        for n in other.branching_nodes():
            p = node_point(n)
            if t2.contains_point(p):
                continue
            if first_point_map(other, t2, p) == proj:
                cands.append(p)
    return sorted(cands)


def _dfs(state: _SearchState, forward_turn: bool, enum_s, enum_t) -> bool:
    if state.size() >= state.goal:
        return True
    pending_s = next((s for s in enum_s if s not in state.smap), None)
    pending_t = next((t for t in enum_t if t not in state.tmap), None)
    if pending_s is None and pending_t is None:
        return True
    if forward_turn:
        side, node = (state.fwd, pending_s) if pending_s is not None else (state.bwd, pending_t)
    else:
        side, node = (state.bwd, pending_t) if pending_t is not None else (state.fwd, pending_s)

    vertices = [side.base] + (
        list(state.smap) if side is state.fwd else list(state.tmap)
    )
    tree = side.tree
    hull = _hull(tree, side.base, vertices[1:])
    plan = []
    if hull.contains_point(node):
        interval = _minimal_interval(tree, vertices, node)
        if interval is None:
            state.note = f"no interval brackets {node!r} on the induced tree"
            return False
        plan.append((node, "interval", interval))
    else:
        z = first_point_map(tree, hull, node)
        if z != side.base and z not in (state.smap if side is state.fwd else state.tmap):
            if not (z.is_node() and tree.is_branching_node(z.node)):
                state.note = f"projection {z!r} of {node!r} is not a branching node"
                return False
            interval = _minimal_interval(tree, vertices, z)
            if interval is None:
                state.note = f"no interval brackets projection {z!r}"
                return False
            plan.append((z, "interval", interval))
        plan.append((node, "fiber", z))
    return _exec_plan(state, side, plan, 0, forward_turn, enum_s, enum_t)


def _exec_plan(state, side, plan, idx, forward_turn, enum_s, enum_t) -> bool:
    if idx == len(plan):
        return _dfs(state, not forward_turn, enum_s, enum_t)
    node, kind, anchor = plan[idx]
    if kind == "interval":
        u1, u2 = anchor
        anchor_image = (_image_of(state, side, u1), _image_of(state, side, u2))
    else:
        z = anchor
        t2 = _hull(side.other, side.obase, list(state.tmap if side is state.fwd else state.smap))
        anchor_image = (t2, _image_of(state, side, z))
    found_any = False
    for c in _candidates(state, side, node, kind, anchor_image):
        if not _admissible(state, side, node, c):
            continue
        found_any = True
        _add_pair(state, side, node, c)
        if _exec_plan(state, side, plan, idx + 1, forward_turn, enum_s, enum_t):
            return True
        _pop_pair(state, side, node, c)
    if not found_any and state.note is None:
        state.note = f"no admissible image for {node!r} ({kind})"
    return False


def _run_search(ctx, steps: int) -> PartialIso:
    if isinstance(ctx, SubcontinuaContext):
        src, tgt = ctx.k1.ambient, ctx.k2.ambient
        base_x = _pick_base(ctx.k1)
        base_y = _pick_base(ctx.k2)
        fwd = _Side(src, tgt, base_x, base_y, ctx.k1.contains_point, ctx.k2.contains_point, None, None)
        bwd = _Side(tgt, src, base_y, base_x, ctx.k2.contains_point, ctx.k1.contains_point, None, None)
    else:
        src, tgt = ctx.c1.ambient, ctx.c2.ambient
        base_x, base_y = root(ctx.c1), root(ctx.c2)
        hit1 = lambda p: hitting_time(ctx.c1, p)
        hit2 = lambda p: hitting_time(ctx.c2, p)
        fwd = _Side(src, tgt, base_x, base_y, None, None, hit1, hit2)
        bwd = _Side(tgt, src, base_y, base_x, None, None, hit2, hit1)
    enum_s = [node_point(n) for n in src.branching_nodes() if node_point(n) != base_x]
    enum_t = [node_point(n) for n in tgt.branching_nodes() if node_point(n) != base_y]
    goal = min(steps, max(len(enum_s), len(enum_t)))
    state = _SearchState(fwd, bwd, goal)
    if not _dfs(state, True, enum_s, enum_t):
        raise RefineNeeded(state.note or "back-and-forth search exhausted")
    return PartialIso(tuple(state.pairs), (base_x, base_y), ctx)


def _pick_base(k: Subdendrite) -> Point:
    """Base point inside the subtree: an ambient leaf when available, else
    the first canonical extreme."""
    tree = k.ambient
    for p in k.extremes:
        if p.is_node() and tree.degree(p.node) == 1:
            return p
    return k.extremes[0]


# -- public operations ---------------------------------------------------------


def bf_subcontinua(k1: Subdendrite, k2: Subdendrite, steps: int) -> PartialIso:
    """Partial bijection carrying one full nowhere-dense subtree toward the
    other, built by alternating back-and-forth extension."""
    if k1.ambient is not k2.ambient:
        raise PreconditionError("subcontinua must share the ambient tree")
    mesh = k1.ambient.mesh()
    for name, k in (("first", k1), ("second", k2)):
        if not is_full(k):
            raise PreconditionError(f"the {name} subcontinuum is not full")
        if not is_nowhere_dense(k, mesh):
            raise PreconditionError(f"the {name} subcontinuum is not nowhere dense at the mesh")
    return _run_search(SubcontinuaContext(k1, k2), steps)


def bf_chains(c1: Chain, c2: Chain, steps: int, epsilon=None) -> PartialIso:
    """Partial bijection carrying one generic chain toward the other."""
    for idx, c in ((1, c1), (2, c2)):
        eps = Fraction(epsilon) if epsilon is not None else c.ambient.mesh()
        report = check_generic_conditions(c, eps)
        if not report.passes:
            failing = [
                name
                for name, ok in (
                    ("i", report.root_is_endpoint),
                    ("ii", report.steps_nowhere_dense),
                    ("iii", report.at_most_one_branch_extreme),
                    ("iv", report.willful),
                )
                if not ok
            ]
            raise PreconditionError(f"chain {idx} fails generic condition(s) {failing}")
    return _run_search(ChainsContext(c1, c2, omega=False), steps)


@dataclass
class BranchEndpointReport:
    root_is_endpoint: bool
    steps_nowhere_dense: bool
    branch_endpoints_admissible: bool
    willful: bool

    @property
    def passes(self) -> bool:
        return (
            self.root_is_endpoint
            and self.steps_nowhere_dense
            and self.branch_endpoints_admissible
            and self.willful
        )


def check_branch_endpoint_conditions(chain: Chain, epsilon) -> BranchEndpointReport:
    """The chain-class conditions of the inverse-limit construction: root at
    an endpoint, nowhere-dense steps, willfulness, and for every element
    with a branching-node endpoint, all endpoints are branching nodes or
    ambient endpoints with the branching ones epsilon-dense."""
    epsilon = Fraction(epsilon)
    base = check_generic_conditions(chain, epsilon)
    tree = chain.ambient
    admissible = True
    for k in chain.elements:
        if k.is_degenerate():
            continue
        branch_ext = [p for p in k.extremes if p.is_node() and tree.is_branching_node(p.node)]
        if not branch_ext:
            continue
        for p in k.extremes:
            if not p.is_node() or not (
                tree.is_branching_node(p.node) or tree.degree(p.node) == 1
            ):
                admissible = False
        pts = Region(frozenset(p.node for p in branch_ext), {})
        if directed_region_hausdorff(tree, k.region, pts) >= epsilon:
            admissible = False
    return BranchEndpointReport(
        root_is_endpoint=base.root_is_endpoint,
        steps_nowhere_dense=base.steps_nowhere_dense,
        branch_endpoints_admissible=admissible,
        willful=base.willful,
    )


def bf_chains_omega(c1: Chain, c2: Chain, steps: int, epsilon=None) -> PartialIso:
    """The unbounded-order variant: equal hitting times may be matched, and
    the chain class is the one with dense branching-node endpoints."""
    for idx, c in ((1, c1), (2, c2)):
        if not any(c.ambient.target_order(n) is OMEGA for n in c.ambient.node_ids):
            raise PreconditionError(f"chain {idx}'s ambient carries no unbounded-order nodes")
        eps = Fraction(epsilon) if epsilon is not None else c.ambient.mesh()
        report = check_branch_endpoint_conditions(c, eps)
        if not report.passes:
            raise PreconditionError(f"chain {idx} fails the branch-endpoint chain conditions")
    return _run_search(ChainsContext(c1, c2, omega=True), steps)


# -- extension and verification --------------------------------------------------


@dataclass
class VerificationReport:
    invariants_ok: bool
    violations: list
    structure_ok: bool
    max_defect: Fraction
    interval_count: int = 0
    detail: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.invariants_ok and self.structure_ok and self.max_defect == 0


def _vertex_intervals(tree, vertices):
    out = []
    for i, p in enumerate(vertices):
        for q in vertices[i + 1 :]:
            if not any(
                tree.between(p, q, w) and w != p and w != q for w in vertices
            ):
                out.append((p, q))
    return out


def _cover_interval_on(tree, p, q, region):
    from .chains import _arc_cover_interval, _steps_with_prefix

    steps, prefix, total = _steps_with_prefix(tree, p, q)
    return _arc_cover_interval(tree, steps, prefix, region), total


def extend_and_verify(iso: PartialIso) -> VerificationReport:
    """Extend the node bijection to an isomorphism of the induced trees and
    measure how well it carries the context across.

    Interpolation on corresponding intervals is piecewise linear with the
    constraint cut points aligned; when the cut patterns disagree the
    defect is the largest one-dimensional Hausdorff mismatch."""
    violations = verify_invariants(iso)
    if violations:
        return VerificationReport(False, violations, False, Fraction(0))
    src, tgt = iso.source_ambient, iso.target_ambient
    x, y = iso.base
    smap = dict(iso.pairs)
    smap_full = dict(iso.pairs)
    smap_full[x] = y

    v1 = [x] + [s for s, _ in iso.pairs]
    intervals = _vertex_intervals(src, v1)
    v2set = set([y] + [t for _, t in iso.pairs])
    structure_ok = True
    for p, q in intervals:
        ip, iq = smap_full[p], smap_full[q]
        for w in v2set:
            if w not in (ip, iq) and tgt.between(ip, iq, w):
                structure_ok = False

    if isinstance(iso.context, SubcontinuaContext):
        classes = [("K", iso.context.k1.region, iso.context.k2.region)]
    else:
        c1, c2 = iso.context.c1, iso.context.c2
        classes = []
        seen = set()
        for s, t in iso.pairs:
            i = hitting_time(c1, s)
            if i in seen:
                continue
            seen.add(i)
            j = hitting_time(c2, t)
            classes.append((f"hit[{i}->{j}]", c1.elements[i].region, c2.elements[j].region))

    max_defect = Fraction(0)
    detail = []
    for p, q in intervals:
        ip, iq = smap_full[p], smap_full[q]
        scuts, tcuts = [], []
        per_class = []
        total1 = total2 = None
        for name, reg1, reg2 in classes:
            s_int, total1 = _cover_interval_on(src, p, q, reg1)
            t_int, total2 = _cover_interval_on(tgt, ip, iq, reg2)
            per_class.append((name, s_int, t_int))
            for iv, cuts, total in ((s_int, scuts, total1), (t_int, tcuts, total2)):
                if iv is not None:
                    cuts.extend(v for v in iv if 0 < v < total)
        sb = sorted({Fraction(0), total1, *scuts})
        tb = sorted({Fraction(0), total2, *tcuts})

        def mapped(v):
            if len(sb) == len(tb):
                for (a0, a1), (b0, b1) in zip(zip(sb, sb[1:]), zip(tb, tb[1:])):
                    if a0 <= v <= a1:
                        if a1 == a0:
                            return b0
                        return b0 + (v - a0) * (b1 - b0) / (a1 - a0)
            return v * total2 / total1  # fallback: plain linear

        for name, s_int, t_int in per_class:
            if s_int is None and t_int is None:
                continue
            if s_int is None or t_int is None:
                defect = max(
                    (t_int[1] - t_int[0]) if t_int else Fraction(0),
                    (s_int[1] - s_int[0]) * total2 / total1 if s_int else Fraction(0),
                    total2 / max(len(sb), 2),
                )
                max_defect = max(max_defect, defect)
                detail.append(((p, q), name, defect))
                continue
            m0, m1 = mapped(s_int[0]), mapped(s_int[1])
            defect = max(abs(m0 - t_int[0]), abs(m1 - t_int[1]))
            if defect > 0:
                detail.append(((p, q), name, defect))
            max_defect = max(max_defect, defect)

    return VerificationReport(
        True, [], structure_ok, max_defect, interval_count=len(intervals), detail=detail
    )
