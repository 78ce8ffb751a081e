"""Command-line front end.

Exit codes: 0 success, 1 malformed input or usage, 2 precondition failure,
3 refinement needed at the configured cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import io
from .builder import RefinementSchedule, build_wm, gamma_chain, inverse_limit_stage
from .chains import check_generic_conditions, generate_generic_chain, is_willful
from .errors import DendrolabError, PreconditionError, RefineNeeded
from .fullness import endpoint_diff, is_full, is_maximal_branch, is_nowhere_dense
from .homeo import bf_subcontinua, extend_and_verify, verify_invariants
from .hyperspace import hausdorff
from .nerve import is_tree_nerve, nerve, tree_like_check, _canonical_cover
from .tree import OMEGA, Dendrite, node_point, point_along_path


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _Usage(f"{path}: {exc}")


class _Usage(Exception):
    pass


def _write(path, text):
    if path == "-" or path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _parse_orders(raw):
    orders = []
    for part in raw.split(","):
        part = part.strip()
        orders.append(OMEGA if part.lower() == "omega" else int(part))
    return tuple(orders)


def _load_space(path) -> Dendrite:
    return io.dendrite_from_json(_read_json(path))


def cmd_build(args):
    schedule = RefinementSchedule(
        _parse_orders(args.orders), args.count, Fraction(args.ratio), args.depth
    )
    tree = build_wm(schedule)
    meta = {
        "orders": [io.order_to_json(o) for o in schedule.orders],
        "count": schedule.count,
        "ratio": io.frac_str(schedule.ratio),
        "depth": schedule.depth,
    }
    _write(args.out, io.dumps(io.dendrite_to_json(tree, schedule=meta)))
    return 0


def cmd_invlimit(args):
    f = io.bonding_from_json(_read_json(args.pairs))
    tree = inverse_limit_stage(f, Fraction(args.t), args.k)
    _write(args.out, io.dumps(io.dendrite_to_json(tree)))
    return 0


def cmd_hausdorff(args):
    tree = _load_space(args.space)
    a = io.subdendrite_from_json(tree, _read_json(args.a))
    b = io.subdendrite_from_json(tree, _read_json(args.b))
    print(io.frac_str(hausdorff(a, b)))
    return 0


def cmd_classify(args):
    tree = _load_space(args.space)
    k = io.subdendrite_from_json(tree, _read_json(args.k))
    eps = Fraction(args.eps)
    failures = []
    for n in sorted(k.region.nodes, key=repr):
        if tree.is_branching_node(n) and not is_maximal_branch(k, node_point(n)):
            failures.append(n)
    report = {
        "full": is_full(k),
        "nowhere_dense": is_nowhere_dense(k, eps),
        "endpoint_diff": [io.point_to_json(w.point) for w in endpoint_diff(k)],
        "maximality_failures": failures,
    }
    _write(args.out, io.dumps(report))
    return 0


def cmd_chain_gen(args):
    tree = _load_space(args.space)
    delta = Fraction(args.delta) if args.delta else tree.mesh()
    chain = generate_generic_chain(tree, args.seed, delta)
    _write(args.out, io.dumps(io.chain_to_json(chain)))
    return 0


def cmd_chain_check(args):
    doc = _read_json(args.chain)
    chain = io.chain_from_json(doc)
    eps = Fraction(args.eps) if args.eps else chain.ambient.mesh()
    report = check_generic_conditions(chain, eps)
    will_all = is_willful(chain, "ALL_ARCS")
    out = dict(report.as_dict())
    out["willful_all_arcs"] = will_all is True
    _write(args.out, io.dumps(out))
    return 0 if report.passes else 2


def cmd_chain_gamma(args):
    f = io.bonding_from_json(_read_json(args.pairs))
    grid = [Fraction(g) for g in args.grid.split(",")]
    chain = gamma_chain(f, args.k, grid)
    _write(args.out, io.dumps(io.chain_to_json(chain)))
    return 0


def _lift_point(new_tree, p):
    if p.is_node():
        return new_tree.point(p.node)
    u, v = p.edge
    a, b = new_tree.point(u), new_tree.point(v)
    return point_along_path(new_tree, a, b, p.t * new_tree.distance(a, b))


def cmd_homeo(args):
    tree = _load_space(args.space)
    doc1, doc2 = _read_json(args.k1), _read_json(args.k2)
    attempts = 0
    while True:
        k1 = io.subdendrite_from_json(tree, doc1)
        k2 = io.subdendrite_from_json(tree, doc2)
        try:
            iso = bf_subcontinua(k1, k2, args.steps)
            break
        except RefineNeeded as exc:
            attempts += 1
            meta = getattr(tree, "schedule_meta", None)
            if attempts > args.auto_refine or meta is None:
                print(f"REFINE_NEEDED: {exc.constraint}", file=sys.stderr)
                return 3
            schedule = RefinementSchedule(
                tuple(io.order_from_json(o) for o in meta["orders"]),
                meta["count"],
                Fraction(meta["ratio"]),
                meta["depth"] + attempts,
            )
            deeper = build_wm(schedule)
            doc1 = {
                "extremes": [io.point_to_json(_lift_point(deeper, p)) for p in k1.extremes]
            }
            doc2 = {
                "extremes": [io.point_to_json(_lift_point(deeper, p)) for p in k2.extremes]
            }
            tree = deeper
    report = extend_and_verify(iso)
    out = {
        "pairs": [[io.point_to_json(s), io.point_to_json(t)] for s, t in iso.pairs],
        "base": [io.point_to_json(iso.base[0]), io.point_to_json(iso.base[1])],
        "invariants_ok": report.invariants_ok,
        "violations": report.violations,
        "max_defect": io.frac_str(report.max_defect),
    }
    _write(args.out, io.dumps(out))
    return 0


def cmd_nerve(args):
    doc = _read_json(args.space)
    try:
        space = io.dendrite_from_json(doc)
    except DendrolabError:
        space = io.graph_from_json(doc)
    eps = Fraction(args.eps)
    ok, payload = tree_like_check(space, eps)
    if ok:
        sys.stdout.write(io.nerve_to_dot(nerve(payload)))
        print(f"// tree-like at eps={io.frac_str(eps)}: cover of {len(payload.opens)} opens")
        return 0
    print(f"// NOT tree-like at eps={io.frac_str(eps)}; nerve cycle: {payload}")
    return 2


def cmd_export_dot(args):
    tree = _load_space(args.space)
    highlights = []
    colors = args.color or []
    for i, path in enumerate(args.highlight or []):
        sub = io.subdendrite_from_json(tree, _read_json(path))
        color = colors[i] if i < len(colors) else "red"
        highlights.append((sub, color))
    _write(args.out, io.dendrite_to_dot(tree, highlights))
    return 0


def _build_parser():
    top = argparse.ArgumentParser(prog="dendrolab")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a refinement approximation")
    p.add_argument("--orders", required=True, help="comma list, e.g. 3,omega")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--ratio", default="1/2")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("invlimit", help="finite stage of the inverse limit")
    p.add_argument("--pairs", required=True)
    p.add_argument("--t", default="1")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_invlimit)

    p = sub.add_parser("hausdorff", help="exact Hausdorff distance")
    p.add_argument("--space", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_hausdorff)

    p = sub.add_parser("classify", help="fullness and density report")
    p.add_argument("--space", required=True)
    p.add_argument("--k", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_classify)

    chain = sub.add_parser("chain", help="chain operations").add_subparsers(
        dest="chain_command", required=True
    )
    p = chain.add_parser("gen")
    p.add_argument("--space", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", default=None)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_chain_gen)
    p = chain.add_parser("check")
    p.add_argument("--chain", required=True)
    p.add_argument("--eps", default=None)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_chain_check)
    p = chain.add_parser("gamma")
    p.add_argument("--pairs", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--grid", required=True, help="comma list ending at 1")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_chain_gamma)

    p = sub.add_parser("homeo", help="back-and-forth between subcontinua")
    p.add_argument("--space", required=True)
    p.add_argument("--k1", required=True)
    p.add_argument("--k2", required=True)
    p.add_argument("--steps", type=int, default=12)
    p.add_argument("--auto-refine", type=int, default=0, dest="auto_refine")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_homeo)

    p = sub.add_parser("nerve", help="tree-likeness via ball-cover nerves")
    p.add_argument("--space", required=True)
    p.add_argument("--eps", required=True)
    p.set_defaults(func=cmd_nerve)

    p = sub.add_parser("export-dot", help="DOT drawing with highlights")
    p.add_argument("--space", required=True)
    p.add_argument("--highlight", action="append")
    p.add_argument("--color", action="append")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_export_dot)
    return top


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RefineNeeded as exc:
        print(f"REFINE_NEEDED: {exc.constraint}", file=sys.stderr)
        return 3
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return 2
    except DendrolabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
