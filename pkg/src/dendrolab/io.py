"""JSON and DOT serialization.  Rationals travel as "num/den" strings and
all dumps are key-sorted so identical inputs produce identical bytes."""

from __future__ import annotations

import json
from fractions import Fraction

from .builder import BondingFunction
from .chains import Chain
from .errors import DendrolabError
from .nerve import MetricGraph
from .tree import OMEGA, Dendrite, Point, Subdendrite, node_point


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def parse_frac(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise DendrolabError(f"bad rational {s!r}") from exc


def order_to_json(order):
    return "omega" if order is OMEGA else order


def order_from_json(raw):
    if raw == "omega":
        return OMEGA
    if isinstance(raw, int) and raw >= 1:
        return raw
    raise DendrolabError(f"bad order {raw!r}")


def dendrite_to_json(tree: Dendrite, schedule: dict | None = None) -> dict:
    doc = {
        "nodes": [{"id": n, "order": order_to_json(tree.target_order(n))} for n in tree.node_ids],
        "edges": [[u, v, frac_str(tree.edge_length((u, v)))] for u, v in tree.edge_keys],
    }
    if tree.depth is not None:
        doc["depth"] = tree.depth
    if schedule is not None:
        doc["schedule"] = schedule
    return doc


def dendrite_from_json(doc) -> Dendrite:
    try:
        nodes = [(n["id"], order_from_json(n["order"])) for n in doc["nodes"]]
        edges = [(u, v, parse_frac(length)) for u, v, length in doc["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DendrolabError(f"malformed dendrite document: {exc}") from exc
    tree = Dendrite(nodes, edges, depth=doc.get("depth"))
    tree.schedule_meta = doc.get("schedule")
    return tree


def point_to_json(p: Point) -> dict:
    if p.is_node():
        return {"node": p.node}
    return {"edge": list(p.edge), "t": frac_str(p.t)}


def point_from_json(tree: Dendrite, doc) -> Point:
    if "node" in doc:
        return tree.point(doc["node"])
    u, v = doc["edge"]
    return tree.point_on_edge(u, v, parse_frac(doc["t"]))


def subdendrite_to_json(sub: Subdendrite) -> dict:
    return {"extremes": [point_to_json(p) for p in sub.extremes]}


def subdendrite_from_json(tree: Dendrite, doc) -> Subdendrite:
    try:
        pts = [point_from_json(tree, p) for p in doc["extremes"]]
    except (KeyError, TypeError) as exc:
        raise DendrolabError(f"malformed subdendrite document: {exc}") from exc
    return Subdendrite(tree, pts)


def chain_to_json(chain: Chain) -> dict:
    return {
        "space": dendrite_to_json(chain.ambient),
        "elements": [[point_to_json(p) for p in k.extremes] for k in chain.elements],
        "mesh": frac_str(chain.mesh),
    }


def chain_from_json(doc, tree: Dendrite | None = None) -> Chain:
    if tree is None:
        tree = dendrite_from_json(doc["space"])
    try:
        elements = [
            Subdendrite(tree, [point_from_json(tree, p) for p in pts]) for pts in doc["elements"]
        ]
    except (KeyError, TypeError) as exc:
        raise DendrolabError(f"malformed chain document: {exc}") from exc
    return Chain(tree, elements)


def bonding_from_json(doc) -> BondingFunction:
    try:
        return BondingFunction([(parse_frac(a), parse_frac(b)) for a, b in doc])
    except (TypeError, ValueError) as exc:
        raise DendrolabError(f"malformed pairs document: {exc}") from exc


def graph_from_json(doc) -> MetricGraph:
    try:
        nodes = [n["id"] if isinstance(n, dict) else n for n in doc["nodes"]]
        edges = [(u, v, parse_frac(length)) for u, v, length in doc["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DendrolabError(f"malformed graph document: {exc}") from exc
    return MetricGraph(nodes, edges)


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# -- DOT export ----------------------------------------------------------------


def _dot_id(n) -> str:
    return '"' + str(n).replace('"', r"\"") + '"'


def dendrite_to_dot(tree: Dendrite, highlights=()) -> str:
    """DOT text for a dendrite; ``highlights`` is a list of (subdendrite,
    color) pairs painting nodes and any partially covered edge."""
    lines = ["graph dendrite {", "  node [shape=circle];"]
    node_color = {}
    edge_color = {}
    for sub, color in highlights:
        for n in sub.region.nodes:
            node_color[n] = color
        for key in sub.region.spans:
            edge_color[key] = color
    for n in tree.node_ids:
        attrs = [f'label="{n}:{order_to_json(tree.target_order(n))}"']
        if n in node_color:
            attrs.append(f'color="{node_color[n]}"')
            attrs.append("penwidth=2")
        lines.append(f"  {_dot_id(n)} [{', '.join(attrs)}];")
    for u, v in tree.edge_keys:
        attrs = [f'label="{frac_str(tree.edge_length((u, v)))}"']
        if (u, v) in edge_color:
            attrs.append(f'color="{edge_color[(u, v)]}"')
            attrs.append("penwidth=2")
        lines.append(f"  {_dot_id(u)} -- {_dot_id(v)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def nerve_to_dot(nerve_graph) -> str:
    lines = ["graph nerve {"]
    for i in range(nerve_graph.vertex_count):
        lines.append(f"  {i};")
    for e in sorted(map(sorted, nerve_graph.edges)):
        lines.append(f"  {e[0]} -- {e[1]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
