"""
JSON and DOT encodings of simple marked graphs.

JSON schema:
    {"vertices": [{"id": 2, "sign": "+"}, {"id": "m", "sign": "-"}],
     "undirected": [[2, 3]],
     "directed": [[4, 5]]}

DOT output is always a digraph; undirected edges carry ``dir=none`` and a
dashed style, and vertex labels read ``name^sign``.
"""

import json
from typing import Any, Dict, List, Union

from gene_assembly.errors import GraphStructureError
from gene_assembly.marked_graph import SimpleMarkedGraph
from gene_assembly.strings import M, format_identity, parse_identity


M_NODE_STYLE = 'shape=doublecircle, style=filled, fillcolor="#FFF2CC"'
POINTER_NODE_STYLE = "shape=circle"
UNDIRECTED_EDGE_STYLE = "dir=none, style=dashed"


def graph_to_json(g: SimpleMarkedGraph, indent: int = 2) -> str:
    return json.dumps(g.to_dict(), indent=indent, ensure_ascii=False)


def _vertex(value: Any) -> Any:
    try:
        return parse_identity(value)
    except ValueError as exc:
        raise GraphStructureError(str(exc)) from None


def _pair(edge: Any, kind: str) -> List[Any]:
    if not isinstance(edge, (list, tuple)) or len(edge) != 2:
        raise GraphStructureError(f"{kind} edge {edge!r} must be a pair")
    return [_vertex(v) for v in edge]


def graph_from_json(data: Union[str, Dict[str, Any]]) -> SimpleMarkedGraph:
    """Inverse of ``graph_to_json``; accepts the text or an already decoded dict."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise GraphStructureError(f"invalid graph JSON: {exc}") from None
    if not isinstance(data, dict) or "vertices" not in data:
        raise GraphStructureError("graph JSON needs a 'vertices' list")

    signs = {}
    for entry in data["vertices"]:
        try:
            vertex, sign = _vertex(entry["id"]), entry["sign"]
        except (KeyError, TypeError):
            raise GraphStructureError(f"vertex entry {entry!r} needs 'id' and 'sign'") from None
        if vertex in signs:
            raise GraphStructureError(f"vertex {vertex} listed twice")
        if sign not in ("+", "-"):
            raise GraphStructureError(f"vertex {vertex}: sign must be '+' or '-'")
        signs[vertex] = sign

    return SimpleMarkedGraph.build(
        signs,
        [_pair(e, "undirected") for e in data.get("undirected", [])],
        [tuple(_pair(e, "directed")) for e in data.get("directed", [])],
    )


def _node_name(v: Any) -> str:
    return f'"{format_identity(v)}"'


def graph_to_dot(g: SimpleMarkedGraph, name: str = "G") -> str:
    lines = [f"digraph {name} {{"]
    for v in g.vertices:
        style = M_NODE_STYLE if v == M else POINTER_NODE_STYLE
        label = f"{format_identity(v)}^{g.signs[v].value}"
        lines.append(f'  {_node_name(v)} [label="{label}", {style}];')
    for x, y in g.sorted_undirected():
        lines.append(f"  {_node_name(x)} -> {_node_name(y)} [{UNDIRECTED_EDGE_STYLE}];")
    for x, y in g.sorted_directed():
        lines.append(f"  {_node_name(x)} -> {_node_name(y)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
