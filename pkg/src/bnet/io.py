"""JSON network and evidence files.

Network file::

    {"variables": [{"name": "X1", "states": ["a", "b"], "observed": true}, ...],
     "edges": [["X1", "Y1"], ...],
     "cpts": {"Y1": {"parents": ["X1"], "rows": [[0.3, 0.7], [0.5, 0.5]]}, ...}}

Rows are listed in mixed-radix parent order (first parent least
significant) and ``parents`` must repeat the edge insertion order. Evidence
files map every observed variable name to a state label.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .errors import ParseError, UnknownName, ValidationError
from .model import Assignment, NetworkModel, Violation, make_network


def _load(data: bytes | str) -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(f"not UTF-8: {e}") from None
    try:
        return json.loads(data)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg} (line {e.lineno} column {e.colno})") from None


def _expect(value, kind, path):
    if not isinstance(value, kind) or (kind is not bool and isinstance(value, bool)):
        name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise ParseError(f"expected {name}, got {type(value).__name__}", path)
    return value


def parse_network(data: bytes | str) -> NetworkModel:
    doc = _expect(_load(data), dict, "$")
    for key in ("variables", "edges", "cpts"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}", "$")
    variables = []
    for i, v in enumerate(_expect(doc["variables"], list, "$.variables")):
        path = f"$.variables[{i}]"
        _expect(v, dict, path)
        for key in ("name", "states", "observed"):
            if key not in v:
                raise ParseError(f"missing key {key!r}", path)
        name = _expect(v["name"], str, f"{path}.name")
        states = _expect(v["states"], list, f"{path}.states")
        for j, s in enumerate(states):
            _expect(s, str, f"{path}.states[{j}]")
        variables.append((name, states, _expect(v["observed"], bool, f"{path}.observed")))
    if not variables:
        raise ValidationError([Violation("<network>", None, "network has no variables")])

    edges = []
    for i, e in enumerate(_expect(doc["edges"], list, "$.edges")):
        path = f"$.edges[{i}]"
        if not isinstance(e, list) or len(e) != 2 or not all(isinstance(s, str) for s in e):
            raise ParseError("edge must be a [parent, child] pair of names", path)
        edges.append((e[0], e[1]))

    names = [v[0] for v in variables]
    edge_parents: dict[str, list[str]] = {n: [] for n in names}
    for p, c in edges:
        for end in (p, c):
            if end not in edge_parents:
                raise UnknownName(f"edge references unknown variable {end!r}")
        edge_parents[c].append(p)

    cpt_doc = _expect(doc["cpts"], dict, "$.cpts")
    for key in cpt_doc:
        if key not in edge_parents:
            raise UnknownName(f"CPT for unknown variable {key!r}")
    rows = {}
    problems = []
    for name in names:
        path = f"$.cpts.{name}"
        if name not in cpt_doc:
            problems.append(Violation(name, None, "missing CPT"))
            continue
        entry = _expect(cpt_doc[name], dict, path)
        parents = _expect(entry.get("parents", []), list, f"{path}.parents")
        if parents != edge_parents[name]:
            problems.append(Violation(
                name, None, f"CPT parents {parents} differ from edge order {edge_parents[name]}"))
            continue
        table = _expect(entry.get("rows"), list, f"{path}.rows")
        width = None
        for k, row in enumerate(table):
            _expect(row, list, f"{path}.rows[{k}]")
            for j, p in enumerate(row):
                _expect(p, (int, float), f"{path}.rows[{k}][{j}]")
            if width is not None and len(row) != width:
                raise ParseError("ragged CPT rows", f"{path}.rows[{k}]")
            width = len(row)
        rows[name] = np.array(table, dtype=float).reshape(len(table), width or 0)
    if problems:
        raise ValidationError(problems)
    return make_network(variables, edges, rows)


def _num(x: float) -> str:
    return format(float(x), ".17g")


def serialize_network(net: NetworkModel) -> str:
    """Canonical text: fixed key order, floats with 17 significant digits."""
    lines = ["{", '  "variables": [']
    vs = []
    for v in net.variables:
        vs.append('    {"name": %s, "states": %s, "observed": %s}' % (
            json.dumps(v.name), json.dumps(list(v.states)), "true" if v.observed else "false"))
    lines.append(",\n".join(vs))
    lines.append("  ],")
    es = ", ".join("[%s, %s]" % (json.dumps(net.variables[u].name), json.dumps(net.variables[w].name))
                   for u, w in net.dag.edges)
    lines.append(f'  "edges": [{es}],')
    lines.append('  "cpts": {')
    cs = []
    for v, c in zip(net.variables, net.cpts):
        parents = json.dumps([net.variables[p].name for p in c.parents])
        rows = ", ".join("[" + ", ".join(_num(p) for p in row) + "]" for row in c.rows)
        cs.append(f'    {json.dumps(v.name)}: {{"parents": {parents}, "rows": [{rows}]}}')
    lines.append(",\n".join(cs))
    lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_evidence(data: bytes | str, net: NetworkModel) -> Assignment:
    doc = _expect(_load(data), dict, "$")
    for k, v in doc.items():
        _expect(v, str, f"$.{k}")
    return net.evidence(doc)


def serialize_evidence(net: NetworkModel, x: Assignment) -> str:
    return json.dumps(net.labels(x)) + "\n"
