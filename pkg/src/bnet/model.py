"""Discrete Bayesian networks: variables, CPTs, joint and marginal evaluation.

A CPT is stored as a 2-D array ``rows[k, s]``: row ``k`` is the mixed-radix
index of the parent-state tuple (first parent least significant) and column
``s`` is the owner's state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import (StateSpaceTooLarge, UnassignedVariable, UnknownName,
                     ValidationError)
from .graph import Dag, NodeId, build_dag

Assignment = dict[NodeId, int]

ROW_TOL = 1e-9
ENUM_CAP = 2 ** 24
_CHUNK = 1 << 16


@dataclass(frozen=True)
class Variable:
    id: NodeId
    name: str
    states: tuple[str, ...]
    observed: bool

    @property
    def kind(self) -> str:
        return "observed" if self.observed else "hidden"

    @property
    def card(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class Cpt:
    owner: NodeId
    parents: tuple[NodeId, ...]
    rows: np.ndarray

    def row_index(self, parent_states: Sequence[int], cards: Sequence[int]) -> int:
        idx, stride = 0, 1
        for p, s in zip(self.parents, parent_states):
            idx += s * stride
            stride *= cards[p]
        return idx


@dataclass(frozen=True)
class Violation:
    node: str
    row: int | None
    message: str

    def __str__(self):
        where = self.node if self.row is None else f"{self.node} row {self.row}"
        return f"{where}: {self.message}"


@dataclass(frozen=True, eq=False)
class NetworkModel:
    """The pair (DAG, conditional distributions)."""

    dag: Dag
    variables: tuple[Variable, ...]
    cpts: tuple[Cpt, ...]

    @property
    def cards(self) -> list[int]:
        return [v.card for v in self.variables]

    @property
    def observed(self) -> list[NodeId]:
        return [v.id for v in self.variables if v.observed]

    @property
    def hidden(self) -> list[NodeId]:
        return [v.id for v in self.variables if not v.observed]

    def var(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise UnknownName(f"no variable named {name!r}")

    def evidence(self, labels: Mapping[str, str]) -> Assignment:
        """Turn ``{name: state label}`` into an assignment over observed nodes."""
        x = {}
        for name, label in labels.items():
            v = self.var(name)
            if not v.observed:
                raise UnknownName(f"{name!r} is hidden, evidence must name observed variables")
            if label not in v.states:
                raise UnknownName(f"{label!r} is not a state of {name!r}")
            x[v.id] = v.states.index(label)
        missing = [self.variables[i].name for i in self.observed if i not in x]
        if missing:
            raise UnassignedVariable(f"evidence missing observed variables {missing}")
        return x

    def labels(self, assignment: Mapping[NodeId, int]) -> dict[str, str]:
        return {self.variables[v].name: self.variables[v].states[s]
                for v, s in sorted(assignment.items())}

    def hidden_space_size(self) -> int:
        return math.prod(self.variables[v].card for v in self.hidden)


def make_network(variables: Sequence[tuple[str, Sequence[str], bool]],
                 edges: Sequence[tuple[str, str]],
                 cpts: Mapping[str, Sequence[Sequence[float]]] | None = None,
                 *, check: bool = True) -> NetworkModel:
    """Assemble a network from names.

    ``variables`` is a list of ``(name, states, observed)``; ``edges`` are
    ``(parent, child)`` name pairs. CPT rows missing from ``cpts`` default
    to uniform. With ``check`` the result is validated and
    :class:`ValidationError` raised on any violation.
    """
    ids = {}
    for i, (name, _, _) in enumerate(variables):
        if name in ids:
            raise ValidationError([Violation(name, None, "duplicate variable name")])
        ids[name] = i
    try:
        edge_ids = [(ids[u], ids[v]) for u, v in edges]
    except KeyError as e:
        raise UnknownName(f"edge references unknown variable {e.args[0]!r}") from None
    dag = build_dag(len(variables), edge_ids)
    vs = tuple(Variable(i, name, tuple(states), bool(obs))
               for i, (name, states, obs) in enumerate(variables))
    cards = [v.card for v in vs]
    cpts = dict(cpts or {})
    tables = []
    for v in vs:
        parents = dag.parents[v.id]
        n_rows = math.prod(cards[p] for p in parents)
        if v.name in cpts:
            rows = np.array(cpts[v.name], dtype=float)
        else:
            rows = np.full((n_rows, v.card), 1.0 / max(v.card, 1))
        rows.setflags(write=False)
        tables.append(Cpt(v.id, parents, rows))
    net = NetworkModel(dag, vs, tuple(tables))
    if check:
        report = validate(net)
        if report:
            raise ValidationError(report)
    return net


def with_rows(net: NetworkModel, rows: Mapping[NodeId, np.ndarray]) -> NetworkModel:
    """Copy of ``net`` with some CPT tables replaced (no validation)."""
    cpts = []
    for c in net.cpts:
        if c.owner in rows:
            r = np.array(rows[c.owner], dtype=float)
            r.setflags(write=False)
            c = Cpt(c.owner, c.parents, r)
        cpts.append(c)
    return NetworkModel(net.dag, net.variables, tuple(cpts))


def validate(net: NetworkModel) -> list[Violation]:
    """Return every violation found; an empty list means the net is valid."""
    out = []
    if not net.variables:
        out.append(Violation("<network>", None, "network has no variables"))
    if len(net.variables) != net.dag.node_count or len(net.cpts) != net.dag.node_count:
        out.append(Violation("<network>", None, "variable/CPT count does not match DAG"))
        return out
    cards = net.cards
    for v, cpt in zip(net.variables, net.cpts):
        if v.card < 1:
            out.append(Violation(v.name, None, "empty state set"))
            continue
        if len(set(v.states)) != v.card:
            out.append(Violation(v.name, None, "duplicate state labels"))
        if cpt.owner != v.id:
            out.append(Violation(v.name, None, f"CPT owner {cpt.owner} does not match node {v.id}"))
        if tuple(cpt.parents) != net.dag.parents[v.id]:
            out.append(Violation(v.name, None, "CPT parent order differs from DAG parents"))
            continue
        n_rows = math.prod(cards[p] for p in cpt.parents)
        rows = cpt.rows
        if rows.ndim != 2 or rows.shape != (n_rows, v.card):
            out.append(Violation(v.name, None,
                                 f"CPT shape {rows.shape} != expected {(n_rows, v.card)}"))
            continue
        for k, row in enumerate(rows):
            if not np.all(np.isfinite(row)) or np.any(row < 0) or np.any(row > 1):
                out.append(Violation(v.name, k, "entries must lie in [0, 1]"))
            elif abs(row.sum() - 1.0) > ROW_TOL:
                out.append(Violation(v.name, k, f"row sums to {row.sum():.12g}, not 1"))
    return out


def check_full(net: NetworkModel, full: Mapping[NodeId, int], scope: Sequence[NodeId]) -> None:
    for v in scope:
        if v not in full:
            raise UnassignedVariable(f"variable {net.variables[v].name!r} is unassigned")
        if not 0 <= full[v] < net.variables[v].card:
            raise UnassignedVariable(
                f"state {full[v]} out of range for {net.variables[v].name!r}")


def joint_probability(net: NetworkModel, full: Mapping[NodeId, int]) -> float:
    check_full(net, full, range(len(net.variables)))
    cards = net.cards
    p = 1.0
    for v in net.dag.order:
        cpt = net.cpts[v]
        k = cpt.row_index([full[u] for u in cpt.parents], cards)
        p *= float(cpt.rows[k, full[v]])
    return p


def mixed_radix_digits(cards: Sequence[int], start: int, stop: int) -> list[np.ndarray]:
    """Digits of indices ``start..stop-1``; the first digit is least significant."""
    idx = np.arange(start, stop, dtype=np.int64)
    digits = []
    for c in cards:
        digits.append(idx % c)
        idx = idx // c
    return digits


def iter_hidden_chunks(net: NetworkModel, cap: int = ENUM_CAP,
                       chunk: int = _CHUNK) -> Iterator[tuple[int, list[np.ndarray]]]:
    """Enumerate hidden assignments in mixed-radix order (hidden id order).

    Yields ``(offset, digits)`` where ``digits[j]`` holds the state of the
    j-th hidden variable for each assignment in the chunk.
    """
    hidden = net.hidden
    cards = [net.variables[v].card for v in hidden]
    total = math.prod(cards)
    if total > cap:
        raise StateSpaceTooLarge(f"{total} hidden assignments exceed the cap {cap}")
    for start in range(0, total, chunk):
        yield start, mixed_radix_digits(cards, start, min(total, start + chunk))


def gather_factors(net: NetworkModel, tables: Sequence[np.ndarray],
                   values: Mapping[NodeId, np.ndarray | int]) -> list[np.ndarray]:
    """Look up each node's table entry for vectorized assignments.

    ``tables[v]`` has the CPT row layout; ``values[v]`` is either a scalar
    state or an array of states. Returned in topological order.
    """
    cards = net.cards
    out = []
    for v in net.dag.order:
        k = 0
        stride = 1
        for p in net.dag.parents[v]:
            k = k + values[p] * stride
            stride *= cards[p]
        out.append(np.asarray(tables[v])[k, values[v]])
    return out


def marginal_brute_force(net: NetworkModel, x: Mapping[NodeId, int],
                         cap: int = ENUM_CAP) -> float:
    """p_X(x) by summing the joint over every hidden assignment."""
    check_full(net, x, net.observed)
    tables = [c.rows for c in net.cpts]
    total = 0.0
    for _, digits in iter_hidden_chunks(net, cap):
        values: dict[NodeId, np.ndarray | int] = dict(x)
        values.update(zip(net.hidden, digits))
        prod = np.ones(len(digits[0]) if digits else 1)
        for f in gather_factors(net, tables, values):
            prod = prod * f
        total += float(prod.sum())
    return total


def max_joint_brute_force(net: NetworkModel, x: Mapping[NodeId, int],
                          cap: int = ENUM_CAP) -> float:
    """max_y p_{X,Y}(x, y) by enumeration in probability space."""
    check_full(net, x, net.observed)
    tables = [c.rows for c in net.cpts]
    best = 0.0
    for _, digits in iter_hidden_chunks(net, cap):
        values: dict[NodeId, np.ndarray | int] = dict(x)
        values.update(zip(net.hidden, digits))
        prod = np.ones(len(digits[0]) if digits else 1)
        for f in gather_factors(net, tables, values):
            prod = prod * f
        best = max(best, float(prod.max()))
    return best


def in_degree_profile(dag: Dag) -> dict[int, int]:
    profile: dict[int, int] = {}
    for p in dag.parents:
        profile[len(p)] = profile.get(len(p), 0) + 1
    return profile


def parameter_count(profile: Mapping[int, int]) -> int:
    """Number of conditional distributions for binary variables.

    ``profile`` maps an in-degree k to the number of nodes with k parents;
    each such node needs 2**k distributions.
    """
    return sum(count * 2 ** k for k, count in profile.items())


def joint_table_size(n_vars: int, states: int = 2) -> int:
    return states ** n_vars
