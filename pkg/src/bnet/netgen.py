"""Seeded random graded networks and the figure topologies used as fixtures."""

from __future__ import annotations

import string
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleConfig, UnknownFixture
from .model import NetworkModel, make_network, with_rows

# stream tags for the counter-based generator
_TOPOLOGY = 1
_CPT = 2


@dataclass
class GenConfig:
    seed: int = 0
    hidden_per_rank: list[int] = field(default_factory=lambda: [1])
    observed_per_rank: list[int] = field(default_factory=lambda: [1])
    states_per_var: int = 2
    edge_density: float = 0.5
    max_parents: int = 4

    @property
    def ranks(self) -> int:
        return len(self.hidden_per_rank)


def _rng(seed: int, *key: int) -> np.random.Generator:
    """Independent stream keyed by (seed, *key); adding keys never shifts others."""
    ss = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, *key])
    return np.random.Generator(np.random.Philox(ss))


def state_labels(l: int) -> list[str]:
    if l <= 26:
        return list(string.ascii_lowercase[:l])
    return [f"s{i}" for i in range(l)]


def random_rows(seed: int, node: int, n_rows: int, card: int) -> np.ndarray:
    rows = np.empty((n_rows, card))
    for k in range(n_rows):
        draw = _rng(seed, _CPT, node, k).uniform(size=card) + 1e-3
        rows[k] = draw / draw.sum()
    return rows


def reseed_cpts(net: NetworkModel, seed: int) -> NetworkModel:
    """Replace every CPT by seeded random rows, keeping the topology."""
    rows = {}
    for c in net.cpts:
        rows[c.owner] = random_rows(seed, c.owner, c.rows.shape[0], c.rows.shape[1])
    return with_rows(net, rows)


def _check(cfg: GenConfig) -> None:
    t, s = cfg.hidden_per_rank, cfg.observed_per_rank
    if len(t) != len(s) or not t:
        raise InfeasibleConfig("hidden_per_rank and observed_per_rank need the same non-zero length")
    if any(c < 0 for c in t + s):
        raise InfeasibleConfig("slice sizes must be non-negative")
    for r in range(1, len(t)):
        if t[r] < 1:
            raise InfeasibleConfig(f"rank {r} has no hidden variable; ranks above 0 need one")
        if t[r - 1] < 1:
            raise InfeasibleConfig(f"rank {r} hidden variables need a hidden parent at rank {r - 1}")
    if cfg.states_per_var < 1:
        raise InfeasibleConfig("states_per_var must be >= 1")
    if not 0 < cfg.edge_density <= 1:
        raise InfeasibleConfig("edge_density must lie in (0, 1]")
    if cfg.max_parents < 1:
        raise InfeasibleConfig("max_parents must be >= 1")


def gen_graded(cfg: GenConfig) -> NetworkModel:
    """Random graded network with exactly ``t_r`` hidden and ``s_r`` observed
    variables of semi-rank ``r``.

    Nodes are laid out rank by rank and edges only point forward in that
    layout, so the graph is acyclic. A rank-``r`` hidden variable draws its
    hidden parents from rank ``r - 1`` (at least one when ``r >= 1``); an
    observed rank-``r`` variable draws them from rank ``r`` (at least one when
    ``r >= 1``). Observed parents may come from any earlier observed node.
    """
    _check(cfg)
    rng = _rng(cfg.seed, _TOPOLOGY)
    labels = state_labels(cfg.states_per_var)
    names: list[str] = []
    observed: list[bool] = []
    edges: list[tuple[str, str]] = []
    hidden_by_rank: list[list[str]] = []
    earlier_obs: list[str] = []
    nx = ny = 0

    def new(obs: bool) -> str:
        nonlocal nx, ny
        if obs:
            nx += 1
            name = f"X{nx}"
        else:
            ny += 1
            name = f"Y{ny}"
        names.append(name)
        observed.append(obs)
        return name

    def pick(pool: list[str], required: bool, budget: int) -> list[str]:
        if not pool or budget <= 0:
            return []
        chosen = [p for p in pool if rng.uniform() < cfg.edge_density]
        if required and not chosen:
            chosen = [pool[int(rng.integers(len(pool)))]]
        if len(chosen) > budget:
            keep = sorted(rng.choice(len(chosen), size=budget, replace=False))
            chosen = [chosen[i] for i in keep]
        return chosen

    def attach(child: str, hidden_pool: list[str], required: bool) -> None:
        hp = pick(hidden_pool, required, cfg.max_parents)
        op = pick(earlier_obs, False, cfg.max_parents - len(hp))
        edges.extend((p, child) for p in op + hp)

    for r, (t_r, s_r) in enumerate(zip(cfg.hidden_per_rank, cfg.observed_per_rank)):
        if r == 0:
            # observed roots may precede the rank-0 hidden layer; the rest follow it
            pre = [bool(rng.uniform() < 0.5) or t_r == 0 for _ in range(s_r)]
            for is_pre in pre:
                if is_pre:
                    attach(new(True), [], False)
                    earlier_obs.append(names[-1])
        layer = []
        for _ in range(t_r):
            name = new(False)
            attach(name, hidden_by_rank[r - 1] if r else [], r >= 1)
            layer.append(name)
        hidden_by_rank.append(layer)
        post = s_r if r else sum(1 for p in pre if not p)
        added = []
        for _ in range(post):
            name = new(True)
            attach(name, layer, r >= 1)
            added.append(name)
        earlier_obs.extend(added)

    variables = [(n, labels, o) for n, o in zip(names, observed)]
    net = make_network(variables, edges, check=False)
    return reseed_cpts(net, cfg.seed)


def fixture_edges(name: str, n: int | None = None) -> tuple[list[tuple[str, bool]], list[tuple[str, str]]]:
    """Variables ``(name, observed)`` and edges of a named figure topology."""
    if name == "fig1":
        vs = [(f"X{i}", True) for i in range(1, 5)]
        return vs, [("X1", "X2"), ("X1", "X3"), ("X2", "X4"), ("X3", "X4")]
    if name == "fig2":
        vs = [("X1", True)] + [(f"Y{i}", False) for i in range(1, 6)]
        return vs, [("X1", "Y1"), ("Y1", "Y2"), ("Y1", "Y3"), ("Y2", "Y4"),
                    ("Y3", "Y5"), ("Y4", "Y5")]
    if name == "fig3":
        vs = [("X1", True), ("X2", True), ("X3", True)] + [(f"Y{i}", False) for i in range(1, 5)]
        return vs, [("X1", "X2"), ("X1", "Y1"), ("X2", "Y2"), ("Y1", "Y2"), ("Y1", "Y3"),
                    ("Y2", "X3"), ("Y2", "Y4"), ("Y3", "Y4")]
    if name in ("star", "hmm", "fan"):
        if n is None or n < 1:
            raise UnknownFixture(f"fixture {name!r} needs n >= 1")
        if name == "star":
            vs = [("X1", True)] + [(f"Y{i}", False) for i in range(1, n + 1)]
            return vs, [("X1", f"Y{i}") for i in range(1, n + 1)]
        if name == "fan":
            vs = [(f"Y{i}", False) for i in range(1, n + 1)] + [("X1", True)]
            return vs, [(f"Y{i}", "X1") for i in range(1, n + 1)]
        vs, es = [], []
        for i in range(1, n + 1):
            vs += [(f"Y{i}", False), (f"X{i}", True)]
            if i > 1:
                es.append((f"Y{i - 1}", f"Y{i}"))
            es.append((f"Y{i}", f"X{i}"))
        return vs, es
    raise UnknownFixture(f"unknown fixture {name!r}")


def gen_fixture(name: str, n: int | None = None, *, states: int = 2,
                seed: int | None = None) -> NetworkModel:
    """Figure topology with uniform CPTs, or seeded random ones when ``seed`` is given."""
    vs, es = fixture_edges(name, n)
    labels = state_labels(states)
    net = make_network([(v, labels, o) for v, o in vs], es)
    return net if seed is None else reseed_cpts(net, seed)


def sample_config(seed: int, *, max_hidden: int = 12, max_assignments: int = 4096,
                  max_rank: int = 4, max_observed: int = 4,
                  states: tuple[int, ...] = (2, 3)) -> GenConfig:
    """Draw a random :class:`GenConfig` whose hidden space stays enumerable."""
    rng = _rng(seed, 3)
    l = int(rng.choice(states))
    n_cap = 1
    while n_cap < max_hidden and l ** (n_cap + 1) <= max_assignments:
        n_cap += 1
    n = int(rng.integers(min(2, n_cap), n_cap + 1))
    top = int(rng.integers(0, min(max_rank, n - 1) + 1))
    hidden = [1] * (top + 1)
    for _ in range(n - top - 1):
        hidden[int(rng.integers(top + 1))] += 1
    observed = [0] * (top + 1)
    for _ in range(int(rng.integers(1, max_observed + 1))):
        observed[int(rng.integers(top + 1))] += 1
    return GenConfig(seed=seed, hidden_per_rank=hidden, observed_per_rank=observed,
                     states_per_var=l, edge_density=float(rng.uniform(0.3, 0.8)))
