"""Semi-ranks, rank slices and the gradedness test.

A hidden variable sits one level above its deepest hidden parent; an
observed variable sits at the level of its deepest hidden parent. Variables
without hidden parents get level 0. The network is graded when every hidden
parent of a hidden variable is exactly one level below it and every hidden
parent of an observed variable is on the same level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import NodeId
from .model import NetworkModel, mixed_radix_digits


@dataclass(frozen=True)
class Slice:
    rank: int
    observed: tuple[NodeId, ...]
    hidden: tuple[NodeId, ...]


@dataclass(frozen=True)
class GradedVerdict:
    graded: bool
    witness: NodeId | None = None
    parent: NodeId | None = None

    def __bool__(self):
        return self.graded


@dataclass(frozen=True)
class RankAssignment:
    rho: tuple[int, ...]
    rho_max: int
    slices: tuple[Slice, ...]
    graded: bool
    witness: NodeId | None
    witness_parent: NodeId | None
    cards: tuple[int, ...]

    def slice_sizes(self) -> list[tuple[int, int]]:
        """(s_r, t_r) per rank."""
        return [(len(s.observed), len(s.hidden)) for s in self.slices]


@dataclass(frozen=True)
class SliceStateSpace:
    """Joint states of the hidden variables of one rank.

    State ``i`` is the mixed-radix number whose least significant digit is
    the first hidden variable of the slice. An empty slice has exactly one
    state, the empty tuple.
    """

    rank: int
    variables: tuple[NodeId, ...]
    cards: tuple[int, ...]

    @property
    def size(self) -> int:
        return math.prod(self.cards)

    def __len__(self):
        return self.size

    def digits(self, start: int = 0, stop: int | None = None) -> list[np.ndarray]:
        stop = self.size if stop is None else stop
        return mixed_radix_digits(self.cards, start, stop)

    def decode(self, index: int) -> tuple[int, ...]:
        out = []
        for c in self.cards:
            out.append(index % c)
            index //= c
        return tuple(out)

    def encode(self, states: Sequence[int]) -> int:
        idx, stride = 0, 1
        for s, c in zip(states, self.cards):
            idx += s * stride
            stride *= c
        return idx

    def __iter__(self):
        for i in range(self.size):
            yield self.decode(i)


def _hidden_parents(net: NetworkModel, v: NodeId) -> list[NodeId]:
    return [u for u in net.dag.parents[v] if not net.variables[u].observed]


def is_graded(net: NetworkModel, ranks: RankAssignment) -> GradedVerdict:
    """Check the semi-ranks form a rank function; report the first violation.

    Variables are scanned in topological order and parents in CPT order, so
    the witness is deterministic.
    """
    rho = ranks.rho
    for v in net.dag.order:
        want = rho[v] if net.variables[v].observed else rho[v] - 1
        for u in _hidden_parents(net, v):
            if rho[u] != want:
                return GradedVerdict(False, v, u)
    return GradedVerdict(True)


def compute_semi_ranks(net: NetworkModel) -> RankAssignment:
    n = len(net.variables)
    rho = [0] * n
    for v in net.dag.order:
        hp = _hidden_parents(net, v)
        if not hp:
            rho[v] = 0
        elif net.variables[v].observed:
            rho[v] = max(rho[u] for u in hp)
        else:
            rho[v] = max(rho[u] for u in hp) + 1
    rho_max = max(rho, default=0)
    obs: list[list[NodeId]] = [[] for _ in range(rho_max + 1)]
    hid: list[list[NodeId]] = [[] for _ in range(rho_max + 1)]
    for v in net.dag.order:
        (obs if net.variables[v].observed else hid)[rho[v]].append(v)
    slices = tuple(Slice(r, tuple(obs[r]), tuple(hid[r])) for r in range(rho_max + 1))
    partial = RankAssignment(tuple(rho), rho_max, slices, False, None, None,
                             tuple(net.cards))
    verdict = is_graded(net, partial)
    return RankAssignment(tuple(rho), rho_max, slices, verdict.graded,
                          verdict.witness, verdict.parent, tuple(net.cards))


def slice_states(ranks: RankAssignment, r: int) -> SliceStateSpace:
    if not 0 <= r <= ranks.rho_max:
        raise IndexError(f"rank {r} outside 0..{ranks.rho_max}")
    hidden = ranks.slices[r].hidden
    return SliceStateSpace(r, hidden, tuple(ranks.cards[v] for v in hidden))
