"""MAP explanations of hidden variables in the (min, +) semiring.

Two engines compute the weight ``w_X(x) = min_y w_{X,Y}(x, y)`` and its
minimizers:

* :func:`trop_brute_force` enumerates every hidden assignment and works on
  any network;
* :func:`forward_dp` evaluates the network rank by rank, keeping one trellis
  column per rank, and requires a graded network. :func:`backtrace` then
  follows the recorded minimizing predecessors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Mapping, Sequence

import numpy as np

from .errors import (NoExplanation, NotGraded, SliceTooLarge, UngradedSlice)
from .graph import NodeId
from .model import (ENUM_CAP, Assignment, NetworkModel, check_full,
                    gather_factors, iter_hidden_chunks, marginal_brute_force,
                    mixed_radix_digits)
from .ranking import (RankAssignment, SliceStateSpace, compute_semi_ranks,
                      slice_states)
from .tropical import INF, WeightModel, tropicalize_model

SLICE_CAP = 10 ** 6
TIE_TOL = 1e-12
_BLOCK_CELLS = 1 << 22

Mode = Literal["one", "all"]
Engine = Literal["auto", "dp", "oracle"]


@dataclass
class Trellis:
    """DP array ``A[r, y]`` with all tied predecessors per entry.

    The predecessors of ``(r, y)`` are ``bp_idx[r][bp_ptr[r][y]:bp_ptr[r][y + 1]]``
    (CSR layout); rank 0 has none.
    """

    spaces: list[SliceStateSpace]
    columns: list[np.ndarray]
    bp_ptr: list[np.ndarray | None]
    bp_idx: list[np.ndarray | None]
    weight: float
    final: np.ndarray
    cell_updates: int = 0

    def backpointers(self, r: int, y: int) -> np.ndarray:
        if r == 0:
            return np.empty(0, dtype=np.int64)
        ptr = self.bp_ptr[r]
        return self.bp_idx[r][ptr[y]:ptr[y + 1]]

    @property
    def rho_max(self) -> int:
        return len(self.columns) - 1


@dataclass
class InferenceResult:
    weight: float
    marginal: float | None
    explanations: list[Assignment]
    explanation_count: int
    engine: str = "dp"
    trellis: Trellis | None = field(default=None, repr=False)

    @property
    def probability(self) -> float:
        """max_y p_{X,Y}(x, y), i.e. exp(-weight)."""
        return math.exp(-self.weight) if self.weight < INF else 0.0


def _slice_pair(ranks: RankAssignment, r: int):
    cur = ranks.slices[r]
    prev = ranks.slices[r - 1].hidden if r > 0 else ()
    return cur, prev


def _factor_order(ranks: RankAssignment, r: int) -> list[NodeId]:
    s = ranks.slices[r]
    return list(s.observed) + list(s.hidden)


def _parent_source(wm: WeightModel, ranks: RankAssignment, r: int, v: NodeId, u: NodeId) -> str:
    """Where the value of parent ``u`` of rank-``r`` variable ``v`` comes from."""
    net = wm.net
    if net.variables[u].observed:
        return "x"
    if net.variables[v].observed and ranks.rho[u] == r:
        return "cur"
    if not net.variables[v].observed and ranks.rho[u] == r - 1 and r >= 1:
        return "prev"
    raise UngradedSlice(
        f"parent {net.variables[u].name} (rank {ranks.rho[u]}) of "
        f"{net.variables[v].name} (rank {r}) is not available to the slice")


def slice_term_weight(wm: WeightModel, ranks: RankAssignment, r: int,
                      x: Mapping[NodeId, int], y_r: Sequence[int],
                      y_prev: Sequence[int] = ()) -> float:
    """Sum of the weights of all rank-``r`` factors for one state pair.

    ``y_r`` gives the states of the rank-``r`` hidden variables and
    ``y_prev`` those of rank ``r - 1`` (empty for ``r == 0``). Observed
    factors are added before hidden ones, each in slice order.
    """
    cur, prev = _slice_pair(ranks, r)
    if len(y_r) != len(cur.hidden) or len(y_prev) != len(prev):
        raise ValueError("state tuples do not match the slice sizes")
    vals = {"x": x, "cur": dict(zip(cur.hidden, y_r)), "prev": dict(zip(prev, y_prev))}
    cards = wm.net.cards
    total = 0.0
    for v in _factor_order(ranks, r):
        k, stride = 0, 1
        for u in wm.net.dag.parents[v]:
            k += vals[_parent_source(wm, ranks, r, v, u)][u] * stride
            stride *= cards[u]
        s = x[v] if wm.net.variables[v].observed else vals["cur"][v]
        total = total + float(wm.tables[v][k, s])
    return total


def _slice_term_block(wm: WeightModel, ranks: RankAssignment, r: int,
                      x: Mapping[NodeId, int], cur_digits: list[np.ndarray],
                      prev_digits: list[np.ndarray], n_prev: int) -> np.ndarray:
    """Vectorized :func:`slice_term_weight` over a block of D(r) x D(r-1)."""
    cur, prev = _slice_pair(ranks, r)
    n_cur = len(cur_digits[0]) if cur_digits else 1
    sources = {
        "x": dict(x),
        "cur": {v: d[:, None] for v, d in zip(cur.hidden, cur_digits)},
        "prev": {v: d[None, :] for v, d in zip(prev, prev_digits)},
    }
    cards = wm.net.cards
    term = np.zeros((n_cur, n_prev))
    for v in _factor_order(ranks, r):
        k = 0
        stride = 1
        for u in wm.net.dag.parents[v]:
            k = k + sources[_parent_source(wm, ranks, r, v, u)][u] * stride
            stride *= cards[u]
        s = x[v] if wm.net.variables[v].observed else sources["cur"][v]
        term = term + wm.tables[v][k, s]
    return term


def forward_dp(wm: WeightModel, ranks: RankAssignment, x: Mapping[NodeId, int],
               slice_cap: int = SLICE_CAP, tol: float = TIE_TOL) -> Trellis:
    """Fill the trellis rank by rank and return it; ``trellis.weight`` is w_X(x)."""
    net = wm.net
    check_full(net, x, net.observed)
    if not ranks.graded:
        w, u = ranks.witness, ranks.witness_parent
        raise NotGraded(
            f"network is not graded: {net.variables[w].name} has hidden parent "
            f"{net.variables[u].name} at rank {ranks.rho[u]}, rank is {ranks.rho[w]}",
            witness=w, parent=u)
    spaces = [slice_states(ranks, r) for r in range(ranks.rho_max + 1)]
    for sp in spaces:
        if sp.size > slice_cap:
            raise SliceTooLarge(f"|D({sp.rank})| = {sp.size} exceeds the slice cap {slice_cap}")

    columns: list[np.ndarray] = []
    bp_ptr: list[np.ndarray | None] = [None]
    bp_idx: list[np.ndarray | None] = [None]
    updates = 0

    d0 = spaces[0]
    col = np.empty(d0.size)
    block = max(1, _BLOCK_CELLS)
    for start in range(0, d0.size, block):
        stop = min(d0.size, start + block)
        col[start:stop] = _slice_term_block(wm, ranks, 0, x, d0.digits(start, stop), [], 1)[:, 0]
    updates += d0.size
    columns.append(col)

    for r in range(1, ranks.rho_max + 1):
        sp, prev_col = spaces[r], columns[r - 1]
        n_prev = prev_col.size
        prev_digits = spaces[r - 1].digits()
        col = np.empty(sp.size)
        counts = np.zeros(sp.size, dtype=np.int64)
        idx_parts = []
        block = max(1, _BLOCK_CELLS // n_prev)
        for start in range(0, sp.size, block):
            stop = min(sp.size, start + block)
            term = _slice_term_block(wm, ranks, r, x, sp.digits(start, stop), prev_digits, n_prev)
            cand = prev_col[None, :] + term
            best = cand.min(axis=1)
            col[start:stop] = best
            tied = (cand <= (best + tol)[:, None]) & np.isfinite(best)[:, None]
            rows, cols = np.nonzero(tied)
            counts[start:stop] = np.bincount(rows, minlength=stop - start)
            idx_parts.append(cols.astype(np.int64))
            updates += (stop - start) * n_prev
        ptr = np.zeros(sp.size + 1, dtype=np.int64)
        np.cumsum(counts, out=ptr[1:])
        bp_ptr.append(ptr)
        bp_idx.append(np.concatenate(idx_parts) if idx_parts else np.empty(0, dtype=np.int64))
        columns.append(col)

    last = columns[-1]
    w = float(last.min())
    final = np.nonzero(last <= w + tol)[0] if w < INF else np.empty(0, dtype=np.int64)
    return Trellis(spaces, columns, bp_ptr, bp_idx, w, final, updates)


def _optimal_sets(trellis: Trellis) -> list[np.ndarray]:
    """Per rank, the states lying on at least one optimal chain."""
    R = trellis.rho_max
    opt: list[np.ndarray] = [np.empty(0, dtype=np.int64)] * (R + 1)
    opt[R] = np.asarray(trellis.final, dtype=np.int64)
    for r in range(R, 0, -1):
        parts = [trellis.backpointers(r, int(y)) for y in opt[r]]
        opt[r - 1] = np.unique(np.concatenate(parts)) if parts else np.empty(0, dtype=np.int64)
    return opt


def _chain_to_assignment(spaces: Sequence[SliceStateSpace], chain: Sequence[int]) -> Assignment:
    out: Assignment = {}
    for sp, idx in zip(spaces, chain):
        out.update(zip(sp.variables, sp.decode(int(idx))))
    return out


def explanation_key(spaces: Sequence[SliceStateSpace], y: Mapping[NodeId, int]) -> tuple[int, ...]:
    """Slice-major ordering key: mixed-radix index of each slice in rank order."""
    return tuple(sp.encode([y[v] for v in sp.variables]) for sp in spaces)


def backtrace(trellis: Trellis, ranks: RankAssignment | None = None,
              mode: Mode = "one") -> list[Assignment]:
    """Recover one or all explanations from a filled trellis.

    ``mode="one"`` returns the explanation that is smallest in slice-major
    order; ``mode="all"`` returns every explanation in that order.
    """
    if not trellis.weight < INF:
        raise NoExplanation("w_X(x) is infinite; the evidence has probability 0")
    opt = _optimal_sets(trellis)
    R = trellis.rho_max
    if mode == "one":
        chain = [int(opt[0][0])]
        for r in range(1, R + 1):
            for y in opt[r]:
                if chain[-1] in trellis.backpointers(r, int(y)):
                    chain.append(int(y))
                    break
        return [_chain_to_assignment(trellis.spaces, chain)]
    if mode != "all":
        raise ValueError(f"unknown mode {mode!r}")
    chains: list[tuple[int, ...]] = []
    stack = [(R, int(y), ()) for y in trellis.final]
    while stack:
        r, y, suffix = stack.pop()
        path = (y,) + suffix
        if r == 0:
            chains.append(path)
            continue
        for yp in trellis.backpointers(r, y):
            stack.append((r - 1, int(yp), path))
    chains.sort()
    return [_chain_to_assignment(trellis.spaces, c) for c in chains]


def explanation_count(trellis: Trellis) -> int:
    """Number of optimal chains, counted without enumerating them."""
    if not trellis.weight < INF:
        return 0
    counts = [1] * trellis.columns[0].size
    for r in range(1, trellis.rho_max + 1):
        ptr, idx = trellis.bp_ptr[r], trellis.bp_idx[r]
        counts = [sum(counts[j] for j in idx[ptr[y]:ptr[y + 1]])
                  for y in range(trellis.columns[r].size)]
    return sum(counts[int(y)] for y in trellis.final)


def trop_brute_force(wm: WeightModel, x: Mapping[NodeId, int], cap: int = ENUM_CAP,
                     tol: float = TIE_TOL) -> tuple[float, list[Assignment]]:
    """Minimum total weight over all hidden assignments, and every minimizer.

    Minimizers are returned in hidden-enumeration order (first hidden
    variable least significant).
    """
    net = wm.net
    check_full(net, x, net.observed)
    hidden = net.hidden
    best = INF
    pool: list[tuple[float, int]] = []
    for offset, digits in iter_hidden_chunks(net, cap):
        values: dict = dict(x)
        values.update(zip(hidden, digits))
        total = np.zeros(len(digits[0]) if digits else 1)
        for f in gather_factors(net, wm.tables, values):
            total = total + f
        m = float(total.min())
        if m < INF and m <= best + tol:
            best = min(best, m)
            hits = np.nonzero(total <= best + tol)[0]
            pool.extend((float(total[i]), offset + int(i)) for i in hits)
    if not best < INF:
        return INF, []
    cards = [net.variables[v].card for v in hidden]
    argmins = []
    for w, index in pool:
        if w <= best + tol:
            states = [int(d[0]) for d in mixed_radix_digits(cards, index, index + 1)]
            argmins.append(dict(zip(hidden, states)))
    return best, argmins


def infer(net: NetworkModel, x: Mapping[NodeId, int], mode: Mode = "one",
          engine: Engine = "auto", slice_cap: int = SLICE_CAP,
          enum_cap: int = ENUM_CAP, wm: WeightModel | None = None) -> InferenceResult:
    """Most probable hidden states given ``x``.

    ``engine="auto"`` runs the rank DP on graded networks and falls back to
    enumeration otherwise. The marginal p_X(x) is attached when the hidden
    space is small enough to enumerate.
    """
    if engine not in ("auto", "dp", "oracle"):
        raise ValueError(f"unknown engine {engine!r}")
    if mode not in ("one", "all"):
        raise ValueError(f"unknown mode {mode!r}")
    check_full(net, x, net.observed)
    wm = wm or tropicalize_model(net)
    ranks = compute_semi_ranks(net)
    use_dp = engine == "dp" or (engine == "auto" and ranks.graded)
    marginal = marginal_brute_force(net, x, enum_cap) if net.hidden_space_size() <= enum_cap else None

    if use_dp:
        trellis = forward_dp(wm, ranks, x, slice_cap)
        if not trellis.weight < INF:
            return InferenceResult(INF, marginal, [], 0, "dp", trellis)
        return InferenceResult(trellis.weight, marginal, backtrace(trellis, ranks, mode),
                               explanation_count(trellis), "dp", trellis)

    w, argmins = trop_brute_force(wm, x, enum_cap)
    spaces = [slice_states(ranks, r) for r in range(ranks.rho_max + 1)]
    argmins.sort(key=lambda y: explanation_key(spaces, y))
    shown = argmins[:1] if mode == "one" else argmins
    return InferenceResult(w, marginal, shown, len(argmins), "oracle")
