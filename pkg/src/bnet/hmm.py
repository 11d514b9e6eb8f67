"""Classic Viterbi decoding and the HMM as a graded Bayesian network."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .model import NetworkModel, make_network
from .tropical import INF, tropicalize_array


def viterbi_hmm(transition, emission, initial, obs: Sequence[int]) -> tuple[float, list[int]]:
    """Minimum-weight hidden path of an HMM.

    Args:
        transition: ``l x l`` row-stochastic matrix, ``transition[i, j] = p(j | i)``.
        emission: ``l x k`` row-stochastic matrix of observation probabilities.
        initial: length-``l`` distribution of the first hidden state.
        obs: observed symbols ``x_1..x_n`` (n >= 1).

    Returns:
        ``(weight, path)``; the path is empty when the weight is infinite.
    """
    T = tropicalize_array(transition)
    E = tropicalize_array(emission)
    I = tropicalize_array(initial)
    obs = [int(o) for o in obs]
    if not obs:
        raise ValueError("need at least one observation")

    col = E[:, obs[0]] + I
    pointers = []
    for o in obs[1:]:
        # cand[y, y'] = A[y'] + (w(x | y) + w(y | y'))
        cand = col[None, :] + (E[:, o][:, None] + T.T)
        pointers.append(np.argmin(cand, axis=1))
        col = cand.min(axis=1)

    w = float(col.min())
    if not w < INF:
        return INF, []
    path = [int(np.argmin(col))]
    for bp in reversed(pointers):
        path.append(int(bp[path[-1]]))
    path.reverse()
    return w, path


def hmm_to_network(transition, emission, initial, n: int) -> NetworkModel:
    """Unroll an HMM into the chain Y1 -> Y2 -> ... -> Yn with Yr -> Xr."""
    transition = np.asarray(transition, dtype=float)
    emission = np.asarray(emission, dtype=float)
    l, k = emission.shape
    hidden_states = [f"s{i}" for i in range(l)]
    obs_states = [f"o{i}" for i in range(k)]
    variables, edges, cpts = [], [], {}
    for r in range(1, n + 1):
        variables.append((f"Y{r}", hidden_states, False))
        variables.append((f"X{r}", obs_states, True))
        if r > 1:
            edges.append((f"Y{r - 1}", f"Y{r}"))
            cpts[f"Y{r}"] = transition
        else:
            cpts["Y1"] = np.asarray(initial, dtype=float)[None, :]
        edges.append((f"Y{r}", f"X{r}"))
        cpts[f"X{r}"] = emission
    return make_network(variables, edges, cpts)


def hmm_evidence(net: NetworkModel, obs: Sequence[int]) -> dict[int, int]:
    return {net.var(f"X{r}").id: int(o) for r, o in enumerate(obs, start=1)}
