import itertools
import math

import numpy as np
import pytest

from bnet import (backtrace, compute_semi_ranks, forward_dp, hmm_evidence,
                  hmm_to_network, tropicalize_model, viterbi_hmm)
from bnet.netgen import fixture_edges


def random_hmm(seed, l, k=3):
    rng = np.random.default_rng(seed)
    norm = lambda a: a / a.sum(axis=-1, keepdims=True)
    return (norm(rng.uniform(0.05, 1, (l, l))), norm(rng.uniform(0.05, 1, (l, k))),
            norm(rng.uniform(0.05, 1, l)))


def path_weight(T, E, I, obs, path):
    w = -math.log(I[path[0]]) - math.log(E[path[0], obs[0]])
    for a, b, o in zip(path, path[1:], obs[1:]):
        w += -math.log(T[a, b]) - math.log(E[b, o])
    return w


def test_single_step():
    T, E, I = random_hmm(0, 3)
    w, path = viterbi_hmm(T, E, I, [2])
    expected = min(-math.log(E[y, 2]) - math.log(I[y]) for y in range(3))
    assert w == pytest.approx(expected, abs=1e-15)
    assert path_weight(T, E, I, [2], path) == pytest.approx(w, abs=1e-12)


def test_forced_chain():
    T = np.eye(3)
    E = np.eye(3)
    I = np.array([0.2, 0.5, 0.3])
    w, path = viterbi_hmm(T, E, I, [1, 1, 1, 1])
    assert path == [1, 1, 1, 1]
    assert w == pytest.approx(-math.log(0.5), abs=1e-15)


def test_network_shape_matches_hmm_fixture():
    net = hmm_to_network(*random_hmm(1, 2), n=3)
    _, edges = fixture_edges("hmm", 3)
    names = [v.name for v in net.variables]
    assert sorted((names[u], names[v]) for u, v in net.dag.edges) == sorted(edges)


@pytest.mark.parametrize("seed", range(3))
def test_viterbi_vs_dp_vs_enumeration(seed):
    l, n = 3, 8
    T, E, I = random_hmm(seed, l)
    obs = list(np.random.default_rng(seed).integers(0, 3, n))
    w, path = viterbi_hmm(T, E, I, obs)

    net = hmm_to_network(T, E, I, n)
    ranks = compute_semi_ranks(net)
    trellis = forward_dp(tropicalize_model(net), ranks, hmm_evidence(net, obs))
    assert trellis.weight == w

    best = min(path_weight(T, E, I, obs, p) for p in itertools.product(range(l), repeat=n))
    assert w == pytest.approx(best, abs=1e-9)
    explanations = backtrace(trellis, ranks, "all")
    as_paths = [[y[net.var(f"Y{r}").id] for r in range(1, n + 1)] for y in explanations]
    assert path in as_paths
