"""The (min, +) semiring on the extended reals and the map p -> -log p."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import NetworkModel

INF = math.inf
ZERO = INF  # additive identity
ONE = 0.0  # multiplicative identity


def trop_add(a: float, b: float) -> float:
    return a if a <= b else b


def trop_mul(a: float, b: float) -> float:
    if a == INF or b == INF:
        return INF
    return a + b


def tropicalize(p: float) -> float:
    """Natural-log weight of a probability; 0 maps to infinity."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability {p!r} outside [0, 1]")
    if p == 0.0:
        return INF
    return -math.log(p)


# Elementwise via math.log so that equal probabilities always give
# bit-identical weights regardless of array shape or SIMD path.
_tropicalize_elementwise = np.vectorize(tropicalize, otypes=[float])


def tropicalize_array(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.size == 0:
        return arr.copy()
    out = _tropicalize_elementwise(arr)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class WeightModel:
    """Per-node weight tables with the same row layout as the CPTs."""

    net: NetworkModel
    tables: tuple[np.ndarray, ...]


def tropicalize_model(net: NetworkModel) -> WeightModel:
    return WeightModel(net, tuple(tropicalize_array(c.rows) for c in net.cpts))
