"""Potts, random-cluster and Edwards-Sokal weights, and exact distributions.

Spin configurations are sequences of colors ``0..q-1``; their matrix index is
the base-``q`` number with vertex 0 as least significant digit.  RC states are
0/1 sequences over edge indices; their index is the edge bitmask.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .graph import Graph, component_counts, connected_components

DEFAULT_DIST_CAP = 1 << 20


class CapExceededError(RuntimeError):
    pass


@dataclass(frozen=True)
class ModelParams:
    q: int
    beta: float

    def __post_init__(self):
        if int(self.q) != self.q or self.q < 2:
            raise ValueError("q must be an integer >= 2")
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise ValueError("beta must be finite and >= 0")

    @classmethod
    def from_p(cls, q: int, p: float) -> "ModelParams":
        if not 0 <= p < 1:
            raise ValueError("p must lie in [0, 1)")
        return cls(q, -math.log1p(-p))

    @cached_property
    def p(self) -> float:
        return -math.expm1(-self.beta)

    @cached_property
    def p_star(self) -> float:
        """Dual edge probability: p*/(1-p*) = q(1-p)/p."""
        p = self.p
        if not 0 < p < 1:
            raise ValueError("dual parameter needs p in (0, 1)")
        # q(1-p) = q e^{-beta}; written so that p* = p exactly at the self-dual point
        a = self.q * math.exp(-self.beta)
        return a / (p + a)

    @cached_property
    def beta_star(self) -> float:
        # 1 - p* = p / (p + q e^{-beta})
        p = self.p
        return math.log((p + self.q * math.exp(-self.beta)) / p)

    def dual(self) -> "ModelParams":
        return ModelParams(self.q, self.beta_star)


def self_dual_p(q: int) -> float:
    return math.sqrt(q) / (1 + math.sqrt(q))


def critical_beta(q: int) -> float:
    return math.log1p(math.sqrt(q))


# ----------------------------------------------------------------------------
# single-state weights


def mono_edges(g: Graph, sigma: Sequence[int]) -> bytearray:
    """E(sigma); loops are always monochromatic."""
    return bytearray(1 if sigma[u] == sigma[v] else 0 for u, v in g.edges)


def energy(g: Graph, sigma: Sequence[int]) -> int:
    """Number of monochromatic edges."""
    return sum(1 for u, v in g.edges if sigma[u] == sigma[v])


def potts_log_weight(g: Graph, params: ModelParams, sigma: Sequence[int]) -> float:
    return params.beta * energy(g, sigma)


def potts_weight(g: Graph, params: ModelParams, sigma: Sequence[int]) -> float:
    """Unnormalised Boltzmann weight exp(beta * #monochromatic edges)."""
    return math.exp(potts_log_weight(g, params, sigma))


def _log_odds(params: ModelParams) -> float:
    p = params.p
    if not 0 < p < 1:
        raise ValueError(f"RC weights need p in (0, 1), got p={p}")
    return math.log(p) - math.log1p(-p)


def rc_log_weight(g: Graph, params: ModelParams, A: Sequence[int]) -> float:
    c = connected_components(g, A).count
    return sum(1 for a in A if a) * _log_odds(params) + c * math.log(params.q)


def rc_weight(g: Graph, params: ModelParams, A: Sequence[int]) -> float:
    """(p/(1-p))^|A| q^C(A)."""
    return math.exp(rc_log_weight(g, params, A))


def joint_weight(g: Graph, params: ModelParams, sigma: Sequence[int], A: Sequence[int]) -> float:
    """Edwards-Sokal weight (p/(1-p))^|A| 1(A subset of E(sigma)), unnormalised."""
    lo = _log_odds(params)
    for e, a in enumerate(A):
        if a and sigma[g.eu[e]] != sigma[g.ev[e]]:
            return 0.0
    return math.exp(sum(1 for a in A if a) * lo)


# ----------------------------------------------------------------------------
# enumeration


def potts_state_count(g: Graph, q: int) -> int:
    return q ** g.n_vertices


def spin_digits(n_vertices: int, q: int, idx: np.ndarray | int) -> np.ndarray:
    """Colors of the states with the given indices, shape ``idx.shape + (N,)``."""
    idx = np.asarray(idx, dtype=np.int64)
    powers = q ** np.arange(n_vertices, dtype=np.int64)
    return (idx[..., None] // powers) % q


def spin_index(sigma: Sequence[int], q: int) -> int:
    idx = 0
    for c in reversed(sigma):
        idx = idx * q + c
    return idx


def spin_config(idx: int, n_vertices: int, q: int) -> list[int]:
    out = []
    for _ in range(n_vertices):
        idx, c = divmod(idx, q)
        out.append(c)
    return out


def energies(g: Graph, q: int) -> np.ndarray:
    """Energy of every spin state, in index order."""
    n = q ** g.n_vertices
    idx = np.arange(n, dtype=np.int64)
    out = np.zeros(n, dtype=np.int64)
    for u, v in g.edges:
        if u == v:
            out += 1
        else:
            out += (idx // q**u) % q == (idx // q**v) % q
    return out


def mono_masks(g: Graph, q: int) -> np.ndarray:
    """Bitmask of E(sigma) for every spin state."""
    n = q ** g.n_vertices
    idx = np.arange(n, dtype=np.int64)
    out = np.zeros(n, dtype=np.int64)
    for e, (u, v) in enumerate(g.edges):
        same = np.ones(n, bool) if u == v else (idx // q**u) % q == (idx // q**v) % q
        out |= same.astype(np.int64) << e
    return out


def popcount(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    out = np.zeros(x.shape, dtype=np.int64)
    while np.any(x):
        out += x & 1
        x = x >> 1
    return out


def _normalise(logw: np.ndarray) -> tuple[np.ndarray, float]:
    top = logw.max()
    w = np.exp(logw - top)
    s = w.sum()
    return w / s, float(top + math.log(s))


def potts_log_weights(g: Graph, params: ModelParams, cap: int = DEFAULT_DIST_CAP) -> np.ndarray:
    n = potts_state_count(g, params.q)
    if n > cap:
        raise CapExceededError(f"{n} Potts states exceed cap {cap}")
    return params.beta * energies(g, params.q).astype(float)


def rc_log_weights(g: Graph, params: ModelParams, cap: int = DEFAULT_DIST_CAP) -> np.ndarray:
    n = 1 << g.n_edges
    if n > cap:
        raise CapExceededError(f"{n} RC states exceed cap {cap}")
    masks = np.arange(n, dtype=np.int64)
    return popcount(masks) * _log_odds(params) + component_counts(g, masks) * math.log(params.q)


def exact_distribution(g: Graph, params: ModelParams, space: str = "potts",
                       cap: int = DEFAULT_DIST_CAP) -> np.ndarray:
    """Normalised pi_beta (``space="potts"``) or mu_p (``space="rc"``)."""
    return exact_distribution_with_logz(g, params, space, cap)[0]


def exact_distribution_with_logz(g: Graph, params: ModelParams, space: str = "potts",
                                 cap: int = DEFAULT_DIST_CAP) -> tuple[np.ndarray, float]:
    if space == "potts":
        logw = potts_log_weights(g, params, cap)
    elif space == "rc":
        logw = rc_log_weights(g, params, cap)
    else:
        raise ValueError(f"unknown state space {space!r}")
    return _normalise(logw)


def log_partition(g: Graph, params: ModelParams, space: str = "potts",
                  cap: int = DEFAULT_DIST_CAP) -> float:
    return exact_distribution_with_logz(g, params, space, cap)[1]
