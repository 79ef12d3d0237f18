"""Exact transition matrices of every chain, by full state enumeration.

Spin states are indexed base-q (vertex 0 least significant), RC states by
their edge bitmask.  Each builder refuses state spaces larger than ``cap``.
"""

from __future__ import annotations

import numpy as np

from ..dynamics import RestrictedContext
from ..graph import DualMap, Graph, component_counts, dual_index_map
from ..model import (
    CapExceededError,
    ModelParams,
    exact_distribution,
    mono_masks,
    popcount,
    potts_log_weights,
)
from .chain import ChainMatrix, RowSumExceededError

DEFAULT_CAP = 4096


def _check_cap(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise CapExceededError(f"{what}: {n} states exceed cap {cap}")


def _subset_table(g: Graph, q: int, cap: int) -> tuple[np.ndarray, np.ndarray]:
    n_spin, n_rc = q ** g.n_vertices, 1 << g.n_edges
    _check_cap(n_spin, cap, "spin space")
    _check_cap(n_rc, cap, "RC space")
    mono = mono_masks(g, q)
    rc = np.arange(n_rc, dtype=np.int64)
    allowed = (rc[None, :] & ~mono[:, None]) == 0  # A subset of E(sigma)
    return mono, allowed


def build_T_matrix(g: Graph, params: ModelParams, cap: int = DEFAULT_CAP) -> np.ndarray:
    """T(sigma, A) = p^|A| (1-p)^(|E(sigma)|-|A|) 1(A subset of E(sigma))."""
    mono, allowed = _subset_table(g, params.q, cap)
    size_a = popcount(np.arange(1 << g.n_edges))
    size_e = popcount(mono)
    p = params.p
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.power(p, size_a)[None, :] * np.power(1.0 - p, np.maximum(size_e[:, None] - size_a[None, :], 0))
    return np.where(allowed, w, 0.0)


def build_Tstar_matrix(g: Graph, params: ModelParams, cap: int = DEFAULT_CAP) -> np.ndarray:
    """T*(A, sigma) = q^-C(A) 1(sigma constant on the components of A)."""
    _, allowed = _subset_table(g, params.q, cap)
    comps = component_counts(g, np.arange(1 << g.n_edges))
    return allowed.T * np.power(float(params.q), -comps)[:, None]


def spin_stationary(g: Graph, params: ModelParams) -> np.ndarray:
    return exact_distribution(g, params, "potts")


def build_hb_matrix(g: Graph, params: ModelParams, cap: int = DEFAULT_CAP) -> ChainMatrix:
    q, N = params.q, g.n_vertices
    n = q**N
    _check_cap(n, cap, "spin space")
    logw = potts_log_weights(g, params)
    P = np.zeros((n, n))
    idx = np.arange(n, dtype=np.int64)
    colors = np.arange(q, dtype=np.int64)
    for v in range(N):
        base = idx - ((idx // q**v) % q) * q**v
        targets = base[:, None] + colors[None, :] * q**v
        lw = logw[targets]
        w = np.exp(lw - lw.max(axis=1, keepdims=True))
        P[idx[:, None], targets] += w / w.sum(axis=1, keepdims=True) / N
    return ChainMatrix(P, spin_stationary(g, params), "P_HB").validate()


def build_sw_matrix(g: Graph, params: ModelParams, cap: int = DEFAULT_CAP) -> ChainMatrix:
    """P = T T* on spin space."""
    P = build_T_matrix(g, params, cap) @ build_Tstar_matrix(g, params, cap)
    return ChainMatrix(P, spin_stationary(g, params), "P_SW").validate()


def build_sw_rc_matrix(g: Graph, params: ModelParams, cap: int = DEFAULT_CAP) -> ChainMatrix:
    """P~ = T* T on RC space."""
    P = build_Tstar_matrix(g, params, cap) @ build_T_matrix(g, params, cap)
    return ChainMatrix(P, exact_distribution(g, params, "rc"), "P_SW_RC").validate()


def build_dual_matrix(dmap: DualMap) -> np.ndarray:
    """D(A, B) = 1(B = A_D), a permutation matrix."""
    d = dual_index_map(dmap)
    D = np.zeros((d.size, d.size))
    D[np.arange(d.size), d] = 1.0
    return D


def build_modified_sw_matrix(dmap: DualMap, params: ModelParams, cap: int = DEFAULT_CAP) -> ChainMatrix:
    """M = T_G D T*_{G_D,p*} T_{G_D,p*} D* T*_G."""
    if not 0 < params.p < 1:
        raise ValueError("modified Swendsen-Wang needs p in (0, 1)")
    g, gd, dual_params = dmap.primal, dmap.dual, params.dual()
    d = dual_index_map(dmap)
    dinv = np.empty_like(d)
    dinv[d] = np.arange(d.size)
    TD = build_T_matrix(g, params, cap)[:, dinv]        # T_G D
    DTs = build_Tstar_matrix(g, params, cap)[dinv, :]   # D* T*_G
    left = TD @ build_Tstar_matrix(gd, dual_params, cap)
    right = build_T_matrix(gd, dual_params, cap) @ DTs
    return ChainMatrix(left @ right, spin_stationary(g, params), "M").validate()


def build_Q_matrix(g: Graph, params: ModelParams, cap: int = DEFAULT_CAP) -> ChainMatrix:
    """Q = P_HB P P_HB."""
    hb = build_hb_matrix(g, params, cap).entries
    P = build_sw_matrix(g, params, cap).entries
    return ChainMatrix(hb @ P @ hb, spin_stationary(g, params), "Q").validate()


# ----------------------------------------------------------------------------
# pinned-vertex chains


def pinned_states(g: Graph, q: int, ctx: RestrictedContext) -> np.ndarray:
    """Global indices of Lambda_v^k, ascending."""
    idx = np.arange(q**g.n_vertices, dtype=np.int64)
    return idx[(idx // q**ctx.v) % q == ctx.k]


def build_restricted_hb_matrix(g: Graph, params: ModelParams, ctx: RestrictedContext,
                               cap: int = DEFAULT_CAP) -> ChainMatrix:
    """Off-diagonal entries (1/(N-1)) (1 + pi(sigma)/pi(tau))^-1 for single-site
    changes away from the pinned vertex; the diagonal takes the remainder.

    Raises :class:`RowSumExceededError` if some row's off-diagonal mass exceeds
    one (possible for q > 2); the row is never renormalised.
    """
    q, N = params.q, g.n_vertices
    ctx.check(g, q)
    if N < 2:
        raise ValueError("restricted heat bath needs at least two vertices")
    _check_cap(q**N, cap, "spin space")
    logw = potts_log_weights(g, params)
    states = pinned_states(g, q, ctx)
    pos = np.full(q**N, -1, dtype=np.int64)
    pos[states] = np.arange(states.size)
    n = states.size
    P = np.zeros((n, n))
    rows = np.arange(n)
    for u in range(N):
        if u == ctx.v:
            continue
        digit = (states // q**u) % q
        for shift in range(1, q):
            target = states + (((digit + shift) % q) - digit) * q**u
            # pi(tau) / (pi(sigma) + pi(tau))
            ratio = 1.0 / (1.0 + np.exp(logw[states] - logw[target]))
            P[rows, pos[target]] += ratio / (N - 1)
    off = P.sum(axis=1)
    worst = int(np.argmax(off))
    if off[worst] > 1.0 + 1e-12:
        raise RowSumExceededError(
            f"restricted heat bath row for state {int(states[worst])} has off-diagonal mass "
            f"{off[worst]:.6g} > 1 (q={q}, beta={params.beta})")
    P[rows, rows] = np.maximum(1.0 - off, 0.0)
    pi = np.exp(logw[states] - logw[states].max())
    label = f"P_Lambda(v={ctx.v},k={ctx.k})"
    return ChainMatrix(P, pi / pi.sum(), label, states).validate()


def shift_colors(idx: np.ndarray, n_vertices: int, q: int, shift: np.ndarray | int) -> np.ndarray:
    """Index of sigma + shift (every color moved by ``shift`` mod q)."""
    idx = np.asarray(idx, dtype=np.int64)
    shift = np.asarray(shift, dtype=np.int64)
    out = np.zeros(np.broadcast(idx, shift).shape, dtype=np.int64)
    for v in range(n_vertices):
        out += ((idx // q**v) % q + shift) % q * q**v
    return out


def build_flip_matrices(g: Graph, q: int, ctx: RestrictedContext) -> tuple[np.ndarray, np.ndarray]:
    """F1 (Omega -> Lambda): shift colors so that v gets color k.
    F2 (Lambda -> Omega): average over the q global color shifts."""
    N = g.n_vertices
    n = q**N
    states = pinned_states(g, q, ctx)
    pos = np.full(n, -1, dtype=np.int64)
    pos[states] = np.arange(states.size)
    idx = np.arange(n, dtype=np.int64)
    to_k = shift_colors(idx, N, q, (ctx.k - (idx // q**ctx.v) % q) % q)
    F1 = np.zeros((n, states.size))
    F1[idx, pos[to_k]] = 1.0
    F2 = np.zeros((states.size, n))
    for l in range(q):
        F2[np.arange(states.size), shift_colors(states, N, q, l)] += 1.0 / q
    return F1, F2


def build_Qtilde_matrix(g: Graph, params: ModelParams, ctx: RestrictedContext,
                        cap: int = DEFAULT_CAP) -> ChainMatrix:
    """Q~ = F1 P_Lambda F2 P F1 P_Lambda F2."""
    F1, F2 = build_flip_matrices(g, params.q, ctx)
    PL = build_restricted_hb_matrix(g, params, ctx, cap).entries
    P = build_sw_matrix(g, params, cap).entries
    R = F1 @ PL @ F2
    return ChainMatrix(R @ P @ R, spin_stationary(g, params), "Q~").validate()
