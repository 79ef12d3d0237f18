"""Instance-level checks of the comparison inequalities.

Every check returns report rows ``{check, instance, params, lhs, rhs, slack,
tol, pass}`` with ``slack = rhs - lhs`` arranged so that the inequality holds
iff ``slack >= -tol``.  Nothing here raises on a violated inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..dynamics import RestrictedContext
from ..graph import DualMap, Graph, dual_index_map, max_degree
from ..model import ModelParams, exact_distribution
from .matrices import (
    DEFAULT_CAP,
    build_hb_matrix,
    build_modified_sw_matrix,
    build_Q_matrix,
    build_Qtilde_matrix,
    build_restricted_hb_matrix,
    build_sw_matrix,
    build_sw_rc_matrix,
    pinned_states,
)
from .spectral import spectral_gap

GAP_TOL = 1e-10
ENTRY_TOL = 1e-12


@dataclass(frozen=True)
class ComparisonConstants:
    c1: float
    c2: float
    c3: float
    c_sw: float
    c_sw_tilde: float | None = None

    @classmethod
    def compute(cls, params: ModelParams, delta: int, delta_tilde: int | None = None) -> "ComparisonConstants":
        q, b = params.q, params.beta
        c1 = math.exp(-b)
        c2 = 1.0 + q * math.expm1(b)
        c3 = q * math.exp(2 * b) - (q - 1) * math.exp(b)
        base = q * math.exp(2 * b)
        c_sw = base ** (-4 * delta) / (2 * q * q)
        c_sw_tilde = None if delta_tilde is None else base ** (-4 * delta_tilde) / (2 * q * q)
        return cls(c1, c2, c3, c_sw, c_sw_tilde)


def _params_dict(params: ModelParams, **extra) -> dict:
    d = {"q": params.q, "beta": params.beta, "p": params.p}
    d.update(extra)
    return d


def _row(check: str, instance: str, params: dict, lhs: float, rhs: float,
         tol: float = GAP_TOL, **extra) -> dict:
    slack = float(rhs) - float(lhs)
    row = {"check": check, "instance": instance, "params": params, "lhs": float(lhs),
           "rhs": float(rhs), "slack": slack, "tol": tol, "pass": bool(slack >= -tol)}
    row.update(extra)
    return row


# ----------------------------------------------------------------------------
# spanning subgraphs


def verify_lemma_spanning(g: Graph, E0, params: ModelParams, cap: int = DEFAULT_CAP) -> list[dict]:
    """c1^k P_{G0} <= P_G <= c2^k P_{G0} entrywise, k = |E \\ E0|."""
    E0 = sorted(set(E0))
    k = g.n_edges - len(E0)
    g0 = g.subgraph(E0)
    PG = build_sw_matrix(g, params, cap).entries
    P0 = build_sw_matrix(g0, params, cap).entries
    const = ComparisonConstants.compute(params, max_degree(g))
    lo, hi = const.c1**k * P0, const.c2**k * P0
    name = f"{g.name}/E0={E0}"
    pd = _params_dict(params, removed_edges=k)
    low_gap = PG - lo
    high_gap = hi - PG
    i = np.unravel_index(np.argmin(low_gap), PG.shape)
    j = np.unravel_index(np.argmin(high_gap), PG.shape)
    return [
        _row("lemma3_lower", name, pd, lo[i], PG[i], ENTRY_TOL,
             violations=int(np.sum(low_gap < -ENTRY_TOL))),
        _row("lemma3_upper", name, pd, PG[j], hi[j], ENTRY_TOL,
             violations=int(np.sum(high_gap < -ENTRY_TOL))),
    ]


def spanning_subsets(g: Graph, count: int | None, rng) -> list[list[int]]:
    """All edge subsets if ``count`` is None, else ``count`` random ones."""
    m = g.n_edges
    if count is None:
        return [list(c) for r in range(m + 1) for c in combinations(range(m), r)]
    return [[e for e in range(m) if rng.random() < 0.5] for _ in range(count)]


# ----------------------------------------------------------------------------
# single-vertex recoloring


def verify_lemma_vertex(g: Graph, params: ModelParams, v: int | None = None, k: int | None = None,
                        l: int | None = None, cap: int = DEFAULT_CAP, P=None) -> list[dict]:
    """P(sigma^{v,k}, tau^{v,l}) <= c3^deg(v) P(sigma, tau) for all sigma, tau."""
    q, N = params.q, g.n_vertices
    if P is None:
        P = build_sw_matrix(g, params, cap).entries
    c3 = ComparisonConstants.compute(params, max_degree(g)).c3
    idx = np.arange(q**N, dtype=np.int64)
    rows = []
    for vv in range(N) if v is None else [v]:
        bound = c3 ** g.degree(vv)
        digit = (idx // q**vv) % q
        base = idx - digit * q**vv
        worst_excess, worst_ratio, violations = -np.inf, 0.0, 0
        for kk in range(q) if k is None else [k]:
            for ll in range(q) if l is None else [l]:
                lhs = P[np.ix_(base + kk * q**vv, base + ll * q**vv)]
                rhs = bound * P
                excess = lhs - rhs
                worst_excess = max(worst_excess, float(excess.max()))
                worst_ratio = max(worst_ratio, float(np.max(lhs / P)))
                violations += int(np.sum(excess > ENTRY_TOL))
        rows.append(_row("lemma4", f"{g.name}/v={vv}", _params_dict(params, degree=g.degree(vv)),
                         worst_ratio, bound, ENTRY_TOL * bound, violations=violations,
                         max_excess=worst_excess))
    return rows


# ----------------------------------------------------------------------------
# SW vs heat bath


def hamming_neighbors(n_vertices: int, q: int) -> np.ndarray:
    """For each spin state the indices of itself and all single-site recolorings."""
    idx = np.arange(q**n_vertices, dtype=np.int64)
    cols = [idx]
    for v in range(n_vertices):
        digit = (idx // q**v) % q
        for s in range(1, q):
            cols.append(idx + (((digit + s) % q) - digit) * q**v)
    return np.stack(cols, axis=1)


def adjacent_ratio_constant(P: np.ndarray, nbrs: np.ndarray) -> tuple[float, bool]:
    """max P(s1,t1)/P(s2,t2) over s1~s2, t1~t2, with ``nbrs[s]`` listing the
    states adjacent to ``s`` (itself included).

    Quadruples with P(s2,t2) = 0 are skipped; the flag reports whether such a
    quadruple had a positive numerator.
    """
    # min over s2 ~ s1, then over t2 ~ t1
    zmin = P[nbrs].min(axis=1)[:, nbrs].min(axis=2)
    Pm = np.where(P > 0, P, np.inf)
    denom = Pm[nbrs].min(axis=1)[:, nbrs].min(axis=2)
    ratio = np.where(np.isfinite(denom), P / denom, 0.0)
    bad = bool(np.any((P > 0) & (zmin == 0)))
    return float(ratio.max()), bad


def restrict_neighbors(nbrs: np.ndarray, states: np.ndarray) -> np.ndarray:
    """Neighbour table of a sub-state-space, in local positions."""
    pos = np.full(nbrs.shape[0], -1, dtype=np.int64)
    pos[states] = np.arange(states.size)
    local = pos[nbrs[states]]
    self_pos = np.arange(states.size)[:, None]
    return np.where(local >= 0, local, self_pos)


def verify_theorem_main(g: Graph, params: ModelParams, cap: int = DEFAULT_CAP,
                        with_rc: bool = True) -> list[dict]:
    """Gap comparison lambda(P) >= c_SW lambda(P_HB) and the steps of its proof."""
    q = params.q
    delta = max_degree(g)
    const = ComparisonConstants.compute(params, delta)
    P = build_sw_matrix(g, params, cap)
    HB = build_hb_matrix(g, params, cap)
    Q = build_Q_matrix(g, params, cap)
    sp, shb, sq = spectral_gap(P), spectral_gap(HB), spectral_gap(Q)
    lp, lhb, lq = sp.gap, shb.gap, sq.gap
    lhb2, lp2 = shb.gap_of_square(), sp.gap_of_square()
    c, zero_denominator = adjacent_ratio_constant(P.entries, hamming_neighbors(g.n_vertices, q))
    pd = _params_dict(params, delta=delta, c_sw=const.c_sw)
    name = g.name
    rows = [
        _row("thm1", name, pd, const.c_sw * lhb, lp, gap_P=lp, gap_HB=lhb),
        _row("lemma2_Q", name, pd, lhb2, lq),
        _row("lemma2_HB", name, pd, lhb, lhb2),
        _row("gap_square_lower", name, pd, lp, lp2),
        _row("gap_square_upper", name, pd, lp2, 2 * lp),
        _row("Q_entrywise", name, dict(pd, c=c), float(np.max(Q.entries - q * c * P.entries)), 0.0,
             ENTRY_TOL),
        _row("c_bound", name, dict(pd, c=c), c, const.c3 ** (2 * delta), 1e-12 * const.c3 ** (2 * delta),
             zero_denominator_with_positive_numerator=zero_denominator),
        _row("thm1_via_c", name, dict(pd, c=c), lq / (2 * q * q * c * c), lp),
    ]
    if with_rc and params.p > 0:
        rows.append(verify_gap_equality(g, params, cap, gap_P=lp))
    return rows


def verify_gap_equality(g: Graph, params: ModelParams, cap: int = DEFAULT_CAP,
                        gap_P: float | None = None) -> dict:
    """Spin-space and RC-space SW chains have the same gap."""
    if gap_P is None:
        gap_P = spectral_gap(build_sw_matrix(g, params, cap)).gap
    gap_rc = spectral_gap(build_sw_rc_matrix(g, params, cap)).gap
    diff = abs(gap_P - gap_rc)
    return _row("gap_equality", g.name, _params_dict(params), diff, 0.0, GAP_TOL,
                gap_P=gap_P, gap_P_rc=gap_rc)


def verify_theorem_main_prime(g: Graph, params: ModelParams, ctx: RestrictedContext,
                              cap: int = DEFAULT_CAP) -> list[dict]:
    """lambda(P) >= c~_SW lambda(P_Lambda^2) with Delta~ excluding the pinned vertex."""
    q = params.q
    dt = max_degree(g, exclude=ctx.v)
    const = ComparisonConstants.compute(params, max_degree(g), dt)
    P = build_sw_matrix(g, params, cap)
    PL = build_restricted_hb_matrix(g, params, ctx, cap)
    Qt = build_Qtilde_matrix(g, params, ctx, cap)
    lp = spectral_gap(P).gap
    lpl2 = spectral_gap(PL).gap_of_square()
    lqt = spectral_gap(Qt).gap
    sub = pinned_states(g, q, ctx)
    c_t, _ = adjacent_ratio_constant(P.entries[np.ix_(sub, sub)],
                                     restrict_neighbors(hamming_neighbors(g.n_vertices, q), sub))
    pd = _params_dict(params, pin=[ctx.v, ctx.k], delta_tilde=dt, c_sw_tilde=const.c_sw_tilde)
    name = f"{g.name}/pin={ctx.v},{ctx.k}"
    return [
        _row("thm1p", name, pd, const.c_sw_tilde * lpl2, lp, gap_P=lp, gap_PLambda_sq=lpl2),
        _row("thm1p_Qtilde_norm", name, pd, lpl2, lqt),
        _row("thm1p_via_Qtilde", name, pd, const.c_sw_tilde * lqt, lp),
        _row("thm1p_c_bound", name, dict(pd, c_tilde=c_t), c_t, const.c3 ** (2 * dt),
             1e-12 * const.c3 ** (2 * dt)),
    ]


# ----------------------------------------------------------------------------
# modified SW and duality


def verify_prop_modified(dmap: DualMap, params: ModelParams, cap: int = DEFAULT_CAP) -> list[dict]:
    """lambda(M) >= max(lambda(P_G at beta), lambda(P_{G_D} at beta*))."""
    lm = spectral_gap(build_modified_sw_matrix(dmap, params, cap)).gap
    lg = spectral_gap(build_sw_matrix(dmap.primal, params, cap)).gap
    dual_params = params.dual()
    ld = spectral_gap(build_sw_matrix(dmap.dual, dual_params, cap)).gap
    pd = _params_dict(params, p_star=params.p_star, beta_star=params.beta_star)
    name = dmap.primal.name
    return [
        _row("prop5", name, pd, max(lg, ld), lm, gap_M=lm, gap_G=lg, gap_GD=ld),
        _row("prop5_product", name, pd, 1 - lm, (1 - lg) * (1 - ld)),
    ]


def verify_tree_gap(dmap: DualMap, params: ModelParams, cap: int = DEFAULT_CAP) -> dict:
    """Modified SW on a tree samples exactly in one step: gap 1."""
    lm = spectral_gap(build_modified_sw_matrix(dmap, params, cap)).gap
    return _row("tree_gap", dmap.primal.name, _params_dict(params), abs(1 - lm), 0.0, GAP_TOL, gap_M=lm)


def verify_duality(dmap: DualMap, params: ModelParams, cap: int = 1 << 20) -> dict:
    """max_A |mu_p(A) - mu*_{p*}(A_D)|."""
    mu = exact_distribution(dmap.primal, params, "rc", cap)
    mu_star = exact_distribution(dmap.dual, params.dual(), "rc", cap)
    diff = float(np.max(np.abs(mu - mu_star[dual_index_map(dmap)])))
    return _row("duality", dmap.primal.name, _params_dict(params, p_star=params.p_star),
                diff, 0.0, ENTRY_TOL, states=int(mu.size))


def pinned_conditional(g: Graph, params: ModelParams, ctx: RestrictedContext) -> np.ndarray:
    """pi(. | Lambda_v^k) restricted to Lambda_v^k."""
    pi = exact_distribution(g, params)
    sub = pi[pinned_states(g, params.q, ctx)]
    return sub / sub.sum()


__all__ = [
    "ComparisonConstants",
    "adjacent_ratio_constant",
    "hamming_neighbors",
    "pinned_conditional",
    "restrict_neighbors",
    "spanning_subsets",
    "verify_duality",
    "verify_gap_equality",
    "verify_lemma_spanning",
    "verify_lemma_vertex",
    "verify_prop_modified",
    "verify_theorem_main",
    "verify_theorem_main_prime",
    "verify_tree_gap",
]
