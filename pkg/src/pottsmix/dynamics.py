"""One-step samplers for heat-bath, Swendsen-Wang and its modified dual variant.

All samplers take the current state, return a new one (inputs are never
mutated) and draw every random number from the passed :class:`RngStream`, so a
seed fixes the whole trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .graph import DualMap, Graph, UnionFind, dual_rc_state, primal_rc_state
from .model import ModelParams
from .rng import RngStream


@dataclass(frozen=True)
class RestrictedContext:
    """Pins vertex ``v`` to color ``k`` (the set Lambda_v^k)."""

    v: int
    k: int

    def check(self, g: Graph, q: int) -> None:
        if not 0 <= self.v < g.n_vertices:
            raise ValueError(f"pinned vertex {self.v} out of range")
        if not 0 <= self.k < q:
            raise ValueError(f"pinned color {self.k} out of range")


@lru_cache(maxsize=64)
def _boltzmann_table(beta: float, n: int) -> tuple[float, ...]:
    return tuple(math.exp(beta * j) for j in range(n + 1))


def heat_bath_step(g: Graph, params: ModelParams, sigma: Sequence[int], rng: RngStream) -> list[int]:
    """Resample the color of one uniformly chosen vertex from its conditional law."""
    q = params.q
    out = list(sigma)
    v = rng.randbelow(g.n_vertices)
    nbrs = g.neighbors[v]
    counts = [0] * q
    for u in nbrs:
        counts[out[u]] += 1
    table = _boltzmann_table(params.beta, len(nbrs))
    weights = [table[c] for c in counts]
    x = rng.random() * sum(weights)
    acc = 0.0
    for color, w in enumerate(weights):
        acc += w
        if x < acc:
            break
    out[v] = color
    return out


def sw_bond_step(g: Graph, params: ModelParams, sigma: Sequence[int], rng: RngStream) -> bytearray:
    """Keep each monochromatic edge independently with probability p."""
    p = params.p
    A = bytearray(g.n_edges)
    if p == 0.0:
        return A
    eu, ev = g.eu, g.ev
    for e in range(g.n_edges):
        if sigma[eu[e]] == sigma[ev[e]] and rng.random() < p:
            A[e] = 1
    return A


def sw_color_step(g: Graph, params: ModelParams, A: Sequence[int], rng: RngStream) -> list[int]:
    """Give each component of (V, A) an independent uniform color.

    Colors are drawn in order of the components' smallest vertex.
    """
    q = params.q
    n = g.n_vertices
    uf = UnionFind(n)
    eu, ev = g.eu, g.ev
    for e, a in enumerate(A):
        if a:
            uf.union(eu[e], ev[e])
    root_color: dict[int, int] = {}
    out = [0] * n
    for v in range(n):
        r = uf.find(v)
        c = root_color.get(r)
        if c is None:
            c = root_color[r] = rng.randbelow(q)
        out[v] = c
    return out


def sw_step(g: Graph, params: ModelParams, sigma: Sequence[int], rng: RngStream) -> list[int]:
    return sw_color_step(g, params, sw_bond_step(g, params, sigma, rng), rng)


def sw_rc_step(g: Graph, params: ModelParams, A: Sequence[int], rng: RngStream) -> bytearray:
    return sw_bond_step(g, params, sw_color_step(g, params, A, rng), rng)


def modified_sw_step(dmap: DualMap, params: ModelParams, sigma: Sequence[int],
                     rng: RngStream) -> list[int]:
    """Primal bond step, one RC-space SW step on the dual at p*, primal coloring."""
    if not 0 < params.p < 1:
        raise ValueError("modified Swendsen-Wang needs p in (0, 1)")
    dual_params = params.dual()
    A = sw_bond_step(dmap.primal, params, sigma, rng)
    B_dual = sw_rc_step(dmap.dual, dual_params, dual_rc_state(A, dmap), rng)
    return sw_color_step(dmap.primal, params, primal_rc_state(B_dual, dmap), rng)


def restricted_hb_step(g: Graph, params: ModelParams, ctx: RestrictedContext,
                       sigma: Sequence[int], rng: RngStream) -> list[int]:
    """Heat-bath-type move on Lambda_v^k (vertex ``ctx.v`` stays at ``ctx.k``).

    Picks ``u != v`` uniformly, proposes a uniformly chosen different color and
    accepts with probability ``min(1, (q-1) * pi(tau) / (pi(sigma) + pi(tau)))``.
    For q = 2 the off-diagonal entries are exactly
    ``(1/(N-1)) * pi(tau) / (pi(sigma) + pi(tau))``.
    """
    q, n = params.q, g.n_vertices
    ctx.check(g, q)
    if sigma[ctx.v] != ctx.k:
        raise ValueError("configuration is not in Lambda_v^k")
    if n < 2:
        raise ValueError("restricted heat bath needs at least two vertices")
    out = list(sigma)
    u = rng.randbelow(n - 1)
    if u >= ctx.v:
        u += 1
    old = out[u]
    new = rng.randbelow(q - 1)
    if new >= old:
        new += 1
    d_energy = 0
    for w in g.neighbors[u]:
        c = out[w]
        d_energy += (c == new) - (c == old)
    # pi(tau)/(pi(sigma)+pi(tau)) = 1/(1+exp(-beta*dE))
    x = -params.beta * d_energy
    accept = 0.0 if x > 700 else (q - 1) / (1.0 + math.exp(x))
    if rng.random() < accept:
        out[u] = new
    return out


SPIN_DYNAMICS = ("hb", "sw", "msw", "rhb")
ALL_DYNAMICS = SPIN_DYNAMICS + ("swrc",)
