"""Trajectory statistics: running chains, histograms, TV distance, IAT."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dynamics import (
    RestrictedContext,
    heat_bath_step,
    modified_sw_step,
    restricted_hb_step,
    sw_rc_step,
    sw_step,
)
from .graph import DualMap, Graph, rc_index
from .model import ModelParams, energy, spin_index
from .rng import RngStream

HISTOGRAM_CAP = 1 << 16


@dataclass
class TrajectorySummary:
    dynamics: str
    n_steps: int
    mean_energy: float
    energy_series: list[int] | None = None
    state_histogram: np.ndarray | None = None
    states: list[int] | None = None
    iat: float | None = None
    iat_stderr: float | None = None
    notes: list[str] = field(default_factory=list)


def run_chain(g: Graph, params: ModelParams, dynamics: str, steps: int, burnin: int,
              rng: RngStream, *, initial: Sequence[int] | None = None, dmap: DualMap | None = None,
              ctx: RestrictedContext | None = None, thin: int = 1, record_energy: bool = True,
              record_histogram: bool = False, record_states: bool = False) -> TrajectorySummary:
    """Run ``steps`` steps (the first ``burnin`` discarded) of one dynamics.

    ``dynamics`` is one of ``hb``, ``sw``, ``msw`` (needs ``dmap``), ``rhb``
    (needs ``ctx``) or ``swrc`` (RC space; its "energy" is the number of open
    edges).  Every ``thin``-th post-burnin state is recorded.
    """
    if not steps > burnin >= 0:
        raise ValueError(f"need steps > burnin >= 0, got steps={steps}, burnin={burnin}")
    if thin < 1:
        raise ValueError("thin must be >= 1")
    q = params.q
    if dynamics == "hb":
        step = lambda s: heat_bath_step(g, params, s, rng)  # noqa: E731
    elif dynamics == "sw":
        step = lambda s: sw_step(g, params, s, rng)  # noqa: E731
    elif dynamics == "msw":
        if dmap is None:
            raise ValueError("msw needs a dual map (square lattice or tree)")
        step = lambda s: modified_sw_step(dmap, params, s, rng)  # noqa: E731
    elif dynamics == "rhb":
        if ctx is None:
            raise ValueError("rhb needs a pinned vertex and color")
        step = lambda s: restricted_hb_step(g, params, ctx, s, rng)  # noqa: E731
    elif dynamics == "swrc":
        step = lambda s: sw_rc_step(g, params, s, rng)  # noqa: E731
    else:
        raise ValueError(f"unknown dynamics {dynamics!r}")

    rc = dynamics == "swrc"
    if initial is None:
        state = bytearray(g.n_edges) if rc else [0] * g.n_vertices
        if ctx is not None and not rc:
            state[ctx.v] = ctx.k
    else:
        state = bytearray(initial) if rc else list(initial)
    space = (1 << g.n_edges) if rc else q**g.n_vertices
    index = rc_index if rc else (lambda s: spin_index(s, q))
    measure = (lambda s: sum(s)) if rc else (lambda s: energy(g, s))

    notes = []
    want_index = record_histogram or record_states
    if want_index and space > HISTOGRAM_CAP:
        notes.append(f"state space {space} exceeds histogram cap; state indices not recorded")
        want_index = False
    hist = np.zeros(space, dtype=np.int64) if (record_histogram and want_index) else None
    series, states = [], []
    total = 0
    for t in range(steps):
        state = step(state)
        if t < burnin or (t - burnin) % thin:
            continue
        e = measure(state)
        total += e
        series.append(e)
        if want_index:
            i = index(state)
            if hist is not None:
                hist[i] += 1
            if record_states:
                states.append(i)
    n = len(series)
    summary = TrajectorySummary(dynamics, n, total / n, series if record_energy else None,
                                hist, states if record_states and want_index else None, notes=notes)
    if n >= MIN_IAT_LENGTH:
        summary.iat, summary.iat_stderr, note = integrated_autocorrelation(series)
        if note:
            notes.append(note)
    return summary


def tv_distance(hist: Sequence[float], exact: Sequence[float]) -> float:
    """Total variation distance between a histogram (normalised here) and a distribution."""
    h = np.asarray(hist, dtype=float)
    p = np.asarray(exact, dtype=float)
    if h.shape != p.shape:
        raise ValueError(f"dimension mismatch: {h.shape} vs {p.shape}")
    total = h.sum()
    if total <= 0:
        raise ValueError("empty histogram")
    return float(0.5 * np.abs(h / total - p).sum())


MIN_IAT_LENGTH = 1000
IAT_WINDOW_FACTOR = 6.0


def autocorrelation(series: Sequence[float]) -> np.ndarray:
    """Normalised autocorrelation function rho(t), via FFT."""
    x = np.asarray(series, dtype=float)
    x = x - x.mean()
    n = x.size
    f = np.fft.rfft(x, n=2 * n)
    acov = np.fft.irfft(f * np.conj(f))[:n] / n
    if acov[0] == 0:
        return np.zeros(n)
    return acov / acov[0]


def integrated_autocorrelation(series: Sequence[float], c: float = IAT_WINDOW_FACTOR
                               ) -> tuple[float, float, str | None]:
    """Self-consistent windowed estimate tau = 1/2 + sum_{t=1}^{W} rho(t).

    W is the first window with W >= c * tau(W).  Returns ``(tau, stderr,
    note)``; estimates below 1/2 (anticorrelated series) are floored at 1/2
    and noted.  A constant series has tau = 1/2 by convention.
    """
    x = np.asarray(series, dtype=float)
    n = x.size
    if n < MIN_IAT_LENGTH:
        raise ValueError(f"series too short for IAT ({n} < {MIN_IAT_LENGTH})")
    if np.all(x == x[0]):
        return 0.5, 0.0, "constant series"
    rho = autocorrelation(x)
    tau = 0.5 + np.cumsum(rho[1:])
    window = np.arange(1, n)
    ok = window >= c * tau
    w = int(window[np.argmax(ok)]) if ok.any() else n - 1
    est = float(tau[w - 1])
    stderr = est * math.sqrt(2.0 * (2 * w + 1) / n)
    note = None
    if est < 0.5:
        note = f"antithetic series (raw tau={est:.4g}); reported at the 0.5 floor"
        est = 0.5
        stderr = 0.5 * math.sqrt(2.0 * (2 * w + 1) / n)
    return est, stderr, note


def mean_standard_error(series: Sequence[float], iat: float) -> float:
    x = np.asarray(series, dtype=float)
    return float(math.sqrt(2 * iat * x.var() / x.size))
