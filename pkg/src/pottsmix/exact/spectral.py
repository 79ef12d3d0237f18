"""Spectra of reversible chains via a cyclic Jacobi eigensolver."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainMatrix, ChainMatrixError


class ConvergenceError(RuntimeError):
    pass


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """n-1 rounds of n/2 disjoint pairs covering every pair once (n even)."""
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        half = n // 2
        p = np.array(players[:half])
        q = np.array(players[::-1][:half])
        rounds.append((np.minimum(p, q), np.maximum(p, q)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits all index pairs in round-robin order; the n/2 rotations
    of a round touch disjoint rows and columns and are applied together.
    Iterates until the off-diagonal Frobenius norm is at most ``tol * n``.

    Returns ``(values, vectors)`` with values descending and eigenvectors in
    the columns of ``vectors``.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if n == 0:
        return np.zeros(0), np.zeros((0, 0))
    a = 0.5 * (a + a.T)
    pad = n % 2
    if pad:
        a = np.pad(a, ((0, 1), (0, 1)))
    m = n + pad
    v = np.eye(m)
    rounds = _round_robin(m) if m > 1 else []
    threshold = tol * n

    offdiag = ~np.eye(m, dtype=bool)

    def off_norm() -> float:
        # summed directly: subtracting the diagonal from the full norm cancels badly
        return float(np.sqrt(np.sum(a[offdiag] ** 2)))

    for _ in range(max_sweeps):
        if off_norm() <= threshold:
            break
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            app, aqq = a[p, p], a[q, q]
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                tau = np.where(active, (aqq - app) / (2.0 * np.where(active, apq, 1.0)), 0.0)
                t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t = np.where(active & np.isfinite(t), t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            rp, rq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * rp - s[:, None] * rq
            a[q, :] = s[:, None] * rp + c[:, None] * rq
            cp, cq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = cp * c - cq * s
            a[:, q] = cp * s + cq * c
            vp, vq = v[:, p].copy(), v[:, q].copy()
            v[:, p] = vp * c - vq * s
            v[:, q] = vp * s + vq * c
    else:
        if off_norm() > threshold:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    vals = np.diag(a)[:n]
    vecs = v[:n, :n]
    order = np.argsort(-vals, kind="stable")
    return vals[order], vecs[:, order]


def symmetrized(m: ChainMatrix, tol: float = 1e-10) -> np.ndarray:
    """s(i,j) = sqrt(pi(i)/pi(j)) P(i,j); symmetric iff P is reversible."""
    pi = m.stationary
    if np.any(pi <= 0):
        raise ChainMatrixError(f"{m.label}: stationary distribution must be strictly positive")
    err = m.detailed_balance_error()
    if err > tol:
        raise ChainMatrixError(f"{m.label}: not reversible (detailed-balance error {err:.3g})")
    r = np.sqrt(pi)
    s = r[:, None] * m.entries / r[None, :]
    return 0.5 * (s + s.T)


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray  # descending
    gap: float

    @property
    def xi1(self) -> float:
        return float(self.eigenvalues[1]) if len(self.eigenvalues) > 1 else 0.0

    @property
    def second_largest_modulus(self) -> float:
        """max(xi_1, |xi_min|) = 1 - gap."""
        return 1.0 - self.gap

    def gap_of_square(self) -> float:
        """Gap of P^2, computed from the spectrum of P."""
        return 1.0 - self.second_largest_modulus ** 2


def gap_from_eigenvalues(vals: np.ndarray, tol: float = 1e-10) -> float:
    if abs(vals[0] - 1.0) > tol:
        raise ChainMatrixError(f"leading eigenvalue {vals[0]!r} is not 1")
    if np.any(np.abs(vals) > 1 + tol):
        raise ChainMatrixError("eigenvalue outside [-1, 1]")
    if len(vals) == 1:
        return 1.0
    slem = max(vals[1], abs(vals[-1]))
    return float(min(max(1.0 - slem, 0.0), 1.0))


def spectral_gap(m: ChainMatrix, tol: float = 1e-10) -> SpectrumResult:
    """Eigenvalues and two-sided gap 1 - max(xi_1, |xi_min|)."""
    vals, _ = jacobi_eigh(symmetrized(m, tol))
    return SpectrumResult(vals, gap_from_eigenvalues(vals, tol))


def eigenfunctions(m: ChainMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and right eigenfunctions of P, orthonormal in L2(pi)."""
    vals, vecs = jacobi_eigh(symmetrized(m))
    return vals, vecs / np.sqrt(m.stationary)[:, None]


def dirichlet_form(m: ChainMatrix, f: np.ndarray) -> float:
    """E_P(f) = 1/2 sum_{x,y} (f(x) - f(y))^2 pi(x) P(x, y)."""
    f = np.asarray(f, dtype=float)
    if f.shape != (m.dim,):
        raise ValueError("function has wrong dimension")
    diff = f[:, None] - f[None, :]
    return float(0.5 * np.sum(diff * diff * m.stationary[:, None] * m.entries))


def variance(pi: np.ndarray, f: np.ndarray) -> float:
    f = np.asarray(f, dtype=float)
    mean = float(pi @ f)
    return float(pi @ (f - mean) ** 2)
