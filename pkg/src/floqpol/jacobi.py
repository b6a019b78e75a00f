"""Cyclic Jacobi eigensolver for dense real symmetric matrices.

Rotations are applied in round-robin (tournament) order: every round
annihilates n/2 disjoint off-diagonal pairs at once, so each round is a
handful of vectorized column and row updates. A sweep is n-1 rounds and
visits every pair exactly once.
"""

from __future__ import annotations

import numpy as np

from .errors import AsymmetryError, ConvergenceError

MAX_SWEEPS = 100
OFF_TOL = 1e-12
SYMMETRY_TOL = 1e-12


def round_robin_pairs(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Tournament schedule: n-1 rounds (n rounded up to even) of disjoint (p, q), p < q."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigh(matrix, tol: float = OFF_TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigen-decomposition of a real symmetric matrix.

    Args:
        matrix: square array, symmetric to 1e-12 absolute.
        tol: stop once the off-diagonal Frobenius norm is below
            ``tol * ||matrix||_F``.
        max_sweeps: sweep cap before ConvergenceError.

    Returns:
        (eigenvalues ascending, eigenvectors as columns). Ties in the
        eigenvalues keep their diagonal order, so a diagonal input returns
        coordinate vectors.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    asym = np.max(np.abs(a - a.T)) if a.size else 0.0
    if asym > SYMMETRY_TOL:
        raise AsymmetryError(f"matrix is not symmetric (max asymmetry {asym:.3g})")
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    threshold = tol * scale
    rounds = round_robin_pairs(n)

    sweeps = 0
    while off_norm(a) > threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps: off-diagonal norm "
                f"{off_norm(a):.3g} vs threshold {threshold:.3g} "
                f"(||A||_F = {scale:.3g}, n = {n})"
            )
        for p, q in rounds:
            if p.size == 0:
                continue
            apq = a[p, q]
            app = a[p, p]
            aqq = a[q, q]
            active = apq != 0.0
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                theta = np.where(active, (aqq - app) / (2.0 * apq), 0.0)
                t = np.where(
                    active,
                    np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0)),
                    0.0,
                )
            t = np.where(active & (theta == 0.0), 1.0, t)
            t = np.where(np.isfinite(t), t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            cols_p = a[:, p].copy()
            cols_q = a[:, q]
            a[:, p] = c * cols_p - s * cols_q
            a[:, q] = s * cols_p + c * cols_q
            rows_p = a[p, :].copy()
            rows_q = a[q, :]
            a[p, :] = c[:, None] * rows_p - s[:, None] * rows_q
            a[q, :] = s[:, None] * rows_p + c[:, None] * rows_q
            a[p, q] = 0.0
            a[q, p] = 0.0

            vp = v[:, p].copy()
            vq = v[:, q]
            v[:, p] = c * vp - s * vq
            v[:, q] = s * vp + c * vq
        sweeps += 1

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]
