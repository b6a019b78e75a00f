"""Superposition coefficients for a sudden switch-on from a stationary state.

At t=0 the wavefunction is psi_k, and each Floquet state is
u_j(0) = sum_s B[s, j] psi_s with B[s, j] = sum_n C[n, s, rep(j)].
The coefficients A solve B A = e_k; with one representative per ladder the
system is square.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularBasisError
from .floquet import FloquetSolution, fold_to_zone

COND_LIMIT = 1e8
PINV_RCOND = 1e-12


@dataclass(frozen=True, eq=False)
class InitialExpansion:
    k: int
    A: np.ndarray
    b_condition: float
    reconstruction_error: float
    degenerate: bool = False


def build_B(solution: FloquetSolution) -> np.ndarray:
    """S x S matrix of representative Floquet states at t=0 over the bare states."""
    return np.sum(solution.rep_coefficients(), axis=0)


def _nearest_degeneracy(solution: FloquetSolution) -> str:
    e = solution.rep_quasienergies()
    best = None
    for i in range(e.size):
        for j in range(i + 1, e.size):
            gap = abs(fold_to_zone(e[j] - e[i], solution.omega))
            if best is None or gap < best[0]:
                best = (gap, i, j)
    if best is None:
        return "no representative pairs"
    gap, i, j = best
    return (f"representatives of states {i + 1} and {j + 1} "
            f"(E = {e[i]:.12g}, {e[j]:.12g}; folded gap {gap:.3g})")


def solve_A(B, k: int, solution: FloquetSolution | None = None) -> InitialExpansion:
    """Solve B A = e_k for initial state k (1-based).

    Falls back to a truncated pseudo-inverse (cutoff 1e-12 of the largest
    singular value) and sets ``degenerate`` when cond(B) > 1e8.
    """
    b = np.asarray(B, dtype=float)
    s = b.shape[0]
    if b.shape != (s, s):
        raise ValueError(f"B must be square, got {b.shape}")
    if not 1 <= k <= s:
        raise IndexError(f"initial state k={k} out of range 1..{s}")
    rhs = np.zeros(s)
    rhs[k - 1] = 1.0
    sv = np.linalg.svd(b, compute_uv=False)
    if not np.all(np.isfinite(sv)) or sv[0] == 0.0:
        where = _nearest_degeneracy(solution) if solution is not None else "unknown"
        raise SingularBasisError(f"B matrix is singular; nearest degeneracy: {where}")
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")
    degenerate = cond > COND_LIMIT
    if degenerate:
        a = np.linalg.pinv(b, rcond=PINV_RCOND) @ rhs
    else:
        a = np.linalg.solve(b, rhs)
    if not np.all(np.isfinite(a)):
        where = _nearest_degeneracy(solution) if solution is not None else "unknown"
        raise SingularBasisError(f"non-finite expansion coefficients; nearest degeneracy: {where}")
    err = float(np.linalg.norm(b @ a - rhs))
    a.setflags(write=False)
    return InitialExpansion(k=k, A=a, b_condition=cond, reconstruction_error=err,
                            degenerate=degenerate)


def expansion_for(solution: FloquetSolution, k: int) -> InitialExpansion:
    return solve_A(build_B(solution), k, solution)
