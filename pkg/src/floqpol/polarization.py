"""Induced dipole P(t), its periodic part and Fourier components.

With Psi(t) = sum_j A_j exp(-i E_j t) u_j(t) and real coefficients,

    P(t) = sum_{ij} A_i A_j sum_p g_ij(p) cos((E_i - E_j + p*omega) t),
    g_ij(p) = sum_m sum_{sr} C[m, s, i] D[s, r] C[m + p, r, j],

where i, j run over the ladder representatives. The diagonal (i = j) terms
form the periodic part sum_n P_n cos(n*omega*t) with

    P_n = (2 - delta_n0) sum_j A_j^2 g_jj(n);

the i != j terms beat at the quasi-energy differences and are kept apart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .floquet import FloquetSolution
from .initcond import InitialExpansion
from .model import MolecularModel

BEAT_WEIGHT_MIN = 1e-10


@dataclass(frozen=True)
class BeatTerm:
    i: int
    j: int
    frequency: float
    weight: float


@dataclass(frozen=True, eq=False)
class PolarizationResult:
    fourier: dict[int, float]
    chi: float | None
    beat_frequencies: list[BeatTerm]
    time_series: np.ndarray | None = None
    times: np.ndarray | None = None


def pair_harmonics(solution: FloquetSolution, model: MolecularModel) -> np.ndarray:
    """g[i, j, p + 2N]: dipole coupling of representatives i, j at photon shift p."""
    r = solution.rep_coefficients()
    blocks = r.shape[0]
    dr = np.einsum("sr,nrj->nsj", model.dipole, r)
    gmat = np.einsum("msi,nsj->ijmn", r, dr)
    g = np.zeros(gmat.shape[:2] + (2 * blocks - 1,))
    for p in range(-(blocks - 1), blocks):
        g[:, :, p + blocks - 1] = np.trace(gmat, offset=p, axis1=2, axis2=3)
    return g


def state_fourier(solution: FloquetSolution, model: MolecularModel,
                  n_report: int | None = None) -> np.ndarray:
    """Array (S, n_report + 1): cos(n*omega*t) coefficients of <u_j|D|u_j> per representative."""
    if n_report is None:
        n_report = 2 * solution.n_max
    g = pair_harmonics(solution, model)
    centre = g.shape[2] // 2
    idx = np.arange(solution.n_levels)
    out = np.zeros((solution.n_levels, n_report + 1))
    top = min(n_report, centre)
    out[:, :top + 1] = g[idx, idx, centre:centre + top + 1]
    out[:, 1:] *= 2.0
    return out


def fourier_components(solution: FloquetSolution, init: InitialExpansion,
                       model: MolecularModel, n_report: int | None = None) -> dict[int, float]:
    """P_n for n = 0..n_report (default 2N, the full support of the truncation)."""
    if n_report is None:
        n_report = 2 * solution.n_max
    if n_report < 0:
        raise ValueError("n_report must be >= 0")
    per_state = state_fourier(solution, model, n_report)
    weights = np.asarray(init.A) ** 2
    p = weights @ per_state
    return {n: float(p[n]) for n in range(n_report + 1)}


def periodic_part(solution: FloquetSolution, init: InitialExpansion,
                  model: MolecularModel, t) -> float | np.ndarray:
    """sum_n P_n cos(n*omega*t); scalar or array like ``t``."""
    comps = fourier_components(solution, init, model)
    n = np.arange(len(comps))
    p = np.array([comps[i] for i in n])
    t_arr = np.asarray(t, dtype=float)
    val = np.cos(np.multiply.outer(t_arr, n * solution.omega)) @ p
    return float(val) if np.ndim(t) == 0 else val


def polarization_time_series(solution: FloquetSolution, init: InitialExpansion,
                             model: MolecularModel, t_grid) -> np.ndarray:
    """Full P(t), beat terms included, on the given times."""
    t = np.asarray(t_grid, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError("time grid contains non-finite values")
    g = pair_harmonics(solution, model)
    a = np.asarray(init.A)
    e = solution.rep_quasienergies()
    half = g.shape[2] // 2
    shifts = np.arange(-half, half + 1) * solution.omega
    freqs = (e[:, None, None] - e[None, :, None]) + shifts[None, None, :]
    amps = (a[:, None, None] * a[None, :, None]) * g
    keep = amps != 0.0
    freqs, amps = freqs[keep], amps[keep]
    out = np.zeros(t.shape)
    flat = t.reshape(-1)
    res = out.reshape(-1)
    # chunked to bound memory for long windows
    for start in range(0, flat.size, 4096):
        chunk = flat[start:start + 4096]
        res[start:start + 4096] = np.cos(np.multiply.outer(chunk, freqs)) @ amps
    return out


def beat_terms(solution: FloquetSolution, init: InitialExpansion) -> list[BeatTerm]:
    """Representative pairs i < j with |A_i A_j| > 1e-10 (aperiodic content)."""
    a = np.asarray(init.A)
    e = solution.rep_quasienergies()
    out = []
    for i in range(a.size):
        for j in range(i + 1, a.size):
            w = float(a[i] * a[j])
            if abs(w) > BEAT_WEIGHT_MIN:
                out.append(BeatTerm(i, j, float(e[j] - e[i]), w))
    return out


def susceptibility(p1: float, amplitude: float) -> float | None:
    """P_1 / F, or None at zero field where the ratio is undefined."""
    if amplitude < 0:
        raise ValueError(f"amplitude must be >= 0, got {amplitude}")
    if amplitude == 0:
        return None
    return p1 / amplitude


def polarization(solution: FloquetSolution, init: InitialExpansion, model: MolecularModel,
                 amplitude: float, n_report: int | None = None,
                 t_grid=None) -> PolarizationResult:
    comps = fourier_components(solution, init, model, n_report)
    chi = susceptibility(comps.get(1, 0.0), amplitude)
    series = times = None
    if t_grid is not None:
        times = np.asarray(t_grid, dtype=float)
        series = polarization_time_series(solution, init, model, times)
    return PolarizationResult(comps, chi, beat_terms(solution, init), series, times)
