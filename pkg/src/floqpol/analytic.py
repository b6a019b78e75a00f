"""Closed-form references: two-level P_1 estimate, its power-series radius,
and the weak-field sum-over-states polarizability."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import PoleError, ResonanceError
from .model import MolecularModel

POLE_TOL = 1e-14
RESONANCE_TOL = 1e-12


@dataclass(frozen=True)
class TwoLevelParams:
    d12: float
    omega: float
    omega12: float
    amplitude: float

    def __post_init__(self):
        if not self.omega12 > 0:
            raise ValueError(f"omega12 must be > 0, got {self.omega12}")


def two_level_p1(p: TwoLevelParams) -> float:
    """-D12 (w - w12) F / ((w - w12)^2 - D12^2 F^2).

    Kept in exactly this form. Near resonance and at weak field it
    behaves like D12 F / (w12 - w), i.e. it carries one power of D12 fewer
    than the rotating-wave linear response D12^2 F / (w12 - w); treat it as a
    qualitative estimate.
    """
    detuning = p.omega - p.omega12
    den = detuning * detuning - (p.d12 * p.amplitude) ** 2
    if abs(den) <= POLE_TOL:
        radius = convergence_radius(p) if p.d12 != 0 else math.inf
        raise PoleError(
            f"two-level estimate has a pole here: amplitude {p.amplitude!r} equals the "
            f"critical amplitude |w - w12|/D12 = {radius!r}"
        )
    return -p.d12 * detuning * p.amplitude / den


def convergence_radius(p: TwoLevelParams) -> float:
    """|w - w12| / |D12|; math.inf when D12 = 0 (no coupling, no pole)."""
    if p.d12 == 0:
        return math.inf
    return abs((p.omega - p.omega12) / p.d12)


def sos_polarizability(model: MolecularModel, k: int, omega: float) -> float:
    """Linear polarizability of state k (1-based) along the field axis.

    alpha(w) = sum_{s != k} 2 D_ks^2 w_sk / (w_sk^2 - w^2),  w_sk = eps_s - eps_k.
    """
    s_count = model.n_levels
    if not 1 <= k <= s_count:
        raise IndexError(f"state k={k} out of range 1..{s_count}")
    i = k - 1
    total = 0.0
    for s in range(s_count):
        if s == i:
            continue
        w_sk = float(model.energies[s] - model.energies[i])
        if abs(abs(omega) - abs(w_sk)) <= RESONANCE_TOL:
            raise ResonanceError(
                f"omega = {omega!r} is resonant with transition {k} -> {s + 1} "
                f"(|eps_{s + 1} - eps_{k}| = {abs(w_sk)!r})"
            )
        d = float(model.dipole[i, s])
        total += 2.0 * d * d * w_sk / (w_sk * w_sk - omega * omega)
    return total
