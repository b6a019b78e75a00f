"""Direct propagation of the driven few-level Schrodinger equation.

Independent of the Floquet route: integrates i dc/dt = (diag(eps) - F D cos(omega t)) c
with fixed-step classical RK4 from c(0) = e_k, the field switched on at t=0.
The monodromy helpers build Floquet states from one-period propagation,
again without touching the extended-space matrix.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import PropagationError, StepSizeError, StepSizeWarning
from .model import FieldConfig, MolecularModel

STEPS_PER_PERIOD = 200
# default step also keeps |H| dt below this, bounding the RK4 norm drift
MAX_PHASE_PER_STEP = 0.02
_FINITE_CHECK_EVERY = 256


@dataclass(frozen=True, eq=False)
class PropagationResult:
    times: np.ndarray
    amplitudes: np.ndarray  # complex, shape (len(times), S)
    norm_drift: float

    @property
    def real_imag(self) -> np.ndarray:
        """Amplitudes as (len(times), 2S) array of interleaved Re, Im pairs."""
        a = self.amplitudes
        out = np.empty(a.shape[:-1] + (2 * a.shape[-1],))
        out[..., 0::2] = a.real
        out[..., 1::2] = a.imag
        return out


def _rk4(model: MolecularModel, field: FieldConfig, c0: np.ndarray, n_steps: int,
         h: float, record_every: int = 1):
    """Propagate columns of c0 for n_steps of size h; returns recorded (times, states)."""
    # Shifting energies by their mean is an exact global phase but shrinks
    # |H| h, which controls the RK4 norm drift and phase error.
    shift = float(np.mean(model.energies))
    eps = model.energies - shift
    if np.ndim(c0) == 2:
        eps = eps[:, None]
    d = model.dipole
    f, w = field.amplitude, field.omega

    def rhs(t, c):
        return -1j * (eps * c - (f * math.cos(w * t)) * (d @ c))

    c = np.array(c0, dtype=complex)
    n_rec = n_steps // record_every + 1
    states = np.empty((n_rec,) + c.shape, dtype=complex)
    times = np.empty(n_rec)
    states[0] = c
    times[0] = 0.0
    rec = 1
    last_ok = 0.0
    # overflow surfaces as PropagationError below, not as numpy warnings
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(n_steps):
            t = i * h
            k1 = rhs(t, c)
            k2 = rhs(t + 0.5 * h, c + (0.5 * h) * k1)
            k3 = rhs(t + 0.5 * h, c + (0.5 * h) * k2)
            k4 = rhs(t + h, c + h * k3)
            c = c + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if (i + 1) % _FINITE_CHECK_EVERY == 0 or i + 1 == n_steps:
                if not np.all(np.isfinite(c)):
                    raise PropagationError(
                        f"non-finite amplitudes before t = {(i + 1) * h:.6g}", last_ok
                    )
                last_ok = (i + 1) * h
            if (i + 1) % record_every == 0:
                times[rec] = (i + 1) * h
                states[rec] = c
                rec += 1
    times = times[:rec]
    phase = np.exp(-1j * shift * times)
    states = states[:rec] * phase.reshape((-1,) + (1,) * (states.ndim - 1))
    return times, states


def default_step(model: MolecularModel, field: FieldConfig) -> float:
    """min(period/200, 0.02/|H|), |H| bounding the shifted Hamiltonian's spectrum."""
    eps = model.energies - np.mean(model.energies)
    scale = np.max(np.abs(eps)) + field.amplitude * np.linalg.norm(model.dipole, 2)
    dt = field.period / STEPS_PER_PERIOD
    if scale > 0:
        dt = min(dt, MAX_PHASE_PER_STEP / scale)
    return float(dt)


def _check_step(field: FieldConfig, dt: float, allow_coarse: bool) -> None:
    limit = field.period / STEPS_PER_PERIOD
    if dt > limit * (1 + 1e-12):
        msg = f"dt = {dt:.6g} exceeds period/{STEPS_PER_PERIOD} = {limit:.6g}"
        if not allow_coarse:
            raise StepSizeError(msg + " (pass allow_coarse=True to override)")
        warnings.warn(msg, StepSizeWarning, stacklevel=3)


def propagate(model: MolecularModel, field: FieldConfig, k: int, t_end: float,
              dt: float | None = None, allow_coarse: bool = False,
              record_every: int = 1) -> PropagationResult:
    """RK4 propagation from bare state k (1-based) up to t_end.

    The step is ``dt`` rounded down so that t_end is hit exactly (default
    :func:`default_step`). Steps coarser than period/200 raise StepSizeError unless
    ``allow_coarse`` is set, in which case a StepSizeWarning is issued.
    """
    s = model.n_levels
    if not 1 <= k <= s:
        raise IndexError(f"initial state k={k} out of range 1..{s}")
    if not t_end >= 0:
        raise ValueError("t_end must be >= 0")
    if dt is None:
        dt = default_step(model, field)
    if not dt > 0:
        raise ValueError("dt must be > 0")
    _check_step(field, dt, allow_coarse)
    n_steps = max(1, math.ceil(t_end / dt - 1e-9)) if t_end > 0 else 0
    h = t_end / n_steps if n_steps else 0.0
    c0 = np.zeros(s, dtype=complex)
    c0[k - 1] = 1.0
    times, states = _rk4(model, field, c0, n_steps, h, record_every)
    norms = np.sum(np.abs(states) ** 2, axis=1)
    drift = float(np.max(np.abs(norms - 1.0)))
    states.setflags(write=False)
    return PropagationResult(times, states, drift)


def dipole_of(result: PropagationResult, model: MolecularModel) -> np.ndarray:
    """P(t) = Re sum_sr conj(c_s) D_sr c_r at each recorded time."""
    c = result.amplitudes
    return np.real(np.einsum("ts,sr,tr->t", c.conj(), model.dipole, c))


def fourier_of_series(times, values, omega: float, n: int) -> float:
    """Coefficient of cos(n*omega*t) by trapezoidal quadrature over W whole periods."""
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    if t.ndim != 1 or t.shape != y.shape or t.size < 3:
        raise ValueError("times and values must be matching 1-D arrays (>= 3 samples)")
    steps = np.diff(t)
    h = (t[-1] - t[0]) / (t.size - 1)
    if np.max(np.abs(steps - h)) > 1e-9 * max(1.0, abs(h)):
        raise ValueError("time grid is not uniform")
    period = 2.0 * math.pi / omega
    window = t[-1] - t[0]
    w = round(window / period)
    if w < 1 or abs(window - w * period) > 1e-9:
        raise ValueError(
            f"window {window:.12g} is not a whole number of periods {period:.12g}"
        )
    integral = np.trapezoid(y * np.cos(n * omega * t), t)
    return (2.0 - (n == 0)) * integral / (w * period)


def monodromy(model: MolecularModel, field: FieldConfig,
              steps_per_period: int = 2000) -> np.ndarray:
    """One-period propagator U(T) as an S x S complex matrix."""
    h = field.period / steps_per_period
    _, states = _rk4(model, field, np.eye(model.n_levels), steps_per_period, h,
                     record_every=steps_per_period)
    return states[-1]


def floquet_by_monodromy(model: MolecularModel, field: FieldConfig,
                         steps_per_period: int = 2000):
    """Quasi-energies in [-omega/2, omega/2) and t=0 Floquet states from U(T).

    Each eigenvector is rotated to be real (the cosine drive is symmetric
    about t=0), sign fixed so the largest-magnitude entry is positive.

    Returns:
        (quasienergies, states) with states as columns, sorted by quasi-energy.
    """
    u = monodromy(model, field, steps_per_period)
    lam, vec = np.linalg.eig(u)
    period = field.period
    e = -np.angle(lam) / period
    e = (e + 0.5 * field.omega) % field.omega - 0.5 * field.omega
    lead = np.argmax(np.abs(vec), axis=0)
    phases = vec[lead, np.arange(vec.shape[1])]
    vec = vec * (np.abs(phases) / phases)
    vec = vec / np.linalg.norm(vec, axis=0)
    order = np.argsort(e, kind="stable")
    return e[order], vec[:, order]


def periodic_dipole_by_monodromy(model: MolecularModel, field: FieldConfig, k: int,
                                 steps_per_period: int = 2000):
    """Periodic part of P(t) over one period, from monodromy Floquet states.

    sum_j |<phi_j|psi_k>|^2 <phi_j(t)|D|phi_j(t)>, with phi_j the eigenvectors
    of U(T) propagated through one period.

    Returns:
        (times, values) on a uniform grid covering exactly one period.
    """
    _, states = floquet_by_monodromy(model, field, steps_per_period)
    weights = np.abs(states[k - 1, :]) ** 2
    h = field.period / steps_per_period
    times, traj = _rk4(model, field, states, steps_per_period, h)
    per_state = np.real(np.einsum("tsj,sr,trj->tj", traj.conj(), model.dipole, traj))
    return times, per_state @ weights
