"""Amplitude and frequency sweeps of the full solve -> expand -> polarize pipeline,
plus the weak-field power-series fit of P_1(F)."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analytic import sos_polarizability
from .errors import FitError, FloqpolError, ScanSpecError
from .floquet import fold_to_zone, solve_floquet
from .initcond import expansion_for
from .model import FieldConfig, MolecularModel, TruncationConfig
from .polarization import fourier_components, susceptibility

OBSERVABLES = ("P", "chi", "quasienergies")
FIT_COND_LIMIT = 1e10


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("FLOQPOL_WORKERS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True, eq=False)
class ScanSpec:
    """One-dimensional sweep over field amplitude or frequency.

    ``fixed`` is the frequency for an amplitude scan and the amplitude for a
    frequency scan.
    """

    variable: str
    start: float
    stop: float
    points: int
    fixed: float
    model: MolecularModel
    k: int = 1
    spacing: str = "linear"
    truncation: TruncationConfig = field(default_factory=TruncationConfig)
    observables: tuple[str, ...] = OBSERVABLES
    n_report: int = 3
    method: str = "auto"

    def __post_init__(self):
        if self.variable not in ("amplitude", "frequency"):
            raise ScanSpecError(f"variable must be 'amplitude' or 'frequency', got {self.variable!r}")
        if self.spacing not in ("linear", "log"):
            raise ScanSpecError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")
        if not self.start < self.stop:
            raise ScanSpecError(f"start ({self.start}) must be < stop ({self.stop})")
        if int(self.points) != self.points or self.points < 2:
            raise ScanSpecError(f"points must be an integer >= 2, got {self.points}")
        if self.spacing == "log" and not self.start > 0:
            raise ScanSpecError("log spacing requires start > 0")
        if self.variable == "amplitude" and self.start < 0:
            raise ScanSpecError("amplitude scan cannot include negative amplitudes")
        if self.variable == "frequency" and not self.start > 0:
            raise ScanSpecError("frequency scan requires start > 0")
        bad = set(self.observables) - set(OBSERVABLES)
        if bad:
            raise ScanSpecError(f"unknown observables {sorted(bad)}; choose from {OBSERVABLES}")
        if not 1 <= self.k <= self.model.n_levels:
            raise ScanSpecError(f"k={self.k} out of range 1..{self.model.n_levels}")
        if self.n_report < 1:
            raise ScanSpecError("n_report must be >= 1")

    def grid(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, int(self.points))
        return np.linspace(self.start, self.stop, int(self.points))

    def columns(self) -> list[str]:
        cols = ["index", self.variable, "status"]
        if "P" in self.observables:
            cols += [f"P_{n}" for n in range(self.n_report + 1)]
        if "chi" in self.observables:
            cols += ["chi", "chi_kind"]
        if "quasienergies" in self.observables:
            cols += [f"E_{s + 1}" for s in range(self.model.n_levels)]
        return cols


def evaluate_point(spec: ScanSpec, index: int, value: float) -> dict:
    """One scan row. Pipeline failures are reported in ``status``, never raised."""
    row = {c: None for c in spec.columns()}
    row["index"] = index
    row[spec.variable] = float(value)
    if spec.variable == "amplitude":
        amplitude, omega = float(value), spec.fixed
    else:
        amplitude, omega = spec.fixed, float(value)
    try:
        fld = FieldConfig(amplitude, omega)
        sol = solve_floquet(spec.model, fld, spec.truncation, method=spec.method)
        init = expansion_for(sol, spec.k)
        comps = fourier_components(sol, init, spec.model, n_report=spec.n_report)
        if not all(math.isfinite(v) for v in comps.values()):
            raise FloqpolError("non-finite Fourier component")
        if "P" in spec.observables:
            for n, v in comps.items():
                row[f"P_{n}"] = v
        if "chi" in spec.observables:
            chi = susceptibility(comps[1], amplitude)
            if chi is None:
                row["chi"] = sos_polarizability(spec.model, spec.k, omega)
                row["chi_kind"] = "sos_limit"
            else:
                row["chi"] = chi
                row["chi_kind"] = "ratio"
        if "quasienergies" in spec.observables:
            for s, e in enumerate(sol.rep_quasienergies()):
                row[f"E_{s + 1}"] = fold_to_zone(float(e), omega)
        row["status"] = "ok"
    except (FloqpolError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        row["status"] = f"failed: {type(exc).__name__}: {exc}"
    return row


def _evaluate_star(args):
    return evaluate_point(*args)


def run_scan(spec: ScanSpec, workers: int | None = None) -> list[dict]:
    """Evaluate every grid point; rows come back in grid order."""
    grid = spec.grid()
    jobs = [(spec, i, float(v)) for i, v in enumerate(grid)]
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1 or len(jobs) == 1:
        return [_evaluate_star(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_evaluate_star, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


@dataclass(frozen=True)
class FitResult:
    alpha: float
    gamma: float
    residual: float
    amplitudes_used: list[float]
    beta: float | None = None


def fit_susceptibilities(amplitudes, p1, include_even: bool = False,
                         radius: float | None = None) -> FitResult:
    """Least-squares P_1(F) ~ alpha F + gamma F^3 (+ beta F^2 with ``include_even``).

    If ``radius`` is given, every amplitude must lie strictly inside it.
    The conditioning guard applies to the column-normalized design matrix.
    """
    f = np.asarray(amplitudes, dtype=float)
    y = np.asarray(p1, dtype=float)
    if f.shape != y.shape or f.ndim != 1:
        raise FitError("amplitudes and p1 must be matching 1-D sequences")
    if f.size < 4:
        raise FitError(f"need at least 4 amplitude points, got {f.size}")
    if not (np.all(np.isfinite(f)) and np.all(np.isfinite(y))):
        raise FitError("non-finite data")
    if radius is not None and np.any(np.abs(f) >= radius):
        raise FitError(f"amplitudes must lie strictly inside the convergence radius {radius:g}")
    powers = [1, 2, 3] if include_even else [1, 3]
    x = np.stack([f ** p for p in powers], axis=1)
    scale = np.linalg.norm(x, axis=0)
    if np.any(scale == 0):
        raise FitError("design matrix has an all-zero column")
    xs = x / scale
    cond = np.linalg.cond(xs)
    if not cond <= FIT_COND_LIMIT:
        raise FitError(f"fit is ill-conditioned (condition number {cond:.3g})")
    coef, *_ = np.linalg.lstsq(xs, y, rcond=None)
    coef = coef / scale
    residual = float(np.linalg.norm(x @ coef - y))
    c = dict(zip(powers, coef))
    return FitResult(
        alpha=float(c[1]),
        gamma=float(c[3]),
        residual=residual,
        amplitudes_used=f.tolist(),
        beta=float(c[2]) if include_even else None,
    )
