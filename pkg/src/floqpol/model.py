"""Few-level molecular models plus the field and truncation settings.

All quantities are in atomic units: energies in hartree, dipoles in e*a0,
field amplitudes in a.u. of field strength. Only the dipole projection on
the (linear) field axis is modelled.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ModelParseError, ModelValidationError

SYMMETRY_TOL = 1e-12
BUILTIN_MODELS = ("two_level", "three_level", "lih_like")


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MolecularModel:
    """S-level system: ordered level energies and a real symmetric dipole matrix.

    Construction validates and normalizes the input: levels are sorted by
    energy (the dipole matrix is permuted consistently) and the dipole matrix
    is symmetrized after checking that its asymmetry is below 1e-12.
    """

    name: str
    energies: np.ndarray
    dipole: np.ndarray

    def __post_init__(self):
        energies = np.asarray(self.energies, dtype=float)
        dipole = np.asarray(self.dipole, dtype=float)
        if energies.ndim != 1:
            raise ModelValidationError("energies must be a flat list")
        n = energies.size
        if n < 2:
            raise ModelValidationError(f"need at least 2 levels, got {n}")
        if dipole.shape != (n, n):
            raise ModelValidationError(
                f"dipole shape {dipole.shape} does not match {n} levels"
            )
        if not np.all(np.isfinite(energies)):
            raise ModelValidationError("energies contain non-finite values")
        if not np.all(np.isfinite(dipole)):
            raise ModelValidationError("dipole contains non-finite values")
        asym = np.max(np.abs(dipole - dipole.T))
        if asym > SYMMETRY_TOL:
            raise ModelValidationError(
                f"dipole matrix is not symmetric (max |D_rs - D_sr| = {asym:.3g})"
            )
        dipole = 0.5 * (dipole + dipole.T)
        order = np.argsort(energies, kind="stable")
        energies = energies[order]
        dipole = dipole[np.ix_(order, order)]
        object.__setattr__(self, "energies", _frozen(energies))
        object.__setattr__(self, "dipole", _frozen(dipole))
        object.__setattr__(self, "name", str(self.name))

    @property
    def n_levels(self) -> int:
        return self.energies.size

    def __eq__(self, other):
        if not isinstance(other, MolecularModel):
            return NotImplemented
        return (
            self.name == other.name
            and np.array_equal(self.energies, other.energies)
            and np.array_equal(self.dipole, other.dipole)
        )

    def __hash__(self):
        return hash((self.name, self.energies.tobytes(), self.dipole.tobytes()))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "energies": self.energies.tolist(),
            "dipole": self.dipole.tolist(),
        }


@dataclass(frozen=True)
class FieldConfig:
    """Monochromatic field -F*D*cos(omega*t), switched on at t=0."""

    amplitude: float
    omega: float

    def __post_init__(self):
        if not math.isfinite(self.amplitude) or self.amplitude < 0:
            raise ValueError(f"field amplitude must be finite and >= 0, got {self.amplitude}")
        if not math.isfinite(self.omega) or self.omega <= 0:
            raise ValueError(f"omega must be finite and > 0, got {self.omega}")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega


@dataclass(frozen=True)
class TruncationConfig:
    """Photon-block truncation n = -n_max..n_max of the Floquet matrix.

    With ``auto_converge`` the block count is doubled until P_1 changes by
    less than ``tol`` between successive truncations.
    """

    n_max: int = 8
    auto_converge: bool = False
    tol: float = 1e-8
    dim_cap: int = 20000

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be a positive integer, got {self.n_max}")
        if not self.tol > 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")
        if self.dim_cap < 1:
            raise ValueError("dim_cap must be positive")


def two_level_model(omega12: float, d12: float, d11: float = 0.0, d22: float = 0.0,
                    name: str = "two-level") -> MolecularModel:
    """Two-level model with energies [0, omega12]."""
    if not omega12 > 0:
        raise ValueError(f"omega12 must be > 0, got {omega12}")
    return MolecularModel(name, [0.0, omega12], [[d11, d12], [d12, d22]])


def model_from_dict(data: dict) -> MolecularModel:
    if not isinstance(data, dict):
        raise ModelParseError("model document must be a JSON object")
    missing = {"energies", "dipole"} - data.keys()
    if missing:
        raise ModelParseError(f"model document lacks field(s): {sorted(missing)}")
    energies, dipole = data["energies"], data["dipole"]
    if not isinstance(energies, list) or not all(
        isinstance(e, (int, float)) and not isinstance(e, bool) for e in energies
    ):
        raise ModelParseError("'energies' must be an array of numbers")
    if not isinstance(dipole, list) or not all(
        isinstance(row, list)
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in row)
        for row in dipole
    ):
        raise ModelParseError("'dipole' must be an array of arrays of numbers")
    if len({len(row) for row in dipole}) > 1:
        raise ModelParseError("'dipole' rows have unequal lengths")
    return MolecularModel(str(data.get("name", "")), energies, dipole)


def load_model(path) -> MolecularModel:
    """Read a model JSON file (fields ``name``, ``energies``, ``dipole``).

    ``path`` may also be one of the shipped model names in BUILTIN_MODELS
    when no file of that name exists.
    """
    p = Path(path)
    if not p.exists() and str(path) in BUILTIN_MODELS:
        return builtin_model(str(path))
    try:
        text = p.read_text()
    except OSError as exc:
        raise ModelParseError(f"cannot read model file {p}: {exc}") from exc
    try:
        # NaN/Infinity literals are let through so that validation reports them.
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelParseError(f"{p}: {exc}") from exc
    return model_from_dict(data)


def save_model(model: MolecularModel, path) -> None:
    Path(path).write_text(json.dumps(model.to_dict(), indent=2) + "\n")


def builtin_model(name: str) -> MolecularModel:
    """One of the models shipped with the package (see BUILTIN_MODELS)."""
    if name not in BUILTIN_MODELS:
        raise KeyError(f"unknown builtin model {name!r}; choose from {BUILTIN_MODELS}")
    text = resources.files("floqpol.data").joinpath(f"{name}.json").read_text()
    return model_from_dict(json.loads(text))
