"""Truncated Floquet (quasi-energy) matrix and its eigen-decomposition.

The steady states of H0 - F*D*cos(omega*t) are expanded as

    u_j(t) = sum_{n,s} C[n, s, j] exp(i*n*omega*t) psi_s,

with photon index n = -N..N. The coefficients are the eigenvectors of the
real symmetric matrix

    H[(r,m), (s,n)] = (eps_r + n*omega) delta_rs delta_mn
                      - F/2 * D_rs * (delta_{m,n-1} + delta_{m,n+1}),

whose eigenvalues are the quasi-energies E_j. Flat index of (state r,
photon m) is ``(m + N) * S + r`` (photon-major blocks of S states).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import jacobi
from .errors import AsymmetryError, ConvergenceError, DimensionError
from .model import FieldConfig, MolecularModel, TruncationConfig

TIE_TOL = 1e-12
REPLICA_OVERLAP = 0.5
JACOBI_MAX_DIM = 256


@dataclass(frozen=True, eq=False)
class FloquetMatrix:
    entries: np.ndarray
    n_levels: int
    n_max: int
    omega: float

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def index(self, state: int, photon: int) -> int:
        """Flat index of (0-based state, photon number)."""
        if not 0 <= state < self.n_levels or abs(photon) > self.n_max:
            raise IndexError(f"(state={state}, photon={photon}) outside the truncation")
        return (photon + self.n_max) * self.n_levels + state

    def block(self, m: int, n: int) -> np.ndarray:
        """S x S block coupling photon blocks m (rows) and n (columns)."""
        i, j = self.index(0, m), self.index(0, n)
        s = self.n_levels
        return self.entries[i:i + s, j:j + s]


@dataclass(frozen=True, eq=False)
class FloquetSolution:
    """Eigenpairs of a truncated Floquet matrix.

    ``coefficients[n + n_max, s, j]`` is C_{ns}^j. ``representatives[i]`` is
    the eigenindex chosen to stand for the ladder assigned to physical state
    i (0-based), see :func:`select_representatives`.
    """

    quasienergies: np.ndarray
    coefficients: np.ndarray
    n_max: int
    omega: float
    representatives: tuple[int, ...]
    ambiguous: bool = False
    matrix_norm: float = 0.0

    @property
    def n_levels(self) -> int:
        return self.coefficients.shape[1]

    @property
    def photons(self) -> np.ndarray:
        return np.arange(-self.n_max, self.n_max + 1)

    @property
    def eigenvectors(self) -> np.ndarray:
        """Coefficients as columns of the flat (photon-major) eigenvector matrix."""
        return self.coefficients.reshape(-1, self.coefficients.shape[2])

    def central_weights(self) -> np.ndarray:
        return np.sum(self.coefficients[self.n_max] ** 2, axis=0)

    def state_weights(self) -> np.ndarray:
        """Array (S, dim): weight of physical state s in eigenvector j."""
        return np.sum(self.coefficients ** 2, axis=0)

    def dominant_states(self) -> np.ndarray:
        return np.argmax(self.state_weights(), axis=0)

    def edge_weights(self) -> np.ndarray:
        c = self.coefficients
        return np.sum(c[0] ** 2, axis=0) + np.sum(c[-1] ** 2, axis=0)

    def rep_quasienergies(self) -> np.ndarray:
        return self.quasienergies[list(self.representatives)]

    def rep_coefficients(self) -> np.ndarray:
        """Array (2N+1, S, S): coefficients of the representatives, in state order."""
        return self.coefficients[:, :, list(self.representatives)]


def build_floquet_matrix(model: MolecularModel, field: FieldConfig,
                         trunc: TruncationConfig) -> FloquetMatrix:
    s = model.n_levels
    n_max = int(trunc.n_max)
    blocks = 2 * n_max + 1
    dim = blocks * s
    if dim > trunc.dim_cap:
        raise DimensionError(
            f"Floquet matrix dimension (2*{n_max}+1)*{s} = {dim} exceeds cap {trunc.dim_cap}"
        )
    h = np.zeros((dim, dim))
    photons = np.repeat(np.arange(-n_max, n_max + 1), s)
    h[np.diag_indices(dim)] = np.tile(model.energies, blocks) + photons * field.omega
    coupling = -0.5 * field.amplitude * model.dipole
    for b in range(blocks - 1):
        i, j = b * s, (b + 1) * s
        h[i:i + s, j:j + s] = coupling
        h[j:j + s, i:i + s] = coupling
    h.setflags(write=False)
    return FloquetMatrix(h, s, n_max, field.omega)


def diagonalize_symmetric(mat, method: str = "jacobi"):
    """Ascending eigenvalues and orthonormal eigenvectors (columns).

    ``method`` is ``"jacobi"`` (cyclic Jacobi, the default) or ``"lapack"``
    (numpy.linalg.eigh), the latter for matrices too large for Jacobi.
    Exactly diagonal inputs short-circuit to coordinate eigenvectors.
    """
    a = mat.entries if isinstance(mat, FloquetMatrix) else np.asarray(mat, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    asym = np.max(np.abs(a - a.T)) if a.size else 0.0
    if asym > jacobi.SYMMETRY_TOL:
        raise AsymmetryError(f"matrix is not symmetric (max asymmetry {asym:.3g})")
    if not np.any(a - np.diag(np.diag(a))):
        d = np.diag(a).copy()
        order = np.argsort(d, kind="stable")
        return d[order], np.eye(a.shape[0])[:, order]
    if method == "jacobi":
        return jacobi.jacobi_eigh(a)
    if method == "lapack":
        w, v = np.linalg.eigh(a)
        return w, v
    raise ValueError(f"unknown eigensolver method {method!r}")


def apply_phase_convention(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so that its largest-magnitude entry is positive."""
    v = np.array(vectors, dtype=float)
    if v.size == 0:
        return v
    lead = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[lead, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    return v * signs


def fold_to_zone(e: float, omega: float) -> float:
    """Map a quasi-energy into the zone [-omega/2, omega/2)."""
    if not omega > 0:
        raise ValueError(f"omega must be > 0, got {omega}")
    m = math.floor(e / omega + 0.5)
    folded = e - m * omega
    # floor can land one zone off when e/omega + 1/2 rounds across an integer
    if folded >= 0.5 * omega:
        folded -= omega
    elif folded < -0.5 * omega:
        folded += omega
    return folded


def _ladder_overlap(ci: np.ndarray, cj: np.ndarray) -> float:
    """max over photon shifts p of |<shift_p C^i, C^j>| for (2N+1, S) arrays."""
    blocks = ci.shape[0]
    best = 0.0
    for p in range(-(blocks - 1), blocks):
        if p >= 0:
            ov = np.sum(ci[:blocks - p] * cj[p:])
        else:
            ov = np.sum(ci[-p:] * cj[:blocks + p])
        best = max(best, abs(float(ov)))
    return best


def select_representatives(coefficients: np.ndarray) -> tuple[tuple[int, ...], bool]:
    """Pick one eigenvector per physical ladder.

    Eigenvectors are visited in order of decreasing central-block weight
    sum_s C[0, s, j]^2 (lower eigenindex first on ties). A candidate that is a
    photon-shifted replica of an already chosen vector (shifted overlap above
    1/2) is skipped; otherwise it is assigned to the unassigned physical state
    carrying most of its weight. Stops once every state has a representative.

    Returns:
        (representatives indexed by 0-based state, ambiguous flag). The flag is
        set when a chosen vector's central weight ties within 1e-12 with a
        vector that was not chosen.
    """
    c = np.asarray(coefficients)
    blocks, s, dim = c.shape
    n_max = (blocks - 1) // 2
    central = np.sum(c[n_max] ** 2, axis=0)
    state_w = np.sum(c ** 2, axis=0)
    order = sorted(range(dim), key=lambda j: (-central[j], j))

    assigned: dict[int, int] = {}
    chosen: list[int] = []
    for j in order:
        if len(chosen) == s:
            break
        if any(_ladder_overlap(c[:, :, i], c[:, :, j]) > REPLICA_OVERLAP for i in chosen):
            continue
        free = [st for st in range(s) if st not in assigned]
        state = max(free, key=lambda st: (state_w[st, j], -st))
        assigned[state] = j
        chosen.append(j)
    if len(chosen) < s:
        raise ConvergenceError(
            f"found only {len(chosen)} distinct Floquet ladders for {s} states; "
            "increase n_max"
        )
    others = np.array([j for j in range(dim) if j not in chosen], dtype=int)
    ambiguous = bool(
        others.size
        and any(np.min(np.abs(central[others] - central[j])) <= TIE_TOL for j in chosen)
    )
    reps = tuple(int(assigned[st]) for st in range(s))
    return reps, ambiguous


def _solve_fixed(model, field, trunc, method):
    mat = build_floquet_matrix(model, field, trunc)
    if method == "auto":
        method = "jacobi" if mat.dim <= JACOBI_MAX_DIM else "lapack"
    w, v = diagonalize_symmetric(mat, method=method)
    v = apply_phase_convention(v)
    coeffs = v.reshape(2 * trunc.n_max + 1, model.n_levels, -1)
    reps, ambiguous = select_representatives(coeffs)
    w.setflags(write=False)
    coeffs.setflags(write=False)
    return FloquetSolution(
        quasienergies=w,
        coefficients=coeffs,
        n_max=int(trunc.n_max),
        omega=field.omega,
        representatives=reps,
        ambiguous=ambiguous,
        matrix_norm=float(np.max(np.sum(np.abs(mat.entries), axis=1))),
    )


def solve_floquet(model: MolecularModel, field: FieldConfig,
                  trunc: TruncationConfig | None = None, method: str = "auto",
                  max_n: int = 1024) -> FloquetSolution:
    """Solve the Floquet problem and pick one representative per ladder.

    ``method`` selects the eigensolver: ``"jacobi"``, ``"lapack"`` or
    ``"auto"`` (Jacobi up to dimension 256). With ``trunc.auto_converge``
    the photon cutoff is doubled until P_1 for the ground state (k=1)
    changes by less than ``trunc.tol``; the larger truncation is returned.
    """
    trunc = trunc or TruncationConfig()
    if not trunc.auto_converge:
        return _solve_fixed(model, field, trunc, method)

    from .initcond import expansion_for
    from .polarization import fourier_components

    def p1(sol):
        init = expansion_for(sol, 1)
        return fourier_components(sol, init, model, n_report=1)[1]

    n = int(trunc.n_max)
    current = _solve_fixed(model, field, trunc, method)
    p_prev = p1(current)
    while True:
        n2 = 2 * n
        dim2 = (2 * n2 + 1) * model.n_levels
        if n2 > max_n or dim2 > trunc.dim_cap:
            raise ConvergenceError(
                f"P_1 not converged to {trunc.tol:g} before truncation cap "
                f"(N={n}: {p_prev!r})",
                values=(p_prev,),
            )
        t2 = TruncationConfig(n2, False, trunc.tol, trunc.dim_cap)
        nxt = _solve_fixed(model, field, t2, method)
        p_next = p1(nxt)
        if abs(p_next - p_prev) < trunc.tol:
            return nxt
        if (2 * (2 * n2) + 1) * model.n_levels > trunc.dim_cap or 2 * n2 > max_n:
            raise ConvergenceError(
                f"P_1 not converged to {trunc.tol:g}: N={n} gives {p_prev!r}, "
                f"N={n2} gives {p_next!r}",
                values=(p_prev, p_next),
            )
        n, current, p_prev = n2, nxt, p_next
