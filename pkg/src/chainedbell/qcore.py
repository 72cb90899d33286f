"""Exact two-qubit quantum predictions.

States, polarization projectors, joint outcome probabilities, correlations,
pure-state fidelity, and isotropic (Werner) noise mixing.  Everything here is
pure and deterministic; all stochastic modeling lives in :mod:`chainedbell.qsim`.

Conventions
-----------
* The two-qubit basis order is ``(HH, HV, VH, VV)``.
* A measurement direction is a real unit 3-vector ``(s_plus, s_l, s_h)`` on
  the polarization Bloch sphere: ``sigma_1`` has the +45deg state as its +1
  eigenvector, ``sigma_2`` the left-circular state, and ``sigma_3`` the
  horizontal state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "BlochVector",
    "DensityMatrix",
    "Outcome",
    "OUTCOMES",
    "projector_from_bloch",
    "joint_probability",
    "correlation",
    "fidelity",
    "apply_werner_noise",
    "phi_plus_ket",
    "phi_plus_state",
    "maximally_mixed_state",
]

Outcome = Literal[1, -1]
OUTCOMES: tuple[int, int] = (+1, -1)

_UNIT_NORM_TOL = 1e-9
_HERMITIAN_TOL = 1e-9
_TRACE_TOL = 1e-9
_EIGENVALUE_TOL = 1e-8

SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
_IDENTITY_2 = np.eye(2, dtype=complex)
_IDENTITY_4 = np.eye(4, dtype=complex)


def _validate_outcome(value: int, name: str) -> int:
    if value not in OUTCOMES:
        raise InvalidInputError(f"{name} must be +1 or -1, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class BlochVector:
    """Unit 3-vector specifying a polarization measurement direction."""

    s_plus: float
    s_l: float
    s_h: float

    def __post_init__(self) -> None:
        norm_sq = self.s_plus**2 + self.s_l**2 + self.s_h**2
        if abs(norm_sq - 1.0) > _UNIT_NORM_TOL:
            raise InvalidInputError(
                f"Bloch vector must be unit norm: |({self.s_plus}, {self.s_l}, "
                f"{self.s_h})|^2 = {norm_sq}"
            )

    @classmethod
    def from_array(cls, components: Sequence[float]) -> "BlochVector":
        a = np.asarray(components, dtype=float)
        if a.shape != (3,):
            raise InvalidInputError(f"expected 3 components, got shape {a.shape}")
        return cls(float(a[0]), float(a[1]), float(a[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.s_plus, self.s_l, self.s_h])

    def dot(self, other: "BlochVector") -> float:
        return float(self.as_array() @ other.as_array())

    def negated(self) -> "BlochVector":
        """The antipodal direction (same analyzer, outcomes swapped)."""
        return BlochVector(-self.s_plus, -self.s_l, -self.s_h)


class DensityMatrix:
    """A physical 4x4 two-qubit density matrix in the ``(HH, HV, VH, VV)`` basis.

    Validation enforces Hermiticity and unit trace within 1e-9 and positive
    semidefiniteness up to ``eigenvalue_tol`` (default 1e-8, covering the tiny
    negative eigenvalues a finite optimization can produce).  Matrices
    transcribed from rounded published tables may need a looser
    ``eigenvalue_tol``; pass it explicitly and deliberately in that case.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Sequence[Sequence[complex]] | np.ndarray,
                 *, eigenvalue_tol: float = _EIGENVALUE_TOL):
        m = np.asarray(entries, dtype=complex)
        if m.shape != (4, 4):
            raise InvalidInputError(f"density matrix must be 4x4, got shape {m.shape}")
        herm_err = float(np.max(np.abs(m - m.conj().T)))
        if herm_err > _HERMITIAN_TOL:
            raise InvalidInputError(f"matrix is not Hermitian (max deviation {herm_err:.3e})")
        trace_err = abs(complex(np.trace(m)) - 1.0)
        if trace_err > _TRACE_TOL:
            raise InvalidInputError(f"matrix trace must be 1 (deviation {trace_err:.3e})")
        min_eig = float(np.linalg.eigvalsh(m)[0])
        if min_eig < -eigenvalue_tol:
            raise InvalidInputError(
                f"matrix has negative eigenvalue {min_eig:.3e} "
                f"(tolerance {-eigenvalue_tol:.1e})"
            )
        m = 0.5 * (m + m.conj().T)
        m.flags.writeable = False
        self._entries = m

    @property
    def entries(self) -> np.ndarray:
        """Read-only 4x4 complex array."""
        return self._entries

    @classmethod
    def from_ket(cls, psi: Sequence[complex] | np.ndarray) -> "DensityMatrix":
        """Rank-1 density matrix of a normalized pure state vector."""
        v = _validate_ket(psi)
        return cls(np.outer(v, v.conj()))

    def eigenvalues(self) -> np.ndarray:
        """Real eigenvalues in ascending order."""
        return np.linalg.eigvalsh(self._entries)

    def purity(self) -> float:
        """Tr(rho^2)."""
        return float(np.real(np.trace(self._entries @ self._entries)))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"DensityMatrix({np.array2string(self._entries, precision=4)})"


def _validate_ket(psi: Sequence[complex] | np.ndarray) -> np.ndarray:
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if v.shape != (4,):
        raise InvalidInputError(f"pure state must have 4 amplitudes, got shape {v.shape}")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > _UNIT_NORM_TOL:
        raise InvalidInputError(f"pure state must be normalized, |psi| = {norm}")
    return v


def phi_plus_ket() -> np.ndarray:
    """The maximally entangled state (|HH> + |VV>)/sqrt(2) as an amplitude vector."""
    return np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)


def phi_plus_state() -> DensityMatrix:
    """Density matrix of (|HH> + |VV>)/sqrt(2)."""
    return DensityMatrix.from_ket(phi_plus_ket())


def maximally_mixed_state() -> DensityMatrix:
    """The two-qubit maximally mixed state I/4."""
    return DensityMatrix(_IDENTITY_4 / 4.0)


def projector_from_bloch(s: BlochVector, outcome: int) -> np.ndarray:
    """Rank-1 projector onto the ``outcome`` eigenstate of the analyzer along ``s``.

    Returns ``(I + outcome * (s_plus*sigma_1 + s_l*sigma_2 + s_h*sigma_3)) / 2``,
    a Hermitian idempotent 2x2 matrix of trace 1.
    """
    x = _validate_outcome(outcome, "outcome")
    pauli_component = s.s_plus * SIGMA_1 + s.s_l * SIGMA_2 + s.s_h * SIGMA_3
    return 0.5 * (_IDENTITY_2 + x * pauli_component)


def joint_probability(rho: DensityMatrix, s_a: BlochVector, s_b: BlochVector,
                      x: int, y: int) -> float:
    """Probability of outcomes ``(x, y)`` when measuring along ``(s_a, s_b)``.

    Computes ``Tr[rho (Pi(s_a, x) kron Pi(s_b, y))]`` and clamps the tiny
    numerical excursions outside [0, 1].
    """
    pi = np.kron(projector_from_bloch(s_a, x), projector_from_bloch(s_b, y))
    p = float(np.real(np.einsum("ij,ji->", rho.entries, pi)))
    if p < -1e-9 or p > 1 + 1e-9:
        raise InvalidInputError(f"probability {p} outside [0, 1] beyond tolerance")
    return min(max(p, 0.0), 1.0)


def correlation(rho: DensityMatrix, s_a: BlochVector, s_b: BlochVector) -> float:
    """Expectation of the product of outcomes, ``sum_xy x*y*P(x, y)``, in [-1, 1]."""
    total = 0.0
    for x in OUTCOMES:
        for y in OUTCOMES:
            total += x * y * joint_probability(rho, s_a, s_b, x, y)
    return total


def fidelity(rho: DensityMatrix, psi: Sequence[complex] | np.ndarray) -> float:
    """Overlap ``<psi|rho|psi>`` of a state with a normalized pure target."""
    v = _validate_ket(psi)
    value = complex(v.conj() @ rho.entries @ v)
    return float(value.real)


def apply_werner_noise(rho: DensityMatrix, visibility: float) -> DensityMatrix:
    """Isotropic mixing ``V*rho + (1-V)*I/4``.

    Scales every correlation by exactly ``V`` while leaving single-side
    marginals of a maximally entangled state unbiased, which is the noise
    model matching the visibility parameter used throughout this package.
    """
    if not 0.0 <= visibility <= 1.0:
        raise InvalidInputError(f"visibility must be in [0, 1], got {visibility}")
    mixed = visibility * rho.entries + (1.0 - visibility) * _IDENTITY_4 / 4.0
    return DensityMatrix(mixed)
