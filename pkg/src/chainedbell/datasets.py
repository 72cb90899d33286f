"""Bundled experimental datasets and the reference values they reproduce.

The package ships the raw data of one chained-measurement run at N = 6
(coincidence and singles rates for all twelve groups) and the 36-setting
tomography run characterizing the same photon-pair source, together with
the reference analysis results for that experiment.  These feed the golden
tests and serve as ready-made CLI inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .counting import GroupCounts
from .qcore import DensityMatrix
from .settings import ChainedPlan
from .tomography import TomoDataset

__all__ = [
    "counts_fixture_path",
    "tomo_fixture_path",
    "load_reference_counts",
    "load_reference_tomography",
    "reference_density_matrix",
    "ReferenceChainedResult",
    "REFERENCE_CHAINED",
    "REFERENCE_DELTA_ORTHOGONAL",
    "REFERENCE_FIDELITY",
]


def _data_path(name: str) -> Path:
    with resources.as_file(resources.files("chainedbell") / "data" / name) as path:
        return Path(path)


def counts_fixture_path() -> Path:
    """Raw N=6 chained-measurement counts (48 rows, primary plane)."""
    return _data_path("table4_n6.csv")


def tomo_fixture_path() -> Path:
    """Tomography rates for all 36 basis pairs of the source."""
    return _data_path("table3_tomo.csv")


def load_reference_counts() -> tuple[ChainedPlan, list[GroupCounts]]:
    from .io import parse_counts_csv

    return parse_counts_csv(counts_fixture_path())


def load_reference_tomography() -> TomoDataset:
    from .io import parse_tomo_csv

    return parse_tomo_csv(tomo_fixture_path())


# Reconstructed density matrix of the source, entries rounded to four
# decimals.  The rounding pushes one eigenvalue slightly below zero
# (about -3.6e-5), hence the loosened eigenvalue tolerance.
_RHO_RE = np.array([
    [0.5038, -0.0052, -0.0092, 0.4851],
    [-0.0052, 0.0040, 0.0001, -0.0011],
    [-0.0092, 0.0001, 0.0043, -0.0044],
    [0.4851, -0.0011, -0.0044, 0.4879],
])
_RHO_IM = np.array([
    [0.0000, 0.0155, 0.0138, -0.0140],
    [-0.0155, 0.0000, 0.0017, -0.0156],
    [-0.0138, -0.0017, 0.0000, -0.0113],
    [0.0140, 0.0156, 0.0113, 0.0000],
])


def reference_density_matrix() -> DensityMatrix:
    """The source's reconstructed state as reported, rounded to 4 decimals."""
    return DensityMatrix(_RHO_RE + 1j * _RHO_IM, eigenvalue_tol=1e-4)


@dataclass(frozen=True)
class ReferenceChainedResult:
    """Reference analysis values for one N of the bundled experiment."""

    i_n: float
    sigma_i: float
    nu_n: float
    sigma_nu: float
    delta_n: float
    sigma_delta: float


REFERENCE_CHAINED: dict[int, ReferenceChainedResult] = {
    2: ReferenceChainedResult(0.6196, 0.0049, 0.0027, 0.0003, 0.3125, 0.0025),
    3: ReferenceChainedResult(0.4802, 0.0046, 0.0036, 0.0003, 0.2437, 0.0023),
    4: ReferenceChainedResult(0.4103, 0.0046, 0.0043, 0.0003, 0.2094, 0.0023),
    5: ReferenceChainedResult(0.3940, 0.0045, 0.0045, 0.0003, 0.2015, 0.0023),
    6: ReferenceChainedResult(0.3791, 0.0041, 0.0047, 0.0003, 0.1942, 0.0021),
    7: ReferenceChainedResult(0.3872, 0.0042, 0.0048, 0.0003, 0.1984, 0.0021),
}

# delta measured in the orthogonal plane (only done at N=6): value, sigma.
REFERENCE_DELTA_ORTHOGONAL: dict[int, tuple[float, float]] = {
    6: (0.2297, 0.0020),
}

# Fidelity of the reconstructed state with the maximally entangled target.
REFERENCE_FIDELITY = 0.981
