"""Synthetic chained-Bell datasets from a quantum model.

Produces Poisson-distributed singles and coincidence counts shaped exactly
like the ingestion schema, given a state, a visibility, detector rates, and
optional per-setting analyzer asymmetries; also provides the ideal
``delta_N(V)`` curve and a sweep over ``N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from ._seeds import derived_rng
from .counting import GroupCounts, estimate_chained
from .errors import InvalidInputError
from .qcore import DensityMatrix, apply_werner_noise, joint_probability, phi_plus_state
from .settings import PLANE_PLUS_L, PlaneEmbedding, build_plan

__all__ = [
    "DEFAULT_SEED",
    "ExperimentConfig",
    "SweepRow",
    "predicted_delta",
    "predicted_chained_value",
    "simulate_dataset",
    "sweep_delta",
]

#: Default master seed used by the CLI and config when none is given.
DEFAULT_SEED = 20260814

_SWEEP_RANGE = range(2, 13)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to synthesize one chained-Bell dataset.

    ``coincidence_rate_cps`` is the total pair rate of a group (the four
    slots of a group split it according to the joint outcome probabilities);
    ``singles_rate_cps`` is the Alice-side detection rate, modulated per
    setting by ``analyzer_asymmetry`` (missing indices default to 1.0).
    """

    n_bases: int
    plane: PlaneEmbedding = PLANE_PLUS_L
    state: DensityMatrix = field(default_factory=phi_plus_state)
    visibility: float = 1.0
    singles_rate_cps: float = 18500.0
    coincidence_rate_cps: float = 550.0
    singles_duration_s: float = 40.0
    coincidence_duration_s: float = 40.0
    analyzer_asymmetry: dict[int, float] = field(default_factory=dict)
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.n_bases < 2:
            raise InvalidInputError(f"N must be at least 2, got {self.n_bases}")
        if not 0.0 <= self.visibility <= 1.0:
            raise InvalidInputError(
                f"visibility must be in [0, 1], got {self.visibility}"
            )
        for name, value in (
            ("singles_rate_cps", self.singles_rate_cps),
            ("coincidence_rate_cps", self.coincidence_rate_cps),
            ("singles_duration_s", self.singles_duration_s),
            ("coincidence_duration_s", self.coincidence_duration_s),
        ):
            if value <= 0 or not math.isfinite(value):
                raise InvalidInputError(f"{name} must be positive, got {value}")
        for index, factor in self.analyzer_asymmetry.items():
            if index % 2 != 0 or not 0 <= index <= 4 * self.n_bases - 2:
                raise InvalidInputError(
                    f"asymmetry index must be an even Alice index, got {index}"
                )
            if factor <= 0 or not math.isfinite(factor):
                raise InvalidInputError(
                    f"asymmetry factor must be positive, got {factor} at index {index}"
                )


@dataclass(frozen=True)
class SweepRow:
    """One row of a delta-versus-N sweep."""

    n_bases: int
    predicted: float
    simulated: float
    sigma: float


def predicted_delta(n_bases: int, visibility: float) -> float:
    """Ideal quantum prediction ``delta_N = N/2 (1 - V cos(pi/2N))``."""
    if n_bases < 2:
        raise InvalidInputError(f"N must be at least 2, got {n_bases}")
    if not 0.0 <= visibility <= 1.0:
        raise InvalidInputError(f"visibility must be in [0, 1], got {visibility}")
    return n_bases / 2.0 * (1.0 - visibility * math.cos(math.pi / (2 * n_bases)))


def predicted_chained_value(n_bases: int, visibility: float) -> float:
    """Ideal quantum prediction ``I_N = N (1 - V cos(pi/2N))``."""
    return 2.0 * predicted_delta(n_bases, visibility)


def simulate_dataset(cfg: ExperimentConfig) -> list[GroupCounts]:
    """Draw one synthetic dataset (list of per-group counts, plan order).

    Group ``g`` draws from a generator derived from ``(seed, g)``, so
    per-group simulation is order-independent and the whole dataset is
    byte-reproducible for a fixed config.
    """
    plan = build_plan(cfg.n_bases, cfg.plane)
    noisy = apply_werner_noise(cfg.state, cfg.visibility)
    pair_total = cfg.coincidence_rate_cps * cfg.coincidence_duration_s
    singles_total = cfg.singles_rate_cps * cfg.singles_duration_s

    datasets: list[GroupCounts] = []
    for gi, group in enumerate(plan.groups):
        rng = derived_rng(cfg.seed, gi)
        coincidences: dict[tuple[int, int], float] = {}
        singles: dict[tuple[int, int], float] = {}
        for m, n in group.member_pairs:
            p = joint_probability(noisy, plan.vector(m), plan.vector(n), +1, +1)
            mean_coinc = pair_total * p
            mean_singles = singles_total * cfg.analyzer_asymmetry.get(m, 1.0)
            coincidences[(m, n)] = rng.poisson(mean_coinc) / cfg.coincidence_duration_s
            singles[(m, n)] = rng.poisson(mean_singles) / cfg.singles_duration_s
        datasets.append(
            GroupCounts(
                group=group,
                coincidences=coincidences,
                singles_a=singles,
                duration_coinc_s=cfg.coincidence_duration_s,
                duration_singles_s=cfg.singles_duration_s,
            )
        )
    return datasets


def sweep_delta(template: ExperimentConfig, n_range: list[int] | range,
                visibility: float, *, resamples: int = 200) -> list[SweepRow]:
    """Predicted and simulated ``delta_N`` for each N in ``n_range``.

    Each N simulates with an independent seed derived from the template's
    master seed; ``resamples`` controls the Monte Carlo error bar.
    """
    rows: list[SweepRow] = []
    for n_bases in n_range:
        if n_bases not in _SWEEP_RANGE:
            raise InvalidInputError(
                f"sweep N must be within {_SWEEP_RANGE.start}..{_SWEEP_RANGE.stop - 1}, "
                f"got {n_bases}"
            )
        cfg = replace(
            template,
            n_bases=n_bases,
            visibility=visibility,
            analyzer_asymmetry={
                k: v
                for k, v in template.analyzer_asymmetry.items()
                if k <= 4 * n_bases - 2
            },
            seed=int(derived_rng(template.seed, n_bases).integers(2**63)),
        )
        plan = build_plan(n_bases, cfg.plane)
        estimate = estimate_chained(
            plan,
            simulate_dataset(cfg),
            resamples=resamples,
            master_seed=cfg.seed,
        )
        rows.append(
            SweepRow(
                n_bases=n_bases,
                predicted=predicted_delta(n_bases, visibility),
                simulated=estimate.delta_n,
                sigma=estimate.sigma_delta if estimate.sigma_delta is not None else 0.0,
            )
        )
    return rows
