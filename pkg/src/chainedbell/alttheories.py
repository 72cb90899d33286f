"""Alternative-theory analysis: how much could any extended theory predict?

This module works with explicit finite conditional distributions
``P(x, y, z | a, b, c)`` — Alice's and Bob's outcomes plus a side system that
may carry extra predictive information.  It verifies the central bound
(the maximum extra predictability is ``delta = I/2 + nu`` for any
non-signaling theory), demonstrates its tightness, brute-forces the
local-hidden-variable minimum of the chained statistic, and evaluates the
four Leggett-style hidden-polarization models with their critical ``delta``
values and minimum visibilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._seeds import derived_rng
from .errors import (
    IncompleteDataError,
    InvalidInputError,
    SignalingError,
    UndefinedConditionalError,
)
from .qcore import BlochVector, DensityMatrix, joint_probability
from .qsim import predicted_delta
from .settings import ChainedPlan, PlaneEmbedding, alice_setting

__all__ = [
    "FiniteConditionalDistribution",
    "DeterministicStrategy",
    "LeggettHiddenDist",
    "NonSignalingCheck",
    "LemmaReport",
    "FalsificationResult",
    "Case4GridCheck",
    "variational_distance",
    "check_nonsignaling",
    "markov_violation",
    "verify_lemma_bound",
    "lhv_min_chained",
    "lhv_mixture",
    "quantum_model",
    "tightness_model",
    "leggett_outcome",
    "leggett_expected_distance",
    "leggett_critical",
    "leggett_critical_is_tabulated",
    "min_visibility",
    "falsification_report",
    "case4_grid_check",
]

_NORMALIZATION_TOL = 1e-9
_DEFAULT_NS_TOL = 1e-9
_ZERO_PROBABILITY = 1e-12
_MAX_LHV_N = 10
_VISIBILITY_SCAN_MAX_N = 50
_OUTCOMES = (+1, -1)


def variational_distance(p: Sequence[float] | np.ndarray,
                         q: Sequence[float] | np.ndarray) -> float:
    """Half the L1 distance between two distributions on the same alphabet."""
    pa = np.asarray(p, dtype=float)
    qa = np.asarray(q, dtype=float)
    if pa.shape != qa.shape:
        raise InvalidInputError(
            f"distributions live on different alphabets: {pa.shape} vs {qa.shape}"
        )
    return 0.5 * float(np.sum(np.abs(pa - qa)))


@dataclass(frozen=True)
class FiniteConditionalDistribution:
    """Tabulated ``P(x, y, z | a, b, c)``.

    ``table`` has shape ``(|X|, |Y|, |Z|, |A|, |B|, |C|)``; the ``*_values``
    tuples give the outcome/input labels along each axis, and lookups are by
    label.  Normalization over ``(x, y, z)`` is validated for every input
    triple.
    """

    table: np.ndarray
    x_values: tuple = (+1, -1)
    y_values: tuple = (+1, -1)
    z_values: tuple = (+1, -1)
    a_values: tuple = (0,)
    b_values: tuple = (1,)
    c_values: tuple = (0,)

    def __post_init__(self) -> None:
        t = np.asarray(self.table, dtype=float)
        expected = (
            len(self.x_values), len(self.y_values), len(self.z_values),
            len(self.a_values), len(self.b_values), len(self.c_values),
        )
        if t.shape != expected:
            raise InvalidInputError(
                f"table shape {t.shape} does not match alphabets {expected}"
            )
        if np.any(t < -_NORMALIZATION_TOL):
            raise InvalidInputError("probabilities must be nonnegative")
        sums = t.sum(axis=(0, 1, 2))
        if np.max(np.abs(sums - 1.0)) > _NORMALIZATION_TOL:
            raise InvalidInputError(
                f"P(x,y,z|a,b,c) must sum to 1 for every input triple "
                f"(worst deviation {np.max(np.abs(sums - 1.0)):.3e})"
            )
        t = t.copy()
        t.flags.writeable = False
        object.__setattr__(self, "table", t)

    def _axis_index(self, values: tuple, value, name: str) -> int:
        try:
            return values.index(value)
        except ValueError:
            raise InvalidInputError(
                f"{name}={value!r} is not in the alphabet {values}"
            ) from None

    def joint_xy(self, a, b, c) -> np.ndarray:
        """P(x, y | a, b, c) as an (|X|, |Y|) array."""
        ai = self._axis_index(self.a_values, a, "a")
        bi = self._axis_index(self.b_values, b, "b")
        ci = self._axis_index(self.c_values, c, "c")
        return self.table[:, :, :, ai, bi, ci].sum(axis=2)

    def marginal_x(self, a, b, c) -> np.ndarray:
        return self.joint_xy(a, b, c).sum(axis=1)

    def marginal_z(self, a, b, c) -> np.ndarray:
        ai = self._axis_index(self.a_values, a, "a")
        bi = self._axis_index(self.b_values, b, "b")
        ci = self._axis_index(self.c_values, c, "c")
        return self.table[:, :, :, ai, bi, ci].sum(axis=(0, 1))

    def conditional_z_given_x(self, a, b, c, x) -> np.ndarray:
        ai = self._axis_index(self.a_values, a, "a")
        bi = self._axis_index(self.b_values, b, "b")
        ci = self._axis_index(self.c_values, c, "c")
        xi = self._axis_index(self.x_values, x, "x")
        block = self.table[xi, :, :, ai, bi, ci]
        p_x = float(block.sum())
        if p_x <= _ZERO_PROBABILITY:
            raise UndefinedConditionalError(
                f"cannot condition on X={x} at (a={a}, b={b}, c={c}): "
                f"P(x|a,b,c) = {p_x}"
            )
        return block.sum(axis=0) / p_x


@dataclass(frozen=True)
class NonSignalingCheck:
    passed: bool
    max_deviation: float
    violation: str | None


def check_nonsignaling(dist: FiniteConditionalDistribution,
                       tol: float = _DEFAULT_NS_TOL) -> NonSignalingCheck:
    """Verify the three marginal conditions of a non-signaling distribution.

    ``P(X,Y|a,b,c)`` must not depend on ``c``, ``P(X,Z|a,b,c)`` not on ``b``,
    and ``P(Y,Z|a,b,c)`` not on ``a``.  Failing is a result, not an error.
    """
    t = dist.table
    checks = (
        ("P(X,Y) depends on input C", t.sum(axis=2), 4),   # axes (x,y,a,b,c)
        ("P(X,Z) depends on input B", t.sum(axis=1), 3),   # axes (x,z,a,b,c)
        ("P(Y,Z) depends on input A", t.sum(axis=0), 2),   # axes (y,z,a,b,c)
    )
    worst = 0.0
    violation = None
    for label, marginal, axis in checks:
        deviation = float(
            np.max(np.abs(marginal - marginal.mean(axis=axis, keepdims=True)))
        )
        if deviation > worst:
            worst = deviation
            if deviation > tol:
                violation = f"{label} (max deviation {deviation:.3e})"
    return NonSignalingCheck(
        passed=worst <= tol, max_deviation=worst, violation=violation
    )


def markov_violation(dist: FiniteConditionalDistribution, a, b, c, x) -> float:
    """How much knowing Alice's outcome shifts the side system:
    ``D(P(Z|a,b,c,x), P(Z|a,b,c))``."""
    return variational_distance(
        dist.conditional_z_given_x(a, b, c, x), dist.marginal_z(a, b, c)
    )


@dataclass(frozen=True)
class LemmaReport:
    """Result of checking the predictive bound on one distribution."""

    i_n: float
    nu_n: float
    delta_n: float
    max_violation: float
    margin: float
    argmax: tuple | None
    satisfied: bool


def verify_lemma_bound(dist: FiniteConditionalDistribution, plan: ChainedPlan,
                       tol: float = _DEFAULT_NS_TOL) -> LemmaReport:
    """Check ``max over (a,b,c,x) of D(P_Z|abcx, P_Z|abc) <= I/2 + nu``.

    The distribution's input alphabets must match the plan's base index sets;
    a signaling distribution is rejected (the bound only holds without
    signaling).  Zero-probability outcome branches are skipped — no
    conditional exists there.
    """
    ns = check_nonsignaling(dist, tol)
    if not ns.passed:
        raise SignalingError(f"distribution is signaling: {ns.violation}")
    base_a = tuple(g.a for g in plan.groups if not g.is_correlated_term)
    expected_a = tuple(sorted(set(base_a)))
    expected_b = tuple(sorted({g.b for g in plan.groups}))
    if tuple(sorted(dist.a_values)) != expected_a or \
            tuple(sorted(dist.b_values)) != expected_b:
        raise InvalidInputError(
            f"input alphabets {dist.a_values}/{dist.b_values} do not match the "
            f"plan's index sets {expected_a}/{expected_b}"
        )
    if set(dist.x_values) != set(_OUTCOMES) or set(dist.y_values) != set(_OUTCOMES):
        raise InvalidInputError("X and Y must be binary with outcomes +1/-1")

    c0 = dist.c_values[0]
    xi_plus = dist.x_values.index(+1)
    yi_plus = dist.y_values.index(+1)

    def p_correlated(a, b) -> float:
        joint = dist.joint_xy(a, b, c0)
        same = joint[xi_plus, yi_plus] + joint[1 - xi_plus, 1 - yi_plus]
        return float(same)

    i_value = 0.0
    for g in plan.groups:
        p = p_correlated(g.a, g.b)
        i_value += p if g.is_correlated_term else (1.0 - p)

    uniform = np.full(len(dist.x_values), 1.0 / len(dist.x_values))
    nu_value = max(
        variational_distance(dist.marginal_x(a, dist.b_values[0], c0), uniform)
        for a in dist.a_values
    )
    delta = i_value / 2.0 + nu_value

    max_violation = 0.0
    argmax: tuple | None = None
    for a in dist.a_values:
        for b in dist.b_values:
            for c in dist.c_values:
                marginal_x = dist.marginal_x(a, b, c)
                for xi, x in enumerate(dist.x_values):
                    if marginal_x[xi] <= _ZERO_PROBABILITY:
                        continue
                    v = markov_violation(dist, a, b, c, x)
                    if v > max_violation:
                        max_violation = v
                        argmax = (a, b, c, x)
    margin = delta - max_violation
    return LemmaReport(
        i_n=i_value,
        nu_n=nu_value,
        delta_n=delta,
        max_violation=max_violation,
        margin=margin,
        argmax=argmax,
        satisfied=margin >= -tol,
    )


@dataclass(frozen=True)
class DeterministicStrategy:
    """A local deterministic assignment: outcomes for every base index."""

    f: dict[int, int]
    g: dict[int, int]

    def __post_init__(self) -> None:
        for mapping, side in ((self.f, "Alice"), (self.g, "Bob")):
            for index, outcome in mapping.items():
                if outcome not in _OUTCOMES:
                    raise InvalidInputError(
                        f"{side} outcome at index {index} must be +1/-1, got {outcome}"
                    )


def _chained_terms(n_bases: int) -> list[tuple[int, int, bool]]:
    """(a, b, is_correlated_term) in plan order, on base index sets."""
    terms = [(0, 2 * n_bases - 1, True)]
    for j in range(2 * n_bases - 1):
        terms.append((2 * ((j + 1) // 2), 2 * (j // 2) + 1, False))
    return terms


def lhv_min_chained(n_bases: int) -> tuple[float, DeterministicStrategy]:
    """Exhaustive minimum of the chained statistic over deterministic strategies.

    Every local-hidden-variable model is a mixture of the ``2^N x 2^N``
    deterministic strategies, and the statistic is linear in the strategy
    weights, so this minimum bounds all of them.
    """
    if not 2 <= n_bases <= _MAX_LHV_N:
        raise InvalidInputError(
            f"N must be in [2, {_MAX_LHV_N}] for exhaustive enumeration, got {n_bases}"
        )
    n_strategies = 2**n_bases
    bits = np.arange(n_strategies)
    # outcome of slot j under strategy i: +1 if bit j set else -1
    outcomes = np.where(
        (bits[:, None] >> np.arange(n_bases)) & 1, 1, -1
    ).astype(np.int8)

    a_slots = {a: a // 2 for a in range(0, 2 * n_bases, 2)}
    b_slots = {b: b // 2 for b in range(1, 2 * n_bases, 2)}
    i_table = np.zeros((n_strategies, n_strategies), dtype=np.int32)
    for a, b, correlated in _chained_terms(n_bases):
        equal = outcomes[:, a_slots[a], None] == outcomes[None, :, b_slots[b]]
        i_table += equal if correlated else ~equal

    flat = int(np.argmin(i_table))
    fi, gi = divmod(flat, n_strategies)
    strategy = DeterministicStrategy(
        f={a: int(outcomes[fi, slot]) for a, slot in a_slots.items()},
        g={b: int(outcomes[gi, slot]) for b, slot in b_slots.items()},
    )
    return float(i_table[fi, gi]), strategy


def _base_alphabets(n_bases: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return (
        tuple(range(0, 2 * n_bases, 2)),
        tuple(range(1, 2 * n_bases, 2)),
    )


def lhv_mixture(n_bases: int, strategies: Sequence[DeterministicStrategy],
                weights: Sequence[float]) -> FiniteConditionalDistribution:
    """Mixture of deterministic strategies whose side system reveals the label.

    ``Z`` equals the index of the strategy drawn, so the side system carries
    exactly the hidden variable — the canonical case the predictive bound
    must cover.
    """
    if len(strategies) != len(weights) or not strategies:
        raise InvalidInputError("need equally many strategies and weights")
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0) or abs(w.sum() - 1.0) > _NORMALIZATION_TOL:
        raise InvalidInputError("weights must be nonnegative and sum to 1")
    a_values, b_values = _base_alphabets(n_bases)
    z_values = tuple(range(len(strategies)))
    table = np.zeros((2, 2, len(strategies), len(a_values), len(b_values), 1))
    for zi, (strategy, weight) in enumerate(zip(strategies, w)):
        for ai, a in enumerate(a_values):
            for bi, b in enumerate(b_values):
                xi = _OUTCOMES.index(strategy.f[a])
                yi = _OUTCOMES.index(strategy.g[b])
                table[xi, yi, zi, ai, bi, 0] += weight
    return FiniteConditionalDistribution(
        table=table,
        x_values=_OUTCOMES,
        y_values=_OUTCOMES,
        z_values=z_values,
        a_values=a_values,
        b_values=b_values,
        c_values=(0,),
    )


def quantum_model(plan: ChainedPlan, rho: DensityMatrix) -> FiniteConditionalDistribution:
    """Quantum predictions on the plan's base settings with a trivial side system."""
    a_values, b_values = _base_alphabets(plan.n_bases)
    table = np.zeros((2, 2, 1, len(a_values), len(b_values), 1))
    for ai, a in enumerate(a_values):
        for bi, b in enumerate(b_values):
            for xi, x in enumerate(_OUTCOMES):
                for yi, y in enumerate(_OUTCOMES):
                    table[xi, yi, 0, ai, bi, 0] = joint_probability(
                        rho, plan.vector(a), plan.vector(b), x, y
                    )
    return FiniteConditionalDistribution(
        table=table,
        x_values=_OUTCOMES,
        y_values=_OUTCOMES,
        z_values=(0,),
        a_values=a_values,
        b_values=b_values,
        c_values=(0,),
    )


def tightness_model(epsilon: float, n_bases: int) -> FiniteConditionalDistribution:
    """The distribution showing the bound cannot be improved.

    With probability ``epsilon`` all three outcomes are -1, otherwise all are
    +1, independent of every input.  It satisfies every local constraint
    (``I = 1``), has bias ``nu = 1/2 - epsilon``, and knowing ``X = -1`` pins
    the side system completely — saturating ``delta = I/2 + nu = 1 - epsilon``.
    """
    if not 0.0 <= epsilon <= 0.5:
        raise InvalidInputError(f"epsilon must be in [0, 1/2], got {epsilon}")
    if n_bases < 2:
        raise InvalidInputError(f"N must be at least 2, got {n_bases}")
    a_values, b_values = _base_alphabets(n_bases)
    table = np.zeros((2, 2, 2, len(a_values), len(b_values), 1))
    plus = _OUTCOMES.index(+1)
    minus = _OUTCOMES.index(-1)
    table[plus, plus, plus, :, :, 0] = 1.0 - epsilon
    table[minus, minus, minus, :, :, 0] = epsilon
    return FiniteConditionalDistribution(
        table=table,
        x_values=_OUTCOMES,
        y_values=_OUTCOMES,
        z_values=_OUTCOMES,
        a_values=a_values,
        b_values=b_values,
        c_values=(0,),
    )


# ---------------------------------------------------------------------------
# Leggett-style hidden-polarization models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LeggettHiddenDist:
    """Distribution of the hidden polarization vector ``z``.

    Either a finite set of weighted atoms or the uniform distribution on the
    whole sphere.  Use the constructors: :meth:`fixed`, :meth:`uniform`,
    :meth:`from_atoms`, :meth:`in_plane_atoms`, :meth:`two_atom`.
    """

    kind: str
    atoms: tuple[tuple[BlochVector, float], ...] | None

    def __post_init__(self) -> None:
        if self.kind not in ("atoms", "uniform_sphere"):
            raise InvalidInputError(f"unknown hidden-distribution kind {self.kind!r}")
        if self.kind == "atoms":
            if not self.atoms:
                raise InvalidInputError("atomic distribution needs at least one atom")
            weights = [w for _z, w in self.atoms]
            if any(w < 0 for w in weights):
                raise InvalidInputError("atom weights must be nonnegative")
            if abs(sum(weights) - 1.0) > _NORMALIZATION_TOL:
                raise InvalidInputError(
                    f"atom weights must sum to 1, got {sum(weights)}"
                )
        elif self.atoms is not None:
            raise InvalidInputError("uniform distribution carries no atoms")

    @classmethod
    def fixed(cls, z: BlochVector) -> "LeggettHiddenDist":
        """All hidden vectors equal ``z``."""
        return cls(kind="atoms", atoms=((z, 1.0),))

    @classmethod
    def uniform(cls) -> "LeggettHiddenDist":
        """Uniform over the whole Bloch sphere."""
        return cls(kind="uniform_sphere", atoms=None)

    @classmethod
    def from_atoms(cls, atoms: Sequence[tuple[BlochVector, float]]) -> "LeggettHiddenDist":
        return cls(kind="atoms", atoms=tuple(atoms))

    @classmethod
    def in_plane_atoms(cls, plane: PlaneEmbedding,
                       atoms: Sequence[tuple[float, float]]) -> "LeggettHiddenDist":
        """Atoms at in-plane angles: ``z(angle) = embed(cos, sin)``."""
        return cls.from_atoms(
            [(plane.embed(math.cos(t), math.sin(t)), w) for t, w in atoms]
        )

    @classmethod
    def two_atom(cls, plane1: PlaneEmbedding, plane2: PlaneEmbedding,
                 theta1: float = 0.0, theta2: float = math.pi / 4,
                 weight1: float = 0.5) -> "LeggettHiddenDist":
        """Two atoms on the arc between the two planes' far axes.

        The arc is parameterized by a half-angle ``theta`` in ``[0, pi/4]``:
        ``z(theta) = cos(2 theta) * u1 + sin(2 theta) * u2`` where ``u1``/``u2``
        are the planes' second axes (the in-plane directions orthogonal to
        the shared axis).  ``theta = 0`` and ``theta = pi/4`` are the
        endpoints — one far axis per plane — which is the hardest-to-rule-out
        pair when each endpoint bisects a gap of the other plane's settings.
        """
        u1 = plane1.axis2.as_array()
        u2 = plane2.axis2.as_array()
        if abs(float(u1 @ u2)) > _NORMALIZATION_TOL:
            raise InvalidInputError(
                "the two planes' far axes must be orthogonal for the arc construction"
            )
        if abs(plane1.axis1.dot(plane2.axis1)) < 1.0 - _NORMALIZATION_TOL:
            raise InvalidInputError("the two planes must share their first axis")

        def on_arc(theta: float) -> BlochVector:
            if not 0.0 <= theta <= math.pi / 4 + 1e-12:
                raise InvalidInputError(
                    f"arc parameter must be in [0, pi/4], got {theta}"
                )
            return BlochVector.from_array(
                math.cos(2 * theta) * u1 + math.sin(2 * theta) * u2
            )

        return cls.from_atoms(
            [(on_arc(theta1), weight1), (on_arc(theta2), 1.0 - weight1)]
        )


def leggett_outcome(alpha: BlochVector, z: BlochVector) -> tuple[float, float]:
    """Outcome distribution ``P(+1), P(-1) = (1 +/- alpha.z)/2`` of the model."""
    overlap = alpha.dot(z)
    return (0.5 * (1.0 + overlap), 0.5 * (1.0 - overlap))


def leggett_expected_distance(dist: LeggettHiddenDist, alpha: BlochVector,
                              mc_samples: int | None = None,
                              seed: int = 0) -> float:
    """Average distance of the model's outcome law from unbiased: ``E_z |alpha.z| / 2``.

    Atomic distributions and the uniform sphere evaluate in closed form;
    passing ``mc_samples`` forces a Monte Carlo estimate (deterministic for a
    given seed), which exists for every distribution kind.
    """
    if mc_samples is not None:
        if mc_samples < 1:
            raise InvalidInputError(f"mc_samples must be positive, got {mc_samples}")
        rng = derived_rng(seed)
        if dist.kind == "uniform_sphere":
            points = rng.standard_normal((mc_samples, 3))
            points /= np.linalg.norm(points, axis=1, keepdims=True)
        else:
            assert dist.atoms is not None
            weights = np.array([w for _z, w in dist.atoms])
            vectors = np.array([z.as_array() for z, _w in dist.atoms])
            picks = rng.choice(len(weights), size=mc_samples, p=weights)
            points = vectors[picks]
        return float(np.mean(np.abs(points @ alpha.as_array())) / 2.0)
    if dist.kind == "uniform_sphere":
        # E|alpha.z| over the sphere is 1/2 for any direction.
        return 0.25
    assert dist.atoms is not None
    return sum(w * abs(alpha.dot(z)) for z, w in dist.atoms) / 2.0


_TABULATED_CRIT2_N2 = 0.2


def leggett_critical_is_tabulated(case: int, n_bases: int) -> bool:
    """True where the critical value is a tabulated special case, not the formula."""
    return case == 2 and n_bases == 2


def leggett_critical(case: int, n_bases: int) -> float:
    """Critical ``delta`` below which measured data falsify the given model case.

    Case 1: hidden vector fixed in the measurement plane; case 2: fixed
    midway between the two planes; case 3: uniform over the sphere; case 4:
    the optimal two-atom distribution over both planes.  Cases 2 and 4 only
    constrain experiments measuring in two orthogonal planes.
    """
    if case not in (1, 2, 3, 4):
        raise InvalidInputError(f"case must be 1..4, got {case}")
    if n_bases < 2:
        raise InvalidInputError(f"N must be at least 2, got {n_bases}")
    cos_half_gap = math.cos(math.pi / (2 * n_bases))
    if case == 1:
        return 0.5 * cos_half_gap
    if case == 2:
        if n_bases == 2:
            return _TABULATED_CRIT2_N2
        return cos_half_gap / (2.0 * math.sqrt(2.0))
    if case == 3:
        return 0.25
    return 0.25 * cos_half_gap


def min_visibility(case: int) -> tuple[float, int]:
    """Smallest visibility that can falsify the model case, and the N achieving it.

    Bisection on ``V`` to 1e-4 over the predicate "some N in 2..50 has
    ``predicted_delta(N, V) < leggett_critical(case, N)``".
    """
    n_candidates = range(2, _VISIBILITY_SCAN_MAX_N + 1)

    def rules_out(v: float) -> bool:
        return any(
            predicted_delta(n, v) < leggett_critical(case, n) for n in n_candidates
        )

    if not rules_out(1.0):
        raise InvalidInputError(f"case {case} cannot be ruled out even at V=1")
    lo, hi = 0.0, 1.0
    while hi - lo > 1e-4:
        mid = 0.5 * (lo + hi)
        if rules_out(mid):
            hi = mid
        else:
            lo = mid
    best_n = min(
        n_candidates,
        key=lambda n: (n / 2.0 - leggett_critical(case, n))
        / (n / 2.0 * math.cos(math.pi / (2 * n))),
    )
    return hi, best_n


@dataclass(frozen=True)
class FalsificationResult:
    case: int
    n_bases: int
    critical: float
    tabulated_critical: bool
    deltas_used: tuple[float, ...]
    ruled_out: bool
    margin: float


def falsification_report(case: int, n_bases: int, delta1: float,
                         delta2: float | None = None) -> FalsificationResult:
    """Does a measured ``delta`` (or pair of them) falsify the model case?

    Cases 2 and 4 constrain two-plane experiments, so both ``delta`` values
    are required there; the criterion is ``max(deltas) < critical``.
    """
    critical = leggett_critical(case, n_bases)
    if case in (2, 4):
        if delta2 is None:
            raise IncompleteDataError(
                f"case {case} needs the orthogonal-plane delta as well"
            )
        deltas = (delta1, delta2)
    else:
        deltas = (delta1,)
    worst = max(deltas)
    return FalsificationResult(
        case=case,
        n_bases=n_bases,
        critical=critical,
        tabulated_critical=leggett_critical_is_tabulated(case, n_bases),
        deltas_used=deltas,
        ruled_out=worst < critical,
        margin=critical - worst,
    )


@dataclass(frozen=True)
class Case4GridCheck:
    """Grid-search cross-check of the two-atom construction on its arc."""

    two_atom_value: float
    best_single_atom: float
    best_symmetric_pair: float
    argmin_theta: float


def _plan_directions(n_bases: int, planes: Sequence[PlaneEmbedding]) -> list[BlochVector]:
    vectors: list[BlochVector] = []
    for plane in planes:
        for m in range(0, 4 * n_bases, 2):
            vectors.append(alice_setting(n_bases, m, plane))
    return vectors


def case4_grid_check(n_bases: int, plane1: PlaneEmbedding, plane2: PlaneEmbedding,
                     points: int = 181) -> Case4GridCheck:
    """Scan atomic distributions on the two-plane arc against the two-atom optimum.

    For each grid angle the worst-case expected distance (max over all of
    Alice's directions in both planes) is computed for the single atom and
    for the symmetric pair ``{theta, pi/4 - theta}``; the minimum over
    symmetric pairs is attained by the endpoint pair, i.e. the two-atom
    construction.
    """
    directions = _plan_directions(n_bases, (plane1, plane2))

    def worst_case(dist: LeggettHiddenDist) -> float:
        return max(leggett_expected_distance(dist, alpha) for alpha in directions)

    two_atom = worst_case(LeggettHiddenDist.two_atom(plane1, plane2))
    best_single = math.inf
    best_pair = math.inf
    argmin_theta = 0.0
    for theta in np.linspace(0.0, math.pi / 4, points):
        single = worst_case(
            LeggettHiddenDist.two_atom(plane1, plane2, theta, theta, 0.5)
        )
        pair = worst_case(
            LeggettHiddenDist.two_atom(plane1, plane2, theta, math.pi / 4 - theta, 0.5)
        )
        best_single = min(best_single, single)
        if pair < best_pair:
            best_pair = pair
            argmin_theta = float(theta)
    return Case4GridCheck(
        two_atom_value=two_atom,
        best_single_atom=best_single,
        best_symmetric_pair=best_pair,
        argmin_theta=argmin_theta,
    )
