"""Measurement plans for chained-Bell runs.

A chained run with ``N`` bases per side measures Alice along directions at
angles ``m*pi/2N`` (``m`` even) and Bob at ``n*pi/2N`` mirrored (``n`` odd),
within a chosen great-circle plane of the Bloch sphere.  Indices shifted by
``2N`` denote the antipodal direction, i.e. the same analyzer with outcomes
swapped.  The ``2N`` coincidence groups of four setting pairs each are what
the counting module turns into the chained correlation statistic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInputError
from .qcore import BlochVector

__all__ = [
    "PlaneEmbedding",
    "PLANE_PLUS_L",
    "PLANE_PLUS_H",
    "PLANE_NAMES",
    "plane_by_name",
    "alice_setting",
    "bob_setting",
    "CoincidenceGroup",
    "ChainedPlan",
    "build_plan",
]

_ORTHOGONAL_TOL = 1e-9


@dataclass(frozen=True)
class PlaneEmbedding:
    """An oriented great-circle plane spanned by two orthonormal Bloch axes."""

    axis1: BlochVector
    axis2: BlochVector

    def __post_init__(self) -> None:
        dot = abs(self.axis1.dot(self.axis2))
        if dot > _ORTHOGONAL_TOL:
            raise InvalidInputError(f"plane axes must be orthogonal, |axis1.axis2| = {dot}")

    def embed(self, c1: float, c2: float) -> BlochVector:
        """The Bloch vector ``c1*axis1 + c2*axis2`` (caller supplies unit (c1, c2))."""
        a1 = self.axis1.as_array()
        a2 = self.axis2.as_array()
        return BlochVector.from_array(c1 * a1 + c2 * a2)


#: Default plane: axis1 = (1,0,0), axis2 = (0,1,0).
PLANE_PLUS_L = PlaneEmbedding(BlochVector(1, 0, 0), BlochVector(0, 1, 0))
#: Orthogonal plane sharing axis1: axis2 = (0,0,1), i.e. the linear-polarization plane.
PLANE_PLUS_H = PlaneEmbedding(BlochVector(1, 0, 0), BlochVector(0, 0, 1))

PLANE_NAMES: dict[str, PlaneEmbedding] = {
    "plus-L": PLANE_PLUS_L,
    "plus-H": PLANE_PLUS_H,
}


def plane_by_name(name: str) -> PlaneEmbedding:
    """Look up one of the named planes (``plus-L`` or ``plus-H``)."""
    try:
        return PLANE_NAMES[name]
    except KeyError:
        raise InvalidInputError(
            f"unknown plane {name!r}; expected one of {sorted(PLANE_NAMES)}"
        ) from None


def _validate_n(n_bases: int) -> None:
    if n_bases < 2:
        raise InvalidInputError(f"N must be at least 2, got {n_bases}")


def alice_setting(n_bases: int, m: int, plane: PlaneEmbedding = PLANE_PLUS_L) -> BlochVector:
    """Alice's direction for even index ``m``: embed(cos(m*pi/2N), sin(m*pi/2N))."""
    _validate_n(n_bases)
    if m % 2 != 0 or not 0 <= m <= 4 * n_bases - 2:
        raise InvalidInputError(
            f"Alice index must be even in [0, {4 * n_bases - 2}], got {m}"
        )
    angle = m * math.pi / (2 * n_bases)
    return plane.embed(math.cos(angle), math.sin(angle))


def bob_setting(n_bases: int, n: int, plane: PlaneEmbedding = PLANE_PLUS_L) -> BlochVector:
    """Bob's direction for odd index ``n``: embed(cos(n*pi/2N), -sin(n*pi/2N))."""
    _validate_n(n_bases)
    if n % 2 != 1 or not 1 <= n <= 4 * n_bases - 1:
        raise InvalidInputError(
            f"Bob index must be odd in [1, {4 * n_bases - 1}], got {n}"
        )
    angle = n * math.pi / (2 * n_bases)
    return plane.embed(math.cos(angle), -math.sin(angle))


@dataclass(frozen=True)
class CoincidenceGroup:
    """One analyzer-pair group: base indices ``(a, b)`` and its four setting pairs.

    ``member_pairs`` lists ``(a,b), (a,b+2N), (a+2N,b), (a+2N,b+2N)`` — the
    four outcome slots realized by measuring the base pair and its antipodes.
    ``is_correlated_term`` marks the single group whose correlated probability
    (rather than its complement) enters the chained statistic.
    """

    a: int
    b: int
    member_pairs: tuple[tuple[int, int], ...]
    is_correlated_term: bool

    def __post_init__(self) -> None:
        if len(self.member_pairs) != 4:
            raise InvalidInputError(
                f"group ({self.a},{self.b}) must have 4 member pairs, "
                f"got {len(self.member_pairs)}"
            )

    @property
    def key(self) -> tuple[int, int]:
        return (self.a, self.b)


@dataclass(frozen=True)
class ChainedPlan:
    """Full measurement plan: index sets, their Bloch vectors, and group list."""

    n_bases: int
    alice_indices: tuple[int, ...]
    bob_indices: tuple[int, ...]
    vectors: dict[int, BlochVector]
    plane: PlaneEmbedding
    groups: tuple[CoincidenceGroup, ...]

    def vector(self, index: int) -> BlochVector:
        try:
            return self.vectors[index]
        except KeyError:
            raise InvalidInputError(f"index {index} is not part of this plan") from None

    def group(self, a: int, b: int) -> CoincidenceGroup:
        for g in self.groups:
            if g.key == (a, b):
                return g
        raise InvalidInputError(f"plan has no group ({a},{b})")


def _group_sequence(n_bases: int) -> list[tuple[int, int]]:
    """Group keys in plan order: (0, 2N-1) then the zig-zag of |a-b|=1 pairs."""
    keys = [(0, 2 * n_bases - 1)]
    for j in range(2 * n_bases - 1):
        a = 2 * ((j + 1) // 2)
        b = 2 * (j // 2) + 1
        keys.append((a, b))
    return keys


def build_plan(n_bases: int, plane: PlaneEmbedding = PLANE_PLUS_L) -> ChainedPlan:
    """Construct the ``2N``-group chained measurement plan for ``N`` bases per side."""
    _validate_n(n_bases)
    alice = tuple(range(0, 4 * n_bases, 2))
    bob = tuple(range(1, 4 * n_bases, 2))
    vectors: dict[int, BlochVector] = {}
    for m in alice:
        vectors[m] = alice_setting(n_bases, m, plane)
    for n in bob:
        vectors[n] = bob_setting(n_bases, n, plane)

    shift = 2 * n_bases
    groups = []
    for a, b in _group_sequence(n_bases):
        members = ((a, b), (a, b + shift), (a + shift, b), (a + shift, b + shift))
        groups.append(
            CoincidenceGroup(
                a=a,
                b=b,
                member_pairs=members,
                is_correlated_term=(a, b) == (0, 2 * n_bases - 1),
            )
        )
    return ChainedPlan(
        n_bases=n_bases,
        alice_indices=alice,
        bob_indices=bob,
        vectors=vectors,
        plane=plane,
        groups=tuple(groups),
    )
