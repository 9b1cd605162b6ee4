"""Polyhedral cone combinatorics over an ambient lattice Z^n.

Cones are described by primitive integer ray generators. Facet
enumeration is deliberate brute force over generator subsets: the
largest instance this package ever needs is twelve rays in Z^10
(220 candidate subsets), far below the point where double-description
style algorithms would pay off.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable, Sequence

from .exact import (
    DimensionError,
    gcd_content,
    int_det,
    kernel_line,
    primitive_vector,
    rank,
    rref,
)

__all__ = [
    "Cone",
    "Facet",
    "Fan",
    "DegenerateConeError",
    "cone_dim",
    "enumerate_facets",
    "spans_cone",
    "is_basic",
]


class DegenerateConeError(ValueError):
    """The cone is not pointed in its span (it contains a line)."""


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone spanned by primitive integer generators.

    Generators must be nonzero, primitive, and pairwise distinct; since
    primitive vectors coincide exactly when they are positive multiples
    of each other, distinctness rules out duplicates up to rescaling.
    """

    ambient: int
    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if self.ambient <= 0:
            raise ValueError("ambient dimension must be positive")
        if not gens:
            raise ValueError("a cone needs at least one generator")
        seen = set()
        for g in gens:
            if len(g) != self.ambient:
                raise DimensionError("generator length does not match ambient dimension")
            content = gcd_content(g)
            if content == 0:
                raise ValueError("zero vector is not a valid ray generator")
            if content != 1:
                raise ValueError(f"generator {g} is not primitive")
            if g in seen:
                raise ValueError(f"duplicate generator {g}")
            seen.add(g)


def cone_dim(cone: Cone) -> int:
    """Dimension of the linear span of the cone."""
    return rank(cone.generators)


@dataclass(frozen=True)
class Facet:
    """A codimension-one face: primitive supporting covector plus the
    indices of the generators it vanishes on.

    The covector evaluates to zero on every incident generator and
    strictly positively on every other generator of the cone.
    """

    normal: tuple[int, ...]
    incident: frozenset[int]


def _rowspace_basis(gens: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    red, pivots = rref(gens)
    return [red[i] for i in range(len(pivots))]


def enumerate_facets(cone: Cone) -> list[Facet]:
    """All facets of a pointed cone of dimension at least two.

    Each candidate facet is cut out by a covector chosen inside the row
    space of the generators (so the answer does not depend on how the
    span sits in the ambient lattice), found as the one-dimensional
    kernel of a (dim-1)-subset of generators. One-sidedness over the
    remaining generators filters genuine facets; a generator on which
    every facet covector vanishes witnesses a line in the cone.
    """
    gens = cone.generators
    d = cone_dim(cone)
    if d <= 1:
        return []
    m = len(gens)
    full_dim = d == cone.ambient
    basis = None if full_dim else _rowspace_basis(gens)
    found: dict[tuple[int, ...], frozenset[int]] = {}
    for subset in combinations(range(m), d - 1):
        if full_dim:
            normal = kernel_line([gens[i] for i in subset], cone.ambient)
        else:
            constraint = [
                [sum(Fraction(gens[i][k]) * b[k] for k in range(cone.ambient)) for b in basis]
                for i in subset
            ]
            coeffs = kernel_line(constraint, d)
            if coeffs is None:
                normal = None
            else:
                vec = [
                    sum(coeffs[j] * basis[j][k] for j in range(d))
                    for k in range(cone.ambient)
                ]
                mult = lcm(*(x.denominator for x in vec))
                normal = primitive_vector([int(x * mult) for x in vec])
        if normal is None:
            continue
        values = [sum(a * b for a, b in zip(normal, g)) for g in gens]
        if any(v > 0 for v in values) and any(v < 0 for v in values):
            continue
        if all(v == 0 for v in values):
            continue
        if any(v < 0 for v in values):
            normal = tuple(-x for x in normal)
            values = [-v for v in values]
        found[normal] = frozenset(i for i, v in enumerate(values) if v == 0)
    for i, g in enumerate(gens):
        if all(sum(a * b for a, b in zip(normal, g)) == 0 for normal in found):
            raise DegenerateConeError(
                f"generator {g} lies on every supporting hyperplane; the cone is not pointed"
            )
    return [Facet(normal, found[normal]) for normal in sorted(found)]


def spans_cone(
    top_cones: Sequence[Iterable[int]],
    ray_indices: Iterable[int],
    ray_count: int,
) -> bool:
    """Whether a set of ray indices is contained in some top-dimensional cone."""
    wanted = frozenset(ray_indices)
    for i in wanted:
        if not 0 <= i < ray_count:
            raise IndexError(f"unknown ray index {i}")
    return any(wanted <= frozenset(c) for c in top_cones)


def is_basic(cone: Cone, lattice_dim: int | None = None) -> bool:
    """Whether a simplicial cone's generators extend to a lattice basis.

    For a full-dimensional cone this is |det| = 1; for lower-dimensional
    cones the gcd of all maximal minors must be 1.
    """
    if lattice_dim is not None and lattice_dim != cone.ambient:
        raise DimensionError("lattice dimension does not match ambient dimension")
    d = cone_dim(cone)
    if len(cone.generators) != d:
        raise ValueError("basicness is only defined for simplicial cones")
    if d == cone.ambient:
        return abs(int_det(cone.generators)) == 1
    minors = [
        int_det([[g[c] for c in cols] for g in cone.generators])
        for cols in combinations(range(cone.ambient), d)
    ]
    return gcd_content(minors) == 1


@dataclass(frozen=True)
class Fan:
    """A simplicial fan given by its rays and top-dimensional cones.

    Every top cone must be full-dimensional, simplicial, and basic (its
    rays form a lattice basis); both intersection engines rely on this.
    """

    rays: tuple[tuple[int, ...], ...]
    top_cones: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        tops = tuple(frozenset(c) for c in self.top_cones)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "top_cones", tops)
        if not rays:
            raise ValueError("a fan needs at least one ray")
        n = len(rays[0])
        seen = set()
        for r in rays:
            if len(r) != n:
                raise DimensionError("rays of mixed ambient dimension")
            if gcd_content(r) != 1:
                raise ValueError(f"ray {r} is not primitive")
            if r in seen:
                raise ValueError(f"duplicate ray {r}")
            seen.add(r)
        for c in tops:
            if not all(0 <= i < len(rays) for i in c):
                raise IndexError("top cone references an unknown ray")
            if len(c) != n:
                raise ValueError("top cones must be simplicial and full-dimensional")
            if abs(int_det([rays[i] for i in sorted(c)])) != 1:
                raise ValueError(f"top cone {sorted(c)} is not basic")

    @property
    def ambient(self) -> int:
        return len(self.rays[0])

    def spans(self, ray_indices: Iterable[int]) -> bool:
        return spans_cone(self.top_cones, ray_indices, len(self.rays))
