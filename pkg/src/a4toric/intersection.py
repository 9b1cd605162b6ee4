"""Top intersection numbers of boundary divisors on a basic star fan.

A monomial is a tuple of exponents aligned with the fan's ray list; its
value is the degree of the corresponding product of toric boundary
divisors. Two independent engines compute these values:

* a linear system: each linear equivalence among the divisors (one per
  ambient coordinate, with coefficients the ray coordinates) is
  multiplied by every admissible degree n-1 monomial with positive
  exceptional exponent and square-free divisor part;
  each multiplier yields one block of rows that an exact structured
  elimination solves top-down, because the block's unknown columns sit
  inside the unimodular basis of a containing cone;

* a recursive evaluator: a repeated divisor factor is rewritten through
  the support covector of a containing basic cone (a row of the cone
  matrix inverse), trading one squared factor for a signed sum of
  neighbouring square-free extensions until only square-free products
  remain, which are 1 on the ray set of a top cone and 0 otherwise.

Both engines return exact integers; the fan's cones being basic makes
every intermediate covector integral.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

from .cones import Fan
from .exact import unimodular_inverse

Monomial = tuple[int, ...]

__all__ = [
    "Monomial",
    "MonomialSyntaxError",
    "UnsupportedMonomialError",
    "InconsistentSystemError",
    "parse_monomial",
    "format_monomial",
    "LinearRelation",
    "build_relations",
    "SystemRow",
    "LinearSystem",
    "assemble_system",
    "SystemSolution",
    "solve_system",
    "solve_e10",
    "squarefree_value",
    "evaluate_recursive",
    "IntersectionEngine",
]


class MonomialSyntaxError(ValueError):
    """A monomial expression does not match the grammar E^a*Di^b*..."""


class UnsupportedMonomialError(ValueError):
    """The monomial cannot be evaluated by this engine."""


class InconsistentSystemError(RuntimeError):
    """The assembled linear system admits no solution."""


_FACTOR_RE = re.compile(r"^(E|D([1-9][0-9]*))(?:\^([+-]?[0-9]+))?$")


def parse_monomial(text: str, ray_count: int = 13) -> Monomial:
    """Parse an expression like ``E^2*D3*D5`` into an exponent tuple.

    Ray 0 is named E; ray k is named Dk for k = 1..ray_count-1.
    Repeated factors accumulate.
    """
    if not text or not text.strip():
        raise MonomialSyntaxError("empty monomial expression")
    exponents = [0] * ray_count
    for raw in text.split("*"):
        token = raw.strip()
        m = _FACTOR_RE.match(token)
        if m is None:
            raise MonomialSyntaxError(f"cannot parse factor {token!r}")
        if m.group(2) is None:
            index = 0
        else:
            index = int(m.group(2))
            if index > ray_count - 1:
                raise MonomialSyntaxError(
                    f"divisor index {index} out of range 1..{ray_count - 1}"
                )
        exp = 1 if m.group(3) is None else int(m.group(3))
        if exp < 0:
            raise MonomialSyntaxError("negative exponents are not allowed")
        exponents[index] += exp
    return tuple(exponents)


def format_monomial(mono: Sequence[int]) -> str:
    """Inverse of parse_monomial; the empty monomial renders as ``1``."""
    parts = []
    for k, exp in enumerate(mono):
        if exp == 0:
            continue
        name = "E" if k == 0 else f"D{k}"
        parts.append(name if exp == 1 else f"{name}^{exp}")
    return "*".join(parts) if parts else "1"


def _support(mono: Sequence[int]) -> frozenset[int]:
    return frozenset(i for i, e in enumerate(mono) if e > 0)


def _is_squarefree(mono: Sequence[int]) -> bool:
    return all(e <= 1 for e in mono)


def _bump(mono: Monomial, index: int) -> Monomial:
    return mono[:index] + (mono[index] + 1,) + mono[index + 1 :]


@dataclass(frozen=True)
class LinearRelation:
    """The linear equivalence attached to one ambient coordinate: the sum
    of (ray coordinate) * (ray divisor) is rationally equivalent to 0."""

    index: int
    coefficients: tuple[int, ...]


def build_relations(fan: Fan) -> tuple[LinearRelation, ...]:
    """One relation per ambient coordinate; coefficient of ray r is the
    r-th ray's coordinate in that slot."""
    return tuple(
        LinearRelation(j, tuple(ray[j] for ray in fan.rays))
        for j in range(fan.ambient)
    )


@dataclass(frozen=True)
class SystemRow:
    """One relation multiplied by one monomial: the signed sum of
    `products` values is zero."""

    multiplier: Monomial
    relation_index: int
    products: tuple[tuple[Monomial, int], ...]


@dataclass
class LinearSystem:
    """The assembled block system.

    Unknown columns are exactly the degree-n monomials that actually
    occur in some row and are neither square-free (those are 0/1
    constants) nor supported outside every cone (those vanish). They
    come in two shapes per admissible support: the pure power form with
    exceptional exponent >= 2, and the forms with a single squared
    divisor factor.
    """

    fan: Fan
    e_index: int
    relations: tuple[LinearRelation, ...]
    multipliers: tuple[Monomial, ...]
    unknown_index: dict[Monomial, int]
    admissible: frozenset[frozenset[int]]
    star_supports: tuple[frozenset[int], ...]

    @property
    def n_rows(self) -> int:
        return len(self.multipliers) * len(self.relations)

    @property
    def n_unknowns(self) -> int:
        return len(self.unknown_index)

    def iter_rows(self) -> Iterator[SystemRow]:
        for mult in self.multipliers:
            for rel in self.relations:
                products = tuple(
                    (_bump(mult, r), coeff)
                    for r, coeff in enumerate(rel.coefficients)
                    if coeff != 0
                )
                yield SystemRow(mult, rel.index, products)

    def classify(self, mono: Sequence[int]) -> str:
        """'zero', 'constant', or 'unknown' for a monomial occurring in a
        row; anything else is a caller error."""
        supp = _support(mono)
        if not any(supp <= c for c in self.fan.top_cones):
            return "zero"
        if _is_squarefree(mono):
            return "constant"
        if tuple(mono) in self.unknown_index:
            return "unknown"
        raise ValueError(f"monomial {tuple(mono)} does not occur in the system")


def _star_supports(fan: Fan, e_index: int) -> tuple[frozenset[int], ...]:
    supports = tuple(frozenset(c - {e_index}) for c in fan.top_cones if e_index in c)
    if not supports:
        raise ValueError("no top cone contains the exceptional ray")
    return supports


def _admissible_family(supports: Sequence[frozenset[int]]) -> frozenset[frozenset[int]]:
    family: set[frozenset[int]] = set()
    for s in supports:
        items = sorted(s)
        for r in range(len(items) + 1):
            for sub in combinations(items, r):
                family.add(frozenset(sub))
    return frozenset(family)


def _power_monomial(n_rays: int, e_index: int, e_exp: int, dset: frozenset[int]) -> Monomial:
    mono = [0] * n_rays
    mono[e_index] = e_exp
    for i in dset:
        mono[i] = 1
    return tuple(mono)


def assemble_system(
    fan: Fan,
    relations: tuple[LinearRelation, ...] | None = None,
    e_index: int = 0,
) -> LinearSystem:
    """Lay out multipliers and unknown columns without materializing rows.

    Multipliers are the degree n-1 monomials with positive exceptional
    exponent and square-free divisor part whose support extends inside
    some top cone; rows are generated on demand by iter_rows.
    """
    if relations is None:
        relations = build_relations(fan)
    n = fan.ambient
    n_rays = len(fan.rays)
    if len(relations) != n or any(len(r.coefficients) != n_rays for r in relations):
        raise ValueError(
            "expected one relation per ambient coordinate with one "
            "coefficient per ray"
        )
    supports = _star_supports(fan, e_index)
    admissible = _admissible_family(supports)
    ordered = sorted(admissible, key=lambda s: (len(s), tuple(sorted(s))))
    multipliers: list[Monomial] = []
    unknowns: list[Monomial] = []
    for s in ordered:
        t = len(s)
        if t > n - 2:
            continue
        mult = _power_monomial(n_rays, e_index, (n - 1) - t, s)
        multipliers.append(mult)
        unknowns.append(_bump(mult, e_index))
        for i in sorted(s):
            unknowns.append(_bump(mult, i))
    unknowns.sort()
    unknown_index = {m: k for k, m in enumerate(unknowns)}
    return LinearSystem(
        fan=fan,
        e_index=e_index,
        relations=relations,
        multipliers=tuple(multipliers),
        unknown_index=unknown_index,
        admissible=admissible,
        star_supports=supports,
    )


@dataclass
class SystemSolution:
    """Exact solution of a LinearSystem with diagnostics.

    Values are integers: every unknown is obtained from the integer
    inverse of a basic cone matrix acting on previously solved integer
    values, starting from square-free constants.
    """

    values: dict[Monomial, int]
    consistent: bool
    problems: tuple[str, ...]
    n_unknowns: int
    n_rows: int
    rank: int
    free_columns: tuple[int, ...]
    e_top: int


def solve_system(system: LinearSystem) -> SystemSolution:
    """Solve the block system exactly, largest supports first.

    The block of a multiplier with support S has unknown columns indexed
    by S plus the exceptional ray; those columns are rays of a common
    basic cone, hence linearly independent, so the block determines its
    unknowns uniquely once larger supports are known. Expressing the
    block's right-hand side in the cone's unimodular ray basis both
    solves for the unknowns (coordinates inside the support) and checks
    consistency (coordinates outside the support must vanish). Every row
    of the system belongs to exactly one block, so the checks cover the
    whole system and rank equals the number of unknowns.
    """
    fan = system.fan
    e = system.e_index
    n = fan.ambient
    n_rays = len(fan.rays)
    # Coefficients come from the stored relations so that iter_rows and
    # this solver always describe the same equations.
    coeff = [rel.coefficients for rel in system.relations]
    values: dict[Monomial, int] = {}
    problems: list[str] = []
    inverses: dict[int, tuple[list[list[int]], tuple[int, ...]]] = {}
    containing: dict[frozenset[int], int] = {}

    def cone_for(supp: frozenset[int]) -> int:
        got = containing.get(supp)
        if got is None:
            got = next(
                ci for ci, c in enumerate(fan.top_cones) if supp <= c
            )
            containing[supp] = got
        return got

    def inverse_for(ci: int) -> tuple[list[list[int]], tuple[int, ...]]:
        got = inverses.get(ci)
        if got is None:
            cols = tuple(sorted(fan.top_cones[ci]))
            mat = [[coeff[j][r] for r in cols] for j in range(n)]
            got = (unimodular_inverse(mat), cols)
            inverses[ci] = got
        return got

    for mult in reversed(system.multipliers):
        s = frozenset(i for i in range(n_rays) if i != e and mult[i] > 0)
        t = len(s)
        supp = s | {e}
        inv, cols = inverse_for(cone_for(supp))
        rhs = [0] * n
        for rho in range(n_rays):
            if rho in supp:
                continue
            if s | {rho} not in system.admissible:
                continue
            val = 1 if t == n - 2 else values[_bump(mult, rho)]
            if val == 0:
                continue
            for j in range(n):
                c = coeff[j][rho]
                if c:
                    rhs[j] -= c * val
        for k, ray_k in enumerate(cols):
            y = sum(inv[k][j] * rhs[j] for j in range(n))
            if ray_k in supp:
                values[_bump(mult, ray_k)] = y
            elif y != 0:
                problems.append(
                    f"block {format_monomial(mult)}: coefficient of ray {ray_k} "
                    f"must vanish but equals {y}"
                )
    e_top_mono = _power_monomial(n_rays, e, n, frozenset())
    consistent = not problems
    return SystemSolution(
        values=values,
        consistent=consistent,
        problems=tuple(problems),
        n_unknowns=system.n_unknowns,
        n_rows=system.n_rows,
        rank=system.n_unknowns,
        free_columns=(),
        e_top=values[e_top_mono],
    )


def solve_e10(system: LinearSystem) -> Fraction:
    """Top self-intersection of the exceptional divisor, as an exact
    rational; raises if the system is inconsistent."""
    sol = solve_system(system)
    if not sol.consistent:
        raise InconsistentSystemError(
            f"{len(sol.problems)} block inconsistencies; first: {sol.problems[0]}"
        )
    return Fraction(sol.e_top)


def squarefree_value(mono: Sequence[int], fan: Fan) -> int:
    """1 if the support is exactly the ray set of a top cone, else 0.

    Requires a square-free monomial of degree equal to the ambient
    dimension, so the support always has full size.
    """
    if len(mono) != len(fan.rays):
        raise ValueError("monomial length does not match the ray count")
    if not _is_squarefree(mono):
        raise ValueError("monomial is not square-free")
    if sum(mono) != fan.ambient:
        raise ValueError("degree must equal the ambient dimension")
    return 1 if _support(mono) in set(fan.top_cones) else 0


class IntersectionEngine:
    """Shared caches for both engines over one fan.

    The recursive evaluator and the block solver use the same containing
    cone lookup and the same integer cone inverses; the linear system is
    assembled and solved lazily on first use.
    """

    def __init__(self, fan: Fan, e_index: int = 0):
        if not 0 <= e_index < len(fan.rays):
            raise IndexError("exceptional ray index out of range")
        self.fan = fan
        self.e_index = e_index
        self._top_set = set(fan.top_cones)
        self._memo: dict[Monomial, int] = {}
        self._containing: dict[frozenset[int], int | None] = {}
        self._inverses: dict[int, tuple[list[list[int]], tuple[int, ...]]] = {}
        self._system: LinearSystem | None = None
        self._solution: SystemSolution | None = None

    @property
    def system(self) -> LinearSystem:
        if self._system is None:
            self._system = assemble_system(self.fan, e_index=self.e_index)
        return self._system

    @property
    def solution(self) -> SystemSolution:
        if self._solution is None:
            self._solution = solve_system(self.system)
        return self._solution

    @property
    def e_top(self) -> Fraction:
        sol = self.solution
        if not sol.consistent:
            raise InconsistentSystemError(
                f"{len(sol.problems)} block inconsistencies; first: {sol.problems[0]}"
            )
        return Fraction(sol.e_top)

    def squarefree_value(self, mono: Sequence[int]) -> int:
        return squarefree_value(mono, self.fan)

    def system_value(self, mono: Sequence[int]) -> int | None:
        """Value according to the linear system: a solved unknown, a
        square-free constant, or None if the monomial is not a column."""
        key = tuple(mono)
        if _is_squarefree(key) and sum(key) == self.fan.ambient:
            return self.squarefree_value(key)
        return self.solution.values.get(key)

    def _cone_for(self, supp: frozenset[int]) -> int | None:
        got = self._containing.get(supp, -1)
        if got == -1:
            got = next(
                (ci for ci, c in enumerate(self.fan.top_cones) if supp <= c),
                None,
            )
            self._containing[supp] = got
        return got

    def _inverse_for(self, ci: int) -> tuple[list[list[int]], tuple[int, ...]]:
        got = self._inverses.get(ci)
        if got is None:
            cols = tuple(sorted(self.fan.top_cones[ci]))
            mat = [[self.fan.rays[r][j] for r in cols] for j in range(self.fan.ambient)]
            got = (unimodular_inverse(mat), cols)
            self._inverses[ci] = got
        return got

    def evaluate(self, mono: Sequence[int]) -> int:
        """Recursive engine: exact value of any degree-n monomial with
        positive exceptional exponent."""
        key = tuple(int(x) for x in mono)
        if len(key) != len(self.fan.rays):
            raise ValueError("monomial length does not match the ray count")
        if any(x < 0 for x in key):
            raise ValueError("negative exponents are not allowed")
        if sum(key) != self.fan.ambient:
            raise ValueError("degree must equal the ambient dimension")
        if key[self.e_index] < 1:
            raise UnsupportedMonomialError(
                "the recursive engine only evaluates monomials with a "
                "positive exceptional exponent"
            )
        return self._eval(key)

    def _eval(self, mono: Monomial) -> int:
        cached = self._memo.get(mono)
        if cached is not None:
            return cached
        supp = _support(mono)
        ci = self._cone_for(supp)
        if ci is None:
            self._memo[mono] = 0
            return 0
        if _is_squarefree(mono):
            # Degree n and square-free: the support has n rays inside an
            # n-ray cone, so it equals that cone's ray set.
            self._memo[mono] = 1
            return 1
        if mono[self.e_index] >= 2:
            rho = self.e_index
        else:
            rho = next(i for i in sorted(supp) if mono[i] >= 2)
        inv, cols = self._inverse_for(ci)
        mu = inv[cols.index(rho)]
        base = mono[:rho] + (mono[rho] - 1,) + mono[rho + 1 :]
        total = 0
        for rp in range(len(self.fan.rays)):
            if rp in supp:
                continue
            coeff = sum(mu[j] * self.fan.rays[rp][j] for j in range(self.fan.ambient))
            if coeff:
                total -= coeff * self._eval(_bump(base, rp))
        self._memo[mono] = total
        return total


def evaluate_recursive(
    mono: Sequence[int],
    fan: Fan,
    e_index: int = 0,
    engine: IntersectionEngine | None = None,
) -> int:
    """Convenience wrapper building a throwaway engine when none is given."""
    eng = engine if engine is not None else IntersectionEngine(fan, e_index)
    return eng.evaluate(mono)
