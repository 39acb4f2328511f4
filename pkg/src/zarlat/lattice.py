"""Integral quadratic lattices and their discriminant invariants.

Provides the standard even blocks (hyperbolic plane, E8(-1), A2(-1),
rank-one lattices), direct sums, discriminant groups computed through Smith
normal form, the second-cohomology lattices of the four known deformation
families of irreducible symplectic manifolds, the negativity bounds
``4 * Card`` / ``4 * exponent`` derived from the discriminant group, and the
integrality test for the dual curve class ``-2 q(E, .) / q(E)`` of a
candidate prime exceptional class ``E``.

The published per-family values (discriminant group, its exponent, largest
negative square of a prime exceptional divisor) are catalog data, stored
verbatim; the lattice-theoretic columns are recomputed from the Gram
matrices so the two can be cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterable, Optional, Sequence

from .errors import DomainError, ShapeError, SingularMatrixError
from .linalg import RationalMatrix, det, smith_normal_form


@dataclass(frozen=True)
class IntegralLattice:
    """A free Z-module with an integral symmetric bilinear form."""

    name: str
    gram: RationalMatrix

    def __post_init__(self):
        if not self.gram.is_symmetric():
            raise ShapeError(f"lattice {self.name!r}: Gram matrix must be symmetric")
        if not self.gram.is_integral():
            raise DomainError(f"lattice {self.name!r}: Gram matrix must be integral")

    @property
    def rank(self) -> int:
        return self.gram.nrows

    def determinant(self) -> int:
        return int(det(self.gram))

    def is_even(self) -> bool:
        return all(self.gram[i, i] % 2 == 0 for i in range(self.rank))

    def pairing(self, u: Sequence[int], v: Sequence[int]) -> int:
        gu = self.gram.matvec(u)
        return int(sum(Fraction(x) * g for x, g in zip(v, gu)))

    def square(self, v: Sequence[int]) -> int:
        return self.pairing(v, v)

    def to_json_dict(self) -> dict:
        return {"name": self.name, "gram": [[int(x) for x in row] for row in self.gram.entries]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "IntegralLattice":
        return cls(name=str(data["name"]), gram=RationalMatrix.symmetric(data["gram"]))


_E8_EDGES = ((0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7))


def _e8_minus_rows() -> list[list[int]]:
    rows = [[0] * 8 for _ in range(8)]
    for i in range(8):
        rows[i][i] = -2
    for i, j in _E8_EDGES:
        rows[i][j] = rows[j][i] = 1
    return rows


def hyperbolic_plane() -> IntegralLattice:
    """The even unimodular rank-two block with Gram [[0, 1], [1, 0]]."""
    return IntegralLattice("U", RationalMatrix.symmetric([[0, 1], [1, 0]]))


def e8_minus() -> IntegralLattice:
    """The negative definite E8 lattice (negated Cartan matrix, det 1)."""
    return IntegralLattice("E8(-1)", RationalMatrix.symmetric(_e8_minus_rows()))


def a2_minus() -> IntegralLattice:
    """The negative definite A2 lattice, Gram [[-2, 1], [1, -2]], det 3."""
    return IntegralLattice("A2(-1)", RationalMatrix.symmetric([[-2, 1], [1, -2]]))


def rank_one(k: int, allow_odd: bool = False) -> IntegralLattice:
    """Rank-one lattice generated by a vector of square ``k``.

    ``k`` must be nonzero and, matching the even lattices this catalog
    serves, even; pass ``allow_odd=True`` to experiment with odd squares.
    """
    k = int(k)
    if k == 0:
        raise DomainError("rank-one lattice needs a nonzero square")
    if k % 2 != 0 and not allow_odd:
        raise DomainError(f"rank-one square {k} is odd; pass allow_odd=True to permit it")
    return IntegralLattice(f"<{k}>", RationalMatrix.symmetric([[k]]))


_BLOCK_NAMES = ("U", "E8_minus", "A2_minus", "rank1")


def block(name: str, parameter: Optional[int] = None) -> IntegralLattice:
    """Catalog lookup: ``U``, ``E8_minus``, ``A2_minus`` or ``rank1`` with k."""
    if name == "U":
        return hyperbolic_plane()
    if name == "E8_minus":
        return e8_minus()
    if name == "A2_minus":
        return a2_minus()
    if name == "rank1":
        if parameter is None:
            raise DomainError("rank1 block needs its square as a parameter")
        return rank_one(parameter)
    raise DomainError(f"unknown block {name!r}; expected one of {_BLOCK_NAMES}")


def direct_sum(parts: Iterable[IntegralLattice]) -> IntegralLattice:
    """Orthogonal direct sum; Gram matrices are placed block-diagonally."""
    parts = list(parts)
    if not parts:
        raise DomainError("direct sum needs at least one summand")
    if len(parts) == 1:
        return parts[0]
    total = sum(p.rank for p in parts)
    rows = [[0] * total for _ in range(total)]
    offset = 0
    for part in parts:
        for i in range(part.rank):
            for j in range(part.rank):
                rows[offset + i][offset + j] = int(part.gram[i, j])
        offset += part.rank
    name = " + ".join(p.name for p in parts)
    return IntegralLattice(name, RationalMatrix.symmetric(rows))


@dataclass(frozen=True)
class DiscriminantGroup:
    """The finite quotient (dual lattice)/(lattice) of a nonsingular lattice.

    ``elementary_divisors`` are the invariant factors > 1 in divisibility
    order, so the group is the product of Z/d for d in that tuple.
    """

    elementary_divisors: tuple[int, ...]
    cardinality: int
    exponent: int

    def is_cyclic(self) -> bool:
        return len(self.elementary_divisors) <= 1

    def describe(self) -> str:
        return format_group(self.elementary_divisors)


def format_group(divisors: Sequence[int]) -> str:
    if not divisors:
        return "1"
    return " x ".join(f"Z/{d}" for d in divisors)


def discriminant_group(lattice: IntegralLattice) -> DiscriminantGroup:
    """Invariant factors of the discriminant group via Smith normal form."""
    snf = smith_normal_form(lattice.gram)
    if any(d == 0 for d in snf.diagonal):
        raise SingularMatrixError(f"lattice {lattice.name!r} is degenerate")
    divisors = tuple(d for d in snf.diagonal if d > 1)
    cardinality = prod(divisors) if divisors else 1
    assert cardinality == abs(lattice.determinant())
    return DiscriminantGroup(
        elementary_divisors=divisors,
        cardinality=cardinality,
        exponent=divisors[-1] if divisors else 1,
    )


def negativity_bound(lattice: IntegralLattice) -> int:
    """General lower-bound magnitude for prime exceptional squares: 4 * Card."""
    return 4 * discriminant_group(lattice).cardinality


def negativity_bound_refined(lattice: IntegralLattice) -> int:
    """Refinement using the largest element order instead of the group order."""
    return 4 * discriminant_group(lattice).exponent


@dataclass(frozen=True)
class DualCurveClass:
    """Outcome of the dual-curve integrality test for a class E.

    ``dual_class`` is the rational vector representing -2 q(E, .) / q(E) in
    the dual basis; ``integral`` says whether it lies in the dual lattice's
    integral structure, i.e. whether q(E) divides 2 q(E, basis vector) for
    every basis vector.
    """

    integral: bool
    dual_class: tuple[Fraction, ...]
    square: int
    failing_index: Optional[int]


def dual_curve_integrality(lattice: IntegralLattice, coords: Sequence[int]) -> DualCurveClass:
    """Test whether -2 q(E, .) / q(E) takes integer values on the lattice."""
    vec = [int(c) for c in coords]
    if len(vec) != lattice.rank:
        raise ShapeError(f"class has {len(vec)} coordinates, lattice rank is {lattice.rank}")
    ge = lattice.gram.matvec(vec)
    square = int(sum(Fraction(c) * g for c, g in zip(vec, ge)))
    if square == 0:
        raise DomainError("isotropic class: q(E) = 0, the dual curve class is undefined")
    dual = tuple(Fraction(-2) * g / square for g in ge)
    failing = next((i for i, x in enumerate(dual) if x.denominator != 1), None)
    return DualCurveClass(
        integral=failing is None, dual_class=dual, square=square, failing_index=failing
    )


PRESET_TAGS = ("K3n", "Kummer", "OG6", "OG10")

_TAG_ALIASES = {
    "k3n": "K3n",
    "k3": "K3n",
    "kummer": "Kummer",
    "kummern": "Kummer",
    "og6": "OG6",
    "og10": "OG10",
}


@dataclass(frozen=True)
class DeformationPreset:
    """Second-cohomology lattice of one deformation family, plus its
    published discriminant data and extremal negative square."""

    tag: str
    n: Optional[int]
    half_dim: int
    lattice: IntegralLattice
    b2: int
    h11: int
    published_group: tuple[int, ...]
    published_exponent: int
    published_max_square: int

    @property
    def display_name(self) -> str:
        if self.tag == "K3n":
            return f"K3^[{self.n}]"
        if self.tag == "Kummer":
            return f"Kummer {self.n}"
        return self.tag

    def published_group_name(self) -> str:
        return format_group(self.published_group)


def normalize_tag(tag: str) -> str:
    key = tag.strip().lower().replace("_", "").replace("-", "")
    if key not in _TAG_ALIASES:
        raise DomainError(f"unknown deformation type {tag!r}; expected one of {PRESET_TAGS}")
    return _TAG_ALIASES[key]


def preset(tag: str, n: Optional[int] = None) -> DeformationPreset:
    """Build the catalog entry for one deformation family.

    ``n`` (the half-dimension) is required and must be >= 2 for ``K3n`` and
    ``Kummer``; it must be omitted for ``OG6`` and ``OG10``.
    """
    tag = normalize_tag(tag)
    u3 = [hyperbolic_plane()] * 3
    if tag in ("K3n", "Kummer"):
        if n is None or n < 2:
            raise DomainError(f"{tag} needs an integer parameter n >= 2, got {n!r}")
        n = int(n)
        if tag == "K3n":
            lat = direct_sum(u3 + [e8_minus(), e8_minus(), rank_one(-(2 * n - 2))])
            published = (2 * n - 2,)
            square = 8 * n - 8
        else:
            lat = direct_sum(u3 + [rank_one(-(2 * n + 2))])
            published = (2 * n + 2,)
            square = 8 * n + 8
        half_dim = n
    else:
        if n is not None:
            raise DomainError(f"{tag} takes no parameter, got n={n!r}")
        if tag == "OG6":
            lat = direct_sum(u3 + [rank_one(-2), rank_one(-2)])
            published = (2, 2)
            square = 8
            half_dim = 3
        else:
            lat = direct_sum(u3 + [e8_minus(), e8_minus(), a2_minus()])
            published = (3,)
            square = 6
            half_dim = 5
    b2 = lat.rank
    return DeformationPreset(
        tag=tag,
        n=n,
        half_dim=half_dim,
        lattice=lat,
        b2=b2,
        h11=b2 - 2,
        published_group=published,
        published_exponent=published[-1],
        published_max_square=square,
    )
