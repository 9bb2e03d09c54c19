"""The mirror coordinate ring and its two multiplication engines.

The ring of functions on the mirror is spanned by p^i chi_{-n, ell1(n)} over
(n, i) in N x Z, where ell1 is the support function of the polygon and
chi_{m,k} denotes the character of index (m, k) in the cone
C = {(m, k) : <m, a> + k >= 0 for all a in A} (the regular functions of the
ambient toric variety), with p = chi_{0,1} - 1 inverted.

Two independent products:

* multiply: the closed form on the canonical basis,
  basis(n,i) * basis(n',i') = sum_j C(ell2, j) basis(n+n', i+i'+j) with
  ell2 = ell1(n) + ell1(n') - ell1(n+n') >= 0;
* oracle_multiply/canonicalize: raw character sums multiplied additively
  (chi_{m,k} chi_{m',k'} = chi_{m+m',k+k'}), then rewritten to the canonical
  basis via chi_{m,k} = chi_{m, ell1(-m)} (1+p)^{k - ell1(-m)}.

The agreement of the two engines on basis pairs is the computational content
of the mirror isomorphism and is what verify_mirror_iso checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence, Union

from .errors import NotRegular
from .lattice_geometry import Covector, HeightedPolygon, as_fraction

BasisIndex = tuple[Covector, int]  # (n, i) for p^i chi_{-n, ell1(n)}
Scalar = Union[int, str, Fraction]


@lru_cache(maxsize=None)
def _check_full_dim(points: tuple) -> bool:
    from .lattice_geometry import hull_doubled_area

    return hull_doubled_area(points) > 0


@lru_cache(maxsize=None)
def _ell1_cached(points: tuple, n: Covector) -> int:
    return max(n[0] * a[0] + n[1] * a[1] for a in points)


def ell1(poly: HeightedPolygon, n: Sequence[int]) -> int:
    """Support function of the polygon: max over a in A of <n, a>.

    Equals min{l : <-n, a> + l >= 0 for all a}, the least level l making
    chi_{-n, l} regular.
    """
    if not _check_full_dim(poly.points):
        poly.require_full_dimensional()
    return _ell1_cached(poly.points, (int(n[0]), int(n[1])))


def ell2(poly: HeightedPolygon, n: Sequence[int], np: Sequence[int]) -> int:
    """Subadditivity defect ell1(n) + ell1(n') - ell1(n+n'); always >= 0."""
    n = (int(n[0]), int(n[1]))
    np = (int(np[0]), int(np[1]))
    return (
        ell1(poly, n) + ell1(poly, np) - ell1(poly, (n[0] + np[0], n[1] + np[1]))
    )


def _clean(coeffs: dict) -> dict:
    return {k: v for k, v in coeffs.items() if v != 0}


@dataclass(frozen=True)
class MirrorElement:
    """Sparse exact-coefficient element on the canonical basis (n, i).

    The index (n, i) denotes p^i chi_{-n, ell1(n)}; the character level is
    always ell1(n) and is never stored.
    """

    coefficients: Mapping[BasisIndex, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        norm = {}
        for (n, i), c in dict(self.coefficients).items():
            key = ((int(n[0]), int(n[1])), int(i))
            val = as_fraction(c)
            if val != 0:
                norm[key] = norm.get(key, Fraction(0)) + val
        object.__setattr__(self, "coefficients", dict(_clean(norm)))

    @classmethod
    def basis(cls, n: Sequence[int], i: int, c: Scalar = 1) -> "MirrorElement":
        return cls({((int(n[0]), int(n[1])), int(i)): as_fraction(c)})

    @classmethod
    def unit(cls) -> "MirrorElement":
        return cls.basis((0, 0), 0)

    @classmethod
    def zero(cls) -> "MirrorElement":
        return cls({})

    def __add__(self, other: "MirrorElement") -> "MirrorElement":
        out = dict(self.coefficients)
        for k, v in other.coefficients.items():
            out[k] = out.get(k, Fraction(0)) + v
        return MirrorElement(_clean(out))

    def __sub__(self, other: "MirrorElement") -> "MirrorElement":
        return self + other.scale(-1)

    def scale(self, c: Scalar) -> "MirrorElement":
        c = as_fraction(c)
        return MirrorElement({k: c * v for k, v in self.coefficients.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MirrorElement)
            and self.coefficients == other.coefficients
        )

    def __hash__(self):
        return hash(frozenset(self.coefficients.items()))

    def items(self) -> Iterable[tuple[BasisIndex, Fraction]]:
        return sorted(self.coefficients.items())

    def __repr__(self):
        if not self.coefficients:
            return "MirrorElement(0)"
        parts = [f"{c}*b[{n},{i}]" for (n, i), c in self.items()]
        return "MirrorElement(" + " + ".join(parts) + ")"


def multiply(poly: HeightedPolygon, x: MirrorElement, y: MirrorElement) -> MirrorElement:
    """Closed-form product on the canonical basis, extended bilinearly.

    basis(n,i) * basis(n',i') = sum_{j=0}^{ell2} C(ell2, j) basis(n+n', i+i'+j).
    """
    out: dict[BasisIndex, Fraction] = {}
    for (n, i), cx in x.coefficients.items():
        for (np, ip), cy in y.coefficients.items():
            c = cx * cy
            m = ell2(poly, n, np)
            nsum = (n[0] + np[0], n[1] + np[1])
            for j in range(m + 1):
                key = (nsum, i + ip + j)
                out[key] = out.get(key, Fraction(0)) + c * comb(m, j)
    return MirrorElement(_clean(out))


# ---------------------------------------------------------------------------
# the independent character-sum engine

RawIndex = tuple[Covector, int, int]  # (m, k, i) for p^i chi_{m, k}


@dataclass(frozen=True)
class RawCharacterSum:
    """Sparse sum of p^i chi_{m,k} with every (m,k) in the cone C."""

    terms: Mapping[RawIndex, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        norm = {}
        for (m, k, i), c in dict(self.terms).items():
            key = ((int(m[0]), int(m[1])), int(k), int(i))
            val = as_fraction(c)
            if val != 0:
                norm[key] = norm.get(key, Fraction(0)) + val
        object.__setattr__(self, "terms", dict(_clean(norm)))

    @classmethod
    def character(cls, m: Sequence[int], k: int, i: int = 0, c: Scalar = 1):
        return cls({((int(m[0]), int(m[1])), int(k), int(i)): as_fraction(c)})

    def __add__(self, other: "RawCharacterSum") -> "RawCharacterSum":
        out = dict(self.terms)
        for key, v in other.terms.items():
            out[key] = out.get(key, Fraction(0)) + v
        return RawCharacterSum(_clean(out))

    def items(self):
        return sorted(self.terms.items())


def check_regular(poly: HeightedPolygon, x: RawCharacterSum) -> None:
    """Raise NotRegular unless every character index lies in the cone C."""
    for (m, k, _i) in x.terms:
        if k < ell1(poly, (-m[0], -m[1])):
            raise NotRegular(
                f"character ({m}, {k}) is outside the cone: level below {ell1(poly, (-m[0], -m[1]))}"
            )


def embed(poly: HeightedPolygon, x: MirrorElement) -> RawCharacterSum:
    """Rewrite a canonical-basis element as a raw character sum.

    basis(n, i) = p^i chi_{-n, ell1(n)}.
    """
    terms = {}
    for (n, i), c in x.coefficients.items():
        m = (-n[0], -n[1])
        terms[(m, ell1(poly, n), i)] = c
    return RawCharacterSum(terms)


def oracle_multiply(
    poly: HeightedPolygon, x: RawCharacterSum, y: RawCharacterSum
) -> RawCharacterSum:
    """Multiply raw character sums: characters add, p-powers add.

    chi_{m,k} chi_{m',k'} = chi_{m+m', k+k'}; products of cone elements stay in
    the cone. Raises NotRegular if an operand has an index outside the cone.
    """
    check_regular(poly, x)
    check_regular(poly, y)
    out: dict[RawIndex, Fraction] = {}
    for (m, k, i), cx in x.terms.items():
        for (mp, kp, ip), cy in y.terms.items():
            key = ((m[0] + mp[0], m[1] + mp[1]), k + kp, i + ip)
            out[key] = out.get(key, Fraction(0)) + cx * cy
    return RawCharacterSum(_clean(out))


def canonicalize(poly: HeightedPolygon, x: RawCharacterSum) -> MirrorElement:
    """Collect a raw character sum on the canonical basis.

    Each chi_{m,k} with slack d = k - ell1(-m) >= 0 rewrites as
    chi_{m, ell1(-m)} (1+p)^d, since chi_{0,1} = 1 + p; the binomial expansion
    lands on basis indices (n, i+j) with n = -m. Raises NotRegular when the
    slack is negative (the character is not a regular function).
    """
    check_regular(poly, x)
    out: dict[BasisIndex, Fraction] = {}
    for (m, k, i), c in x.terms.items():
        n = (-m[0], -m[1])
        d = k - ell1(poly, n)
        for j in range(d + 1):
            key = (n, i + j)
            out[key] = out.get(key, Fraction(0)) + c * comb(d, j)
    return MirrorElement(_clean(out))


def oracle_product(
    poly: HeightedPolygon, x: MirrorElement, y: MirrorElement
) -> MirrorElement:
    """The full second engine: embed, multiply raw, canonicalize."""
    return canonicalize(poly, oracle_multiply(poly, embed(poly, x), embed(poly, y)))


# ---------------------------------------------------------------------------
# the affine 3-space preset


def c3_preset() -> tuple[HeightedPolygon, dict[str, MirrorElement]]:
    """The standard-simplex model of the mirror ring with named generators.

    Returns the polygon A = {(0,0),(1,0),(0,1)} with zero heights and the name
    table x -> basis((1,0),0), y -> basis((0,1),0), z -> basis((-1,-1),0).
    In this model the mirror is the affine 3-space localized at xyz - 1, and
    the generators satisfy x*y*z = (1+p)^2 in the canonical basis.

    Level caveat: the natural character labels for x, y, z at level 0 (for
    example chi_{(0,-1),0} for y) are not in the cone C -- the canonical basis
    forces level ell1(n) = 1 on the two coordinate directions. The preset
    therefore fixes the generators by their basis indices and verifies the
    dictionary only through product relations.
    """
    poly = HeightedPolygon.create([(0, 0), (1, 0), (0, 1)], 0)
    names = {
        "x": MirrorElement.basis((1, 0), 0),
        "y": MirrorElement.basis((0, 1), 0),
        "z": MirrorElement.basis((-1, -1), 0),
    }
    return poly, names
