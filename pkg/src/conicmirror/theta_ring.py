"""The theta ring on basis N x Z and the isomorphism onto the mirror ring.

The ring is the free module on generators p_{n,i}, (n,i) in N x Z, with the
commutative product

    p_{n,i} p_{n',i'} = sum_{j=0}^{m} C(m, j) p_{n+n', i+i'+j},
    m = ell2(n, n'),

all structure constants being the positive binomial counts. The map
p_{n,i} -> p^i chi_{-n, ell1(n)} is an index-identity bijection onto the
canonical mirror basis; verify_mirror_iso checks the homomorphism property
exhaustively against the independent character-sum engine of mirror_ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence, Union

from .lattice_geometry import Covector, HeightedPolygon, as_fraction
from .mirror_ring import (
    MirrorElement,
    ell2,
    oracle_product,
)

ThetaGen = tuple[Covector, int]  # (n, i)
Scalar = Union[int, str, Fraction]


def _clean(coeffs: dict) -> dict:
    return {k: v for k, v in coeffs.items() if v != 0}


@dataclass(frozen=True)
class ThetaElement:
    """Sparse exact-coefficient element on the generators p_{n,i}."""

    coefficients: Mapping[ThetaGen, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        norm = {}
        for (n, i), c in dict(self.coefficients).items():
            key = ((int(n[0]), int(n[1])), int(i))
            val = as_fraction(c)
            if val != 0:
                norm[key] = norm.get(key, Fraction(0)) + val
        object.__setattr__(self, "coefficients", dict(_clean(norm)))

    @classmethod
    def basis(cls, n: Sequence[int], i: int, c: Scalar = 1) -> "ThetaElement":
        return cls({((int(n[0]), int(n[1])), int(i)): as_fraction(c)})

    @classmethod
    def unit(cls) -> "ThetaElement":
        return cls.basis((0, 0), 0)

    @classmethod
    def zero(cls) -> "ThetaElement":
        return cls({})

    def __add__(self, other: "ThetaElement") -> "ThetaElement":
        out = dict(self.coefficients)
        for k, v in other.coefficients.items():
            out[k] = out.get(k, Fraction(0)) + v
        return ThetaElement(_clean(out))

    def __sub__(self, other: "ThetaElement") -> "ThetaElement":
        return self + other.scale(-1)

    def scale(self, c: Scalar) -> "ThetaElement":
        c = as_fraction(c)
        return ThetaElement({k: c * v for k, v in self.coefficients.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ThetaElement)
            and self.coefficients == other.coefficients
        )

    def __hash__(self):
        return hash(frozenset(self.coefficients.items()))

    def items(self) -> Iterable[tuple[ThetaGen, Fraction]]:
        return sorted(self.coefficients.items())

    def support_n(self) -> set[Covector]:
        return {n for (n, _i) in self.coefficients}

    def __repr__(self):
        if not self.coefficients:
            return "ThetaElement(0)"
        parts = [f"{c}*p[{n},{i}]" for (n, i), c in self.items()]
        return "ThetaElement(" + " + ".join(parts) + ")"


def theta_multiply(
    poly: HeightedPolygon, x: ThetaElement, y: ThetaElement
) -> ThetaElement:
    """Bilinear extension of the binomial structure constants."""
    out: dict[ThetaGen, Fraction] = {}
    for (n, i), cx in x.coefficients.items():
        for (np, ip), cy in y.coefficients.items():
            c = cx * cy
            m = ell2(poly, n, np)
            nsum = (n[0] + np[0], n[1] + np[1])
            for j in range(m + 1):
                key = (nsum, i + ip + j)
                out[key] = out.get(key, Fraction(0)) + c * comb(m, j)
    return ThetaElement(_clean(out))


def mir(poly: HeightedPolygon, x: ThetaElement) -> MirrorElement:
    """p_{n,i} -> p^i chi_{-n, ell1(n)}: index-identity onto the mirror basis."""
    return MirrorElement(dict(x.coefficients))


def mir_inverse(poly: HeightedPolygon, x: MirrorElement) -> ThetaElement:
    return ThetaElement(dict(x.coefficients))


@dataclass(frozen=True)
class MirrorIsoReport:
    """Outcome of the exhaustive two-engine comparison."""

    bound_n: int
    bound_i: int
    pairs_checked: int
    failures: tuple[tuple[ThetaGen, ThetaGen], ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_mirror_iso(
    poly: HeightedPolygon, bound_n: int, bound_i: int
) -> MirrorIsoReport:
    """Check mir is a ring map on all basis pairs with |n|_inf and |i| bounded.

    For each ordered pair of generators, the theta product is pushed through
    mir and compared with the character-sum engine's product of the images
    (embed, multiply raw characters, canonicalize). Every failing pair is
    reported; mir is a ring isomorphism exactly when there are none.
    """
    if bound_n < 1 or bound_i < 0:
        raise ValueError("bounds must satisfy bound_n >= 1, bound_i >= 0")
    gens: list[ThetaGen] = [
        ((a, b), i)
        for a in range(-bound_n, bound_n + 1)
        for b in range(-bound_n, bound_n + 1)
        for i in range(-bound_i, bound_i + 1)
    ]
    failures = []
    pairs = 0
    for g1 in gens:
        x = ThetaElement.basis(*g1)
        mx = mir(poly, x)
        for g2 in gens:
            y = ThetaElement.basis(*g2)
            pairs += 1
            lhs = mir(poly, theta_multiply(poly, x, y))
            rhs = oracle_product(poly, mx, mir(poly, y))
            if lhs != rhs:
                failures.append((g1, g2))
    return MirrorIsoReport(
        bound_n=bound_n,
        bound_i=bound_i,
        pairs_checked=pairs,
        failures=tuple(failures),
    )
