"""Equivariant polynomial endomorphisms of the affine plane.

The cyclic group of order ``n`` acts by ``(x, y) -> (z x, z^d y)``. A
monomial ``x^i y^j`` then has weight ``i + d j`` mod ``n``, so equivariance
is a congruence on exponents and no roots of unity are needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .polynomial import X, Y, SparsePoly, parse_poly, resultant

__all__ = [
    "PolyEndomorphism",
    "GroupAction",
    "Mobius",
    "OriginFiberReport",
    "Verdict",
    "jacobian",
    "is_keller",
    "weight_compatible",
    "induced_boundary_map",
    "origin_fiber",
    "origin_fiber_is_origin",
    "certify",
]


@dataclass(frozen=True)
class PolyEndomorphism:
    """``(x, y) -> (f, g)``. The origin need not be fixed; checks that need it say so."""

    f: SparsePoly
    g: SparsePoly

    @classmethod
    def parse(cls, f: str, g: str) -> "PolyEndomorphism":
        return cls(parse_poly(f), parse_poly(g))

    def fixes_origin(self) -> bool:
        return self.f.coefficient(0, 0) == 0 and self.g.coefficient(0, 0) == 0

    def compose(self, inner: "PolyEndomorphism") -> "PolyEndomorphism":
        """``self o inner``."""
        return PolyEndomorphism(self.f.compose(inner.f, inner.g), self.g.compose(inner.f, inner.g))

    @property
    def degree(self) -> int:
        return max(self.f.total_degree, self.g.total_degree)

    def __call__(self, x, y):
        return self.f(x, y), self.g(x, y)

    def __str__(self) -> str:
        return f"({self.f}, {self.g})"


@dataclass(frozen=True)
class GroupAction:
    n: int
    d: int

    def __post_init__(self):
        if self.n < 2 or not 0 < self.d < self.n or gcd(self.n, self.d) != 1:
            raise ValueError(f"need n >= 2, 0 < d < n and gcd(n, d) = 1, got ({self.n}, {self.d})")

    @classmethod
    def parse(cls, text: str) -> "GroupAction":
        try:
            n, d = (int(s) for s in text.split(","))
        except ValueError:
            raise ValueError(f"expected 'n,d', got {text!r}") from None
        return cls(n, d)

    def weight(self, i: int, j: int) -> int:
        return (i + self.d * j) % self.n


def jacobian(e: PolyEndomorphism) -> SparsePoly:
    return e.f.diff("x") * e.g.diff("y") - e.f.diff("y") * e.g.diff("x")


def is_keller(e: PolyEndomorphism) -> bool:
    j = jacobian(e)
    return j.is_constant() and not j.is_zero()


def weight_compatible(p: SparsePoly, act: GroupAction, w: int) -> bool:
    return all(act.weight(i, j) == w % act.n for i, j in p.terms)


@dataclass(frozen=True)
class Mobius:
    """``t -> (c + d t) / (a + b t)`` for the linear part ``(a x + b y, c x + d y)``."""

    matrix: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    det: Fraction

    def __call__(self, t):
        (a, b), (c, d) = self.matrix
        den = a + b * t
        if den == 0:
            return None  # the point at infinity
        return (c + d * t) / den

    def is_identity(self) -> bool:
        (a, b), (c, d) = self.matrix
        return b == 0 and c == 0 and a == d

    def __str__(self) -> str:
        (a, b), (c, d) = self.matrix
        num = str(SparsePoly({(0, 0): c, (1, 0): d})).replace("x", "t")
        den = str(SparsePoly({(0, 0): a, (1, 0): b})).replace("x", "t")
        return f"t -> ({num})/({den})"


def induced_boundary_map(e: PolyEndomorphism) -> Mobius:
    """Action of the linear part on the exceptional curve of the blow-up at the origin."""
    a, b = e.f.coefficient(1, 0), e.f.coefficient(0, 1)
    c, d = e.g.coefficient(1, 0), e.g.coefficient(0, 1)
    det = a * d - b * c
    if det == 0:
        raise ValueError("linear part is singular; the map is not etale at the origin")
    return Mobius(((a, b), (c, d)), det)


@dataclass(frozen=True)
class OriginFiberReport:
    value: bool
    diagnostic: str
    shears: tuple[int, ...] = ()
    resultants: tuple[SparsePoly, ...] = ()


def _is_power_of(p: SparsePoly, var: str) -> bool:
    """``c * var^k`` with ``c != 0`` and ``k >= 1``."""
    if len(p.terms) != 1:
        return False
    ((i, j),) = p.terms
    return (i >= 1 and j == 0) if var == "x" else (j >= 1 and i == 0)


def _shear(p: SparsePoly, t: int) -> SparsePoly:
    """``p(x + t y, y)``."""
    return p.compose(X + Y * t, Y)


def origin_fiber(e: PolyEndomorphism) -> OriginFiberReport:
    """Decide whether ``f = g = 0`` only at the origin.

    After the shear ``x -> x + t y`` with ``f_top(t, 1)`` and ``g_top(t, 1)``
    nonzero both components have constant leading coefficient in ``y``, so
    ``Res_y`` vanishes at ``x0`` exactly when some common zero lies on the
    line ``x + t y = x0``. Two such shears whose resultants are pure powers
    of ``x`` put every common zero on two distinct lines through the origin.
    """
    f, g = e.f, e.g
    if f.is_zero() or g.is_zero():
        raise ValueError("components must be nonzero polynomials")
    if f(0, 0) != 0 or g(0, 0) != 0:
        return OriginFiberReport(False, "the origin is not a common zero")
    if f.is_constant() or g.is_constant():
        return OriginFiberReport(False, "a component is a nonzero constant")
    ftop = f.homogeneous_part(f.total_degree)
    gtop = g.homogeneous_part(g.total_degree)
    shears: list[int] = []
    results: list[SparsePoly] = []
    t = 0
    while len(shears) < 2:
        if ftop(t, 1) != 0 and gtop(t, 1) != 0:
            r = resultant(_shear(f, t), _shear(g, t), "y")
            shears.append(t)
            results.append(r)
            if r.is_zero():
                return OriginFiberReport(False, "components share a factor; the fiber is a curve", tuple(shears), tuple(results))
            if not _is_power_of(r, "x"):
                return OriginFiberReport(
                    False, f"a common zero lies off the line x + {t}*y = 0 (resultant {r})", tuple(shears), tuple(results)
                )
        t = -t if t > 0 else -t + 1
    return OriginFiberReport(True, "common zero set is the origin", tuple(shears), tuple(results))


def origin_fiber_is_origin(e: PolyEndomorphism) -> bool:
    return origin_fiber(e).value


@dataclass(frozen=True)
class Verdict:
    certified: bool
    reason: str | None = None
    detail: str = ""

    @property
    def label(self) -> str:
        return "automorphism_by_theorem" if self.certified else f"not_applicable({self.reason})"

    def to_dict(self) -> dict:
        return {"verdict": "automorphism_by_theorem" if self.certified else "not_applicable",
                "reason": self.reason, "detail": self.detail}

    def __str__(self) -> str:
        return self.label


def certify(e: PolyEndomorphism, act: GroupAction) -> Verdict:
    """Apply the even-order theorem to an equivariant Keller map.

    A positive verdict is a citation of that theorem, not an independent
    proof of invertibility. The first failing hypothesis is reported.
    """
    if not is_keller(e):
        return Verdict(False, "keller", f"jacobian is {jacobian(e)}")
    if not weight_compatible(e.f, act, 1):
        return Verdict(False, "equivariance", f"f has a monomial of weight != 1 mod {act.n}")
    if not weight_compatible(e.g, act, act.d):
        return Verdict(False, "equivariance", f"g has a monomial of weight != {act.d} mod {act.n}")
    fiber = origin_fiber(e)
    if not fiber.value:
        return Verdict(False, "origin_fiber", fiber.diagnostic)
    if act.n % 2:
        return Verdict(False, "odd_order", f"group order {act.n} is odd")
    return Verdict(True, None, f"Keller, equivariant for ({act.n},{act.d}), origin fiber is the origin, even order")
