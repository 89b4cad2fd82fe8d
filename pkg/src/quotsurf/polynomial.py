"""Sparse bivariate polynomials over Q, a small parser, and resultants."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

from . import _linalg

__all__ = ["SparsePoly", "ParseError", "parse_poly", "resultant", "X", "Y"]

Exponent = tuple[int, int]


class SparsePoly:
    """Polynomial in ``x, y`` stored as ``{(i, j): coefficient}``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Exponent, Fraction | int] | None = None):
        clean: dict[Exponent, Fraction] = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in {(i, j)}")
            c = Fraction(c)
            if c:
                clean[(int(i), int(j))] = clean.get((int(i), int(j)), Fraction(0)) + c
        self._terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def constant(cls, c) -> "SparsePoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, i: int, j: int, c=1) -> "SparsePoly":
        return cls({(i, j): c})

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def coefficient(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self._terms)

    @property
    def total_degree(self) -> int:
        return max((i + j for i, j in self._terms), default=-1)

    def degree_in(self, var: str) -> int:
        idx = _var_index(var)
        return max((k[idx] for k in self._terms), default=-1)

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            return other
        if isinstance(other, (int, Fraction)):
            return SparsePoly.constant(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return SparsePoly(out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return SparsePoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = SparsePoly.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- calculus and substitution --------------------------------------------

    def diff(self, var: str) -> "SparsePoly":
        idx = _var_index(var)
        out = {}
        for k, c in self._terms.items():
            if k[idx]:
                nk = (k[0] - 1, k[1]) if idx == 0 else (k[0], k[1] - 1)
                out[nk] = c * k[idx]
        return SparsePoly(out)

    def __call__(self, x, y):
        return sum((c * x ** i * y ** j for (i, j), c in self._terms.items()), Fraction(0))

    def compose(self, fx: "SparsePoly", fy: "SparsePoly") -> "SparsePoly":
        """Substitute ``x -> fx`` and ``y -> fy``."""
        xp: dict[int, SparsePoly] = {}
        yp: dict[int, SparsePoly] = {}
        out = SparsePoly()
        for (i, j), c in self._terms.items():
            if i not in xp:
                xp[i] = fx ** i
            if j not in yp:
                yp[j] = fy ** j
            out = out + xp[i] * yp[j] * c
        return out

    def homogeneous_part(self, degree: int) -> "SparsePoly":
        return SparsePoly({k: v for k, v in self._terms.items() if sum(k) == degree})

    def coefficients_in(self, var: str) -> dict[int, "SparsePoly"]:
        """Coefficients as polynomials in the other variable, keyed by power of ``var``."""
        idx = _var_index(var)
        out: dict[int, dict] = {}
        for k, c in self._terms.items():
            rest = (k[0], 0) if idx == 1 else (0, k[1])
            out.setdefault(k[idx], {})[rest] = c
        return {p: SparsePoly(t) for p, t in out.items()}

    # -- formatting --------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self._terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0])):
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in (("x", i), ("y", j)) if e
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono and a == 1:
                body = mono
            elif mono:
                body = f"{a}*{mono}"
            else:
                body = str(a)
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"SparsePoly({str(self)!r})"


def _var_index(var: str) -> int:
    if var == "x":
        return 0
    if var == "y":
        return 1
    raise ValueError(f"unknown variable {var!r}")


X = SparsePoly.monomial(1, 0)
Y = SparsePoly.monomial(0, 1)


# -- parsing ---------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(\d+)|(\*\*|[-+*/^()])|([xy])|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1):
            out.append(("num", m.group(1), m.start(1)))
        elif m.group(2):
            op = "^" if m.group(2) == "**" else m.group(2)
            out.append(("op", op, m.start(2)))
        elif m.group(3):
            out.append(("var", m.group(3), m.start(3)))
        elif m.group(4):
            raise ParseError(f"unexpected character {m.group(4)!r}", m.start(4), text)
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg: str):
        raise ParseError(msg, self.peek()[2], self.text)

    def parse(self) -> SparsePoly:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self) -> SparsePoly:
        p = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> SparsePoly:
        p = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op, _, pos = self.take()[1], None, self.peek()[2]
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    raise ParseError("division only by a nonzero constant", pos, self.text)
                p = p * (1 / q.coefficient(0, 0))
        return p

    def unary(self) -> SparsePoly:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> SparsePoly:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, val, _ = self.peek()
            if kind != "num":
                self.fail("exponent must be a non-negative integer")
            self.take()
            return base ** int(val)
        return base

    def atom(self) -> SparsePoly:
        kind, val, _ = self.peek()
        if kind == "num":
            self.take()
            return SparsePoly.constant(int(val))
        if kind == "var":
            self.take()
            return X if val == "x" else Y
        if (kind, val) == ("op", "("):
            self.take()
            p = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return p
        if kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {val!r}")
        raise AssertionError  # unreachable


def parse_poly(text: str) -> SparsePoly:
    """Parse e.g. ``"x + 3*y^3 - 1/2*x*y^2"`` with exact rational coefficients."""
    return _Parser(text).parse()


# -- resultants ---------------------------------------------------------------


def _sylvester_det(f: list[Fraction], g: list[Fraction]) -> Fraction:
    """Resultant of univariate polys given by coefficient lists, highest first."""
    p, q = len(f) - 1, len(g) - 1
    size = p + q
    if size == 0:
        return Fraction(1)
    rows = []
    for i in range(q):
        rows.append([Fraction(0)] * i + f + [Fraction(0)] * (size - p - 1 - i))
    for i in range(p):
        rows.append([Fraction(0)] * i + g + [Fraction(0)] * (size - q - 1 - i))
    return _linalg.determinant(rows)


def _interpolate(xs: list[Fraction], ys: list[Fraction]) -> list[Fraction]:
    """Coefficients (lowest first) of the interpolating polynomial (Newton form)."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        # poly = poly * (x - xs[k]) + coef[k]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [s - xs[k] * c for s, c in zip(shifted, poly)]
        poly[0] += coef[k]
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def resultant(f: SparsePoly, g: SparsePoly, var: str = "y") -> SparsePoly:
    """``Res_var(f, g)`` as a polynomial in the remaining variable.

    Degrees in ``var`` are the formal ones of ``f`` and ``g``. The result is
    found by evaluating the Sylvester determinant at ``deg f * deg g + 1``
    integer points and interpolating exactly.
    """
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of the zero polynomial")
    other = "x" if var == "y" else "y"
    cf, cg = f.coefficients_in(var), g.coefficients_in(var)
    p, q = max(cf), max(cg)
    bound = max(f.total_degree, 0) * max(g.total_degree, 0) + 1
    xs = [Fraction(k) for k in range(bound)]
    ys = []
    for x0 in xs:
        ev = (lambda c: c(x0, 0)) if other == "x" else (lambda c: c(0, x0))
        fl = [ev(cf[k]) if k in cf else Fraction(0) for k in range(p, -1, -1)]
        gl = [ev(cg[k]) if k in cg else Fraction(0) for k in range(q, -1, -1)]
        ys.append(_sylvester_det(fl, gl))
    coeffs = _interpolate(xs, ys)
    idx = 0 if other == "x" else 1
    return SparsePoly({(k, 0) if idx == 0 else (0, k): c for k, c in enumerate(coeffs)})


def from_terms(terms: Iterable[tuple[int, int, Fraction | int]]) -> SparsePoly:
    return SparsePoly({(i, j): c for i, j, c in terms})
