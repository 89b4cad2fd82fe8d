"""Integer and continued-fraction arithmetic.

Hirzebruch-Jung ("minus") continued fractions, continuants, modular
inverses and the Euclidean multiplicity sequence of a one-branch cusp.
A fraction ``n/d`` is passed around as the coprime pair ``(n, d)``.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

__all__ = [
    "hj_expand",
    "hj_evaluate",
    "chain_determinant",
    "mod_inverse",
    "multiplicity_sequence",
    "delta_invariant",
]


def _check_pair(n: int, d: int) -> None:
    if n < 2 or not 0 < d < n:
        raise ValueError(f"need 0 < d < n with n >= 2, got ({n}, {d})")
    if gcd(n, d) != 1:
        raise ValueError(f"({n}, {d}) is not a coprime pair")


def hj_expand(n: int, d: int) -> list[int]:
    """Return ``[a1, ..., ar]`` with ``n/d = a1 - 1/(a2 - 1/(... - 1/ar))``.

    Every entry is at least 2.
    """
    _check_pair(n, d)
    chain = []
    while True:
        a = -(-n // d)
        chain.append(a)
        r = a * d - n
        if r == 0:
            return chain
        n, d = d, r


def hj_evaluate(chain: Sequence[int]) -> tuple[int, int]:
    """Inverse of :func:`hj_expand`.

    The empty chain evaluates to the degenerate pair ``(1, 1)``; that value
    marks a missing arm and is never a valid input to :func:`hj_expand`.
    """
    if not chain:
        return (1, 1)
    if any(a < 2 for a in chain):
        raise ValueError(f"chain entries must be >= 2: {list(chain)}")
    p, q = 1, 0
    for a in reversed(chain):
        p, q = a * p - q, p
    return (p, q)


def chain_determinant(chain: Sequence[int]) -> int:
    """Determinant of the negated intersection matrix of a linear chain.

    ``chain`` holds the negated self-intersections. This is the continuant
    numerator, so the empty chain has determinant 1.
    """
    return hj_evaluate(chain)[0]


def mod_inverse(a: int, n: int) -> int:
    if n < 2:
        raise ValueError("modulus must be at least 2")
    if gcd(a, n) != 1:
        raise ValueError(f"{a} is not invertible modulo {n}")
    return pow(a, -1, n)


def multiplicity_sequence(p: int, q: int) -> list[int]:
    """Multiplicities of the successive blow-ups resolving a ``(p, q)`` cusp.

    Each remainder of the Euclidean algorithm on ``(p, q)`` is repeated as
    many times as the corresponding quotient.
    """
    if not p > q >= 1:
        raise ValueError(f"need p > q >= 1, got ({p}, {q})")
    if gcd(p, q) != 1:
        raise ValueError(f"({p}, {q}) is not a coprime pair")
    seq: list[int] = []
    while q:
        k, r = divmod(p, q)
        seq.extend([q] * k)
        p, q = q, r
    return seq


def delta_invariant(p: int, q: int) -> int:
    if gcd(p, q) != 1:
        raise ValueError(f"({p}, {q}) is not a coprime pair")
    return (p - 1) * (q - 1) // 2
