"""Base-point resolution of the pencil ``<C, a S1 + l0>`` on a Hirzebruch surface.

A member ``C ~ a S1 + l`` of the pencil has a cusp of type ``(an+1, a)`` at
the point ``Q1 = S1 n l0``. Resolving the base points takes ``n`` blow-ups
of multiplicity ``a`` (the E-chain), ``a`` blow-ups separating ``C`` from
``En`` (the A-chain) and ``a`` more along ``C`` (the B-chain ending in the
section ``F``). The special member ``C0'`` becomes a degenerate fiber and
the configuration contracts back to a Hirzebruch surface with ``F`` as a
section.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dualgraph import (
    BlowupStep,
    Divisor,
    DualGraph,
    blow_down,
    blow_up,
    center_multiplicity,
    intersection_number,
    total_transform,
)
from .exactmath import delta_invariant, multiplicity_sequence

__all__ = [
    "HirzebruchModel",
    "MemberClass",
    "PencilResolution",
    "CuspData",
    "Contraction",
    "ContractionError",
    "pencil_member_class",
    "resolve_pencil",
    "cusp_data",
    "contract_to_hirzebruch",
    "layout_rows",
    "expected_special_member",
]


@dataclass(frozen=True)
class HirzebruchModel:
    """The surface F_n with classes written in the basis ``(S0, l)``.

    ``S1 = S0 + n l``; ``S0^2 = -n``, ``S0.l = 1``, ``l^2 = 0``.
    """

    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")

    @property
    def S0(self) -> tuple[int, int]:
        return (1, 0)

    @property
    def S1(self) -> tuple[int, int]:
        return (1, self.n)

    @property
    def fiber(self) -> tuple[int, int]:
        return (0, 1)

    @property
    def canonical(self) -> tuple[int, int]:
        return (-2, -self.n - 2)

    def pair(self, u: tuple[int, int], v: tuple[int, int]) -> int:
        return -self.n * u[0] * v[0] + u[0] * v[1] + u[1] * v[0]

    def graph(self) -> DualGraph:
        return DualGraph(
            {"S0": -self.n, "S1": self.n, "l0": 0},
            [("S0", "l0"), ("S1", "l0")],
            ("S0", "S1"),
        )


@dataclass(frozen=True)
class MemberClass:
    self_intersection: int
    dot_S0: int
    dot_S1: int
    arithmetic_genus: int


def pencil_member_class(n: int, a: int) -> MemberClass:
    """Numerical data of ``C ~ a S1 + l`` on F_n."""
    if n < 1 or a < 1:
        raise ValueError("need n >= 1 and a >= 1")
    model = HirzebruchModel(n)
    c = (a, a * n + 1)
    c2 = model.pair(c, c)
    kc = model.pair(model.canonical, c)
    return MemberClass(c2, model.pair(c, model.S0), model.pair(c, model.S1), 1 + (c2 + kc) // 2)


@dataclass(frozen=True)
class PencilResolution:
    """Outcome of :func:`resolve_pencil`.

    ``steps`` pairs each blow-up with the multiplicity of the general member
    at its center; ``member_history[k]`` is the class of the proper
    transform of ``C`` after ``k`` steps, written in graph curves.
    """

    n: int
    a: int
    graph: DualGraph
    special_member: Divisor
    section: str
    steps: tuple[tuple[BlowupStep, int], ...]
    member_history: tuple[Divisor, ...]
    self_intersections: tuple[int, ...]


def _schedule(n: int, a: int) -> list[tuple[BlowupStep, int]]:
    steps = []
    prev = "l0"
    for k in range(1, n + 1):
        steps.append((BlowupStep.on_edge("S1", prev, f"E{k}"), a))
        prev = f"E{k}"
    prev = "S1"
    for j in range(1, a + 1):
        steps.append((BlowupStep.on_edge(prev, f"E{n}", f"A{j}"), 1))
        prev = f"A{j}"
    prev = f"A{a}"
    for j in range(1, a + 1):
        name = f"B{j}" if j < a else "F"
        steps.append((BlowupStep.on_curve(prev, name), 1))
        prev = name
    return steps


def resolve_pencil(n: int, a: int) -> PencilResolution:
    """Blow up the base points of the pencil and return the resolved configuration.

    Each center is checked against the numerical class of ``C``: a center
    of multiplicity ``m`` on a curve ``X`` needs ``C.X >= m``, and no curve
    may acquire negative intersection with ``C``.
    """
    if n < 1 or a < 1:
        raise ValueError("need n >= 1 and a >= 1")
    g = HirzebruchModel(n).graph()
    member = Divisor({"S1": a, "l0": 1})
    history = [member]
    c2 = int(intersection_number(g, member, member))
    squares = [c2]
    done = []
    for step, m in _schedule(n, a):
        for curve in step.curves:
            if intersection_number(g, member, Divisor({curve: 1})) < m:
                raise AssertionError(f"C does not pass through the center of {step} with multiplicity {m}")
        coeff = center_multiplicity(g, step, member) - m
        member = total_transform(g, step, member, coeff)
        g = blow_up(g, step)
        c2 -= m * m
        if intersection_number(g, member, member) != c2:
            raise AssertionError(f"self-intersection bookkeeping broke at {step}")
        for v in g:
            if intersection_number(g, member, Divisor({v: 1})) < 0:
                raise AssertionError(f"C has negative intersection with {v} after {step}")
        history.append(member)
        squares.append(c2)
        done.append((step, m))
    return PencilResolution(n, a, g, member, "F", tuple(done), tuple(history), tuple(squares))


def layout_rows(pr: PencilResolution) -> list[list[str]]:
    """Rows for DOT layout: the main chain from ``l0`` to ``S1``."""
    top = ["l0"] + [f"E{k}" for k in range(1, pr.n + 1)]
    top += [f"A{j}" for j in range(pr.a, 0, -1)] + ["S1"]
    return [top]


@dataclass(frozen=True)
class CuspData:
    type: tuple[int, int]
    i_S1: int
    i_ell0: int
    i_S0: int
    mult_seq: list[int]
    delta: int


def cusp_data(n: int, a: int) -> CuspData:
    """Local data of a general member at ``Q1``; ``a = 1`` is a smooth point."""
    if n < 1 or a < 1:
        raise ValueError("need n >= 1 and a >= 1")
    p, q = a * n + 1, a
    seq = multiplicity_sequence(p, q)
    if a == 1:
        seq = []
    return CuspData((p, q), p, q, 1, seq, delta_invariant(p, q))


class ContractionError(AssertionError):
    def __init__(self, index: int, name: str, reason: str):
        super().__init__(f"step {index}: cannot contract {name}: {reason}")
        self.index = index
        self.name = name


@dataclass(frozen=True)
class Contraction:
    schedule: list[str]
    final: HirzebruchModel
    fiber_image: str
    section_image: str
    graph: DualGraph


def contract_to_hirzebruch(pr: PencilResolution) -> Contraction:
    """Contract ``S1', A1..Aa, B1..B(a-1), En..E1`` in that order."""
    n, a = pr.n, pr.a
    schedule = ["S1"] + [f"A{j}" for j in range(1, a + 1)]
    schedule += [f"B{j}" for j in range(1, a)] + [f"E{k}" for k in range(n, 0, -1)]
    g = pr.graph
    for i, name in enumerate(schedule):
        try:
            g = blow_down(g, name)
        except (ValueError, KeyError) as exc:
            raise ContractionError(i, name, str(exc)) from None
    checks = {
        "S0": g.weight("S0") == -n,
        "l0": g.weight("l0") == 0,
        "F": g.weight("F") == n,
        "disjoint": not g.has_edge("S0", "F"),
        "sections": g.has_edge("S0", "l0") and g.has_edge("F", "l0"),
        "size": len(g) == 3,
    }
    bad = [k for k, ok in checks.items() if not ok]
    if bad:
        raise ContractionError(len(schedule), "-", f"final configuration is not F_{n}: {bad}")
    return Contraction(schedule, HirzebruchModel(-g.weight("S0")), "l0", "F", g)


def expected_special_member(n: int, a: int) -> Divisor:
    """``a(S1' + A1 + ... + Aa) + (En + ... + E1 + l0') + sum_j (a-j) Bj``."""
    coeffs: dict[str, Fraction | int] = {"S1": a, "l0": 1}
    coeffs.update({f"A{j}": a for j in range(1, a + 1)})
    coeffs.update({f"E{k}": 1 for k in range(1, n + 1)})
    coeffs.update({f"B{j}": a - j for j in range(1, a)})
    return Divisor(coeffs)
