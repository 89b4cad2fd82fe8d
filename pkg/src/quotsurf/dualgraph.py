"""Weighted dual graphs of rational curves and their intersection theory.

A :class:`DualGraph` stores, for every named curve, its self-intersection
and whether it belongs to the boundary divisor; edges are transversal
intersection points. Every curve is a smooth rational curve, so adjunction
gives ``K.C = -C^2 - 2``. Graphs and divisors are immutable values: every
operation returns a new object.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Mapping, Sequence

from . import _linalg
from .exactmath import chain_determinant

__all__ = [
    "DualGraph",
    "Divisor",
    "curve_pairing",
    "BlowupStep",
    "Classification",
    "intersection_number",
    "is_negative_definite",
    "classify_exceptional",
    "fundamental_cycle",
    "blow_up",
    "blow_down",
    "lc_correction",
    "track_log_canonical",
    "total_transform",
    "center_multiplicity",
    "verify_fiber",
    "canonical_pairing",
]


class DualGraph:
    """Simple graph of named rational curves with integer weights."""

    __slots__ = ("_weights", "_boundary", "_adj")

    def __init__(
        self,
        weights: Mapping[str, int] | Iterable[tuple[str, int]] = (),
        edges: Iterable[tuple[str, str]] = (),
        boundary: Iterable[str] | Mapping[str, bool] = (),
    ):
        items = weights.items() if isinstance(weights, Mapping) else weights
        self._weights: dict[str, int] = {}
        for name, w in items:
            if not isinstance(name, str) or not name:
                raise ValueError(f"curve names must be non-empty strings: {name!r}")
            if name in self._weights:
                raise ValueError(f"duplicate curve name {name!r}")
            if isinstance(w, bool) or int(w) != w:
                raise ValueError(f"weight of {name!r} must be an integer")
            self._weights[name] = int(w)
        if isinstance(boundary, Mapping):
            marked = {k for k, v in boundary.items() if v}
        else:
            marked = set(boundary)
        unknown = marked - self._weights.keys()
        if unknown:
            raise KeyError(f"unknown boundary curves {sorted(unknown)}")
        self._boundary = {name: name in marked for name in self._weights}
        self._adj: dict[str, set[str]] = {name: set() for name in self._weights}
        for a, b in edges:
            if a not in self._weights or b not in self._weights:
                raise KeyError(f"edge ({a!r}, {b!r}) references an unknown curve")
            if a == b:
                raise ValueError(f"loop at {a!r}")
            if b in self._adj[a]:
                raise ValueError(f"multiple edge between {a!r} and {b!r}")
            self._adj[a].add(b)
            self._adj[b].add(a)

    @classmethod
    def chain(
        cls,
        weights: Sequence[int],
        names: Sequence[str] | None = None,
        prefix: str = "E",
        boundary: bool = False,
    ) -> "DualGraph":
        """Linear chain; ``weights`` are self-intersections in chain order."""
        if names is None:
            names = [f"{prefix}{i + 1}" for i in range(len(weights))]
        if len(names) != len(weights):
            raise ValueError("names and weights differ in length")
        return cls(
            list(zip(names, weights)),
            list(zip(names, names[1:])),
            names if boundary else (),
        )

    # -- queries -----------------------------------------------------------

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._weights)

    def __len__(self) -> int:
        return len(self._weights)

    def __contains__(self, name: object) -> bool:
        return name in self._weights

    def __iter__(self) -> Iterator[str]:
        return iter(self._weights)

    def weight(self, name: str) -> int:
        return self._weights[name]

    @property
    def weights(self) -> dict[str, int]:
        return dict(self._weights)

    def is_boundary(self, name: str) -> bool:
        return self._boundary[name]

    @property
    def boundary(self) -> tuple[str, ...]:
        return tuple(n for n, b in self._boundary.items() if b)

    def neighbors(self, name: str) -> list[str]:
        adj = self._adj[name]
        return [n for n in self._weights if n in adj]

    def degree(self, name: str) -> int:
        return len(self._adj[name])

    def has_edge(self, a: str, b: str) -> bool:
        return b in self._adj.get(a, ())

    @property
    def edges(self) -> list[tuple[str, str]]:
        order = {n: i for i, n in enumerate(self._weights)}
        out = []
        for a in self._weights:
            for b in sorted(self._adj[a], key=order.__getitem__):
                if order[a] < order[b]:
                    out.append((a, b))
        return out

    def pair(self, a: str, b: str) -> int:
        """Intersection number of two curves of the graph."""
        if a == b:
            return self._weights[a]
        if a not in self._weights or b not in self._weights:
            raise KeyError(f"unknown curve {a if a not in self._weights else b!r}")
        return 1 if b in self._adj[a] else 0

    def intersection_matrix(self, order: Sequence[str] | None = None) -> list[list[int]]:
        order = list(self._weights if order is None else order)
        return [[self.pair(a, b) for b in order] for a in order]

    def components(self) -> list[list[str]]:
        seen: set[str] = set()
        comps = []
        for start in self._weights:
            if start in seen:
                continue
            comp, stack = [], [start]
            seen.add(start)
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self._adj[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            order = {n: i for i, n in enumerate(self._weights)}
            comps.append(sorted(comp, key=order.__getitem__))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def is_tree(self) -> bool:
        return self.is_connected() and len(self.edges) == len(self) - 1

    # -- functional updates ------------------------------------------------

    def _rebuild(self, weights, edges, boundary) -> "DualGraph":
        return DualGraph(weights, edges, boundary)

    def with_weight(self, name: str, weight: int) -> "DualGraph":
        if name not in self._weights:
            raise KeyError(name)
        w = dict(self._weights)
        w[name] = weight
        return self._rebuild(w, self.edges, self._boundary)

    def with_boundary(self, name: str, mark: bool) -> "DualGraph":
        if name not in self._weights:
            raise KeyError(name)
        b = dict(self._boundary)
        b[name] = mark
        return self._rebuild(self._weights, self.edges, b)

    def add_vertex(self, name: str, weight: int, boundary: bool = False,
                   neighbors: Iterable[str] = ()) -> "DualGraph":
        if name in self._weights:
            raise ValueError(f"curve {name!r} already exists")
        w = dict(self._weights)
        w[name] = weight
        b = dict(self._boundary)
        b[name] = boundary
        return self._rebuild(w, self.edges + [(name, n) for n in neighbors], b)

    def remove_vertex(self, name: str) -> "DualGraph":
        if name not in self._weights:
            raise KeyError(name)
        w = {k: v for k, v in self._weights.items() if k != name}
        b = {k: v for k, v in self._boundary.items() if k != name}
        e = [(x, y) for x, y in self.edges if name not in (x, y)]
        return self._rebuild(w, e, b)

    def add_edge(self, a: str, b: str) -> "DualGraph":
        return self._rebuild(self._weights, self.edges + [(a, b)], self._boundary)

    def remove_edge(self, a: str, b: str) -> "DualGraph":
        if not self.has_edge(a, b):
            raise ValueError(f"no edge between {a!r} and {b!r}")
        e = [(x, y) for x, y in self.edges if {x, y} != {a, b}]
        return self._rebuild(self._weights, e, self._boundary)

    def subgraph(self, names: Iterable[str]) -> "DualGraph":
        keep = set(names)
        missing = keep - self._weights.keys()
        if missing:
            raise KeyError(f"unknown curves {sorted(missing)}")
        w = {k: v for k, v in self._weights.items() if k in keep}
        b = {k: v for k, v in self._boundary.items() if k in keep}
        e = [(x, y) for x, y in self.edges if x in keep and y in keep]
        return self._rebuild(w, e, b)

    def relabel(self, mapping: Mapping[str, str]) -> "DualGraph":
        f = lambda n: mapping.get(n, n)  # noqa: E731
        return self._rebuild(
            [(f(n), w) for n, w in self._weights.items()],
            [(f(a), f(b)) for a, b in self.edges],
            {f(n): m for n, m in self._boundary.items()},
        )

    # -- comparison and serialization -------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DualGraph):
            return NotImplemented
        return (
            self._weights == other._weights
            and self._boundary == other._boundary
            and self._adj == other._adj
        )

    def __hash__(self) -> int:
        return hash((
            frozenset(self._weights.items()),
            frozenset(self._boundary.items()),
            frozenset(frozenset(e) for e in self.edges),
        ))

    def __repr__(self) -> str:
        verts = ", ".join(f"{n}:{w}" for n, w in self._weights.items())
        return f"DualGraph({verts}; edges={self.edges})"

    def to_dict(self) -> dict:
        return {
            "vertices": [
                {"name": n, "weight": w, "boundary": self._boundary[n]}
                for n, w in self._weights.items()
            ],
            "edges": [[a, b] for a, b in self.edges],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "DualGraph":
        try:
            verts = data["vertices"]
            edges = data.get("edges", [])
            weights = [(v["name"], v["weight"]) for v in verts]
            boundary = [v["name"] for v in verts if v.get("boundary", False)]
            pairs = []
            for e in edges:
                if len(e) != 2:
                    raise ValueError(f"edge must have two endpoints: {e!r}")
                pairs.append((e[0], e[1]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed graph document: {exc}") from exc
        return cls(weights, pairs, boundary)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "DualGraph":
        return cls.from_dict(json.loads(text))

    def to_dot(self, name: str = "G", rows: Sequence[Sequence[str]] = ()) -> str:
        """DOT text with labels ``"name (weight)"``.

        Vertices are emitted in sorted order. Each entry of ``rows`` is drawn
        on one horizontal rank.
        """
        lines = [f"graph {name} {{", "  node [shape=circle];"]
        for n in sorted(self._weights):
            style = ', style="filled", fillcolor="lightgrey"' if self._boundary[n] else ""
            lines.append(f'  "{n}" [label="{n} ({self._weights[n]})"{style}];')
        for row in rows:
            members = " ".join(f'"{n}";' for n in row)
            lines.append(f"  {{ rank=same; {members} }}")
        for a, b in sorted(tuple(sorted(e)) for e in self.edges):
            lines.append(f'  "{a}" -- "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


class Divisor:
    """Finite rational combination of named curves."""

    __slots__ = ("_c",)

    def __init__(self, coefficients: Mapping[str, Fraction | int] | None = None, **kw):
        c: dict[str, Fraction] = {}
        for src in (coefficients or {}, kw):
            for name, v in src.items():
                v = Fraction(v)
                if v:
                    c[name] = c.get(name, Fraction(0)) + v
        self._c = {k: v for k, v in c.items() if v}

    @classmethod
    def reduced(cls, names: Iterable[str]) -> "Divisor":
        return cls({n: 1 for n in names})

    def __getitem__(self, name: str) -> Fraction:
        return self._c.get(name, Fraction(0))

    def items(self):
        return self._c.items()

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(self._c)

    def __iter__(self):
        return iter(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __add__(self, other: "Divisor") -> "Divisor":
        if not isinstance(other, Divisor):
            return NotImplemented
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, Fraction(0)) + v
        return Divisor(out)

    def __neg__(self) -> "Divisor":
        return Divisor({k: -v for k, v in self._c.items()})

    def __sub__(self, other: "Divisor") -> "Divisor":
        if not isinstance(other, Divisor):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar) -> "Divisor":
        if isinstance(scalar, Divisor):
            return NotImplemented
        s = Fraction(scalar)
        return Divisor({k: s * v for k, v in self._c.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Divisor):
            return self._c == other._c
        if other == 0:
            return not self._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def is_effective(self) -> bool:
        return all(v > 0 for v in self._c.values())

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self._c.values())

    def restrict(self, names: Iterable[str]) -> "Divisor":
        keep = set(names)
        return Divisor({k: v for k, v in self._c.items() if k in keep})

    def to_dict(self) -> dict[str, int | str]:
        return {
            k: int(v) if v.denominator == 1 else str(v)
            for k, v in self._c.items()
        }

    def __repr__(self) -> str:
        if not self._c:
            return "Divisor(0)"
        terms = []
        for k, v in self._c.items():
            terms.append(k if v == 1 else f"{v}*{k}")
        return "Divisor(" + " + ".join(terms) + ")"


def _check_support(g: DualGraph, d: Divisor) -> None:
    for name in d:
        if name not in g:
            raise KeyError(f"curve {name!r} is not in the graph")


def curve_pairing(g: DualGraph, d: Divisor, curve: str) -> Fraction:
    """``d . C`` for a single curve ``C``, touching only ``C`` and its neighbors."""
    c = d._c
    return Fraction(g.weight(curve) * c.get(curve, 0) + sum(c.get(b, 0) for b in g._adj[curve]))


def intersection_number(g: DualGraph, d1: Divisor, d2: Divisor) -> Fraction:
    _check_support(g, d1)
    _check_support(g, d2)
    if len(d1) > len(d2):
        d1, d2 = d2, d1
    c2 = d2._c
    total = 0
    for a, ca in d1.items():
        s = g.weight(a) * c2.get(a, 0) + sum(c2.get(b, 0) for b in g._adj[a])
        if s:
            total += ca * s
    return Fraction(total)


def canonical_pairing(g: DualGraph, name: str) -> int:
    """``K.C`` for a smooth rational curve ``C`` (adjunction)."""
    return -g.weight(name) - 2


def is_negative_definite(g: DualGraph) -> bool:
    neg = [[-x for x in row] for row in g.intersection_matrix()]
    return _linalg.is_positive_definite(neg)


@dataclass(frozen=True)
class Classification:
    """Result of :func:`classify_exceptional`.

    ``kind`` is ``"admissible_rod"``, ``"admissible_fork"`` or ``"neither"``;
    ``determinants`` holds the sorted arm determinants of a fork.
    """

    kind: str
    determinants: tuple[int, ...] = ()
    center: str | None = None
    arms: tuple[tuple[str, ...], ...] = ()

    def __str__(self) -> str:
        if self.kind == "admissible_fork":
            return f"admissible_fork{self.determinants}"
        return self.kind


def _walk_arm(g: DualGraph, center: str, first: str) -> list[str]:
    arm, prev, cur = [first], center, first
    while True:
        nxt = [n for n in g.neighbors(cur) if n != prev]
        if not nxt:
            return arm
        if len(nxt) > 1:
            raise ValueError("arm branches")
        prev, cur = cur, nxt[0]
        arm.append(cur)


def classify_exceptional(g: DualGraph) -> Classification:
    neither = Classification("neither")
    if len(g) == 0 or not g.is_tree():
        return neither
    if any(g.weight(n) > -2 for n in g):
        return neither
    if not is_negative_definite(g):
        return neither
    degrees = {n: g.degree(n) for n in g}
    if all(d <= 2 for d in degrees.values()):
        return Classification("admissible_rod")
    branch = [n for n, d in degrees.items() if d >= 3]
    if len(branch) != 1 or degrees[branch[0]] != 3:
        return neither
    center = branch[0]
    arms = tuple(tuple(_walk_arm(g, center, nb)) for nb in g.neighbors(center))
    dets = tuple(sorted(chain_determinant([-g.weight(v) for v in arm]) for arm in arms))
    return Classification("admissible_fork", dets, center, arms)


def fundamental_cycle(g: DualGraph, order: Sequence[str] | None = None) -> Divisor:
    """Artin's fundamental cycle of a connected negative definite graph.

    Starting from the reduced cycle, repeatedly add a curve ``E`` with
    ``Z.E > 0``; the first such curve in ``order`` (default: sorted names)
    is chosen. The result does not depend on ``order``.
    """
    if len(g) == 0 or not g.is_connected():
        raise ValueError("fundamental cycle needs a connected, non-empty graph")
    if not is_negative_definite(g):
        raise ValueError("graph is not negative definite")
    order = sorted(g.names) if order is None else list(order)
    if sorted(order) != sorted(g.names):
        raise ValueError("order must list every curve exactly once")
    z = {n: 1 for n in g}
    while True:
        for e in order:
            if g.weight(e) * z[e] + sum(z[n] for n in g.neighbors(e)) > 0:
                z[e] += 1
                break
        else:
            return Divisor(z)


# -- blow-up calculus ------------------------------------------------------


@dataclass(frozen=True)
class BlowupStep:
    """One point blow-up.

    ``kind`` is ``"interior"`` (a point on no curve of the graph),
    ``"on_curve"`` (a general point of ``curves[0]``) or ``"on_edge"`` (the
    intersection point of ``curves[0]`` and ``curves[1]``).
    """

    kind: str
    curves: tuple[str, ...]
    new_name: str
    into_boundary: bool = False

    def __post_init__(self):
        expected = {"interior": 0, "on_curve": 1, "on_edge": 2}
        if self.kind not in expected:
            raise ValueError(f"unknown blow-up kind {self.kind!r}")
        if len(self.curves) != expected[self.kind]:
            raise ValueError(f"{self.kind} blow-up takes {expected[self.kind]} curve name(s)")

    @classmethod
    def interior(cls, new_name: str, into_boundary: bool = False) -> "BlowupStep":
        return cls("interior", (), new_name, into_boundary)

    @classmethod
    def on_curve(cls, curve: str, new_name: str, into_boundary: bool = False) -> "BlowupStep":
        return cls("on_curve", (curve,), new_name, into_boundary)

    @classmethod
    def on_edge(cls, c1: str, c2: str, new_name: str, into_boundary: bool = False) -> "BlowupStep":
        return cls("on_edge", (c1, c2), new_name, into_boundary)

    def validate(self, g: DualGraph) -> None:
        if self.new_name in g:
            raise ValueError(f"curve {self.new_name!r} already exists")
        for c in self.curves:
            if c not in g:
                raise ValueError(f"blow-up center references unknown curve {c!r}")
        if self.kind == "on_edge" and not g.has_edge(*self.curves):
            raise ValueError(f"{self.curves[0]!r} and {self.curves[1]!r} do not meet")


def blow_up(g: DualGraph, s: BlowupStep) -> DualGraph:
    s.validate(g)
    w = g.weights
    edges = g.edges
    for c in s.curves:
        w[c] -= 1
    if s.kind == "on_edge":
        a, b = s.curves
        edges = [e for e in edges if set(e) != {a, b}]
    w[s.new_name] = -1
    edges = edges + [(c, s.new_name) for c in s.curves]
    marks = {n: g.is_boundary(n) for n in g}
    marks[s.new_name] = s.into_boundary
    return DualGraph(w, edges, marks)


def blow_down(g: DualGraph, name: str) -> DualGraph:
    """Contract a (-1)-curve meeting at most two other curves."""
    if name not in g:
        raise KeyError(name)
    if g.weight(name) != -1:
        raise ValueError(f"{name!r} has weight {g.weight(name)}, not -1")
    nbrs = g.neighbors(name)
    if len(nbrs) > 2:
        raise ValueError(f"{name!r} meets {len(nbrs)} curves; contraction would not be normal crossing")
    if len(nbrs) == 2 and g.has_edge(*nbrs):
        raise ValueError(f"contracting {name!r} would create a double point between {nbrs}")
    weights = {k: w + (k in nbrs) for k, w in g._weights.items() if k != name}
    boundary = {k: v for k, v in g._boundary.items() if k != name}
    edges = [(x, y) for x, y in g.edges if name not in (x, y)]
    if len(nbrs) == 2:
        edges.append(tuple(nbrs))
    return DualGraph(weights, edges, boundary)


def _boundary_branches(g: DualGraph, s: BlowupStep) -> int:
    return sum(1 for c in s.curves if g.is_boundary(c))


def _correction(branches: int, into_boundary: bool) -> int:
    # K gains E once; D gains E if it is kept; the pullback of D carries E
    # once per boundary branch through the center.
    return 1 + int(into_boundary) - branches


def lc_correction(s: BlowupStep, center_on_boundary: bool) -> int:
    """Coefficient of ``E`` in ``(D'' + K'') - sigma^*(D' + K')``.

    An ``on_edge`` center on the boundary is taken to be a node of the
    boundary (subdivisional); an ``on_curve`` center on the boundary is a
    sprouting blow-up.
    """
    if s.kind == "interior":
        if center_on_boundary:
            raise ValueError("an interior center cannot lie on the boundary")
        branches = 0
    elif s.kind == "on_curve":
        branches = 1 if center_on_boundary else 0
    else:
        branches = 2 if center_on_boundary else 0
    return _correction(branches, s.into_boundary)


def center_multiplicity(g: DualGraph, s: BlowupStep, d: Divisor) -> Fraction:
    """Multiplicity at the center of ``s`` of a divisor supported on ``g``."""
    return sum((d[c] for c in s.curves), Fraction(0))


def total_transform(
    g_before: DualGraph,
    s: BlowupStep,
    d: Divisor,
    mult_at_center: Fraction | int | None = None,
) -> Divisor:
    """Pull ``d`` back along ``s``.

    Coefficients of proper transforms are kept and the new curve receives
    ``mult_at_center``. When it is omitted the multiplicity is read off the
    graph, which is exact for divisors supported on graph curves; curves
    outside the graph (tangencies) need the caller to pass it.
    """
    s.validate(g_before)
    _check_support(g_before, d)
    if mult_at_center is None:
        mult_at_center = center_multiplicity(g_before, s, d)
    return d + Divisor({s.new_name: mult_at_center})


def track_log_canonical(g: DualGraph, steps: Sequence[BlowupStep]) -> Divisor:
    """Accumulated ``(Delta + K_W) - rho^*(D + K_V)`` over a blow-up sequence.

    The boundary at each step is read from the graph marks, so a center on an
    edge with one boundary curve counts as a sprouting center.
    """
    corr = Divisor()
    cur = g
    for s in steps:
        s.validate(cur)
        c = _correction(_boundary_branches(cur, s), s.into_boundary)
        corr = total_transform(cur, s, corr) + Divisor({s.new_name: c})
        cur = blow_up(cur, s)
    return corr


def verify_fiber(g: DualGraph, d: Divisor) -> bool:
    """Whether ``d`` is numerically a fiber of a P^1-fibration.

    Checks ``d.C = 0`` on its support, ``d^2 = 0``, primitivity, and that the
    support contracts by repeated (-1)-curve contractions to a single
    0-curve of multiplicity 1.
    """
    if not d or not d.is_effective() or not d.is_integral():
        return False
    if any(name not in g for name in d):
        return False
    sub = g.subgraph(d.support)
    if not sub.is_connected():
        return False
    if any(curve_pairing(sub, d, c) != 0 for c in sub):
        return False
    if intersection_number(sub, d, d) != 0:
        return False
    coeffs = [int(v) for _, v in d.items()]
    g0 = 0
    for c in coeffs:
        g0 = gcd(g0, c)
    if g0 != 1:
        return False
    cur, div = sub, d
    while len(cur) > 1:
        target = next(
            (n for n in cur if cur.weight(n) == -1 and cur.degree(n) <= 2),
            None,
        )
        if target is None:
            return False
        touched = cur.neighbors(target)
        try:
            cur = blow_down(cur, target)
        except ValueError:
            return False
        div = Divisor({k: v for k, v in div.items() if k != target})
        # only the neighbors of the contracted curve changed
        if any(curve_pairing(cur, div, c) != 0 for c in touched):
            return False
    (last,) = cur.names
    return cur.weight(last) == 0 and div[last] == 1
