"""Acceptance criteria 1 to 8.

Every test carries a ``criterion`` marker; ``conftest.py`` folds the
outcomes into one PASS/FAIL line per criterion at the end of the run.
Running this file directly does the same for just this module.
"""

import io
import random
from functools import lru_cache
from fractions import Fraction
from math import gcd

import networkx as nx
import pytest
import sympy

from quotsurf.cli import run
from quotsurf.dualgraph import (
    BlowupStep,
    Divisor,
    DualGraph,
    blow_down,
    blow_up,
    fundamental_cycle,
    lc_correction,
    total_transform,
    track_log_canonical,
    verify_fiber,
)
from quotsurf.equivariant import GroupAction, PolyEndomorphism, certify
from quotsurf.exactmath import hj_expand, multiplicity_sequence
from quotsurf.pencil import (
    contract_to_hirzebruch,
    expected_special_member,
    pencil_member_class,
    resolve_pencil,
)
from quotsurf.quotient import (
    CyclicQuotientType,
    ForkSpec,
    build_standard_completion,
    bundled_forks,
    complete_fiber,
    freeness_defect,
    infinity_types,
    log_canonical_class,
    section_weight,
)

import oracles

criterion = pytest.mark.criterion

PENCIL_GRID = [(n, a) for n in range(1, 6) for a in range(1, 5)]


def coprime_types(limit, d_min):
    return [
        CyclicQuotientType(n, d)
        for n in range(2, limit + 1)
        for d in range(d_min, n)
        if gcd(n, d) == 1
    ]


@lru_cache(maxsize=None)
def completion(model):
    return build_standard_completion(model)


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue()


# -- 1 -------------------------------------------------------------------------------


@criterion(1)
def test_anchored_values():
    assert cli("hj", "6", "5") == (0, "2 2 2 2 2\n")
    assert hj_expand(6, 5) == [2, 2, 2, 2, 2]
    assert section_weight(CyclicQuotientType(6, 5)) == -2
    for n in range(2, 21):
        assert section_weight(CyclicQuotientType(n, 1)) == -n


# -- 2 -------------------------------------------------------------------------------


def _arm(pair):
    p, q = pair
    return hj_expand(p, q) if p > 1 else []


@criterion(2)
def test_multiplicity_law():
    checked = 0
    for t in coprime_types(60, 2):
        n, d = t.n, t.d
        e = next(e for e in range(1, n) if (d * e - (n - d + 1)) % n == 0)
        expected = (n // gcd(n, d - 1), n // gcd(n, e))
        pairs = infinity_types(t)
        got = tuple(complete_fiber(_arm(p), attach_end="first").mF for p in pairs)
        assert got == expected, (n, d)
        degenerate = sorted(m for m in expected if m > 1)
        sc = completion(t)
        assert sorted(fb.multiplicity for fb in sc.fibers) == degenerate
        checked += 1
    assert checked == sum(1 for n in range(2, 61) for d in range(2, n) if gcd(n, d) == 1)


# -- 3 -------------------------------------------------------------------------------


def _platonic_forks():
    forks = {f"2,2,{n}": ForkSpec(-2, ([2], [2], [2] * (n - 1))) for n in range(2, 7)}
    bundled = bundled_forks()
    forks.update({"2,3,3": bundled["E6"], "2,3,4": bundled["E7"], "2,3,5": bundled["E8"]})
    return forks


@criterion(3)
def test_log_canonical_cyclic():
    types = coprime_types(60, 1)
    assert any(t.d == 1 for t in types) and any(t.d > 1 for t in types)
    for t in types:
        rep = log_canonical_class(completion(t))
        assert rep.verified, (t.n, t.d, rep.offending)


@criterion(3)
def test_log_canonical_forks():
    for name, spec in _platonic_forks().items():
        rep = log_canonical_class(completion(spec))
        assert rep.verified, (name, rep.offending)


# -- 4 -------------------------------------------------------------------------------


def _expected_weight_pattern(n, a):
    w = {"l0": -1, "S1": -1, "F": -1, "S0": -n, f"E{n}": -(a + 1)}
    w.update({f"E{k}": -2 for k in range(1, n)})
    w.update({f"A{j}": -2 for j in range(1, a + 1)})
    w.update({f"B{j}": -2 for j in range(1, a)})
    return w


@criterion(4)
@pytest.mark.parametrize("n,a", PENCIL_GRID)
def test_pencil_resolution(n, a):
    pr = resolve_pencil(n, a)
    assert pr.graph.weights == _expected_weight_pattern(n, a)
    c0 = Divisor({"S1": a, "l0": 1, **{f"E{k}": 1 for k in range(1, n + 1)}})
    c0 = c0 + Divisor({f"A{j}": a for j in range(1, a + 1)})
    c0 = c0 + Divisor({f"B{j}": a - j for j in range(1, a)})
    assert pr.special_member == c0 == expected_special_member(n, a)
    assert verify_fiber(pr.graph, pr.special_member)
    assert len(pr.steps) == n + 2 * a
    contracted = contract_to_hirzebruch(pr)
    assert contracted.final.n == n
    assert contracted.graph.weight("S0") == -n


# -- 5 -------------------------------------------------------------------------------


@criterion(5)
@pytest.mark.xfail(
    strict=True,
    reason="for a = 1 the sequence of (n+1, 1) holds n+1 entries equal to 1, not n",
)
def test_cusp_accounting_full_range():
    for n, a in PENCIL_GRID:
        seq = multiplicity_sequence(a * n + 1, a)
        assert seq.count(a) == n, (n, a, seq)
        assert sum(m * (m - 1) // 2 for m in seq) == a * n * (a - 1) // 2
        assert a * n * (a - 1) // 2 == pencil_member_class(n, a).arithmetic_genus


def test_cusp_accounting_for_genuine_cusps():
    for n, a in PENCIL_GRID:
        seq = multiplicity_sequence(a * n + 1, a)
        genus = pencil_member_class(n, a).arithmetic_genus
        assert sum(m * (m - 1) // 2 for m in seq) == a * n * (a - 1) // 2 == genus
        if a > 1:
            assert seq.count(a) == n


# -- 6 -------------------------------------------------------------------------------


@criterion(6)
def test_correction_table():
    cases = [
        (BlowupStep.interior("E", True), False),
        (BlowupStep.on_edge("a", "b", "E", True), True),
        (BlowupStep.on_edge("a", "b", "E", False), True),
        (BlowupStep.on_curve("a", "E", False), True),
        (BlowupStep.on_curve("a", "E", True), True),
    ]
    assert [lc_correction(s, on) for s, on in cases] == [2, 0, -1, 0, 1]


@criterion(6)
def test_sprouting_then_subdivisional_shape():
    g = DualGraph({"D": -2}, (), ("D",))
    sprout = BlowupStep.on_curve("D", "A1", True)
    subdivide = BlowupStep.on_edge("D", "A1", "A2", False)
    corr = track_log_canonical(g, [sprout, subdivide])
    g1 = blow_up(g, sprout)
    pulled = total_transform(g1, subdivide, Divisor(A1=1))
    assert blow_up(g1, subdivide).weight("A2") == -1
    assert corr == pulled - Divisor(A2=1)
    assert corr.is_effective()
    assert (corr - Divisor(A1=1)).is_effective()


# -- 7 -------------------------------------------------------------------------------

COEFF_BOUND = 6


def _graph(nxg, weights):
    return DualGraph(
        {f"v{i}": w for i, w in zip(nxg.nodes, weights)},
        [(f"v{a}", f"v{b}") for a, b in nxg.edges],
    )


def _oracle_family():
    """Connected graphs on up to 8 vertices with seeded weights.

    Every connected graph from the atlas (up to 7 vertices), all trees on
    8 vertices, and seeded random connected graphs on 8 vertices. Each
    shape gets the all -2 weighting plus seeded draws from -2, -3, -4;
    the non-negative-definite ones are dropped.
    """
    rng = random.Random(20260418)
    shapes = [h for h in nx.graph_atlas_g()[1:] if nx.is_connected(h)]
    shapes += list(nx.nonisomorphic_trees(8))
    extra = 0
    while extra < 40:
        h = nx.gnm_random_graph(8, rng.randint(8, 12), seed=rng.randrange(10**9))
        if nx.is_connected(h):
            shapes.append(h)
            extra += 1
    for h in shapes:
        k = h.number_of_nodes()
        draws = [[-2] * k] + [[rng.choice((-2, -3, -4)) for _ in range(k)] for _ in range(4)]
        for w in draws:
            g = _graph(h, w)
            if oracles.negative_definite_np(oracles.weighted_matrix(g.weights, g.edges, g.names)):
                yield g


@criterion(7)
def test_fundamental_cycle_matches_brute_force():
    seen = beyond_bound = 0
    for g in _oracle_family():
        names = list(g.names)
        expected = oracles.brute_fundamental_cycle(
            oracles.weighted_matrix(g.weights, g.edges, names), COEFF_BOUND
        )
        z = fundamental_cycle(g)
        ours = [int(z[n]) for n in names]
        if expected is None:
            assert max(ours) > COEFF_BOUND
            beyond_bound += 1
        else:
            assert ours == expected, names
        seen += 1
    assert seen > 1000 and beyond_bound < seen


@criterion(7)
def test_complete_fiber_matches_exhaustive_search():
    arms = oracles.chains_up_to_determinant(12)
    candidates = oracles.chains_up_to_determinant(12)
    assert len(arms) > 20
    for T in arms:
        hits = oracles.search_fiber_completion(T, candidates)
        assert len(hits) == 1, T
        R, mult = hits[0]
        fc = complete_fiber(T)
        assert fc.R == R
        assert [int(fc.multiplicities[n]) for n in fc.order] == mult


def _random_graph(rng):
    k = rng.randint(1, 7)
    weights = {f"c{i}": rng.randint(-5, 2) for i in range(k)}
    edges = [(f"c{rng.randrange(i)}", f"c{i}") for i in range(1, k)]
    extra = rng.randint(0, 2)
    for _ in range(extra):
        a, b = rng.sample(range(k), 2) if k > 1 else (0, 0)
        if a != b:
            edges.append((f"c{a}", f"c{b}"))
    boundary = [n for n in weights if rng.random() < 0.5]
    return DualGraph(weights, sorted(set(tuple(sorted(e)) for e in edges)), boundary)


def _random_step(rng, g):
    choices = ["interior", "on_curve"] + (["on_edge"] if g.edges else [])
    kind = rng.choice(choices)
    into = rng.random() < 0.5
    if kind == "interior":
        return BlowupStep.interior("new", into)
    if kind == "on_curve":
        return BlowupStep.on_curve(rng.choice(g.names), "new", into)
    a, b = rng.choice(g.edges)
    return BlowupStep.on_edge(a, b, "new", into)


@criterion(7)
def test_blow_down_inverts_blow_up_randomized():
    rng = random.Random(7)
    kinds = set()
    for _ in range(1000):
        g = _random_graph(rng)
        step = _random_step(rng, g)
        kinds.add(step.kind)
        up = blow_up(g, step)
        assert up.weight("new") == -1
        assert blow_down(up, "new") == g
    assert kinds == {"interior", "on_curve", "on_edge"}


# -- 8 -------------------------------------------------------------------------------


@criterion(8)
def test_keller_certification():
    act = GroupAction(2, 1)
    e = PolyEndomorphism.parse("x+y^3", "y")
    assert certify(e, act).label == "automorphism_by_theorem"
    x, y = sympy.symbols("x y")
    inv = oracles.find_polynomial_inverse(e.f.terms, e.g.terms, 3)
    assert inv == (x - y**3, y)
    rejected = certify(PolyEndomorphism.parse("x+y^2", "y"), act)
    assert not rejected.certified and rejected.reason == "equivariance"


@criterion(8)
def test_freeness_scalar_negative_for_platonic_triplets():
    forks = {f"2,2,{n}": ForkSpec(-2, ([2], [2], [2] * (n - 1))) for n in range(2, 21)}
    forks.update(_platonic_forks())
    for name, spec in forks.items():
        sc = completion(spec)
        rep = freeness_defect(sc)
        assert rep.verified and rep.scalar < 0, (name, rep.scalar)
        assert rep.scalar == 1 - sum(Fraction(1, fb.multiplicity) for fb in sc.fibers)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
