import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from quotsurf.equivariant import (
    GroupAction,
    PolyEndomorphism,
    certify,
    induced_boundary_map,
    is_keller,
    jacobian,
    origin_fiber,
    origin_fiber_is_origin,
    weight_compatible,
)
from quotsurf.polynomial import X, Y, SparsePoly, parse_poly

import oracles

x, y = sympy.symbols("x y")
P = PolyEndomorphism.parse


def sym(p: SparsePoly):
    return sum(
        (sympy.Rational(c.numerator, c.denominator) * x**i * y**j for (i, j), c in p.terms.items()),
        sympy.Integer(0),
    )


def fiber_is_origin_oracle(e: PolyEndomorphism, max_power: int = 12) -> bool:
    """Nullstellensatz: V(f, g) = {0} iff x^N and y^N lie in (f, g) for some N."""
    if e.f(0, 0) != 0 or e.g(0, 0) != 0:
        return False
    gb = sympy.groebner([sym(e.f), sym(e.g)], x, y, order="grevlex")
    return any(gb.contains(x**k) for k in range(1, max_power)) and any(
        gb.contains(y**k) for k in range(1, max_power)
    )


# -- examples ---------------------------------------------------------------------


def test_jacobian_examples():
    assert jacobian(P("x", "y")) == SparsePoly.constant(1)
    assert jacobian(P("x+y^3", "y")) == SparsePoly.constant(1)
    assert jacobian(P("x^2", "y")) == 2 * X


def test_is_keller_examples():
    assert is_keller(P("x+y^3", "y"))
    assert not is_keller(P("x^2", "y"))
    assert is_keller(P("x", "y"))
    assert not is_keller(P("x", "0"))


def test_weight_compatible_examples():
    act = GroupAction(2, 1)
    assert weight_compatible(parse_poly("x + y^3 - 2*x^2*y + x*y^4"), act, 1)
    assert not weight_compatible(parse_poly("x+y^2"), act, 1)
    for n in range(2, 12):
        for d in range(1, n):
            try:
                a = GroupAction(n, d)
            except ValueError:
                continue
            assert weight_compatible(X, a, 1)
            assert weight_compatible(Y, a, d)


def test_group_action_validation():
    for bad in [(4, 2), (3, 3), (1, 0), (5, 0)]:
        with pytest.raises(ValueError):
            GroupAction(*bad)
    assert GroupAction.parse("2,1") == GroupAction(2, 1)
    with pytest.raises(ValueError):
        GroupAction.parse("2;1")


def test_induced_boundary_map_examples():
    ident = induced_boundary_map(P("x", "y"))
    assert ident.is_identity() and ident.det == 1
    m = induced_boundary_map(P("x+y^3", "y"))
    assert m.matrix == ((1, 0), (0, 1))
    assert all(m(Fraction(t)) == t for t in range(-3, 4))
    m = induced_boundary_map(P("2*x+y", "x+y"))
    assert m.det == 1
    assert all(m(Fraction(t)) == Fraction(1 + t, 2 + t) for t in range(-1, 5))
    assert m(-2) is None
    with pytest.raises(ValueError):
        induced_boundary_map(P("x+y", "2*x+2*y"))


def test_origin_fiber_examples():
    assert origin_fiber_is_origin(P("x", "y"))
    assert origin_fiber_is_origin(P("x+y^3", "y"))
    assert not origin_fiber_is_origin(P("x+1", "y"))
    assert not origin_fiber_is_origin(P("x", "y-y^2"))
    assert not origin_fiber_is_origin(P("x*y", "x*y + x^2"))
    assert origin_fiber_is_origin(P("x^2+y^2", "x*y"))
    with pytest.raises(ValueError):
        origin_fiber_is_origin(PolyEndomorphism(SparsePoly(), Y))


def test_origin_fiber_reports_resultants():
    rep = origin_fiber(P("x+y^3", "y"))
    assert rep.value and len(rep.shears) == 2 and len(set(rep.shears)) == 2
    for r in rep.resultants:
        ((i, j),) = r.terms
        assert i >= 1 and j == 0


small_polys = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda e: 0 < sum(e) <= 3),
    st.integers(-2, 2).filter(bool),
    min_size=1,
    max_size=4,
).map(SparsePoly)


@settings(max_examples=60)
@given(small_polys, small_polys)
def test_origin_fiber_matches_groebner(f, g):
    e = PolyEndomorphism(f, g)
    assert origin_fiber_is_origin(e) == fiber_is_origin_oracle(e)


def test_certify_examples():
    act = GroupAction(2, 1)
    assert certify(P("x", "y"), act).label == "automorphism_by_theorem"
    assert certify(P("x+y^3", "y"), act).label == "automorphism_by_theorem"
    v = certify(P("x+y^2", "y"), act)
    assert not v.certified and v.reason == "equivariance"
    assert v.label == "not_applicable(equivariance)"


def test_certify_reason_order():
    act = GroupAction(2, 1)
    assert certify(P("x^3", "y"), act).reason == "keller"
    assert certify(P("x+y^2", "y"), act).reason == "equivariance"
    assert certify(P("x", "y+x^2"), act).reason == "equivariance"
    # constant shift: Keller but not equivariant
    assert certify(P("x+1", "y"), act).reason == "equivariance"
    # equivariant Keller maps of odd order are never certified
    assert certify(P("x", "y"), GroupAction(3, 1)).reason == "odd_order"
    assert certify(P("x+y^2", "y"), GroupAction(3, 2)).reason == "odd_order"
    assert certify(P("x", "y"), GroupAction(5, 2)).reason == "odd_order"
    assert certify(P("x+y^3", "y"), GroupAction(4, 3)).label == "automorphism_by_theorem"


# -- properties -----------------------------------------------------------------


def test_odd_weight_agrees_with_odd_degree():
    rng = random.Random(1234)
    act = GroupAction(2, 1)
    for _ in range(1000):
        terms = {
            (rng.randint(0, 6), rng.randint(0, 6)): rng.randint(-9, 9) or 1
            for _ in range(rng.randint(1, 6))
        }
        p = SparsePoly(terms)
        odd = all((i + j) % 2 == 1 for i, j in p.terms)
        assert weight_compatible(p, act, 1) == odd


def _triangular(rng, degree=3):
    h = SparsePoly({(0, k): rng.randint(-3, 3) for k in range(2, degree + 1)})
    c = Fraction(rng.choice([1, -1, 2, Fraction(1, 2)]))
    if rng.random() < 0.5:
        return PolyEndomorphism(c * X + h, Y)
    return PolyEndomorphism(X, c * Y + h.compose(Y, X))


def test_chain_rule_on_triangular_maps():
    rng = random.Random(99)
    for _ in range(40):
        e1, e2 = _triangular(rng), _triangular(rng)
        lhs = jacobian(e1.compose(e2))
        rhs = jacobian(e1).compose(e2.f, e2.g) * jacobian(e2)
        assert lhs == rhs


def _odd_triangular(rng):
    b = rng.randint(-3, 3)
    if rng.random() < 0.5:
        return PolyEndomorphism(X + b * Y**3, Y)
    return PolyEndomorphism(X, Y + b * X**3)


def _diag(a, b):
    return PolyEndomorphism(Fraction(a) * X, Fraction(b) * Y)


def test_certify_invariant_under_diagonal_conjugation():
    rng = random.Random(5)
    act = GroupAction(2, 1)
    samples = [P("x+y^3", "y"), P("x+y^2", "y"), P("x^3", "y"), P("x", "y+x^3-2*x*y^2"), P("x+1", "y")]
    samples += [_odd_triangular(rng) for _ in range(10)]
    for e in samples:
        for a, b in [(2, 3), (-1, 5), (Fraction(1, 2), 7)]:
            L, Linv = _diag(a, b), _diag(Fraction(1) / a, Fraction(1) / b)
            conj = L.compose(e).compose(Linv)
            assert certify(conj, act).label == certify(e, act).label


def _certified_degree_three_maps():
    rng = random.Random(11)
    act = GroupAction(2, 1)
    linear = [P("x", "y"), P("2*x+y", "x+y"), P("y", "x"), P("x-y", "y"), P("3*x", "y/3")]
    out = []
    for _ in range(12):
        t = _odd_triangular(rng)
        l1, l2 = rng.choice(linear), rng.choice(linear)
        for e in (t, l1.compose(t), t.compose(l2), l1.compose(t).compose(l2)):
            if e.degree <= 3 and certify(e, act).certified:
                out.append(e)
    return out


def test_certified_maps_have_polynomial_inverses():
    maps = _certified_degree_three_maps()
    assert len(maps) >= 10
    for e in maps:
        bound = e.f.total_degree * e.g.total_degree
        inv = oracles.find_polynomial_inverse(e.f.terms, e.g.terms, bound)
        assert inv is not None, str(e)


def test_known_inverse():
    inv = oracles.find_polynomial_inverse(P("x+y^3", "y").f.terms, P("x+y^3", "y").g.terms, 3)
    assert inv == (x - y**3, y)
