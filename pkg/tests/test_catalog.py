from __future__ import annotations

import random

import oracle
import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from hexeq.catalog import (CORRESPONDENCE, abs_partner, all_specs, eval_face, eval_quad, extract_p1,
                           p1_as_quad, parse_spec, published_p1, symmetry_applies, symmetry_residual,
                           trapezoidal)
from hexeq.errors import (DegenerateSample, DomainMismatch, EllipticUnavailable, NotApplicable,
                          UnknownFamily, UnsupportedFamily)
from hexeq.scalar import EllipticContext, HypParam

ORACLE_QUADS = [s for s in all_specs() if s.family in oracle.QUADS]
ORACLE_FACES = [s for s in all_specs() if s.family in oracle.FACES]
EXACT_QUADS = [s for s in all_specs() if s.is_quad and s.domain != "elliptic"]
EXACT_FACES = [s for s in all_specs() if s.is_face and s.domain != "elliptic"]

rationals = st.builds(lambda n, d: mpq(n, d), st.integers(-20, 20), st.integers(1, 12))
expvs = st.builds(lambda n, d: mpq(n, d), st.integers(1, 20), st.integers(1, 12)).filter(lambda v: v != 1)


def _params(spec, rng, n):
    if spec.domain == "hyperbolic":
        out = []
        while len(out) < n:
            v = mpq(rng.randint(1, 9), rng.randint(1, 9))
            if v != 1:
                out.append(HypParam(v))
        return out
    return [mpq(rng.randint(-9, 9) or 1, rng.randint(1, 9)) for _ in range(n)]


def _vars(rng, n):
    return [mpq(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n)]


def _sp(v):
    return sp.Rational(str(v))


# -- specs -------------------------------------------------------------------

def test_parse_spec_forms():
    assert parse_spec("Q3:d=1").id == "Q3:d=1"
    assert parse_spec("C3(1/2;0;1/2)") == parse_spec("C3:1/2,0,1/2")
    assert parse_spec("C1_0") == parse_spec("C1:d=0")
    assert parse_spec("H2:e=1;swap").swap == "ab_cd"
    assert parse_spec("H3:d=1,e=1;swap-ac").swap == "ac_bd"
    assert parse_spec("A2:1,0").label == "A2(1;0)"
    with pytest.raises(UnknownFamily):
        parse_spec("Q5")
    with pytest.raises(UnknownFamily):
        parse_spec("A2:1,2")


def test_catalog_size():
    assert len(all_specs("Q")) == 6
    assert len(all_specs("H")) == 7
    assert len(all_specs("A")) == 6
    assert len(all_specs("C")) == 10


# -- quad equations -------------------------------------------------------------

def test_eval_quad_examples():
    q1 = parse_spec("Q1:d=0")
    assert eval_quad(q1, [mpq(5, 3)] * 4, mpq(2), mpq(7)) == 0
    assert eval_quad(q1, [1, 2, 3, 4], mpq(1), mpq(2)) == 2
    h1 = parse_spec("H1:e=0")
    assert eval_quad(h1, [mpq(3), mpq(1, 2), mpq(-4), mpq(3)], mpq(2), mpq(2)) == 0


@pytest.mark.parametrize("spec", ORACLE_QUADS, ids=str)
def test_quads_match_oracle(spec):
    rng = random.Random(spec.id)
    expr = oracle.expression(spec)
    for _ in range(50):
        vs = _vars(rng, 4)
        al, be = _params(spec, rng, 2)
        sub = oracle.substitution(spec, vs, (al, be, al))
        assert _sp(eval_quad(spec, vs, al, be)) == oracle.evaluate(expr, sub)


def test_swapped_quad_permutes_arguments():
    base, swapped = parse_spec("H2:e=1"), parse_spec("H2:e=1;swap")
    vs = [mpq(1), mpq(2, 3), mpq(-5), mpq(7, 2)]
    assert eval_quad(swapped, vs, mpq(2), mpq(3)) == eval_quad(base, [vs[1], vs[0], vs[3], vs[2]], mpq(2), mpq(3))


def test_domain_mismatch():
    with pytest.raises(DomainMismatch):
        eval_quad(parse_spec("Q1:d=1"), [1, 2, 3, 4], HypParam(2), HypParam(3))
    with pytest.raises(DomainMismatch):
        eval_quad(parse_spec("Q3:d=1"), [1, 2, 3, 4], mpq(2), mpq(3))
    with pytest.raises(EllipticUnavailable):
        eval_quad(parse_spec("Q4"), [1, 2, 3, 4], 0.3, 0.2)
    with pytest.raises(UnsupportedFamily):
        eval_quad(parse_spec("A2:0,0"), [1, 2, 3, 4], 1, 2)


@pytest.mark.parametrize("spec", EXACT_QUADS, ids=str)
@settings(max_examples=20, deadline=None)
@given(data=st.data())
def test_quad_multilinear(spec, data):
    vs = data.draw(st.lists(rationals, min_size=4, max_size=4))
    h = data.draw(rationals.filter(lambda v: v != 0))
    if spec.domain == "hyperbolic":
        al, be = HypParam(data.draw(expvs)), HypParam(data.draw(expvs))
    else:
        al, be = data.draw(rationals), data.draw(rationals)
    for slot in range(4):
        def f(k):
            w = list(vs)
            w[slot] += k * h
            return eval_quad(spec, w, al, be)
        assert f(2) - 2 * f(1) + f(0) == 0


# -- face-centered equations ----------------------------------------------------

def test_eval_face_examples():
    c1 = parse_spec("C1:d=0")
    v = mpq(3, 7)
    assert eval_face(c1, v, [v] * 4, [mpq(1), mpq(2), mpq(5)]) == 0
    a2 = parse_spec("A2:0,0")
    u = mpq(-2, 5)
    assert eval_face(a2, mpq(9), [u, u, u, u], [mpq(1), mpq(3), mpq(4)]) == 0


@pytest.mark.parametrize("spec", ORACLE_FACES, ids=str)
def test_faces_match_oracle(spec):
    rng = random.Random(spec.id)
    expr = oracle.expression(spec)
    for _ in range(50):
        vs = _vars(rng, 5)
        ps = _params(spec, rng, 3)
        sub = oracle.substitution(spec, vs, ps)
        assert _sp(eval_face(spec, vs[0], vs[1:], ps)) == oracle.evaluate(expr, sub)


@pytest.mark.parametrize("spec", ORACLE_FACES, ids=str)
def test_p1_matches_oracle_coefficient(spec):
    # the coefficient of x in the full oracle polynomial must equal both the
    # published P-polynomial and the package's P1
    full = sp.expand(oracle.expression(spec))
    coeff = full.coeff(oracle.x, 1)
    assert sp.simplify(coeff - oracle.p1_expression(spec)) == 0
    rng = random.Random("p1" + spec.id)
    for _ in range(20):
        vs = _vars(rng, 4)
        ps = _params(spec, rng, 3)
        sub = oracle.substitution(spec, vs, ps)
        assert _sp(published_p1(spec, vs, ps)) == oracle.evaluate(coeff, sub)


@pytest.mark.parametrize("spec", EXACT_FACES, ids=str)
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_face_degree_and_corner_multilinearity(spec, data):
    vs = data.draw(st.lists(rationals, min_size=5, max_size=5))
    h = data.draw(rationals.filter(lambda v: v != 0))
    if spec.domain == "hyperbolic":
        ps = [HypParam(data.draw(expvs)) for _ in range(3)]
    else:
        ps = [data.draw(rationals) for _ in range(3)]

    def f(slot, k):
        w = list(vs)
        w[slot] += k * h
        return eval_face(spec, w[0], w[1:], ps)

    assert f(0, 3) - 3 * f(0, 2) + 3 * f(0, 1) - f(0, 0) == 0
    for slot in range(1, 5):
        assert f(slot, 2) - 2 * f(slot, 1) + f(slot, 0) == 0


def test_extract_p1_examples():
    c1 = parse_spec("C1:d=0")
    v = mpq(5, 2)
    ga = mpq(7, 3)
    assert extract_p1(c1, [v] * 4, [mpq(1), mpq(2), ga]) == 2 * ga
    a2 = parse_spec("A2:0,0")
    corners, ps = [mpq(1), mpq(-2), mpq(3, 4), mpq(5)], [mpq(2), mpq(1, 3), mpq(-1)]
    # three-point interpolation in x
    f = [eval_face(a2, mpq(k), corners, ps) for k in (-1, 0, 1)]
    assert extract_p1(a2, corners, ps) == (f[2] - f[0]) / 2


def test_extract_p1_degenerate_and_unsupported():
    a2 = parse_spec("A2:0,0")
    u = mpq(3)
    with pytest.raises(DegenerateSample):
        extract_p1(a2, [u] * 4, [mpq(1), mpq(2), mpq(3)])
    assert extract_p1(a2, [u] * 4, [mpq(1), mpq(2), mpq(3)], allow_zero=True) == 0
    with pytest.raises(UnsupportedFamily):
        extract_p1(parse_spec("A4"), [1, 2, 3, 4], [0.1, 0.2, 0.3])


def test_a4_requires_context_and_evaluates():
    a4 = parse_spec("A4")
    with pytest.raises(EllipticUnavailable):
        eval_face(a4, 0.1, [0.2, 0.3, 0.4, 0.5], [0.3, 0.4, 0.5])
    ctx = EllipticContext(1.2, 0.1)
    value = eval_face(a4, 0.1 + 0.2j, [0.2, -0.3j, 0.4, 0.5 + 0.1j], [0.3, 0.41 + 0.05j, 0.52], ctx)
    assert isinstance(value, complex)


# -- trapezoidal type-H -----------------------------------------------------------

def test_trapezoidal_alpha_zero():
    for spec in all_specs("H"):
        rng = random.Random(spec.id)
        vs = _vars(rng, 4)
        if spec.domain == "hyperbolic":
            zero, be = HypParam(1), HypParam(mpq(3, 2))
        else:
            zero, be = mpq(0), mpq(3, 2)
        assert trapezoidal(spec, vs, zero, be) == eval_quad(spec, [vs[0], vs[3], vs[2], vs[1]], be, be)


def test_trapezoidal_h1_example():
    h1 = parse_spec("H1:e=0")
    al, be, xd = mpq(5, 3), mpq(-2), mpq(7, 4)
    # oracle value from the H1 polynomial at the permuted arguments
    sub = {oracle.xa: 2, oracle.xb: _sp(xd), oracle.xc: 0, oracle.xd: 1,
           oracle.al: _sp(be - al), oracle.be: _sp(be)}
    expected = oracle.evaluate(oracle.H1(0), sub)
    got = trapezoidal(h1, [mpq(2), mpq(1), mpq(0), xd], al, be)
    assert _sp(got) == expected == _sp(xd - 2 * al)
    # the tabulated form -x_d + 2 alpha is the same equation up to sign
    assert got == -(-xd + 2 * al)


def test_trapezoidal_involution():
    for spec in all_specs("H"):
        rng = random.Random("inv" + spec.id)
        a, b, c, d = _vars(rng, 4)
        al, be = _params(spec, rng, 2)
        # (alpha, beta) -> (beta - alpha, beta) applied twice is the identity
        assert trapezoidal(spec, [a, d, c, b], be - al, be) == eval_quad(spec, [a, b, c, d], al, be)


def test_trapezoidal_only_for_type_h():
    with pytest.raises(UnsupportedFamily):
        trapezoidal(parse_spec("Q1:d=0"), [1, 2, 3, 4], 1, 2)


# -- correspondence and symmetries ----------------------------------------------------

def test_a2_00_to_q1_0_constant_is_minus_one():
    b, d, al, be = oracle.xb, oracle.xd, oracle.al, oracle.be
    # P1(x_a, -x_d, x_c, x_b; alpha, alpha - beta, alpha - beta)
    p1 = oracle.P_A2(0, 0).subs({b: -d, d: b, be: al - be, oracle.ga: al - be}, simultaneous=True)
    assert sp.expand(p1 + oracle.Q1(0)) == 0
    # and the package agrees at a sample
    vs, al_, be_ = [mpq(1), mpq(3), mpq(-2), mpq(7)], mpq(2), mpq(1, 3)
    assert p1_as_quad(parse_spec("A2:0,0"), vs, al_, be_) == -eval_quad(parse_spec("Q1:d=0"), vs, al_, be_)


def test_correspondence_table():
    assert len(CORRESPONDENCE) == 15
    assert abs_partner(parse_spec("C2:1,1,0")) == parse_spec("H2:e=1;swap-ac")
    assert abs_partner(parse_spec("A3:d=1")) == parse_spec("Q3:d=1")


def test_symmetry_examples():
    rng = random.Random(11)
    q1 = parse_spec("Q1:d=0")
    for _ in range(50):
        sample = (_vars(rng, 4), *_params(q1, rng, 2))
        assert symmetry_residual("quad-sym-1", q1, sample) == 0
    a2 = parse_spec("A2:1,1")
    for _ in range(20):
        vs = _vars(rng, 5)
        assert symmetry_residual("face-sym-3", a2, (vs[0], vs[1:], _params(a2, rng, 3))) == 0


def test_h_epsilon_one_fails_first_square_symmetry():
    h1 = parse_spec("H1:e=1")
    assert not symmetry_applies("quad-sym-1", h1)
    with pytest.raises(NotApplicable):
        symmetry_residual("quad-sym-1", h1, ([1, 2, 3, 4], mpq(1), mpq(2)))
    sample = ([mpq(1), mpq(2), mpq(-3), mpq(5, 2)], mpq(3), mpq(1, 2))
    assert symmetry_residual("quad-sym-1", h1, sample, force=True) != 0
    assert symmetry_residual("quad-sym-2", h1, sample) == 0


def test_type_c_only_first_face_symmetry():
    c2 = parse_spec("C2:1,0,0")
    assert symmetry_applies("face-sym-1", c2)
    assert not symmetry_applies("face-sym-2", c2)
    assert not symmetry_applies("face-sym-3", c2)
