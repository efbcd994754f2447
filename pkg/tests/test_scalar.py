from __future__ import annotations

import cmath
from fractions import Fraction

import mpmath
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from hexeq.errors import DomainMismatch, PoleAtLatticePoint
from hexeq.scalar import (EllipticContext, HypParam, Z, ch, hyp_eval, rat, rat_str, sh,
                          weierstrass_eval)

expvs = st.fractions(min_value=Fraction(1, 50), max_value=50).filter(lambda f: f > 0)


def test_hyp_eval_examples():
    p = HypParam(mpq(7, 3))
    assert hyp_eval("exp", [0], [p]) == 1
    assert hyp_eval("sinh", [1, -1], [p, HypParam(mpq(7, 3))]) == 0
    assert hyp_eval("sinh", [1], [HypParam(2)]) == mpq(3, 4)


def test_hyp_eval_combination():
    a, b = HypParam(mpq(2)), HypParam(mpq(3, 5))
    assert hyp_eval("exp", [2, -1], [a, b]) == mpq(4) / mpq(3, 5)
    assert hyp_eval("sinh", [1, 1], [a, b]) == sh(a + b)
    with pytest.raises(ValueError):
        hyp_eval("cosh", [1], [a])
    with pytest.raises(ValueError):
        hyp_eval("exp", [1, 2], [a])


def test_hyp_param_arithmetic():
    a = HypParam(mpq(3, 2))
    assert (a - a).is_zero()
    assert (-a).expv == mpq(2, 3)
    assert (2 * a).expv == mpq(9, 4)
    assert Z(a) == mpq(3, 2)
    with pytest.raises(DomainMismatch):
        HypParam(0)


def test_rat_coercion():
    assert rat("3/6") == mpq(1, 2)
    assert rat(Fraction(2, 4)) == mpq(1, 2)
    assert rat(5) == 5
    assert rat_str(mpq(-4, 6)) == "-2/3"
    assert rat_str(3) == "3/1"
    with pytest.raises(DomainMismatch):
        rat(0.5)


@settings(max_examples=100, deadline=None)
@given(expvs, expvs)
def test_sinh_addition_law(u, v):
    a, b = HypParam(mpq(u.numerator, u.denominator)), HypParam(mpq(v.numerator, v.denominator))
    assert hyp_eval("sinh", [1, 1], [a, b]) == sh(a) * ch(b) + ch(a) * sh(b)


@settings(max_examples=50, deadline=None)
@given(expvs, expvs, st.integers(-3, 3), st.integers(-3, 3))
def test_exact_closure(u, v, k1, k2):
    a, b = HypParam(mpq(u.numerator, u.denominator)), HypParam(mpq(v.numerator, v.denominator))
    value = hyp_eval("sinh", [k1, k2], [a, b]) * hyp_eval("exp", [k2, k1], [a, b]) + sh(a)
    assert type(value) is type(mpq(0))


CTX = EllipticContext(2.0, 0.1)


def test_wp_laurent_limit():
    z = 1e-4
    p, _ = weierstrass_eval(z, CTX)
    assert abs(p * z * z - 1) < 1e-12


def test_wp_parity():
    for z in (0.3 + 0.1j, -0.7 + 0.25j, 0.11 - 0.4j):
        p, dp = weierstrass_eval(z, CTX)
        pm, dpm = weierstrass_eval(-z, CTX)
        assert p == pm and dp == -dpm


def test_wp_differential_equation():
    import random
    rng = random.Random(5)
    for _ in range(100):
        z = complex(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9))
        if abs(z) < 0.05:
            continue
        p, dp = weierstrass_eval(z, CTX)
        scale = abs(dp) ** 2 + abs(4 * p ** 3) + 1
        assert abs(dp * dp - CTX.xdot(p)) < 1e-10 * scale


def _wp_jacobi(z, g2, g3):
    # real roots e1 > e2 > e3: wp(z) = e3 + (e1 - e3) / sn(sqrt(e1 - e3) z, m)^2
    roots = sorted((complex(r).real for r in mpmath.polyroots([4, 0, -g2, -g3])), reverse=True)
    e1, e2, e3 = roots
    m = (e2 - e3) / (e1 - e3)
    sn = mpmath.ellipfun("sn", mpmath.sqrt(e1 - e3) * z, m=m)
    return complex(e3 + (e1 - e3) / sn ** 2)


def test_wp_against_jacobi_oracle():
    mpmath.mp.dps = 30
    for z in (0.2, 0.5 + 0.3j, 0.35 - 0.6j, 1.1 + 0.05j):
        ours, _ = weierstrass_eval(z, CTX)
        ref = _wp_jacobi(z, 2.0, 0.1)
        assert abs(ours - ref) < 1e-10 * abs(ref)


def test_wp_pole_and_degenerate_curve():
    with pytest.raises(PoleAtLatticePoint):
        weierstrass_eval(0, CTX)
    with pytest.raises(DomainMismatch):
        EllipticContext(3.0, 1.0)


def test_wp_complex_invariants():
    ctx = EllipticContext(1.0 + 0.2j, -0.3j)
    p, dp = weierstrass_eval(0.4 + 0.1j, ctx)
    assert abs(dp * dp - ctx.xdot(p)) < 1e-10 * abs(dp * dp)
    assert cmath.isfinite(p)
