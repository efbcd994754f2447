"""Second, independently written transcription of the catalog polynomials.

Written directly against sympy so that the package evaluators can be
compared with it term by term.  Hyperbolic parameters are symbols
al, be, ga whose exponentials are substituted at evaluation time:
sh(k1 al + k2 be + k3 ga) becomes (t - 1/t)/2 with t = ta**k1 tb**k2 tg**k3.
"""
from __future__ import annotations

import sympy as sp

x, xa, xb, xc, xd = sp.symbols("x x_a x_b x_c x_d")
al, be, ga = sp.symbols("alpha beta gamma")
ta, tb, tg = sp.symbols("t_alpha t_beta t_gamma", positive=True)
phi = al + be - ga


def _t(e):
    e = sp.expand(e)
    k = [int(e.coeff(s)) for s in (al, be, ga)]
    if sp.expand(e - k[0] * al - k[1] * be - k[2] * ga) != 0:
        raise ValueError(f"not an integer combination: {e}")
    return ta ** k[0] * tb ** k[1] * tg ** k[2]


def sh(e):
    t = _t(e)
    return (t - 1 / t) / 2


def zz(e):
    return _t(e)


# quad equations -----------------------------------------------------------

def Q1(d):
    return al * (xa - xc) * (xb - xd) - be * (xa - xb) * (xc - xd) + d * al * be * (al - be)


def Q2():
    return Q1(0) + al * be * (al - be) * (xa + xb + xc + xd + al * be - al ** 2 - be ** 2)


def Q3(d):
    return (sh(al) * (xa * xb + xc * xd) - sh(be) * (xa * xc + xb * xd)
            - sh(al - be) * (xa * xd + xb * xc) - d * sh(al) * sh(be) * sh(al - be))


def H1(e):
    return (xa - xd) * (xb - xc) + 2 * (al - be) - e * (al - be) * (2 + xa + xd)


def H2(e):
    return ((xa - xd) * (xb - xc) - (al - be) * (xa + xb + xc + xd) - (al ** 2 - be ** 2)
            + sp.Rational(e, 2) * (al - be) * ((2 * xa + al + be + 1) * (2 * xd + al + be + 1)
                                               + (al - be) ** 2 - 1))


# linear-in-x coefficients ---------------------------------------------------

def P_A3(d):
    return ((xa * xc - xb * xd) * sh(al - be) + (xc * xd - xa * xb) * sh(ga)
            + (xb * xc - xa * xd) * sh(phi) + d * sh(al - be) * sh(phi) * sh(ga))


def P_A2(d1, d2):
    return (al * (xc - xd) * (xa + xb + 2 * d2 * be ** 2)
            - be * (xa - xb) * (xc + xd + 2 * d2 * al ** 2)
            - ga * (xb - xd) * (xa + xc + 2 * d2 * al * be)
            - d1 * phi * ga * ((al - be) * (xa + xb + xc + xd + ga * phi - al ** 2 - be ** 2) ** d2
                               - 2 * d2 * (al * xa - be * xc)))


def P_C3(d1, d2, d3):
    return ((xa * xc - xb * xd) * zz(be) + (xb * xc - xa * xd) * zz(ga - be)
            + d1 * (zz(-al) - 2 * (d3 * xa * xb - d2 * xc * xd) * zz(al - ga)) * (1 - zz(2 * ga)))


def P_C2(d1, d2, d3):
    g = (ga - 2 * al) ** d3
    return ((xa + xb + 2 * d2 * (be - ga) * be) * (xc - xd) + (xa - xb) * (2 * be - ga) * g
            + d1 * ga * (xc + xd + (2 * al - ga) * g) * (ga - 2 * al) ** d2
            + 2 * d2 * ga * ((al - ga) * al - xc * xd)
            + 2 * d3 * ga * ((al - be) * phi + xa * xb))


def P_C1(d):
    return 2 * ga * (-xc / 2 - xd / 2) ** d - (xa + xb) * (xc - xd)


# face-centered equations ----------------------------------------------------

def A3(d):
    return (x * P_A3(d) + sh(be) * (xa * x ** 2 - xb * xc * xd)
            - sh(be - ga) * (xb * x ** 2 - xa * xc * xd) - sh(al) * (xc * x ** 2 - xa * xb * xd)
            + sh(al - ga) * (xd * x ** 2 - xa * xb * xc)
            + d * (sh(be - ga) * sh(al - ga) * (sh(al) * xa - sh(be) * xc)
                   + sh(al) * sh(be) * (sh(ga - al) * xb - sh(ga - be) * xd)))


def A2(d1, d2):
    return (x * P_A2(d1, d2)
            - al * (xc - xd) * (x ** 2 + xa * xb - d1 * be ** 2 * (xa + xb - be ** 2) ** d2)
            + be * (xa - xb) * (x ** 2 + xc * xd - d1 * al ** 2 * (xc + xd - al ** 2) ** d2)
            + ga * (xb - xd) * (x ** 2 + xa * xc - d1 * al * be * (xa + xc - (al - be) ** 2 - al * be) ** d2)
            + d1 * ga * phi * ((al * xa - be * xc + d2 * (al - be) * al * be)
                               * (xb + xd + (al - ga) * (ga - be)) ** d2
                               + d2 * ((al - be) * (xa * xc - x ** 2) - al ** 3 * xa + be ** 3 * xc)))


def C3(d1, d2, d3):
    return (x * P_C3(d1, d2, d3)
            + (xa * xb + 2 * d2 * sh(be) * sh(be - ga)) * (xd - xc * zz(ga))
            + (xd * zz(ga) - xc) * x ** 2
            + d1 * zz(-al) * (1 + 2 * d2 * xc * xd * zz(2 * al - ga))
            * ((zz(be) - 2 * d3 * zz(2 * al - be) * x ** 2) * (xb * zz(ga) - xa)
               + (xa * zz(ga) - xb) * (zz(ga - be) - 2 * d3 * zz(al + phi) * x ** 2)))


def C2(d1, d2, d3):
    g = (ga - 2 * al) ** d3
    return (x * P_C2(d1, d2, d3) + (x ** 2 - xa * xb) * ga * g - (x ** 2 + xa * xb) * (xc - xd)
            + d1 * be * (be - ga) * (ga * g + (xc - xd)) * (be * (ga - be) + xa + xb) ** d2
            - 2 * d3 * ga * (xa + xb) * x ** 2
            + d1 * (be * (xa - xb) - ga * xa)
            * (xc + xd + (2 * al - ga) * g + 2 * d3 * (al * (al - ga) - x ** 2)) * (ga - 2 * al) ** d2
            + 2 * d2 * (be * ga * (be - ga) * (al + xc) * (al - ga + xd)
                        + (ga * xa - be * (xa - xb)) * (al * (ga - al) + xc * xd)))


def C1(d):
    return (x * P_C1(d) + 2 * (be * (xa - xb) - ga * xa) * (-xc / 2 - xd / 2) ** d
            + (x ** 2 + xa * xb + d * be * (ga - be)) * (xc - xd))


def _flag(v):
    v = sp.Rational(str(v))
    return int(v) if v.q == 1 else v


QUADS = {"Q1": Q1, "Q2": Q2, "Q3": Q3, "H1": H1, "H2": H2}
FACES = {"A3": A3, "A2": A2, "C3": C3, "C2": C2, "C1": C1}
P1 = {"A3": P_A3, "A2": P_A2, "C3": P_C3, "C2": P_C2, "C1": P_C1}
HYPERBOLIC = {"Q3", "A3", "C3"}


def expression(spec):
    """Oracle expression for an EquationSpec (swap ignored)."""
    fam = spec.family
    table = QUADS if fam in QUADS else FACES
    return table[fam](*[_flag(f) for f in spec.flags])


def p1_expression(spec):
    return P1[spec.family](*[_flag(f) for f in spec.flags])


def substitution(spec, variables, params) -> dict:
    """Map oracle symbols to exact sample values.

    ``variables`` are (x_a, x_b, x_c, x_d) or (x, x_a, x_b, x_c, x_d); hyperbolic
    ``params`` are HypParam and enter through their encodings.
    """
    syms = (xa, xb, xc, xd) if len(variables) == 4 else (x, xa, xb, xc, xd)
    sub = {s: sp.Rational(str(v)) for s, v in zip(syms, variables)}
    if spec.family in HYPERBOLIC:
        tsyms = (ta, tb, tg)
        sub.update({t: sp.Rational(str(p.expv)) for t, p in zip(tsyms, params)})
    else:
        sub.update({s: sp.Rational(str(p)) for s, p in zip((al, be, ga), params)})
    return sub


def evaluate(expr, sub):
    return sp.Rational(expr.subs(sub))
