"""Equation catalog: quad (type-Q/H) and face-centered (type-A/C) polynomials.

Every polynomial is written once, generically over the parameter arithmetic,
so the same code evaluates

* exact rationals (``mpq`` variables and parameters),
* exact hyperbolic families (``mpq`` variables, :class:`HypParam` parameters),
* complex doubles (numeric mode, used by the legs module and the elliptic
  families).

Argument order follows the hexagon/square conventions used throughout the
package: quad ``Q(x_a, x_b, x_c, x_d; alpha, beta)`` and face-centered
``A(x; x_a, x_b, x_c, x_d; alpha, beta, gamma)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

from .errors import (DegenerateSample, DomainMismatch, EllipticUnavailable,
                     HexeqError, NotApplicable, UnknownFamily, UnsupportedFamily)
from .scalar import MPQ, EllipticContext, HypParam, Z, rat, sh

QUAD_FAMILIES = ("Q1", "Q2", "Q3", "Q4", "H1", "H2", "H3")
FACE_FAMILIES = ("A2", "A3", "A4", "C1", "C2", "C3")

HALF = mpq(1, 2)

ALLOWED_FLAGS = {
    "Q1": [(0,), (1,)],
    "Q2": [()],
    "Q3": [(1,), (0,)],
    "Q4": [()],
    "H1": [(1,), (0,)],
    "H2": [(1,), (0,)],
    "H3": [(1, 1), (1, 0), (0, 0)],
    "A2": [(1, 1), (1, 0), (0, 0)],
    "A3": [(1,), (0,)],
    "A4": [()],
    "C1": [(1,), (0,)],
    "C2": [(1, 1, 0), (1, 0, 1), (1, 0, 0), (0, 0, 0)],
    "C3": [(HALF, HALF, 0), (HALF, 0, HALF), (1, 0, 0), (0, 0, 0)],
}

DOMAIN = {
    "Q1": "rational", "Q2": "rational", "H1": "rational", "H2": "rational",
    "A2": "rational", "C1": "rational", "C2": "rational",
    "Q3": "hyperbolic", "H3": "hyperbolic", "A3": "hyperbolic", "C3": "hyperbolic",
    "Q4": "elliptic", "A4": "elliptic",
}

# argument permutations that specs may carry
SWAPS = {
    None: (0, 1, 2, 3),
    "ab_cd": (1, 0, 3, 2),  # x_a<->x_b, x_c<->x_d
    "ac_bd": (2, 3, 0, 1),  # x_a<->x_c, x_b<->x_d
}
_SWAP_TAG = {"ab_cd": "swap", "ac_bd": "swap-ac"}
_TAG_SWAP = {v: k for k, v in _SWAP_TAG.items()}


def _norm_flag(v):
    q = rat(v)
    return int(q) if q.denominator == 1 else q


def _flag_text(v) -> str:
    q = rat(v)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class EquationSpec:
    family: str
    flags: tuple = ()
    swap: str | None = None

    def __post_init__(self):
        if self.family not in ALLOWED_FLAGS:
            raise UnknownFamily(f"unknown family {self.family!r}")
        flags = tuple(_norm_flag(f) for f in self.flags)
        object.__setattr__(self, "flags", flags)
        if flags not in [tuple(_norm_flag(f) for f in row) for row in ALLOWED_FLAGS[self.family]]:
            raise UnknownFamily(f"{self.family} does not admit flags {flags}")
        if self.swap not in SWAPS:
            raise UnknownFamily(f"unknown swap {self.swap!r}")

    @property
    def is_quad(self) -> bool:
        return self.family in QUAD_FAMILIES

    @property
    def is_face(self) -> bool:
        return self.family in FACE_FAMILIES

    @property
    def kind(self) -> str:
        return self.family[0]

    @property
    def domain(self) -> str:
        return DOMAIN[self.family]

    @property
    def epsilon(self):
        """The type-H epsilon flag (last flag), None for other families."""
        if self.kind != "H":
            return None
        return self.flags[-1]

    def with_swap(self, swap):
        return EquationSpec(self.family, self.flags, swap)

    def plain(self):
        return EquationSpec(self.family, self.flags)

    @property
    def id(self) -> str:
        if not self.flags:
            text = self.family
        elif self.family in ("H1", "H2"):
            text = f"{self.family}:e={_flag_text(self.flags[0])}"
        elif self.family == "H3":
            text = f"H3:d={_flag_text(self.flags[0])},e={_flag_text(self.flags[1])}"
        elif len(self.flags) == 1:
            text = f"{self.family}:d={_flag_text(self.flags[0])}"
        else:
            text = f"{self.family}:" + ",".join(_flag_text(f) for f in self.flags)
        if self.swap:
            text += ";" + _SWAP_TAG[self.swap]
        return text

    @property
    def label(self) -> str:
        text = self.family
        if self.flags:
            text += "(" + ";".join(_flag_text(f) for f in self.flags) + ")"
        if self.swap == "ab_cd":
            text += " (x_a<->x_b, x_c<->x_d)"
        elif self.swap == "ac_bd":
            text += " (x_a<->x_c, x_b<->x_d)"
        return text

    def __str__(self):
        return self.id


def parse_spec(text: str) -> EquationSpec:
    """Parse "Q3:d=1", "C3:1/2,1/2,0", "H2:e=0;swap", "C3(1/2;0;1/2)", "C1_0"."""
    raw = text.strip()
    swap = None
    if ";" in raw and raw.rsplit(";", 1)[1].strip() in _TAG_SWAP:
        raw, tag = raw.rsplit(";", 1)
        swap = _TAG_SWAP[tag.strip()]
    m = re.match(r"^([QHAC][1-4])(.*)$", raw.strip())
    if not m:
        raise UnknownFamily(f"cannot parse equation id {text!r}")
    family, rest = m.group(1), m.group(2)
    rest = rest.strip().lstrip(":_").strip("()")
    flags = []
    if rest:
        for tok in re.split(r"[,;_ ]+", rest):
            if not tok:
                continue
            if "=" in tok:
                tok = tok.split("=", 1)[1]
            flags.append(rat(tok))
    return EquationSpec(family, tuple(flags), swap)


def all_specs(kind: str | None = None):
    out = []
    for fam, rows in ALLOWED_FLAGS.items():
        if kind and fam[0] != kind:
            continue
        for flags in rows:
            out.append(EquationSpec(fam, flags))
    return out


def _pw(base, flag):
    """base**flag for a flag exponent in {0, 1}."""
    return base if flag else 1


# ---------------------------------------------------------------------------
# domain checks

def _is_numeric(v):
    return isinstance(v, (complex, float))


def _check_domain(spec: EquationSpec, variables, params, ctx):
    numeric = any(_is_numeric(v) for v in variables) or any(_is_numeric(p) for p in params)
    if spec.domain == "elliptic":
        if ctx is None:
            raise EllipticUnavailable(f"{spec.family} needs an EllipticContext")
        return True
    if numeric:
        bad = [p for p in params if isinstance(p, HypParam)]
        if bad:
            raise DomainMismatch("numeric variables mixed with exact hyperbolic parameters")
        return True
    for v in variables:
        if not isinstance(v, (MPQ, int, Fraction)):
            raise DomainMismatch(f"variable {v!r} is not an exact scalar")
    want = HypParam if spec.domain == "hyperbolic" else (MPQ, int, Fraction)
    for p in params:
        if not isinstance(p, want):
            raise DomainMismatch(f"parameter {p!r} does not match the {spec.domain} domain of {spec.family}")
    return False


def _flags_for(spec, numeric):
    if numeric:
        return tuple(float(f) if isinstance(f, MPQ) else f for f in spec.flags)
    return spec.flags


# ---------------------------------------------------------------------------
# quad polynomials

def _q1(a, b, c, d, al, be, dl):
    return al * (a - c) * (b - d) - be * (a - b) * (c - d) + dl * al * be * (al - be)


def _q2(a, b, c, d, al, be):
    return _q1(a, b, c, d, al, be, 0) + al * be * (al - be) * (a + b + c + d + al * be - al ** 2 - be ** 2)


def _q3(a, b, c, d, al, be, dl):
    return (sh(al) * (a * b + c * d) - sh(be) * (a * c + b * d) - sh(al - be) * (a * d + b * c)
            - dl * sh(al) * sh(be) * sh(al - be))


def _h1(a, b, c, d, al, be, ep):
    return (a - d) * (b - c) + 2 * (al - be) - ep * (al - be) * (2 + a + d)


def _h2(a, b, c, d, al, be, ep):
    s = al + be + 1
    return ((a - d) * (b - c) - (al - be) * (a + b + c + d) - (al ** 2 - be ** 2)
            + ep * (al - be) * ((2 * a + s) * (2 * d + s) + (al - be) ** 2 - 1) / 2)


def _h3(a, b, c, d, al, be, dl, ep):
    # constant term delta*(2 - eps) and coefficient eps*Z(alpha+beta) of x_a x_d,
    # fixed by matching the P1 correspondence of the C3 family
    return (Z(al) * (a * c + b * d) - Z(be) * (a * b + c * d)
            - sh(al - be) * (dl * (2 - ep) + ep * Z(al + be) * a * d))


def _q4(a, b, c, d, al, be, ctx: EllipticContext):
    pa, dpa = ctx.wp(al), ctx.dwp(al)
    pb, dpb = ctx.wp(be), ctx.dwp(be)
    pab, dpab = ctx.wp(al - be), ctx.dwp(al - be)
    ka = (pa - pb) * (pab - pb)
    kb = (pb - pa) * (pab - pa)
    return (dpa * ((a - pb) * (c - pb) - ka) * ((d - pb) * (b - pb) - ka)
            + dpb * ((a - pa) * (b - pa) - kb) * ((c - pa) * (d - pa) - kb)
            + dpa * dpb * dpab * (pa - pb))


def eval_quad(spec: EquationSpec, args: Sequence, alpha, beta, ctx: EllipticContext | None = None):
    """Value of a type-Q/H polynomial at ``args = (x_a, x_b, x_c, x_d)``."""
    if not spec.is_quad:
        raise UnsupportedFamily(f"{spec.family} is not a quad family")
    if len(args) != 4:
        raise ValueError("quad equations take four corner values")
    numeric = _check_domain(spec, args, (alpha, beta), ctx)
    perm = SWAPS[spec.swap]
    a, b, c, d = (args[i] for i in perm)
    f, fl = spec.family, _flags_for(spec, numeric)
    if f == "Q1":
        return _q1(a, b, c, d, alpha, beta, fl[0])
    if f == "Q2":
        return _q2(a, b, c, d, alpha, beta)
    if f == "Q3":
        return _q3(a, b, c, d, alpha, beta, fl[0])
    if f == "Q4":
        return _q4(a, b, c, d, alpha, beta, ctx)
    if f == "H1":
        return _h1(a, b, c, d, alpha, beta, fl[0])
    if f == "H2":
        return _h2(a, b, c, d, alpha, beta, fl[0])
    if f == "H3":
        return _h3(a, b, c, d, alpha, beta, fl[0], fl[1])
    raise UnsupportedFamily(f)


def trapezoidal(spec: EquationSpec, args: Sequence, alpha, beta, ctx=None):
    """Trapezoidal type-H instance: H(x_a, x_d, x_c, x_b; beta - alpha, beta)."""
    if spec.kind != "H":
        raise UnsupportedFamily("the trapezoidal form is defined for type-H equations")
    a, b, c, d = args
    return eval_quad(spec, (a, d, c, b), beta - alpha, beta, ctx)


# ---------------------------------------------------------------------------
# face-centered polynomials: linear coefficients P1

def _p_a3(a, b, c, d, al, be, ga, dl):
    phi = al + be - ga
    return ((a * c - b * d) * sh(al - be) + (c * d - a * b) * sh(ga) + (b * c - a * d) * sh(phi)
            + dl * sh(al - be) * sh(phi) * sh(ga))


def _p_a2(a, b, c, d, al, be, ga, d1, d2):
    phi = al + be - ga
    return (al * (c - d) * (a + b + 2 * d2 * be ** 2)
            - be * (a - b) * (c + d + 2 * d2 * al ** 2)
            - ga * (b - d) * (a + c + 2 * d2 * al * be)
            - d1 * phi * ga * ((al - be) * _pw(a + b + c + d + ga * phi - al ** 2 - be ** 2, d2)
                               - 2 * d2 * (al * a - be * c)))


def _p_c3(a, b, c, d, al, be, ga, d1, d2, d3):
    return ((a * c - b * d) * Z(be) + (b * c - a * d) * Z(ga - be)
            + d1 * (Z(-al) - 2 * (d3 * a * b - d2 * c * d) * Z(al - ga)) * (1 - Z(2 * ga)))


def _p_c2(a, b, c, d, al, be, ga, d1, d2, d3):
    phi = al + be - ga
    g2a = ga - 2 * al
    return ((a + b + 2 * d2 * (be - ga) * be) * (c - d)
            + (a - b) * (2 * be - ga) * _pw(g2a, d3)
            + d1 * ga * (c + d + (2 * al - ga) * _pw(g2a, d3)) * _pw(g2a, d2)
            + 2 * d2 * ga * ((al - ga) * al - c * d)
            + 2 * d3 * ga * ((al - be) * phi + a * b))


def _p_c1(a, b, c, d, al, be, ga, dl):
    return 2 * ga * _pw((-c - d) / 2, dl) - (a + b) * (c - d)


# full polynomials

def _a3(x, a, b, c, d, al, be, ga, dl):
    x2 = x * x
    return (x * _p_a3(a, b, c, d, al, be, ga, dl)
            + sh(be) * (a * x2 - b * c * d) - sh(be - ga) * (b * x2 - a * c * d)
            - sh(al) * (c * x2 - a * b * d) + sh(al - ga) * (d * x2 - a * b * c)
            + dl * (sh(be - ga) * sh(al - ga) * (sh(al) * a - sh(be) * c)
                    + sh(al) * sh(be) * (sh(ga - al) * b - sh(ga - be) * d)))


def _a2(x, a, b, c, d, al, be, ga, d1, d2):
    x2 = x * x
    phi = al + be - ga
    return (x * _p_a2(a, b, c, d, al, be, ga, d1, d2)
            - al * (c - d) * (x2 + a * b - d1 * be ** 2 * _pw(a + b - be ** 2, d2))
            + be * (a - b) * (x2 + c * d - d1 * al ** 2 * _pw(c + d - al ** 2, d2))
            + ga * (b - d) * (x2 + a * c - d1 * al * be * _pw(a + c - (al - be) ** 2 - al * be, d2))
            + d1 * ga * phi * ((al * a - be * c + d2 * (al - be) * al * be)
                               * _pw(b + d + (al - ga) * (ga - be), d2)
                               + d2 * ((al - be) * (a * c - x2) - al ** 3 * a + be ** 3 * c)))


def _c3(x, a, b, c, d, al, be, ga, d1, d2, d3):
    x2 = x * x
    phi = al + be - ga
    return (x * _p_c3(a, b, c, d, al, be, ga, d1, d2, d3)
            + (a * b + 2 * d2 * sh(be) * sh(be - ga)) * (d - c * Z(ga))
            + (d * Z(ga) - c) * x2
            + d1 * Z(-al) * (1 + 2 * d2 * c * d * Z(2 * al - ga))
            * ((Z(be) - 2 * d3 * Z(2 * al - be) * x2) * (b * Z(ga) - a)
               + (a * Z(ga) - b) * (Z(ga - be) - 2 * d3 * Z(al + phi) * x2)))


def _c2(x, a, b, c, d, al, be, ga, d1, d2, d3):
    x2 = x * x
    g2a = ga - 2 * al
    return (x * _p_c2(a, b, c, d, al, be, ga, d1, d2, d3)
            + (x2 - a * b) * ga * _pw(g2a, d3) - (x2 + a * b) * (c - d)
            + d1 * be * (be - ga) * (ga * _pw(g2a, d3) + (c - d)) * _pw(be * (ga - be) + a + b, d2)
            - 2 * d3 * ga * (a + b) * x2
            + d1 * (be * (a - b) - ga * a)
            * (c + d + (2 * al - ga) * _pw(g2a, d3) + 2 * d3 * (al * (al - ga) - x2)) * _pw(g2a, d2)
            + 2 * d2 * (be * ga * (be - ga) * (al + c) * (al - ga + d)
                        + (ga * a - be * (a - b)) * (al * (ga - al) + c * d)))


def _c1(x, a, b, c, d, al, be, ga, dl):
    return (x * _p_c1(a, b, c, d, al, be, ga, dl)
            + 2 * (be * (a - b) - ga * a) * _pw((-c - d) / 2, dl)
            + (x * x + a * b + dl * be * (ga - be)) * (c - d))


class _A4Terms:
    """Building blocks q, p0..p4, q1..q4 of the elliptic face polynomial."""

    def __init__(self, x, ctx: EllipticContext):
        self.x = x
        self.ctx = ctx
        self.g2 = ctx.g2
        self.g3 = ctx.g3
        self.xdot = ctx.xdot(x)

    def wp(self, a):
        return self.ctx.wp(a)

    def dwp(self, a):
        return self.ctx.dwp(a)

    def q(self, a):
        return (self.x - self.wp(a)) ** 2

    def p0(self, a):
        w = self.wp(a)
        return 2 * self.g3 + (self.x + w) * (self.g2 - 4 * self.x * w)

    def p1(self, a):
        w = self.wp(a)
        return 16 * (self.x + w) * self.g3 + (4 * self.x * w + self.g2) ** 2

    def p2(self, a1, a2):
        return self.dwp(a2) * self.p0(a1) + self.dwp(a1) * self.p0(a2)

    def p3(self, a1, a2, a3):
        al = (a1, a2, a3)
        prod_d = self.dwp(a1) * self.dwp(a2) * self.dwp(a3)
        s = 0
        for i in range(3):
            rest = [al[j] for j in range(3) if j != i]
            s += self.dwp(al[i]) * self.p0(rest[0]) * self.p0(rest[1])
        return -4 * self.xdot * prod_d - s

    def p4(self, a1, a2, a3, a4):
        al = (a1, a2, a3, a4)
        total = 0
        for i in range(4):
            rest = [al[j] for j in range(4) if j != i]
            pd = 1
            pp = 1
            for r in rest:
                pd *= self.dwp(r)
                pp *= self.p0(r)
            total += 4 * self.xdot * self.p0(al[i]) * pd + self.dwp(al[i]) * pp
        return total

    def q1(self, y, a1, a2, a3, a4):
        return self.p2(a1, a2) * (self.p1(a3) * self.p1(a4) - 256 * self.q(a3) * self.q(a4) * y)

    def q2(self, y1, y2, a1, a2, a3, a4):
        return self.p2(a1, a2) * (self.p1(a3) * self.q(a4) * y1 - self.p1(a4) * self.q(a3) * y2)

    def q3(self, y1, y2, a1, a2, a3, a4):
        return self.p3(a1, a2, a3) * (16 * self.q(a4) * y1 - self.p1(a4) * y2)

    def q4(self, y, a1, a2, a3, a4):
        return self.p1(a1) * self.q(a2) * (
            self.dwp(a3) * (16 * self.q(a4) * y + self.p1(a4))
            + self.dwp(a4) * (16 * self.q(a3) * y + self.p1(a3)))


def _a4(x, a, b, c, d, al, be, ga, ctx: EllipticContext):
    t = _A4Terms(x, ctx)
    phi = al + be - ga
    ag, bg = al - ga, be - ga
    abcd = a * b * c * d
    pre = ((32 * x * x * ctx.g3 + (4 * x * x + ctx.g2) ** 2 - 16 * ctx.wp(al - be) * t.xdot)
           * (ctx.wp(ga) - ctx.wp(phi)))
    body = (t.q1(abcd, -al, be, ag, bg) + t.q1(abcd, al, bg, ag, be)
            - t.q1(abcd, ag, be, al, bg) - t.q1(abcd, -ag, bg, al, be))
    body -= 16 * (t.p4(al, ag, be, bg) * (b * c - a * d)
                  + t.q2(d, c, be, bg, al, ag) * (a + b)
                  + t.p4(-al, -ag, be, bg) * (a * c - b * d)
                  + t.q2(a, b, al, ag, bg, be) * (c + d)
                  + t.q2(a * b, c * d, al, -bg, ag, be)
                  - t.q2(a * b, c * d, al, be, ag, bg)
                  + t.q2(a * b, c * d, ag, bg, al, be)
                  - t.q2(a * b, c * d, ag, -be, al, bg))
    body += 4 * (t.q3(b * c * d, a, al, be, bg, ag) - t.q3(b * c * d, a, -ag, be, bg, al)
                 + t.q3(a * c * d, b, -al, be, bg, ag) - t.q3(a * c * d, b, ag, be, bg, al)
                 - t.q3(a * b * d, c, al, ag, be, bg) + t.q3(a * b * d, c, al, ag, -bg, be)
                 - t.q3(a * b * c, d, al, ag, -be, bg) + t.q3(a * b * c, d, al, ag, bg, be)
                 - t.q4(c * d, bg, be, al, ag) * a + t.q4(c * d, be, bg, al, ag) * b
                 + t.q4(a * b, ag, al, be, bg) * c - t.q4(a * b, al, ag, be, bg) * d)
    return pre * body


def eval_face(spec: EquationSpec, x, corners: Sequence, params: Sequence, ctx: EllipticContext | None = None):
    """Value of a type-A/C polynomial at face value ``x`` and corners x_a..x_d."""
    if not spec.is_face:
        raise UnsupportedFamily(f"{spec.family} is not a face-centered family")
    al, be, ga = params
    numeric = _check_domain(spec, (x, *corners), params, ctx)
    perm = SWAPS[spec.swap]
    a, b, c, d = (corners[i] for i in perm)
    f, fl = spec.family, _flags_for(spec, numeric)
    if f == "A3":
        return _a3(x, a, b, c, d, al, be, ga, fl[0])
    if f == "A2":
        return _a2(x, a, b, c, d, al, be, ga, fl[0], fl[1])
    if f == "C3":
        return _c3(x, a, b, c, d, al, be, ga, *fl)
    if f == "C2":
        return _c2(x, a, b, c, d, al, be, ga, *fl)
    if f == "C1":
        return _c1(x, a, b, c, d, al, be, ga, fl[0])
    if f == "A4":
        return _a4(x, a, b, c, d, al, be, ga, ctx)
    raise UnsupportedFamily(f)


def published_p1(spec: EquationSpec, corners: Sequence, params: Sequence):
    """Linear-in-x coefficient straight from the published P-polynomials."""
    al, be, ga = params
    a, b, c, d = (corners[i] for i in SWAPS[spec.swap])
    numeric = any(_is_numeric(v) for v in (*corners, *params))
    f, fl = spec.family, _flags_for(spec, numeric)
    if f == "A3":
        return _p_a3(a, b, c, d, al, be, ga, fl[0])
    if f == "A2":
        return _p_a2(a, b, c, d, al, be, ga, fl[0], fl[1])
    if f == "C3":
        return _p_c3(a, b, c, d, al, be, ga, *fl)
    if f == "C2":
        return _p_c2(a, b, c, d, al, be, ga, *fl)
    if f == "C1":
        return _p_c1(a, b, c, d, al, be, ga, fl[0])
    raise UnsupportedFamily(f"P1 extraction is not available for {f}")


def extract_p1(spec: EquationSpec, corners: Sequence, params: Sequence, allow_zero: bool = False):
    """Coefficient of x in the face polynomial.

    Taken from the published P-polynomial and cross-checked against the
    three-point isolation (f(1) - f(-1)) / 2, which is exact because every
    other term of the degree-2 families is even in x.
    """
    if spec.family == "A4" or not spec.is_face:
        raise UnsupportedFamily(f"P1 extraction is not available for {spec.family}")
    p1 = published_p1(spec, corners, params)
    one = mpq(1) if not any(_is_numeric(v) for v in corners) else 1.0
    iso = (eval_face(spec, one, corners, params) - eval_face(spec, -one, corners, params)) / 2
    if iso != p1 and not (_is_numeric(p1) and abs(iso - p1) <= 1e-9 * (abs(p1) + 1)):
        raise HexeqError(f"P1 of {spec.id} disagrees with the isolated x-coefficient")
    if p1 == 0 and not allow_zero:
        raise DegenerateSample(f"P1 of {spec.id} vanishes at this sample")
    return p1


# ---------------------------------------------------------------------------
# face-centered -> ABS correspondence table

CORRESPONDENCE = [
    ("A3:d=1", "Q3:d=1"),
    ("A3:d=0", "Q3:d=0"),
    ("A2:1,1", "Q2"),
    ("A2:1,0", "Q1:d=1"),
    ("A2:0,0", "Q1:d=0"),
    ("C3:1/2,1/2,0", "H3:d=1,e=1;swap-ac"),
    ("C3:1/2,0,1/2", "H3:d=1,e=1"),
    ("C3:1,0,0", "H3:d=1,e=0"),
    ("C3:0,0,0", "H3:d=0,e=0"),
    ("C2:1,1,0", "H2:e=1;swap-ac"),
    ("C2:1,0,1", "H2:e=1"),
    ("C2:1,0,0", "H2:e=0"),
    ("C1:d=1", "H1:e=1;swap-ac"),
    ("C2:0,0,0", "H1:e=1"),
    ("C1:d=0", "H1:e=0"),
]


def abs_partner(face: EquationSpec) -> EquationSpec:
    for f, q in CORRESPONDENCE:
        if parse_spec(f) == face.plain():
            return parse_spec(q)
    raise UnsupportedFamily(f"{face.id} has no listed ABS partner")


def p1_as_quad(face: EquationSpec, quad_args: Sequence, alpha, beta):
    """P1(x_a, -x_d, x_c, x_b; alpha, alpha - beta, alpha - beta)."""
    a, b, c, d = quad_args
    return extract_p1(face, (a, -d, c, b), (alpha, alpha - beta, alpha - beta))


# ---------------------------------------------------------------------------
# symmetries

QUAD_SYMMETRIES = ("quad-sym-1", "quad-sym-2")
FACE_SYMMETRIES = ("face-sym-1", "face-sym-2", "face-sym-3")


def symmetry_applies(kind: str, spec: EquationSpec) -> bool:
    if kind in QUAD_SYMMETRIES:
        if not spec.is_quad:
            return False
        if kind == "quad-sym-1" and spec.kind == "H" and spec.epsilon == 1:
            return False
        return True
    if kind in FACE_SYMMETRIES:
        if not spec.is_face:
            return False
        return spec.kind == "A" or kind == "face-sym-1"
    raise NotApplicable(f"unknown symmetry {kind!r}")


def symmetry_factor(kind: str, spec: EquationSpec, params):
    """Constant c with LHS = c * RHS for the symmetry identities.

    The generic sign is -1 except for the first square symmetry.  Q4 in the
    Nijhoff form keeps its sign under the second square symmetry, and the
    hyperbolic type-C polynomials pick up exp(gamma) under the first
    face-centered symmetry; both are the same equation up to normalization.
    """
    if kind == "quad-sym-1":
        return 1
    if kind == "quad-sym-2":
        return 1 if spec.family == "Q4" else -1
    if kind == "face-sym-1" and spec.family == "C3":
        return -Z(params[2])
    return -1


def symmetry_residual(kind: str, spec: EquationSpec, sample, ctx=None, force: bool = False):
    """LHS - c * RHS of the square / face-centered symmetry identities.

    ``sample`` is ``(args, alpha, beta)`` for quad families and
    ``(x, corners, (alpha, beta, gamma))`` for face families.
    """
    if not force and not symmetry_applies(kind, spec):
        raise NotApplicable(f"{kind} is not claimed for {spec.id}")
    if kind in QUAD_SYMMETRIES:
        (a, b, c, d), al, be = sample
        lhs = eval_quad(spec, (a, b, c, d), al, be, ctx)
        k = symmetry_factor(kind, spec, (al, be))
        if kind == "quad-sym-1":
            return lhs - k * eval_quad(spec, (b, a, d, c), al, be, ctx)
        return lhs - k * eval_quad(spec, (d, b, c, a), be, al, ctx)
    x, (a, b, c, d), (al, be, ga) = sample
    lhs = eval_face(spec, x, (a, b, c, d), (al, be, ga), ctx)
    k = symmetry_factor(kind, spec, (al, be, ga))
    if kind == "face-sym-1":
        return lhs - k * eval_face(spec, x, (b, a, d, c), (al - ga, be - ga, -ga), ctx)
    if kind == "face-sym-2":
        return lhs - k * eval_face(spec, x, (c, d, a, b), (be, al, ga), ctx)
    return lhs - k * eval_face(spec, x, (d, b, c, a), (-al, ga - al, be - al), ctx)
