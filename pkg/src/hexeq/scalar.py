"""Value domains: exact rationals, multiplicative hyperbolic parameters, and
complex doubles with the Weierstrass elliptic function.

Rationals are ``gmpy2.mpq`` values.  A hyperbolic parameter theta is stored
as ``t = exp(theta)`` so that sinh and exp of any integer combination of
parameters evaluate exactly.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Integral

import gmpy2
from gmpy2 import mpq

from .errors import DomainMismatch, NonConvergent, PoleAtLatticePoint

MPQ = type(mpq(0))
ONE = mpq(1)
ZERO = mpq(0)


def rat(value) -> mpq:
    """Coerce ints, Fractions, mpq and "p/q" strings to an exact rational."""
    if isinstance(value, MPQ):
        return value
    if isinstance(value, bool):
        return mpq(int(value))
    if isinstance(value, (Integral, type(gmpy2.mpz(0)))):
        return mpq(int(value))
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return mpq(int(num), int(den))
        return mpq(int(text))
    raise DomainMismatch(f"cannot make an exact rational from {value!r}")


def rat_str(q) -> str:
    """Canonical "p/q" form (denominator always written)."""
    q = rat(q)
    return f"{q.numerator}/{q.denominator}"


def is_exact(value) -> bool:
    return isinstance(value, (MPQ, int, Fraction)) and not isinstance(value, bool)


@dataclass(frozen=True)
class HypParam:
    """Additive parameter theta held through its exponential expv = e^theta.

    Addition of parameters multiplies encodings, negation inverts them and
    integer scaling raises them to a power, so integer combinations stay
    exact.
    """

    expv: mpq

    def __post_init__(self):
        v = rat(self.expv)
        if v <= 0:
            raise DomainMismatch("HypParam requires expv > 0")
        object.__setattr__(self, "expv", v)

    def __add__(self, other):
        if not isinstance(other, HypParam):
            return NotImplemented
        return HypParam(self.expv * other.expv)

    def __sub__(self, other):
        if not isinstance(other, HypParam):
            return NotImplemented
        return HypParam(self.expv / other.expv)

    def __neg__(self):
        return HypParam(1 / self.expv)

    def __mul__(self, k):
        if isinstance(k, bool) or not isinstance(k, Integral):
            return NotImplemented
        return HypParam(self.expv ** int(k))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.expv == 1

    def to_complex(self) -> complex:
        return complex(math.log(float(self.expv)))

    def __repr__(self):
        return f"HypParam({rat_str(self.expv)})"


def Z(p):
    """e^p for a hyperbolic parameter (exact) or a complex number."""
    if isinstance(p, HypParam):
        return p.expv
    return cmath.exp(p)


def sh(p):
    """sinh(p), exact for HypParam: (t - 1/t)/2."""
    if isinstance(p, HypParam):
        t = p.expv
        return (t - 1 / t) / 2
    return cmath.sinh(p)


def ch(p):
    if isinstance(p, HypParam):
        t = p.expv
        return (t + 1 / t) / 2
    return cmath.cosh(p)


def hyp_eval(kind: str, coeffs, params) -> mpq:
    """exp or sinh of sum(k_i * theta_i), computed from the encodings."""
    coeffs = list(coeffs)
    params = list(params)
    if len(coeffs) != len(params):
        raise ValueError("coeffs and params must have equal length")
    t = ONE
    for k, p in zip(coeffs, params):
        t *= p.expv ** int(k)
    if kind == "exp":
        return t
    if kind == "sinh":
        return (t - 1 / t) / 2
    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# Weierstrass elliptic function

_OVERFLOW = 1e150
_SEED_TERMS = 6  # c_2 .. c_6, i.e. terms through z^10


@dataclass(frozen=True)
class EllipticContext:
    g2: complex
    g3: complex
    tol: float = 1e-12
    max_depth: int = 40

    def __post_init__(self):
        g2 = complex(self.g2)
        g3 = complex(self.g3)
        object.__setattr__(self, "g2", g2)
        object.__setattr__(self, "g3", g3)
        disc = g2 ** 3 - 27 * g3 ** 2
        if abs(disc) <= 1e-14 * (abs(g2) ** 3 + 27 * abs(g3) ** 2 + 1e-300):
            raise DomainMismatch("degenerate curve: g2^3 - 27 g3^2 = 0")

    def xdot(self, x):
        """4x^3 - g2 x - g3."""
        return 4 * x ** 3 - self.g2 * x - self.g3

    def wp(self, z):
        return weierstrass_eval(z, self)[0]

    def dwp(self, z):
        return weierstrass_eval(z, self)[1]

    def describe(self) -> dict:
        return {"g2": [self.g2.real, self.g2.imag], "g3": [self.g3.real, self.g3.imag],
                "tol": self.tol}


def _laurent_coefficients(g2, g3, n=_SEED_TERMS):
    c = {2: g2 / 20, 3: g3 / 28}
    for k in range(4, n + 1):
        s = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c[k] = 3 * s / ((2 * k + 1) * (k - 3))
    return c


def _seed(w, coeffs):
    p = w ** -2
    dp = -2 * w ** -3
    for k, ck in coeffs.items():
        p += ck * w ** (2 * k - 2)
        dp += (2 * k - 2) * ck * w ** (2 * k - 3)
    return p, dp


def _double(p, dp, g2, g3):
    # wp(2z) from wp(z) alone, with wp'(z)^2 taken from the differential
    # equation; this is far better conditioned than routing through wp'
    dd = 4 * p ** 3 - g2 * p - g3
    if dd == 0 or dp == 0:
        raise PoleAtLatticePoint("duplication hit a half period")
    pp = 6 * p * p - g2 / 2
    p2 = pp * pp / (4 * dd) - 2 * p
    # the tangent-line formula only fixes the branch of wp'(2z); its value
    # is recomputed from the curve equation
    guess = -(pp / dp * (p2 - p) + dp)
    root = cmath.sqrt(4 * p2 ** 3 - g2 * p2 - g3)
    dp2 = root if abs(root - guess) <= abs(root + guess) else -root
    if abs(p2) > _OVERFLOW or abs(dp2) > _OVERFLOW:
        raise PoleAtLatticePoint("value blow-up while doubling")
    return p2, dp2


def _wp_at_depth(z, n, coeffs, g2, g3):
    w = z / (2 ** n)
    p, dp = _seed(w, coeffs)
    for _ in range(n):
        p, dp = _double(p, dp, g2, g3)
    return p, dp


def _close(u, v, tol):
    return abs(u - v) <= tol * max(abs(u), abs(v))


@lru_cache(maxsize=4096)
def _weierstrass_cached(z: complex, g2: complex, g3: complex, tol: float, max_depth: int):
    if abs(z) < 1e-150:
        raise PoleAtLatticePoint("z is the lattice point 0")
    coeffs = _laurent_coefficients(g2, g3)
    prev = _wp_at_depth(z, 0, coeffs, g2, g3)
    for n in range(1, max_depth + 1):
        cur = _wp_at_depth(z, n, coeffs, g2, g3)
        if _close(cur[0], prev[0], tol) and _close(cur[1], prev[1], tol):
            return cur
        prev = cur
    raise NonConvergent(f"no agreement to tol={tol} within depth {max_depth}")


def weierstrass_eval(z, ctx: EllipticContext):
    """(wp(z), wp'(z)) for the invariants of ``ctx``.

    Laurent seed near the origin followed by repeated duplication.  Parity is
    applied exactly so that wp(-z) == wp(z) and wp'(-z) == -wp'(z).
    """
    z = complex(z)
    flip = z.real < 0 or (z.real == 0 and z.imag < 0)
    key = -z if flip else z
    p, dp = _weierstrass_cached(key, ctx.g2, ctx.g3, ctx.tol, ctx.max_depth)
    return (p, -dp) if flip else (p, dp)


def to_complex(value) -> complex:
    """Numeric image of any scalar (HypParam maps to its additive value)."""
    if isinstance(value, HypParam):
        return value.to_complex()
    if isinstance(value, MPQ):
        return complex(float(value))
    return complex(value)


def complex_pair(value) -> list:
    c = complex(value)
    return [c.real, c.imag]
