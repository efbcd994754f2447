"""Seeded sampling of variables and parameters.

Every trial gets its own generator derived from (seed, trial index), so trials
can run in any order or in parallel and still see the same inputs.
"""
from __future__ import annotations

import itertools
import random
from typing import Callable

from gmpy2 import mpq

from .errors import GuardExhausted
from .scalar import HypParam

MAX_ATTEMPTS = 100

# integer combinations k1*alpha + k2*beta + k3*gamma that must not vanish;
# covers every parameter combination occurring in the catalog polynomials
PARAM_COMBOS = [c for c in itertools.product(range(-2, 3), repeat=3)
                if any(c) and next(k for k in c if k) > 0]

ELLIPTIC_POLICY = {
    "g2": "uniform real in [0.5, 2.0]",
    "g3": "uniform real in [-0.4, 0.4]",
    "parameters": "real part in [0.15, 0.6], imaginary part in [-0.1, 0.1]; "
                  "every small integer combination kept at modulus >= 0.05",
    "variables": "real part in [-2, 2], imaginary part in [-0.5, 0.5]",
}


def trial_rng(seed: int, trial: int, stream: str = "") -> random.Random:
    return random.Random(f"{seed}:{trial}:{stream}")


class Sampler:
    """Draws guarded values from one generator and counts resamples."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.resamples = 0

    # scalars ---------------------------------------------------------------
    def rational(self) -> mpq:
        return mpq(self.rng.randint(-9, 9), self.rng.randint(1, 9))

    def positive_rational(self) -> mpq:
        """Rational in (1/8, 8), never 1."""
        while True:
            v = mpq(self.rng.randint(1, 9), self.rng.randint(1, 9))
            if mpq(1, 8) < v < 8 and v != 1:
                return v
            self.resamples += 1

    def hyp(self) -> HypParam:
        return HypParam(self.positive_rational())

    def complex_var(self) -> complex:
        return complex(self.rng.uniform(-2, 2), self.rng.uniform(-0.5, 0.5))

    def complex_param(self) -> complex:
        return complex(self.rng.uniform(0.15, 0.6), self.rng.uniform(-0.1, 0.1))

    # guarded draws ---------------------------------------------------------
    def guarded(self, draw: Callable, guard: Callable):
        for _ in range(MAX_ATTEMPTS):
            value = draw()
            if guard(value):
                return value
            self.resamples += 1
        raise GuardExhausted(f"guard not satisfied after {MAX_ATTEMPTS} attempts")

    def distinct_rationals(self, n: int, avoid=()) -> list:
        avoid = set(avoid)

        def draw():
            return [self.rational() for _ in range(n)]

        def guard(vals):
            return len(set(vals)) == n and not (set(vals) & avoid)

        return self.guarded(draw, guard)

    def variables(self, domain: str, n: int, avoid=()) -> list:
        if domain == "elliptic":
            return [self.complex_var() for _ in range(n)]
        return self.distinct_rationals(n, avoid)

    def param(self, domain: str):
        if domain == "hyperbolic":
            return self.hyp()
        if domain == "elliptic":
            return self.complex_param()
        return self.guarded(self.rational, lambda v: v != 0)

    def params(self, domain: str, n: int = 3, combos=None):
        """n parameters with every listed integer combination nonzero."""
        if combos is None:
            combos = [c for c in itertools.product(range(-2, 3), repeat=n)
                      if any(c) and next(k for k in c if k) > 0]

        def draw():
            return [self.param(domain) for _ in range(n)]

        def guard(ps):
            return all(not is_zero(combine(c, ps), domain) for c in combos)

        return self.guarded(draw, guard)

    def elliptic_invariants(self):
        return self.rng.uniform(0.5, 2.0), self.rng.uniform(-0.4, 0.4)


def combine(coeffs, params):
    """Integer combination sum(k_i * p_i) in the parameters' own arithmetic."""
    total = None
    for k, p in zip(coeffs, params):
        if not k:
            continue
        term = p if k == 1 else (-p if k == -1 else k * p)
        total = term if total is None else total + term
    if total is None:
        p0 = params[0]
        if isinstance(p0, HypParam):
            return HypParam(1)
        return p0 - p0
    return total


def is_zero(value, domain: str) -> bool:
    if isinstance(value, HypParam):
        return value.expv == 1
    if domain == "elliptic" or isinstance(value, complex):
        return abs(value) < 0.05
    return value == 0


def sample_inputs(seed: int, domain: str, count: int, guards=None) -> list:
    """Deterministic list of ``count`` values from one domain.

    ``guards`` is an optional predicate over the whole list.
    """
    sampler = Sampler(trial_rng(seed, 0, "inputs"))
    if domain == "rational":
        draw = lambda: [sampler.rational() for _ in range(count)]
    elif domain == "hyperbolic":
        draw = lambda: [sampler.hyp() for _ in range(count)]
    elif domain == "elliptic":
        draw = lambda: [sampler.complex_var() for _ in range(count)]
    else:
        raise ValueError(f"unknown domain {domain!r}")
    if guards is None:
        return draw()
    return sampler.guarded(draw, guards)
