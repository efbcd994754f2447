"""Leg functions and leg-equation residuals (complex doubles).

A leg function a(x; y; alpha) is linear fractional in y.  Three-leg
equations are centered at one corner of a quad equation, four-leg equations
at the face variable of a face-centered equation.  Additive families combine
legs by sums instead of products.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable

from .catalog import EquationSpec, eval_face, eval_quad, parse_spec
from .errors import BranchAmbiguity, HexeqError, NotApplicable, SingularSolve, UnsupportedFamily
from .hexsys import solve_linear
from .report import ConsistencyReport
from .sampling import Sampler, trial_rng

BRANCH_EPS = 1e-9
GUARD = 1e-3


def _xbar(x):
    if abs(x * x - 1) < BRANCH_EPS:
        raise BranchAmbiguity("x^2 - 1 vanishes: xbar is ill-conditioned")
    return x + cmath.sqrt(x * x - 1)


def _sqrt(x):
    if abs(x) < BRANCH_EPS:
        raise BranchAmbiguity("sqrt(x) at x = 0")
    return cmath.sqrt(x)


def _z(a):
    return cmath.exp(a)


def _a3_1(x, y, al):
    xb, z = _xbar(x), _z(al)
    return (1 + z * z * xb * xb - 2 * z * xb * y) / (z * z + xb * xb - 2 * z * xb * y)


def _a3_0(x, y, al):
    z = _z(al)
    return (z * x - y) / (x - z * y)


def _a2_11(x, y, al):
    s = _sqrt(x)
    return ((s - al) ** 2 - y) / ((s + al) ** 2 - y)


def _a2_10(x, y, al):
    return (x - y + al) / (x - y - al)


def _a2_00(x, y, al):
    return al / (x - y)


def _c3_hh0(x, y, al):
    xb, z = _xbar(x), _z(al)
    return (1 - z * xb * y) / (xb - z * y)


def _c3_h0h(x, y, al):
    return _z(-al) + _z(al) * x * x - 2 * x * y


def _c3_100(x, y, al):
    return x * y - _z(-al)


def _identity(x, y, al):
    return y


def _c2_110(x, y, al):
    s = _sqrt(x)
    return (y - s + al) / (y + s + al)


def _c2_101(x, y, al):
    return (x + al) ** 2 - y


def _c2_100(x, y, al):
    return x + y + al


def _c2_000(x, y, al):
    return (y + al) / (2 * x)


def _c1_0(x, y, al):
    return -y / 2


@dataclass(frozen=True)
class LegFunction:
    family: str  # face-centered family id the function is tabulated under
    kind: str    # "a" or "c"
    fn: Callable
    additive: bool = False
    branch: str | None = None  # "xbar" or "sqrt" when the center enters through a branch

    @property
    def id(self) -> str:
        return f"{self.kind}[{self.family}]"

    def __call__(self, x, y, al):
        return self.fn(complex(x), complex(y), complex(al))


LEGS = {
    "A3:d=1": LegFunction("A3:d=1", "a", _a3_1, branch="xbar"),
    "A3:d=0": LegFunction("A3:d=0", "a", _a3_0),
    "A2:1,1": LegFunction("A2:1,1", "a", _a2_11, branch="sqrt"),
    "A2:1,0": LegFunction("A2:1,0", "a", _a2_10),
    "A2:0,0": LegFunction("A2:0,0", "a", _a2_00, additive=True),
    "C3:1/2,1/2,0": LegFunction("C3:1/2,1/2,0", "c", _c3_hh0, branch="xbar"),
    "C3:1/2,0,1/2": LegFunction("C3:1/2,0,1/2", "c", _c3_h0h),
    "C3:1,0,0": LegFunction("C3:1,0,0", "c", _c3_100),
    "C3:0,0,0": LegFunction("C3:0,0,0", "c", _identity),
    "C2:1,1,0": LegFunction("C2:1,1,0", "c", _c2_110, branch="sqrt"),
    "C2:1,0,1": LegFunction("C2:1,0,1", "c", _c2_101),
    "C2:1,0,0": LegFunction("C2:1,0,0", "c", _c2_100),
    "C1:d=1": LegFunction("C1:d=1", "c", _identity),
    "C2:0,0,0": LegFunction("C2:0,0,0", "c", _c2_000, additive=True),
    "C1:d=0": LegFunction("C1:d=0", "c", _c1_0, additive=True),
}


def eval_leg(fn: LegFunction | str, x, y, al) -> complex:
    if isinstance(fn, str):
        fn = LEGS[parse_spec(fn).id]
    return fn(x, y, al)


# quad family -> a-leg
Q_LEGS = {"Q3:d=1": "A3:d=1", "Q3:d=0": "A3:d=0", "Q2": "A2:1,1",
          "Q1:d=1": "A2:1,0", "Q1:d=0": "A2:0,0"}

# type-H family -> (a, a*, c, c*)
H_LEGS = {
    "H3:d=1,e=1": ("A3:d=1", "A3:d=0", "C3:1/2,1/2,0", "C3:1/2,0,1/2"),
    "H3:d=1,e=0": ("A3:d=0", "A3:d=0", "C3:1,0,0", "C3:1,0,0"),
    "H3:d=0,e=0": ("A3:d=0", "A3:d=0", "C3:0,0,0", "C3:0,0,0"),
    "H2:e=1": ("A2:1,1", "A2:1,0", "C2:1,1,0", "C2:1,0,1"),
    "H2:e=0": ("A2:1,0", "A2:1,0", "C2:1,0,0", "C2:1,0,0"),
    "H1:e=1": ("A2:1,0", "A2:0,0", "C1:d=1", "C2:0,0,0"),
    "H1:e=0": ("A2:0,0", "A2:0,0", "C1:d=0", "C1:d=0"),
}

# type-C family -> a-leg used in its four-leg equation
C_A_LEGS = {
    "C3:1/2,1/2,0": "A3:d=1", "C3:1/2,0,1/2": "A3:d=0", "C3:1,0,0": "A3:d=0",
    "C3:0,0,0": "A3:d=0", "C2:1,1,0": "A2:1,1", "C2:1,0,1": "A2:1,0",
    "C2:1,0,0": "A2:1,0", "C2:0,0,0": "A2:0,0", "C1:d=1": "A2:1,0", "C1:d=0": "A2:0,0",
}

# quad family whose three-leg a-function matches a type-H family
H_Q_PARTNER = {"H3:d=1,e=1": "Q3:d=1", "H3:d=1,e=0": "Q3:d=0", "H3:d=0,e=0": "Q3:d=0",
               "H2:e=1": "Q2", "H2:e=0": "Q1:d=1", "H1:e=1": "Q1:d=1", "H1:e=0": "Q1:d=0"}

# type-H family -> type-C family sharing its c and a legs
H_C_PARTNER = {"H3:d=1,e=1": "C3:1/2,1/2,0", "H3:d=1,e=0": "C3:1,0,0", "H3:d=0,e=0": "C3:0,0,0",
               "H2:e=1": "C2:1,1,0", "H2:e=0": "C2:1,0,0", "H1:e=1": "C1:d=1", "H1:e=0": "C1:d=0"}

# center -> (numerator (neighbor, param), first denominator, second denominator);
# params as "a", "b", "b-a", "a-b"
_CENTERS = {
    "a": (0, (2, "b"), (1, "a"), (3, "b-a")),
    "b": (1, (0, "a"), (3, "b"), (2, "a-b")),
    "c": (2, (3, "a"), (0, "b"), (1, "a-b")),
    "d": (3, (1, "b"), (2, "a"), (0, "b-a")),
}


def _param(tag, al, be):
    return {"a": al, "b": be, "b-a": be - al, "a-b": al - be}[tag]


def _legs_for(spec: EquationSpec, center: str):
    """(numerator leg, first denominator leg, second denominator leg)."""
    key = spec.plain().id
    if spec.kind == "Q":
        if key not in Q_LEGS:
            raise NotApplicable(f"{key}: leg functions need the Weierstrass sigma function")
        a = LEGS[Q_LEGS[key]]
        return a, a, a
    if spec.kind == "H":
        a, a_s, c, c_s = (LEGS[k] for k in H_LEGS[key])
        if center in ("a", "d"):
            return c_s, c_s, a_s
        return c, c, a
    raise UnsupportedFamily(f"{key} has no three-leg equations")


def three_leg_value(spec: EquationSpec, center: str, args, al, be):
    """Left side of the three-leg equation centered at ``center``.

    Multiplicative: num / (den1 * den2), equal to 1 on solutions.
    Additive: num - den1 - den2, equal to 0 on solutions.
    """
    k, (j1, p1), (j2, p2), (j3, p3) = _CENTERS[center]
    f1, f2, f3 = _legs_for(spec, center)
    x = args[k]
    n = f1(x, args[j1], _param(p1, al, be))
    d1 = f2(x, args[j2], _param(p2, al, be))
    d2 = f3(x, args[j3], _param(p3, al, be))
    if f1.additive:
        return n - d1 - d2, True
    return n / (d1 * d2), False


def three_leg_residual(spec, center: str, sample) -> float:
    spec = parse_spec(spec) if isinstance(spec, str) else spec
    args, al, be = sample
    value, additive = three_leg_value(spec, center, args, al, be)
    return abs(value) if additive else abs(value - 1)


def _face_legs(spec: EquationSpec):
    key = spec.plain().id
    if spec.kind == "A":
        if key not in LEGS:
            raise NotApplicable(f"{key}: leg functions need the Weierstrass sigma function")
        a = LEGS[key]
        return a, a
    return LEGS[C_A_LEGS[key]], LEGS[key]


def four_leg_value(spec: EquationSpec, x, corners, params):
    """a(x;x_a;beta) L(x;x_d;alpha-gamma) / (a(x;x_b;beta-gamma) L(x;x_c;alpha)),
    with L = a for type-A and L = c for type-C (sums for additive families)."""
    al, be, ga = params
    xa, xb, xc, xd = corners
    a, l = _face_legs(spec)
    t_a, t_d = a(x, xa, be), l(x, xd, al - ga)
    t_b, t_c = a(x, xb, be - ga), l(x, xc, al)
    if a.additive:
        return t_a + t_d - t_b - t_c, True
    return t_a * t_d / (t_b * t_c), False


def four_leg_residual(spec, sample) -> float:
    spec = parse_spec(spec) if isinstance(spec, str) else spec
    x, corners, params = sample
    value, additive = four_leg_value(spec, x, corners, params)
    return abs(value) if additive else abs(value - 1)


# ---------------------------------------------------------------------------
# sample construction

def _branch_ok(fn: LegFunction, x) -> bool:
    if fn.branch == "xbar":
        return abs(x * x - 1) >= GUARD
    if fn.branch == "sqrt":
        return abs(x) >= GUARD
    return True


def condition(values) -> float:
    """Smallest distance of any value from the branch points 0, 1, -1."""
    return min(min(abs(v), abs(v * v - 1)) for v in values)


def _numeric_params(sampler: Sampler, n: int):
    return sampler.params("elliptic", n)


def quad_solution(spec: EquationSpec, sampler: Sampler, solve_slot: int = 3):
    """Complex solution of a quad equation: three corners drawn, one solved."""
    al, be = _numeric_params(sampler, 2)
    args = sampler.variables("elliptic", 4)

    def f(u):
        vals = list(args)
        vals[solve_slot] = u
        return eval_quad(spec, vals, al, be)

    args[solve_slot] = solve_linear(f, numeric=True, where=spec.id)
    return args, al, be


def face_solution(spec: EquationSpec, sampler: Sampler, solve_slot: int = 3):
    params = tuple(_numeric_params(sampler, 3))
    x, *corners = sampler.variables("elliptic", 5)

    def f(u):
        vals = list(corners)
        vals[solve_slot] = u
        return eval_face(spec, x, vals, params)

    corners[solve_slot] = solve_linear(f, numeric=True, where=spec.id)
    return x, corners, params


def _guarded(build, check, sampler):
    for _ in range(100):
        try:
            sample = build()
        except (SingularSolve, BranchAmbiguity, ZeroDivisionError):
            sampler.resamples += 1
            continue
        if check(sample):
            return sample
        sampler.resamples += 1
    raise HexeqError("no well-conditioned sample within 100 attempts")


def _well_conditioned(values, limit=20.0):
    return all(abs(v) < limit for v in values) and condition(values) >= GUARD


def three_leg_suite(specs=None, samples: int = 50, seed: int = 0, tol: float = 1e-9,
                    report: ConsistencyReport | None = None) -> ConsistencyReport:
    report = report or ConsistencyReport("check legs", {"samples": samples, "seed": seed, "tol": tol})
    specs = specs or [parse_spec(k) for k in (*Q_LEGS, *H_LEGS)]
    for spec in specs:
        for center in "abcd":
            cid = f"three-leg:{spec.id}:{center}"
            sampler = Sampler(trial_rng(seed, 0, cid))
            for t in range(samples):
                sample = _guarded(lambda: quad_solution(spec, sampler),
                                  lambda s: _well_conditioned(s[0]), sampler)
                try:
                    r = three_leg_residual(spec, center, sample)
                except (BranchAmbiguity, ZeroDivisionError) as exc:
                    report.record_error(cid, str(exc))
                    continue
                report.record_numeric(cid, r, tol, {"sample": t, "condition": condition(sample[0])})
            report.add_resamples(cid, sampler.resamples)
    report.note("three-leg:Q4", "not implemented: leg function needs the Weierstrass sigma function")
    return report


def four_leg_suite(specs=None, samples: int = 50, seed: int = 0, tol: float = 1e-9,
                   report: ConsistencyReport | None = None) -> ConsistencyReport:
    report = report or ConsistencyReport("check legs", {"samples": samples, "seed": seed, "tol": tol})
    specs = specs or [parse_spec(k) for k in LEGS if k[0] == "A"] + [parse_spec(k) for k in C_A_LEGS]
    for spec in specs:
        cid = f"four-leg:{spec.id}"
        sampler = Sampler(trial_rng(seed, 0, cid))
        for t in range(samples):
            sample = _guarded(lambda: face_solution(spec, sampler),
                              lambda s: _well_conditioned([s[0], *s[1]]), sampler)
            try:
                r = four_leg_residual(spec, sample)
            except (BranchAmbiguity, ZeroDivisionError) as exc:
                report.record_error(cid, str(exc))
                continue
            report.record_numeric(cid, r, tol, {"sample": t, "condition": condition([sample[0], *sample[1]])})
        report.add_resamples(cid, sampler.resamples)
    report.note("four-leg:A4", "not implemented: leg function needs the Weierstrass sigma function")
    return report


# ---------------------------------------------------------------------------
# vertex-star compositions
#
# Star variables: x (center), x_a, x_b, x_c, x_d (outer corners of the
# four-leg equation) and x_ab, x_ac, x_bd, x_cd (shared edges).  Parameters
# (alpha1, alpha2, beta1, beta2) map to the face triple by
# alpha = beta1 - alpha1, beta = beta1 - alpha2, gamma = beta1 - beta2.

ARRANGEMENTS = ("fig6", "fig7-left", "fig7-right")


@dataclass(frozen=True)
class StarEquation:
    kind: str        # "Q", "H" or "Ht" (trapezoidal H)
    args: tuple      # star variable names in argument order
    params: tuple    # parameter names, each optionally prefixed by "-"
    center: str      # slot of x in the underlying Q/H arguments
    power: int       # exponent (or sign for additive) in the composition


def _star_equations(arrangement: str):
    if arrangement == "fig6":
        return (
            StarEquation("Q", ("xa", "xab", "xac", "x"), ("b1", "a2"), "d", 1),
            StarEquation("Q", ("xab", "xb", "x", "xbd"), ("b2", "a2"), "c", 1),
            StarEquation("Q", ("xac", "x", "xc", "xcd"), ("b1", "a1"), "b", 1),
            StarEquation("Q", ("x", "xbd", "xcd", "xd"), ("b2", "a1"), "a", 1),
        )
    if arrangement == "fig7-left":
        return (
            StarEquation("H", ("xac", "xa", "x", "xab"), ("a2", "b1"), "c", 1),
            StarEquation("H", ("xab", "xb", "x", "xbd"), ("b2", "a2"), "c", 1),
            StarEquation("Ht", ("xc", "xac", "xcd", "x"), ("a1", "b1"), "b", -1),
            StarEquation("Ht", ("xbd", "xd", "x", "xcd"), ("a1", "b2"), "c", 1),
        )
    if arrangement == "fig7-right":
        return (
            StarEquation("Q", ("xa", "xab", "xac", "x"), ("b1", "a2"), "d", 1),
            StarEquation("Q", ("xab", "xb", "x", "xbd"), ("b2", "a2"), "c", 1),
            StarEquation("Ht", ("xcd", "xc", "x", "xac"), ("b1", "a1"), "c", 1),
            StarEquation("Ht", ("xd", "xcd", "xbd", "x"), ("b2", "a1"), "b", -1),
        )
    raise HexeqError(f"unknown arrangement {arrangement!r}")


def _as_quad(eq: StarEquation, vals, ps):
    """(args, alpha, beta) of the underlying Q/H instance."""
    args = [vals[n] for n in eq.args]
    al, be = (ps[p] for p in eq.params)
    if eq.kind == "Ht":
        # H~(a, b, c, d; alpha, beta) = H(a, d, c, b; beta - alpha, beta)
        return [args[0], args[3], args[2], args[1]], be - al, be
    return args, al, be


def _star_spec(eq: StarEquation, quad: EquationSpec, h: EquationSpec):
    return quad if eq.kind == "Q" else h


def vertex_star_sample(arrangement: str, quad: EquationSpec, h: EquationSpec | None, sampler: Sampler):
    """Seeds x, x_a, x_ab, x_b, x_c; solves x_ac, x_bd, x_cd, x_d in turn."""
    eqs = _star_equations(arrangement)
    a1, a2, b1, b2 = sampler.params("elliptic", 4)
    ps = {"a1": a1, "a2": a2, "b1": b1, "b2": b2}
    seeds = sampler.variables("elliptic", 5)
    vals = dict(zip(("x", "xa", "xab", "xb", "xc"), seeds))
    order = ("xac", "xbd", "xcd", "xd")
    pending = list(eqs)
    for name in order:
        for eq in pending:
            unknown = [n for n in eq.args if n not in vals]
            if unknown == [name]:
                spec = _star_spec(eq, quad, h)

                def f(u, eq=eq, spec=spec):
                    vals[name] = u
                    args, al, be = _as_quad(eq, vals, ps)
                    return eval_quad(spec, args, al, be)

                vals[name] = solve_linear(f, numeric=True, where=f"{arrangement}:{name}")
                pending.remove(eq)
                break
        else:
            raise HexeqError(f"cannot determine {name} in {arrangement}")
    return vals, ps


def vertex_star_composition(arrangement: str, quad_families, sample):
    """Composition of the four three-leg factors and the matching four-leg value.

    ``quad_families`` is (quad, h): the type-Q equation and, for the fig7
    arrangements, the type-H equation.  Returns a dict with the composed
    value, the four-leg value, their residual and the residual of the
    face-centered polynomial at the outer corners.
    """
    quad, h = quad_families
    vals, ps = sample
    eqs = _star_equations(arrangement)
    composed = None
    additive = False
    for eq in eqs:
        spec = _star_spec(eq, quad, h)
        args, al, be = _as_quad(eq, vals, ps)
        v, additive = three_leg_value(spec, eq.center, args, al, be)
        term = eq.power * v if additive else v ** eq.power
        composed = term if composed is None else (composed + term if additive else composed * term)
    a1, a2, b1, b2 = ps["a1"], ps["a2"], ps["b1"], ps["b2"]
    triple = (b1 - a1, b1 - a2, b1 - b2)
    face = parse_spec(Q_LEGS[quad.id]) if arrangement == "fig6" else parse_spec(H_C_PARTNER[h.id])
    corners = [vals[n] for n in ("xa", "xb", "xc", "xd")]
    if arrangement == "fig7-right":
        triple = tuple(-p for p in triple)
    four, four_additive = four_leg_value(face, vals["x"], corners, triple)
    if arrangement == "fig7-right":
        four = -four if four_additive else 1 / four
    residual = abs(composed - four) if additive else abs(composed - four) / max(abs(four), 1e-300)
    poly = eval_face(face, vals["x"], corners, triple)
    return {"composed": composed, "four_leg": four, "residual": residual,
            "four_leg_residual": abs(four) if additive else abs(four - 1),
            "face": face.id, "face_value": poly}


def _generic_star(sampler: Sampler):
    names = ("x", "xa", "xb", "xc", "xd", "xab", "xac", "xbd", "xcd")
    vals = dict(zip(names, sampler.variables("elliptic", len(names))))
    ps = dict(zip(("a1", "a2", "b1", "b2"), sampler.params("elliptic", 4)))
    return vals, ps


STAR_FAMILIES = {
    "fig6": [("Q1:d=1", None), ("Q1:d=0", None), ("Q2", None), ("Q3:d=1", None), ("Q3:d=0", None)],
    "fig7-left": [(None, h) for h in H_LEGS],
    "fig7-right": [(H_Q_PARTNER[h], h) for h in H_LEGS],
}


def vertex_star_suite(samples: int = 50, seed: int = 0, tol: float = 1e-9,
                      report: ConsistencyReport | None = None) -> ConsistencyReport:
    report = report or ConsistencyReport("check legs", {"samples": samples, "seed": seed, "tol": tol})
    for arrangement, fams in STAR_FAMILIES.items():
        for q, h in fams:
            quad = parse_spec(q) if q else None
            hs = parse_spec(h) if h else None
            label = "+".join(s for s in (q, h) if s)
            cid = f"star:{arrangement}:{label}"
            sampler = Sampler(trial_rng(seed, 0, cid))
            for t in range(samples):
                sample = _guarded(lambda: vertex_star_sample(arrangement, quad, hs, sampler),
                                  lambda s: _well_conditioned(list(s[0].values())), sampler)
                try:
                    out = vertex_star_composition(arrangement, (quad, hs), sample)
                except (BranchAmbiguity, ZeroDivisionError) as exc:
                    report.record_error(cid, str(exc))
                    continue
                report.record_numeric(cid, out["residual"], tol, {"sample": t})
                report.record_numeric(f"{cid}:four-leg", out["four_leg_residual"], tol, {"sample": t})
                # the shared legs cancel identically, so unsolved values must agree too
                generic = _guarded(lambda: _generic_star(sampler),
                                   lambda s: _well_conditioned(list(s[0].values())), sampler)
                out = vertex_star_composition(arrangement, (quad, hs), generic)
                report.record_numeric(f"{cid}:identity", out["residual"], tol, {"sample": t})
            report.add_resamples(cid, sampler.resamples)
    return report


def legs_suite(samples: int = 50, seed: int = 0, tol: float = 1e-9) -> ConsistencyReport:
    report = ConsistencyReport("check legs", {"samples": samples, "seed": seed, "tol": tol})
    three_leg_suite(samples=samples, seed=seed, tol=tol, report=report)
    four_leg_suite(samples=samples, seed=seed, tol=tol, report=report)
    vertex_star_suite(samples=samples, seed=seed, tol=tol, report=report)
    return report
