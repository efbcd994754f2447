"""Hex systems: six face-centered equations around a hexagon.

Vertices are indexed 0..5 for x_a..x_f.  Each row places one vertex in the
face slot, four in the corner slots and omits the vertex opposite the face.
Row parameters are integer combinations of (alpha, beta, gamma), stored as
coefficient vectors so that one table serves every value domain.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .catalog import EquationSpec, eval_face, parse_spec
from .errors import (DegenerateSample, GuardExhausted, HexeqError, IllegalPair,
                     NotApplicable, SingularSolve)
from .report import ConsistencyReport
from .sampling import ELLIPTIC_POLICY, Sampler, combine, trial_rng
from .scalar import EllipticContext

ROLES = "abcdef"

A, B, G = (1, 0, 0), (0, 1, 0), (0, 0, 1)
_GMA = (-1, 0, 1)  # gamma - alpha
_MA = (-1, 0, 0)   # -alpha
_BMA = (-1, 1, 0)  # beta - alpha


@dataclass(frozen=True)
class Row:
    role: str
    face: int
    corners: tuple
    params: tuple  # three coefficient vectors over (alpha, beta, gamma)
    bar: bool = False  # evaluated with the second equation of a C-pair

    @property
    def missing(self) -> int:
        used = {self.face, *self.corners}
        (m,) = set(range(6)) - used
        return m

    def to_dict(self, variant: str = "A") -> dict:
        equation = "A" if variant == "A" else ("Cbar" if self.bar else "C")
        return {"role": self.role, "equation": equation, "face": ROLES[self.face],
                "corners": [ROLES[c] for c in self.corners],
                "params": [list(p) for p in self.params]}


ROWS_A = (
    Row("a", 0, (5, 4, 1, 2), (G, B, A)),
    Row("b", 1, (2, 3, 0, 5), (G, A, B)),
    Row("c", 2, (3, 4, 1, 0), (A, B, G)),
    Row("d", 3, (2, 1, 4, 5), (G, B, A)),
    Row("e", 4, (5, 0, 3, 2), (G, A, B)),
    Row("f", 5, (0, 1, 4, 3), (A, B, G)),
)

ROWS_C = (
    Row("a", 0, (5, 4, 1, 2), (G, B, A), bar=True),
    Row("b", 1, (2, 3, 0, 5), (G, A, B)),
    Row("c", 2, (1, 3, 0, 4), (_GMA, _MA, _BMA)),
    Row("d", 3, (2, 1, 4, 5), (G, B, A)),
    Row("e", 4, (5, 0, 3, 2), (G, A, B), bar=True),
    Row("f", 5, (4, 0, 3, 1), (_GMA, _MA, _BMA), bar=True),
)

# (C, Cbar) pairs with vanishing algebraic entropy; either order is allowed
C_PAIRS = (
    ("C3:1/2,1/2,0", "C3:1/2,0,1/2"),
    ("C3:1,0,0", "C3:1,0,0"),
    ("C3:0,0,0", "C3:0,0,0"),
    ("C2:1,1,0", "C2:1,0,1"),
    ("C2:1,0,0", "C2:1,0,0"),
    ("C2:0,0,0", "C1:d=1"),
    ("C1:d=0", "C1:d=0"),
)


def listed_pair(spec_c: EquationSpec, spec_cbar: EquationSpec) -> bool:
    ids = {(parse_spec(p).id, parse_spec(q).id) for p, q in C_PAIRS}
    ids |= {(q, p) for p, q in ids}
    return (spec_c.id, spec_cbar.id) in ids


def c_pairs() -> list:
    return [(parse_spec(p), parse_spec(q)) for p, q in C_PAIRS]


def type_a_specs() -> list:
    return [parse_spec(s) for s in ("A2:1,1", "A2:1,0", "A2:0,0", "A3:d=1", "A3:d=0", "A4")]


@dataclass(frozen=True)
class HexSystem:
    variant: str
    spec: EquationSpec
    spec_bar: EquationSpec | None = None
    ctx: EllipticContext | None = field(default=None, compare=False)
    rows: tuple = ()

    def __post_init__(self):
        if not self.rows:
            object.__setattr__(self, "rows", ROWS_A if self.variant == "A" else ROWS_C)
        for row in self.rows:
            if row.missing != (row.face + 3) % 6:
                raise HexeqError(f"row {row.role}: omitted vertex is not opposite the face")

    @classmethod
    def type_a(cls, spec, ctx=None) -> "HexSystem":
        spec = parse_spec(spec) if isinstance(spec, str) else spec
        if spec.kind != "A":
            raise IllegalPair(f"{spec.id} is not a type-A equation")
        return cls("A", spec, None, ctx)

    @classmethod
    def type_c(cls, spec_c, spec_cbar, allow_unlisted: bool = False) -> "HexSystem":
        spec_c = parse_spec(spec_c) if isinstance(spec_c, str) else spec_c
        spec_cbar = parse_spec(spec_cbar) if isinstance(spec_cbar, str) else spec_cbar
        if spec_c.kind != "C" or spec_cbar.kind != "C":
            raise IllegalPair("type-C systems need two type-C equations")
        if not allow_unlisted and not listed_pair(spec_c, spec_cbar):
            raise IllegalPair(f"({spec_c.label}, {spec_cbar.label}) is not a listed C-pair")
        return cls("C", spec_c, spec_cbar)

    @property
    def name(self) -> str:
        if self.variant == "A":
            return f"hexA[{self.spec.id}]"
        return f"hexC[{self.spec.id}|{self.spec_bar.id}]"

    @property
    def domain(self) -> str:
        return self.spec.domain

    def swapped(self) -> "HexSystem":
        """The same system with C and Cbar exchanged."""
        if self.variant == "A":
            return self
        return HexSystem("C", self.spec_bar, self.spec, self.ctx)

    def row(self, role) -> Row:
        return self.rows[ROLES.index(role)] if isinstance(role, str) else self.rows[role]

    def row_spec(self, row: Row) -> EquationSpec:
        return self.spec_bar if row.bar else self.spec

    def row_params(self, row: Row, params: Sequence):
        return tuple(combine(c, params) for c in row.params)

    def eval_row(self, row: Row, values: Sequence, params: Sequence):
        return eval_face(self.row_spec(row), values[row.face],
                         [values[c] for c in row.corners], self.row_params(row, params), self.ctx)

    def residuals(self, values, params) -> dict:
        return {row.role: self.eval_row(row, values, params) for row in self.rows}

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "equation": self.spec.id,
            "equation_bar": self.spec_bar.id if self.spec_bar else None,
            "vertices": list(ROLES),
            "param_basis": ["alpha", "beta", "gamma"],
            "rows": [r.to_dict(self.variant) for r in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


# ---------------------------------------------------------------------------
# solving

def _numeric(v) -> bool:
    return isinstance(v, (complex, float))


def solve_linear(fn, numeric: bool = False, where: str = "", tol: float = 1e-12):
    """Root of a function that is affine in u, probed at u = 0 and u = 1."""
    zero, one = (0j, 1 + 0j) if numeric else (mpq(0), mpq(1))
    m = fn(zero)
    lin = fn(one) - m
    if numeric:
        if abs(lin) <= tol * (abs(m) + abs(lin)) or lin == 0:
            raise SingularSolve(f"vanishing linear coefficient in {where}", where)
    elif lin == 0:
        raise SingularSolve(f"vanishing linear coefficient in {where}", where)
    return -m / lin


def linear_parts(fn, numeric: bool = False):
    zero, one = (0j, 1 + 0j) if numeric else (mpq(0), mpq(1))
    m = fn(zero)
    return fn(one) - m, m


def solve_corner(system: HexSystem, row, unknown: int, values: Sequence, params: Sequence):
    """Solve one row for the vertex ``unknown``, which must sit in a corner slot."""
    row = system.row(row) if not isinstance(row, Row) else row
    if unknown == row.face:
        raise HexeqError(f"row {row.role} has x_{ROLES[unknown]} in its face slot")
    if unknown not in row.corners:
        raise HexeqError(f"row {row.role} does not involve x_{ROLES[unknown]}")
    vals = list(values)
    numeric = system.domain == "elliptic" or any(_numeric(v) for i, v in enumerate(vals)
                                                 if i != unknown and v is not None)

    def f(u):
        vals[unknown] = u
        return system.eval_row(row, vals, params)

    return solve_linear(f, numeric, where=f"{system.name} row {row.role}")


def row_without(system: HexSystem, vertex: int) -> Row:
    for row in system.rows:
        if row.missing == vertex:
            return row
    raise HexeqError("no row omits that vertex")


def hex_solve_pair(system: HexSystem, i: int, values: Sequence, params: Sequence):
    """Given x at X_i..X_{i+3}, return (X_{i-2}, X_{i-1})."""
    u1, u2 = (i - 2) % 6, (i - 1) % 6
    vals = list(values)
    for k in range(4):
        if vals[(i + k) % 6] is None:
            raise HexeqError(f"x_{ROLES[(i + k) % 6]} must be known")
    vals[u1] = vals[u2] = None
    x1 = solve_corner(system, row_without(system, u2), u1, vals, params)
    x2 = solve_corner(system, row_without(system, u1), u2, vals, params)
    return x1, x2


def solve_paths(system: HexSystem, i: int, values: Sequence, params: Sequence) -> list:
    """All 2 x 4 solve orders for the pair (X_{i-2}, X_{i-1}).

    Each path solves one unknown from the row omitting the other, then solves
    the second unknown from one of the four rows holding it in a corner slot.
    Returns a list of (label, (X_{i-2}, X_{i-1})).
    """
    pair = ((i - 2) % 6, (i - 1) % 6)
    out = []
    for first, second in (pair, pair[::-1]):
        vals = list(values)
        vals[first] = vals[second] = None
        r1 = row_without(system, second)
        vals[first] = solve_corner(system, r1, first, vals, params)
        for r2 in system.rows:
            if second in r2.corners:
                v = solve_corner(system, r2, second, vals, params)
                got = dict(((first, vals[first]), (second, v)))
                out.append((f"{r1.role}->{ROLES[first]},{r2.role}->{ROLES[second]}",
                            (got[pair[0]], got[pair[1]])))
    return out


def relaxed_orderings(system: HexSystem, values: Sequence) -> list:
    """Valid two-step orderings for two unknowns, lexicographically sorted.

    An ordering is (first vertex, row, second vertex, row) where the first
    row involves only the first unknown, as a corner, and the second row
    holds the second unknown as a corner.
    """
    unknown = [k for k, v in enumerate(values) if v is None]
    if len(unknown) != 2:
        raise HexeqError("exactly two unknowns are required")
    found = []
    for first in unknown:
        (second,) = [u for u in unknown if u != first]
        for r1 in system.rows:
            if first in r1.corners and second not in (r1.face, *r1.corners):
                for r2 in system.rows:
                    if second in r2.corners:
                        found.append((ROLES[first], r1.role, ROLES[second], r2.role))
    return sorted(found)


def is_relaxed_pattern(values: Sequence) -> bool:
    known = [v is not None for v in values]
    if sum(known) != 4:
        return False
    for i in range(6):
        if all(known[(i + k) % 6] for k in range(3)):
            return True
    return False


def is_consecutive(values: Sequence):
    """Start index i of four consecutive knowns, or None."""
    known = [v is not None for v in values]
    if sum(known) != 4:
        return None
    for i in range(6):
        if all(known[(i + k) % 6] for k in range(4)):
            return i
    return None


def solve_hexagon(system: HexSystem, values: Sequence, params: Sequence, relaxed: bool = False):
    """Complete a hexagon with two unknowns.  Returns (values, ordering)."""
    i = is_consecutive(values)
    vals = list(values)
    if i is not None:
        x1, x2 = hex_solve_pair(system, i, vals, params)
        vals[(i - 2) % 6], vals[(i - 1) % 6] = x1, x2
        return vals, ("pair", i)
    if not relaxed or not is_relaxed_pattern(values):
        raise HexeqError("knowns do not form four consecutive vertices")
    orders = relaxed_orderings(system, values)
    if not orders:
        raise HexeqError("no valid solve ordering for this pattern")
    f, r1, s, r2 = orders[0]
    vals[ROLES.index(f)] = solve_corner(system, r1, ROLES.index(f), vals, params)
    vals[ROLES.index(s)] = solve_corner(system, r2, ROLES.index(s), vals, params)
    return vals, ("relaxed", orders[0])


# ---------------------------------------------------------------------------
# verification

def relative_residual(system: HexSystem, row: Row, values, params) -> float:
    """|row| scaled by the size of its terms in one corner variable."""
    k = row.corners[0]
    vals = list(values)
    u = vals[k]

    def f(t):
        vals[k] = t
        return system.eval_row(row, vals, params)

    lin, m = linear_parts(f, numeric=True)
    value = lin * u + m
    scale = abs(lin * u) + abs(m)
    return abs(value) / scale if scale else abs(value)


def _sample_params(system: HexSystem, sampler: Sampler):
    return sampler.params(system.domain)


def elliptic_system(spec, seed: int, trial: int = 0) -> HexSystem:
    rng = trial_rng(seed, trial, "curve")
    g2, g3 = Sampler(rng).elliptic_invariants()
    return HexSystem.type_a(spec, EllipticContext(g2, g3))


def cah_verify(system: HexSystem, params=None, trials: int = 100, seed: int = 0,
               tol: float = 1e-8, report: ConsistencyReport | None = None,
               paths: bool = True) -> ConsistencyReport:
    """Solve every adjacent pair from random knowns and check the rest.

    For each trial and each i in Z/6, four consecutive knowns are sampled,
    the pair (X_{i-2}, X_{i-1}) is solved and the four unused rows are
    evaluated.  The eight solve paths are compared as well.
    """
    report = report or ConsistencyReport("check cah", {"system": system.name, "trials": trials, "seed": seed})
    numeric = system.domain == "elliptic"
    if numeric:
        report.note("elliptic_sampling", ELLIPTIC_POLICY)
    name = system.name
    for trial in range(trials):
        sampler = Sampler(trial_rng(seed, trial, "cah"))
        ps = params if params is not None else _sample_params(system, sampler)
        for i in range(6):
            base = f"cah:{name}:i={i}"
            for attempt in range(100):
                known = sampler.variables(system.domain, 4)
                vals = [None] * 6
                for k in range(4):
                    vals[(i + k) % 6] = known[k]
                try:
                    x1, x2 = hex_solve_pair(system, i, vals, ps)
                    vals[(i - 2) % 6], vals[(i - 1) % 6] = x1, x2
                    variants = solve_paths(system, i, vals, ps) if paths else []
                    break
                except (SingularSolve, DegenerateSample):
                    sampler.resamples += 1
            else:
                report.record_error(base, "no nonsingular sample within 100 attempts")
                continue
            used = {row_without(system, (i - 1) % 6).role, row_without(system, (i - 2) % 6).role}
            detail = {"trial": trial, "values": vals, "params": list(ps)}
            for row in system.rows:
                if row.role in used:
                    continue
                if numeric:
                    report.record_numeric(f"{base}:row={row.role}",
                                          relative_residual(system, row, vals, ps), tol, detail)
                else:
                    report.record_exact(f"{base}:row={row.role}", system.eval_row(row, vals, ps), detail)
            if paths:
                ref = (x1, x2)
                if numeric:
                    worst = max(max(abs(a - b) / max(abs(b), 1e-300) for a, b in zip(v, ref))
                                for _, v in variants)
                    report.record_numeric(f"paths:{name}:i={i}", worst, tol, detail)
                else:
                    same = all(v == ref for _, v in variants) and len(variants) == 8
                    report.record_bool(f"paths:{name}:i={i}", same,
                                       {**detail, "paths": [[lbl, list(v)] for lbl, v in variants]}
                                       if not same else None)
        report.add_resamples(f"cah:{name}:i=0:row=" + next(r.role for r in system.rows
                                                           if r.role not in ("e", "f")), sampler.resamples)
    return report


def solved_sample(system: HexSystem, seed: int, trial: int = 0, i: int = 4):
    """A random solution of the system built with hex_solve_pair."""
    sampler = Sampler(trial_rng(seed, trial, "sample"))
    ps = sampler.params(system.domain)
    for _ in range(100):
        known = sampler.variables(system.domain, 4)
        vals = [None] * 6
        for k in range(4):
            vals[(i + k) % 6] = known[k]
        try:
            x1, x2 = hex_solve_pair(system, i, vals, ps)
        except SingularSolve:
            continue
        vals[(i - 2) % 6], vals[(i - 1) % 6] = x1, x2
        return vals, ps
    raise GuardExhausted("could not build a nonsingular solution")


# hexagonal symmetries: vertex permutation (new x_k = old x_perm[k]) and
# parameter permutation over (alpha, beta, gamma)
HEX_SYMMETRIES = {
    "reflection-1": ((4, 3, 2, 1, 0, 5), (1, 0, 2)),
    "reflection-2": ((1, 0, 5, 4, 3, 2), (1, 0, 2)),
    "rotation-pi/3": ((1, 2, 3, 4, 5, 0), (1, 2, 0)),
    "rotation-pi": ((3, 4, 5, 0, 1, 2), (0, 1, 2)),
}

# for type-C systems: whether the transformed system uses (Cbar, C)
C_SYMMETRY_SWAP = {"reflection-1": False, "reflection-2": True, "rotation-pi": True}


def transform(name: str, values, params):
    perm, pperm = HEX_SYMMETRIES[name]
    return [values[k] for k in perm], tuple(params[k] for k in pperm)


def symmetry_system(system: HexSystem, name: str, force: bool = False) -> HexSystem:
    if system.variant == "A":
        return system
    if name not in C_SYMMETRY_SWAP:
        if force:
            return system
        raise NotApplicable(f"{name} is not a symmetry of type-C systems")
    return system.swapped() if C_SYMMETRY_SWAP[name] else system


def claimed_symmetries(system: HexSystem) -> list:
    if system.variant == "A":
        return ["reflection-1", "reflection-2", "rotation-pi/3"]
    return ["reflection-1", "reflection-2", "rotation-pi"]


def hex_symmetry_check(system: HexSystem, sample=None, seed: int = 0, samples: int = 1,
                       report: ConsistencyReport | None = None, controls: bool = True) -> ConsistencyReport:
    """Check the hexagonal symmetries on solved samples.

    For each claimed symmetry the transformed sample must satisfy every row
    of the transformed system.  Each transformed row must also be a multiple
    of a row of the original system at generic (unsolved) values.
    For type-C systems with distinct C and Cbar, the C/Cbar exchange is shown
    to be necessary by evaluating without it.
    """
    report = report or ConsistencyReport("check symmetry", {"system": system.name, "seed": seed})
    numeric = system.domain == "elliptic"
    for t in range(samples):
        if sample is not None and t == 0:
            vals, ps = sample
        else:
            vals, ps = solved_sample(system, seed, t)
        generic_sampler = Sampler(trial_rng(seed, t, "generic"))
        draws = [generic_sampler.variables(system.domain, 6) for _ in range(3)]
        for name in claimed_symmetries(system):
            target = symmetry_system(system, name)
            new_vals, new_ps = transform(name, vals, ps)
            for row in target.rows:
                r = target.eval_row(row, new_vals, new_ps)
                cid = f"sym:{system.name}:{name}:row={row.role}"
                if numeric:
                    report.record_numeric(cid, relative_residual(target, row, new_vals, new_ps), 1e-8)
                else:
                    report.record_exact(cid, r, {"sample": t})
            if not numeric:
                _rowwise(report, system, target, name, draws, ps, t)
            if controls and system.variant == "C" and C_SYMMETRY_SWAP.get(name) and system.spec != system.spec_bar:
                worst = max(abs(system.eval_row(row, new_vals, new_ps)) for row in system.rows)
                report.record_bool(f"sym-control:{system.name}:{name}:without-exchange-fails",
                                   worst != 0, {"sample": t})
    return report


def _rowwise(report, system, target, name, draws, ps, t):
    # each transformed row must be a parameter-dependent multiple of some
    # original row: the cross ratios over several generic draws agree
    orig = [[system.eval_row(row, g, ps) for g in draws] for row in system.rows]
    moved = [transform(name, g, ps) for g in draws]
    for row in target.rows:
        tv = [target.eval_row(row, nv, nps) for nv, nps in moved]
        best = None
        for ov in orig:
            if ov[0] == 0 or tv[0] == 0:
                continue
            r = sum(abs(tv[k] * ov[0] - tv[0] * ov[k]) for k in range(1, len(draws)))
            best = r if best is None or r < best else best
        report.record_exact(f"sym-rowwise:{system.name}:{name}:row={row.role}",
                            best if best is not None else mpq(1), {"sample": t})


def all_systems(include_elliptic: bool = False) -> list:
    out = [HexSystem.type_a(s) for s in type_a_specs() if s.domain != "elliptic"]
    out += [HexSystem.type_c(c, cb) for c, cb in c_pairs()]
    return out
