"""Consistency recipes on polytopes with hexagonal and quadrilateral faces.

Scenarios are YAML files under ``data/scenarios``.  Loading a scenario turns
its steps into a flat plan of (equation, unknowns-to-solve) items and audits
it structurally; ``run_polytope`` executes the plan on sampled values.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import yaml
from gmpy2 import mpq

from .catalog import EquationSpec, eval_quad, parse_spec, trapezoidal
from .errors import ConfigError, IllegalCombo, SingularSolve, UnknownRow
from .hexsys import (HexSystem, hex_solve_pair, is_consecutive, linear_parts, relative_residual,
                     solve_corner, solve_linear)
from .report import ConsistencyReport
from .sampling import ELLIPTIC_POLICY, Sampler, combine, is_zero, trial_rng
from .scalar import EllipticContext, HypParam

PARAM_NAMES = ("alpha", "beta", "gamma", "rho", "rhobar", "rhohat")
HEX_KINDS = ("hexA", "hexC", "hexCbar")
QUAD_KINDS = ("Q", "Qs", "H", "Ht")
SHAPES = {
    "cahp1": "cahp1.yaml",
    "cahp2": "cahp2.yaml",
    "caed1": "caed1.yaml",
    "caed2": "caed2.yaml",
    "cato": "cato.yaml",
    "prism-a": "prism_a.yaml",
    "ca66d": "ca66d.yaml",
}
MAX_ATTEMPTS = 25
ELLIPTIC_TOL = 1e-8


# ---------------------------------------------------------------------------
# combination tables

@dataclass(frozen=True)
class ComboRow:
    """One legal assignment of equations to the face types of a polytope.

    ``cbar`` and ``qs`` are None when the table prints "same as C" or
    "same as Q"; the properties below resolve the alias.
    """
    kind: str
    c: EquationSpec
    cbar: EquationSpec | None = None
    h: EquationSpec | None = None
    q: EquationSpec | None = None
    qs: EquationSpec | None = None

    @property
    def name(self) -> str:
        return _row_name(self.c)

    @property
    def c_bar(self) -> EquationSpec:
        return self.cbar if self.cbar is not None else self.c

    @property
    def q_star(self) -> EquationSpec:
        return self.qs if self.qs is not None else self.q

    @property
    def domain(self) -> str:
        return self.c.domain

    def system(self, ctx=None, allow_unlisted: bool = False) -> HexSystem:
        if self.kind == "A":
            return HexSystem.type_a(self.c, ctx)
        return HexSystem.type_c(self.c, self.c_bar, allow_unlisted=allow_unlisted)

    def exchanged(self) -> "ComboRow":
        """The row with Q and Q* exchanged (a negative control)."""
        return ComboRow(self.kind, self.c, self.cbar, self.h, self.q_star, self.q)

    def to_dict(self) -> dict:
        if self.kind == "A":
            return {"name": self.name, "A": self.c.label, "Q": self.q.label}
        return {
            "name": self.name,
            "C": self.c.label,
            "Cbar": self.cbar.label if self.cbar is not None else "same as C",
            "H": self.h.label,
            "Q": self.q.label,
            "Q*": self.qs.label if self.qs is not None else "same as Q",
        }


def _row_name(spec: EquationSpec) -> str:
    text = spec.family
    for f in spec.flags:
        text += "_" + (str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}")
    return text


def _c_row(c, cbar, h, q, qs):
    p = lambda s: parse_spec(s) if s else None  # noqa: E731
    return ComboRow("C", p(c), p(cbar), p(h), p(q), p(qs))


TYPE_C_ROWS = (
    _c_row("C3:1/2,1/2,0", "C3:1/2,0,1/2", "H3:d=1,e=1", "Q3:d=1", "Q3:d=0"),
    _c_row("C3:1/2,0,1/2", "C3:1/2,1/2,0", "H3:d=1,e=1;swap", "Q3:d=0", "Q3:d=1"),
    _c_row("C3:1,0,0", None, "H3:d=1,e=0", "Q3:d=0", None),
    _c_row("C3:0,0,0", None, "H3:d=0,e=0", "Q3:d=0", None),
    _c_row("C2:1,1,0", "C2:1,0,1", "H2:e=1", "Q2", "Q1:d=1"),
    _c_row("C2:1,0,1", "C2:1,1,0", "H2:e=1;swap", "Q1:d=1", "Q2"),
    _c_row("C2:1,0,0", None, "H2:e=0", "Q1:d=1", None),
    _c_row("C1:d=1", "C2:0,0,0", "H1:e=1", "Q1:d=1", "Q1:d=0"),
    _c_row("C2:0,0,0", "C1:d=1", "H1:e=1;swap", "Q1:d=0", "Q1:d=1"),
    _c_row("C1:d=0", None, "H1:e=0", "Q1:d=0", None),
)

# left pairing of the face-centered/ABS correspondence, elliptic pair last
TYPE_A_ROWS = tuple(ComboRow("A", parse_spec(a), q=parse_spec(q)) for a, q in (
    ("A3:d=1", "Q3:d=1"),
    ("A3:d=0", "Q3:d=0"),
    ("A2:1,1", "Q2"),
    ("A2:1,0", "Q1:d=1"),
    ("A2:0,0", "Q1:d=0"),
    ("A4", "Q4"),
))

ALL_ROWS = TYPE_C_ROWS + TYPE_A_ROWS


def combo_table(key) -> ComboRow:
    """Row by index into TYPE_C_ROWS + TYPE_A_ROWS, or by name ("C1_0"), label
    ("C2(1;0;1)") or equation id ("A2:1,1") of its first equation."""
    if isinstance(key, int) or (isinstance(key, str) and key.strip().isdigit()):
        i = int(key)
        if not 0 <= i < len(ALL_ROWS):
            raise UnknownRow(f"row index {i} out of range 0..{len(ALL_ROWS) - 1}")
        return ALL_ROWS[i]
    for row in ALL_ROWS:
        if key in (row.name, row.c.label, row.c.id):
            return row
    try:
        spec = parse_spec(key)
    except Exception as exc:
        raise UnknownRow(f"no combination row {key!r}") from exc
    for row in ALL_ROWS:
        if row.c == spec:
            return row
    raise UnknownRow(f"no combination row {key!r}")


# ---------------------------------------------------------------------------
# scenarios

@dataclass(frozen=True)
class Equation:
    eq: str
    args: tuple
    params: tuple

    @property
    def is_hex(self) -> bool:
        return self.eq in HEX_KINDS

    def text(self) -> str:
        return f"{self.eq}({','.join(self.args)};{','.join(self.params)})"


@dataclass(frozen=True)
class PrismSystem:
    """The eight-equation bundle of a hexagonal prism over two vertex tuples."""
    name: str
    bottom: tuple
    top: tuple
    params: tuple  # (p0, p1, p2) on the hexagons, p3 across

    def equations(self) -> dict:
        x, y = self.bottom, self.top
        al, be, ga, rh = self.params
        hp = (al, be, ga)
        return {
            "PX.a": Equation("hexA", x, hp),
            "PX.b": Equation("hexA", y, hp),
            "PQ.a": Equation("Q", (y[0], y[1], x[0], x[1]), (ga, rh)),
            "PQ.b": Equation("Q", (y[1], y[2], x[1], x[2]), (al, rh)),
            "PQ.c": Equation("Q", (y[2], y[3], x[2], x[3]), (be, rh)),
            "PQ.d": Equation("Q", (y[4], y[3], x[4], x[3]), (ga, rh)),
            "PQ.e": Equation("Q", (y[5], y[4], x[5], x[4]), (al, rh)),
            "PQ.f": Equation("Q", (y[0], y[5], x[0], x[5]), (be, rh)),
        }


@dataclass(frozen=True)
class PlanItem:
    step: str
    label: str
    equation: Equation
    solve: tuple = ()  # empty for a check

    @property
    def is_check(self) -> bool:
        return not self.solve


@dataclass(frozen=True)
class PolytopeScenario:
    shape: str
    kind: str
    parameters: tuple
    initial: tuple
    plan: tuple
    vertices: tuple
    faces: dict = field(default_factory=dict)
    prisms: dict = field(default_factory=dict)

    @property
    def unknowns(self) -> tuple:
        return tuple(v for v in self.vertices if v not in self.initial)

    def checks(self) -> list:
        return [p for p in self.plan if p.is_check]

    def to_dict(self) -> dict:
        return {
            "shape": self.shape,
            "kind": self.kind,
            "parameters": list(self.parameters),
            "initial": list(self.initial),
            "unknowns": len(self.unknowns),
            "plan": [{"step": p.step, "label": p.label, "equation": p.equation.text(),
                      "solve": list(p.solve)} for p in self.plan],
        }


def scenario_names() -> list:
    return list(SHAPES)


def load_scenario(name_or_path) -> PolytopeScenario:
    """Load a scenario by shape name (``cato``) or YAML path and audit it."""
    key = str(name_or_path).lower()
    if key in SHAPES:
        text = resources.files("hexeq").joinpath(f"data/scenarios/{SHAPES[key]}").read_text()
    else:
        path = Path(name_or_path)
        if not path.exists():
            raise ConfigError(f"unknown polytope shape {name_or_path!r}; choose from {', '.join(SHAPES)}")
        text = path.read_text()
    return scenario_from_dict(yaml.safe_load(text))


def _equation(d: dict) -> Equation:
    if d["eq"] not in HEX_KINDS + QUAD_KINDS:
        raise ConfigError(f"unknown equation kind {d['eq']!r}")
    return Equation(d["eq"], tuple(d["args"]), tuple(d["params"]))


def scenario_from_dict(data: dict) -> PolytopeScenario:
    """Build and audit a scenario; malformed input raises ConfigError."""
    try:
        return _scenario_from_dict(data)
    except (KeyError, TypeError, AttributeError) as exc:
        raise ConfigError(f"malformed scenario: {type(exc).__name__}: {exc}") from exc


def _scenario_from_dict(data: dict) -> PolytopeScenario:
    params = tuple(data["parameters"])
    for p in params:
        if p not in PARAM_NAMES:
            raise ConfigError(f"unknown parameter {p!r}")
    initial = tuple(data["initial"])
    prisms = {}
    if "prisms" in data:
        tuples = {k: tuple(v) for k, v in data["tuples"].items()}
        for name, p in data["prisms"].items():
            prisms[name] = PrismSystem(name, tuples[p["bottom"]], tuples[p["top"]], tuple(p["params"]))
    plan = []
    known = set(initial)
    for step in data["steps"]:
        sname = str(step["name"])
        for d in step.get("equations", ()):
            eq = _equation(d)
            solve = tuple(d.get("solve", ()))
            if bool(solve) == bool(d.get("check", False)):
                raise ConfigError(f"step {sname}: {eq.text()} must either solve or check")
            plan.append(PlanItem(sname, eq.text(), eq, solve))
        for pname in step.get("propagate", ()):
            for item in _propagation_plan(sname, prisms[pname], known):
                plan.append(item)
                known.update(item.solve)
        for d in step.get("checks", ()):
            eqs = prisms[d["prism"]].equations()
            for row in d["rows"]:
                plan.append(PlanItem(sname, f"{d['prism']}:{row}", eqs[row]))
        for item in plan:
            known.update(item.solve)
    if prisms:
        # every equation of every prism is evaluated once everything is known
        for pname, prism in prisms.items():
            for row, eq in prism.equations().items():
                plan.append(PlanItem("audit", f"{pname}:{row}", eq))
    vertices = []
    for item in plan:
        for a in item.equation.args:
            if a not in vertices:
                vertices.append(a)
    scenario = PolytopeScenario(str(data["shape"]), str(data["kind"]), params, initial,
                                tuple(plan), tuple(sorted(vertices)), dict(data.get("faces", {})),
                                prisms)
    audit_scenario(scenario)
    return scenario


def _solvable(eq: Equation, known) -> tuple | None:
    """Unknowns ``eq`` can determine given ``known``, or None."""
    missing = tuple(a for a in eq.args if a not in known)
    if eq.is_hex:
        if len(missing) == 1:
            return missing
        if len(missing) == 2 and is_consecutive([a if a in known else None for a in eq.args]) is not None:
            return missing
        return None
    return missing if len(missing) == 1 else None


def _propagation_plan(step: str, prism: PrismSystem, known: set) -> list:
    """Solve a prism by repeatedly using an equation that determines
    something: quads first, then hexagons with one unknown, then hexagon
    pairs.  The unused equations become checks."""
    known = set(known)
    eqs = prism.equations()
    used, plan = set(), []
    while True:
        options = []
        for row, eq in eqs.items():
            solve = _solvable(eq, known) if row not in used else None
            if solve:
                options.append((eq.is_hex, len(solve), row, solve))
        if not options:
            break
        _, _, row, solve = min(options)
        plan.append(PlanItem(step, f"{prism.name}:{row}", eqs[row], solve))
        known.update(solve)
        used.add(row)
    stuck = [v for v in prism.bottom + prism.top if v not in known]
    if stuck:
        raise ConfigError(f"prism {prism.name} cannot be completed; unknown {stuck}")
    plan.extend(PlanItem(step, f"{prism.name}:{row}", eq) for row, eq in eqs.items() if row not in used)
    return plan


def audit_scenario(scenario: PolytopeScenario) -> dict:
    """Structural audit: each solve has exactly its unknowns missing, each
    unknown is solved once, checks only see known values, and initial plus
    solved vertices cover the polytope."""
    known = set(scenario.initial)
    solved = []
    for item in scenario.plan:
        eq = item.equation
        missing = tuple(a for a in eq.args if a not in known)
        where = f"{scenario.shape} step {item.step} {item.label}"
        if item.is_check:
            if missing:
                raise ConfigError(f"{where}: check sees unknowns {missing}")
            continue
        if set(missing) != set(item.solve) or _solvable(eq, known) is None:
            raise ConfigError(f"{where}: cannot solve {item.solve} (missing {missing})")
        solved.extend(item.solve)
        known.update(item.solve)
    if len(solved) != len(set(solved)):
        raise ConfigError(f"{scenario.shape}: a vertex is solved twice")
    if set(solved) & set(scenario.initial):
        raise ConfigError(f"{scenario.shape}: an initial vertex is solved")
    if known != set(scenario.vertices):
        raise ConfigError(f"{scenario.shape}: vertices never determined: {sorted(set(scenario.vertices) - known)}")
    if scenario.faces:
        hexes = len({frozenset(p.equation.args) for p in scenario.plan if p.equation.is_hex})
        quads = len({frozenset(p.equation.args) for p in scenario.plan if not p.equation.is_hex})
        if (hexes, quads) != (scenario.faces.get("hex"), scenario.faces.get("quad")):
            raise ConfigError(f"{scenario.shape}: face count {hexes}+{quads} does not match the declaration")
        if len(scenario.plan) != hexes + quads:
            raise ConfigError(f"{scenario.shape}: a face is used twice")
    return {"solved": len(solved), "checks": len(scenario.checks()), "vertices": len(scenario.vertices)}


# ---------------------------------------------------------------------------
# execution

def check_legal(scenario: PolytopeScenario, combo: ComboRow):
    if combo.kind != scenario.kind:
        raise IllegalCombo(f"{scenario.shape} needs a type-{scenario.kind} row, got {combo.name}")
    table = TYPE_C_ROWS if combo.kind == "C" else TYPE_A_ROWS
    if combo not in table:
        raise IllegalCombo(f"{combo.to_dict()} is not a listed row")
    if combo.kind == "A" and any(p.equation.eq in ("H", "Ht") for p in scenario.plan):
        raise IllegalCombo(f"{scenario.shape} has type-H faces but {combo.name} is type-A")


class _Evaluator:
    def __init__(self, combo: ComboRow, ctx, allow_illegal: bool):
        self.combo = combo
        self.ctx = ctx
        self.system = combo.system(ctx, allow_unlisted=allow_illegal)
        self.systems = {"hexA": self.system, "hexC": self.system, "hexCbar": self.system.swapped()}
        self.numeric = combo.domain == "elliptic"

    def quad(self, eq: Equation, vals, ps):
        a, b = ps
        if eq.eq == "Q":
            return eval_quad(self.combo.q, vals, a, b, self.ctx)
        if eq.eq == "Qs":
            return eval_quad(self.combo.q_star, vals, a, b, self.ctx)
        if eq.eq == "H":
            return eval_quad(self.combo.h, vals, a, b, self.ctx)
        return trapezoidal(self.combo.h, vals, a, b, self.ctx)

    def quad_relative(self, eq: Equation, vals, ps) -> float:
        vals = list(vals)
        u = vals[0]

        def f(t):
            vals[0] = t
            return self.quad(eq, vals, ps)

        lin, m = linear_parts(f, numeric=True)
        scale = abs(lin * u) + abs(m)
        value = lin * u + m
        return abs(value) / scale if scale else abs(value)

    def solve(self, eq: Equation, unknowns, values: dict, ps):
        vals = [values.get(a) for a in eq.args]
        if eq.is_hex:
            if len(unknowns) == 2:
                i = is_consecutive(vals)
                x1, x2 = hex_solve_pair(self.systems[eq.eq], i, vals, ps)
                return {eq.args[(i - 2) % 6]: x1, eq.args[(i - 1) % 6]: x2}
            k = eq.args.index(unknowns[0])
            system = self.systems[eq.eq]
            row = next(r for r in system.rows if k in r.corners)
            return {unknowns[0]: solve_corner(system, row, k, vals, ps)}
        k = eq.args.index(unknowns[0])

        def f(u):
            vals[k] = u
            return self.quad(eq, vals, ps)

        return {unknowns[0]: solve_linear(f, self.numeric, where=eq.text())}

    def residuals(self, eq: Equation, values: dict, ps) -> list:
        """Exact values, or relative residuals in the elliptic case."""
        vals = [values[a] for a in eq.args]
        if eq.is_hex:
            system = self.systems[eq.eq]
            if self.numeric:
                return [relative_residual(system, r, vals, ps) for r in system.rows]
            return [system.eval_row(r, vals, ps) for r in system.rows]
        if self.numeric:
            return [self.quad_relative(eq, vals, ps)]
        return [self.quad(eq, vals, ps)]


def _param_combos(scenario: PolytopeScenario, elliptic: bool = False) -> list:
    """Integer combinations of the parameters that must not vanish: all
    {-1,0,1} combinations plus those entering the hexagon rows."""
    n = len(scenario.parameters)
    if elliptic:
        # complex draws cannot avoid hundreds of small combinations at once
        combos = {c for c in itertools.product((-1, 0, 1), repeat=n) if 0 < sum(map(abs, c)) <= 2}
    else:
        combos = {c for c in itertools.product((-1, 0, 1), repeat=n) if any(c)}
    rows = HexSystem.type_a("A2:0,0").rows + HexSystem.type_c("C1:d=0", "C1:d=0").rows
    for item in scenario.plan:
        if not item.equation.is_hex:
            continue
        idx = [scenario.parameters.index(p) for p in item.equation.params]
        for row in rows:
            for vec in row.params:
                full = [0] * n
                for k, j in zip(vec, idx):
                    full[j] += k
                if any(full):
                    combos.add(tuple(full))
    return sorted(c for c in combos if next(k for k in c if k) > 0)


def _draw_params(sampler: Sampler, domain: str, n: int, combos):
    """Parameters from a wider range than the single-equation sampler, so that
    six of them avoid every listed combination without exhausting the guard."""
    rng = sampler.rng

    def one():
        if domain == "elliptic":
            return complex(rng.uniform(0.1, 0.9), rng.uniform(-0.2, 0.2))
        while True:
            v = mpq(rng.randint(-30, 30), rng.randint(1, 30))
            if domain == "hyperbolic":
                v = abs(v)
                if v not in (0, 1):
                    return HypParam(v)
            elif v:
                return v

    def guard(ps):
        return all(not is_zero(combine(c, ps), domain) for c in combos)

    return sampler.guarded(lambda: [one() for _ in range(n)], guard)


def _trial(scenario, combo, seed, t, combos, allow_illegal, report, prefix):
    stream = f"polytope:{scenario.shape}:{combo.name}"
    resamples = 0
    for attempt in range(MAX_ATTEMPTS):
        sampler = Sampler(trial_rng(seed, t, f"{stream}:{attempt}"))
        ctx = EllipticContext(*sampler.elliptic_invariants()) if combo.domain == "elliptic" else None
        ev = _Evaluator(combo, ctx, allow_illegal)
        pvals = _draw_params(sampler, combo.domain, len(scenario.parameters), combos)
        pmap = dict(zip(scenario.parameters, pvals))
        values = dict(zip(scenario.initial, sampler.variables(combo.domain, len(scenario.initial))))
        results = []
        try:
            for idx, item in enumerate(scenario.plan):
                ps = tuple(pmap[p] for p in item.equation.params)
                if item.solve:
                    try:
                        values.update(ev.solve(item.equation, item.solve, values, ps))
                    except ZeroDivisionError as exc:
                        raise SingularSolve(str(exc), item.label) from exc
                    if item.equation.is_hex:
                        # the hexagon used to solve must be consistent on all rows
                        results.append((f"{item.step}:{item.label}:cah", item,
                                        ev.residuals(item.equation, values, ps)))
                else:
                    results.append((f"{item.step}:{item.label}", item,
                                    ev.residuals(item.equation, values, ps)))
        except SingularSolve as exc:
            resamples += sampler.resamples + 1
            last = SingularSolve(f"{scenario.shape} step {item.step} ({idx}) {item.label}: {exc}",
                                 where=idx)
            continue
        resamples += sampler.resamples
        detail = {"trial": t, "params": pvals}
        for cid, item, res in results:
            for r in res:
                if ev.numeric:
                    report.record_numeric(f"{prefix}:{cid}", r, ELLIPTIC_TOL, detail)
                else:
                    report.record_exact(f"{prefix}:{cid}", r, detail)
        return resamples
    raise last


def run_polytope(scenario, combo, trials: int = 50, seed: int = 0,
                 report: ConsistencyReport | None = None, allow_illegal: bool = False) -> ConsistencyReport:
    """Execute the scenario's plan ``trials`` times and record every check."""
    scenario = load_scenario(scenario) if not isinstance(scenario, PolytopeScenario) else scenario
    combo = combo_table(combo) if not isinstance(combo, ComboRow) else combo
    if not allow_illegal:
        check_legal(scenario, combo)
    elif combo.kind != scenario.kind:
        raise IllegalCombo(f"{scenario.shape} needs a type-{scenario.kind} row")
    report = report or ConsistencyReport("check polytope", {
        "shape": scenario.shape, "combo": combo.to_dict(), "trials": trials, "seed": seed})
    prefix = f"{scenario.shape}:{combo.name}"
    combos = _param_combos(scenario, combo.domain == "elliptic")
    total = 0
    for t in range(trials):
        total += _trial(scenario, combo, seed, t, combos, allow_illegal, report, prefix)
    first = next((k for k in report.entries if k.startswith(prefix + ":")), None)
    if first is not None:
        report.add_resamples(first, total)
    report.note(f"{prefix}:structure", audit_scenario(scenario))
    if combo.domain == "elliptic":
        report.note("elliptic_sampling", ELLIPTIC_POLICY)
    return report


def negative_control(scenario, combo, trials: int = 5, seed: int = 0,
                     report: ConsistencyReport | None = None) -> ConsistencyReport:
    """Run with Q and Q* exchanged; some check must then fail."""
    scenario = load_scenario(scenario) if not isinstance(scenario, PolytopeScenario) else scenario
    combo = combo_table(combo) if not isinstance(combo, ComboRow) else combo
    report = report or ConsistencyReport("check polytope", {"shape": scenario.shape, "control": True})
    cid = f"{scenario.shape}:{combo.name}:exchanged-fails"
    if combo.q == combo.q_star:
        report.note(cid, "Q and Q* coincide; exchange is the identity")
        return report
    if not any(p.equation.eq in ("Q", "Qs") for p in scenario.plan):
        report.note(cid, f"{scenario.shape} has no Q or Q* faces; exchange is the identity")
        return report
    inner = run_polytope(scenario, combo.exchanged(), trials, seed, allow_illegal=True)
    failed = [e for e in inner.entries.values() if e.failures]
    report.record_bool(cid, bool(failed), {"failing_checks": len(failed)})
    return report
