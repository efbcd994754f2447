"""Hexagonal lattice in brick-wall coordinates and its evolution by hex solves.

Vertices are integer pairs (r, c).  Horizontal edges join (r, c) and
(r, c + 1); a vertical edge joins (r, c) and (r + 1, c) when r + c is even.
The hexagonal face anchored at (r, c), r + c even, has vertices

    a = (r, c), b = (r + 1, c), c = (r + 1, c + 1),
    d = (r + 1, c + 2), e = (r, c + 2), f = (r, c + 1)

so that its edges read (gamma, alpha, beta, gamma, alpha, beta) cyclically
from a-b.  Vertical edges carry gamma, horizontal edges (r, k)-(r, k + 1)
carry beta when r + k is even and alpha otherwise.  The default evolution
step solves (c, d) from (a, b, e, f), i.e. in the beta direction.
"""
from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field
from importlib import resources

import yaml

from .errors import (ConfigError, GuardExhausted, HexeqError, PatternTooSmall,
                     SingularSolve, Stalled)
from .hexsys import HexSystem, hex_solve_pair, is_consecutive
from .report import ConsistencyReport, write_atomic
from .sampling import MAX_ATTEMPTS, Sampler, trial_rng
from .scalar import rat_str

MAX_SIZE = 64
PATTERNS = ("staircase", "corner", "column", "row", "explicit")
EDGE_LABELS = ("gamma", "alpha", "beta", "gamma", "alpha", "beta")


def face_vertices(r: int, c: int) -> tuple:
    return ((r, c), (r + 1, c), (r + 1, c + 1), (r + 1, c + 2), (r, c + 2), (r, c + 1))


def edge_param(u, v) -> str:
    """Parameter name carried by the lattice edge u-v."""
    (r1, c1), (r2, c2) = sorted((u, v))
    if c1 == c2 and r2 == r1 + 1 and (r1 + c1) % 2 == 0:
        return "gamma"
    if r1 == r2 and c2 == c1 + 1:
        return "beta" if (r1 + c1) % 2 == 0 else "alpha"
    raise HexeqError(f"{u} and {v} are not adjacent")


def rectangle_faces(rows: int, cols: int) -> list:
    return [(r, 2 * j + r % 2) for r in range(rows) for j in range(cols)]


def _staircase_start(rows: int, r: int) -> int:
    # one row down every three columns; parity keeps r + c even
    return 3 * (rows - 1 - r) + (rows - 1) % 2


def staircase_faces(rows: int, cols: int) -> list:
    """Faces determined by a staircase of ``rows`` steps, at most ``cols`` per row."""
    return [(r, _staircase_start(rows, r) + 2 * j)
            for r in range(rows) for j in range(min(r + 1, cols))]


def staircase_known(rows: int) -> set:
    known = set()
    for r in range(rows):
        c = _staircase_start(rows, r)
        known |= {(r, c), (r + 1, c), (r, c + 1), (r, c + 2), (r, c + 3)}
    return known


# pattern -> pair of each face that the pattern leaves unknown
_SOLVED_PAIR = {
    "corner": lambda r, c: ((r + 1, c + 1), (r + 1, c + 2)),
    "column": lambda r, c: ((r + 1, c + 2), (r, c + 2)),
    "row": lambda r, c: ((r + 1, c + 1), (r + 1, c + 2)) if r % 2 == 0 else ((r + 1, c), (r + 1, c + 1)),
}


def pattern_layout(kind: str, rows: int, cols: int, known=None):
    """(faces, known vertex set) for an initial value pattern."""
    if not (1 <= rows <= MAX_SIZE and 1 <= cols <= MAX_SIZE):
        raise ConfigError(f"lattice size must be within 1..{MAX_SIZE}")
    if kind == "staircase":
        faces = staircase_faces(rows, cols)
        verts = {v for f in faces for v in face_vertices(*f)}
        return faces, staircase_known(rows) & verts
    faces = rectangle_faces(rows, cols)
    verts = {v for f in faces for v in face_vertices(*f)}
    if kind == "explicit":
        if known is None:
            raise ConfigError("explicit pattern needs a known set")
        return faces, {tuple(v) for v in known} & verts
    if kind not in _SOLVED_PAIR:
        raise ConfigError(f"unknown pattern {kind!r}")
    solved = {v for f in faces for v in _SOLVED_PAIR[kind](*f)}
    return faces, verts - solved


def pattern_fixture() -> dict:
    """Transcribed known sets for small instances, kept for auditing."""
    text = resources.files("hexeq").joinpath("data/patterns.yaml").read_text()
    return yaml.safe_load(text)


@dataclass(frozen=True)
class IvpSpec:
    kind: str = "staircase"
    rows: int = 8
    cols: int = 8
    seed: int = 0
    known: tuple | None = None  # explicit known vertices

    def __post_init__(self):
        if self.kind not in PATTERNS:
            raise ConfigError(f"unknown pattern {self.kind!r}; choose from {', '.join(PATTERNS)}")


@dataclass
class HexLattice:
    ivp: IvpSpec
    faces: list
    params: tuple
    values: dict = field(default_factory=dict)  # vertex -> value or None
    initial: frozenset = frozenset()
    solved_by: dict = field(default_factory=dict)  # vertex -> face
    attempt: int = 0

    @property
    def vertices(self) -> list:
        return sorted(self.values)

    @property
    def unknown(self) -> list:
        return [v for v in self.vertices if self.values[v] is None]

    def face_values(self, face) -> list:
        return [self.values[v] for v in face_vertices(*face)]

    def copy(self) -> "HexLattice":
        return HexLattice(self.ivp, list(self.faces), self.params, dict(self.values),
                          self.initial, dict(self.solved_by), self.attempt)

    def frontier(self) -> list:
        out = []
        for f in self.faces:
            known = sum(v is not None for v in self.face_values(f))
            if 0 < known < 6:
                out.append({"face": list(f), "known": known})
        return out

    def to_dict(self, system: HexSystem | None = None, face_ok: dict | None = None) -> dict:
        names = ("alpha", "beta", "gamma")
        out = {
            "pattern": self.ivp.kind,
            "rows": self.ivp.rows,
            "cols": self.ivp.cols,
            "seed": self.ivp.seed,
            "system": system.name if system is not None else None,
            "parameter_map": {"vertical": "gamma", "horizontal r+c even": "beta",
                              "horizontal r+c odd": "alpha"},
            "parameters": {n: _text(p) for n, p in zip(names, self.params)},
            "vertices": [{"row": r, "col": c, "value": _text(self.values[(r, c)]),
                          "initial": (r, c) in self.initial} for r, c in self.vertices],
            "faces": [],
        }
        for f in self.faces:
            entry = {"row": f[0], "col": f[1]}
            if face_ok is not None:
                entry["residual_zero"] = face_ok.get(f)
            out["faces"].append(entry)
        return out

    def to_json(self, system=None, face_ok=None) -> str:
        return json.dumps(self.to_dict(system, face_ok), indent=2, ensure_ascii=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row", "col", "value"])
        for r, c in self.vertices:
            w.writerow([r, c, _text(self.values[(r, c)])])
        return buf.getvalue()


def _text(v):
    if v is None:
        return None
    if hasattr(v, "expv"):
        return {"exp": rat_str(v.expv)}
    return rat_str(v)


def _check_face_labels(faces):
    for f in faces:
        vs = face_vertices(*f)
        labels = tuple(edge_param(vs[k], vs[(k + 1) % 6]) for k in range(6))
        if labels != EDGE_LABELS:
            raise HexeqError(f"face {f} carries {labels}")


def init_lattice(ivp: IvpSpec, system: HexSystem, params=None, attempt: int = 0) -> HexLattice:
    """Sample values on the pattern's known vertices; everything else unknown."""
    if system.domain == "elliptic":
        raise ConfigError("lattice evolution runs in exact arithmetic only")
    faces, known = pattern_layout(ivp.kind, ivp.rows, ivp.cols, ivp.known)
    _check_face_labels(faces)
    if not any(sum(v in known for v in face_vertices(*f)) == 4 for f in faces):
        raise PatternTooSmall("no face starts with four known vertices")
    sampler = Sampler(trial_rng(ivp.seed, attempt, "lattice"))
    if params is None:
        params = tuple(sampler.params(system.domain))
    values = {v: None for f in faces for v in face_vertices(*f)}
    for v in sorted(known):
        values[v] = sampler.rational()
    return HexLattice(ivp, faces, tuple(params), values, frozenset(known), {}, attempt)


def _face_order(faces, order):
    if order in (None, "forward"):
        return list(faces)
    if order == "reverse":
        return list(reversed(faces))
    if isinstance(order, int):
        out = list(faces)
        random.Random(order).shuffle(out)
        return out
    raise ConfigError(f"unknown face order {order!r}")


def _step(lattice: HexLattice, system: HexSystem, order) -> int:
    """One pass over the faces; returns the number of faces solved."""
    solved = 0
    for f in _face_order(lattice.faces, order):
        vals = lattice.face_values(f)
        i = is_consecutive(vals)
        if i is None:
            continue
        try:
            x1, x2 = hex_solve_pair(system, i, vals, lattice.params)
        except SingularSolve as exc:
            raise SingularSolve(f"face {f}: {exc}", where=f) from exc
        vs = face_vertices(*f)
        for k, x in (((i - 2) % 6, x1), ((i - 1) % 6, x2)):
            lattice.values[vs[k]] = x
            lattice.solved_by[vs[k]] = f
        solved += 1
    return solved


def run_evolution(lattice: HexLattice, system: HexSystem, order=None) -> HexLattice:
    """Fill all unknowns by repeated hex solves; raises Stalled if stuck."""
    out = lattice.copy()
    while out.unknown:
        if not _step(out, system, order):
            raise Stalled(f"{len(out.unknown)} vertices left and no face has four consecutive knowns",
                          out.frontier())
    return out


def verify_lattice(lattice: HexLattice, system: HexSystem, report: ConsistencyReport) -> dict:
    """Six residuals per face and every second determination of a solved vertex."""
    face_ok = {}
    skipped = 0
    for f in lattice.faces:
        vals = lattice.face_values(f)
        ok = True
        for row in system.rows:
            ok &= report.record_exact("lattice:face-residuals", system.eval_row(row, vals, lattice.params),
                                      {"face": list(f), "row": row.role})
        face_ok[f] = ok
    for v, solver in sorted(lattice.solved_by.items()):
        for f in lattice.faces:
            vs = face_vertices(*f)
            if f == solver or v not in vs:
                continue
            k = vs.index(v)
            vals = lattice.face_values(f)
            # determine v together with its successor (or predecessor) from the other four
            try:
                x, _ = hex_solve_pair(system, (k + 2) % 6, vals, lattice.params)
            except SingularSolve:
                try:
                    _, x = hex_solve_pair(system, (k + 1) % 6, vals, lattice.params)
                except SingularSolve:
                    skipped += 1
                    continue
            report.record_exact("lattice:cross-face", x - lattice.values[v],
                                {"vertex": list(v), "face": list(f)})
    if skipped:
        report.note("cross_face_singular_skipped", skipped)
    return face_ok


def evolve(lattice: HexLattice, system: HexSystem, report: ConsistencyReport | None = None,
           orders=("forward", "reverse")):
    """Evolve under two face orders, check they agree, verify the result.

    A sample that runs into a singular solve is redrawn (bounded), as the
    initial values are generic only with high probability.
    Returns (completed lattice, report, per-face residual flags).
    """
    report = report or ConsistencyReport("evolve", {"pattern": lattice.ivp.kind, "rows": lattice.ivp.rows,
                                                    "cols": lattice.ivp.cols, "seed": lattice.ivp.seed,
                                                    "system": system.name})
    current = lattice
    for attempt in range(MAX_ATTEMPTS):
        try:
            runs = [run_evolution(current, system, order) for order in orders]
            break
        except SingularSolve:
            report.add_resamples("lattice:dual-order", 1)
            current = init_lattice(lattice.ivp, system, lattice.params, attempt=current.attempt + 1)
    else:
        raise GuardExhausted("no nonsingular lattice sample")
    first = runs[0]
    for other, order in zip(runs[1:], orders[1:]):
        same = all(first.values[v] == other.values[v] for v in first.values)
        report.record_bool("lattice:dual-order", same, {"order": str(order)})
    face_ok = verify_lattice(first, system, report)
    report.note("unknowns_filled", len(first.values) - len(first.initial))
    return first, report, face_ok


def write_lattice(lattice: HexLattice, path: str, system=None, face_ok=None, csv_path: str | None = None):
    write_atomic(path, lattice.to_json(system, face_ok) + "\n")
    if csv_path:
        write_atomic(csv_path, lattice.to_csv())
